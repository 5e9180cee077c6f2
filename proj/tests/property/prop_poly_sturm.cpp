#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "su2e/sturm.hpp"

using namespace su2e;

namespace {

using Gen = std::mt19937_64;
constexpr mpfr_prec_t P = 256;

std::vector<Rational> expand_roots(const Rational& lead, const std::vector<Rational>& roots) {
    std::vector<Rational> c = {lead};
    for (const auto& r : roots) {
        std::vector<Rational> n(c.size() + 1, 0);
        for (size_t k = 0; k < c.size(); ++k) {
            n[k + 1] += c[k];
            n[k] -= r * c[k];
        }
        c = n;
    }
    return c;
}

IntervalPoly to_poly(const std::vector<Rational>& c, mpfr_prec_t prec = P) {
    std::vector<Ball> b;
    for (const auto& q : c) b.emplace_back(q, prec);
    return IntervalPoly(b, Basis::Monomial);
}

// what callers do with IndeterminateSign: double the precision, give up past 4096 bits
int count_escalating(const std::vector<Rational>& c, const Rational& a, const Rational& b) {
    for (mpfr_prec_t p = P;; p *= 2) {
        try {
            return count_roots(to_poly(c, p), a, b);
        } catch (const IndeterminateSign&) {
            if (p >= 4096) throw;
        }
    }
}

Rational rnd_q(Gen& g, int lo, int hi, int den) {
    std::uniform_int_distribution<int> u(lo * den, hi * den);
    Rational q(u(g), den);
    q.canonicalize();
    return q;
}

IntervalPoly random_cheb(Gen& g, int deg, const Rational& lo, const Rational& hi) {
    std::uniform_int_distribution<int> u(-50, 50);
    std::vector<Ball> c;
    for (int k = 0; k <= deg; ++k) c.emplace_back(Rational(u(g), 16), P);
    return IntervalPoly(c, Basis::Chebyshev, lo, hi);
}

}  // namespace

TEST_CASE("Sturm counts match constructed roots on 500 polynomials") {
    Gen g(11);
    std::uniform_int_distribution<int> deg(1, 8);
    int wrong = 0, undecided_exact = 0, undecided_sf = 0, squarefree = 0, repeated = 0;
    for (int n = 0; n < 500; ++n) {
        const int d = deg(g);
        // odd runs: dyadic roots, so every coefficient is exact at 256 bits
        const bool dyadic = n % 2 == 1;
        std::vector<Rational> roots;
        for (int k = 0; k < d; ++k) {
            if (k > 0 && g() % 5 == 0) roots.push_back(roots[g() % roots.size()]);
            else roots.push_back(rnd_q(g, -4, 4, dyadic ? 1 << (g() % 4) : 3 + static_cast<int>(g() % 5)));
        }
        std::vector<Rational> c = expand_roots(dyadic ? Rational(1 + g() % 4, 2) : rnd_q(g, 1, 3, 2), roots);
        if (d <= 6 && g() % 3 == 0) {  // times x^2 + 1
            std::vector<Rational> n2(c.size() + 2, 0);
            for (size_t k = 0; k < c.size(); ++k) {
                n2[k] += c[k];
                n2[k + 2] += c[k];
            }
            c = n2;
        }
        Rational a = rnd_q(g, -5, 4, 7), b = rnd_q(g, -4, 5, 7);
        if (a > b) std::swap(a, b);
        if (a == b) b += 1;
        if (n % 10 == 0 && !roots.empty()) b = roots[0];  // an endpoint on a root
        std::set<Rational> inside;
        for (const auto& r : roots)
            if (r > a && r <= b) inside.insert(r);
        const bool sf = std::set<Rational>(roots.begin(), roots.end()).size() == roots.size();
        const bool end_multiple = std::count(roots.begin(), roots.end(), b) > 1 || std::count(roots.begin(), roots.end(), a) > 1;
        (sf ? squarefree : repeated) += 1;
        try {
            const int got = count_escalating(c, a, b);
            if (got != static_cast<int>(inside.size())) {
                ++wrong;
                MESSAGE("n = " << n << " got " << got << " want " << inside.size());
            }
        } catch (const IndeterminateSign&) {
            if (dyadic && !end_multiple) ++undecided_exact;
            if (sf) ++undecided_sf;
        }
    }
    MESSAGE("squarefree " << squarefree << " (undecided " << undecided_sf << "), repeated " << repeated);
    CHECK(wrong == 0);
    CHECK(undecided_exact == 0);
    CHECK(undecided_sf * 10 <= squarefree);
}

TEST_CASE("certified sup bounds survive 10^4-point dense sampling") {
    Gen g(5);
    std::uniform_int_distribution<int> u(-40, 40);
    int checked = 0;
    for (int n = 0; n < 25; ++n) {
        const int dp = 1 + n % 6, dq = 2 * (n % 3);
        std::vector<Ball> pc, qc;
        for (int k = 0; k <= dp; ++k) pc.emplace_back(Rational(u(g), 8), P);
        // Q = 1 + 1/4 + (sum of positive even-power terms): no real roots
        qc.assign(dq + 1, Ball(0, P));
        qc[0] = Ball(Rational(5, 4), P);
        for (int k = 2; k <= dq; k += 2) qc[k] = Ball(Rational(std::abs(u(g)) + 1, 8), P);
        const IntervalPoly Pn(pc, Basis::Monomial), Qd(qc, Basis::Monomial);
        Rational a = rnd_q(g, -2, 1, 5), b = a + rnd_q(g, 1, 3, 4);
        SupOptions o;
        const SupBound s = bound_rational_sup(Pn, Qd, a, b, o);
        ++checked;
        double worst = 0;
        for (int k = 0; k <= 10000; ++k) {
            const Rational x = a + (b - a) * Rational(k, 10000);
            const Ball v = abs(Pn.eval(Ball(x, P)) / Qd.eval(Ball(x, P)));
            worst = std::max(worst, v.lower_d());
            REQUIRE(certainly_le(v, s.eps));
        }
        // sharp to about the search tolerance
        CHECK(s.eps.upper_d() <= worst * (1 + 4.0 / 1024) + 1e-100);
    }
    CHECK(checked == 25);
}

TEST_CASE("products of random Chebyshev polynomials contain pointwise products") {
    Gen g(3);
    const Rational lo(0), hi(9, 4);
    for (int n = 0; n < 100; ++n) {
        const auto p = random_cheb(g, 1 + n % 12, lo, hi);
        const auto q = random_cheb(g, 1 + (n * 7) % 9, lo, hi);
        const auto r = cheb_product(p, q);
        CHECK(r.degree() == p.degree() + q.degree());
        for (int k = 0; k < 100; ++k) {
            const Ball t(lo + (hi - lo) * Rational(k, 99), P);
            REQUIRE(r.eval(t).overlaps(p.eval(t) * q.eval(t)));
        }
    }
}

TEST_CASE("fits of degree-d polynomials recover the Chebyshev coefficients") {
    Gen g(4);
    for (int n = 0; n < 50; ++n) {
        const int d = n % 10;
        const auto p = random_cheb(g, d, -1, 1);
        for (int N : {d + 1, d + 5}) {
            std::vector<Ball> s;
            for (const auto& x : cheb_nodes(N, -1, 1, P)) s.push_back(p.eval(x));
            const auto f = cheb_fit(s, -1, 1);
            for (int k = 0; k < N; ++k) {
                const Rational want = k <= d ? to_rational(p.coeffs[k].mid()) : Rational(0);
                REQUIRE(f.coeffs[k].contains(want));
            }
        }
    }
}

TEST_CASE("integration and rescaling identities") {
    Gen g(6);
    const Rational lo(0), hi(9, 4);
    for (int n = 0; n < 50; ++n) {
        const auto p = random_cheb(g, 1 + n % 15, lo, hi);
        const auto I = cheb_integrate_zero_pinned(p);
        CHECK(I.coeffs[0].is_exact());
        const auto dI = derivative(I);
        const auto m = to_monomial_rescaled(p, Rational(1, 2));
        for (int k = 0; k <= 20; ++k) {
            const Rational t = lo + (hi - lo) * Rational(k, 20);
            REQUIRE(dI.eval(Ball(t, P)).overlaps(p.eval(Ball(t, P))));
            // P~(y) = P(rho y) in the reference variable x = (2t - lo - hi)/(hi - lo)
            const Rational x = (2 * t - lo - hi) / (hi - lo);
            REQUIRE(m.eval(Ball(x / Rational(1, 2), P)).overlaps(p.eval(Ball(t, P))));
        }
    }
}
