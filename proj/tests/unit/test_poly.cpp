#include "helpers.hpp"
#include "su2e/poly.hpp"

using namespace su2e;
using th::B;
using th::P;

namespace {

IntervalPoly cheb(std::vector<long> c, Rational lo = -1, Rational hi = 1) {
    std::vector<Ball> b;
    for (long v : c) b.emplace_back(v, P);
    return IntervalPoly(b, Basis::Chebyshev, lo, hi);
}

bool encloses(const IntervalPoly& p, const std::vector<Rational>& want) {
    for (size_t k = 0; k < std::max(want.size(), p.coeffs.size()); ++k) {
        const Rational w = k < want.size() ? want[k] : Rational(0);
        if (k >= p.coeffs.size()) {
            if (w != 0) return false;
            continue;
        }
        if (!p.coeffs[k].contains(w)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("fit of the constant 1") {
    for (int N : {1, 2, 5, 17}) {
        std::vector<Ball> s(N, B(1));
        const auto c = cheb_coefficients(s, P);
        CHECK(c[0].contains(Rational(2)));
        for (int j = 1; j < N; ++j) CHECK(c[j].contains(Rational(0)));
        const IntervalPoly p = cheb_fit(s, -1, 1);
        for (const char* x : {"-1", "-0.3", "0", "0.77", "1"}) CHECK(p.eval(B(x)).contains(Rational(1)));
    }
}

TEST_CASE("fit of T3 with 8 nodes") {
    const auto nodes = cheb_nodes(8, -1, 1, P);
    std::vector<Ball> s;
    for (const auto& x : nodes) s.push_back(B(4) * pow_ui(x, 3) - B(3) * x);
    const auto c = cheb_coefficients(s, P);
    for (int j = 0; j < 8; ++j) CHECK(c[j].contains(Rational(j == 3 ? 1 : 0)));
}

TEST_CASE("fit on a shifted domain interpolates at the nodes") {
    const Rational lo(0), hi(9, 4);
    const auto nodes = cheb_nodes(12, lo, hi, P);
    std::vector<Ball> s;
    for (const auto& t : nodes) s.push_back(exp(t));
    const IntervalPoly p = cheb_fit(s, lo, hi);
    for (size_t k = 0; k < nodes.size(); ++k) CHECK(p.eval(nodes[k]).overlaps(s[k]));
}

TEST_CASE("Chebyshev products") {
    SUBCASE("T1 T1 = (T2 + T0)/2") {
        const auto r = cheb_product(cheb({0, 1}), cheb({0, 1}));
        CHECK(encloses(r, {Rational(1, 2), 0, Rational(1, 2)}));
    }
    SUBCASE("T2 T3 = (T5 + T1)/2") {
        const auto r = cheb_product(cheb({0, 0, 1}), cheb({0, 0, 0, 1}));
        CHECK(encloses(r, {0, Rational(1, 2), 0, 0, 0, Rational(1, 2)}));
        CHECK(r.degree() == 5);
    }
    SUBCASE("p 1 = p") {
        const auto p = cheb({3, -1, 4, 1, -5});
        const auto r = cheb_product(p, cheb({1}));
        CHECK(encloses(r, {3, -1, 4, 1, -5}));
    }
    SUBCASE("domains must agree") {
        CHECK_THROWS_AS(cheb_product(cheb({1}, 0, 1), cheb({1}, 0, 2)), DomainMismatch);
    }
}

TEST_CASE("zero-pinned integration") {
    SUBCASE("0 integrates to 0") {
        const auto r = cheb_integrate_zero_pinned(cheb({0}, 0, 1));
        for (const auto& c : r.coeffs) CHECK(c.contains(Rational(0)));
        CHECK(r.eval(B("0.6")).contains(Rational(0)));
    }
    SUBCASE("1 on [0,1] integrates to t") {
        const auto r = cheb_integrate_zero_pinned(cheb({1}, 0, 1));
        CHECK(r.basis == Basis::Monomial);
        CHECK(r.coeffs[0].is_exact());
        CHECK(r.coeffs[0].contains(Rational(0)));
        CHECK(encloses(r, {0, 1}));
    }
    SUBCASE("derivative re-encloses the integrand") {
        const auto p = cheb({2, -1, 3, 0, 1}, 0, Rational(9, 4));
        const auto I = cheb_antiderivative(p);
        CHECK(I.eval(B(0)).contains(Rational(0)));
        const auto d = derivative(I);
        for (int k = 0; k <= p.degree(); ++k) CHECK(d.coeffs[k].overlaps(p.coeffs[k]));
        const auto m = cheb_integrate_zero_pinned(p);
        const auto dm = derivative(m);
        for (const char* t : {"0", "0.5", "1.7", "2.25"}) CHECK(dm.eval(B(t)).overlaps(p.eval(B(t))));
    }
}

TEST_CASE("integrating the fit of a polynomial derivative recovers the polynomial") {
    // q(t) = t - 2 t^3 + t^5 / 5 on [0, 2], fitted through q' at 9 nodes
    const Rational lo(0), hi(2);
    const auto nodes = cheb_nodes(9, lo, hi, P);
    std::vector<Ball> s;
    for (const auto& t : nodes) s.push_back(B(1) - B(6) * sqr(t) + pow_ui(t, 4));
    const auto q = cheb_integrate_zero_pinned(cheb_fit(s, lo, hi));
    CHECK(encloses(q, {0, 1, 0, -2, 0, Rational(1, 5)}));
}

TEST_CASE("monomial conversion and rescaling") {
    SUBCASE("T2 at rho = 1 is 2x^2 - 1") {
        const auto m = to_monomial_rescaled(cheb({0, 0, 1}), 1);
        CHECK(m.basis == Basis::Monomial);
        CHECK(encloses(m, {-1, 0, 2}));
    }
    SUBCASE("x at rho = 1/2 is y/2") {
        const IntervalPoly x({B(0), B(1)}, Basis::Monomial);
        CHECK(encloses(to_monomial_rescaled(x, Rational(1, 2)), {0, Rational(1, 2)}));
    }
    SUBCASE("conversion commutes with evaluation") {
        const auto p = cheb({1, -2, 3, 5, -1, 2}, 0, 3);
        const auto m = cheb_to_monomial_t(p);
        for (const char* t : {"0", "0.3", "1.5", "2.9", "3"}) CHECK(m.eval(B(t)).overlaps(p.eval(B(t))));
    }
}

TEST_CASE("polynomial JSON round trip") {
    const auto p = cheb({1, -2, 3}, 0, Rational(9, 4));
    const auto q = IntervalPoly::from_json(p.to_json(), P);
    CHECK(q.basis == Basis::Chebyshev);
    CHECK(q.hi == Rational(9, 4));
    for (int k = 0; k < 3; ++k) CHECK(q.coeffs[k].contains(p.coeffs[k]));
}

TEST_CASE("Chebyshev models carry truncation into delta") {
    const auto m = ChebModel::from_poly(cheb({1, 1, 1, 1}, 0, 1), 4);
    const auto sq = (m * m).truncated(3);
    CHECK(sq.degree() <= 3);
    CHECK(sq.delta > 0);
    const auto exact = m * m;
    for (const char* t : {"0", "0.25", "0.9"}) CHECK(sq.eval(B(t)).contains(exact.eval(B(t)).midpoint()));
    CHECK(static_cast<double>(m.norm_upper()) >= 4.0);
}
