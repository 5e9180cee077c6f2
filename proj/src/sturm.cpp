#include "su2e/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace su2e {

namespace {

bool is_zero_exact(const Ball& b) { return b.is_exact() && mpfr_zero_p(b.mid()); }

void strip(std::vector<Ball>& c) {
    while (!c.empty() && is_zero_exact(c.back())) c.pop_back();
}

// scale by 2^-e so the leading midpoint has magnitude in [1/2, 1)
void normalize(std::vector<Ball>& c) {
    if (c.empty() || mpfr_zero_p(c.back().mid())) return;
    const long e = mpfr_get_exp(c.back().mid());
    if (e == 0) return;
    for (auto& x : c) x = x.mul_2si(-e);
}

// -rem(A, B) with B's leading coefficient certified nonzero
std::vector<Ball> neg_rem(std::vector<Ball> A, const std::vector<Ball>& B) {
    const int n = static_cast<int>(B.size()) - 1;
    const Ball& lc = B.back();
    if (lc.contains_zero()) throw IndeterminateSign("leading coefficient straddles zero");
    const auto exact = [](const std::vector<Ball>& v) {
        return std::all_of(v.begin(), v.end(), [](const Ball& x) { return x.is_exact(); });
    };
    // exact inputs: pseudo-division by |lc| > 0 keeps them exact while precision lasts
    const bool pseudo = exact(A) && exact(B);
    const Ball s = abs(lc);
    const int sg = lc.sign();
    for (int k = static_cast<int>(A.size()) - 1; k >= n; --k) {
        if (is_zero_exact(A[k])) continue;
        if (pseudo) {
            const Ball q = sg > 0 ? A[k] : -A[k];
            for (int j = 0; j < k; ++j) A[j] *= s;
            for (int j = 0; j < n; ++j) A[k - n + j].submul(q, B[j]);
            long e = std::numeric_limits<long>::min();
            for (int j = 0; j < k; ++j)
                if (!mpfr_zero_p(A[j].mid())) e = std::max<long>(e, mpfr_get_exp(A[j].mid()));
            if (e != std::numeric_limits<long>::min() && e != 0)
                for (int j = 0; j < k; ++j) A[j] = A[j].mul_2si(-e);
        } else {
            const Ball q = A[k] / lc;
            for (int j = 0; j < n; ++j) A[k - n + j].submul(q, B[j]);
        }
        A[k] = Ball(A[k].prec());  // cancelled exactly by the choice of q
    }
    A.resize(std::max(n, 0));
    for (auto& x : A) x = -x;
    // the remainder's leading coefficient must be decidable
    while (!A.empty()) {
        if (is_zero_exact(A.back())) {
            A.pop_back();
            continue;
        }
        if (A.back().contains_zero()) {
            bool all = std::all_of(A.begin(), A.end(), [](const Ball& x) { return x.contains_zero(); });
            if (all) throw IndeterminateSign("remainder indistinguishable from zero");
            throw IndeterminateSign("remainder degree undecidable");
        }
        break;
    }
    return A;
}

Ball horner(const std::vector<Ball>& c, const Ball& x) {
    if (c.empty()) return Ball(x.prec());
    Ball r = c.back();
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
        Ball s = c[k];
        s.addmul(r, x);
        r = std::move(s);
    }
    return r;
}

int sign_of(const Ball& v) {
    if (is_zero_exact(v)) return 0;
    return v.sign();  // throws when undecidable
}

std::vector<Ball> with_prec(const std::vector<Ball>& c, mpfr_prec_t p) {
    std::vector<Ball> r;
    r.reserve(c.size());
    for (const auto& x : c) r.push_back(x.prec() >= p ? x : x.with_prec(p));
    return r;
}

}  // namespace

SturmChain sturm_chain(const IntervalPoly& P) {
    if (P.basis != Basis::Monomial) throw DomainMismatch("Sturm chains need the monomial basis");
    std::vector<Ball> p0 = P.coeffs;
    strip(p0);
    SturmChain ch;
    if (p0.empty()) throw IndeterminateSign("zero polynomial");
    if (p0.back().contains_zero()) throw IndeterminateSign("leading coefficient straddles zero");
    normalize(p0);
    ch.polys.emplace_back(p0, Basis::Monomial, P.lo, P.hi);
    if (p0.size() == 1) return ch;
    std::vector<Ball> p1;
    for (size_t k = 1; k < p0.size(); ++k) p1.push_back(p0[k].mul_si(static_cast<long>(k)));
    normalize(p1);
    ch.polys.emplace_back(p1, Basis::Monomial, P.lo, P.hi);
    std::vector<Ball> a = std::move(p0), b = std::move(p1);
    while (b.size() > 1) {
        std::vector<Ball> r = neg_rem(a, b);
        if (r.empty()) break;  // exact common factor: chain ends at gcd
        normalize(r);
        ch.polys.emplace_back(r, Basis::Monomial, P.lo, P.hi);
        a = std::move(b);
        b = std::move(r);
    }
    return ch;
}

int sign_variations(const SturmChain& chain, const Rational& x) {
    int prev = 0, v = 0;
    bool prev_zero = false;
    for (size_t i = 0; i < chain.polys.size(); ++i) {
        const auto& p = chain.polys[i];
        const Ball xb(x, p.prec());
        const int s = sign_of(horner(p.coeffs, xb));
        // a common root at x breaks the sign rule
        if (s == 0 && (prev_zero || (i + 1 == chain.polys.size() && i > 0)))
            throw IndeterminateSign("multiple root at an evaluation point");
        prev_zero = s == 0;
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

int count_roots(const SturmChain& chain, const Rational& a, const Rational& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

int count_roots(const IntervalPoly& P, const Rational& a, const Rational& b) {
    return count_roots(sturm_chain(P), a, b);
}

Ball binary_search_bound(const std::function<bool(const Rational&)>& check, Rational lo, Rational hi,
                         const Rational& sharpness, int max_iter) {
    if (!check(hi)) throw SearchFailed("upper end of the search does not certify");
    for (int it = 0; it < max_iter; ++it) {
        if (hi - lo <= sharpness * hi) break;
        Rational mid = (lo + hi) / 2;
        mid.canonicalize();
        if (check(mid)) hi = mid;
        else lo = mid;
    }
    return Ball(hi, 128);
}

namespace {

// eps Q +- P - (dP + eps dQ) > 0 on [a, b] for exact-midpoint P, Q
struct Certifier {
    std::vector<Ball> P, Q;  // monomial, exact midpoints
    long double dP = 0, dQ = 0;
    bool has_q = false;
    Rational a, b, x0;
    mpfr_prec_t prec = 256;
    int max_doublings = 3;
    int checks = 0;

    bool positive_on(const std::vector<Ball>& F, mpfr_prec_t p) const {
        IntervalPoly f(with_prec(F, p), Basis::Monomial, a, b);
        SturmChain ch = sturm_chain(f);
        const Ball va = horner(ch.polys[0].coeffs, Ball(a, p));
        if (!va.positive() && !va.negative()) throw IndeterminateSign("value at the left end undecidable");
        if (count_roots(ch, a, b) != 0) return false;
        return va.positive();
    }

    bool positive_escalating(const std::vector<Ball>& F) const {
        mpfr_prec_t p = prec;
        for (int k = 0;; ++k) {
            try {
                return positive_on(F, p);
            } catch (const IndeterminateSign&) {
                if (k >= max_doublings) throw;
                p *= 2;
            }
        }
    }

    std::vector<Ball> combo(const Rational& eps, int sgn) const {
        const size_t n = std::max(P.size(), has_q ? Q.size() : size_t(1));
        const mpfr_prec_t wp = prec + 256;
        std::vector<Ball> F(n, Ball(wp));
        const Ball e(eps, wp);
        if (has_q) {
            for (size_t k = 0; k < Q.size(); ++k) F[k].addmul(e, Q[k]);
        } else {
            F[0] += e;
        }
        for (size_t k = 0; k < P.size(); ++k) {
            if (sgn > 0) F[k] += P[k];
            else F[k] -= P[k];
        }
        // constant shift by dP + eps dQ, rounded up
        mpfr_t s;
        mpfr_init2(s, 128);
        mpfr_set_ld(s, dQ, MPFR_RNDU);
        mpfr_mul_q(s, s, eps.get_mpq_t(), MPFR_RNDU);
        mpfr_t t;
        mpfr_init2(t, 128);
        mpfr_set_ld(t, dP, MPFR_RNDU);
        mpfr_add(s, s, t, MPFR_RNDU);
        F[0] -= Ball::exact(s, wp);
        mpfr_clear(s);
        mpfr_clear(t);
        return F;
    }

    bool check(const Rational& eps) {
        ++checks;
        if (eps <= 0) return false;
        try {
            return positive_escalating(combo(eps, +1)) && positive_escalating(combo(eps, -1));
        } catch (const IndeterminateSign&) {
            return false;
        }
    }
};

// rational approximation of a positive double, rounded up to a short dyadic
Rational dyadic_up(long double v) {
    if (!(v > 0)) return 0;
    int e;
    long double m = std::frexp(v, &e);
    mpz_class mant(static_cast<unsigned long>(std::ceil(std::ldexp(m, 40))));
    Rational q = e - 40 >= 0 ? Rational(mant << (e - 40)) : Rational(mant, mpz_class(1) << (40 - e));
    q.canonicalize();
    return q;
}

SupBound run_search(Certifier& c, long double s, const SupOptions& opt) {
    SupBound out;
    out.sample_max = static_cast<double>(s);
    const Rational sharp = opt.sharpness;
    Rational start = dyadic_up(s * (1 + mpq_class(sharp).get_d()));
    if (start < opt.floor) start = opt.floor;
    Rational lo = 0, hi = start;
    int grow = 0;
    while (!c.check(hi)) {
        lo = hi;
        hi *= 2;
        if (++grow > 200) throw SearchFailed("no certifiable bound below the search cap");
    }
    if (grow == 0) {
        out.eps = Ball(hi, 128);
    } else {
        out.eps = binary_search_bound([&](const Rational& e) { return c.check(e); }, lo, hi, sharp);
    }
    out.checks = c.checks;
    out.prec_used = c.prec;
    return out;
}

long double max_abs_ratio_cheb(const ChebModel& P, const ChebModel* Q, int samples) {
    // long double Clenshaw on the midpoints
    auto tod = [](const std::vector<Ball>& c) {
        std::vector<long double> r;
        for (const auto& x : c) r.push_back(mpfr_get_ld(x.mid(), MPFR_RNDN));
        return r;
    };
    const auto p = tod(P.c);
    const auto q = Q ? tod(Q->c) : std::vector<long double>{1.0L};
    auto cl = [](const std::vector<long double>& c, long double x) {
        long double b1 = 0, b2 = 0;
        for (size_t k = c.size() - 1; k >= 1; --k) {
            long double b0 = c[k] + 2 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        return c[0] + x * b1 - b2;
    };
    long double m = 0;
    for (int k = 0; k <= samples; ++k) {
        const long double x = std::cos(3.14159265358979323846264338327950288L * k / samples);
        const long double v = std::fabs(cl(p, x) / cl(q, x));
        if (v > m) m = v;
    }
    return m;
}

}  // namespace

SupBound bound_model_sup(const ChebModel& P0, const ChebModel* Q0, const SupOptions& opt) {
    if (Q0 && (Q0->lo != P0.lo || Q0->hi != P0.hi)) throw DomainMismatch("sup bound on different domains");
    const ChebModel P = P0.split();
    Certifier c;
    c.dP = P.delta;
    c.has_q = Q0 != nullptr;
    c.max_doublings = opt.max_doublings;
    c.a = Rational(-1 / opt.rho);
    c.b = Rational(1 / opt.rho);
    IntervalPoly pm = to_monomial_rescaled(P.poly(), opt.rho);
    c.P = pm.coeffs;
    mpfr_prec_t p = std::max<mpfr_prec_t>(opt.prec, pm.prec());
    ChebModel Q;
    if (Q0) {
        Q = Q0->split();
        c.dQ = Q.delta;
        IntervalPoly qm = to_monomial_rescaled(Q.poly(), opt.rho);
        c.Q = qm.coeffs;
        p = std::max(p, qm.prec());
        if (!model_positive(*Q0, opt)) throw DenominatorVanishes("denominator not certified positive");
    }
    c.prec = p;
    const long double s = max_abs_ratio_cheb(P, Q0 ? &Q : nullptr, opt.samples);
    return run_search(c, s, opt);
}

bool model_positive(const ChebModel& Q0, const SupOptions& opt) {
    const ChebModel Q = Q0.split();
    IntervalPoly qm = to_monomial_rescaled(Q.poly(), opt.rho);
    Certifier c;
    c.max_doublings = opt.max_doublings;
    c.a = Rational(-1 / opt.rho);
    c.b = Rational(1 / opt.rho);
    c.prec = std::max<mpfr_prec_t>(opt.prec, qm.prec());
    std::vector<Ball> F = qm.coeffs;
    mpfr_t d;
    mpfr_init2(d, 128);
    mpfr_set_ld(d, Q.delta, MPFR_RNDU);
    F[0] -= Ball::exact(d, F[0].prec());
    mpfr_clear(d);
    try {
        return c.positive_escalating(F);
    } catch (const IndeterminateSign&) {
        return false;
    }
}

SupBound bound_rational_sup(const IntervalPoly& P, const IntervalPoly& Q, const Rational& a, const Rational& b,
                            const SupOptions& opt) {
    if (P.basis != Basis::Monomial || Q.basis != Basis::Monomial) throw DomainMismatch("monomial inputs expected");
    if (!(a < b)) throw DomainError("empty interval");
    // midpoints plus deviation over [a, b]
    const Rational M = std::max(abs(a), abs(b));
    auto split = [&](const IntervalPoly& X, long double& d) {
        std::vector<Ball> m;
        Rational Mk = 1;
        d = 0;
        for (const auto& x : X.coeffs) {
            d = up_add(d, up_mul(rad_upper_ld(x), abs_upper_ld(Ball(Mk, 64))));
            m.push_back(x.midpoint());
            Mk *= M;
        }
        return m;
    };
    Certifier c;
    c.has_q = true;
    c.max_doublings = opt.max_doublings;
    c.P = split(P, c.dP);
    c.Q = split(Q, c.dQ);
    // rescale to y = x / rho on [a/rho, b/rho]
    Rational rk = 1;
    for (size_t k = 0; k < std::max(c.P.size(), c.Q.size()); ++k) {
        if (k < c.P.size()) c.P[k] = c.P[k].mul_q(rk);
        if (k < c.Q.size()) c.Q[k] = c.Q[k].mul_q(rk);
        rk *= opt.rho;
    }
    c.a = Rational(a / opt.rho);
    c.b = Rational(b / opt.rho);
    c.prec = std::max<mpfr_prec_t>(opt.prec, std::max(P.prec(), Q.prec()) + 64);
    {
        // denominator: Q - dQ > 0 (or Q + dQ < 0 handled by negating both)
        std::vector<Ball> F = c.Q;
        bool neg = Q.eval(Ball(Rational((a + b) / 2), c.prec)).negative();
        if (neg) {
            for (auto& x : F) x = -x;
            for (auto& x : c.Q) x = -x;
            for (auto& x : c.P) x = -x;
        }
        mpfr_t d;
        mpfr_init2(d, 128);
        mpfr_set_ld(d, c.dQ, MPFR_RNDU);
        F[0] -= Ball::exact(d, F[0].prec());
        mpfr_clear(d);
        bool ok = false;
        try {
            ok = c.positive_escalating(F);
        } catch (const IndeterminateSign&) {
            ok = false;
        }
        if (!ok) throw DenominatorVanishes("denominator has a root in the interval");
    }
    // samples at working precision
    long double s = 0;
    const int n = std::max(opt.samples / 4, 64);
    const mpfr_prec_t sp = std::min<mpfr_prec_t>(c.prec, 512);
    for (int k = 0; k <= n; ++k) {
        Rational x = a + (b - a) * k / n;
        Ball xb(Rational(x / opt.rho), sp);
        Ball v = horner(c.P, xb) / horner(c.Q, xb);
        s = std::max<long double>(s, std::fabs(v.mid_d()));
    }
    return run_search(c, s, opt);
}

}  // namespace su2e
