#include "su2e/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace su2e {

long double up_add(long double a, long double b) {
    long double s = a + b;
    return std::nextafter(s, std::numeric_limits<long double>::infinity());
}

long double up_mul(long double a, long double b) {
    if (a == 0 || b == 0) return 0;
    long double s = a * b;
    return std::nextafter(s, std::numeric_limits<long double>::infinity());
}

long double abs_upper_ld(const Ball& b) {
    mpfr_t a;
    mpfr_init2(a, 64);
    b.abs_upper(a);
    long double v = mpfr_get_ld(a, MPFR_RNDU);
    mpfr_clear(a);
    return v;
}

long double rad_upper_ld(const Ball& b) { return mpfr_get_ld(b.rad(), MPFR_RNDU); }

mpfr_prec_t IntervalPoly::prec() const {
    mpfr_prec_t p = MPFR_PREC_MIN;
    for (const auto& c : coeffs) p = std::max(p, c.prec());
    return coeffs.empty() ? default_prec() : p;
}

namespace {

Ball clenshaw(const std::vector<Ball>& c, const Ball& x) {
    const mpfr_prec_t p = std::max(x.prec(), c.empty() ? x.prec() : c[0].prec());
    if (c.empty()) return Ball(p);
    Ball b1(p), b2(p);
    const Ball x2 = x.mul_2si(1);
    for (size_t k = c.size() - 1; k >= 1; --k) {
        Ball b0 = c[k] - b2;
        b0.addmul(x2, b1);
        b2 = std::move(b1);
        b1 = std::move(b0);
    }
    Ball r = c[0] - b2;
    r.addmul(x, b1);
    return r;
}

Ball to_reference(const Ball& t, const Rational& lo, const Rational& hi) {
    const mpfr_prec_t p = t.prec();
    Ball num = t.mul_2si(1) - Ball(Rational(lo + hi), p);
    return num / Ball(Rational(hi - lo), p);
}

void check_cheb(const IntervalPoly& p) {
    if (p.basis != Basis::Chebyshev) throw DomainMismatch("Chebyshev polynomial expected");
}

}  // namespace

Ball IntervalPoly::eval_ref(const Ball& x) const {
    check_cheb(*this);
    return clenshaw(coeffs, x);
}

Ball IntervalPoly::eval(const Ball& t) const {
    if (basis == Basis::Chebyshev) return clenshaw(coeffs, to_reference(t, lo, hi));
    if (coeffs.empty()) return Ball(t.prec());
    Ball r = coeffs.back();
    for (int k = degree() - 1; k >= 0; --k) {
        Ball s = coeffs[k];
        s.addmul(r, t);
        r = std::move(s);
    }
    return r;
}

void IntervalPoly::trim() {
    while (coeffs.size() > 1 && mpfr_zero_p(coeffs.back().mid()) && coeffs.back().is_exact()) coeffs.pop_back();
}

std::string IntervalPoly::to_json() const {
    nlohmann::json j;
    j["basis"] = basis == Basis::Chebyshev ? "chebyshev" : "monomial";
    j["lo"] = su2e::to_string(lo);
    j["hi"] = su2e::to_string(hi);
    auto arr = nlohmann::json::array();
    for (const auto& c : coeffs) arr.push_back(c.str(static_cast<int>(c.prec() * 0.30103) + 2));
    j["coeffs"] = arr;
    return j.dump();
}

IntervalPoly IntervalPoly::from_json(const std::string& s, mpfr_prec_t prec) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(s);
    } catch (const std::exception& e) {
        throw IoError(std::string("bad polynomial json: ") + e.what());
    }
    IntervalPoly p;
    p.basis = j.at("basis").get<std::string>() == "chebyshev" ? Basis::Chebyshev : Basis::Monomial;
    p.lo = parse_rational(j.at("lo").get<std::string>());
    p.hi = parse_rational(j.at("hi").get<std::string>());
    for (const auto& c : j.at("coeffs")) p.coeffs.push_back(Ball::parse(c.get<std::string>(), prec));
    return p;
}

std::vector<Ball> cheb_nodes(int N, const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
    if (N < 1) throw DomainError("need at least one node");
    const Ball pi = Ball::pi(prec);
    const Ball a(Rational((hi - lo) / 2), prec), b(Rational((hi + lo) / 2), prec);
    std::vector<Ball> out;
    out.reserve(N);
    for (int k = 1; k <= N; ++k) {
        Ball x = cos(pi.mul_si(2 * k - 1).div_si(2L * N));
        Ball t = b;
        t.addmul(a, x);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Ball> cheb_coefficients(const std::vector<Ball>& f, mpfr_prec_t prec) {
    const long N = static_cast<long>(f.size());
    if (N < 1) throw DomainError("need at least one sample");
    const Ball pi = Ball::pi(prec);
    // cos(pi m / (2N)) for m = 0..N, the rest by symmetry
    std::vector<Ball> tab;
    tab.reserve(N + 1);
    for (long m = 0; m <= N; ++m) tab.push_back(cos(pi.mul_si(m).div_si(2 * N)));
    auto cosm = [&](long m) -> Ball {
        m %= 4 * N;
        bool neg = false;
        if (m > 2 * N) m = 4 * N - m;
        if (m > N) {
            m = 2 * N - m;
            neg = true;
        }
        return neg ? -tab[m] : tab[m];
    };
    std::vector<Ball> c;
    c.reserve(N);
    for (long j = 0; j < N; ++j) {
        Ball s(prec);
        for (long k = 1; k <= N; ++k) s.addmul(f[k - 1], cosm(j * (2 * k - 1)));
        c.push_back(s.mul_si(2).div_si(N));
    }
    return c;
}

IntervalPoly cheb_fit(const std::vector<Ball>& samples, const Rational& lo, const Rational& hi) {
    mpfr_prec_t prec = MPFR_PREC_MIN;
    for (const auto& s : samples) prec = std::max(prec, s.prec());
    auto c = cheb_coefficients(samples, prec);
    c[0] = c[0].mul_2si(-1);
    return IntervalPoly(std::move(c), Basis::Chebyshev, lo, hi);
}

IntervalPoly cheb_product(const IntervalPoly& p, const IntervalPoly& q) {
    check_cheb(p);
    check_cheb(q);
    if (p.lo != q.lo || p.hi != q.hi) throw DomainMismatch("Chebyshev product on different domains");
    if (p.coeffs.empty() || q.coeffs.empty()) return IntervalPoly({}, Basis::Chebyshev, p.lo, p.hi);
    const mpfr_prec_t prec = std::max(p.prec(), q.prec());
    const int n = p.degree() + q.degree();
    std::vector<Ball> r(n + 1, Ball(prec));
    // 2 T_i T_j = T_{i+j} + T_{|i-j|}
    for (int i = 0; i <= p.degree(); ++i) {
        const Ball half = p.coeffs[i].mul_2si(-1);
        for (int j = 0; j <= q.degree(); ++j) {
            r[i + j].addmul(half, q.coeffs[j]);
            r[std::abs(i - j)].addmul(half, q.coeffs[j]);
        }
    }
    return IntervalPoly(std::move(r), Basis::Chebyshev, p.lo, p.hi);
}

IntervalPoly poly_add(const IntervalPoly& p, const IntervalPoly& q) {
    if (p.basis != q.basis || p.lo != q.lo || p.hi != q.hi) throw DomainMismatch("sum of incompatible polynomials");
    IntervalPoly r = p.coeffs.size() >= q.coeffs.size() ? p : q;
    const IntervalPoly& s = p.coeffs.size() >= q.coeffs.size() ? q : p;
    for (size_t k = 0; k < s.coeffs.size(); ++k) r.coeffs[k] += s.coeffs[k];
    return r;
}

IntervalPoly poly_scale(const IntervalPoly& p, const Ball& s) {
    IntervalPoly r = p;
    for (auto& c : r.coeffs) c = c * s;
    return r;
}

IntervalPoly cheb_antiderivative(const IntervalPoly& p) {
    check_cheb(p);
    const mpfr_prec_t prec = p.prec();
    const int n = p.degree();
    if (n < 0) return p;
    std::vector<Ball> F(n + 2, Ball(prec));
    for (int k = 0; k <= n; ++k) {
        const Ball& c = p.coeffs[k];
        if (k == 0) {
            F[1] += c;
        } else if (k == 1) {
            F[2] += c.mul_2si(-2);
        } else {
            F[k + 1] += c.div_si(2L * (k + 1));
            F[k - 1] -= c.div_si(2L * (k - 1));
        }
    }
    const Ball scale(Rational((p.hi - p.lo) / 2), prec);
    for (auto& f : F) f = f * scale;
    // F(lo) = sum (-1)^k F_k = 0
    Ball s(prec);
    for (int k = 1; k <= n + 1; ++k) {
        if (k % 2) s += F[k];
        else s -= F[k];
    }
    F[0] = s;
    IntervalPoly r(std::move(F), Basis::Chebyshev, p.lo, p.hi);
    r.trim();
    return r;
}

IntervalPoly cheb_integrate_zero_pinned(const IntervalPoly& p) {
    // the constant monomial coefficient is the value at t = 0 only if lo = 0
    if (p.lo != 0) throw DomainMismatch("zero pinning needs a domain starting at 0");
    IntervalPoly m = cheb_to_monomial_t(cheb_antiderivative(p));
    if (!m.coeffs.empty()) m.coeffs[0] = Ball(m.coeffs[0].prec());
    return m;
}

IntervalPoly derivative(const IntervalPoly& p) {
    const int n = p.degree();
    const mpfr_prec_t prec = p.prec();
    if (n <= 0) return IntervalPoly({Ball(prec)}, p.basis, p.lo, p.hi);
    if (p.basis == Basis::Monomial) {
        std::vector<Ball> d;
        for (int k = 1; k <= n; ++k) d.push_back(p.coeffs[k].mul_si(k));
        return IntervalPoly(std::move(d), Basis::Monomial, p.lo, p.hi);
    }
    std::vector<Ball> d(n + 2, Ball(prec));
    for (int k = n; k >= 1; --k) d[k - 1] = d[k + 1] + p.coeffs[k].mul_si(2L * k);
    d.resize(n);
    d[0] = d[0].mul_2si(-1);
    const Ball scale(Rational(2 / (p.hi - p.lo)), prec);
    for (auto& x : d) x = x * scale;
    return IntervalPoly(std::move(d), Basis::Chebyshev, p.lo, p.hi);
}

namespace {

// sum c_k T_k(alpha y + beta) as monomials in y, by Clenshaw on polynomials
std::vector<Ball> cheb_to_monomial(const std::vector<Ball>& c, const Ball& alpha, const Ball& beta, mpfr_prec_t wp) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 0) return {};
    std::vector<Ball> b1(n + 1, Ball(wp)), b2(n + 1, Ball(wp));
    const Ball a2 = alpha.mul_2si(1), be2 = beta.mul_2si(1);
    for (int k = n; k >= 1; --k) {
        // b0 = c_k + 2 (alpha y + beta) b1 - b2
        std::vector<Ball> b0(n + 1, Ball(wp));
        b0[0] = c[k].with_prec(wp);
        for (int j = 0; j <= n; ++j) {
            if (mpfr_zero_p(b1[j].mid()) && b1[j].is_exact()) continue;
            b0[j].addmul(be2, b1[j]);
            if (j + 1 <= n) b0[j + 1].addmul(a2, b1[j]);
        }
        for (int j = 0; j <= n; ++j) b0[j] -= b2[j];
        b2 = std::move(b1);
        b1 = std::move(b0);
    }
    // c_0 + (alpha y + beta) b1 - b2
    std::vector<Ball> r(n + 1, Ball(wp));
    r[0] = c[0].with_prec(wp);
    for (int j = 0; j <= n; ++j) {
        r[j].addmul(beta, b1[j]);
        if (j + 1 <= n) r[j + 1].addmul(alpha, b1[j]);
        r[j] -= b2[j];
    }
    return r;
}

}  // namespace

IntervalPoly cheb_to_monomial_t(const IntervalPoly& p, mpfr_prec_t wp) {
    check_cheb(p);
    if (wp == 0) wp = p.prec() + 2 * std::max(p.degree(), 0) + 64;
    const Rational w = p.hi - p.lo;
    const Ball alpha(Rational(2 / w), wp), beta(Rational(-(p.lo + p.hi) / w), wp);
    return IntervalPoly(cheb_to_monomial(p.coeffs, alpha, beta, wp), Basis::Monomial, p.lo, p.hi);
}

IntervalPoly to_monomial_rescaled(const IntervalPoly& p, const Rational& rho, mpfr_prec_t wp) {
    if (rho <= 0) throw DomainError("rescaling factor must be positive");
    if (wp == 0) wp = p.prec() + 2 * std::max(p.degree(), 0) + 64;
    std::vector<Ball> m;
    Rational lo = p.lo, hi = p.hi;
    if (p.basis == Basis::Chebyshev) {
        m = cheb_to_monomial(p.coeffs, Ball(1, wp), Ball(0, wp), wp);
        lo = -1;
        hi = 1;
    } else {
        for (const auto& c : p.coeffs) m.push_back(c.with_prec(wp));
    }
    Rational rk = 1;
    for (auto& c : m) {
        if (rk != 1) c = c.mul_q(rk);
        rk *= rho;
    }
    return IntervalPoly(std::move(m), Basis::Monomial, Rational(lo / rho), Rational(hi / rho));
}

// ---------------------------------------------------------------- ChebModel

ChebModel ChebModel::constant(const Ball& v, int cap, const Rational& lo, const Rational& hi) {
    return ChebModel({v}, cap, lo, hi);
}

ChebModel ChebModel::constant(const Rational& q, mpfr_prec_t prec, int cap, const Rational& lo, const Rational& hi) {
    return ChebModel({Ball(q, prec)}, cap, lo, hi);
}

ChebModel ChebModel::time(mpfr_prec_t prec, int cap, const Rational& lo, const Rational& hi) {
    return ChebModel({Ball(Rational((lo + hi) / 2), prec), Ball(Rational((hi - lo) / 2), prec)}, cap, lo, hi);
}

ChebModel ChebModel::from_poly(const IntervalPoly& p, int cap) {
    check_cheb(p);
    return ChebModel(p.coeffs, cap, p.lo, p.hi).truncated(cap);
}

mpfr_prec_t ChebModel::prec() const {
    mpfr_prec_t p = MPFR_PREC_MIN;
    for (const auto& x : c) p = std::max(p, x.prec());
    return c.empty() ? default_prec() : p;
}

Ball ChebModel::eval(const Ball& t) const {
    Ball v = clenshaw(c, to_reference(t, lo, hi));
    mpfr_t d;
    mpfr_init2(d, 64);
    mpfr_set_ld(d, delta, MPFR_RNDU);
    v.add_error(d);
    mpfr_clear(d);
    return v;
}

long double ChebModel::norm_upper() const {
    long double s = delta;
    for (const auto& x : c) s = up_add(s, abs_upper_ld(x));
    return s;
}

ChebModel ChebModel::split() const {
    ChebModel r = *this;
    for (auto& x : r.c) {
        r.delta = up_add(r.delta, rad_upper_ld(x));
        mpfr_set_zero(x.rad_mut(), 1);
    }
    return r;
}

ChebModel ChebModel::truncated(int new_cap) const {
    ChebModel r = *this;
    r.cap = new_cap;
    while (r.degree() > new_cap) {
        r.delta = up_add(r.delta, abs_upper_ld(r.c.back()));
        r.c.pop_back();
    }
    return r;
}

ChebModel ChebModel::with_cap(int new_cap) const { return truncated(new_cap); }

ChebModel ChebModel::divide_by_t_minus_lo() const {
    if (delta != 0) throw DomainError("division by t needs an exact polynomial");
    const int n = degree();
    const mpfr_prec_t p = prec();
    if (n <= 0) return ChebModel({Ball(p)}, cap, lo, hi);
    // (x + 1) q = p, solved from the top coefficient down
    std::vector<Ball> q(n + 2, Ball(p));
    for (int m = n; m >= 2; --m) {
        // p_m = q_m + q_{m-1}/2 + q_{m+1}/2
        q[m - 1] = (c[m] - q[m]).mul_2si(1) - q[m + 1];
    }
    // p_1 = q_1 + q_0 + q_2/2
    q[0] = c[1] - q[1] - q[2].mul_2si(-1);
    q.resize(n);
    const Ball s(Rational(2 / (hi - lo)), p);
    for (auto& x : q) x = x * s;
    return ChebModel(std::move(q), cap, lo, hi);
}

ChebModel& ChebModel::operator+=(const ChebModel& o) {
    if (lo != o.lo || hi != o.hi) throw DomainMismatch("Chebyshev models on different domains");
    if (o.c.size() > c.size()) c.resize(o.c.size(), Ball(o.prec()));
    for (size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
    delta = up_add(delta, o.delta);
    cap = std::max(cap, o.cap);
    return *this;
}

ChebModel& ChebModel::operator-=(const ChebModel& o) {
    if (lo != o.lo || hi != o.hi) throw DomainMismatch("Chebyshev models on different domains");
    if (o.c.size() > c.size()) c.resize(o.c.size(), Ball(o.prec()));
    for (size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
    delta = up_add(delta, o.delta);
    cap = std::max(cap, o.cap);
    return *this;
}

ChebModel ChebModel::operator-() const {
    ChebModel r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

ChebModel ChebModel::scaled(const Ball& s) const {
    ChebModel r = *this;
    for (auto& x : r.c) x = x * s;
    r.delta = up_mul(delta, abs_upper_ld(s));
    return r;
}

ChebModel ChebModel::mul_t() const {
    const mpfr_prec_t p = prec();
    const int n = degree();
    const Ball mid(Rational((lo + hi) / 2), p), half(Rational((hi - lo) / 2), p);
    std::vector<Ball> r(n + 2, Ball(p));
    for (int k = 0; k <= n; ++k) {
        r[k].addmul(mid, c[k]);
        if (k == 0) {
            r[1].addmul(half, c[0]);
        } else {
            const Ball hh = half.mul_2si(-1);
            r[k + 1].addmul(hh, c[k]);
            r[k - 1].addmul(hh, c[k]);
        }
    }
    const Rational m = std::max(abs(lo), abs(hi));
    ChebModel out(std::move(r), cap, lo, hi, up_mul(delta, abs_upper_ld(Ball(m, 64))));
    return out.truncated(cap);
}

ChebModel operator+(ChebModel a, const ChebModel& b) { return a += b; }
ChebModel operator-(ChebModel a, const ChebModel& b) { return a -= b; }

ChebModel operator*(const ChebModel& a0, const ChebModel& b0) {
    if (a0.lo != b0.lo || a0.hi != b0.hi) throw DomainMismatch("Chebyshev models on different domains");
    const int cap = std::max(a0.cap, b0.cap);
    const ChebModel a = a0.degree() > cap ? a0.truncated(cap) : a0;
    const ChebModel b = b0.degree() > cap ? b0.truncated(cap) : b0;
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    const int da = a.degree(), db = b.degree();
    if (da < 0 || db < 0) return ChebModel({Ball(p)}, cap, a.lo, a.hi);
    const int n = std::min(da + db, cap);
    std::vector<Ball> r(n + 1, Ball(p));
    std::vector<long double> A(da + 1), B(db + 1);
    for (int i = 0; i <= da; ++i) A[i] = abs_upper_ld(a.c[i]);
    for (int j = 0; j <= db; ++j) B[j] = abs_upper_ld(b.c[j]);
    long double tail = 0;
    for (int i = 0; i <= da; ++i) {
        const Ball half = a.c[i].mul_2si(-1);
        for (int j = 0; j <= db; ++j) {
            r[std::abs(i - j)].addmul(half, b.c[j]);
            if (i + j <= n) r[i + j].addmul(half, b.c[j]);
            else tail = up_add(tail, up_mul(A[i], B[j]));
        }
    }
    long double na = 0, nb = 0;
    for (auto x : A) na = up_add(na, x);
    for (auto x : B) nb = up_add(nb, x);
    long double d = up_mul(tail, 0.5L);
    d = up_add(d, up_mul(a.delta, up_add(nb, b.delta)));
    d = up_add(d, up_mul(b.delta, na));
    return ChebModel(std::move(r), cap, a.lo, a.hi, d);
}

}  // namespace su2e
