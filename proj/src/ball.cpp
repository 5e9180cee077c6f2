#include "su2e/ball.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstring>

namespace su2e {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;
std::atomic<long> g_default_prec{3330};

// RAII scratch value for radius bookkeeping.
struct Tmp {
    mpfr_t v;
    explicit Tmp(mpfr_prec_t p = kRadPrec) { mpfr_init2(v, p); mpfr_set_zero(v, 1); }
    ~Tmp() { mpfr_clear(v); }
    Tmp(const Tmp&) = delete;
    Tmp& operator=(const Tmp&) = delete;
    operator mpfr_ptr() { return v; }
    mpfr_ptr operator->() { return v; }
};

void abs_up(mpfr_ptr out, mpfr_srcptr x) { mpfr_abs(out, x, MPFR_RNDU); }

// ulp bound 2^(EXP(m)-prec) added to r
// per-thread 64-bit scratch registers for radius arithmetic on hot paths
struct Scratch {
    mpfr_t a, b, c;
    Scratch() { mpfr_inits2(kRadPrec, a, b, c, (mpfr_ptr)0); }
    ~Scratch() { mpfr_clears(a, b, c, (mpfr_ptr)0); }
};
Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

void add_ulp(mpfr_ptr r, mpfr_srcptr m) {
    if (!mpfr_regular_p(m)) return;
    mpfr_ptr u = scratch().c;
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(m) - mpfr_get_prec(m), MPFR_RNDU);
    mpfr_add(r, r, u, MPFR_RNDU);
}

Ball from_interval(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
    Ball out(prec);
    mpfr_add(out.mid_mut(), lo, hi, MPFR_RNDN);
    mpfr_div_2ui(out.mid_mut(), out.mid_mut(), 1, MPFR_RNDN);
    Tmp a, b;
    mpfr_sub(a, hi, out.mid(), MPFR_RNDU);
    mpfr_sub(b, out.mid(), lo, MPFR_RNDU);
    mpfr_max(out.rad_mut(), a, b, MPFR_RNDU);
    if (mpfr_sgn(out.rad()) < 0) mpfr_set_zero(out.rad_mut(), 1);
    return out;
}

template <class F>
Ball monotone(const Ball& x, F f) {
    const mpfr_prec_t p = x.prec();
    if (x.is_exact()) {
        Ball out(p);
        if (f(out.mid_mut(), x.mid(), MPFR_RNDN) != 0) add_ulp(out.rad_mut(), out.mid());
        return out;
    }
    Tmp lo(p), hi(p), flo(p), fhi(p);
    x.lower(lo);
    x.upper(hi);
    f(flo, lo, MPFR_RNDD);
    f(fhi, hi, MPFR_RNDU);
    if (!mpfr_number_p(flo) || !mpfr_number_p(fhi)) throw PrecisionError("elementary function overflow");
    return from_interval(flo, fhi, p);
}

}  // namespace

mpfr_prec_t default_prec() { return g_default_prec.load(); }
void set_default_prec(mpfr_prec_t bits) { g_default_prec.store(bits); }

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty rational");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Rational a = parse_rational(s.substr(0, slash));
            Rational b = parse_rational(s.substr(slash + 1));
            if (b == 0) throw ConfigError("zero denominator in '" + raw + "'");
            Rational q = a / b;
            q.canonicalize();
            return q;
        }
        bool neg = false;
        size_t i = 0;
        if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
        std::string digits;
        long frac = 0;
        bool dot = false, any = false;
        for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
            if (s[i] == '.') {
                if (dot) throw ConfigError("bad number '" + raw + "'");
                dot = true;
            } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                digits += s[i];
                any = true;
                if (dot) ++frac;
            } else {
                throw ConfigError("bad number '" + raw + "'");
            }
        }
        if (!any) throw ConfigError("bad number '" + raw + "'");
        long ex = 0;
        if (i < s.size()) ex = std::stol(s.substr(i + 1));
        ex -= frac;
        mpz_class num(digits, 10);
        mpz_class ten = 10, scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(ex)));
        Rational q = ex >= 0 ? Rational(num * scale) : Rational(num, scale);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad number '" + raw + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("bad number '" + raw + "'");
    }
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

Ball::Ball(mpfr_prec_t prec) {
    mpfr_init2(m_, prec);
    mpfr_init2(r_, kRadPrec);
    mpfr_set_zero(m_, 1);
    mpfr_set_zero(r_, 1);
}

Ball::Ball(long v, mpfr_prec_t prec) : Ball(prec) {
    if (mpfr_set_si(m_, v, MPFR_RNDN) != 0) add_ulp(r_, m_);
}

Ball::Ball(const Rational& q, mpfr_prec_t prec) : Ball(prec) {
    if (mpfr_set_q(m_, q.get_mpq_t(), MPFR_RNDN) != 0) add_ulp(r_, m_);
}

Ball::Ball(const Ball& o) {
    mpfr_init2(m_, o.prec());
    mpfr_init2(r_, kRadPrec);
    mpfr_set(m_, o.m_, MPFR_RNDN);
    mpfr_set(r_, o.r_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
    // the moved-from ball is left as a tiny-precision zero
    mpfr_init2(m_, MPFR_PREC_MIN);
    mpfr_init2(r_, kRadPrec);
    mpfr_set_zero(m_, 1);
    mpfr_set_zero(r_, 1);
    mpfr_swap(m_, o.m_);
    mpfr_swap(r_, o.r_);
}

Ball& Ball::operator=(const Ball& o) {
    if (this == &o) return *this;
    mpfr_set_prec(m_, o.prec());
    mpfr_set(m_, o.m_, MPFR_RNDN);
    mpfr_set(r_, o.r_, MPFR_RNDU);
    return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
    if (this != &o) {
        mpfr_swap(m_, o.m_);
        mpfr_swap(r_, o.r_);
    }
    return *this;
}

Ball::~Ball() {
    mpfr_clear(m_);
    mpfr_clear(r_);
}

Ball Ball::from_double(double v, mpfr_prec_t prec) {
    Ball b(prec);
    if (mpfr_set_d(b.m_, v, MPFR_RNDN) != 0) add_ulp(b.r_, b.m_);
    return b;
}

Ball Ball::exact(mpfr_srcptr v, mpfr_prec_t prec) {
    Ball b(std::max(prec, mpfr_get_prec(v)));
    mpfr_set(b.m_, v, MPFR_RNDN);
    return b;
}

Ball Ball::pi(mpfr_prec_t prec) {
    Ball b(prec);
    if (mpfr_const_pi(b.m_, MPFR_RNDN) != 0) add_ulp(b.r_, b.m_);
    return b;
}

Ball Ball::e(mpfr_prec_t prec) { return su2e::exp(Ball(1, prec)); }

void Ball::check_finite() const {
    if (!mpfr_number_p(m_) || !mpfr_number_p(r_)) throw PrecisionError("ball overflow");
}

bool Ball::contains_zero() const { return mpfr_cmpabs(m_, r_) <= 0; }

bool Ball::positive() const { return mpfr_sgn(m_) > 0 && mpfr_cmpabs(m_, r_) > 0; }
bool Ball::negative() const { return mpfr_sgn(m_) < 0 && mpfr_cmpabs(m_, r_) > 0; }

int Ball::sign() const {
    if (positive()) return 1;
    if (negative()) return -1;
    if (mpfr_zero_p(m_) && mpfr_zero_p(r_)) return 0;
    throw IndeterminateSign("sign of ball straddling zero");
}

bool Ball::contains(const Rational& q) const {
    mpq_class m;
    mpfr_get_q(m.get_mpq_t(), m_);
    mpq_class r;
    mpfr_get_q(r.get_mpq_t(), r_);
    mpq_class d = m - q;
    return abs(d) <= r;
}

bool Ball::contains(const Ball& o) const {
    const mpfr_prec_t p = std::max(prec(), o.prec()) + 64;
    Tmp a(p), b(p);
    lower(a);
    o.lower(b);
    if (mpfr_cmp(b, a) < 0) return false;
    upper(a);
    o.upper(b);
    return mpfr_cmp(b, a) <= 0;
}

bool Ball::overlaps(const Ball& o) const {
    const mpfr_prec_t p = std::max(prec(), o.prec()) + 64;
    Tmp a(p), b(p);
    upper(a);
    o.lower(b);
    if (mpfr_cmp(a, b) < 0) return false;
    lower(a);
    o.upper(b);
    return mpfr_cmp(b, a) >= 0;
}

void Ball::lower(mpfr_ptr out) const { mpfr_sub(out, m_, r_, MPFR_RNDD); }
void Ball::upper(mpfr_ptr out) const { mpfr_add(out, m_, r_, MPFR_RNDU); }

double Ball::upper_d() const {
    Tmp a(prec());
    upper(a);
    return mpfr_get_d(a, MPFR_RNDU);
}

double Ball::lower_d() const {
    Tmp a(prec());
    lower(a);
    return mpfr_get_d(a, MPFR_RNDD);
}

void Ball::abs_upper(mpfr_ptr out) const {
    Tmp a;
    abs_up(a, m_);
    mpfr_add(out, a, r_, MPFR_RNDU);
}

void Ball::add_error(mpfr_srcptr e) {
    Tmp a;
    mpfr_abs(a, e, MPFR_RNDU);
    mpfr_add(r_, r_, a, MPFR_RNDU);
    check_finite();
}

void Ball::add_error_d(double e) {
    Tmp a;
    mpfr_set_d(a, std::fabs(e), MPFR_RNDU);
    mpfr_add(r_, r_, a, MPFR_RNDU);
    check_finite();
}

Ball Ball::with_prec(mpfr_prec_t p) const {
    Ball b(p);
    if (mpfr_set(b.m_, m_, MPFR_RNDN) != 0) add_ulp(b.r_, b.m_);
    mpfr_add(b.r_, b.r_, r_, MPFR_RNDU);
    return b;
}

Ball Ball::midpoint() const {
    Ball b(prec());
    mpfr_set(b.m_, m_, MPFR_RNDN);
    return b;
}

Ball Ball::widened(double extra) const {
    Ball b(*this);
    b.add_error_d(extra);
    return b;
}

void Ball::round_err() { add_ulp(r_, m_); }

Ball operator+(const Ball& a, const Ball& b) {
    Ball c(std::max(a.prec(), b.prec()));
    int t = mpfr_add(c.m_, a.m_, b.m_, MPFR_RNDN);
    mpfr_add(c.r_, a.r_, b.r_, MPFR_RNDU);
    if (t) c.round_err();
    c.check_finite();
    return c;
}

Ball operator-(const Ball& a, const Ball& b) {
    Ball c(std::max(a.prec(), b.prec()));
    int t = mpfr_sub(c.m_, a.m_, b.m_, MPFR_RNDN);
    mpfr_add(c.r_, a.r_, b.r_, MPFR_RNDU);
    if (t) c.round_err();
    c.check_finite();
    return c;
}

Ball& Ball::operator+=(const Ball& b) {
    if (b.prec() > prec()) mpfr_prec_round(m_, b.prec(), MPFR_RNDN);
    int t = mpfr_add(m_, m_, b.m_, MPFR_RNDN);
    mpfr_add(r_, r_, b.r_, MPFR_RNDU);
    if (t) round_err();
    check_finite();
    return *this;
}

Ball& Ball::operator-=(const Ball& b) {
    if (b.prec() > prec()) mpfr_prec_round(m_, b.prec(), MPFR_RNDN);
    int t = mpfr_sub(m_, m_, b.m_, MPFR_RNDN);
    mpfr_add(r_, r_, b.r_, MPFR_RNDU);
    if (t) round_err();
    check_finite();
    return *this;
}

namespace {
// |am| rb + |bm| ra + ra rb, rounded up, added to r
void product_radius(mpfr_ptr r, const Ball& a, const Ball& b) {
    if (mpfr_zero_p(a.rad()) && mpfr_zero_p(b.rad())) return;
    mpfr_ptr x = scratch().a, y = scratch().b;
    abs_up(x, a.mid());
    mpfr_mul(x, x, b.rad(), MPFR_RNDU);
    abs_up(y, b.mid());
    mpfr_mul(y, y, a.rad(), MPFR_RNDU);
    mpfr_add(x, x, y, MPFR_RNDU);
    mpfr_mul(y, a.rad(), b.rad(), MPFR_RNDU);
    mpfr_add(x, x, y, MPFR_RNDU);
    mpfr_add(r, r, x, MPFR_RNDU);
}
}  // namespace

void Ball::addmul(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    if (p > prec()) mpfr_prec_round(m_, p, MPFR_RNDN);
    int t = mpfr_fma(m_, a.m_, b.m_, m_, MPFR_RNDN);
    product_radius(r_, a, b);
    if (t) round_err();
    check_finite();
}

void Ball::submul(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    if (p > prec()) mpfr_prec_round(m_, p, MPFR_RNDN);
    mpfr_neg(m_, m_, MPFR_RNDN);
    int t = mpfr_fma(m_, a.m_, b.m_, m_, MPFR_RNDN);
    mpfr_neg(m_, m_, MPFR_RNDN);
    product_radius(r_, a, b);
    if (t) round_err();
    check_finite();
}

Ball operator-(const Ball& a) {
    Ball c(a.prec());
    mpfr_neg(c.m_, a.m_, MPFR_RNDN);
    mpfr_set(c.r_, a.r_, MPFR_RNDU);
    return c;
}

Ball operator*(const Ball& a, const Ball& b) {
    Ball c(std::max(a.prec(), b.prec()));
    int t = mpfr_mul(c.m_, a.m_, b.m_, MPFR_RNDN);
    product_radius(c.r_, a, b);
    if (t) c.round_err();
    c.check_finite();
    return c;
}

Ball operator/(const Ball& a, const Ball& b) {
    if (b.contains_zero()) throw DomainError("division by a ball containing zero");
    Ball c(std::max(a.prec(), b.prec()));
    int t = mpfr_div(c.m_, a.m_, b.m_, MPFR_RNDN);
    if (!mpfr_zero_p(a.r_) || !mpfr_zero_p(b.r_)) {
        Tmp bl, den, x, y;
        mpfr_abs(bl, b.m_, MPFR_RNDD);
        mpfr_sub(den, bl, b.r_, MPFR_RNDD);
        if (mpfr_sgn(den) <= 0) throw DomainError("division by a ball containing zero");
        mpfr_mul(den, den, bl, MPFR_RNDD);
        abs_up(x, a.m_);
        mpfr_mul(x, x, b.r_, MPFR_RNDU);
        abs_up(y, b.m_);
        mpfr_mul(y, y, a.r_, MPFR_RNDU);
        mpfr_add(x, x, y, MPFR_RNDU);
        mpfr_div(c.r_, x, den, MPFR_RNDU);
    }
    if (t) c.round_err();
    c.check_finite();
    return c;
}

Ball Ball::mul_si(long k) const {
    Ball c(prec());
    int t = mpfr_mul_si(c.m_, m_, k, MPFR_RNDN);
    Tmp kk;
    mpfr_set_si(kk, std::labs(k), MPFR_RNDU);
    mpfr_mul(c.r_, r_, kk, MPFR_RNDU);
    if (t) c.round_err();
    c.check_finite();
    return c;
}

Ball Ball::div_si(long k) const {
    if (k == 0) throw DomainError("division by zero");
    Ball c(prec());
    int t = mpfr_div_si(c.m_, m_, k, MPFR_RNDN);
    Tmp kk;
    mpfr_set_si(kk, std::labs(k), MPFR_RNDD);
    mpfr_div(c.r_, r_, kk, MPFR_RNDU);
    if (t) c.round_err();
    return c;
}

Ball Ball::mul_2si(long e) const {
    Ball c(prec());
    mpfr_mul_2si(c.m_, m_, e, MPFR_RNDN);
    mpfr_mul_2si(c.r_, r_, e, MPFR_RNDU);
    return c;
}

Ball Ball::mul_q(const Rational& q) const {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return mul_si(q.get_num().get_si());
    return *this * Ball(q, prec());
}

std::string Ball::str(int digits) const {
    digits = std::max(digits, 2);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, m_);
    std::string mid(buf);
    mpfr_free_str(buf);
    Rational dec = parse_rational(mid);
    mpq_class m;
    mpfr_get_q(m.get_mpq_t(), m_);
    mpq_class diff = abs(m - dec);
    Tmp r, d;
    mpfr_set_q(d, diff.get_mpq_t(), MPFR_RNDU);
    mpfr_add(r, r_, d, MPFR_RNDU);
    mpfr_asprintf(&buf, "%.2RUe", static_cast<mpfr_ptr>(r));
    std::string rad(buf);
    mpfr_free_str(buf);
    return mid + " ± " + rad + " @" + std::to_string(prec());
}

Ball Ball::parse(const std::string& s, mpfr_prec_t prec) {
    std::string body = s;
    auto at = body.find('@');
    if (at != std::string::npos) {
        if (prec <= 0) prec = std::stol(body.substr(at + 1));
        body = body.substr(0, at);
    }
    if (prec <= 0) prec = default_prec();
    std::string sep = "±";
    auto pm = body.find(sep);
    size_t seplen = sep.size();
    if (pm == std::string::npos) {
        pm = body.find("+/-");
        seplen = 3;
    }
    Ball b(parse_rational(body.substr(0, pm)), prec);
    if (pm != std::string::npos) {
        Rational r = parse_rational(body.substr(pm + seplen));
        Tmp rr;
        mpfr_set_q(rr, r.get_mpq_t(), MPFR_RNDU);
        b.add_error(rr);
    }
    return b;
}

Ball sqr(const Ball& x) {
    Ball c(x.prec());
    int t = mpfr_sqr(c.mid_mut(), x.mid(), MPFR_RNDN);
    if (!x.is_exact()) {
        Tmp a, b;
        abs_up(a, x.mid());
        mpfr_mul_2ui(a, a, 1, MPFR_RNDU);
        mpfr_mul(a, a, x.rad(), MPFR_RNDU);
        mpfr_sqr(b, x.rad(), MPFR_RNDU);
        mpfr_add(c.rad_mut(), a, b, MPFR_RNDU);
    }
    if (t) add_ulp(c.rad_mut(), c.mid());
    if (!mpfr_number_p(c.mid()) || !mpfr_number_p(c.rad())) throw PrecisionError("ball overflow");
    return c;
}

Ball exp(const Ball& x) { return monotone(x, mpfr_exp); }

Ball log(const Ball& x) {
    if (!x.positive()) throw DomainError("log of a ball not strictly positive");
    return monotone(x, mpfr_log);
}

Ball sqrt(const Ball& x) {
    Tmp lo(x.prec());
    x.lower(lo);
    if (mpfr_sgn(lo) < 0) {
        if (mpfr_sgn(x.mid()) == 0 && x.is_exact()) return Ball(0, x.prec());
        throw DomainError("sqrt of a ball reaching below zero");
    }
    return monotone(x, mpfr_sqrt);
}

Ball tanh(const Ball& x) { return monotone(x, mpfr_tanh); }

Ball atanh(const Ball& x) {
    Tmp lo(x.prec()), hi(x.prec());
    x.lower(lo);
    x.upper(hi);
    if (mpfr_cmp_si(lo, -1) <= 0 || mpfr_cmp_si(hi, 1) >= 0) throw DomainError("atanh outside (-1, 1)");
    return monotone(x, mpfr_atanh);
}

namespace {
template <class F>
Ball lipschitz1(const Ball& x, F f) {
    Ball c(x.prec());
    if (f(c.mid_mut(), x.mid(), MPFR_RNDN) != 0) add_ulp(c.rad_mut(), c.mid());
    mpfr_add(c.rad_mut(), c.rad(), x.rad(), MPFR_RNDU);
    return c;
}
}  // namespace

Ball cos(const Ball& x) { return lipschitz1(x, mpfr_cos); }
Ball sin(const Ball& x) { return lipschitz1(x, mpfr_sin); }

Ball pow(const Ball& x, const Ball& y) {
    if (!x.positive()) throw DomainError("pow needs a strictly positive base");
    return exp(y * log(x));
}

Ball pow_ui(const Ball& x, unsigned long n) {
    Ball result(1, x.prec());
    Ball base = x;
    bool first = true;
    while (n) {
        if (n & 1UL) {
            result = first ? base : result * base;
            first = false;
        }
        n >>= 1;
        if (n) base = sqr(base);
    }
    return result;
}

Ball abs(const Ball& x) {
    if (mpfr_cmpabs(x.mid(), x.rad()) >= 0) return mpfr_sgn(x.mid()) >= 0 ? x : -x;
    Tmp hi(x.prec() + 64), z(x.prec());
    x.abs_upper(hi);
    mpfr_set_zero(z, 1);
    return from_interval(z, hi, x.prec());
}

Ball min(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    Tmp la(p), lb(p), ua(p), ub(p);
    a.lower(la);
    b.lower(lb);
    a.upper(ua);
    b.upper(ub);
    mpfr_min(la, la, lb, MPFR_RNDD);
    mpfr_min(ua, ua, ub, MPFR_RNDU);
    return from_interval(la, ua, p);
}

Ball max(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    Tmp la(p), lb(p), ua(p), ub(p);
    a.lower(la);
    b.lower(lb);
    a.upper(ua);
    b.upper(ub);
    mpfr_max(la, la, lb, MPFR_RNDD);
    mpfr_max(ua, ua, ub, MPFR_RNDU);
    return from_interval(la, ua, p);
}

Ball union_hull(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    Tmp la(p), lb(p), ua(p), ub(p);
    a.lower(la);
    b.lower(lb);
    a.upper(ua);
    b.upper(ub);
    mpfr_min(la, la, lb, MPFR_RNDD);
    mpfr_max(ua, ua, ub, MPFR_RNDU);
    return from_interval(la, ua, p);
}

Ball intersect(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    Tmp la(p), lb(p), ua(p), ub(p);
    a.lower(la);
    b.lower(lb);
    a.upper(ua);
    b.upper(ub);
    mpfr_max(la, la, lb, MPFR_RNDD);
    mpfr_min(ua, ua, ub, MPFR_RNDU);
    if (mpfr_cmp(la, ua) > 0) throw DomainError("disjoint enclosures");
    return from_interval(la, ua, p);
}

Rational to_rational(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw DomainError("non-finite value");
    mpz_class m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rational q(m);
    if (e > 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), e);
    else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), -e);
    q.canonicalize();
    return q;
}

bool certainly_lt(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec()) + 64;
    Tmp ua(p), lb(p);
    a.upper(ua);
    b.lower(lb);
    return mpfr_cmp(ua, lb) < 0;
}

bool certainly_le(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(a.prec(), b.prec()) + 64;
    Tmp ua(p), lb(p);
    a.upper(ua);
    b.lower(lb);
    return mpfr_cmp(ua, lb) <= 0;
}

bool certainly_lt(const Ball& a, const Rational& q) {
    Tmp ua(a.prec() + 64);
    a.upper(ua);
    mpq_class u;
    mpfr_get_q(u.get_mpq_t(), ua);
    return u < q;
}

bool certainly_gt(const Ball& a, const Rational& q) {
    Tmp la(a.prec() + 64);
    a.lower(la);
    mpq_class l;
    mpfr_get_q(l.get_mpq_t(), la);
    return l > q;
}

// ---------------------------------------------------------------- Expr

Expr Expr::constant(const Rational& q) {
    Expr e;
    e.op = Op::Const;
    e.value = q;
    return e;
}

Expr Expr::var(int index) {
    Expr e;
    e.op = Op::Input;
    e.input = index;
    return e;
}

Expr Expr::unary(Op op, Expr a) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    return e;
}

Expr Expr::binary(Op op, Expr a, Expr b) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Op::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Op::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Op::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Op::Div, std::move(a), std::move(b)); }

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ConfigError("expression: " + what + " at offset " + std::to_string(i) + " in '" + s + "'");
    }

    Expr expr() {
        Expr a = term();
        for (;;) {
            if (eat('+')) a = a + term();
            else if (eat('-')) a = a - term();
            else return a;
        }
    }
    Expr term() {
        Expr a = unary();
        for (;;) {
            if (eat('*')) a = a * unary();
            else if (eat('/')) a = a / unary();
            else return a;
        }
    }
    Expr unary() {
        if (eat('-')) return Expr::unary(Expr::Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    Expr power() {
        Expr a = primary();
        if (eat('^')) return Expr::binary(Expr::Op::Pow, std::move(a), unary());
        return a;
    }
    Expr primary() {
        ws();
        if (i >= s.size()) fail("unexpected end");
        if (eat('(')) {
            Expr a = expr();
            if (!eat(')')) fail("expected ')'");
            return a;
        }
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    j = k;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                }
            }
            Rational q = parse_rational(s.substr(i, j - i));
            i = j;
            return Expr::constant(q);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            if (name.size() >= 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1])))
                return Expr::var(std::stoi(name.substr(1)));
            using Op = Expr::Op;
            Op op;
            int arity = 1;
            if (name == "exp") op = Op::Exp;
            else if (name == "log") op = Op::Log;
            else if (name == "sqrt") op = Op::Sqrt;
            else if (name == "tanh") op = Op::Tanh;
            else if (name == "atanh" || name == "arctanh") op = Op::Atanh;
            else if (name == "abs") op = Op::Abs;
            else if (name == "min") { op = Op::Min; arity = 2; }
            else if (name == "max") { op = Op::Max; arity = 2; }
            else if (name == "pow") { op = Op::Pow; arity = 2; }
            else fail("unknown name '" + name + "'");
            if (!eat('(')) fail("expected '('");
            Expr a = expr();
            if (arity == 2) {
                if (!eat(',')) fail("expected ','");
                Expr b = expr();
                if (!eat(')')) fail("expected ')'");
                return Expr::binary(op, std::move(a), std::move(b));
            }
            if (!eat(')')) fail("expected ')'");
            return Expr::unary(op, std::move(a));
        }
        fail("unexpected character");
    }
};

}  // namespace

Expr Expr::parse(const std::string& text) {
    Parser p{text};
    Expr e = p.expr();
    p.ws();
    if (p.i != text.size()) p.fail("trailing input");
    return e;
}

std::optional<Rational> exact_eval(const Expr& e, const std::vector<Rational>& in) {
    using Op = Expr::Op;
    auto arg = [&](int k) { return exact_eval(e.args[k], in); };
    switch (e.op) {
        case Op::Const: return e.value;
        case Op::Input:
            if (e.input < 0 || static_cast<size_t>(e.input) >= in.size()) throw ConfigError("missing input");
            return in[e.input];
        case Op::Neg: {
            auto a = arg(0);
            if (!a) return std::nullopt;
            return Rational(-*a);
        }
        case Op::Abs: {
            auto a = arg(0);
            if (!a) return std::nullopt;
            return Rational(abs(*a));
        }
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Min: case Op::Max: {
            auto a = arg(0), b = arg(1);
            if (!a || !b) return std::nullopt;
            switch (e.op) {
                case Op::Add: return Rational(*a + *b);
                case Op::Sub: return Rational(*a - *b);
                case Op::Mul: return Rational(*a * *b);
                case Op::Div:
                    if (*b == 0) throw DomainError("exact division by zero");
                    return Rational(*a / *b);
                case Op::Min: return std::min(*a, *b);
                default: return std::max(*a, *b);
            }
        }
        case Op::Pow: {
            auto a = arg(0), b = arg(1);
            if (!a || !b || b->get_den() != 1 || !b->get_num().fits_slong_p()) return std::nullopt;
            long n = b->get_num().get_si();
            if (n < 0 && *a == 0) throw DomainError("zero to a negative power");
            mpz_class num, den;
            mpz_pow_ui(num.get_mpz_t(), a->get_num_mpz_t(), static_cast<unsigned long>(std::labs(n)));
            mpz_pow_ui(den.get_mpz_t(), a->get_den_mpz_t(), static_cast<unsigned long>(std::labs(n)));
            Rational q = n >= 0 ? Rational(num, den) : Rational(den, num);
            q.canonicalize();
            return q;
        }
        case Op::Exp: {
            auto a = arg(0);
            if (a && *a == 0) return Rational(1);
            return std::nullopt;
        }
        case Op::Log: {
            auto a = arg(0);
            if (a && *a == 1) return Rational(0);
            return std::nullopt;
        }
        case Op::Tanh: case Op::Atanh: {
            auto a = arg(0);
            if (a && *a == 0) return Rational(0);
            return std::nullopt;
        }
        case Op::Sqrt: {
            auto a = arg(0);
            if (!a || *a < 0) return std::nullopt;
            mpz_class n = a->get_num(), d = a->get_den(), rn, rd;
            if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
            mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
            return Rational(rn, rd);
        }
    }
    return std::nullopt;
}

Ball ball_eval(const Expr& e, const std::vector<Ball>& in, mpfr_prec_t prec) {
    using Op = Expr::Op;
    auto arg = [&](int k) { return ball_eval(e.args[k], in, prec); };
    switch (e.op) {
        case Op::Const: return Ball(e.value, prec);
        case Op::Input:
            if (e.input < 0 || static_cast<size_t>(e.input) >= in.size()) throw ConfigError("missing input");
            return in[e.input];
        case Op::Neg: return -arg(0);
        case Op::Add: return arg(0) + arg(1);
        case Op::Sub: return arg(0) - arg(1);
        case Op::Mul: return arg(0) * arg(1);
        case Op::Div: return arg(0) / arg(1);
        case Op::Exp: return exp(arg(0));
        case Op::Log: return log(arg(0));
        case Op::Sqrt: return sqrt(arg(0));
        case Op::Tanh: return tanh(arg(0));
        case Op::Atanh: return atanh(arg(0));
        case Op::Abs: return abs(arg(0));
        case Op::Min: return min(arg(0), arg(1));
        case Op::Max: return max(arg(0), arg(1));
        case Op::Pow: {
            if (e.args[1].op == Op::Const && e.args[1].value.get_den() == 1 &&
                e.args[1].value.get_num().fits_slong_p()) {
                long n = e.args[1].value.get_num().get_si();
                Ball b = pow_ui(arg(0), static_cast<unsigned long>(std::labs(n)));
                return n >= 0 ? b : Ball(1, prec) / b;
            }
            return pow(arg(0), arg(1));
        }
    }
    throw ConfigError("bad expression");
}

// ---------------------------------------------------------------- linear algebra

std::vector<Rational> linear_solve(const RMatrix& A0, const std::vector<Rational>& b0) {
    const size_t n = A0.size();
    if (b0.size() != n) throw DomainMismatch("linear_solve: size mismatch");
    RMatrix A = A0;
    std::vector<Rational> b = b0;
    for (size_t k = 0; k < n; ++k) {
        if (A[k].size() != n) throw DomainMismatch("linear_solve: matrix not square");
        size_t p = k;
        while (p < n && A[p][k] == 0) ++p;
        if (p == n) throw SingularMatrix("linear_solve: singular matrix");
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (size_t i = k + 1; i < n; ++i) {
            if (A[i][k] == 0) continue;
            Rational f = A[i][k] / A[k][k];
            for (size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<Rational> x(n);
    for (size_t k = n; k-- > 0;) {
        Rational s = b[k];
        for (size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
        x[k].canonicalize();
    }
    return x;
}

std::vector<Ball> linear_solve(const BMatrix& A0, const std::vector<Ball>& b0) {
    const size_t n = A0.size();
    if (b0.size() != n) throw DomainMismatch("linear_solve: size mismatch");
    BMatrix A = A0;
    std::vector<Ball> b = b0;
    for (size_t k = 0; k < n; ++k) {
        if (A[k].size() != n) throw DomainMismatch("linear_solve: matrix not square");
        size_t p = k;
        for (size_t i = k + 1; i < n; ++i)
            if (mpfr_cmpabs(A[i][k].mid(), A[p][k].mid()) > 0) p = i;
        if (A[p][k].contains_zero()) {
            if (A[p][k].is_exact()) throw SingularMatrix("linear_solve: singular matrix");
            throw IndeterminatePivot("linear_solve: pivot enclosure contains zero");
        }
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (size_t i = k + 1; i < n; ++i) {
            Ball f = A[i][k] / A[k][k];
            for (size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<Ball> x(n, Ball(b0.empty() ? default_prec() : b0[0].prec()));
    for (size_t k = n; k-- > 0;) {
        Ball s = b[k];
        for (size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
    }
    return x;
}

RMatrix inverse(const RMatrix& A) {
    const size_t n = A.size();
    RMatrix inv(n, std::vector<Rational>(n));
    for (size_t j = 0; j < n; ++j) {
        std::vector<Rational> e(n, Rational(0));
        e[j] = 1;
        auto col = linear_solve(A, e);
        for (size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

}  // namespace su2e
