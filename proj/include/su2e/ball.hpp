#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>
#include <vector>

#include "su2e/errors.hpp"

namespace su2e {

using Rational = mpq_class;

// Decimal ("0.1", "-2.5e-3") or fraction ("1/10") notation, parsed exactly.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

// Used only when a Ball is built without an explicit precision.
mpfr_prec_t default_prec();
void set_default_prec(mpfr_prec_t bits);
inline mpfr_prec_t digits_to_bits(long digits) { return static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 8; }

// Real enclosure mid ± rad. The midpoint carries the working precision, the
// radius is a 64-bit float that is only ever rounded up.
class Ball {
public:
    explicit Ball(mpfr_prec_t prec = default_prec());
    Ball(long v, mpfr_prec_t prec);
    Ball(const Rational& q, mpfr_prec_t prec);
    Ball(const Ball& o);
    Ball(Ball&& o) noexcept;
    Ball& operator=(const Ball& o);
    Ball& operator=(Ball&& o) noexcept;
    ~Ball();

    static Ball from_double(double v, mpfr_prec_t prec);
    // Any finite mpfr value, taken exactly (precision widened if needed).
    static Ball exact(mpfr_srcptr v, mpfr_prec_t prec);
    static Ball pi(mpfr_prec_t prec);
    static Ball e(mpfr_prec_t prec);

    mpfr_srcptr mid() const { return m_; }
    mpfr_srcptr rad() const { return r_; }
    mpfr_ptr mid_mut() { return m_; }
    mpfr_ptr rad_mut() { return r_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(m_); }

    double mid_d() const { return mpfr_get_d(m_, MPFR_RNDN); }
    double rad_d() const { return mpfr_get_d(r_, MPFR_RNDU); }
    bool is_exact() const { return mpfr_zero_p(r_); }
    bool contains_zero() const;
    bool positive() const;  // every member > 0
    bool negative() const;  // every member < 0
    int sign() const;       // +1, -1, or throws IndeterminateSign
    bool contains(const Rational& q) const;
    bool contains(const Ball& o) const;
    bool overlaps(const Ball& o) const;
    // endpoints rounded outward to `prec` bits
    void lower(mpfr_ptr out) const;
    void upper(mpfr_ptr out) const;
    double upper_d() const;
    double lower_d() const;
    // outward-rounded |x| upper bound, 64 bits
    void abs_upper(mpfr_ptr out) const;

    void add_error(mpfr_srcptr e);  // rad += e
    void add_error_d(double e);
    Ball with_prec(mpfr_prec_t prec) const;
    Ball midpoint() const;  // radius dropped
    Ball widened(double extra) const;

    // "mid ± rad @bits", mid with `digits` significant digits; the printed
    // radius covers the decimal rounding of the midpoint.
    std::string str(int digits = 30) const;
    static Ball parse(const std::string& s, mpfr_prec_t prec);

    friend Ball operator+(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a, const Ball& b);
    friend Ball operator*(const Ball& a, const Ball& b);
    friend Ball operator/(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a);
    Ball& operator+=(const Ball& b);
    Ball& operator-=(const Ball& b);
    Ball& operator*=(const Ball& b) { return *this = *this * b; }
    Ball& operator/=(const Ball& b) { return *this = *this / b; }
    // *this += a*b (or -=) with a single rounding of the midpoint
    void addmul(const Ball& a, const Ball& b);
    void submul(const Ball& a, const Ball& b);

    Ball mul_si(long k) const;
    Ball div_si(long k) const;
    Ball mul_2si(long e) const;  // exact scaling by 2^e
    Ball mul_q(const Rational& q) const;

private:
    mpfr_t m_;
    mpfr_t r_;
    void round_err();  // add the RNDN rounding error of m_ to r_
    void check_finite() const;
    friend class BallAccess;
};

Ball sqr(const Ball& x);
Ball exp(const Ball& x);
Ball log(const Ball& x);
Ball sqrt(const Ball& x);
Ball tanh(const Ball& x);
Ball atanh(const Ball& x);
Ball cos(const Ball& x);
Ball sin(const Ball& x);
Ball pow(const Ball& x, const Ball& y);  // exp(y log x), x > 0
Ball pow_ui(const Ball& x, unsigned long n);
Ball abs(const Ball& x);
Ball min(const Ball& a, const Ball& b);
Ball max(const Ball& a, const Ball& b);
Ball union_hull(const Ball& a, const Ball& b);
// common part of two enclosures of the same number; DomainError if disjoint
Ball intersect(const Ball& a, const Ball& b);
// exact rational value of an mpfr number
Rational to_rational(mpfr_srcptr x);

// Strict comparisons decided from enclosure endpoints only.
bool certainly_lt(const Ball& a, const Ball& b);
bool certainly_le(const Ball& a, const Ball& b);
bool certainly_lt(const Ball& a, const Rational& q);
bool certainly_gt(const Ball& a, const Rational& q);

// Expression trees for closed-form constants.
struct Expr {
    enum class Op { Const, Input, Add, Sub, Mul, Div, Neg, Exp, Log, Sqrt, Tanh, Atanh, Pow, Abs, Min, Max };
    Op op = Op::Const;
    Rational value;
    int input = -1;
    std::vector<Expr> args;

    static Expr constant(const Rational& q);
    static Expr var(int index);
    static Expr unary(Op op, Expr a);
    static Expr binary(Op op, Expr a, Expr b);
    // infix: numbers, x0..x9, + - * / ^, exp log sqrt tanh atanh arctanh abs min max, e, pi not supported
    static Expr parse(const std::string& text);
};
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);

Ball ball_eval(const Expr& e, const std::vector<Ball>& inputs, mpfr_prec_t prec);
// Exact value when the tree stays inside the rationals (integer powers only).
std::optional<Rational> exact_eval(const Expr& e, const std::vector<Rational>& inputs);

using RMatrix = std::vector<std::vector<Rational>>;
using BMatrix = std::vector<std::vector<Ball>>;
std::vector<Rational> linear_solve(const RMatrix& A, const std::vector<Rational>& b);
std::vector<Ball> linear_solve(const BMatrix& A, const std::vector<Ball>& b);
RMatrix inverse(const RMatrix& A);

}  // namespace su2e
