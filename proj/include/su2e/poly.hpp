#pragma once

#include <string>
#include <vector>

#include "su2e/ball.hpp"

namespace su2e {

enum class Basis { Monomial, Chebyshev };

// Dense polynomial with Ball coefficients. A Chebyshev polynomial lives on
// [lo, hi] through x = (2t - lo - hi)/(hi - lo); coeffs[0] is the full T_0
// coefficient (no halving convention).
struct IntervalPoly {
    std::vector<Ball> coeffs;
    Basis basis = Basis::Monomial;
    Rational lo = -1, hi = 1;

    IntervalPoly() = default;
    IntervalPoly(std::vector<Ball> c, Basis b, Rational l = -1, Rational h = 1)
        : coeffs(std::move(c)), basis(b), lo(std::move(l)), hi(std::move(h)) {}

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    mpfr_prec_t prec() const;
    // t in domain coordinates
    Ball eval(const Ball& t) const;
    // x in [-1, 1] reference coordinates (Chebyshev only)
    Ball eval_ref(const Ball& x) const;
    void trim();  // drop trailing exact zeros

    std::string to_json() const;
    static IntervalPoly from_json(const std::string& s, mpfr_prec_t prec);
};

// Points t_k of the domain matching cos(pi (k - 1/2)/N), k = 1..N.
std::vector<Ball> cheb_nodes(int N, const Rational& lo, const Rational& hi, mpfr_prec_t prec);
// Raw c_j = (2/N) sum_k f(x_k) T_j(x_k), j < N.
std::vector<Ball> cheb_coefficients(const std::vector<Ball>& samples, mpfr_prec_t prec);
// sum c_k T_k - c_0/2
IntervalPoly cheb_fit(const std::vector<Ball>& samples, const Rational& lo, const Rational& hi);

IntervalPoly cheb_product(const IntervalPoly& p, const IntervalPoly& q);
IntervalPoly poly_add(const IntervalPoly& p, const IntervalPoly& q);
IntervalPoly poly_scale(const IntervalPoly& p, const Ball& s);

// Chebyshev antiderivative in t, pinned to 0 at t = lo.
IntervalPoly cheb_antiderivative(const IntervalPoly& p);
// Monomial antiderivative in t with constant coefficient exactly zero.
IntervalPoly cheb_integrate_zero_pinned(const IntervalPoly& p);
// d/dt in the polynomial's own basis and domain.
IntervalPoly derivative(const IntervalPoly& p);

// Monomial polynomial in the domain variable t.
IntervalPoly cheb_to_monomial_t(const IntervalPoly& p, mpfr_prec_t work_prec = 0);
// P~(y) = P(rho y), P in the reference variable x (Chebyshev) or t (monomial).
IntervalPoly to_monomial_rescaled(const IntervalPoly& p, const Rational& rho, mpfr_prec_t work_prec = 0);

// Chebyshev model: polynomial in the reference variable plus an absolute
// deviation bound delta valid on the whole domain. Products are truncated
// at `cap`, the dropped tail is moved into delta.
class ChebModel {
public:
    std::vector<Ball> c;
    long double delta = 0;
    int cap = 64;
    Rational lo = 0, hi = 1;

    ChebModel() = default;
    ChebModel(std::vector<Ball> coeffs, int cap_, Rational l, Rational h, long double d = 0)
        : c(std::move(coeffs)), delta(d), cap(cap_), lo(std::move(l)), hi(std::move(h)) {}

    static ChebModel constant(const Ball& v, int cap, const Rational& lo, const Rational& hi);
    static ChebModel constant(const Rational& q, mpfr_prec_t prec, int cap, const Rational& lo, const Rational& hi);
    // the identity t on [lo, hi]
    static ChebModel time(mpfr_prec_t prec, int cap, const Rational& lo, const Rational& hi);
    static ChebModel from_poly(const IntervalPoly& p, int cap);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    mpfr_prec_t prec() const;
    IntervalPoly poly() const { return IntervalPoly(c, Basis::Chebyshev, lo, hi); }
    Ball eval(const Ball& t) const;  // includes delta
    long double norm_upper() const;  // sum |c_k| + delta, a sup bound
    // exact dyadic midpoints with every radius folded into delta
    ChebModel split() const;
    ChebModel truncated(int new_cap) const;
    ChebModel with_cap(int new_cap) const;
    // q with (t - lo) q = *this; needs delta = 0 and an exact root at lo
    ChebModel divide_by_t_minus_lo() const;

    ChebModel& operator+=(const ChebModel& o);
    ChebModel& operator-=(const ChebModel& o);
    ChebModel operator-() const;
    ChebModel scaled(const Ball& s) const;
    ChebModel mul_t() const;  // multiply by the domain variable t
};
ChebModel operator+(ChebModel a, const ChebModel& b);
ChebModel operator-(ChebModel a, const ChebModel& b);
ChebModel operator*(const ChebModel& a, const ChebModel& b);

// upward-rounded helpers for long double deviation bounds
long double up_add(long double a, long double b);
long double up_mul(long double a, long double b);
long double abs_upper_ld(const Ball& b);
long double rad_upper_ld(const Ball& b);

}  // namespace su2e
