#pragma once

#include <functional>
#include <vector>

#include "su2e/poly.hpp"

namespace su2e {

struct SturmChain {
    std::vector<IntervalPoly> polys;  // monomial
};

// P_0 = P, P_1 = P', P_{i+1} = -rem(P_{i-1}, P_i), each rescaled by a power of two.
SturmChain sturm_chain(const IntervalPoly& P);
int sign_variations(const SturmChain& chain, const Rational& x);
// Distinct real roots in (a, b].
int count_roots(const IntervalPoly& P, const Rational& a, const Rational& b);
int count_roots(const SturmChain& chain, const Rational& a, const Rational& b);

// Smallest eps (to relative `sharpness`) with check(eps) true; check(hi) must hold.
Ball binary_search_bound(const std::function<bool(const Rational&)>& check, Rational lo, Rational hi,
                         const Rational& sharpness, int max_iter = 200);

struct SupOptions {
    Rational rho = Rational(1, 2);
    Rational sharpness = Rational(1, 1024);
    mpfr_prec_t prec = 0;      // chain precision floor; 0 means the inputs' own
    int max_doublings = 3;     // precision escalations on IndeterminateSign
    int samples = 4000;
    Rational floor = Rational(1, mpz_class(1) << 400);
};

struct SupBound {
    Ball eps;              // certified: |P/Q| < eps
    double sample_max = 0;
    int checks = 0;
    mpfr_prec_t prec_used = 0;
};

// |P/Q| < eps on [a, b]; P, Q monomial with Ball coefficients.
SupBound bound_rational_sup(const IntervalPoly& P, const IntervalPoly& Q, const Rational& a, const Rational& b,
                            const SupOptions& opt = {});
// Same for Chebyshev models over their common domain. Q may be null (Q = 1).
SupBound bound_model_sup(const ChebModel& P, const ChebModel* Q, const SupOptions& opt = {});
// Certified positivity of a Chebyshev model on its whole domain.
bool model_positive(const ChebModel& Q, const SupOptions& opt = {});

}  // namespace su2e
