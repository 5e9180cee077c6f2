#pragma once

#include <doctest.h>

#include "su2e/ball.hpp"

namespace th {

constexpr mpfr_prec_t P = 256;

inline su2e::Ball B(const char* s, mpfr_prec_t p = P) { return su2e::Ball(su2e::parse_rational(s), p); }
inline su2e::Ball B(long v, mpfr_prec_t p = P) { return su2e::Ball(v, p); }
inline su2e::Ball B(int v, mpfr_prec_t p = P) { return su2e::Ball(static_cast<long>(v), p); }
inline su2e::Rational Q(const char* s) { return su2e::parse_rational(s); }

// |x - v| <= tol for every member
inline bool near(const su2e::Ball& x, double v, double tol) {
    return x.lower_d() >= v - tol && x.upper_d() <= v + tol;
}

}  // namespace th
