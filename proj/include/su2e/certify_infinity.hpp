#pragma once

#include <optional>
#include <string>

#include "su2e/certify_local.hpp"
#include "su2e/model.hpp"

namespace su2e {

struct QuadOptions {
    int panels = 256;         // starting subdivision
    int max_panels = 1 << 16;
    double rel_tol = 1e-9;    // refine until rad/|value| is below this
};

// theta, phi and their antiderivatives on [-s0, 0] for constants A, B, C, D
struct GronwallData {
    Ball a0, a1, b0, b1;  // theta = a0 - a1 u, phi = b0 - b1 u, u = tau / (2 + tau)
};
GronwallData gronwall_data(const Rational& A, const Rational& B, const Rational& C, const Ball& D, mpfr_prec_t prec);

struct Envelope {
    Ball zeta_m;    // square root of the right side at tau = 0
    Ball zeta_sq;   // the right side itself
    Ball integral;  // outer integral
    int panels = 0;
};
// The outer integral at `panels` panels exactly (intersected with every
// coarser dyadic level, so refinement never widens it).
Ball gronwall_integral(const Ball& Z0_sq, const Ball& s0, const GronwallData& g, int panels);
Envelope gronwall_envelope(const Ball& Z0_sq, const Ball& s0, const Rational& A, const Rational& B,
                           const Rational& C, const Ball& D, const QuadOptions& q = {});

struct KBounds {
    Ball K0, K1;
};
// K1 needs s0 and zeta_m; pass them to get it, otherwise it is left empty (NaN-free zero ball)
KBounds compute_K0(const Ball& alpha0, const Ball& beta0, const Ball& gamma0,
                   const std::optional<Ball>& s0 = std::nullopt, const std::optional<Ball>& zeta_m = std::nullopt);

struct InfinityOptions {
    Rational A{3, 8};
    Rational B{43, 100};
    Rational C{-5, 2};
    Rational D_slack{1, 1 << 20};
    std::optional<Rational> D;  // overrides K0 (1 + D_slack)
    QuadOptions quad;
    mpfr_prec_t prec = 256;
};

struct InfinityCertificate {
    ModelParams params;
    Rational t_f;
    Rational A, B, C, D;
    Rational inf1_value;  // 2C + 1/B^2, exact
    Ball s0, r0, rho0, alpha0, beta0, gamma0, Z0_norm, zeta_m, K0, K1;
    std::array<Ball, 3> Z0;
    Ball assumption_C_margin;  // C - (Z1 + Z2 + Z3 - (4 - s0/(2 - s0)))
    Ball inf2_margin;          // 1/3 - zeta_m
    Ball inf3_margin;          // 4 + C - s0/(2 - s0) - sqrt(3) zeta_m
    Ball inf4_margin;          // D - K0
    std::map<std::string, bool> checks;  // assumption_C, assumption_D, inf1..inf4
    int panels = 0;
    Status status = Status::Indeterminate;
    std::string failed;
    std::string note;

    std::string to_json() const;
    static InfinityCertificate from_json(const std::string& s);
};

InfinityCertificate check_infinity(const LocalCertificate& local, const InfinityOptions& opt = {});
// lower-level entry: eta(t_f) enclosure and the fixed-point radius mu_bound
InfinityCertificate check_infinity(const ModelParams& p, const Rational& t_f, const Vec6& eta_tf,
                                   const Ball& mu_bound, const InfinityOptions& opt = {});

}  // namespace su2e
