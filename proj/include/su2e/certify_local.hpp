#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "su2e/jet.hpp"
#include "su2e/model.hpp"
#include "su2e/poly.hpp"
#include "su2e/series.hpp"
#include "su2e/sturm.hpp"

namespace su2e {

// ---- rational functions num / (W^a E^b) over Chebyshev models ----

struct FracCtx {
    ChebModel W, E, one;
    int cap;
    std::vector<ChebModel> Wp, Ep;  // cached powers, Wp[k] = W^k
    FracCtx(ChebModel W_, ChebModel E_, int cap_);
    const ChebModel& Wpow(int k);
    const ChebModel& Epow(int k);
    // W^a E^b
    ChebModel den(int a, int b);
};

struct Frac {
    ChebModel num;
    int a = 0, b = 0;
    FracCtx* ctx = nullptr;
};
Frac operator+(const Frac& x, const Frac& y);
Frac operator-(const Frac& x, const Frac& y);
Frac operator-(const Frac& x);
Frac operator*(const Frac& x, const Frac& y);

struct FracOps {
    FracCtx* ctx;
    mpfr_prec_t prec;
    Frac c(const Rational& q) const;
    // only ever applied to W or E themselves (see RecipTag)
    Frac recip(const Frac& x, RecipTag tag) const;
};

// ---- approximate solution ----

struct ApproxSolution {
    ModelParams params;
    Rational t_f;
    int degree = 0;                      // fit degree of eta_hat_D
    std::array<IntervalPoly, 6> eta_hat_D;  // Chebyshev on [0, t_f], exact coefficients
    std::array<IntervalPoly, 6> eta_hat;    // Chebyshev, exact antiderivative pinned at 0

    std::string to_json() const;
    static ApproxSolution from_json(const std::string& s, mpfr_prec_t prec);
    // eta_hat in the monomial basis, constant term exactly zero
    std::array<IntervalPoly, 6> monomial() const;
};

// eta~_D = (1/t) L eta~ + M at the degree+1 Chebyshev nodes, fitted, midpoints taken.
ApproxSolution fit_approx_solution(const SeriesChain& chain, int degree);
// generic version: any sampler of eta~ on (0, t_f]
ApproxSolution fit_approx_solution(const ModelParams& p, const Rational& t_f, int degree,
                                   const std::function<Vec6(const Ball&)>& eta_tilde, mpfr_prec_t prec);

struct LocalOptions {
    int cap_eps = 200;       // Chebyshev truncation for the defect
    int cap_lin = 80;        // for C_l, C_nl
    mpfr_prec_t lin_prec = 256;
    SupOptions sup;          // sturm settings
    int cubic_panels = 200;
    mpfr_prec_t cubic_prec = 128;
};

struct DefectBound {
    Ball eps;
    std::array<Ball, 6> components;
};
DefectBound bound_defect(const ApproxSolution& A, const LocalOptions& opt = {});

struct LinearBound {
    Ball C_l;
    Ball n00, n01, n10, n11;
    Ball C_nl_quad;                  // before the cubic inflation
    std::array<Ball, 6> row_quad;    // per-row quadratic constants
};
LinearBound bound_linearization(const ApproxSolution& A, const LocalOptions& opt = {});

// cubic coefficient per row over the tube |mu| <= r around eta_hat
std::array<Ball, 6> cubic_inflation(const ApproxSolution& A, const Ball& r, const LocalOptions& opt = {});

struct Constants {
    Ball lambda, B, t0, I_tf, eps0, radius;
};
Constants compute_constants(const Rational& h, const Ball& C_l, const Ball& C_nl, const Rational& t_f);

enum class Status { Certified, Failed, Indeterminate };
const char* status_name(Status s);

struct LocalCertificate {
    ModelParams params;
    Rational t_f;
    int degree = 0;
    Ball C_l, C_nl, C_nl_quad, lambda, B, t0, I_tf, eps, eps0, mu_bound;
    std::array<Ball, 6> eps_components;
    std::array<Ball, 4> norm_blocks;  // M00, M01, M10, M11
    std::map<std::string, bool> hypotheses;  // hyp1..hyp4
    Status status = Status::Indeterminate;
    std::string failed;  // name of the failing hypothesis or precondition
    std::string note;
    std::vector<Ball> eta_tf;  // eta_hat(t_f), 6 entries

    std::string to_json() const;
    static LocalCertificate from_json(const std::string& s);
};

LocalCertificate check_existence(const ApproxSolution& A, const LocalOptions& opt = {});

// Preconditions for certification: h^2 > 31/92 and lambda < 1.
void check_parameters(const ModelParams& p);

}  // namespace su2e
