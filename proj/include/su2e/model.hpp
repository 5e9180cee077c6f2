#pragma once

#include <array>
#include <vector>

#include "su2e/ball.hpp"

namespace su2e {

enum class Bolt { Nut, OMinus4, OMinus2, OMinus1 };
const char* bolt_name(Bolt b);
Bolt parse_bolt(const std::string& s);

struct ModelParams {
    Rational h = Rational(3, 2);
    Rational b1 = Rational(1, 10);
    Rational Lambda = -3;
    Bolt bolt = Bolt::OMinus4;
};

// The 6x6 matrix of the singular term and lambda = (h-1)^2/(2h).
RMatrix build_L(const Rational& h);
Rational lambda_of(const Rational& h);
// Coefficients of det(x I - L), highest degree first.
std::vector<Rational> char_poly(const RMatrix& A);

using Vec6 = std::array<Ball, 6>;

// Reciprocals inside M are only ever taken of W = 1/2 + t eta1 or of
// E = (X2 X3)^2; rational-function evaluators rely on the tag.
enum class RecipTag { W, E };

// M(t, eta) in a form whose only denominators are W and E, so every component
// is manifestly smooth at t = 0. S needs + - * and unary -, Ops supplies
// S c(Rational) and S recip(const S&, RecipTag).
template <class S, class Ops>
std::array<S, 6> M_smooth(const S& t, const std::array<S, 6>& eta, const ModelParams& p, Ops& ops) {
    const Rational& h = p.h;
    const Rational& b1 = p.b1;
    const Rational h2 = h * h;
    const S& e1 = eta[0];
    const S& e2 = eta[1];
    const S& e3 = eta[2];
    const S& e4 = eta[3];
    const S& e5 = eta[4];
    const S& e6 = eta[5];

    const S W = ops.c(Rational(1, 2)) + t * e1;
    const S p2 = e2 - ops.c(Rational(b1 / h2));
    const S p3 = e3 + ops.c(Rational(b1 / h2));
    const S X2 = ops.c(Rational(1 / h)) + t * p2;
    const S X3 = ops.c(Rational(1 / h)) + t * p3;
    const S D = ops.c(Rational(2 * b1 / h2)) + e3 - e2;
    const S Ssum = X2 + X3;
    const S X22 = X2 * X2;
    const S X33 = X3 * X3;
    const S Q = X22 + X33;
    const S pi = X2 * X3;
    const S E = pi * pi;
    const S s1 = p2 + p3;
    const S s2 = p2 * p2 + p3 * p3;
    const S pr = p2 * p3;
    const S t2 = t * t;
    // K = W^2 S Q - h E = t Kt
    const S Kt = e1 * Ssum * Q * (ops.c(1) + t * e1) - ops.c(Rational(1 / (2 * h2))) * s1 -
                 ops.c(Rational(3 / h)) * (t * pr) + t2 * s1 * (ops.c(Rational(1, 4)) * s2 - ops.c(2) * pr) -
                 ops.c(h) * (t2 * t * (pr * pr));
    const S iW = ops.recip(W, RecipTag::W);
    const S iE = ops.recip(E, RecipTag::E);
    const S A = ops.c(Rational(1, 2)) * t2 * E * (iW * iW);
    const S R1 = A - ops.c(Rational(1, 2)) * (W * W) * (D * D) * (Ssum * Ssum) * iE;
    const S sig = e4 + e5 + e6;
    const S DK = ops.c(Rational(1, 2)) * D * Kt * iE;
    const S three = ops.c(3);
    return {
        -(e1 * e4),
        ops.c(Rational(b1 * b1 / (h2 * h))) + ops.c(Rational(b1 / h2)) * e5 - ops.c(Rational(b1 / h)) * e2 - e2 * e5,
        ops.c(Rational(b1 * b1 / (h2 * h))) - ops.c(Rational(b1 / h2)) * e6 + ops.c(Rational(b1 / h)) * e3 - e3 * e6,
        R1 + three - e4 * sig,
        X22 - A + three + DK - (ops.c(Rational(b1 / h)) + e5) * sig,
        X33 - A + three - DK - (e6 - ops.c(Rational(b1 / h))) * sig,
    };
}

struct BallOps {
    mpfr_prec_t prec;
    Ball c(const Rational& q) const { return Ball(q, prec); }
    Ball recip(const Ball& x, RecipTag) const { return Ball(1, prec) / x; }
};

Vec6 eval_M(const Ball& t, const Vec6& eta, const ModelParams& p);
// (1/t) L eta + M(t, eta)
Vec6 eval_rhs(const Ball& t, const Vec6& eta, const ModelParams& p);
// M from the a, b, c form of the equations (needs t > 0); cross-check only
Vec6 eval_M_direct(const Ball& t, const Vec6& eta, const ModelParams& p);

// X = (1/a, 1/b, 1/c), Y = (a'/a, b'/b, c'/c) recovered from eta
struct MetricState {
    std::array<Ball, 3> X, Y;
};
MetricState metric_from_eta(const Ball& t, const Vec6& eta, const ModelParams& p);
Vec6 eta_from_metric(const Ball& t, const MetricState& m, const ModelParams& p);

// Conservation law, left minus right side.
// t frame: a, b, c and their logarithmic derivatives
Ball conservation_residual_t(const std::array<Ball, 3>& abc, const std::array<Ball, 3>& Y, const Rational& Lambda);
// r frame: alpha, beta, gamma with d/dr log derivatives at radius r
Ball conservation_residual_r(const std::array<Ball, 3>& abg, const std::array<Ball, 3>& dlog, const Ball& r);
// t -> r frame: alpha = rho a, alpha'/alpha = Y/rho - r/rho
void transfer_t_to_r(const Ball& t, const std::array<Ball, 3>& abc, const std::array<Ball, 3>& Y,
                     std::array<Ball, 3>& abg, std::array<Ball, 3>& dlog, Ball& r);

// Values at t_f feeding the infinity lemma.
struct FrameTransfer {
    Ball s0, r0, rho0, alpha0, beta0, gamma0;
    std::array<Ball, 3> Z;
};
// mu_bound widens each eta component before the transfer
FrameTransfer frame_transfer(const Ball& tf, const Vec6& eta_tf, const ModelParams& p, const Ball& mu_bound);

// Derivatives at t = 0 of a, b, c (index k holds the k-th derivative).
// Free parameters: Nut (a3, b3); OMinus4 (h, b1); OMinus2 (h, b2); OMinus1 (h, b4).
struct BoundaryData {
    Bolt bolt;
    std::vector<Rational> a, b, c;
    // truncated Taylor polynomial and its derivative at t
    std::array<double, 3> value(double t) const;
    std::array<double, 3> slope(double t) const;
};
BoundaryData boundary_series(Bolt bolt, const Rational& p, const Rational& q, const Rational& Lambda = -3,
                             int order = 4);

}  // namespace su2e
