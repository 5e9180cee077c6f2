#include "su2e/model.hpp"

#include <algorithm>
#include <cmath>

namespace su2e {

const char* bolt_name(Bolt b) {
    switch (b) {
        case Bolt::Nut: return "nut";
        case Bolt::OMinus4: return "O(-4)";
        case Bolt::OMinus2: return "O(-2)";
        case Bolt::OMinus1: return "O(-1)";
    }
    return "?";
}

Bolt parse_bolt(const std::string& s) {
    if (s == "nut") return Bolt::Nut;
    if (s == "O(-4)" || s == "ominus4" || s == "o4") return Bolt::OMinus4;
    if (s == "O(-2)" || s == "ominus2" || s == "o2") return Bolt::OMinus2;
    if (s == "O(-1)" || s == "ominus1" || s == "o1") return Bolt::OMinus1;
    throw ConfigError("unknown bolt type '" + s + "'");
}

RMatrix build_L(const Rational& h) {
    if (h <= 0) throw DomainError("h must be positive");
    const Rational ih = 1 / h, hh = h / 2;
    const Rational z = 0;
    return {
        {-1, z, z, Rational(-1, 2), z, z},
        {z, -1, z, z, Rational(-ih), z},
        {z, z, -1, z, z, Rational(-ih)},
        {z, z, z, -2, -1, -1},
        {z, Rational(-hh), hh, z, -1, z},
        {z, hh, Rational(-hh), z, z, -1},
    };
}

Rational lambda_of(const Rational& h) {
    Rational l = (h - 1) * (h - 1) / (2 * h);
    l.canonicalize();
    return l;
}

std::vector<Rational> char_poly(const RMatrix& A) {
    // Faddeev-LeVerrier
    const size_t n = A.size();
    std::vector<Rational> c(n + 1);
    c[0] = 1;
    RMatrix M(n, std::vector<Rational>(n, 0));
    for (size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I
        RMatrix N(n, std::vector<Rational>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Rational s = 0;
                for (size_t l = 0; l < n; ++l) s += A[i][l] * M[l][j];
                N[i][j] = s + (i == j ? c[k - 1] : Rational(0));
            }
        M = N;
        Rational tr = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
        c[k] = -tr / Rational(static_cast<long>(k));
        c[k].canonicalize();
    }
    return c;
}

namespace {

mpfr_prec_t vec_prec(const Ball& t, const Vec6& e) {
    mpfr_prec_t p = t.prec();
    for (const auto& x : e) p = std::max(p, x.prec());
    return p;
}

Ball R_of(const Ball& a, const Ball& b, const Ball& c) {
    const Ball a2 = sqr(a), b2 = sqr(b), c2 = sqr(c);
    return (sqr(a2) - sqr(b2 - c2)) / (a2 * b2 * c2).mul_si(2);
}

}  // namespace

Vec6 eval_M(const Ball& t, const Vec6& eta, const ModelParams& p) {
    BallOps ops{vec_prec(t, eta)};
    return M_smooth(t, eta, p, ops);
}

Vec6 eval_rhs(const Ball& t, const Vec6& eta, const ModelParams& p) {
    const mpfr_prec_t prec = vec_prec(t, eta);
    Vec6 m = eval_M(t, eta, p);
    const RMatrix L = build_L(p.h);
    for (int i = 0; i < 6; ++i) {
        Ball s(prec);
        for (int j = 0; j < 6; ++j)
            if (L[i][j] != 0) s.addmul(Ball(L[i][j], prec), eta[j]);
        m[i] += s / t;
    }
    return m;
}

MetricState metric_from_eta(const Ball& t, const Vec6& eta, const ModelParams& p) {
    const mpfr_prec_t prec = vec_prec(t, eta);
    const Rational& h = p.h;
    const Ball one(1, prec);
    MetricState m;
    m.X[0] = one / t.mul_si(2) + eta[0];
    m.X[1] = Ball(Rational(1 / h), prec) - t.mul_q(Rational(p.b1 / (h * h))) + t * eta[1];
    m.X[2] = Ball(Rational(1 / h), prec) + t.mul_q(Rational(p.b1 / (h * h))) + t * eta[2];
    m.Y[0] = one / t + eta[3];
    m.Y[1] = Ball(Rational(p.b1 / h), prec) + eta[4];
    m.Y[2] = Ball(Rational(-p.b1 / h), prec) + eta[5];
    return m;
}

Vec6 eta_from_metric(const Ball& t, const MetricState& m, const ModelParams& p) {
    const mpfr_prec_t prec = std::max(t.prec(), m.X[0].prec());
    const Rational& h = p.h;
    const Ball one(1, prec);
    Vec6 e;
    e[0] = m.X[0] - one / t.mul_si(2);
    e[1] = (m.X[1] - Ball(Rational(1 / h), prec) + t.mul_q(Rational(p.b1 / (h * h)))) / t;
    e[2] = (m.X[2] - Ball(Rational(1 / h), prec) - t.mul_q(Rational(p.b1 / (h * h)))) / t;
    e[3] = m.Y[0] - one / t;
    e[4] = m.Y[1] - Ball(Rational(p.b1 / h), prec);
    e[5] = m.Y[2] + Ball(Rational(p.b1 / h), prec);
    return e;
}

Vec6 eval_M_direct(const Ball& t, const Vec6& eta, const ModelParams& p) {
    const mpfr_prec_t prec = vec_prec(t, eta);
    const MetricState m = metric_from_eta(t, eta, p);
    const Ball one(1, prec);
    const Ball a = one / m.X[0], b = one / m.X[1], c = one / m.X[2];
    const Ball ys = m.Y[0] + m.Y[1] + m.Y[2];
    const Ball lam(p.Lambda, prec);
    const std::array<Ball, 3> R = {R_of(a, b, c), R_of(b, c, a), R_of(c, a, b)};
    std::array<Ball, 3> Xd, Yd;
    for (int i = 0; i < 3; ++i) {
        Xd[i] = -(m.X[i] * m.Y[i]);
        Yd[i] = R[i] - m.Y[i] * ys - lam;
    }
    const Rational bh2 = p.b1 / (p.h * p.h);
    Vec6 ed;
    ed[0] = Xd[0] + one / sqr(t).mul_si(2);
    ed[1] = (Xd[1] + Ball(bh2, prec) - eta[1]) / t;
    ed[2] = (Xd[2] - Ball(bh2, prec) - eta[2]) / t;
    ed[3] = Yd[0] + one / sqr(t);
    ed[4] = Yd[1];
    ed[5] = Yd[2];
    const RMatrix L = build_L(p.h);
    for (int i = 0; i < 6; ++i) {
        Ball s(prec);
        for (int j = 0; j < 6; ++j)
            if (L[i][j] != 0) s.addmul(Ball(L[i][j], prec), eta[j]);
        ed[i] -= s / t;
    }
    return ed;
}

Ball conservation_residual_t(const std::array<Ball, 3>& abc, const std::array<Ball, 3>& Y, const Rational& Lambda) {
    const Ball a2 = sqr(abc[0]), b2 = sqr(abc[1]), c2 = sqr(abc[2]);
    const Ball num = (a2 * b2 + b2 * c2 + c2 * a2).mul_si(2) - sqr(a2) - sqr(b2) - sqr(c2);
    const Ball lhs = num / (a2 * b2 * c2).mul_si(2);
    const Ball rhs = (Y[0] * Y[1] + Y[1] * Y[2] + Y[2] * Y[0]).mul_si(2) + Ball(Rational(2 * Lambda), a2.prec());
    return lhs - rhs;
}

Ball conservation_residual_r(const std::array<Ball, 3>& abg, const std::array<Ball, 3>& u, const Ball& r) {
    const mpfr_prec_t prec = r.prec();
    const Ball rho = (Ball(1, prec) - sqr(r)).mul_2si(-1);
    const Ball q = r / rho;
    const Ball a2 = sqr(abg[0]), b2 = sqr(abg[1]), c2 = sqr(abg[2]);
    const Ball num = (a2 * b2 + b2 * c2 + c2 * a2).mul_si(2) - sqr(a2) - sqr(b2) - sqr(c2);
    const Ball lhs = num / (a2 * b2 * c2).mul_si(2);
    const Ball v0 = u[0] + q, v1 = u[1] + q, v2 = u[2] + q;
    const Ball rhs = (v0 * v1 + v1 * v2 + v2 * v0).mul_si(2) - Ball(6, prec) / sqr(rho);
    return lhs - rhs;
}

void transfer_t_to_r(const Ball& t, const std::array<Ball, 3>& abc, const std::array<Ball, 3>& Y,
                     std::array<Ball, 3>& abg, std::array<Ball, 3>& dlog, Ball& r) {
    r = tanh(t.mul_2si(-1));
    const Ball rho = (Ball(1, t.prec()) - sqr(r)).mul_2si(-1);
    for (int i = 0; i < 3; ++i) {
        abg[i] = rho * abc[i];
        dlog[i] = (Y[i] - r) / rho;
    }
}

FrameTransfer frame_transfer(const Ball& tf, const Vec6& eta_tf, const ModelParams& p, const Ball& mu_bound) {
    if (!tf.positive()) throw DomainError("t_f must be positive");
    Vec6 e = eta_tf;
    mpfr_t mu;
    mpfr_init2(mu, 64);
    mu_bound.abs_upper(mu);
    for (auto& x : e) x.add_error(mu);
    mpfr_clear(mu);
    const MetricState m = metric_from_eta(tf, e, p);
    FrameTransfer out;
    const mpfr_prec_t prec = tf.prec();
    out.r0 = tanh(tf.mul_2si(-1));
    out.s0 = Ball(1, prec) - out.r0;
    out.rho0 = (Ball(1, prec) - sqr(out.r0)).mul_2si(-1);
    for (const auto& x : m.X)
        if (!x.positive()) throw DomainError("metric coefficient not positive at t_f");
    out.alpha0 = out.rho0 / m.X[0];
    out.beta0 = out.rho0 / m.X[1];
    out.gamma0 = out.rho0 / m.X[2];
    for (int i = 0; i < 3; ++i) out.Z[i] = Ball(1, prec) + (out.r0 - m.Y[i]) / out.rho0;
    return out;
}

namespace {
double fact(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}
}  // namespace

std::array<double, 3> BoundaryData::value(double t) const {
    std::array<double, 3> v{0, 0, 0};
    const std::vector<Rational>* s[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i)
        for (size_t k = 0; k < s[i]->size(); ++k) v[i] += (*s[i])[k].get_d() * std::pow(t, k) / fact(k);
    return v;
}

std::array<double, 3> BoundaryData::slope(double t) const {
    std::array<double, 3> v{0, 0, 0};
    const std::vector<Rational>* s[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i)
        for (size_t k = 1; k < s[i]->size(); ++k) v[i] += (*s[i])[k].get_d() * std::pow(t, k - 1) / fact(k - 1);
    return v;
}

BoundaryData boundary_series(Bolt bolt, const Rational& p, const Rational& q, const Rational& Lambda, int order) {
    if (order < 1) throw InvalidBoltParams("order must be at least 1");
    BoundaryData d;
    d.bolt = bolt;
    const Rational z = 0;
    switch (bolt) {
        case Bolt::Nut: {
            const Rational half(1, 2);
            d.a = {z, half, z, p};
            d.b = {z, half, z, q};
            d.c = {z, half, z, Rational(-Lambda / 2 - p - q)};
            break;
        }
        case Bolt::OMinus4: {
            if (p <= 0) throw InvalidBoltParams("bolt size h must be positive");
            d.a = {z, 2};
            d.b = {p, q};
            d.c = {p, Rational(-q)};
            break;
        }
        case Bolt::OMinus2: {
            if (p <= 0) throw InvalidBoltParams("bolt size h must be positive");
            d.a = {z, 1};
            d.b = {p, z, q};
            d.c = {p, z, Rational(1 / p - Lambda * p - q)};
            break;
        }
        case Bolt::OMinus1: {
            if (p <= 0) throw InvalidBoltParams("bolt size h must be positive");
            const Rational a1(1, 2);
            const Rational b2 = (1 / p - Lambda * p) / 2;
            // a''' = -a1/h^2
            d.a = {z, a1, z, Rational(-a1 / (p * p))};
            d.b = {p, z, b2, z, q};
            d.c = {p, z, b2, z, Rational(Rational(-11, 8) / (p * p * p) + Lambda / p - q)};
            break;
        }
    }
    for (auto* v : {&d.a, &d.b, &d.c}) {
        for (auto& x : *v) x.canonicalize();
        if (static_cast<int>(v->size()) > order + 1) v->resize(order + 1);
    }
    return d;
}

}  // namespace su2e
