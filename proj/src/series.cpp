#include "su2e/series.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace su2e {

// ---- Series ----

Series::Series(int order, mpfr_prec_t prec) : c(order + 1, Ball(prec)) {}

Series Series::constant(const Ball& v, int order) {
    Series s(order, v.prec());
    s.c[0] = v;
    return s;
}

Series Series::variable(const Ball& center, int order) {
    Series s(order, center.prec());
    s.c[0] = center;
    if (order >= 1) s.c[1] = Ball(1, center.prec());
    return s;
}

Ball Series::eval(const Ball& s) const {
    Ball acc(s.prec());
    for (int k = order(); k >= 0; --k) acc = acc * s + c[k];
    return acc;
}

namespace {
void same_order(const Series& a, const Series& b) {
    if (a.order() != b.order()) throw DomainMismatch("series orders differ");
}
}  // namespace

Series operator+(const Series& a, const Series& b) {
    same_order(a, b);
    Series r = a;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] += b.c[k];
    return r;
}

Series operator-(const Series& a, const Series& b) {
    same_order(a, b);
    Series r = a;
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] -= b.c[k];
    return r;
}

Series operator-(const Series& a) {
    Series r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

Series operator*(const Series& a, const Series& b) {
    same_order(a, b);
    const int n = a.order();
    Series r(n, std::max(a.c[0].prec(), b.c[0].prec()));
    for (int k = 0; k <= n; ++k)
        for (int i = 0; i <= k; ++i) r.c[k].addmul(a.c[i], b.c[k - i]);
    return r;
}

Series Series::reciprocal() const {
    if (c.empty() || c[0].contains_zero()) throw ZeroConstantTerm("reciprocal of a series with zero constant term");
    const int n = order();
    const mpfr_prec_t p = c[0].prec();
    Series r(n, p);
    const Ball inv = Ball(1, p) / c[0];
    r.c[0] = inv;
    for (int k = 1; k <= n; ++k) {
        Ball s(p);
        for (int i = 1; i <= k; ++i) s.addmul(c[i], r.c[k - i]);
        r.c[k] = -(s * inv);
    }
    return r;
}

Series Series::pow(unsigned n) const {
    Series r = constant(Ball(1, c[0].prec()), order());
    Series b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

Series Series::derivative() const {
    Series r(order(), c[0].prec());
    for (int k = 1; k <= order(); ++k) r.c[k - 1] = c[k].mul_si(k);
    return r;
}

// ---- Tape ----

int Tape::constant(const Ball& v) {
    Node n{Kind::Const, -1, -1, Ball(prec_), {}, 0};
    n.value = v;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::time(const Ball& center) {
    Node n{Kind::Time, -1, -1, Ball(prec_), {}, 0};
    n.value = center;
    if (mpfr_zero_p(center.mid()) && center.is_exact()) n.nz = 1;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::input() {
    nodes_.push_back(Node{Kind::Input, -1, -1, Ball(prec_), {}, 0});
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::push(Kind k, int a, int b) {
    Node n{k, a, b, Ball(prec_), {}, 0};
    // nz: a lower bound on the index of the first nonzero coefficient
    if (k == Kind::Mul) n.nz = nodes_[a].nz + nodes_[b].nz;
    else if (k == Kind::Add || k == Kind::Sub) n.nz = std::min(nodes_[a].nz, nodes_[b].nz);
    else if (k == Kind::Neg) n.nz = nodes_[a].nz;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

void Tape::set_input(int id, const Ball& v) {
    Node& n = nodes_.at(id);
    if (n.kind != Kind::Input) throw DomainError("set_input on a non-input node");
    n.coef.push_back(v);
}

const Ball& Tape::coef(int id, int k) {
    Node& n = nodes_[id];
    if (n.kind == Kind::Input) {
        if (static_cast<int>(n.coef.size()) <= k) throw DomainError("tape input coefficient not yet available");
        return n.coef[k];
    }
    while (static_cast<int>(nodes_[id].coef.size()) <= k) compute(id, static_cast<int>(nodes_[id].coef.size()));
    return nodes_[id].coef[k];
}

namespace {
// highest possibly nonzero coefficient index, -1 for unbounded
int node_degree(Tape::Kind k) {
    if (k == Tape::Kind::Const) return 0;
    if (k == Tape::Kind::Time) return 1;
    return -1;
}
}  // namespace

void Tape::compute(int id, int k) {
    const Kind kind = nodes_[id].kind;
    const int a = nodes_[id].a, b = nodes_[id].b;
    Ball out(prec_);
    switch (kind) {
        case Kind::Const:
            if (k == 0) out = nodes_[id].value;
            break;
        case Kind::Time:
            if (k == 0) out = nodes_[id].value;
            else if (k == 1) out = Ball(1, prec_);
            break;
        case Kind::Input:
            throw DomainError("tape input coefficient not yet available");
        case Kind::Add:
            out = coef(a, k) + coef(b, k);
            break;
        case Kind::Sub:
            out = coef(a, k) - coef(b, k);
            break;
        case Kind::Neg:
            out = -coef(a, k);
            break;
        case Kind::Mul: {
            const int da = node_degree(nodes_[a].kind), db = node_degree(nodes_[b].kind);
            int lo = nodes_[a].nz, hi = k - nodes_[b].nz;
            if (db >= 0) lo = std::max(lo, k - db);
            if (da >= 0) hi = std::min(hi, da);
            // make sure both operands are materialised up to k before taking references
            if (lo <= hi) {
                coef(a, hi);
                coef(b, k - lo);
            }
            for (int i = lo; i <= hi; ++i) out.addmul(nodes_[a].coef[i], nodes_[b].coef[k - i]);
            break;
        }
        case Kind::Recip: {
            const Ball& a0 = coef(a, 0);
            if (a0.contains_zero()) throw ZeroConstantTerm("tape reciprocal of a series with zero constant term");
            if (k == 0) {
                out = Ball(1, prec_) / a0;
            } else {
                coef(a, k);
                Ball s(prec_);
                for (int i = 1; i <= k; ++i) s.addmul(nodes_[a].coef[i], nodes_[id].coef[k - i]);
                out = -(s * nodes_[id].coef[0]);
            }
            break;
        }
    }
    nodes_[id].coef.push_back(std::move(out));
}

// ---- recurrences ----

namespace {

std::vector<Sym> L_times(Tape& tp, const RMatrix& L, const std::vector<Sym>& eta) {
    std::vector<Sym> out;
    for (const auto& row : L) {
        int acc = -1;
        for (size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0) continue;
            int term = row[j] == 1 ? eta[j].id : tp.mul(tp.constant(row[j]), eta[j].id);
            acc = acc < 0 ? term : tp.add(acc, term);
        }
        out.push_back({&tp, acc < 0 ? tp.constant(Rational(0)) : acc});
    }
    return out;
}

}  // namespace

std::vector<std::vector<Ball>> frobenius_generic(const RMatrix& L, const RhsBuilder& F, int N, mpfr_prec_t prec) {
    const size_t n = L.size();
    Tape tp(prec);
    const Sym t{&tp, tp.time(Ball(prec))};
    std::vector<Sym> eta;
    for (size_t j = 0; j < n; ++j) eta.push_back({&tp, tp.input()});
    const std::vector<Sym> rhs = F(t, eta);
    if (rhs.size() != n) throw DomainMismatch("right-hand side has the wrong dimension");

    std::vector<std::vector<Ball>> a(N + 1, std::vector<Ball>(n, Ball(prec)));
    for (size_t j = 0; j < n; ++j) tp.set_input(eta[j].id, a[0][j]);
    for (int i = 0; i < N; ++i) {
        RMatrix A = L;
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) A[r][c] = (r == c ? Rational(i + 1) : Rational(0)) - L[r][c];
        const RMatrix Ai = inverse(A);
        std::vector<Ball> b(n, Ball(prec));
        for (size_t j = 0; j < n; ++j) b[j] = tp.coef(rhs[j].id, i);
        for (size_t r = 0; r < n; ++r) {
            Ball s(prec);
            for (size_t c = 0; c < n; ++c)
                if (Ai[r][c] != 0) s.addmul(Ball(Ai[r][c], prec), b[c]);
            a[i + 1][r] = s;
        }
        for (size_t j = 0; j < n; ++j) tp.set_input(eta[j].id, a[i + 1][j]);
    }
    return a;
}

std::vector<std::vector<Ball>> taylor_generic(const RMatrix& L, const RhsBuilder& F, const Ball& t0,
                                              const std::vector<Ball>& y0, int N) {
    if (t0.contains_zero()) throw ZeroCenter("Taylor step needs a center away from t = 0");
    const size_t n = L.size();
    const mpfr_prec_t prec = t0.prec();
    Tape tp(prec);
    const Sym t{&tp, tp.time(t0)};
    std::vector<Sym> eta;
    for (size_t j = 0; j < n; ++j) eta.push_back({&tp, tp.input()});
    const std::vector<Sym> rhs = F(t, eta);
    const Sym rt{&tp, tp.recip(t.id)};
    const std::vector<Sym> Le = L_times(tp, L, eta);
    std::vector<int> G(n);
    for (size_t j = 0; j < n; ++j) G[j] = tp.add(tp.mul(Le[j].id, rt.id), rhs[j].id);

    std::vector<std::vector<Ball>> a(N + 1, std::vector<Ball>(n, Ball(prec)));
    a[0] = y0;
    for (size_t j = 0; j < n; ++j) tp.set_input(eta[j].id, a[0][j]);
    for (int i = 0; i < N; ++i) {
        for (size_t j = 0; j < n; ++j) a[i + 1][j] = tp.coef(G[j], i).div_si(i + 1);
        for (size_t j = 0; j < n; ++j) tp.set_input(eta[j].id, a[i + 1][j]);
    }
    return a;
}

namespace {

RhsBuilder model_rhs(const ModelParams& p) {
    return [p](const Sym& t, const std::vector<Sym>& eta) {
        SymOps ops{t.tp};
        std::array<Sym, 6> e = {eta[0], eta[1], eta[2], eta[3], eta[4], eta[5]};
        auto m = M_smooth(t, e, p, ops);
        return std::vector<Sym>(m.begin(), m.end());
    };
}

VecSeries pack(const std::vector<std::vector<Ball>>& a, const Ball& center, int terms) {
    VecSeries s;
    s.center = center;
    s.order = static_cast<int>(a.size()) - 1;
    for (const auto& v : a) {
        std::array<Ball, 6> x;
        for (int j = 0; j < 6; ++j) x[j] = v[j];
        s.coeffs.push_back(std::move(x));
    }
    s.radius_estimate = Ball::from_double(radius_estimate(s.coeffs, terms), 64);
    return s;
}

}  // namespace

VecSeries frobenius_solve(const ModelParams& p, int N, mpfr_prec_t prec) {
    return pack(frobenius_generic(build_L(p.h), model_rhs(p), N, prec), Ball(prec), 10);
}

VecSeries taylor_step(const ModelParams& p, const Vec6& prev, const Ball& t0, int N) {
    std::vector<Ball> y0(prev.begin(), prev.end());
    return pack(taylor_generic(build_L(p.h), model_rhs(p), t0, y0, N), t0, 10);
}

double radius_estimate_scalar(const std::vector<Ball>& coeffs, int terms) {
    std::vector<std::array<Ball, 6>> v;
    for (const auto& c : coeffs) {
        std::array<Ball, 6> x;
        for (auto& y : x) y = Ball(c.prec());
        x[0] = c;
        v.push_back(std::move(x));
    }
    return radius_estimate(v, terms);
}

double radius_estimate(const std::vector<std::array<Ball, 6>>& coeffs, int terms) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    double inv = 0;
    for (int k = std::max(1, n - terms + 1); k <= n; ++k) {
        // work in log space, coefficients can be far outside double range
        double best = -INFINITY;
        for (const auto& c : coeffs[k]) {
            if (mpfr_zero_p(c.mid())) continue;
            long e;
            const double m = mpfr_get_d_2exp(&e, c.mid(), MPFR_RNDN);
            best = std::max(best, std::log(std::fabs(m)) + e * std::log(2.0));
        }
        if (std::isfinite(best)) inv = std::max(inv, std::exp(best / k));
    }
    return inv > 0 ? 1 / inv : INFINITY;
}

Vec6 VecSeries::eval(const Ball& t) const {
    const Ball s = t - center;
    Vec6 out;
    for (int j = 0; j < 6; ++j) {
        Ball acc(s.prec());
        for (int k = order; k >= 0; --k) acc = acc * s + coeffs[k][j];
        out[j] = acc;
    }
    return out;
}

Vec6 VecSeries::eval_derivative(const Ball& t) const {
    const Ball s = t - center;
    Vec6 out;
    for (int j = 0; j < 6; ++j) {
        Ball acc(s.prec());
        for (int k = order; k >= 1; --k) acc = acc * s + coeffs[k][j].mul_si(k);
        out[j] = acc;
    }
    return out;
}

size_t SeriesChain::piece_for(const Rational& t) const {
    for (size_t i = 0; i < pieces.size(); ++i) {
        Rational e;
        mpfr_get_q(e.get_mpq_t(), ends[i].mid());
        if (t <= e) return i;
    }
    return pieces.size() - 1;
}

Vec6 SeriesChain::eval(const Rational& t) const {
    const mpfr_prec_t prec = t_f.prec();
    return pieces[piece_for(t)].eval(Ball(t, prec));
}

Vec6 SeriesChain::eval(const Ball& t) const {
    Rational m;
    mpfr_get_q(m.get_mpq_t(), t.mid());
    return pieces[piece_for(m)].eval(t);
}

namespace {
// largest k/2^20 not above x
Rational dyadic_floor(double x) {
    const double scaled = std::floor(std::ldexp(x, 20));
    return Rational(mpz_class(scaled), mpz_class(1) << 20);
}
}  // namespace

SeriesChain continue_to(const ModelParams& p, const Rational& t_f, const ContinueOptions& opt) {
    if (t_f <= 0) throw DomainError("t_f must be positive");
    const mpfr_prec_t prec = opt.prec ? opt.prec : default_prec();
    SeriesChain ch;
    ch.params = p;
    ch.t_f = Ball(t_f, prec);
    VecSeries cur = pack(frobenius_generic(build_L(p.h), model_rhs(p), opt.order, prec), Ball(prec), opt.terms);
    Rational t = 0;
    for (int step = 0; step < opt.max_steps; ++step) {
        const double r = radius_estimate(cur.coeffs, opt.terms);
        const double dt = std::isfinite(r) ? r / (2 * opt.safety) : 1.0;
        if (!(dt >= opt.min_step)) throw StalledStep("series radius collapsed near t = " + std::to_string(t.get_d()));
        Rational next = t + dyadic_floor(dt);
        if (next >= t_f) next = t_f;
        ch.pieces.push_back(cur);
        ch.ends.push_back(Ball(next, prec));
        if (next == t_f) return ch;
        const Vec6 y = ch.pieces.back().eval(Ball(next, prec));
        Vec6 y0;
        for (int j = 0; j < 6; ++j) y0[j] = y[j].midpoint();
        std::vector<Ball> yv(y0.begin(), y0.end());
        cur = pack(taylor_generic(build_L(p.h), model_rhs(p), Ball(next, prec), yv, opt.order), Ball(next, prec),
                   opt.terms);
        t = next;
    }
    throw StalledStep("step limit reached before t_f");
}

// ---- RK8 ----

RkResult rk8_integrate(const OdeRhs& f, OdeState y, double t, double t1, const RkOptions& opt,
                       const std::function<bool(double, const OdeState&)>& stop) {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol, ode::runge_kutta_fehlberg78<OdeState>());
    RkResult res;
    res.t.push_back(t);
    res.y.push_back(y);
    double dt = opt.dt0;
    auto sys = [&f](const OdeState& x, OdeState& dx, double tt) { f(x, dx, tt); };
    for (size_t n = 0; n < opt.max_steps && t < t1; ++n) {
        dt = std::min(dt, t1 - t);
        if (dt < opt.min_dt && t1 - t > opt.min_dt) {
            res.blow_up = true;
            res.reason = "step size collapsed";
            return res;
        }
        OdeState save = y;
        const double tsave = t;
        ode::controlled_step_result r;
        try {
            r = stepper.try_step(sys, y, t, dt);
        } catch (const std::exception&) {
            res.blow_up = true;
            res.reason = "stepper failure";
            return res;
        }
        if (r == ode::fail) {
            y = save;
            t = tsave;
            continue;
        }
        for (double v : y)
            if (!std::isfinite(v)) {
                res.blow_up = true;
                res.reason = "non-finite state";
                return res;
            }
        res.t.push_back(t);
        res.y.push_back(y);
        if (stop && stop(t, y)) return res;
    }
    if (t < t1) {
        res.blow_up = true;
        res.reason = "step limit reached";
    }
    return res;
}

void einstein_rhs(const OdeState& u, OdeState& du, double Lambda) {
    const double a = std::exp(u[0]), b = std::exp(u[1]), c = std::exp(u[2]);
    const double a2 = a * a, b2 = b * b, c2 = c * c;
    const double den = 2 * a2 * b2 * c2;
    const double R1 = (a2 * a2 - (b2 - c2) * (b2 - c2)) / den;
    const double R2 = (b2 * b2 - (c2 - a2) * (c2 - a2)) / den;
    const double R3 = (c2 * c2 - (a2 - b2) * (a2 - b2)) / den;
    const double s = u[3] + u[4] + u[5];
    du.resize(6);
    du[0] = u[3];
    du[1] = u[4];
    du[2] = u[5];
    du[3] = -u[3] * s + R1 - Lambda;
    du[4] = -u[4] * s + R2 - Lambda;
    du[5] = -u[5] * s + R3 - Lambda;
}

OdeState boundary_state(const BoundaryData& d, double t) {
    const auto v = d.value(t), sl = d.slope(t);
    for (double x : v)
        if (!(x > 0)) throw InvalidBoltParams("boundary data not positive at t_start");
    return {std::log(v[0]), std::log(v[1]), std::log(v[2]), sl[0] / v[0], sl[1] / v[1], sl[2] / v[2]};
}

RkResult rk8_solve(const ModelParams& p, double t_start, double t_end, const RkOptions& opt,
                   const std::function<bool(double, const OdeState&)>& stop) {
    if (!(t_start > 0)) throw DomainError("t_start must be positive");
    const BoundaryData d = boundary_series(p.bolt, p.h, p.b1, p.Lambda);
    const double lam = p.Lambda.get_d();
    return rk8_integrate([lam](const OdeState& u, OdeState& du, double) { einstein_rhs(u, du, lam); },
                         boundary_state(d, t_start), t_start, t_end, opt, stop);
}

}  // namespace su2e
