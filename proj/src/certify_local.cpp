#include "su2e/certify_local.hpp"

#include <cmath>
#include <memory>
#include <json.hpp>

namespace su2e {

using json = nlohmann::json;

// ---- Frac ----

FracCtx::FracCtx(ChebModel W_, ChebModel E_, int cap_) : W(std::move(W_)), E(std::move(E_)), cap(cap_) {
    one = ChebModel::constant(Rational(1), W.prec(), cap, W.lo, W.hi);
    Wp = {one, W};
    Ep = {one, E};
}

const ChebModel& FracCtx::Wpow(int k) {
    while (static_cast<int>(Wp.size()) <= k) Wp.push_back(Wp.back() * W);
    return Wp[k];
}

const ChebModel& FracCtx::Epow(int k) {
    while (static_cast<int>(Ep.size()) <= k) Ep.push_back(Ep.back() * E);
    return Ep[k];
}

ChebModel FracCtx::den(int a, int b) {
    if (a == 0) return Epow(b);
    if (b == 0) return Wpow(a);
    return Wpow(a) * Epow(b);
}

namespace {

ChebModel lifted(const Frac& x, int A, int B) {
    if (A == x.a && B == x.b) return x.num;
    ChebModel n = x.num;
    if (A > x.a) n = n * x.ctx->Wpow(A - x.a);
    if (B > x.b) n = n * x.ctx->Epow(B - x.b);
    return n;
}

FracCtx* ctx_of(const Frac& x, const Frac& y) { return x.ctx ? x.ctx : y.ctx; }

}  // namespace

Frac operator+(const Frac& x, const Frac& y) {
    const int A = std::max(x.a, y.a), B = std::max(x.b, y.b);
    Frac xx = x, yy = y;
    xx.ctx = yy.ctx = ctx_of(x, y);
    return {lifted(xx, A, B) + lifted(yy, A, B), A, B, xx.ctx};
}

Frac operator-(const Frac& x, const Frac& y) {
    const int A = std::max(x.a, y.a), B = std::max(x.b, y.b);
    Frac xx = x, yy = y;
    xx.ctx = yy.ctx = ctx_of(x, y);
    return {lifted(xx, A, B) - lifted(yy, A, B), A, B, xx.ctx};
}

Frac operator-(const Frac& x) { return {-x.num, x.a, x.b, x.ctx}; }

Frac operator*(const Frac& x, const Frac& y) { return {x.num * y.num, x.a + y.a, x.b + y.b, ctx_of(x, y)}; }

Frac FracOps::c(const Rational& q) const {
    return {ChebModel::constant(q, prec, ctx->cap, ctx->W.lo, ctx->W.hi), 0, 0, ctx};
}

Frac FracOps::recip(const Frac&, RecipTag tag) const {
    return tag == RecipTag::W ? Frac{ctx->one, 1, 0, ctx} : Frac{ctx->one, 0, 1, ctx};
}

// ---- approximate solution ----

ApproxSolution fit_approx_solution(const ModelParams& p, const Rational& t_f, int degree,
                                   const std::function<Vec6(const Ball&)>& eta_tilde, mpfr_prec_t prec) {
    if (degree < 1) throw DomainError("fit degree must be at least 1");
    const int N = degree + 1;
    const std::vector<Ball> nodes = cheb_nodes(N, Rational(0), t_f, prec);
    std::array<std::vector<Ball>, 6> samples;
    for (const auto& t : nodes) {
        const Vec6 d = eval_rhs(t, eta_tilde(t), p);
        for (int i = 0; i < 6; ++i) samples[i].push_back(d[i]);
    }
    ApproxSolution A;
    A.params = p;
    A.t_f = t_f;
    A.degree = degree;
    for (int i = 0; i < 6; ++i) {
        IntervalPoly f = cheb_fit(samples[i], Rational(0), t_f);
        for (auto& c : f.coeffs) c = c.midpoint();
        A.eta_hat_D[i] = f;
        A.eta_hat[i] = cheb_antiderivative(f);
    }
    return A;
}

ApproxSolution fit_approx_solution(const SeriesChain& chain, int degree) {
    Rational tf;
    mpfr_get_q(tf.get_mpq_t(), chain.t_f.mid());
    return fit_approx_solution(chain.params, tf, degree, [&](const Ball& t) { return chain.eval(t); },
                               chain.t_f.prec());
}

std::array<IntervalPoly, 6> ApproxSolution::monomial() const {
    std::array<IntervalPoly, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = cheb_integrate_zero_pinned(eta_hat_D[i]);
    return out;
}

std::string ApproxSolution::to_json() const {
    json j;
    j["h"] = to_string(params.h);
    j["b1"] = to_string(params.b1);
    j["Lambda"] = to_string(params.Lambda);
    j["bolt"] = bolt_name(params.bolt);
    j["t_f"] = to_string(t_f);
    j["degree"] = degree;
    for (int i = 0; i < 6; ++i) {
        j["eta_hat_D"].push_back(json::parse(eta_hat_D[i].to_json()));
        j["eta_hat"].push_back(json::parse(eta_hat[i].to_json()));
    }
    return j.dump();
}

ApproxSolution ApproxSolution::from_json(const std::string& s, mpfr_prec_t prec) {
    const json j = json::parse(s);
    ApproxSolution A;
    A.params.h = parse_rational(j.at("h").get<std::string>());
    A.params.b1 = parse_rational(j.at("b1").get<std::string>());
    A.params.Lambda = parse_rational(j.at("Lambda").get<std::string>());
    A.params.bolt = parse_bolt(j.at("bolt").get<std::string>());
    A.t_f = parse_rational(j.at("t_f").get<std::string>());
    A.degree = j.at("degree").get<int>();
    for (int i = 0; i < 6; ++i) {
        A.eta_hat_D[i] = IntervalPoly::from_json(j.at("eta_hat_D")[i].dump(), prec);
        A.eta_hat[i] = IntervalPoly::from_json(j.at("eta_hat")[i].dump(), prec);
    }
    return A;
}

// ---- bounds ----

namespace {

Ball upper_point(const Ball& x) {
    mpfr_t u;
    mpfr_init2(u, x.prec());
    x.upper(u);
    Ball r = Ball::exact(u, x.prec());
    mpfr_clear(u);
    return r;
}

IntervalPoly reprec(const IntervalPoly& p, mpfr_prec_t prec) {
    IntervalPoly q = p;
    for (auto& c : q.coeffs) c = c.with_prec(prec);
    return q;
}

struct Setup {
    ChebModel t;
    std::array<ChebModel, 6> e;
    std::unique_ptr<FracCtx> ctx;
    mpfr_prec_t prec;
};

Setup make_setup(const ApproxSolution& A, int cap, mpfr_prec_t prec) {
    Setup s;
    s.prec = prec;
    const Rational lo = 0, hi = A.t_f;
    s.t = ChebModel::time(prec, cap, lo, hi);
    for (int i = 0; i < 6; ++i) s.e[i] = ChebModel::from_poly(reprec(A.eta_hat[i], prec), cap);
    const ModelParams& p = A.params;
    const Rational h2 = p.h * p.h;
    const ChebModel W = ChebModel::constant(Rational(1, 2), prec, cap, lo, hi) + s.t * s.e[0];
    const ChebModel ih = ChebModel::constant(Rational(1 / p.h), prec, cap, lo, hi);
    const ChebModel X2 = ih + s.t * (s.e[1] - ChebModel::constant(Rational(p.b1 / h2), prec, cap, lo, hi));
    const ChebModel X3 = ih + s.t * (s.e[2] + ChebModel::constant(Rational(p.b1 / h2), prec, cap, lo, hi));
    const ChebModel pi = X2 * X3;
    s.ctx = std::make_unique<FracCtx>(W, pi * pi, cap);
    return s;
}

Frac as_frac(const ChebModel& m, FracCtx* ctx) { return {m, 0, 0, ctx}; }

Ball sup_of(const Frac& f, const SupOptions& opt) {
    if (f.a == 0 && f.b == 0) return bound_model_sup(f.num, nullptr, opt).eps;
    const ChebModel den = f.ctx->den(f.a, f.b);
    return bound_model_sup(f.num, &den, opt).eps;
}

Ball sup_of(const ChebModel& m, const SupOptions& opt) { return bound_model_sup(m, nullptr, opt).eps; }

Ball sqrt_up(const Ball& x) { return upper_point(sqrt(upper_point(x))); }

}  // namespace

DefectBound bound_defect(const ApproxSolution& A, const LocalOptions& opt) {
    const mpfr_prec_t prec = A.eta_hat[0].prec();
    Setup s = make_setup(A, opt.cap_eps, prec);
    FracCtx* ctx = s.ctx.get();
    FracOps ops{ctx, prec};
    std::array<Frac, 6> e;
    for (int i = 0; i < 6; ++i) e[i] = as_frac(s.e[i], ctx);
    const auto M = M_smooth(as_frac(s.t, ctx), e, A.params, ops);

    // (1/t) L eta_hat through the exact quotient eta_hat / t
    std::array<ChebModel, 6> u;
    for (int i = 0; i < 6; ++i)
        u[i] = ChebModel::from_poly(reprec(A.eta_hat[i], prec), 100000).divide_by_t_minus_lo().with_cap(opt.cap_eps);
    const RMatrix L = build_L(A.params.h);
    DefectBound out;
    Ball sum(prec);
    for (int i = 0; i < 6; ++i) {
        ChebModel lin = ChebModel::from_poly(reprec(A.eta_hat_D[i], prec), opt.cap_eps).scaled(Ball(-1, prec));
        for (int j = 0; j < 6; ++j)
            if (L[i][j] != 0) lin += u[j].scaled(Ball(L[i][j], prec));
        const Frac E2 = M[i] + as_frac(lin, ctx);
        out.components[i] = sup_of(E2, opt.sup);
        sum += sqr(out.components[i]);
    }
    out.eps = sqrt_up(sum);
    return out;
}

LinearBound bound_linearization(const ApproxSolution& A, const LocalOptions& opt) {
    const mpfr_prec_t prec = opt.lin_prec;
    Setup s = make_setup(A, opt.cap_lin, prec);
    FracCtx* ctx = s.ctx.get();
    FracOps ops{ctx, prec};
    const ModelParams& p = A.params;
    const Rational lo = 0, hi = A.t_f;
    auto cst = [&](const Rational& q) { return ChebModel::constant(q, prec, opt.cap_lin, lo, hi); };
    const Rational bh = p.b1 / p.h, bh2 = p.b1 / (p.h * p.h);
    SupOptions so = opt.sup;
    so.prec = 0;  // the sturm precision floor is meant for the defect; these run at lin_prec

    LinearBound out;
    // diagonal blocks in the first three rows
    out.n00 = max(max(sup_of(s.e[3], so), sup_of(cst(bh) + s.e[4], so)), sup_of(cst(bh) - s.e[5], so));
    out.n01 = max(max(sup_of(s.e[0], so), sup_of(cst(bh2) - s.e[1], so)), sup_of(cst(bh2) + s.e[2], so));
    // M11 = -sigma I - v 1^T
    const ChebModel sig = s.e[3] + s.e[4] + s.e[5];
    const ChebModel v1 = s.e[3], v2 = cst(bh) + s.e[4], v3 = s.e[5] - cst(bh);
    out.n11 = sup_of(sig, so) + sqrt(Ball(3, prec)) * sqrt_up(sup_of(v1 * v1 + v2 * v2 + v3 * v3, so));

    // second-order jet in (eta1, eta2, eta3)
    using J = Jet<Frac>;
    JetOps<Frac, FracOps> jops{&ops, 2};
    const Frac one = ops.c(Rational(1));
    std::array<J, 6> je;
    for (int i = 0; i < 6; ++i) {
        const Frac v = as_frac(s.e[i], ctx);
        je[i] = i < 3 ? J::variable(v, one, i, 2) : J::constant(v, 2);
    }
    const J jt = J::constant(as_frac(s.t, ctx), 2);
    const auto M = M_smooth(jt, je, p, jops);

    // Frobenius norms from entrywise sup bounds; squaring inside the
    // rational function would double the W, E exponents
    Ball f10(prec);
    for (int i = 3; i < 6; ++i)
        for (int j = 0; j < 3; ++j) {
            std::array<int, 3> m{0, 0, 0};
            m[j] = 1;
            const auto& d = M[i].at(m[0], m[1], m[2]);
            if (d) f10 += sqr(sup_of(*d, so));
        }
    out.n10 = sqrt_up(f10);
    out.C_l = upper_point(out.n00 + out.n01 + out.n10 + out.n11);

    const Ball block = Ball(1, prec) + sqrt(Ball(3, prec));
    Ball total(prec);
    for (int i = 0; i < 6; ++i) {
        if (i < 3) {
            out.row_quad[i] = Ball(Rational(1, 2), prec);
        } else {
            Ball H(prec);
            for (int j = 0; j < 3; ++j)
                for (int k = j; k < 3; ++k) {
                    std::array<int, 3> m{0, 0, 0};
                    m[j] += 1;
                    m[k] += 1;
                    const auto& d = M[i].at(m[0], m[1], m[2]);
                    if (!d) continue;
                    // Hessian entries: 2 c_jj on the diagonal, c_jk twice off it
                    const Ball b = sup_of(*d, so);
                    H += j == k ? sqr(b).mul_si(4) : sqr(b).mul_si(2);
                }
            const Ball hn = sqrt_up(H);
            out.row_quad[i] = upper_point(max(block, hn).mul_2si(-1));
        }
        total += sqr(out.row_quad[i]);
    }
    out.C_nl_quad = sqrt_up(total);
    return out;
}

std::array<Ball, 6> cubic_inflation(const ApproxSolution& A, const Ball& r, const LocalOptions& opt) {
    const mpfr_prec_t prec = opt.cubic_prec;
    const int K = opt.cubic_panels;
    const Ball tf(A.t_f, prec);
    // Lipschitz constants of eta_hat from the exact derivative's coefficient sums
    std::array<Ball, 6> lip;
    for (int i = 0; i < 6; ++i) {
        Ball s(prec);
        for (const auto& c : A.eta_hat_D[i].coeffs) s += abs(c.with_prec(prec));
        lip[i] = upper_point(s);
    }
    std::array<IntervalPoly, 6> eh;
    for (int i = 0; i < 6; ++i) eh[i] = reprec(A.eta_hat[i], prec);
    mpfr_t rr;
    mpfr_init2(rr, 64);
    r.abs_upper(rr);
    std::array<Ball, 6> out;
    for (auto& x : out) x = Ball(prec);
    BallOps bops{prec};
    using J = Jet<Ball>;
    JetOps<Ball, BallOps> jops{&bops, 3};
    for (int k = 0; k < K; ++k) {
        const Rational a = A.t_f * k / K, b = A.t_f * (k + 1) / K;
        const Ball tm(Rational((a + b) / 2), prec);
        const Ball hw(Rational((b - a) / 2), prec);
        Ball tp = tm;
        mpfr_t w;
        mpfr_init2(w, 64);
        hw.abs_upper(w);
        tp.add_error(w);
        std::array<J, 6> je;
        for (int i = 0; i < 6; ++i) {
            Ball v = eh[i].eval(tm);
            const Ball spread = lip[i] * hw;
            mpfr_t sp;
            mpfr_init2(sp, 64);
            spread.abs_upper(sp);
            v.add_error(sp);
            v.add_error(rr);
            mpfr_clear(sp);
            je[i] = i < 3 ? J::variable(v, Ball(1, prec), i, 3) : J::constant(v, 3);
        }
        mpfr_clear(w);
        const auto M = M_smooth(J::constant(tp, 3), je, A.params, jops);
        for (int i = 3; i < 6; ++i) {
            Ball s(prec);
            const auto* lay = M[i].lay;
            for (size_t m = 0; m < lay->mono.size(); ++m)
                if (lay->degree(static_cast<int>(m)) == 3 && M[i].c[m]) s += abs(*M[i].c[m]);
            out[i] = max(out[i], upper_point(s));
        }
    }
    mpfr_clear(rr);
    return out;
}

Constants compute_constants(const Rational& h, const Ball& C_l, const Ball& C_nl, const Rational& t_f) {
    const Rational lam = lambda_of(h);
    if (lam >= 1) throw ParameterOutOfRange("lambda = (h-1)^2/(2h) must be below 1");
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(256, C_l.prec());
    Constants c;
    c.lambda = Ball(lam, prec);
    c.B = Ball(Rational(19, 8), prec) + Ball(1, prec) / Ball::e(prec) +
          Ball(Rational((h + 1 / h) / 2), prec);
    const Ball tf(t_f, prec);
    const Ball half(Rational(1, 2), prec);
    if (lam == 0) {
        c.t0 = Ball(prec);
        c.I_tf = exp((C_l.mul_2si(1) + Ball(1, prec)) * tf);
    } else {
        const Ball l = c.lambda;
        const Ball num = sqrt(Ball(3, prec)).mul_2si(-1) * exp(-((C_l + half) * tf) - l);
        const Ball den = pow(tf, l) * sqrt(l) * c.B * C_l;
        c.t0 = pow(num / den, Ball(1, prec) / (Ball(1, prec) - l));
        c.I_tf = exp((C_l.mul_2si(1) + Ball(1, prec)) * tf + l.mul_2si(1)) * pow(tf / c.t0, l.mul_2si(1));
    }
    const Ball K = sqrt(tf.mul_2si(1)) + Ball(2, prec) / sqrt(Ball(3, prec)) * c.t0 * c.B;
    c.eps0 = Ball(1, prec) / (c.I_tf.mul_2si(2) * C_nl * sqr(K));
    c.radius = Ball(1, prec) / (sqrt(c.I_tf).mul_2si(1) * K * C_nl);
    return c;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Certified: return "Certified";
        case Status::Failed: return "Failed";
        case Status::Indeterminate: return "Indeterminate";
    }
    return "?";
}

void check_parameters(const ModelParams& p) {
    if (p.bolt != Bolt::OMinus4) throw ParameterOutOfRange("certification is implemented for O(-4) only");
    if (!(p.h > 0) || !(4 * p.h * p.h * 23 > 31)) throw ParameterOutOfRange("h must exceed sqrt(31/23)/2");
    if (lambda_of(p.h) >= 1) throw ParameterOutOfRange("h must lie in (2 - sqrt 3, 2 + sqrt 3)");
    if (p.Lambda != -3) throw ParameterOutOfRange("Lambda is fixed to -3");
}

LocalCertificate check_existence(const ApproxSolution& A, const LocalOptions& opt) {
    LocalCertificate c;
    c.params = A.params;
    c.t_f = A.t_f;
    c.degree = A.degree;
    const mpfr_prec_t prec = A.eta_hat[0].prec();
    for (int i = 0; i < 6; ++i) c.eta_tf.push_back(A.eta_hat[i].eval(Ball(A.t_f, prec)));
    c.note = "eps aggregates component sup bounds as sqrt(sum eps_i^2); zeta_m read as a bound on |Z|";
    try {
        check_parameters(A.params);
    } catch (const ParameterOutOfRange& e) {
        c.status = Status::Failed;
        c.failed = "precondition";
        c.note = e.what();
        return c;
    }
    try {
        bool hyp1 = true;
        for (int i = 0; i < 6; ++i) hyp1 = hyp1 && A.eta_hat[i].eval(Ball(prec)).contains(Rational(0));
        c.hypotheses["hyp1"] = hyp1;

        const LinearBound lin = bound_linearization(A, opt);
        c.C_l = lin.C_l;
        c.norm_blocks = {lin.n00, lin.n01, lin.n10, lin.n11};
        c.C_nl_quad = lin.C_nl_quad;
        c.hypotheses["hyp2"] = true;

        const Constants prov = compute_constants(A.params.h, c.C_l, c.C_nl_quad, A.t_f);
        const Ball r = upper_point(prov.radius);
        const auto cub = cubic_inflation(A, r, opt);
        Ball tot(c.C_l.prec());
        for (int i = 0; i < 6; ++i) tot += sqr(lin.row_quad[i] + cub[i] * r);
        c.C_nl = upper_point(sqrt(tot));
        const Constants fin = compute_constants(A.params.h, c.C_l, c.C_nl, A.t_f);
        if (!certainly_le(fin.radius, r)) throw InflationUnjustified("fixed-point radius exceeds the inflation range");
        c.hypotheses["hyp3"] = true;
        c.lambda = fin.lambda;
        c.B = fin.B;
        c.t0 = fin.t0;
        c.I_tf = fin.I_tf;
        c.eps0 = fin.eps0;
        c.mu_bound = upper_point(fin.radius);

        const DefectBound d = bound_defect(A, opt);
        c.eps = d.eps;
        c.eps_components = d.components;
        c.hypotheses["hyp4"] = certainly_lt(c.eps, c.eps0);
    } catch (const InflationUnjustified& e) {
        c.status = Status::Indeterminate;
        c.failed = "hyp3";
        c.note = e.what();
        return c;
    } catch (const IndeterminateSign& e) {
        c.status = Status::Indeterminate;
        c.note = e.what();
        return c;
    } catch (const SearchFailed& e) {
        c.status = Status::Indeterminate;
        c.note = e.what();
        return c;
    } catch (const DenominatorVanishes& e) {
        c.status = Status::Failed;
        c.failed = "denominator";
        c.note = e.what();
        return c;
    }
    c.status = Status::Certified;
    for (const char* k : {"hyp1", "hyp2", "hyp3", "hyp4"})
        if (!c.hypotheses[k]) {
            c.status = Status::Failed;
            c.failed = std::string("hypothesis ") + k[3];
            break;
        }
    return c;
}

// ---- serialization ----

namespace {
std::string bs(const Ball& b) { return b.str(40); }
Ball bp(const json& j, const char* k) {
    if (!j.contains(k)) return Ball(256);
    return Ball::parse(j.at(k).get<std::string>(), 256);
}
}  // namespace

std::string LocalCertificate::to_json() const {
    json j;
    j["schema"] = "su2e.local.v1";
    j["h"] = to_string(params.h);
    j["b1"] = to_string(params.b1);
    j["Lambda"] = to_string(params.Lambda);
    j["bolt"] = bolt_name(params.bolt);
    j["t_f"] = to_string(t_f);
    j["degree"] = degree;
    for (auto [k, v] : std::vector<std::pair<const char*, const Ball*>>{
             {"C_l", &C_l}, {"C_nl", &C_nl}, {"C_nl_quadratic", &C_nl_quad}, {"lambda", &lambda}, {"B", &B},
             {"t0", &t0}, {"I_tf", &I_tf}, {"eps", &eps}, {"eps0", &eps0}, {"mu_bound", &mu_bound}})
        j[k] = bs(*v);
    for (const auto& e : eps_components) j["eps_components"].push_back(bs(e));
    for (const auto& e : norm_blocks) j["norm_blocks"].push_back(bs(e));
    for (const auto& e : eta_tf) j["eta_tf"].push_back(bs(e));
    for (const auto& [k, v] : hypotheses) j["hypotheses"][k] = v;
    j["status"] = status_name(status);
    j["failed"] = failed;
    j["note"] = note;
    return j.dump(2);
}

LocalCertificate LocalCertificate::from_json(const std::string& s) {
    const json j = json::parse(s);
    LocalCertificate c;
    c.params.h = parse_rational(j.at("h").get<std::string>());
    c.params.b1 = parse_rational(j.at("b1").get<std::string>());
    c.params.Lambda = parse_rational(j.at("Lambda").get<std::string>());
    c.params.bolt = parse_bolt(j.at("bolt").get<std::string>());
    c.t_f = parse_rational(j.at("t_f").get<std::string>());
    c.degree = j.at("degree").get<int>();
    c.C_l = bp(j, "C_l");
    c.C_nl = bp(j, "C_nl");
    c.C_nl_quad = bp(j, "C_nl_quadratic");
    c.lambda = bp(j, "lambda");
    c.B = bp(j, "B");
    c.t0 = bp(j, "t0");
    c.I_tf = bp(j, "I_tf");
    c.eps = bp(j, "eps");
    c.eps0 = bp(j, "eps0");
    c.mu_bound = bp(j, "mu_bound");
    if (j.contains("eps_components"))
        for (size_t i = 0; i < 6 && i < j["eps_components"].size(); ++i)
            c.eps_components[i] = Ball::parse(j["eps_components"][i].get<std::string>(), 256);
    if (j.contains("norm_blocks"))
        for (size_t i = 0; i < 4 && i < j["norm_blocks"].size(); ++i)
            c.norm_blocks[i] = Ball::parse(j["norm_blocks"][i].get<std::string>(), 256);
    if (j.contains("eta_tf"))
        for (const auto& e : j["eta_tf"]) c.eta_tf.push_back(Ball::parse(e.get<std::string>(), 256));
    if (j.contains("hypotheses"))
        for (auto it = j["hypotheses"].begin(); it != j["hypotheses"].end(); ++it) c.hypotheses[it.key()] = it.value();
    const std::string st = j.at("status").get<std::string>();
    c.status = st == "Certified" ? Status::Certified : st == "Failed" ? Status::Failed : Status::Indeterminate;
    c.failed = j.value("failed", "");
    c.note = j.value("note", "");
    return c;
}

}  // namespace su2e
