#include "su2e/certify_infinity.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace su2e {

using json = nlohmann::json;

GronwallData gronwall_data(const Rational& A, const Rational& B, const Rational& C, const Ball& D, mpfr_prec_t prec) {
    if (A <= 0 || B <= 0) throw DomainError("A and B must be positive");
    GronwallData g;
    g.a0 = Ball(Rational(2 * C + 1 / (B * B)), prec);
    g.a1 = Ball(Rational(5 / (A * A)), prec);
    g.b0 = Ball(Rational(B * B), prec) * D.with_prec(prec);
    g.b1 = Ball(Rational(15 * A * A), prec);
    return g;
}

namespace {

struct Pointwise {
    Ball u, du, d2u;  // tau/(2+tau) and derivatives
    Ball G;           // antiderivative of u, tau - 2 log(2 + tau)
};

Pointwise at(const Ball& z) {
    const mpfr_prec_t p = z.prec();
    const Ball w = Ball(2, p) + z;
    if (!w.positive()) throw DomainError("tau <= -2");
    const Ball iw = Ball(1, p) / w;
    Pointwise o;
    o.u = z * iw;
    o.du = sqr(iw).mul_si(2);
    o.d2u = -(o.du * iw).mul_si(2);
    o.G = z - log(w).mul_si(2);
    return o;
}

struct Integrand {
    const GronwallData& g;
    Ball Z0_sq, Phi_left, Theta0;

    Ball theta(const Pointwise& q) const { return g.a0 - g.a1 * q.u; }
    Ball Theta(const Ball& z, const Pointwise& q) const { return g.a0 * z - g.a1 * q.G; }
    Ball Phi(const Ball& z, const Pointwise& q) const { return g.b0 * z - g.b1 * q.G; }

    // value, and second derivative (enclosure over z when z is a wide ball)
    void eval(const Ball& z, Ball* v, Ball* d2) const {
        const Pointwise q = at(z);
        const Ball th = theta(q);
        const Ball E = exp(Theta0 - Theta(z, q));
        const Ball P = Z0_sq + Phi(z, q) - Phi_left;
        if (v) *v = P * th * E;
        if (d2) {
            const Ball th1 = -(g.a1 * q.du);
            const Ball th2 = -(g.a1 * q.d2u);
            const Ball ph = g.b0 - g.b1 * q.u;
            const Ball ph1 = -(g.b1 * q.du);
            const Ball th_sq = sqr(th);
            // g' = E q with q = phi th + P th' - P th^2
            const Ball qq = ph * th + P * th1 - P * th_sq;
            const Ball q1 = ph1 * th + (ph * th1).mul_si(2) + P * th2 - ph * th_sq - (P * th * th1).mul_si(2);
            *d2 = E * (q1 - th * qq);
        }
    }
};

// uniform midpoint rule on [-s, 0] with s dyadic; remainder g''(xi) w^3 / 24 per panel
Ball raw_integral(const Integrand& f, const Ball& s, int panels) {
    const mpfr_prec_t p = s.prec();
    const Ball w = s.div_si(panels);
    const Ball w3 = w * sqr(w);
    const Ball half = w.mul_2si(-1);
    Ball sum(p), rem(p);
    for (int k = 0; k < panels; ++k) {
        const Ball lo = -s + w.mul_si(k);
        const Ball mid = lo + half;
        Ball panel = mid;
        panel.add_error(half.mid());
        panel.add_error(half.rad());
        Ball v(p), d2(p);
        f.eval(mid, &v, nullptr);
        f.eval(panel, nullptr, &d2);
        sum += v;
        rem += d2;
    }
    return sum * w + rem * w3.div_si(24);
}

Integrand make_integrand(const Ball& Z0_sq, const Ball& s0, const GronwallData& g) {
    const mpfr_prec_t p = s0.prec();
    Integrand f{g, Z0_sq.with_prec(p), Ball(p), Ball(p)};
    const Ball z = -s0;
    const Ball zero(p);
    f.Phi_left = f.Phi(z, at(z));
    f.Theta0 = f.Theta(zero, at(zero));
    return f;
}

// the sliver between -s0 and the dyadic grid start -mid(s0)
Ball edge_piece(const Integrand& f, const Ball& s0) {
    Ball v(s0.prec());
    f.eval(-s0, &v, nullptr);
    return v * (s0 - s0.midpoint());
}

}  // namespace

Ball gronwall_integral(const Ball& Z0_sq, const Ball& s0, const GronwallData& g, int panels) {
    if (panels < 1) throw DomainError("panel count must be positive");
    if (!s0.positive() || !certainly_lt(s0, Rational(1))) throw DomainError("s0 must lie in (0, 1)");
    const Ball s = s0.midpoint();
    const Integrand f = make_integrand(Z0_sq, s0, g);
    const Ball edge = edge_piece(f, s0);

    Ball acc;
    bool have = false;
    std::vector<int> levels;
    for (int n = panels;; n /= 2) {
        levels.push_back(n);
        if (n % 2) break;
    }
    std::reverse(levels.begin(), levels.end());
    for (int n : levels) {
        const Ball v = raw_integral(f, s, n) + edge;
        acc = have ? intersect(acc, v) : v;
        have = true;
    }
    return acc;
}

Envelope gronwall_envelope(const Ball& Z0_sq, const Ball& s0, const Rational& A, const Rational& B, const Rational& C,
                           const Ball& D, const QuadOptions& q) {
    if (2 * C + 1 / (B * B) < 0) throw ThetaNegative("2C + 1/B^2 < 0");
    const mpfr_prec_t p = s0.prec();
    const GronwallData g = gronwall_data(A, B, C, D, p);
    Envelope e;
    int n = q.panels;
    Ball I = gronwall_integral(Z0_sq, s0, g, n);
    const Ball zero(p);
    const Integrand f = make_integrand(Z0_sq, s0, g);
    const Ball head = f.Phi(zero, at(zero)) - f.Phi_left;
    const Ball edge = edge_piece(f, s0);
    for (;;) {
        const double r = I.rad_d();
        const double m = std::fabs(I.mid_d());
        if (r == 0 || r <= q.rel_tol * std::max(m, 1e-300)) break;
        if (2L * n > q.max_panels) throw QuadratureTooWide("quadrature enclosure still too wide at " +
                                                           std::to_string(n) + " panels");
        n *= 2;
        I = intersect(I, raw_integral(f, s0.midpoint(), n) + edge);
    }
    e.integral = I;
    e.panels = n;
    e.zeta_sq = Z0_sq.with_prec(p) + head + I;
    e.zeta_m = sqrt(max(e.zeta_sq, Ball(p)));
    return e;
}

KBounds compute_K0(const Ball& alpha0, const Ball& beta0, const Ball& gamma0, const std::optional<Ball>& s0,
                   const std::optional<Ball>& zeta_m) {
    std::array<Ball, 3> v = {alpha0, beta0, gamma0};
    for (const auto& x : v)
        if (!x.positive()) throw DomainError("alpha0, beta0, gamma0 must be positive");
    std::sort(v.begin(), v.end(), [](const Ball& a, const Ball& b) { return mpfr_cmp(a.mid(), b.mid()) > 0; });
    const Ball a4 = pow_ui(v[0], 4), b4 = pow_ui(v[1], 4), g4 = pow_ui(v[2], 4);
    const mpfr_prec_t p = a4.prec();
    const Ball k38(Rational(3, 8), p);
    KBounds k;
    k.K0 = k38 / g4 * (a4 / b4 + b4 / a4) + k38 / b4 * (a4 / g4 + g4 / a4) + k38 / a4 * (b4 / g4 + g4 / b4);
    k.K1 = Ball(p);
    if (s0 && zeta_m) {
        const Ball up = exp((*s0 * *zeta_m).mul_si(8));
        const Ball dn = Ball(1, p) / up;
        const Ball pre = k38 * exp((zeta_m->mul_si(4) - Ball(4, p)) * *s0);
        k.K1 = pre * ((a4 / b4) * up + (b4 / a4) * dn + (a4 / g4) * up + (g4 / a4) * dn + (b4 / g4) * up +
                      (g4 / b4) * dn);
    }
    return k;
}

namespace {
// +1 certainly positive, -1 certainly non-positive, 0 undecided
int verdict(const Ball& margin) {
    if (margin.positive()) return 1;
    if (margin.upper_d() <= 0) return -1;
    return 0;
}
}  // namespace

InfinityCertificate check_infinity(const ModelParams& p, const Rational& t_f, const Vec6& eta_tf, const Ball& mu_bound,
                                   const InfinityOptions& opt) {
    InfinityCertificate c;
    c.params = p;
    c.t_f = t_f;
    c.A = opt.A;
    c.B = opt.B;
    c.C = opt.C;
    c.note = "zeta_m is the square root of the Gronwall right side at tau = 0";
    const mpfr_prec_t prec = opt.prec;
    Vec6 eta;
    for (int i = 0; i < 6; ++i) eta[i] = eta_tf[i].with_prec(prec);
    const FrameTransfer ft = frame_transfer(Ball(t_f, prec), eta, p, mu_bound.with_prec(prec));
    c.s0 = ft.s0;
    c.r0 = ft.r0;
    c.rho0 = ft.rho0;
    c.alpha0 = ft.alpha0;
    c.beta0 = ft.beta0;
    c.gamma0 = ft.gamma0;
    c.Z0 = ft.Z;
    const Ball Z0_sq = sqr(ft.Z[0]) + sqr(ft.Z[1]) + sqr(ft.Z[2]);
    c.Z0_norm = sqrt(Z0_sq);

    const Ball s_term = c.s0 / (Ball(2, prec) - c.s0);
    const Ball Cb(opt.C, prec);
    c.assumption_C_margin = Cb - (ft.Z[0] + ft.Z[1] + ft.Z[2] - (Ball(4, prec) - s_term));

    const KBounds k0 = compute_K0(c.alpha0, c.beta0, c.gamma0);
    c.K0 = k0.K0;
    if (opt.D) {
        c.D = *opt.D;
    } else {
        mpfr_t u;
        mpfr_init2(u, 64);
        c.K0.upper(u);
        c.D = to_rational(u) * (1 + opt.D_slack);
        mpfr_clear(u);
    }
    const Ball Db(c.D, prec);
    c.inf4_margin = Db - c.K0;
    c.inf1_value = 2 * opt.C + 1 / (opt.B * opt.B);

    std::map<std::string, int> v;
    v["inf1"] = c.inf1_value >= 0 ? 1 : -1;
    // non-strict in the lemma
    v["assumption_C"] = certainly_le(Ball(prec), c.assumption_C_margin) ? 1 : c.assumption_C_margin.negative() ? -1 : 0;
    // Assumption D at s0: R1^2 + R2^2 + R3^2 <= K_R(s0) <= K0 < D
    v["assumption_D"] = verdict(c.inf4_margin);
    v["inf4"] = verdict(c.inf4_margin);

    if (v["inf1"] < 0) {
        c.status = Status::Failed;
        c.failed = "inf1";
        for (const auto& [key, x] : v) c.checks[key] = x > 0;
        return c;
    }
    try {
        const Envelope e = gronwall_envelope(Z0_sq, c.s0, opt.A, opt.B, opt.C, Db, opt.quad);
        c.zeta_m = e.zeta_m;
        c.panels = e.panels;
    } catch (const QuadratureTooWide& e) {
        c.status = Status::Indeterminate;
        c.failed = "quadrature";
        c.note = e.what();
        for (const auto& [key, x] : v) c.checks[key] = x > 0;
        return c;
    }
    c.K1 = compute_K0(c.alpha0, c.beta0, c.gamma0, c.s0, c.zeta_m).K1;
    c.inf2_margin = Ball(Rational(1, 3), prec) - c.zeta_m;
    c.inf3_margin = Ball(4, prec) + Cb - s_term - sqrt(Ball(3, prec)) * c.zeta_m;
    v["inf2"] = verdict(c.inf2_margin);
    v["inf3"] = verdict(c.inf3_margin);

    c.status = Status::Certified;
    for (const char* key : {"assumption_C", "assumption_D", "inf1", "inf2", "inf3", "inf4"}) {
        c.checks[key] = v[key] > 0;
        if (v[key] > 0) continue;
        if (v[key] < 0 && c.status != Status::Failed) {
            c.status = Status::Failed;
            c.failed = key;
        } else if (v[key] == 0 && c.status == Status::Certified) {
            c.status = Status::Indeterminate;
            c.failed = key;
        }
    }
    return c;
}

InfinityCertificate check_infinity(const LocalCertificate& local, const InfinityOptions& opt) {
    if (local.eta_tf.size() != 6) throw DomainError("local certificate carries no eta(t_f)");
    Vec6 eta;
    for (int i = 0; i < 6; ++i) eta[i] = local.eta_tf[i];
    InfinityCertificate c = check_infinity(local.params, local.t_f, eta, local.mu_bound, opt);
    if (local.status != Status::Certified) {
        // the transfer used an unproven eta(t_f); nothing downstream can be certified
        if (c.status == Status::Certified || local.status == Status::Failed) c.status = local.status;
        c.failed = "local certificate " + std::string(status_name(local.status));
    }
    return c;
}

namespace {
std::string bs(const Ball& b) { return b.str(40); }
Ball bp(const json& j, const char* k) {
    if (!j.contains(k)) return Ball(256);
    return Ball::parse(j.at(k).get<std::string>(), 256);
}
}  // namespace

std::string InfinityCertificate::to_json() const {
    json j;
    j["schema"] = "su2e.infinity.v1";
    j["h"] = to_string(params.h);
    j["b1"] = to_string(params.b1);
    j["Lambda"] = to_string(params.Lambda);
    j["bolt"] = bolt_name(params.bolt);
    j["t_f"] = to_string(t_f);
    j["A"] = to_string(A);
    j["B"] = to_string(B);
    j["C"] = to_string(C);
    j["D"] = to_string(D);
    j["inf1_value"] = to_string(inf1_value);
    for (auto [k, v] : std::vector<std::pair<const char*, const Ball*>>{
             {"s0", &s0}, {"r0", &r0}, {"rho0", &rho0}, {"alpha0", &alpha0}, {"beta0", &beta0},
             {"gamma0", &gamma0}, {"Z0_norm", &Z0_norm}, {"zeta_m", &zeta_m}, {"K0", &K0}, {"K1", &K1},
             {"assumption_C_margin", &assumption_C_margin}, {"inf2_margin", &inf2_margin},
             {"inf3_margin", &inf3_margin}, {"inf4_margin", &inf4_margin}})
        j[k] = bs(*v);
    for (const auto& z : Z0) j["Z0"].push_back(bs(z));
    for (const auto& [k, v] : checks) j["checks"][k] = v;
    j["panels"] = panels;
    j["status"] = status_name(status);
    j["failed"] = failed;
    j["note"] = note;
    return j.dump(2);
}

InfinityCertificate InfinityCertificate::from_json(const std::string& s) {
    const json j = json::parse(s);
    InfinityCertificate c;
    c.params.h = parse_rational(j.at("h").get<std::string>());
    c.params.b1 = parse_rational(j.at("b1").get<std::string>());
    c.params.Lambda = parse_rational(j.at("Lambda").get<std::string>());
    c.params.bolt = parse_bolt(j.at("bolt").get<std::string>());
    c.t_f = parse_rational(j.at("t_f").get<std::string>());
    c.A = parse_rational(j.at("A").get<std::string>());
    c.B = parse_rational(j.at("B").get<std::string>());
    c.C = parse_rational(j.at("C").get<std::string>());
    c.D = parse_rational(j.at("D").get<std::string>());
    c.inf1_value = parse_rational(j.at("inf1_value").get<std::string>());
    c.s0 = bp(j, "s0");
    c.r0 = bp(j, "r0");
    c.rho0 = bp(j, "rho0");
    c.alpha0 = bp(j, "alpha0");
    c.beta0 = bp(j, "beta0");
    c.gamma0 = bp(j, "gamma0");
    c.Z0_norm = bp(j, "Z0_norm");
    c.zeta_m = bp(j, "zeta_m");
    c.K0 = bp(j, "K0");
    c.K1 = bp(j, "K1");
    c.assumption_C_margin = bp(j, "assumption_C_margin");
    c.inf2_margin = bp(j, "inf2_margin");
    c.inf3_margin = bp(j, "inf3_margin");
    c.inf4_margin = bp(j, "inf4_margin");
    if (j.contains("Z0"))
        for (size_t i = 0; i < 3 && i < j["Z0"].size(); ++i) c.Z0[i] = Ball::parse(j["Z0"][i].get<std::string>(), 256);
    if (j.contains("checks"))
        for (auto it = j["checks"].begin(); it != j["checks"].end(); ++it) c.checks[it.key()] = it.value();
    c.panels = j.value("panels", 0);
    const std::string st = j.at("status").get<std::string>();
    c.status = st == "Certified" ? Status::Certified : st == "Failed" ? Status::Failed : Status::Indeterminate;
    c.failed = j.value("failed", "");
    c.note = j.value("note", "");
    return c;
}

}  // namespace su2e
