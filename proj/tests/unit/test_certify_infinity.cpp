#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "su2e/certify_infinity.hpp"
#include "su2e/series.hpp"

using namespace su2e;
using th::B;
using th::P;

namespace {

// eta(t_f) from a plain RK8 run; the infinity checks only need an enclosure
Vec6 heuristic_eta_tf(const ModelParams& p, double tf) {
    const RkResult r = rk8_solve(p, 1e-6, tf);
    REQUIRE_FALSE(r.blow_up);
    const OdeState& u = r.y.back();
    MetricState m;
    for (int i = 0; i < 3; ++i) {
        m.X[i] = Ball::from_double(std::exp(-u[i]), P);
        m.Y[i] = Ball::from_double(u[3 + i], P);
    }
    return eta_from_metric(Ball::from_double(r.t.back(), P), m, p);
}

}  // namespace

TEST_CASE("K0 at the symmetric point, homogeneity, permutations") {
    CHECK(compute_K0(B(1), B(1), B(1)).K0.contains(Rational(9, 4)));
    const Ball a = B("0.41"), b = B("0.38"), c = B("0.35");
    const Ball k = compute_K0(a, b, c).K0;
    const Ball lam = B("1.7");
    const Ball ks = compute_K0(a * lam, b * lam, c * lam).K0;
    CHECK((ks * pow_ui(lam, 4)).overlaps(k));
    std::array<Ball, 3> v = {a, b, c};
    std::sort(v.begin(), v.end(), [](const Ball& x, const Ball& y) { return x.mid_d() < y.mid_d(); });
    do {
        CHECK(compute_K0(v[0], v[1], v[2]).K0.overlaps(k));
    } while (std::next_permutation(v.begin(), v.end(),
                                   [](const Ball& x, const Ball& y) { return x.mid_d() < y.mid_d(); }));
    CHECK_THROWS_AS(compute_K0(B(-1), B(1), B(1)), DomainError);
}

TEST_CASE("2C + 1/B^2 = 755/1849 with the reference constants") {
    const Rational A(3, 8), Bc(43, 100), C(-5, 2);
    CHECK(2 * C + 1 / (Bc * Bc) == Rational(755, 1849));
    const GronwallData g = gronwall_data(A, Bc, C, B(1), P);
    CHECK(g.a0.contains(Rational(755, 1849)));
    CHECK(g.a1.contains(Rational(5) / (A * A)));
    CHECK(g.b1.contains(15 * A * A));
}

TEST_CASE("zero data gives a zero envelope") {
    GronwallData g;
    g.a0 = B(1);
    g.a1 = B(0);
    g.b0 = B(0);
    g.b1 = B(0);
    const Ball I = gronwall_integral(Ball(0, P), B("0.19"), g, 64);
    CHECK(I.contains(Rational(0)));
    CHECK(I.upper_d() < 1e-60);
}

TEST_CASE("refinement nests the quadrature") {
    const Ball s0 = Ball(1, P) - tanh(B("9/8"));
    const GronwallData g = gronwall_data(Rational(3, 8), Rational(43, 100), Rational(-5, 2), B("0.6"), P);
    Ball prev = gronwall_integral(B("0.0396"), s0, g, 8);
    for (int k = 16; k <= 512; k *= 2) {
        const Ball cur = gronwall_integral(B("0.0396"), s0, g, k);
        CHECK(prev.contains(cur));
        CHECK(cur.rad_d() <= prev.rad_d());
        prev = cur;
    }
    const Envelope e = gronwall_envelope(B("0.0396"), s0, Rational(3, 8), Rational(43, 100), Rational(-5, 2), B("0.6"));
    CHECK(e.zeta_m.positive());
    CHECK(e.zeta_m.rad_d() < 1e-6);
    CHECK(th::near(sqr(e.zeta_m), e.zeta_sq.mid_d(), 1e-9));
}

TEST_CASE("negative theta is refused") {
    const Ball s0 = B("0.19");
    CHECK_THROWS_AS(gronwall_envelope(B("0.04"), s0, Rational(3, 8), Rational(43, 100), Rational(-3), B("0.6")),
                    ThetaNegative);
}

TEST_CASE("reference constants certify a heuristic eta(t_f)") {
    ModelParams p;
    const Vec6 eta = heuristic_eta_tf(p, 2.25);
    const InfinityCertificate c = check_infinity(p, Rational(9, 4), eta, B("1e-12"));
    CHECK(c.status == Status::Certified);
    CHECK(c.inf1_value == Rational(755, 1849));
    CHECK(c.Z0_norm.upper_d() < 0.199);
    CHECK(c.zeta_m.upper_d() < 0.33294);
    CHECK(c.K0.upper_d() < 0.594);
    CHECK(c.inf3_margin.lower_d() > 0.817 * 0.99);
    CHECK(certainly_lt(c.K0, Ball(c.D, P)));
    for (const auto& [k, ok] : c.checks) CHECK_MESSAGE(ok, k);
    const InfinityCertificate d = InfinityCertificate::from_json(c.to_json());
    CHECK(d.status == Status::Certified);
    CHECK(d.D == c.D);
    CHECK(d.zeta_m.contains(c.zeta_m.midpoint()));
}

TEST_CASE("C below the anchor value fails assumption C") {
    ModelParams p;
    const Vec6 eta = heuristic_eta_tf(p, 2.25);
    InfinityOptions o;
    o.B = Rational(3, 10);
    o.C = -5;  // still 2C + 1/B^2 > 0
    const InfinityCertificate c = check_infinity(p, Rational(9, 4), eta, B("1e-12"), o);
    CHECK(c.status == Status::Failed);
    CHECK(c.failed == "assumption_C");
    CHECK_FALSE(c.checks.at("assumption_C"));
}

TEST_CASE("D below K0 fails inf4") {
    ModelParams p;
    const Vec6 eta = heuristic_eta_tf(p, 2.25);
    InfinityOptions o;
    o.D = Rational(1, 2);
    const InfinityCertificate c = check_infinity(p, Rational(9, 4), eta, B("1e-12"), o);
    CHECK(c.status == Status::Failed);
    CHECK_FALSE(c.checks.at("inf4"));
}

TEST_CASE("infinity stage inherits a failed local certificate") {
    LocalCertificate L;
    L.t_f = Rational(9, 4);
    L.status = Status::Failed;
    L.failed = "hyp4";
    L.mu_bound = B("1e-12");
    ModelParams p;
    const Vec6 eta = heuristic_eta_tf(p, 2.25);
    L.eta_tf.assign(eta.begin(), eta.end());
    const InfinityCertificate c = check_infinity(L);
    CHECK(c.status == Status::Failed);
    CHECK(c.failed.find("local") != std::string::npos);
}
