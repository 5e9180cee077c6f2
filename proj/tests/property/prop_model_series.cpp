#include <cmath>
#include <random>

#include "helpers.hpp"
#include "su2e/jet.hpp"
#include "su2e/series.hpp"

using namespace su2e;

namespace {

constexpr mpfr_prec_t P = 256;

double max_abs(const Vec6& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x.mid_d()));
    return m;
}

// first derivatives of M by eta_j via 3-variable jets, block by block
std::array<std::array<Ball, 6>, 6> jet_jacobian(const Ball& t, const Vec6& e, const ModelParams& p) {
    std::array<std::array<Ball, 6>, 6> J;
    BallOps bo{P};
    JetOps<Ball, BallOps> jo{&bo, 1};
    for (int block = 0; block < 2; ++block) {
        std::array<Jet<Ball>, 6> eta;
        for (int j = 0; j < 6; ++j)
            eta[j] = (j / 3 == block) ? Jet<Ball>::variable(e[j], Ball(1, P), j % 3, 1) : Jet<Ball>::constant(e[j], 1);
        const auto M = M_smooth(Jet<Ball>::constant(t, 1), eta, p, jo);
        for (int i = 0; i < 6; ++i)
            for (int v = 0; v < 3; ++v) {
                int ix[3] = {0, 0, 0};
                ix[v] = 1;
                const auto& c = M[i].at(ix[0], ix[1], ix[2]);
                J[i][3 * block + v] = c ? *c : Ball(P);
            }
    }
    return J;
}

Ball conservation_at(const SeriesChain& ch, const Rational& t) {
    const Ball tb(t, ch.pieces[0].center.prec());
    const MetricState m = metric_from_eta(tb, ch.eval(t), ch.params);
    std::array<Ball, 3> abc;
    for (int i = 0; i < 3; ++i) abc[i] = Ball(1, tb.prec()) / m.X[i];
    return conservation_residual_t(abc, m.Y, ch.params.Lambda);
}

SeriesChain chain(int order, mpfr_prec_t prec) {
    ContinueOptions o;
    o.order = order;
    o.prec = prec;
    return continue_to(ModelParams{}, Rational(9, 4), o);
}

}  // namespace

TEST_CASE("Frobenius residual is O(t^N)") {
    ModelParams p;
    for (int N : {8, 14, 20}) {
        const VecSeries s = frobenius_solve(p, N, P);
        const auto res = [&](const char* tc) {
            const Ball t = th::B(tc);
            Vec6 r;
            const Vec6 d = s.eval_derivative(t), f = eval_rhs(t, s.eval(t), p);
            for (int j = 0; j < 6; ++j) r[j] = d[j] - f[j];
            return max_abs(r);
        };
        const double r1 = res("0.02"), r2 = res("0.01");
        CHECK(r1 > 0);
        // halving t divides the residual by about 2^N
        CHECK(r1 / r2 > std::pow(2.0, N - 1.5));
    }
}

TEST_CASE("Jacobian of M: jets, closed forms and finite differences at 20 random states") {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> u(-0.4, 0.4), ut(0.05, 2.25);
    ModelParams p;
    const double h = 1.5, b1 = 0.1;
    int entries = 0;
    for (int n = 0; n < 20; ++n) {
        Vec6 e;
        double ed[6];
        for (int j = 0; j < 6; ++j) {
            ed[j] = u(g);
            e[j] = Ball::from_double(ed[j], P);
        }
        const Ball t = Ball::from_double(ut(g), P);
        const auto JB = jet_jacobian(t, e, p);
        std::array<std::array<double, 6>, 6> J;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) J[i][j] = JB[i][j].mid_d();
        const Ball step = th::B("1e-30");
        for (int j = 0; j < 6; ++j) {
            Vec6 ep = e, em = e;
            ep[j] = e[j] + step;
            em[j] = e[j] - step;
            const Vec6 Mp = eval_M(t, ep, p), Mm = eval_M(t, em, p);
            for (int i = 0; i < 6; ++i) {
                const Ball fd = (Mp[i] - Mm[i]) / step.mul_2si(1);
                REQUIRE(std::abs((fd - JB[i][j]).mid_d()) <= 1e-40 * (1 + std::abs(fd.mid_d())));
                ++entries;
            }
        }
        const double s = ed[3] + ed[4] + ed[5];
        // rows 1-3 and the eta4..eta6 block of rows 4-6 in closed form
        CHECK(J[0][0] == doctest::Approx(-ed[3]));
        CHECK(J[0][3] == doctest::Approx(-ed[0]));
        CHECK(J[1][1] == doctest::Approx(-(b1 / h + ed[4])));
        CHECK(J[1][4] == doctest::Approx(b1 / (h * h) - ed[1]));
        CHECK(J[2][2] == doctest::Approx(b1 / h - ed[5]));
        CHECK(J[2][5] == doctest::Approx(-b1 / (h * h) - ed[2]));
        CHECK(J[3][3] == doctest::Approx(-(s + ed[3])));
        CHECK(J[3][4] == doctest::Approx(-ed[3]));
        CHECK(J[4][3] == doctest::Approx(-(b1 / h + ed[4])));
        CHECK(J[4][4] == doctest::Approx(-(b1 / h + ed[4]) - s));
        CHECK(J[5][5] == doctest::Approx(-(-b1 / h + ed[5]) - s));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 6; ++j) {
                const bool used = (j == i) || (j == i + 3);
                if (!used) CHECK(J[i][j] == 0);
            }
    }
    CHECK(entries == 20 * 36);
}

TEST_CASE("reference chain: conservation, continuity, order dependence, cross-check") {
    const mpfr_prec_t prec = digits_to_bits(80);
    const SeriesChain c110 = chain(110, prec);
    const SeriesChain c60 = chain(60, prec);
    const SeriesChain c20 = chain(20, prec);
    REQUIRE(c110.pieces.size() >= 2);

    SUBCASE("conservation residual below 1e-20 at 50 times") {
        double worst = 0;
        for (int k = 1; k <= 50; ++k) {
            const Rational t = Rational(9, 4) * Rational(k, 50);
            worst = std::max(worst, std::abs(conservation_at(c110, t).mid_d()));
        }
        MESSAGE("max conservation residual, N = 110: " << worst);
        CHECK(worst < 1e-20);
    }
    SUBCASE("residual falls as the order grows") {
        double r[3] = {0, 0, 0};
        const SeriesChain* cs[3] = {&c20, &c60, &c110};
        for (int i = 0; i < 3; ++i)
            for (int k = 1; k <= 50; ++k)
                r[i] = std::max(r[i], std::abs(conservation_at(*cs[i], Rational(9, 4) * Rational(k, 50)).mid_d()));
        MESSAGE("N = 20: " << r[0] << ", N = 60: " << r[1] << ", N = 110: " << r[2]);
        CHECK(r[1] < r[0]);
        CHECK(r[2] < r[1]);
    }
    SUBCASE("consecutive pieces agree at the junctions") {
        for (size_t i = 0; i + 1 < c110.pieces.size(); ++i) {
            const Vec6 left = c110.pieces[i].eval(c110.ends[i]);
            const Vec6& right = c110.pieces[i + 1].coeffs[0];
            for (int j = 0; j < 6; ++j) CHECK(std::abs((left[j] - right[j]).mid_d()) < 1e-40);
        }
    }
    SUBCASE("orders 60 and 110 agree to 1e-16") {
        for (int k = 1; k <= 9; ++k) {
            const Rational t = Rational(k, 4);
            const Vec6 a = c110.eval(t), b = c60.eval(t);
            for (int j = 0; j < 6; ++j) CHECK(std::abs((a[j] - b[j]).mid_d()) < 1e-16);
        }
    }
    SUBCASE("independent RK8 integration agrees to double accuracy") {
        for (double T : {0.5, 1.0, 2.25}) {
            const RkResult r = rk8_solve(c110.params, 1e-6, T);
            REQUIRE_FALSE(r.blow_up);
            const MetricState m = metric_from_eta(Ball::from_double(T, prec), c110.eval(Ball::from_double(T, prec)),
                                                  c110.params);
            for (int i = 0; i < 3; ++i) {
                CHECK(std::exp(r.y.back()[i]) == doctest::Approx(1 / m.X[i].mid_d()).epsilon(1e-9));
                CHECK(r.y.back()[3 + i] == doctest::Approx(m.Y[i].mid_d()).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("b1 -> -b1 swaps b and c along trajectories") {
    for (const char* b : {"1/10", "0.4", "1.1"}) {
        ModelParams p, q;
        p.b1 = th::Q(b);
        q.b1 = -p.b1;
        for (double T : {0.5, 2.0, 6.0}) {
            const RkResult a = rk8_solve(p, 1e-6, T), m = rk8_solve(q, 1e-6, T);
            REQUIRE(a.blow_up == m.blow_up);
            if (a.blow_up) continue;
            const OdeState &x = a.y.back(), &y = m.y.back();
            CHECK(x[0] == doctest::Approx(y[0]).epsilon(1e-9));
            CHECK(x[1] == doctest::Approx(y[2]).epsilon(1e-9));
            CHECK(x[2] == doctest::Approx(y[1]).epsilon(1e-9));
            CHECK(x[4] == doctest::Approx(y[5]).epsilon(1e-9));
            CHECK(x[5] == doctest::Approx(y[4]).epsilon(1e-9));
        }
        // the high-precision recurrences see the same symmetry
        const VecSeries s = frobenius_solve(p, 20, P), r = frobenius_solve(q, 20, P);
        const Ball t = th::B("0.05");
        const MetricState ms = metric_from_eta(t, s.eval(t), p), mr = metric_from_eta(t, r.eval(t), q);
        CHECK(ms.X[1].overlaps(mr.X[2]));
        CHECK(ms.X[0].overlaps(mr.X[0]));
        CHECK(ms.Y[2].overlaps(mr.Y[1]));
    }
}
