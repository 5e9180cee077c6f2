#include "helpers.hpp"

using namespace su2e;
using th::B;
using th::P;
using th::Q;

TEST_CASE("rationals parse exactly from decimals and fractions") {
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("1/10") == Rational(1, 10));
    CHECK(parse_rational("-2.5e-3") == Rational(-1, 400));
    CHECK(parse_rational("3") == 3);
    CHECK_THROWS(parse_rational("abc"));
    CHECK(to_string(Rational(-6, 4)) == "-3/2");
}

TEST_CASE("exp(0) is exactly 1") {
    const Ball one = exp(Ball(0, P));
    CHECK(one.contains(Rational(1)));
    CHECK(one.rad_d() == 0.0);
}

TEST_CASE("arithmetic encloses exact results") {
    const Ball third = B(1) / B(3);
    CHECK((third * B(3)).contains(Rational(1)));
    CHECK_FALSE(third.is_exact());
    CHECK((third + third + third).contains(Rational(1)));
    const Ball r2 = sqrt(B(2));
    CHECK(sqr(r2).contains(Rational(2)));
    CHECK(log(exp(B("1/7"))).contains(Rational(1, 7)));
    CHECK(atanh(tanh(B("0.3"))).contains(Rational(3, 10)));
    CHECK((sqr(sin(B("0.4"))) + sqr(cos(B("0.4")))).contains(Rational(1)));
    CHECK(pow_ui(B("1/2"), 10).contains(Rational(1, 1024)));
    CHECK(pow(B(4), B("1/2")).contains(Rational(2)));
    CHECK(th::near(Ball::pi(P), 3.14159265358979, 1e-13));
    CHECK(th::near(Ball::e(P), 2.71828182845905, 1e-13));
}

TEST_CASE("radius widths stay tiny at high precision") {
    const Ball x = exp(B("1/3", 3329));
    const bool tiny = mpfr_zero_p(x.rad()) || mpfr_get_exp(x.rad()) < -3000;
    CHECK(tiny);
    CHECK(digits_to_bits(1000) == 3329);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(B(1) / Ball(0, P), DomainError);
    CHECK_THROWS_AS(log(B(-1)), DomainError);
    CHECK_THROWS_AS(sqrt(B(-1)), DomainError);
    Ball z(0, P);
    z.add_error_d(1e-3);
    CHECK_THROWS_AS(z.sign(), IndeterminateSign);
    CHECK_THROWS_AS(intersect(B(1), B(2)), DomainError);
}

TEST_CASE("sign and strict comparisons use endpoints only") {
    Ball a(1, P);
    a.add_error_d(0.5);
    CHECK(a.positive());
    CHECK(a.sign() == 1);
    CHECK(certainly_lt(a, Rational(2)));
    CHECK_FALSE(certainly_lt(a, Rational(3, 2)));  // touches 1.5
    CHECK(certainly_gt(a, Rational(1, 4)));
    CHECK(certainly_lt(B(1), B(2)));
    CHECK_FALSE(certainly_lt(a, B(1)));
    const Ball m = intersect(a, B("1.2"));
    CHECK(m.contains(Rational(6, 5)));
}

TEST_CASE("string round trip keeps containment") {
    const Ball x = B(1) / B(7);
    const std::string s = x.str(40);
    CHECK(s.find("±") != std::string::npos);
    const Ball y = Ball::parse(s, P);
    CHECK(y.contains(x));
    const Ball z = Ball::parse("0.5 +/- 0.25", 64);
    CHECK(z.contains(Rational(3, 4)));
    CHECK(z.contains(Rational(1, 4)));
}

TEST_CASE("operator constant at h = 3/2 encloses 3.826") {
    const Rational h(3, 2);
    const Ball b = Ball(Rational(19, 8), P) + Ball(1, P) / Ball::e(P) + Ball(Rational((h + 1 / h) / 2), P);
    // 19/8 + 1/e + 13/12 = 3.82621277450477565...
    CHECK(th::near(b, 3.8262127745047757, 1e-14));
    CHECK(th::near(b, 3.826, 1e-3));
}

TEST_CASE("s0 = 1 - tanh(9/8) encloses 0.191") {
    const Ball s0 = Ball(1, P) - tanh(B("9/8"));
    CHECK(th::near(s0, 0.19069892979821899, 1e-14));
    CHECK(th::near(s0, 0.191, 1e-3));
}

TEST_CASE("expression trees evaluate in ball and exact arithmetic") {
    const Expr e = Expr::parse("(x0 + 1/3) * x1 - x0^2");
    const auto ex = exact_eval(e, {Rational(1, 2), Rational(6)});
    REQUIRE(ex);
    CHECK(*ex == Rational(19, 4));
    const Ball v = ball_eval(e, {B("1/2"), B(6)}, P);
    CHECK(v.contains(*ex));
    CHECK_FALSE(exact_eval(Expr::parse("exp(x0)"), {Rational(1)}));
    CHECK(ball_eval(Expr::parse("exp(x0)"), {B(0)}, P).contains(Rational(1)));
}

TEST_CASE("linear solves") {
    const RMatrix A = {{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
    const auto x = linear_solve(A, {Rational(3), Rational(5)});
    CHECK(x[0] == Rational(4, 5));
    CHECK(x[1] == Rational(7, 5));
    const RMatrix Ai = inverse(A);
    CHECK(Ai[0][0] == Rational(3, 5));
    CHECK(Ai[0][1] == Rational(-1, 5));
    const BMatrix Ab = {{B(2), B(1)}, {B(1), B(3)}};
    const auto y = linear_solve(Ab, {B(3), B(5)});
    CHECK(y[0].contains(Rational(4, 5)));
    CHECK(y[1].contains(Rational(7, 5)));
    const RMatrix S = {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
    CHECK_THROWS_AS(inverse(S), SingularMatrix);
}

TEST_CASE("to_rational is exact") {
    mpfr_t v;
    mpfr_init2(v, 64);
    mpfr_set_d(v, 0.375, MPFR_RNDN);
    CHECK(to_rational(v) == Rational(3, 8));
    mpfr_clear(v);
}
