// Containment of ball evaluation, checked against a plain MPFR evaluator
// at much higher precision on random points inside the input balls.
#include <functional>
#include <random>

#include "helpers.hpp"

using namespace su2e;

namespace {

constexpr mpfr_prec_t kOracle = 1024;

struct Oracle {
    mpfr_t v;
    Oracle() { mpfr_init2(v, kOracle); }
    ~Oracle() { mpfr_clear(v); }
    Oracle(const Oracle&) = delete;
};

using Gen = std::mt19937_64;

// Expression shapes whose domain is always valid for inputs in [-2, 2]:
// division by 1 + y^2, log of 1 + y^2, sqrt of 1 + y^2, exp of tanh.
Expr random_expr(Gen& g, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_int_distribution<int> var(0, 1);
    std::uniform_int_distribution<int> num(-9, 9);
    const Expr one = Expr::constant(1);
    switch (pick(g)) {
        case 0: return Expr::var(var(g));
        case 1: return Expr::constant(Rational(num(g), 7));
        case 2: return random_expr(g, depth - 1) + random_expr(g, depth - 1);
        case 3: return random_expr(g, depth - 1) - random_expr(g, depth - 1);
        case 4: return random_expr(g, depth - 1) * random_expr(g, depth - 1);
        case 5: {
            const Expr d = random_expr(g, depth - 1);
            return random_expr(g, depth - 1) / (one + d * d);
        }
        case 6: {
            const Expr d = random_expr(g, depth - 1);
            return Expr::unary(Expr::Op::Log, one + d * d);
        }
        case 7: {
            const Expr d = random_expr(g, depth - 1);
            return Expr::unary(Expr::Op::Sqrt, one + d * d);
        }
        case 8: return Expr::unary(Expr::Op::Exp, Expr::unary(Expr::Op::Tanh, random_expr(g, depth - 1)));
        default: return Expr::unary(Expr::Op::Abs, random_expr(g, depth - 1));
    }
}

void oracle_eval(const Expr& e, const std::vector<Rational>& x, mpfr_ptr out) {
    using Op = Expr::Op;
    if (e.op == Op::Const) {
        mpfr_set_q(out, e.value.get_mpq_t(), MPFR_RNDN);
        return;
    }
    if (e.op == Op::Input) {
        mpfr_set_q(out, x[e.input].get_mpq_t(), MPFR_RNDN);
        return;
    }
    Oracle a, b;
    oracle_eval(e.args[0], x, a.v);
    if (e.args.size() > 1) oracle_eval(e.args[1], x, b.v);
    switch (e.op) {
        case Op::Add: mpfr_add(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Sub: mpfr_sub(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Mul: mpfr_mul(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Div: mpfr_div(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Neg: mpfr_neg(out, a.v, MPFR_RNDN); break;
        case Op::Exp: mpfr_exp(out, a.v, MPFR_RNDN); break;
        case Op::Log: mpfr_log(out, a.v, MPFR_RNDN); break;
        case Op::Sqrt: mpfr_sqrt(out, a.v, MPFR_RNDN); break;
        case Op::Tanh: mpfr_tanh(out, a.v, MPFR_RNDN); break;
        case Op::Atanh: mpfr_atanh(out, a.v, MPFR_RNDN); break;
        case Op::Abs: mpfr_abs(out, a.v, MPFR_RNDN); break;
        case Op::Pow: mpfr_pow(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Min: mpfr_min(out, a.v, b.v, MPFR_RNDN); break;
        case Op::Max: mpfr_max(out, a.v, b.v, MPFR_RNDN); break;
        default: FAIL("unexpected op");
    }
}

// oracle value within the ball, allowing the oracle's own tiny error
bool contains_oracle(const Ball& y, mpfr_srcptr v) {
    Ball w = y;
    mpfr_t slack;
    mpfr_init2(slack, 64);
    mpfr_set_ui_2exp(slack, 1, -900, MPFR_RNDU);
    w.add_error(slack);
    mpfr_clear(slack);
    return w.contains(Ball::exact(v, kOracle));
}

}  // namespace

TEST_CASE("ball containment on 10^4 random expression evaluations") {
    Gen g(20240601);
    std::uniform_real_distribution<double> mid(-2, 2);
    std::uniform_int_distribution<int> radexp(-60, -5);
    std::uniform_real_distribution<double> frac(-1, 1);
    int evaluated = 0, violations = 0;
    for (int n = 0; n < 10000; ++n) {
        const mpfr_prec_t prec = (n % 3 == 0) ? 64 : (n % 3 == 1) ? 128 : 333;
        const Expr e = random_expr(g, 4);
        std::vector<Ball> in;
        std::vector<Rational> pt;
        for (int i = 0; i < 2; ++i) {
            Ball b = Ball::from_double(mid(g), prec);
            const double r = (n % 5 == 0) ? 0.0 : std::ldexp(1.0, radexp(g));
            b.add_error_d(r);
            in.push_back(b);
            // a random member of the input ball
            mpfr_t m;
            mpfr_init2(m, 64);
            mpfr_set_d(m, frac(g) * r, MPFR_RNDZ);
            pt.push_back(to_rational(b.mid()) + to_rational(m));
            mpfr_clear(m);
        }
        Ball y(prec);
        try {
            y = ball_eval(e, in, prec);
        } catch (const Error&) {
            continue;  // a wide input ball may reach a branch point; that is allowed
        }
        Oracle o;
        oracle_eval(e, pt, o.v);
        ++evaluated;
        if (!contains_oracle(y, o.v)) {
            ++violations;
            if (violations < 5) MESSAGE("violation at n = " << n << ": " << y.str(20));
        }
        // rational trees: exact evaluation must land inside too
        if (const auto q = exact_eval(e, pt)) CHECK(y.contains(*q));
    }
    MESSAGE("evaluated " << evaluated << " of 10000");
    CHECK(evaluated >= 9500);
    CHECK(violations == 0);
}

TEST_CASE("elementary functions contain the oracle on random balls") {
    Gen g(7);
    std::uniform_real_distribution<double> u(0.05, 3);
    int bad = 0;
    for (int n = 0; n < 2000; ++n) {
        Ball x = Ball::from_double(u(g), 200);
        x.add_error_d(std::ldexp(1.0, -20 - n % 40));
        const Rational q = to_rational(x.mid());
        Oracle o;
        mpfr_set_q(o.v, q.get_mpq_t(), MPFR_RNDN);
        Oracle r;
        const std::pair<std::function<Ball(const Ball&)>, int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)> fs[] = {
            {[](const Ball& b) { return exp(b); }, mpfr_exp},   {[](const Ball& b) { return log(b); }, mpfr_log},
            {[](const Ball& b) { return sqrt(b); }, mpfr_sqrt}, {[](const Ball& b) { return tanh(b); }, mpfr_tanh},
            {[](const Ball& b) { return sin(b); }, mpfr_sin},   {[](const Ball& b) { return cos(b); }, mpfr_cos},
        };
        for (const auto& [f, mf] : fs) {
            mf(r.v, o.v, MPFR_RNDN);
            if (!contains_oracle(f(x), r.v)) ++bad;
        }
    }
    CHECK(bad == 0);
}
