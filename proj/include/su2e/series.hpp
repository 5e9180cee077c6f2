#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "su2e/model.hpp"

namespace su2e {

// Truncated power series sum c_k s^k, k <= order.
class Series {
public:
    std::vector<Ball> c;

    Series() = default;
    Series(int order, mpfr_prec_t prec);
    explicit Series(std::vector<Ball> coeffs) : c(std::move(coeffs)) {}
    static Series constant(const Ball& v, int order);
    static Series variable(const Ball& center, int order);  // center + s

    int order() const { return static_cast<int>(c.size()) - 1; }
    Ball eval(const Ball& s) const;
    Series reciprocal() const;  // ZeroConstantTerm if c_0 contains 0
    Series pow(unsigned n) const;
    Series derivative() const;
};
Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator-(const Series& a);
Series operator*(const Series& a, const Series& b);

// Lazy series graph: every node's k-th coefficient is produced on demand,
// in order. Inputs get their coefficients pushed by the solver, which lets
// the recurrences feed a_{i+1} back before coefficient i+1 of M is needed.
class Tape {
public:
    enum class Kind { Const, Time, Input, Add, Sub, Neg, Mul, Recip };
    struct Node {
        Kind kind;
        int a = -1, b = -1;
        Ball value;        // Const value, Time center
        std::vector<Ball> coef;
        int nz = 0;        // coefficients below nz are known zero (Time, Const: none)
    };

    explicit Tape(mpfr_prec_t prec) : prec_(prec) {}
    int constant(const Ball& v);
    int constant(const Rational& q) { return constant(Ball(q, prec_)); }
    int time(const Ball& center);
    int input();
    int add(int a, int b) { return push(Kind::Add, a, b); }
    int sub(int a, int b) { return push(Kind::Sub, a, b); }
    int neg(int a) { return push(Kind::Neg, a, -1); }
    int mul(int a, int b) { return push(Kind::Mul, a, b); }
    int recip(int a) { return push(Kind::Recip, a, -1); }

    // append coefficient k of an input (k must equal its current length)
    void set_input(int id, const Ball& v);
    // coefficient k of node id; every dependency must be resolvable
    const Ball& coef(int id, int k);
    mpfr_prec_t prec() const { return prec_; }
    size_t size() const { return nodes_.size(); }

private:
    int push(Kind k, int a, int b);
    void compute(int id, int k);
    std::vector<Node> nodes_;
    mpfr_prec_t prec_;
};

// Handle so that templated model code can build tape graphs.
struct Sym {
    Tape* tp;
    int id;
};
inline Sym operator+(const Sym& a, const Sym& b) { return {a.tp, a.tp->add(a.id, b.id)}; }
inline Sym operator-(const Sym& a, const Sym& b) { return {a.tp, a.tp->sub(a.id, b.id)}; }
inline Sym operator*(const Sym& a, const Sym& b) { return {a.tp, a.tp->mul(a.id, b.id)}; }
inline Sym operator-(const Sym& a) { return {a.tp, a.tp->neg(a.id)}; }

struct SymOps {
    Tape* tp;
    Sym c(const Rational& q) const { return {tp, tp->constant(q)}; }
    Sym recip(const Sym& x, RecipTag) const { return {tp, tp->recip(x.id)}; }
};

struct VecSeries {
    Ball center;
    int order = 0;
    std::vector<std::array<Ball, 6>> coeffs;  // a_i, i = 0..order
    Ball radius_estimate;                     // heuristic

    Vec6 eval(const Ball& t) const;  // at absolute time t
    Vec6 eval_derivative(const Ball& t) const;
};

// Right-hand side builder for a generic system eta' = (1/t) L eta + F(t, eta).
// Given the time node and input nodes, it returns the component nodes of F.
using RhsBuilder = std::function<std::vector<Sym>(const Sym& t, const std::vector<Sym>& eta)>;

// Series about 0 with a_0 = 0 via ((i+1) I - L) a_{i+1} = b_i.
std::vector<std::vector<Ball>> frobenius_generic(const RMatrix& L, const RhsBuilder& F, int N, mpfr_prec_t prec);
// Series about t0 > 0 with a_0 = y0 via a_{i+1} = [s^i]((1/t) L eta + F)/(i+1).
std::vector<std::vector<Ball>> taylor_generic(const RMatrix& L, const RhsBuilder& F, const Ball& t0,
                                              const std::vector<Ball>& y0, int N);

VecSeries frobenius_solve(const ModelParams& p, int N, mpfr_prec_t prec);
VecSeries taylor_step(const ModelParams& p, const Vec6& prev, const Ball& t0, int N);

// r^{-1} = max over the last `terms` indices of max_j |c_kj|^{1/k}
double radius_estimate(const std::vector<std::array<Ball, 6>>& coeffs, int terms = 10);
double radius_estimate_scalar(const std::vector<Ball>& coeffs, int terms = 10);

struct SeriesChain {
    ModelParams params;
    Ball t_f;
    std::vector<VecSeries> pieces;
    std::vector<Ball> ends;  // pieces[i] is used on [pieces[i].center, ends[i]]

    Vec6 eval(const Ball& t) const;
    Vec6 eval(const Rational& t) const;
    size_t piece_for(const Rational& t) const;
};

struct ContinueOptions {
    int order = 110;
    mpfr_prec_t prec = 0;      // 0: default precision
    double safety = 1.0;       // step = r / (2 safety)
    int terms = 10;
    double min_step = 1e-12;   // StalledStep below this
    int max_steps = 100000;
};

SeriesChain continue_to(const ModelParams& p, const Rational& t_f, const ContinueOptions& opt = {});

// Non-rigorous RK8(7) integration (Boost.Odeint Fehlberg 7/8).
using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& y, OdeState& dy, double t)>;
struct RkOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double dt0 = 1e-8;
    double min_dt = 1e-14;
    size_t max_steps = 2000000;
};
struct RkResult {
    std::vector<double> t;
    std::vector<OdeState> y;
    bool blow_up = false;  // step collapse or non-finite state
    std::string reason;
};
// `stop` is queried after every accepted step; returning true ends the run early.
RkResult rk8_integrate(const OdeRhs& f, OdeState y0, double t0, double t1, const RkOptions& opt = {},
                       const std::function<bool(double, const OdeState&)>& stop = nullptr);

// Einstein system in (log a, log b, log c, Y1, Y2, Y3) with Lambda = -3.
void einstein_rhs(const OdeState& u, OdeState& du, double Lambda);
// Initial state at t_start from the truncated boundary series.
// For bolts other than O(-4), (h, b1) carry the bolt's two free parameters.
OdeState boundary_state(const BoundaryData& d, double t_start);
RkResult rk8_solve(const ModelParams& p, double t_start, double t_end, const RkOptions& opt = {},
                   const std::function<bool(double, const OdeState&)>& stop = nullptr);

}  // namespace su2e
