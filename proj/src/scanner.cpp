#include "su2e/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace su2e {

const char* class_name(CellClass c) {
    switch (c) {
        case CellClass::CompleteCandidate: return "CompleteCandidate";
        case CellClass::Collapse: return "Collapse";
        case CellClass::BlowUp: return "BlowUp";
        case CellClass::Undetermined: return "Undetermined";
    }
    return "?";
}

double conservation_drift(const OdeState& u, double Lambda) {
    // lhs = (2 sum a^2 b^2 - sum a^4) / (2 a^2 b^2 c^2), written with ratios to keep it finite
    const double la = u[0], lb = u[1], lc = u[2];
    const double p = std::exp(2 * (la - lb - lc)), q = std::exp(2 * (lb - lc - la)), r = std::exp(2 * (lc - la - lb));
    const double ia = std::exp(-2 * la), ib = std::exp(-2 * lb), ic = std::exp(-2 * lc);
    const double lhs = ia + ib + ic - 0.5 * (p + q + r);
    const double yy = u[3] * u[4] + u[4] * u[5] + u[5] * u[3];
    const double rhs = 2 * yy + 2 * Lambda;
    const double scale = ia + ib + ic + 0.5 * (p + q + r) + 2 * (std::fabs(u[3] * u[4]) + std::fabs(u[4] * u[5]) +
                                                                 std::fabs(u[5] * u[3])) + 2 * std::fabs(Lambda);
    return std::fabs(lhs - rhs) / scale;
}

ScanCell classify_point(Bolt bolt, double h, double b1, const ScanOptions& opt) {
    ScanCell cell;
    cell.h = h;
    cell.b1 = b1;
    const double Lambda = -3;
    const double t_end = 2 * std::atanh(opt.r_end);
    BoundaryData d;
    OdeState y0;
    try {
        d = boundary_series(bolt, Rational(h), Rational(b1), Rational(-3));
        y0 = boundary_state(d, opt.t_start);
    } catch (const Error& e) {
        cell.reason = e.what();
        return cell;
    }
    double min_log = 0, max_y = 0, drift = 0;
    enum { None, Collapsed, Blew } why = None;
    const auto stop = [&](double, const OdeState& u) {
        min_log = std::min({u[0], u[1], u[2]});
        max_y = std::max({std::fabs(u[3]), std::fabs(u[4]), std::fabs(u[5])});
        drift = std::max(drift, conservation_drift(u, Lambda));
        if (min_log < opt.collapse_log) why = Collapsed;
        else if (max_y > opt.y_max) why = Blew;
        return why != None;
    };
    const RkResult res = rk8_integrate([Lambda](const OdeState& u, OdeState& du, double) { einstein_rhs(u, du, Lambda); },
                                       y0, opt.t_start, t_end, opt.rk, stop);
    cell.t_end = res.t.back();
    if (why == Collapsed) {
        cell.cls = CellClass::Collapse;
        cell.diag = min_log;
        cell.reason = "metric coefficient collapsed";
        return cell;
    }
    if (why == Blew || res.blow_up) {
        // a step failure is read from the state: shrinking coefficients mean collapse
        const OdeState& u = res.y.back();
        const double ml = std::min({u[0], u[1], u[2]});
        const bool shrinking = std::min({u[3], u[4], u[5]}) < -opt.y_max || ml < opt.collapse_log / 2;
        cell.cls = shrinking ? CellClass::Collapse : CellClass::BlowUp;
        cell.diag = shrinking ? ml : max_y;
        cell.reason = shrinking ? "metric coefficient collapsed" : why == Blew ? "derivative blow-up" : res.reason;
        return cell;
    }
    const OdeState& u = res.y.back();
    const double r = std::tanh(cell.t_end / 2), rho = (1 - r * r) / 2;
    double z2 = 0;
    for (int i = 0; i < 3; ++i) {
        const double z = 1 + (r - u[3 + i]) / rho;
        z2 += z * z;
    }
    cell.diag = std::sqrt(z2);
    if (drift > opt.drift_tol) {
        cell.cls = CellClass::Undetermined;
        cell.diag = drift;
        cell.reason = "conservation drift";
    } else if (!(cell.diag <= opt.z_max)) {
        cell.cls = CellClass::Undetermined;
        cell.reason = "|Z| above threshold";
    } else {
        cell.cls = CellClass::CompleteCandidate;
    }
    return cell;
}

namespace {
double grid(double lo, double hi, int n, int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); }
}  // namespace

ScanResult scan_grid(Bolt bolt, double h_lo, double h_hi, double b_lo, double b_hi, int nh, int nb,
                     const ScanOptions& opt) {
    if (nh < 1 || nb < 1) throw DomainError("grid resolution must be positive");
    ScanResult out{bolt, h_lo, h_hi, b_lo, b_hi, nh, nb, opt, {}};
    const size_t n = static_cast<size_t>(nh) * nb;
    out.cells.resize(n);
    std::atomic<size_t> next{0};
    const auto work = [&] {
        for (size_t k; (k = next++) < n;) {
            const int i = static_cast<int>(k / nb), j = static_cast<int>(k % nb);
            out.cells[k] = classify_point(bolt, grid(h_lo, h_hi, nh, i), grid(b_lo, b_hi, nb, j), opt);
        }
    };
    unsigned T = opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    T = std::min<unsigned>(T, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < T; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

namespace {
std::string fmt(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);  // shortest round-trip form
    return std::string(buf, r.ptr);
}
}  // namespace

std::string ScanResult::to_csv() const {
    std::ostringstream s;
    s << "# bolt=" << bolt_name(bolt) << "\n"
      << "# grid h=[" << fmt(h_lo) << "," << fmt(h_hi) << "]x" << nh << " b1=[" << fmt(b_lo) << "," << fmt(b_hi)
      << "]x" << nb << "\n"
      << "# t_start=" << fmt(opt.t_start) << " r_end=" << fmt(opt.r_end) << " z_max=" << fmt(opt.z_max)
      << " collapse_log=" << fmt(opt.collapse_log) << " y_max=" << fmt(opt.y_max)
      << " drift_tol=" << fmt(opt.drift_tol) << " rk_tol=" << fmt(opt.rk.abs_tol) << "/" << fmt(opt.rk.rel_tol) << "\n"
      << "h,b1,class,t_end,diag\n";
    for (const auto& c : cells)
        s << fmt(c.h) << "," << fmt(c.b1) << "," << class_name(c.cls) << "," << fmt(c.t_end) << "," << fmt(c.diag)
          << "\n";
    return s.str();
}

Profile solve_profile(const ModelParams& p, double t_max, int samples, double t_f, const ScanOptions& opt) {
    if (samples < 2) throw DomainError("need at least two samples");
    if (!(t_max > opt.t_start)) throw DomainError("t_max must exceed t_start");
    Profile out;
    out.t_f = t_f;
    const double lam = p.Lambda.get_d();
    const BoundaryData d = boundary_series(p.bolt, p.h, p.b1, p.Lambda);
    OdeState y = boundary_state(d, opt.t_start);
    const auto push = [&](double t, const OdeState& u) {
        ProfileSample s;
        s.t = t;
        s.a = std::exp(u[0]);
        s.b = std::exp(u[1]);
        s.c = std::exp(u[2]);
        s.r = std::tanh(t / 2);
        // rho = (1 - r^2)/2 = 1 / (2 cosh^2(t/2)); alpha = rho a without cancellation
        const double ch = std::cosh(t / 2);
        const double rho = 0.5 / (ch * ch);
        s.alpha = rho * s.a;
        s.beta = rho * s.b;
        s.gamma = rho * s.c;
        out.samples.push_back(s);
    };
    push(opt.t_start, y);
    RkOptions ro = opt.rk;
    double t = opt.t_start;
    for (int k = 1; k < samples; ++k) {
        const double t1 = opt.t_start + (t_max - opt.t_start) * k / (samples - 1);
        const RkResult r = rk8_integrate([lam](const OdeState& u, OdeState& du, double) { einstein_rhs(u, du, lam); },
                                         y, t, t1, ro);
        if (r.blow_up) {
            out.truncated = true;
            out.reason = r.reason + " near t = " + fmt(r.t.back());
            return out;
        }
        if (r.t.size() >= 2) ro.dt0 = r.t.back() - r.t[r.t.size() - 2];
        y = r.y.back();
        t = t1;
        push(t, y);
    }
    return out;
}

std::string Profile::to_csv() const {
    std::ostringstream s;
    s << "# t_f=" << fmt(t_f) << (truncated ? " truncated: " + reason : std::string()) << "\n"
      << "t,a,b,c,r,alpha,beta,gamma,region\n";
    for (const auto& x : samples)
        s << fmt(x.t) << "," << fmt(x.a) << "," << fmt(x.b) << "," << fmt(x.c) << "," << fmt(x.r) << ","
          << fmt(x.alpha) << "," << fmt(x.beta) << "," << fmt(x.gamma) << "," << (x.t <= t_f ? 0 : 1) << "\n";
    return s.str();
}

}  // namespace su2e
