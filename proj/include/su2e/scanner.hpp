#pragma once

#include <string>
#include <vector>

#include "su2e/model.hpp"
#include "su2e/series.hpp"

namespace su2e {

enum class CellClass { CompleteCandidate, Collapse, BlowUp, Undetermined };
const char* class_name(CellClass c);

struct ScanOptions {
    double t_start = 1e-6;
    double r_end = 0.99;        // stop once tanh(t/2) reaches this
    double z_max = 10;          // |Z| bound for a complete candidate
    double collapse_log = -30;  // min log(a, b, c) below this: Collapse
    double y_max = 1e8;         // max |a'/a| etc. above this: BlowUp
    double drift_tol = 1e-8;    // relative conservation residual
    int threads = 0;            // 0: hardware concurrency
    RkOptions rk;
};

struct ScanCell {
    double h = 0, b1 = 0;
    CellClass cls = CellClass::Undetermined;
    double t_end = 0;
    double diag = 0;  // |Z| for reached runs, min log for collapse, max |Y| for blow-up, drift otherwise
    std::string reason;
};

// Classify one parameter point. For bolts other than O(-4), (h, b1) carry
// the bolt's two free parameters.
ScanCell classify_point(Bolt bolt, double h, double b1, const ScanOptions& opt = {});

struct ScanResult {
    Bolt bolt = Bolt::OMinus4;
    double h_lo = 0, h_hi = 0, b_lo = 0, b_hi = 0;
    int nh = 0, nb = 0;
    ScanOptions opt;
    std::vector<ScanCell> cells;  // row-major: h index outer, b1 inner

    const ScanCell& at(int i, int j) const { return cells[static_cast<size_t>(i) * nb + j]; }
    // h, b1, class, t_end, diag with '#' metadata lines on top
    std::string to_csv() const;
};

// grid points lo + k (hi - lo) / (n - 1); n = 1 gives lo
ScanResult scan_grid(Bolt bolt, double h_lo, double h_hi, double b_lo, double b_hi, int nh, int nb,
                     const ScanOptions& opt = {});

struct ProfileSample {
    double t, a, b, c;
    double r, alpha, beta, gamma;
};
struct Profile {
    std::vector<ProfileSample> samples;
    double t_f = 0;
    bool truncated = false;
    std::string reason;
    // t, a, b, c, r, alpha, beta, gamma, region (0 up to t_f, 1 after)
    std::string to_csv() const;
};
Profile solve_profile(const ModelParams& p, double t_max, int samples = 400, double t_f = 2.25,
                      const ScanOptions& opt = {});

// relative conservation residual of a state (log a, log b, log c, Y1, Y2, Y3)
double conservation_drift(const OdeState& u, double Lambda);

}  // namespace su2e
