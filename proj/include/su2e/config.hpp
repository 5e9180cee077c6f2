#pragma once

#include <optional>
#include <string>

#include "su2e/ball.hpp"
#include "su2e/certify_infinity.hpp"
#include "su2e/certify_local.hpp"
#include "su2e/model.hpp"
#include "su2e/scanner.hpp"

namespace su2e {

// Everything a CLI run needs; defaults are the reference settings.
struct RunConfig {
    ModelParams params;
    Rational t_f{9, 4};
    int order = 110;
    int degree = 110;
    long solve_digits = 1000;
    long sturm_digits = 2000;
    Rational sharpness{1, 1024};
    Rational A{3, 8}, B{43, 100}, C{-5, 2};
    Rational D_slack{1, 1 << 20};
    std::optional<Rational> D;
    int panels = 256;

    // scan grid
    double h_lo = 0.3, h_hi = 3.5, b_lo = 0, b_hi = 1.5;
    int nh = 20, nb = 20;
    int threads = 0;
    double t_max = 10;  // profile end
    int samples = 400;

    std::string out;                 // certificate / CSV path ("" = stdout)
    std::string cache_dir = ".su2e_cache";
    std::string input;               // certificate to read (report, certify-infinity)

    mpfr_prec_t solve_bits() const { return digits_to_bits(solve_digits); }
    mpfr_prec_t sturm_bits() const { return digits_to_bits(sturm_digits); }
    LocalOptions local_options() const;
    InfinityOptions infinity_options() const;
    ContinueOptions continue_options() const;
    ScanOptions scan_options() const;
};

// Default precision from SU2E_DIGITS if set.
RunConfig default_config();
// key = value; '#' comments, blank lines and [section] headers ignored,
// surrounding quotes stripped. ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
void load_config_file(RunConfig& c, const std::string& path);
std::string describe(const RunConfig& c);

}  // namespace su2e
