#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "su2e/config.hpp"
#include "su2e/report.hpp"

using namespace su2e;
namespace fs = std::filesystem;

namespace {

constexpr int kCertified = 0, kFailed = 1, kIndeterminate = 2, kConfig = 64, kIo = 74;

int exit_code(Status s) {
    switch (s) {
        case Status::Certified: return kCertified;
        case Status::Failed: return kFailed;
        case Status::Indeterminate: return kIndeterminate;
    }
    return kIndeterminate;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string slug(const Rational& q) {
    std::string s = to_string(q);
    for (char& c : s) {
        if (c == '/') c = '_';
        if (c == '-') c = 'm';
    }
    return s;
}

std::string fit_key(const RunConfig& c) {
    return "h" + slug(c.params.h) + "_b" + slug(c.params.b1) + "_tf" + slug(c.t_f) + "_o" + std::to_string(c.order) +
           "_d" + std::to_string(c.degree) + "_p" + std::to_string(c.solve_digits);
}
std::string fit_path(const RunConfig& c) { return (fs::path(c.cache_dir) / ("fit_" + fit_key(c) + ".json")).string(); }
std::string local_path(const RunConfig& c) {
    return (fs::path(c.cache_dir) / ("local_" + fit_key(c) + "_s" + std::to_string(c.sturm_digits) + ".json")).string();
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ApproxSolution obtain_fit(const RunConfig& c, bool verbose) {
    const std::string path = fit_path(c);
    if (fs::exists(path)) {
        if (verbose) std::cerr << "using cached fit " << path << "\n";
        return ApproxSolution::from_json(read_file(path), c.solve_bits());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SeriesChain chain = continue_to(c.params, c.t_f, c.continue_options());
    const ApproxSolution A = fit_approx_solution(chain, c.degree);
    if (verbose)
        std::cerr << "series chain: " << chain.pieces.size() << " pieces; fit degree " << c.degree << " in "
                  << since(t0) << " s\n";
    write_file(path, A.to_json());
    return A;
}

LocalCertificate run_local(const RunConfig& c, bool verbose) {
    const ApproxSolution A = obtain_fit(c, verbose);
    const auto t0 = std::chrono::steady_clock::now();
    LocalCertificate L = check_existence(A, c.local_options());
    if (verbose) std::cerr << "local certificate: " << status_name(L.status) << " in " << since(t0) << " s\n";
    write_file(local_path(c), L.to_json());
    return L;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified SU(2)-invariant Einstein metrics on O(-4)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag("--help", "print this help and exit");  // -h would shadow --h

    std::string config_file;
    std::vector<std::string> sets;
    std::string h, b1, bolt, tf, out, input, cache_dir;
    int order = 0, degree = 0, threads = -1;
    long digits = 0, sturm_digits = 0;
    bool quiet = false;
    app.add_option("--config", config_file, "key = value settings file");
    app.add_option("--set", sets, "override a setting, key=value (repeatable)");
    app.add_option("--h", h, "bolt size h (decimal or p/q)");
    app.add_option("--b1", b1, "slope parameter b1 (decimal or p/q)");
    app.add_option("--bolt", bolt, "nut, O(-4), O(-2), O(-1)");
    app.add_option("--tf", tf, "final time t_f");
    app.add_option("--order", order, "series order");
    app.add_option("--degree", degree, "Chebyshev fit degree");
    app.add_option("--digits", digits, "working precision in decimal digits");
    app.add_option("--sturm-digits", sturm_digits, "Sturm precision in decimal digits");
    app.add_option("--threads", threads, "scan worker threads (0 = all cores)");
    app.add_option("-o,--out", out, "output path (default stdout)");
    app.add_option("-i,--input", input, "certificate to read");
    app.add_option("--cache-dir", cache_dir, "directory for cached fits and certificates");
    app.add_flag("-q,--quiet", quiet, "no progress on stderr");

    auto* scan = app.add_subcommand("scan", "classify a grid of (h, b1) points");
    std::vector<double> hr, br;
    std::vector<int> res;
    scan->add_option("--h-range", hr, "h_lo h_hi")->expected(2);
    scan->add_option("--b1-range", br, "b1_lo b1_hi")->expected(2);
    scan->add_option("--res", res, "nh nb")->expected(2);
    auto* solve = app.add_subcommand("solve", "warping-function profile in both frames");
    double t_max = 0;
    int samples = 0;
    solve->add_option("--t-max", t_max, "profile end time");
    solve->add_option("--samples", samples, "number of samples");
    auto* fit = app.add_subcommand("fit", "heuristic solution and Chebyshev fit (cached)");
    auto* cl = app.add_subcommand("certify-local", "fixed-point certificate up to t_f");
    auto* ci = app.add_subcommand("certify-infinity", "extension to infinity from a local certificate");
    std::string A, B, C, D, slack;
    int panels = 0;
    for (auto* sc : {ci, app.add_subcommand("certify", "full chain: fit, local, infinity")}) {
        sc->add_option("--A", A, "constant A");
        sc->add_option("--B", B, "constant B");
        sc->add_option("--C", C, "constant C");
        sc->add_option("--D", D, "constant D (default K0 (1 + slack))");
        sc->add_option("--D-slack", slack, "relative slack for D");
        sc->add_option("--panels", panels, "starting quadrature panels");
    }
    auto* certify = app.get_subcommand("certify");
    auto* report = app.add_subcommand("report", "render a certificate JSON as tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfig;
    }

    try {
        RunConfig c = default_config();
        if (!config_file.empty()) load_config_file(c, config_file);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + s);
            apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
        }
        const auto put = [&](const char* k, const std::string& v) {
            if (!v.empty()) apply_setting(c, k, v);
        };
        put("h", h);
        put("b1", b1);
        put("bolt", bolt);
        put("t_f", tf);
        put("A", A);
        put("B", B);
        put("C", C);
        put("D", D);
        put("D_slack", slack);
        put("out", out);
        put("input", input);
        put("cache_dir", cache_dir);
        if (order) put("order", std::to_string(order));
        if (degree) put("degree", std::to_string(degree));
        if (digits) put("solve_digits", std::to_string(digits));
        if (sturm_digits) put("sturm_digits", std::to_string(sturm_digits));
        if (threads >= 0) put("threads", std::to_string(threads));
        if (panels) put("panels", std::to_string(panels));
        if (t_max > 0) c.t_max = t_max;
        if (samples) put("samples", std::to_string(samples));
        if (hr.size() == 2) {
            c.h_lo = hr[0];
            c.h_hi = hr[1];
        }
        if (br.size() == 2) {
            c.b_lo = br[0];
            c.b_hi = br[1];
        }
        if (res.size() == 2) {
            put("nh", std::to_string(res[0]));
            put("nb", std::to_string(res[1]));
        }
        const bool verbose = !quiet;

        if (*scan) {
            const auto t0 = std::chrono::steady_clock::now();
            const ScanResult r = scan_grid(c.params.bolt, c.h_lo, c.h_hi, c.b_lo, c.b_hi, c.nh, c.nb, c.scan_options());
            if (verbose) std::cerr << r.cells.size() << " cells in " << since(t0) << " s\n";
            write_file(c.out, r.to_csv());
            return 0;
        }
        if (*solve) {
            const Profile p = solve_profile(c.params, c.t_max, c.samples, c.t_f.get_d(), c.scan_options());
            write_file(c.out, p.to_csv());
            if (p.truncated && verbose) std::cerr << "profile truncated: " << p.reason << "\n";
            return p.truncated ? kFailed : 0;
        }
        if (*fit) {
            const ApproxSolution Af = obtain_fit(c, verbose);
            if (!c.out.empty()) write_file(c.out, Af.to_json());
            else if (verbose) std::cerr << "fit cached at " << fit_path(c) << "\n";
            return 0;
        }
        if (*cl) {
            const LocalCertificate L = run_local(c, verbose);
            write_file(c.out, L.to_json());
            return exit_code(L.status);
        }
        if (*ci) {
            const std::string src = c.input.empty() ? local_path(c) : c.input;
            LocalCertificate L;
            try {
                // a combined certificate carries its local part
                const nlohmann::json j = nlohmann::json::parse(read_file(src));
                L = LocalCertificate::from_json(j.value("schema", "") == "su2e.certificate.v1" ? j.at("local").dump()
                                                                                             : j.dump());
            } catch (const IoError&) {
                throw;
            } catch (const std::exception& e) {
                throw IoError("cannot parse local certificate " + src + ": " + e.what());
            }
            const InfinityCertificate I = check_infinity(L, c.infinity_options());
            write_file(c.out, I.to_json());
            return exit_code(I.status);
        }
        if (*certify) {
            const LocalCertificate L = run_local(c, verbose);
            std::string text;
            Status st = L.status;
            if (L.eta_tf.size() == 6) {
                const InfinityCertificate I = check_infinity(L, c.infinity_options());
                text = combined_json(L, &I);
                st = combined_status(L, &I);
            } else {
                text = combined_json(L, nullptr);
            }
            write_file(c.out, text);
            if (verbose) std::cerr << "overall: " << status_name(st) << "\n";
            return exit_code(st);
        }
        if (*report) {
            if (c.input.empty()) throw ConfigError("report needs --input");
            write_file(c.out, render_report(read_file(c.input)));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "indeterminate: " << e.what() << "\n";
        return kIndeterminate;
    }
    return kConfig;
}
