#include "su2e/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace su2e {

LocalOptions RunConfig::local_options() const {
    LocalOptions o;
    o.sup.prec = sturm_bits();
    o.sup.sharpness = sharpness;
    return o;
}

InfinityOptions RunConfig::infinity_options() const {
    InfinityOptions o;
    o.A = A;
    o.B = B;
    o.C = C;
    o.D_slack = D_slack;
    o.D = D;
    o.quad.panels = panels;
    return o;
}

ContinueOptions RunConfig::continue_options() const {
    ContinueOptions o;
    o.order = order;
    o.prec = solve_bits();
    return o;
}

ScanOptions RunConfig::scan_options() const {
    ScanOptions o;
    o.threads = threads;
    return o;
}

RunConfig default_config() {
    RunConfig c;
    if (const char* d = std::getenv("SU2E_DIGITS")) {
        try {
            c.solve_digits = std::stol(d);
            c.sturm_digits = 2 * c.solve_digits;
        } catch (const std::exception&) {
            throw ConfigError(std::string("SU2E_DIGITS is not an integer: ") + d);
        }
        if (c.solve_digits < 10) throw ConfigError("SU2E_DIGITS must be at least 10");
    }
    return c;
}

namespace {

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    s = s.substr(a, b - a + 1);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
    return s;
}

Rational rat(const std::string& k, const std::string& v) {
    try {
        return parse_rational(v);
    } catch (const std::exception&) {
        throw ConfigError(k + ": not a rational number: " + v);
    }
}

long integer(const std::string& k, const std::string& v, long lo) {
    size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw ConfigError(k + ": not an integer: " + v);
    if (x < lo) throw ConfigError(k + ": must be at least " + std::to_string(lo));
    return x;
}

double real(const std::string& k, const std::string& v) {
    size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw ConfigError(k + ": not a number: " + v);
    return x;
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key_in, const std::string& value_in) {
    const std::string k = trim(key_in), v = trim(value_in);
    using Set = std::function<void()>;
    const std::map<std::string, Set> table = {
        {"h", [&] { c.params.h = rat(k, v); }},
        {"b1", [&] { c.params.b1 = rat(k, v); }},
        {"bolt", [&] {
             try {
                 c.params.bolt = parse_bolt(v);
             } catch (const std::exception&) {
                 throw ConfigError("bolt: unknown type " + v);
             }
         }},
        {"t_f", [&] { c.t_f = rat(k, v); }},
        {"order", [&] { c.order = static_cast<int>(integer(k, v, 4)); }},
        {"degree", [&] { c.degree = static_cast<int>(integer(k, v, 2)); }},
        {"solve_digits", [&] { c.solve_digits = integer(k, v, 10); }},
        {"sturm_digits", [&] { c.sturm_digits = integer(k, v, 10); }},
        {"sharpness", [&] { c.sharpness = rat(k, v); }},
        {"A", [&] { c.A = rat(k, v); }},
        {"B", [&] { c.B = rat(k, v); }},
        {"C", [&] { c.C = rat(k, v); }},
        {"D", [&] { c.D = rat(k, v); }},
        {"D_slack", [&] { c.D_slack = rat(k, v); }},
        {"panels", [&] { c.panels = static_cast<int>(integer(k, v, 1)); }},
        {"h_lo", [&] { c.h_lo = real(k, v); }},
        {"h_hi", [&] { c.h_hi = real(k, v); }},
        {"b1_lo", [&] { c.b_lo = real(k, v); }},
        {"b1_hi", [&] { c.b_hi = real(k, v); }},
        {"nh", [&] { c.nh = static_cast<int>(integer(k, v, 1)); }},
        {"nb", [&] { c.nb = static_cast<int>(integer(k, v, 1)); }},
        {"threads", [&] { c.threads = static_cast<int>(integer(k, v, 0)); }},
        {"t_max", [&] { c.t_max = real(k, v); }},
        {"samples", [&] { c.samples = static_cast<int>(integer(k, v, 2)); }},
        {"out", [&] { c.out = v; }},
        {"cache_dir", [&] { c.cache_dir = v; }},
        {"input", [&] { c.input = v; }},
    };
    const auto it = table.find(k);
    if (it == table.end()) throw ConfigError("unknown setting: " + k);
    it->second();
    if (c.sharpness <= 0 || c.sharpness >= 1) throw ConfigError("sharpness must lie in (0, 1)");
    if (c.t_f <= 0) throw ConfigError("t_f must be positive");
}

void load_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(n) + ": expected key = value");
        apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
    }
}

std::string describe(const RunConfig& c) {
    std::ostringstream s;
    s << "h = " << to_string(c.params.h) << "\nb1 = " << to_string(c.params.b1) << "\nbolt = "
      << bolt_name(c.params.bolt) << "\nt_f = " << to_string(c.t_f) << "\norder = " << c.order
      << "\ndegree = " << c.degree << "\nsolve_digits = " << c.solve_digits << "\nsturm_digits = " << c.sturm_digits
      << "\nsharpness = " << to_string(c.sharpness) << "\nA = " << to_string(c.A) << "\nB = " << to_string(c.B)
      << "\nC = " << to_string(c.C) << "\nD_slack = " << to_string(c.D_slack) << "\npanels = " << c.panels << "\n";
    if (c.D) s << "D = " << to_string(*c.D) << "\n";
    return s.str();
}

}  // namespace su2e
