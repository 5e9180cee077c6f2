#include "su2e/report.hpp"

#include <iomanip>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace su2e {

using json = nlohmann::json;

Status combined_status(const LocalCertificate& local, const InfinityCertificate* inf) {
    if (local.status != Status::Certified) return local.status;
    if (!inf) return Status::Indeterminate;
    return inf->status;
}

std::string combined_json(const LocalCertificate& local, const InfinityCertificate* inf) {
    json j;
    j["schema"] = "su2e.certificate.v1";
    j["status"] = status_name(combined_status(local, inf));
    j["local"] = json::parse(local.to_json());
    if (inf) j["infinity"] = json::parse(inf->to_json());
    return j.dump(2);
}

namespace {

std::string endpoint_str(const Ball& x, int digits, bool up) {
    const mpfr_prec_t p = x.prec() + 64;
    mpfr_t v;
    mpfr_init2(v, p);
    if (up) x.upper(v);
    else x.lower(v);
    std::string out;
    if (mpfr_zero_p(v)) {
        out = "0";
    } else {
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, digits, v, up ? MPFR_RNDU : MPFR_RNDD);
        std::string d = s;
        mpfr_free_str(s);
        std::string sign;
        if (d[0] == '-') {
            sign = "-";
            d = d.substr(1);
        }
        out = sign + d.substr(0, 1) + (d.size() > 1 ? "." + d.substr(1) : "") + "e" + std::to_string(e - 1);
    }
    mpfr_clear(v);
    return out;
}

Ball ball_of(const json& j, const char* k) {
    if (!j.contains(k)) return Ball(64);
    return Ball::parse(j.at(k).get<std::string>(), 256);
}

struct Table {
    std::vector<std::array<std::string, 4>> rows;
    void add(std::string a, std::string b, std::string c = "", std::string d = "") {
        rows.push_back({std::move(a), std::move(b), std::move(c), std::move(d)});
    }
    std::string str(const std::string& title) const {
        std::array<size_t, 4> w{8, 5, 11, 4};
        const std::array<std::string, 4> head{"Constant", "Value", "Requirement", "Pass"};
        for (const auto& r : rows)
            for (int i = 0; i < 4; ++i) w[i] = std::max(w[i], r[i].size());
        std::ostringstream s;
        const auto line = [&] {
            for (int i = 0; i < 4; ++i) s << "+" << std::string(w[i] + 2, '-');
            s << "+\n";
        };
        const auto row = [&](const std::array<std::string, 4>& r) {
            for (int i = 0; i < 4; ++i) s << "| " << std::left << std::setw(static_cast<int>(w[i])) << r[i] << " ";
            s << "|\n";
        };
        s << title << "\n";
        line();
        row(head);
        line();
        for (const auto& r : rows) row(r);
        line();
        return s.str();
    }
};

std::string yes(bool b) { return b ? "yes" : "NO"; }

std::string local_report(const json& j) {
    Table t;
    const auto hyp = [&](const char* k) { return j.contains("hypotheses") && j["hypotheses"].value(k, false); };
    t.add("h", j.value("h", ""), "> sqrt(31/23)/2, < 2 + sqrt 3");
    t.add("b1", j.value("b1", ""));
    t.add("t_f", j.value("t_f", ""));
    t.add("degree", std::to_string(j.value("degree", 0)));
    t.add("C_l", "< " + upper_str(ball_of(j, "C_l")), "hypothesis 2", yes(hyp("hyp2")));
    t.add("C_nl", "< " + upper_str(ball_of(j, "C_nl")), "hypothesis 3", yes(hyp("hyp3")));
    t.add("lambda", "~ " + upper_str(ball_of(j, "lambda"), 10));
    t.add("t0", "> " + lower_str(ball_of(j, "t0")));
    t.add("I(t_f)", "< " + upper_str(ball_of(j, "I_tf")));
    t.add("B", "~ " + upper_str(ball_of(j, "B"), 6));
    t.add("eps0", "> " + lower_str(ball_of(j, "eps0")));
    t.add("eps", "< " + upper_str(ball_of(j, "eps")), "< eps0 (hypothesis 4)", yes(hyp("hyp4")));
    t.add("|mu(t_f)|", "< " + upper_str(ball_of(j, "mu_bound")));
    std::string s = t.str("Fixed-point estimates");
    s += "status: " + j.value("status", "?");
    if (!j.value("failed", "").empty()) s += " (" + j.value("failed", "") + ")";
    s += "\n";
    return s;
}

std::string infinity_report(const json& j) {
    Table t;
    const auto chk = [&](const char* k) { return j.contains("checks") && j["checks"].value(k, false); };
    t.add("A", j.value("A", ""));
    t.add("B", j.value("B", ""));
    t.add("C", j.value("C", ""));
    const std::string D = j.value("D", "");
    // a slack-derived D is a long dyadic fraction; its decimal upper end reads better
    t.add("D", D.size() > 20 ? "< " + upper_str(Ball(parse_rational(D), 128), 8) : D, "K0 (1 + slack)");
    t.add("2C + 1/B^2", j.value("inf1_value", ""), ">= 0 (inf1)", yes(chk("inf1")));
    t.add("s0", "~ " + upper_str(ball_of(j, "s0"), 6));
    t.add("|Z(s0)|", "< " + upper_str(ball_of(j, "Z0_norm")));
    t.add("zeta_m", "< " + upper_str(ball_of(j, "zeta_m"), 7), "< 1/3 (inf2)", yes(chk("inf2")));
    t.add("4 + C - s0/(2-s0) - sqrt3 zeta_m", "> " + lower_str(ball_of(j, "inf3_margin")), "> 0 (inf3)",
          yes(chk("inf3")));
    t.add("K0", "< " + upper_str(ball_of(j, "K0")), "< D (inf4)", yes(chk("inf4")));
    t.add("assumption C at s0", "margin > " + lower_str(ball_of(j, "assumption_C_margin")), ">= 0",
          yes(chk("assumption_C")));
    t.add("assumption D at s0", "K0 < D", "", yes(chk("assumption_D")));
    std::string s = t.str("Estimates at infinity");
    s += "status: " + j.value("status", "?");
    if (!j.value("failed", "").empty()) s += " (" + j.value("failed", "") + ")";
    s += "\n";
    return s;
}

}  // namespace

std::string upper_str(const Ball& x, int digits) { return endpoint_str(x, digits, true); }
std::string lower_str(const Ball& x, int digits) { return endpoint_str(x, digits, false); }

std::string render_report(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("certificate is not valid JSON: ") + e.what());
    }
    const std::string schema = j.value("schema", "");
    if (schema == "su2e.local.v1") return local_report(j);
    if (schema == "su2e.infinity.v1") return infinity_report(j);
    if (schema == "su2e.certificate.v1") {
        std::string s = local_report(j.at("local"));
        if (j.contains("infinity")) s += "\n" + infinity_report(j.at("infinity"));
        s += "\noverall: " + j.value("status", "?") + "\n";
        return s;
    }
    throw IoError("unknown certificate schema '" + schema + "'");
}

}  // namespace su2e
