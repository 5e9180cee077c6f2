#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "su2e/config.hpp"
#include "su2e/report.hpp"

namespace py = pybind11;
using namespace su2e;

namespace {

// settings dict values may be str, int or float; everything goes through the config parser
RunConfig make_config(const py::dict& settings) {
    RunConfig c = default_config();
    for (const auto& kv : settings) {
        const std::string key = py::str(kv.first);
        std::string value = py::str(kv.second);
        if (py::isinstance<py::bool_>(kv.second)) value = kv.second.cast<bool>() ? "true" : "false";
        apply_setting(c, key, value);
    }
    return c;
}

IntervalPoly monomial(const std::vector<std::string>& coeffs, mpfr_prec_t prec) {
    std::vector<Ball> b;
    for (const auto& s : coeffs) b.emplace_back(parse_rational(s), prec);
    return IntervalPoly(b, Basis::Monomial);
}

py::dict ball_dict(const Ball& x) {
    py::dict d;
    d["lower"] = x.lower_d();
    d["upper"] = x.upper_d();
    d["text"] = x.str(30);
    return d;
}

py::dict cell_dict(const ScanCell& c) {
    py::dict d;
    d["h"] = c.h;
    d["b1"] = c.b1;
    d["class"] = class_name(c.cls);
    d["t_end"] = c.t_end;
    d["diag"] = c.diag;
    d["reason"] = c.reason;
    return d;
}

}  // namespace

PYBIND11_MODULE(_su2e, m) {
    m.doc() = "Certified SU(2)-invariant Einstein metrics: ball arithmetic, Sturm bounds, certificates";

    // translators are tried newest first: base class goes in first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<IndeterminateSign>(m, "IndeterminateSign", PyExc_ArithmeticError);

    m.def("digits_to_bits", [](long d) { return static_cast<long>(digits_to_bits(d)); });

    m.def(
        "ball_eval",
        [](const std::string& expr, const std::vector<std::string>& inputs, long digits) {
            const mpfr_prec_t p = digits_to_bits(digits);
            std::vector<Ball> xs;
            for (const auto& s : inputs) xs.push_back(Ball::parse(s, p));
            return ball_dict(ball_eval(Expr::parse(expr), xs, p));
        },
        py::arg("expr"), py::arg("inputs") = std::vector<std::string>{}, py::arg("digits") = 50,
        "Enclose an expression in x0..x9; inputs are decimal, p/q or 'mid +/- rad' strings.");

    m.def("lambda_of", [](const std::string& h) { return to_string(lambda_of(parse_rational(h))); }, py::arg("h"));

    m.def(
        "count_roots",
        [](const std::vector<std::string>& coeffs, const std::string& a, const std::string& b, long bits) {
            return count_roots(monomial(coeffs, bits), parse_rational(a), parse_rational(b));
        },
        py::arg("coeffs"), py::arg("a"), py::arg("b"), py::arg("bits") = 256,
        "Distinct real roots in (a, b]; coefficients lowest degree first.");

    m.def(
        "sup_bound",
        [](const std::vector<std::string>& P, const std::vector<std::string>& Q, const std::string& a,
           const std::string& b, long bits) {
            SupOptions o;
            o.prec = bits;
            const SupBound s = bound_rational_sup(monomial(P, bits), monomial(Q, bits), parse_rational(a),
                                                  parse_rational(b), o);
            return ball_dict(s.eps);
        },
        py::arg("P"), py::arg("Q"), py::arg("a"), py::arg("b"), py::arg("bits") = 256,
        "Certified eps with |P/Q| < eps on [a, b].");

    m.def(
        "classify",
        [](double h, double b1, const std::string& bolt) {
            py::gil_scoped_release nogil;
            const ScanCell c = classify_point(parse_bolt(bolt), h, b1, default_config().scan_options());
            py::gil_scoped_acquire gil;
            return cell_dict(c);
        },
        py::arg("h"), py::arg("b1"), py::arg("bolt") = "O(-4)");

    m.def(
        "scan",
        [](const py::dict& settings) {
            const RunConfig c = make_config(settings);
            py::gil_scoped_release nogil;
            return scan_grid(c.params.bolt, c.h_lo, c.h_hi, c.b_lo, c.b_hi, c.nh, c.nb, c.scan_options()).to_csv();
        },
        py::arg("settings") = py::dict(), "Scan CSV; grid from the h_lo/h_hi/b_lo/b_hi/nh/nb settings.");

    m.def(
        "certify_local",
        [](const py::dict& settings) {
            const RunConfig c = make_config(settings);
            py::gil_scoped_release nogil;
            const SeriesChain chain = continue_to(c.params, c.t_f, c.continue_options());
            return check_existence(fit_approx_solution(chain, c.degree), c.local_options()).to_json();
        },
        py::arg("settings") = py::dict(), "Local certificate JSON.");

    m.def(
        "certify_infinity",
        [](const std::string& local_json, const py::dict& settings) {
            const RunConfig c = make_config(settings);
            const LocalCertificate L = LocalCertificate::from_json(local_json);
            py::gil_scoped_release nogil;
            return check_infinity(L, c.infinity_options()).to_json();
        },
        py::arg("local_json"), py::arg("settings") = py::dict(), "Infinity certificate JSON.");

    m.def(
        "certify",
        [](const py::dict& settings) {
            const RunConfig c = make_config(settings);
            py::gil_scoped_release nogil;
            const SeriesChain chain = continue_to(c.params, c.t_f, c.continue_options());
            const LocalCertificate L = check_existence(fit_approx_solution(chain, c.degree), c.local_options());
            if (L.eta_tf.size() != 6) return combined_json(L, nullptr);
            const InfinityCertificate I = check_infinity(L, c.infinity_options());
            return combined_json(L, &I);
        },
        py::arg("settings") = py::dict(), "Combined certificate JSON.");

    m.def("report", &render_report, py::arg("json_text"), "Render any certificate JSON as tables.");
}
