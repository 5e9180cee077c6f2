import json

import pytest

su2e = pytest.importorskip("su2e")


def test_lambda_exact():
    assert su2e.lambda_of("3/2") == "1/12"


def test_ball_eval_encloses():
    r = su2e.ball_eval("exp(x0) - 1", ["1/10"], 40)
    assert r["lower"] <= 0.10517091807564763 <= r["upper"]
    assert "@" in r["text"]


def test_count_roots():
    # (x-1)(x-2)(x-3), lowest degree first
    assert su2e.count_roots(["-6", "11", "-6", "1"], "0", "4") == 3
    assert su2e.count_roots(["1", "0", "1"], "-10", "10") == 0


def test_sup_bound_x_over_1_plus_x2():
    r = su2e.sup_bound(["0", "1"], ["1", "0", "1"], "0", "2")
    assert 0.5 < r["upper"] <= 0.5 * (1 + 2**-10) + 1e-15


def test_classify_reference_and_collapse():
    assert su2e.classify(1.5, 0.1)["class"] == "CompleteCandidate"
    assert su2e.classify(0.3, 0.0)["class"] != "CompleteCandidate"


def test_scan_csv():
    csv = su2e.scan({"h_lo": 1.4, "h_hi": 1.6, "b1_lo": 0, "b1_hi": 0.2, "nh": 3, "nb": 3})
    rows = [l for l in csv.splitlines() if l and not l.startswith("#")]
    assert rows[0] == "h,b1,class,t_end,diag"
    assert len(rows) == 10


def test_bad_setting_raises():
    with pytest.raises(su2e.ConfigError):
        su2e.scan({"no_such_key": 1})
    with pytest.raises(ValueError):
        su2e.certify({"degree": "many"})


def test_negative_control_and_report():
    local = json.loads(su2e.certify_local({"degree": 10}))
    assert local["status"] == "Failed"
    assert local["failed"] == "hypothesis 4"
    assert "Fixed-point estimates" in su2e.report(json.dumps(local))


def test_certify_reduced_precision():
    cert = su2e.certify_dict({"solve_digits": 100, "sturm_digits": 200})
    assert cert["status"] == "Certified"
    inf = json.loads(su2e.certify_infinity(json.dumps(cert["local"])))
    assert inf["status"] == "Certified"
