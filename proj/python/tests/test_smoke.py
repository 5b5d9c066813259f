import math

import pytest

import heavenly


def test_parse_diff_eval():
    e = heavenly.parse("x^2*y")
    assert str(e.diff("x")) == str(heavenly.parse("2*x*y"))
    f = heavenly.parse("(4*y - w^2)^(3/2)")
    assert f.evaluate({"y": 1.0, "w": 0.0}) == pytest.approx(8.0)
    assert f.diff_n(["y", "y"]).evaluate({"y": 1.0, "w": 0.0}) == pytest.approx(6.0)
    assert heavenly.fd_oracle(heavenly.parse("x^2"), "x", {"x": 3.0}) == pytest.approx(6.0, abs=1e-7)


def test_opaque_function_binding():
    e = heavenly.parse("phi(z)").diff("z")
    assert e.evaluate({"z": 0.5}, {"phi": "exp(2*t)"}) == pytest.approx(2 * math.exp(1.0))
    with pytest.raises(heavenly.UnboundSymbol):
        e.evaluate({"z": 0.5})


def test_parse_error():
    with pytest.raises(heavenly.ParseError):
        heavenly.parse("x + * y")


def test_residuals():
    assert "ppwave" in heavenly.systems()
    ok = heavenly.residual("ppwave", "(4*y-w^2)^(3/2)")
    assert ok["verdict"] == "pass"
    bad = heavenly.residual("heav4", "x1*x2 + x3^2*x4^2", lambdas=[0, 1, 2, 3], points=20)
    assert bad["verdict"] == "fail"


def test_catalog():
    ids = heavenly.catalog_ids()
    assert "ppwave_cubic" in ids
    assert heavenly.catalog_entry("twist_cubic_z")["phi"] == "z"
    results = heavenly.check_entry("flat_II", points=20)
    assert results and all(r["verdict"] == "ok" for r in results)


def test_display_invariants():
    r = heavenly.display_invariants("1/Z", 1.0, 1.0, 0.3)
    assert r["I"] == pytest.approx(3456 / 5**6, rel=1e-6)
    assert r["J"] == pytest.approx(-82944 / 5**9, rel=1e-6)
    assert r["special"]


def test_cli_in_process():
    code, out, err = heavenly.run_cli(["verify", "--example", "iheav_exp", "--points", "20"])
    assert code == 0, err
    code, _, _ = heavenly.run_cli(["nonsense"])
    assert code == 2
