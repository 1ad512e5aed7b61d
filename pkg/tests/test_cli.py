import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from archimedea import arch_gamma as ag
from archimedea import serialize as sz
from archimedea.cli import main, parse_expr, parse_rep, run
from archimedea.errors import InvalidArgument
from archimedea.exact import CQ


def call(*argv):
    code, doc = run(["--no-timing", *argv])
    # every document survives the text writer
    assert json.loads(sz.dumps(doc)) == json.loads(json.dumps(doc, allow_nan=True))
    return code, doc


def test_reduce_example():
    code, doc = call("gamma", "reduce", "--num", "GR(0) GR(2i) GR(-2i)", "--den", "GR(0)")
    assert code == 0 and doc["status"] == "ok" and doc["schema_version"] == 1
    assert doc["command"] == "gamma reduce"
    v = sz.decode(doc["payload"]["value"])
    assert isinstance(v, ag.FinitelyManyZeros)
    assert v.gl2_type.same(ag.PrincipalSeries(0, 0, CQ(0, 2), 0, 0))
    assert doc["payload"]["ratio_is_one"]
    assert doc["config_echo"]["num"] == "GR(0) GR(2i) GR(-2i)"


def test_gauss_example():
    code, doc = call("char", "gauss", "--modulus", "4", "--index", "1")
    g = sz.decode(doc["payload"]["gauss_sum"])
    assert code == 0 and abs(g - 2j) < 1e-12


def test_poles_example():
    code, doc = call("lfun", "poles", "--num", "sym2delta", "--den", "zeta", "--range", "14", "22")
    assert code == 0 and doc["payload"]["certified"] == 2
    r = sz.decode(doc["payload"]["report"])
    assert len(r.poles) == 2


def test_domain_error():
    code, doc = call("char", "eps", "--modulus", "6", "--index", "1")
    assert code == 1 and doc["status"] == "error"
    assert doc["error"]["name"] == "imprimitive-character"
    code, doc = call("gamma", "eval", "--num", "GQ(0)", "--s", "2")
    assert code == 1 and doc["error"]["name"] == "invalid-argument"
    code, doc = call("lfun", "eval", "--series", "sym3delta", "--s", "2")
    assert doc["error"]["name"] == "missing-fe-data"


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        run(["gamma", "frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["char", "gauss", "--modulus", "4"])
    assert e.value.code == 2


def test_deterministic_bytes():
    argv = ["--no-timing", "lfun", "zeros", "--series", "zeta", "--range", "10", "15"]
    out = [sz.dumps(run(argv)[1]) for _ in range(2)]
    assert out[0] == out[1]


def test_every_subcommand_runs(tmp_path, monkeypatch):
    monkeypatch.setenv("ARCHIMEDEA_CACHE_DIR", str(tmp_path))
    cases = [
        ["gamma", "build", "--kind", "gamma_c", "--shift", "1/2"],
        ["gamma", "degree", "--num", "GR(0) GC(1)", "--den", "GR(1)"],
        ["gamma", "twist", "--num", "GR(0) GR(1)", "--eps", "1"],
        ["gamma", "stirling", "--num", "G(1/2,0) G(1/2,1/2)"],
        ["gamma", "eval", "--num", "GR(0)", "--s", "2"],
        ["char", "table", "--modulus", "5"],
        ["char", "eps", "--modulus", "5", "--index", "1"],
        ["char", "eps-product", "--chi1", "3:1", "--chi2", "4:1"],
        ["char", "weil-eps", "--n", "3", "--omega-pi", "1:0", "--omega-rho", "1:0",
         "--chi0", "5:1", "--chi", "7:1", "--s", "0.5"],
        ["coeffs", "list", "--series", "delta", "--N", "5"],
        ["coeffs", "dump", "--series", "zeta", "--N", "10"],
        ["coeffs", "twist", "--series", "delta", "--chi", "3:1", "--N", "4"],
        ["coeffs", "combine", "--a", "zeta", "--b", "delta", "--op", "product", "--N", "4"],
        ["coeffs", "combine", "--a", "zeta", "--op", "partial", "--primes", "2,3"],
        ["coeffs", "local", "--series", "sym2delta", "--p", "2"],
        ["lfun", "eval", "--series", "dirichlet:5:1", "--s", "1/2+3i"],
        ["lfun", "fe-check", "--series", "delta", "--s", "0.6+2i"],
        ["whittaker", "qpoly", "--rep", "PS(0,0,0)", "--n", "2"],
        ["whittaker", "testvec", "--rep", "DS(12)", "--poly", "1 0 1"],
        ["whittaker", "bessel-check", "--nu", "0", "--s", "2"],
        ["whittaker", "gl2", "--rep", "PS(0,1,1/4,1,2)"],
        ["selberg", "axioms", "--series", "zeta", "--N", "200"],
        ["selberg", "partitions", "--d", "3"],
        ["selberg", "primitivity", "--series", "sym2delta"],
    ]
    for argv in cases:
        code, doc = call(*argv)
        assert code == 0, (argv, doc.get("error"))
        sz.decode(doc["payload"])
    assert os.path.exists(tmp_path / "zeta-10.coeffs")


def test_payload_values():
    _, doc = call("whittaker", "qpoly", "--rep", "PS(0,0,0)", "--n", "2")
    assert [complex(x) for x in sz.decode(doc["payload"]["poly"])] == [0, 1]
    _, doc = call("selberg", "partitions", "--d", "3")
    parts = {tuple(p) for p in sz.decode(doc["payload"]["partitions"])}
    assert parts == {(3,), (2, 1), (1, 1, 1)}
    _, doc = call("lfun", "fe-check", "--series", "delta", "--s", "0.6+2i")
    assert doc["payload"]["residual"] < 1e-10
    _, doc = call("selberg", "axioms", "--series", "zeta", "--arch", "GR(-2)")
    assert doc["payload"]["g3"]["status"] == "fail"


def test_grammar():
    assert parse_expr("  ").degree() == 0
    assert parse_expr("G(1/4,1/2)  GR(1-2i)").degree() == Fraction(3, 2)
    with pytest.raises(InvalidArgument):
        parse_expr("GR(0) junk")
    with pytest.raises(InvalidArgument):
        parse_rep("XS(1)")
    assert parse_rep("DS(12)").k == 12
    assert parse_rep("PS(1,0,1/4)").eps1 == 1


def test_main_prints_json(capsys):
    code = main(["--no-timing", "--indent", "0", "selberg", "partitions", "--d", "2"])
    out = capsys.readouterr().out
    assert code == 0 and json.loads(out)["status"] == "ok"
    assert "\n" not in out.strip()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "archimedea", "--no-timing", "char", "gauss",
                        "--modulus", "3", "--index", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["payload"]["gauss_sum"]["im"] > 1.7
    r = subprocess.run([sys.executable, "-m", "archimedea", "char", "eps", "--modulus", "6", "--index", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 1
    r = subprocess.run([sys.executable, "-m", "archimedea", "nope"], capture_output=True, text=True)
    assert r.returncode == 2 and "usage" in r.stderr
