from fractions import Fraction

import numpy as np
import pytest

from archimedea import arch_gamma as ag
from archimedea import coeffs as co
from archimedea import selberg as se
from archimedea.cli import parse_expr
from archimedea.errors import InvalidArgument, WrongDegree

F = Fraction


def as_set(parts):
    return {tuple(p) for p in parts}


def test_partitions_forced_sets():
    assert as_set(se.factorization_partitions(0)) == {()}
    assert as_set(se.factorization_partitions(1)) == {(1,)}
    assert as_set(se.factorization_partitions(F(3, 2))) == set()
    assert as_set(se.factorization_partitions(2)) == {(2,), (1, 1)}
    assert as_set(se.factorization_partitions(3)) == {(3,), (2, 1), (1, 1, 1)}


def test_partitions_fractional():
    got = as_set(se.factorization_partitions(F(7, 2)))
    assert got == {(F(7, 2),), (F(5, 2), 1)}
    for p in got:
        assert all(x == 1 or x >= 2 for x in p)
        assert sum(p) == F(7, 2)
    # nothing lands strictly between 0 and 1 or between 1 and 2
    assert as_set(se.factorization_partitions(F(1, 2))) == set()
    assert as_set(se.factorization_partitions(F(5, 4))) == set()


@pytest.mark.parametrize("n", range(1, 9))
def test_partitions_brute_force(n):
    assert as_set(se.factorization_partitions(n)) == se.brute_force_partitions(n)


def test_partitions_errors_and_order():
    with pytest.raises(InvalidArgument):
        se.factorization_partitions(-1)
    parts = se.factorization_partitions(4)
    assert [len(p) for p in parts] == sorted(len(p) for p in parts)


def test_describe():
    d = se.describe_partition((2, 1))
    assert d == [(F(2), "degree 2"), (F(1), "shifted Dirichlet L")]


def test_g3():
    assert se.check_g3(parse_expr("GR(0)")).ok
    assert se.check_g3(parse_expr("GC(11/2) GR(1)")).ok
    bad = se.check_g3(parse_expr("GR(-2)"))
    assert not bad.ok and bad.witness.label() == "GR(-2)"
    # denominator atoms count too
    assert not se.check_g3(parse_expr("GR(0) GR(1)") / parse_expr("GR(-3/2)")).ok
    # a ratio factor that moves the pole left is absorbed: Gamma(z) z = Gamma(z+1)
    e = ag.reduce_quotient(parse_expr("GC(15/2)"))
    assert se.check_g3(e.as_arch()).ok


def test_axioms_zeta_delta_sym2():
    for s in (co.zeta(), co.delta(), co.sym_power_delta(2)):
        r = se.axiom_report(se.FEData.from_series(s), N=1000)
        assert r.g3.ok and not r.g3.heuristic
        assert r.g1.ok and r.g1.heuristic and r.g1.label() == "heuristic-pass"
        assert r.g4.ok and r.g4.heuristic
        assert r.js_bound.ok


def test_g1_detects_divergence():
    # a_n = n^(1/2): sigma_a = 3/2
    s = co.CoefficientSeries("grow", coeff_fn=lambda N: np.sqrt(np.arange(1, N + 1)))
    c = se.check_g1(s, 2000)
    assert not c.ok and abs(c.estimate - 1.5) < 0.05


def test_g4_detects_large_theta():
    # local factor with one inverse root p^0.6
    s = co.CoefficientSeries("big", local=lambda p: co.LocalFactor(p, (p ** 0.6,)), degree=1)
    c = se.check_g4(s, 1000)
    assert not c.ok and abs(c.estimate - 0.6) < 0.05
    j = se.check_js(s, 1000)
    assert not j.ok and j.witness[0] == 2


def test_log_euler_coeffs():
    # log 1/(1 - a X) = sum a^k X^k / k
    s = co.CoefficientSeries("geo", local=lambda p: co.LocalFactor(p, (0.5,)), degree=1)
    b = se.log_euler_coeffs(s, 2, 6)
    assert np.allclose(b[1:], [0.5 ** k / k for k in range(1, 7)])


def test_fe_data_validation():
    with pytest.raises(InvalidArgument):
        se.FEData(0, 1, parse_expr("GR(0)"))
    with pytest.raises(InvalidArgument):
        se.FEData(1, 1, parse_expr("GR(0)"), pole_poly_degree=-1)
    with pytest.raises(InvalidArgument):
        se.axiom_report(se.FEData.from_series(co.zeta()), N=50)
    assert se.FEData.from_series(co.zeta()).pole_poly_degree == 1


def test_primitivity_jobs():
    rep = se.primitivity_obstruction(se.FEData.from_series(co.sym_power_delta(2)))
    shapes = {tuple(s["shape"]) for s in rep["shapes"]}
    assert shapes == {(2, 1), (1, 1, 1)}
    for s in rep["shapes"]:
        assert s["quotient_degree"] == 2
        ops = [j["op"] for j in s["jobs"]]
        assert ops.count("reduce_quotient") == 2 and "quotient_pole_report" in ops
        for j in s["jobs"]:
            if j["op"] == "reduce_quotient":
                assert j["expr"].degree() == 2
    with pytest.raises(WrongDegree):
        se.primitivity_obstruction(se.FEData.from_series(co.delta()))
