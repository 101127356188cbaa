import json
import random
from fractions import Fraction as Fr

import mpmath as mp
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from vasint.errors import ConditionViolated, InvalidParameters
from vasint.harness import (andrews_lhs_spec, check_andrews, check_prop2, check_vasilyev,
                            check_whipple, check_zudilin, map_h_to_jm, prop2_grid,
                            random_andrews_case, random_whipple_case, whipple_as_andrews,
                            whipple_sides, zudilin_grid)
from vasint.hyper import eval_pfq_exact_terminating
from vasint.numeric import PrecisionConfig
from vasint.params import JmParams, ParameterVectorH

from oracles import andrews_rhs_brute, terminating_pfq_brute

CFG = PrecisionConfig()


def test_andrews_worked_example():
    r = check_andrews(2, 3, 2, (Fr(1, 2), Fr(1, 3), Fr(1, 5)), (Fr(1, 7), Fr(2, 3), Fr(3, 4)))
    assert r.passed and r.exact and r.abs_diff == 0
    assert r.terms_used == {"lhs": 4, "rhs": 10}
    assert r.rhs == andrews_rhs_brute(3, Fr(2), (Fr(1, 2), Fr(1, 3), Fr(1, 5)), (Fr(1, 7), Fr(2, 3), Fr(3, 4)))


def test_andrews_lhs_against_brute_sum():
    a, b, c = Fr(2), (Fr(1, 2), Fr(1, 3), Fr(1, 5)), (Fr(1, 7), Fr(2, 3), Fr(3, 4))
    spec = andrews_lhs_spec(3, a, b, c)
    assert eval_pfq_exact_terminating(spec) == terminating_pfq_brute(spec.alphas, spec.betas, 1, 3)


def test_andrews_N0_is_one():
    r = check_andrews(1, 0, Fr(1, 3), (1, 2), (3, 4))
    assert r.passed and r.lhs == r.rhs == 1


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(1, 3), st.integers(0, 5), st.integers(0, 10 ** 6))
def test_andrews_random(s, N, seed):
    a, b, c = random_andrews_case(random.Random(seed), s, N)
    assert check_andrews(s, N, a, b, c).passed


def test_andrews_input_errors():
    with pytest.raises(InvalidParameters):
        check_andrews(2, 1, 1, (1, 2), (3, 4))
    with pytest.raises(InvalidParameters):
        check_andrews(1, -1, 1, (1, 2), (3, 4))
    with pytest.raises(InvalidParameters):
        check_andrews(1, 1, mp.mpf("0.5"), (1, 2), (3, 4))
    # 1 + a - b_1 = 0
    with pytest.raises(InvalidParameters):
        check_andrews(1, 1, 1, (2, Fr(1, 2)), (Fr(1, 3), Fr(1, 4)))


def test_whipple_worked_example():
    r = check_whipple(4, Fr(1, 2), Fr(1, 3), Fr(1, 5), 3, Fr(7, 2))
    assert r.passed and r.lhs == r.rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 10 ** 6))
def test_whipple_random(N, seed):
    assert check_whipple(N, *random_whipple_case(random.Random(seed), N)).passed


def test_whipple_is_andrews_s1():
    a, b, c, e, f = Fr(1, 2), Fr(1, 3), Fr(1, 5), Fr(3), Fr(7, 2)
    _, _, seven = whipple_sides(4, a, b, c, e, f)
    A, B, C = whipple_as_andrews(4, a, b, c, e, f)
    other = andrews_lhs_spec(4, A, B, C)
    assert sorted(seven.alphas) == sorted(other.alphas)
    assert sorted(seven.betas) == sorted(other.betas)


def test_whipple_rejects_floats():
    with pytest.raises(InvalidParameters):
        check_whipple(2, mp.mpf("0.3"), 1, 1, 3, 4)


@pytest.mark.parametrize("E, n", [(2, 0), (3, 1), (5, 2)])
def test_map_h_to_jm_vasilyev(E, n):
    assert map_h_to_jm(ParameterVectorH.vasilyev(E, n)) == JmParams.vasilyev(E, n)


def test_map_h_to_jm_general():
    h = ParameterVectorH(2, (9, 1, 2, Fr(3, 2), 1))
    p = map_h_to_jm(h)
    assert p.a == (1, 2, Fr(3, 2)) and p.b == (Fr(17, 2), 9) and p.z == 1


@pytest.mark.parametrize("h", [ParameterVectorH(2, (4, 1, 1, 1, 1)), ParameterVectorH(1, (3, 1, 1, 1)),
                               ParameterVectorH(3, (12, 1, 2, 1, 2, 1))])
def test_zudilin_examples(h):
    r = check_zudilin(h, CFG)
    assert r.passed, r.to_dict()
    assert r.abs_diff <= CFG.target_abs_tol


def test_zudilin_cross_check_multisum():
    h = zudilin_grid(2)[0]
    r = check_zudilin(h, CFG, cross_check="multisum", agree_tol=1e-22)
    assert r.passed
    assert any(c.name == "recursive vs multisum" and c.ok for c in r.conditions)


def test_zudilin_quadrature_widens_tolerance():
    r = check_zudilin(ParameterVectorH(2, (9, 1, 2, Fr(3, 2), 1)), CFG, lhs_method="quadrature")
    assert r.passed and r.tolerance > CFG.target_abs_tol
    assert r.notes


def test_zudilin_unknown_method():
    with pytest.raises(InvalidParameters):
        check_zudilin(ParameterVectorH(1, (3, 1, 1, 1)), CFG, lhs_method="magic")


def test_zudilin_guard():
    # 1 + h0 - h3 = 1 is not above h2
    h = ParameterVectorH(2, (2, 1, 1, 2, 1))
    assert not h.admissibility()
    with pytest.raises(ConditionViolated) as ei:
        check_zudilin(h, CFG)
    assert not ei.value.verdict.ok


@pytest.mark.parametrize("E, n", [(2, 0), (3, 0), (3, 1), (4, 1)])
def test_vasilyev_identity(E, n):
    r = check_vasilyev(E, n, CFG)
    assert r.passed
    assert r.notes == ["boundary case b1-a1 = a0, admitted for m > 1"]


def test_vasilyev_limits():
    with pytest.raises(InvalidParameters):
        check_vasilyev(1, 0, CFG)
    with pytest.raises(InvalidParameters):
        check_vasilyev(7, 0, CFG)


@pytest.mark.parametrize("part, s", [("even", 1), ("even", 2), ("odd", 1), ("odd", 2)])
def test_prop2_grid_samples(part, s):
    grid = prop2_grid(part, s, count=4)
    assert grid
    for params in grid[:2]:
        assert check_prop2(part, params, CFG).passed


def test_prop2_guard():
    with pytest.raises(ConditionViolated):
        check_prop2("even", {"a": Fr(5, 3), "b": (1, 1), "c": (1, 1)}, CFG)


def test_tolerance_monotone():
    h = ParameterVectorH(2, (4, 1, 1, 1, 1))
    tight = check_zudilin(h, CFG)
    loose = check_zudilin(h, CFG.with_tol(1e-10))
    assert tight.passed and loose.passed
    assert loose.tolerance > tight.tolerance


def test_report_serializes():
    r = check_vasilyev(2, 0, CFG)
    r.seed = 7
    d = json.loads(json.dumps(r.to_dict()))
    assert d["identity"] == "vasilyev" and d["seed"] == 7 and d["passed"] is True
    assert d["precision"]["bits"] == 256 and d["wall_ms"] is None
    assert mp.mpf(d["lhs"]) > 1.64
    assert r.to_dict(timing=True)["wall_ms"] >= 0
