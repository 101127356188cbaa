import random
from fractions import Fraction as Fr

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from vasint.errors import ConditionViolated, InvalidParameters
from vasint.harness import random_andrews_case, random_jm_case
from vasint.hyper import SeriesSpec, eval_pfq
from vasint.integral import eval_jm_recursive
from vasint.multisum import (DomainInput, MultisumSpec, check_lemma4, check_multizeta_domain,
                             check_prop2_conditions, check_zlobin_conditions, eval_andrews_rhs_exact,
                             eval_feven_rhs, eval_fodd_rhs, eval_multisum, eval_zlobin_multisum,
                             feven_spec, fodd_spec, model_partial_sums, prop2_prefactor, sum_exact,
                             zlobin_spec)
from vasint.numeric import PrecisionConfig, to_mpf, zeta_int
from vasint.params import JmParams

from oracles import andrews_rhs_brute, rf, simplex, zlobin_brute

CFG = PrecisionConfig()
halves = st.integers(-10, 6).map(lambda k: Fr(k, 2))


# ------------------------------------------------------------ domain

def test_lemma4_examples():
    v = check_lemma4(DomainInput((0, 0, 0), (-3, 1, -2)))
    assert not v.ok and v.failing == [2]
    assert check_lemma4(DomainInput((-1, -1), (-1, -1))).ok
    v = check_lemma4(DomainInput((-1,), (0,)))
    assert not v.ok and v.failing == [1]


def test_domain_input_lengths():
    with pytest.raises(InvalidParameters):
        DomainInput((0, 1), (2,))


def test_multizeta_examples():
    assert check_multizeta_domain((2, 2)).ok
    v = check_multizeta_domain((3, -1, 2))
    assert not v.ok and v.failing == [2] and v.summary() == "diverges at r=2"
    assert not check_multizeta_domain((1,)).ok
    with pytest.raises(InvalidParameters):
        check_multizeta_domain(())


@settings(max_examples=200, deadline=None)
@given(st.lists(halves, min_size=1, max_size=5))
def test_multizeta_is_lemma4_reduction(s):
    d = DomainInput((0,) * len(s), tuple(-x for x in s))
    a, b = check_multizeta_domain(s), check_lemma4(d)
    assert a.ok == b.ok and a.failing == b.failing


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(halves, halves), min_size=1, max_size=4), st.data())
def test_lemma4_monotone(pairs, data):
    E = [e for e, _ in pairs]
    F = [f for _, f in pairs]
    if not check_lemma4(DomainInput(E, F)).ok:
        return
    j = data.draw(st.integers(0, len(E) - 1))
    drop = data.draw(st.fractions(min_value=0, max_value=5, max_denominator=4))
    E2 = list(E)
    E2[j] -= drop
    F2 = list(F)
    F2[j] -= drop
    assert check_lemma4(DomainInput(E2, F)).ok
    assert check_lemma4(DomainInput(E, F2)).ok


def test_divergence_probe_on_counterexample():
    d = DomainInput((0, 0, 0), (-3, 1, -2))
    S = model_partial_sums(d, first=2)
    assert S[0] < S[1] < S[2] and S[2] - S[1] > 1e-3


def test_model_sums_converge_inside_domain():
    d = DomainInput((-1, -1), (-2, -3))
    S = model_partial_sums(d)
    assert abs(S[2] - S[1]) < 1e-3


def test_model_sums_match_enumeration():
    d = DomainInput((Fr(1, 2), -1, 0), (-2, Fr(-1, 2), -3))
    S = model_partial_sums(d, caps=(12,))
    total = 0.0
    for ks in simplex(3, 12):
        run, t = 0, 1.0
        for j, k in enumerate(ks):
            run += k
            t *= (k + 1) ** float(d.E[j]) * (run + 1) ** float(d.F[j])
        total += t
    assert abs(S[0] - total) < 1e-9 * total


# ----------------------------------------------------------- Andrews

def test_andrews_rhs_N0():
    assert eval_andrews_rhs_exact(0, 1, (Fr(1, 2), Fr(1, 3)), (Fr(1, 4), Fr(1, 5))) == 1


def test_andrews_rhs_small_case_by_hand():
    a, b, c = Fr(1), (Fr(1, 2), Fr(1, 3)), (Fr(1, 4), Fr(1, 5))
    # k_1 in {0, 1}
    pref = (1 + a) * (1 + a - b[1] - c[1]) / ((1 + a - b[1]) * (1 + a - c[1]))
    t1 = (Fr(-1) / (b[1] + c[1] - a - 1)) * (1 + a - b[0] - c[0]) * b[1] * c[1] / ((1 + a - b[0]) * (1 + a - c[0]))
    assert eval_andrews_rhs_exact(1, a, b, c) == pref * (1 + t1)


@pytest.mark.parametrize("seed", range(6))
def test_andrews_rhs_vs_brute(seed):
    rng = random.Random(seed)
    s, N = 1 + seed % 3, 1 + seed % 4
    a, b, c = random_andrews_case(rng, s, N)
    assert eval_andrews_rhs_exact(N, a, b, c) == andrews_rhs_brute(N, a, b, c)


@pytest.mark.parametrize("seed", range(8))
def test_andrews_rhs_bc_symmetry(seed):
    rng = random.Random(100 + seed)
    s, N = 1 + seed % 3, seed % 6
    a, b, c = random_andrews_case(rng, s, N)
    assert eval_andrews_rhs_exact(N, a, b, c) == eval_andrews_rhs_exact(N, a, c, b)


def test_andrews_rhs_requires_rationals():
    with pytest.raises(InvalidParameters):
        eval_andrews_rhs_exact(1, mp.mpf("0.3"), (1, 2), (3, 4))


# ------------------------------------------------------ Prop 2 sums

def test_feven_s1_is_single_series():
    a, b, c = Fr(12), (Fr(1, 2), Fr(3, 2)), (Fr(2), Fr(1))
    r = eval_feven_rhs(a, b, c, CFG)
    spec = SeriesSpec((1 + a - b[0] - c[0], b[1], c[1]), (1 + a - b[0], 1 + a - c[0]), 1)
    ref = eval_pfq(spec, CFG).value
    with mp.workprec(CFG.prec):
        assert abs(r.value - ref) < 1e-20


def test_feven_strong_convergence_vs_partial_sum():
    a, b, c = Fr(80), (Fr(1, 2), Fr(1), Fr(3, 2)), (Fr(1), Fr(1, 3), Fr(2))
    r = eval_feven_rhs(a, b, c, CFG)
    with mp.workprec(CFG.prec):
        partial = to_mpf(sum_exact(feven_spec(a, b, c).levels, 1, 10))
        assert abs(r.value - partial) < 1e-10


def test_feven_vasilyev_e4_mapping_chain():
    # Vasilyev (4,0) through the even identity: a = 2, b = c = (1,1,1)
    a, b, c = 2, (1, 1, 1), (1, 1, 1)
    assert check_prop2_conditions("even", {"a": a, "b": b, "c": c}).ok
    r = eval_feven_rhs(a, b, c, CFG)
    with mp.workprec(CFG.prec):
        # Gamma prefactor of J_4 at the Vasilyev point times the Prop 2 prefactor
        from vasint.hyper import build_zudilin_rhs_series
        from vasint.params import ParameterVectorH
        gq, _ = build_zudilin_rhs_series(ParameterVectorH.vasilyev(4, 0))
        via = gq.evaluate(CFG) * prop2_prefactor(a, b, c).evaluate(CFG) * r.value
        J = eval_jm_recursive(JmParams.vasilyev(4, 0), CFG).value
        assert abs(via - J) < 1e-18


def test_fodd_vs_enumeration():
    a, c0, b, c = Fr(30), Fr(1, 2), (Fr(1), Fr(3, 2)), (Fr(2, 3), Fr(1))
    r = eval_fodd_rhs(a, c0, b, c, CFG)
    with mp.workprec(CFG.prec):
        brute = mp.mpf(0)
        for k1, k2 in simplex(2, 40):
            K = k1 + k2
            t = rf(b[0], k1) * rf(c[0], k1) / (rf(1, k1) * rf(1 + a - c0, k1))
            t *= rf(1 + a - b[0] - c[0], k2) * rf(b[1], K) * rf(c[1], K)
            t /= rf(1, k2) * rf(1 + a - b[0], K) * rf(1 + a - c[0], K)
            brute += to_mpf(t)
        assert abs(r.value - brute) < 1e-12


def test_fodd_s1_is_single_series():
    a, c0, b, c = Fr(9), Fr(2), (Fr(1, 2),), (Fr(3, 2),)
    r = eval_fodd_rhs(a, c0, b, c, CFG)
    ref = eval_pfq(SeriesSpec((b[0], c[0], 1), (1 + a - c0, 1), 1), CFG).value
    with mp.workprec(CFG.prec):
        assert abs(r.value - ref) < 1e-20


def test_prop2_guard_paths():
    with pytest.raises(ConditionViolated):
        eval_feven_rhs(Fr(5, 3), (1, 1), (1, 1), CFG)
    v = check_prop2_conditions("even", {"a": Fr(5, 3), "b": (1, 1), "c": (1, 1)})
    assert [x.name for x in v.failures()] == ["cond1: (2s+1)(a+1) - 2 sum(b_j+c_j) > 0"]
    v = check_prop2_conditions("even", {"a": 1, "b": (1, 1), "c": (1, 1)})
    assert not v.ok and v.failures()[0].name.startswith("cond1")


def test_prop2_sign_patterns_enumerated():
    v = check_prop2_conditions("even", {"a": 20, "b": (1, 1, 1, 1), "c": (1, 1, 1, 1)})
    names = [x.name for x in v.conditions if x.name.startswith("cond2")]
    # r=2: 2^2 patterns, r=3: 2, r=4: 1
    assert len(names) == 7 and v.ok


def test_prop2_odd_vasilyev_points_sit_on_cond3a_boundary():
    def failures(E, n):
        s = (E - 1) // 2
        params = {"a": 3 * n + 2, "c0": n + 1, "b": (n + 1,) * s, "c": (n + 1,) * s}
        return [(x.name.split(":")[0].split()[0], x.detail) for x in check_prop2_conditions("odd", params).failures()]

    assert failures(5, 0) == [("cond3a", "value=0")]
    assert failures(5, 1) == [("cond3a", "value=0")]
    assert failures(3, 0) == [("cond1a", "value=0"), ("cond3a", "value=0")]


def test_fodd_at_vasilyev_boundary_diverges():
    # s = 1: the sum is sum 1/(k+1)
    spec = fodd_spec(2, 1, (1,), (1,))
    assert not check_lemma4(spec.domain_input()).ok


def test_multisum_spec_kinds():
    with pytest.raises(InvalidParameters):
        MultisumSpec("nope", ())


# --------------------------------------------------------- J_m sums

def test_zlobin_m2_zeta2():
    r = eval_zlobin_multisum(JmParams(2, (1, 1, 1), (2, 2), 1), CFG)
    with mp.workprec(CFG.prec):
        assert abs(r.value - zeta_int(2, CFG)) < 1e-20


def test_zlobin_m3_two_zeta3():
    r = eval_zlobin_multisum(JmParams(3, (1, 1, 1, 1), (2, 2, 2), 1), CFG)
    with mp.workprec(CFG.prec):
        assert abs(r.value - 2 * zeta_int(3, CFG)) < 1e-20


def test_zlobin_m2_single_sum_shape():
    p = JmParams(2, (Fr(1, 2), Fr(2, 3), Fr(3, 4)), (Fr(5, 3), Fr(9, 4)), Fr(1, 2))
    spec = zlobin_spec(p)
    assert spec.s == 1
    lv = spec.levels[0]
    assert lv.single_num == (p.b[1] - p.a[2],)
    assert set(lv.cum_num) == {p.a[1], p.a[0]} and set(lv.cum_den) == {p.b[0], p.b[1]}


@pytest.mark.parametrize("m, seed", [(2, 1), (2, 2), (3, 3), (3, 4), (4, 5)])
def test_zlobin_vs_brute_enumeration(m, seed):
    p = random_jm_case(random.Random(seed), m, zmax=0.9)
    r = eval_zlobin_multisum(p, CFG)
    with mp.workprec(128):
        ref = zlobin_brute(p.a, p.b, p.z, 60)
        assert abs(r.value - ref) < 1e-8


def test_literal_odd_exponent_disagrees():
    p = JmParams(3, (Fr(1, 2), Fr(3, 4), Fr(2, 3), Fr(5, 4)), (Fr(2), Fr(3, 2), Fr(9, 4)), Fr(1, 2))
    with mp.workprec(128):
        good = zlobin_brute(p.a, p.b, p.z, 60)
        literal = zlobin_brute(p.a, p.b, p.z, 60, literal_odd_exponent=True)
    J = eval_jm_recursive(p, CFG).value
    assert abs(good - J) < 1e-8
    assert abs(literal - J) > 1e-2


def test_zlobin_conditions():
    assert check_zlobin_conditions(JmParams.vasilyev(3, 0)).ok
    assert not check_zlobin_conditions(JmParams(1, (1, 1), (2,), 1)).ok
    assert not check_zlobin_conditions(JmParams(2, (1, 1, 1), (2, 2), -1)).ok
    with pytest.raises(ConditionViolated):
        eval_zlobin_multisum(JmParams(1, (1, 1), (2,), 1), CFG)


def test_simplex_and_iterated_agree():
    p = JmParams(3, (Fr(1, 2), 1, Fr(3, 2), 2), (Fr(5, 2), 3, Fr(7, 2)), Fr(1, 2))
    spec = zlobin_spec(p)
    a = eval_multisum(spec, CFG, "simplex")
    b = eval_multisum(spec, CFG, "iterated")
    with mp.workprec(CFG.prec):
        assert abs(a.value - b.value) < 1e-20
    with pytest.raises(InvalidParameters):
        eval_multisum(spec, CFG, "bogus")
