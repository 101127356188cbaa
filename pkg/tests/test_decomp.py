from fractions import Fraction as Fr

import mpmath as mp
import pytest

from vasint.decomp import (PartialFractionTable, check_integrality, partial_fraction_decompose,
                           specialized_summand, summand_rational, zeta_decompose)
from vasint.errors import InvalidParameters
from vasint.hyper import build_vasilyev_series
from vasint.integral import eval_jm_recursive
from vasint.numeric import PrecisionConfig, pochhammer
from vasint.params import JmParams

from oracles import fact

CFG = PrecisionConfig(working_bits=256, target_abs_tol=1e-27)
SIZES = [(E, n) for E in range(2, 6) for n in range(0, 3)]

FROZEN = {
    (2, 0): (0, {2: 1}),
    (2, 1): (5, {2: -3}),
    (3, 0): (0, {3: 2}),
    (3, 1): (-12, {3: 10}),
    (3, 2): (Fr(-351, 2), {3: 146}),
    (4, 0): (0, {2: 0, 4: Fr(7, 4)}),
    (4, 1): (33, {2: -12, 4: Fr(-49, 4)}),
    (5, 0): (0, {3: 0, 5: 2}),
    (5, 2): (Fr(-74463, 16), {3: Fr(6125, 2), 5: 938}),
}


def _summand_oracle(E, n, k):
    # very-well-poised term written out with Pochhammers
    t = Fr(fact(n) ** (2 * E + 1) * fact(3 * n + 2), fact(2 * n + 1) ** (E + 2))
    t *= pochhammer(3 * n + 2, k) * pochhammer(Fr(3 * n, 2) + 2, k) * pochhammer(n + 1, k) ** (E + 2)
    t /= fact(k) * pochhammer(Fr(3 * n, 2) + 1, k) * pochhammer(2 * n + 2, k) ** (E + 2)
    return t


@pytest.mark.parametrize("E, n", [(2, 0), (3, 1), (4, 2), (6, 3)])
def test_specialized_summand_matches_term(E, n):
    for k in range(8):
        assert specialized_summand(E, n, k) == _summand_oracle(E, n, k)


def test_summand_matches_series_builder():
    pref, spec = build_vasilyev_series(3, 1)
    t = pref
    for k in range(5):
        assert specialized_summand(3, 1, k) == t
        for x in spec.alphas:
            t *= x + k
        for y in spec.betas:
            t /= y + k
        t /= k + 1


@pytest.mark.parametrize("E, n", [(2, 1), (5, 2)])
def test_rational_form_agrees_off_integers(E, n):
    for k in range(6):
        assert summand_rational(E, n, k) == specialized_summand(E, n, k)


def test_size_limits():
    with pytest.raises(InvalidParameters):
        zeta_decompose(1, 0)
    with pytest.raises(InvalidParameters):
        zeta_decompose(7, 0)
    with pytest.raises(InvalidParameters):
        zeta_decompose(3, 4)


@pytest.mark.parametrize("E, n", SIZES)
def test_partial_fractions_reconstruct(E, n):
    t = partial_fraction_decompose(E, n)
    assert t.poles() == list(range(n + 1, 2 * n + 2))
    assert all(t.max_order(j) <= E + 1 for j in t.poles())
    for k in [Fr(1, 3), Fr(-7, 5), Fr(23, 2), 40]:
        assert t.evaluate(k) == summand_rational(E, n, k)


@pytest.mark.parametrize("E, n", SIZES)
def test_simple_poles_cancel(E, n):
    t = partial_fraction_decompose(E, n)
    c1 = [t.entries.get((j, 1), 0) for j in t.poles()]
    assert sum(c1) == 0
    if E % 2 == 0:
        assert sum((-1) ** (j + 1) * t.entries.get((j, 1), 0) for j in t.poles()) == 0


@pytest.mark.parametrize("E, n", SIZES)
def test_wrong_parity_coefficients_vanish(E, n):
    d = zeta_decompose(E, n)
    for m, c in d.raw.items():
        if (m - E) % 2:
            assert c == 0
    assert set(d.p) == {m for m in range(2, E + 1) if m % 2 == E % 2}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_coefficients(key):
    d = zeta_decompose(*key)
    p0, p = FROZEN[key]
    assert d.p0 == p0 and d.p == p


@pytest.mark.parametrize("E, n", [(2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1), (5, 0), (3, 2)])
def test_reconstruction_vs_integral(E, n):
    v = zeta_decompose(E, n).value(CFG)
    J = eval_jm_recursive(JmParams.vasilyev(E, n), CFG).value
    with mp.workprec(CFG.prec):
        assert abs(v - J) < 1e-25


def test_beukers_shapes():
    # J_2 = alpha zeta(2) - beta and J_3 = 2a zeta(3) - b with alpha, a integers
    for n in range(4):
        d2, d3 = zeta_decompose(2, n), zeta_decompose(3, n)
        assert d2.p[2].denominator == 1
        assert (d3.p[3] / 2).denominator == 1
        assert check_integrality(2, n, d2).passed and check_integrality(3, n, d3).passed


def test_integrality_report_shape():
    r = check_integrality(3, 2)
    assert r.scale == 8 and r.passed
    names = [e[0] for e in r.entries]
    assert names == ["p0", "p3"]
    assert r.to_dict()["entries"][0] == {"coefficient": "p0", "scaled": "-1404", "integer": True, "note": ""}


def test_integrality_even_p0_is_flagged():
    r = check_integrality(4, 2)
    assert r.entries[0][3] == "p0 integrality is conjectural for even E"
    assert r.passed


@pytest.mark.xfail(strict=True, reason="d_0^4 p_4 = 7/4 at (E,n) = (4,0)")
def test_integrality_at_e4_n0():
    assert check_integrality(4, 0).passed


@pytest.mark.parametrize("E, n", [(2, 0), (2, 1), (3, 0), (3, 1), (5, 0), (5, 1), (5, 2), (3, 3), (4, 2)])
def test_integrality_holds(E, n):
    assert check_integrality(E, n).passed


@pytest.mark.parametrize("E, n", [(4, 0), (4, 1), (6, 0), (6, 1)])
def test_even_small_n_leaves_powers_of_two(E, n):
    r = check_integrality(E, n)
    assert not r.passed
    for name, v, ok, _ in r.entries:
        if not ok:
            den = v.denominator
            assert den & (den - 1) == 0 and den <= 2 ** (E - 1)


def test_table_evaluate_uses_entries():
    t = PartialFractionTable(2, 0, {(1, 2): Fr(1)})
    assert t.evaluate(1) == Fr(1, 4) and t.poles() == [1] and t.max_order(1) == 2
