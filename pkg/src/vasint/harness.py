"""End-to-end identity checks producing :class:`VerificationReport` objects.

Exact identities (Andrews, Whipple) compare Fractions.  Numeric ones
compare two independently computed mpf values against an absolute
tolerance; if a numeric check fails it is repeated once with doubled
guard bits before the failure is reported.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import ConditionViolated, InvalidParameters, ZeroDenominator
from .hyper import (SeriesSpec, build_vasilyev_series, build_zudilin_rhs_series,
                    eval_pfq, eval_pfq_exact_terminating)
from .integral import QuadratureGrid, check_jm_conditions, eval_jm_quadrature, eval_jm_recursive
from .multisum import (check_prop2_conditions, eval_andrews_rhs_exact, eval_feven_rhs,
                       eval_fodd_rhs, eval_zlobin_multisum, prop2_prefactor)
from .numeric import PrecisionConfig, is_nonpositive_integer, to_mpf
from .params import JmParams, ParameterVectorH, normalize, normalize_all
from .verdict import Condition, ConvergenceVerdict

VASILYEV_MAX_E = 6
VASILYEV_MAX_N = 3
SIDE_TOL_FACTOR = 100


def fmt(x, digits: int = 40) -> str:
    if x is None:
        return None
    if isinstance(x, (Fraction, int)):
        return str(x)
    return mp.nstr(x, digits)


@dataclass
class VerificationReport:
    identity: str
    inputs: dict
    lhs: object
    rhs: object
    abs_diff: object
    tolerance: object
    passed: bool
    conditions: list = field(default_factory=list)
    terms_used: dict = field(default_factory=dict)
    exact: bool = False
    seed: int | None = None
    bits: int | None = None
    wall_ms: float | None = None
    notes: list = field(default_factory=list)

    def to_dict(self, timing: bool = False) -> dict:
        digits = 40 if self.bits is None else max(20, int(self.bits * math.log10(2)))
        return {
            "identity": self.identity,
            "inputs": self.inputs,
            "seed": self.seed,
            "precision": {"bits": self.bits, "tol": None if self.exact else fmt(self.tolerance, 6),
                          "kind": "exact" if self.exact else f"mpf{digits}"},
            "lhs": fmt(self.lhs, digits),
            "rhs": fmt(self.rhs, digits),
            "abs_diff": fmt(self.abs_diff, 6),
            "conditions": [c.to_dict() for c in self.conditions],
            "terms_used": self.terms_used,
            "passed": self.passed,
            "wall_ms": round(self.wall_ms, 3) if timing and self.wall_ms is not None else None,
            "notes": list(self.notes),
        }


def _strs(xs):
    return [str(x) for x in xs]


def _numeric_report(name, inputs, cfg, compute, conditions=()) -> VerificationReport:
    """Evaluate ``compute(cfg) -> (lhs, rhs, terms, extra_conditions, notes)`` and compare."""
    t0 = time.perf_counter()
    notes = []
    # each side is evaluated well inside the comparison tolerance
    side_cfg = cfg.with_tol(cfg.target_abs_tol / SIDE_TOL_FACTOR)
    for attempt in range(2):
        run_cfg = side_cfg if attempt == 0 else side_cfg.with_guard(2 * cfg.guard_bits)
        lhs, rhs, terms, extra, more_notes = compute(run_cfg)
        with mp.workprec(run_cfg.prec):
            diff = abs(to_mpf(lhs) - to_mpf(rhs))
            tol = mp.mpf(cfg.target_abs_tol)
            ok = diff <= tol and all(c.ok for c in extra)
        if ok or attempt == 1:
            break
        notes.append("retried with doubled guard bits")
    rep = VerificationReport(name, inputs, lhs, rhs, diff, tol, ok,
                             list(conditions) + list(extra), terms, bits=cfg.working_bits,
                             notes=notes + list(more_notes))
    rep.wall_ms = 1000 * (time.perf_counter() - t0)
    return rep


def _guard(verdict: ConvergenceVerdict):
    if not verdict:
        raise ConditionViolated(verdict.summary(), verdict)


# ---------------------------------------------------------------- exact

def andrews_lhs_spec(N: int, a, b, c) -> SeriesSpec:
    alphas = (a, a / 2 + 1) + tuple(x for pair in zip(b, c) for x in pair) + (-N,)
    betas = ((a / 2,) + tuple(1 + a - x for pair in zip(b, c) for x in pair) + (1 + a + N,))
    return SeriesSpec(alphas, betas, 1)


def andrews_preconditions(N: int, a, b, c) -> ConvergenceVerdict:
    v = ConvergenceVerdict()
    for j, (bj, cj) in enumerate(zip(b, c), start=1):
        v.add(f"1+a-b{j} not a non-positive integer", not is_nonpositive_integer(1 + a - bj))
        v.add(f"1+a-c{j} not a non-positive integer", not is_nonpositive_integer(1 + a - cj))
    v.add("1+a+N not a non-positive integer", not is_nonpositive_integer(1 + a + N))
    return v


def check_andrews(s: int, N: int, a, b, c) -> VerificationReport:
    a, b, c = normalize(a), normalize_all(b), normalize_all(c)
    if len(b) != s + 1 or len(c) != s + 1:
        raise InvalidParameters(f"s={s} needs {s + 1} values each for b and c")
    if N < 0:
        raise InvalidParameters("N must be non-negative")
    if not all(isinstance(x, Fraction) for x in (a,) + b + c):
        raise InvalidParameters("Andrews check needs rational parameters")
    pre = andrews_preconditions(N, a, b, c)
    if not pre:
        raise InvalidParameters(pre.summary())
    t0 = time.perf_counter()
    lhs = eval_pfq_exact_terminating(andrews_lhs_spec(N, a, b, c))
    rhs = eval_andrews_rhs_exact(N, a, b, c)
    rep = VerificationReport("andrews", {"s": s, "N": N, "a": str(a), "b": _strs(b), "c": _strs(c)},
                             lhs, rhs, abs(lhs - rhs), 0, lhs == rhs, pre.conditions,
                             {"lhs": N + 1, "rhs": math.comb(N + s, s)}, exact=True)
    rep.wall_ms = 1000 * (time.perf_counter() - t0)
    return rep


def whipple_sides(N: int, a, b, c, e, f):
    """(4F3 value, prefactor, 7F6 spec) of Whipple's transformation."""
    lhs = SeriesSpec((a, b, c, -N), (e, f, 1 + a + b + c - e - f - N), 1)
    A = -1 - a + e + f
    seven = SeriesSpec((A, A / 2 + 1, -a + f, -a + e, b, c, -N),
                       (A / 2, e, f, -a - b + e + f, -a - c + e + f, -a + e + f + N), 1)
    pref = Fraction(1)
    for k in range(N):
        num = (-a - b + e + f + k) * (-a - c + e + f + k)
        den = (-a + e + f + k) * (-a - b - c + e + f + k)
        if den == 0:
            raise ZeroDenominator("Whipple prefactor denominator vanishes")
        pref *= Fraction(num) / den
    return lhs, pref, seven


def whipple_as_andrews(N: int, a, b, c, e, f):
    """Andrews parameters (a', b', c') with s = 1 whose left side is Whipple's 7F6."""
    return -1 - a + e + f, (-a + f, b), (-a + e, c)


def check_whipple(N: int, a, b, c, e, f) -> VerificationReport:
    a, b, c, e, f = normalize_all((a, b, c, e, f))
    if not all(isinstance(x, Fraction) for x in (a, b, c, e, f)):
        raise InvalidParameters("Whipple check needs rational parameters")
    if N < 0:
        raise InvalidParameters("N must be non-negative")
    t0 = time.perf_counter()
    four, pref, seven = whipple_sides(N, a, b, c, e, f)
    lhs = eval_pfq_exact_terminating(four)
    rhs = pref * eval_pfq_exact_terminating(seven)
    rep = VerificationReport("whipple", {"N": N, "a": str(a), "b": str(b), "c": str(c),
                                         "e": str(e), "f": str(f)},
                             lhs, rhs, abs(lhs - rhs), 0, lhs == rhs, [],
                             {"lhs": N + 1, "rhs": N + 1}, exact=True)
    rep.wall_ms = 1000 * (time.perf_counter() - t0)
    return rep


# -------------------------------------------------------------- numeric

def prop2_lhs_spec(part: str, params: dict) -> SeriesSpec:
    a = normalize(params["a"])
    b, c = normalize_all(params["b"]), normalize_all(params["c"])
    pairs = tuple(x for pair in zip(b, c) for x in pair)
    if part == "even":
        return SeriesSpec((a, a / 2 + 1) + pairs, (a / 2,) + tuple(1 + a - x for x in pairs), -1)
    c0 = normalize(params["c0"])
    return SeriesSpec((a, a / 2 + 1, c0) + pairs,
                      (a / 2, 1 + a - c0) + tuple(1 + a - x for x in pairs), 1)


def check_prop2(part: str, params: dict, cfg: PrecisionConfig) -> VerificationReport:
    verdict = check_prop2_conditions(part, params)
    _guard(verdict)
    a, b, c = params["a"], params["b"], params["c"]
    inputs = {"part": part, "a": str(a), "b": _strs(b), "c": _strs(c)}
    if part == "odd":
        inputs["c0"] = str(params["c0"])

    def compute(run):
        lhs = eval_pfq(prop2_lhs_spec(part, params), run)
        if part == "even":
            rs = eval_feven_rhs(a, b, c, run)
        else:
            rs = eval_fodd_rhs(a, params["c0"], b, c, run)
        with mp.workprec(run.prec):
            rhs = prop2_prefactor(a, b, c).evaluate(run) * rs.value
        return lhs.value, rhs, {"lhs": lhs.terms, "rhs": rs.terms, "rhs_method": rs.method}, [], []

    return _numeric_report(f"prop2-{part}", inputs, cfg, compute, verdict.conditions)


def map_h_to_jm(h: ParameterVectorH) -> JmParams:
    m, hh = h.m, h.h
    p = JmParams(m, tuple(hh[1:m + 2]), tuple(1 + hh[0] - hh[j + 2] for j in range(1, m + 1)), 1)
    _guard(check_jm_conditions(p))
    return p


def _lhs(p: JmParams, cfg: PrecisionConfig, method: str):
    if method == "recursive":
        r = eval_jm_recursive(p, cfg)
        return r.value, r.terms, None
    if method == "multisum":
        r = eval_zlobin_multisum(p, cfg)
        return r.value, r.terms, None
    if method == "quadrature":
        v, err = eval_jm_quadrature(p, QuadratureGrid())
        return v, 2 * QuadratureGrid().fine ** p.m, err
    raise InvalidParameters(f"unknown lhs method {method!r}")


def check_zudilin(h: ParameterVectorH, cfg: PrecisionConfig, lhs_method: str = "recursive",
                  cross_check: str | None = None, agree_tol=None) -> VerificationReport:
    """Compare J_m (via ``lhs_method``) with the Gamma-weighted very-well-poised series.

    With ``cross_check`` a second LHS evaluator is run and the two must
    agree to ``agree_tol`` (default: tolerance / 100) for the report to pass.
    Quadrature only reaches double precision; its own error heuristic (x10)
    then replaces the tolerance.
    """
    verdict = h.admissibility()
    _guard(verdict)
    p = map_h_to_jm(h)
    inputs = {"m": h.m, "h": _strs(h.h), "lhs_method": lhs_method}
    if cross_check:
        inputs["cross_check"] = cross_check
    gq, spec = build_zudilin_rhs_series(h)
    notes = []

    def compute(run):
        lhs, lterms, qerr = _lhs(p, run, lhs_method)
        extra = []
        terms = {"lhs": lterms}
        if cross_check:
            other, oterms, oerr = _lhs(p, run, cross_check)
            terms["cross_check"] = oterms
            with mp.workprec(run.prec):
                d = abs(to_mpf(lhs) - to_mpf(other))
                lim = (mp.mpf(agree_tol) if agree_tol is not None
                       else mp.mpf(cfg.target_abs_tol) / 100)
                if qerr is not None or oerr is not None:
                    lim = max(lim, 10 * mp.mpf(max(qerr or 0, oerr or 0)))
            extra.append(Condition(f"{lhs_method} vs {cross_check}", bool(d <= lim),
                                   f"diff={mp.nstr(d, 3)} limit={mp.nstr(lim, 3)}"))
        rs = eval_pfq(spec, run)
        with mp.workprec(run.prec):
            rhs = gq.evaluate(run) * rs.value
        terms["rhs"] = rs.terms
        return lhs, rhs, terms, extra, []

    run_cfg = cfg
    if lhs_method == "quadrature":
        _, err = eval_jm_quadrature(p, QuadratureGrid())
        run_cfg = cfg.with_tol(max(cfg.target_abs_tol, 10 * err))
        notes.append("tolerance widened to the quadrature error heuristic")
    rep = _numeric_report("zudilin", inputs, run_cfg, compute, verdict.conditions)
    rep.notes.extend(notes)
    return rep


def check_vasilyev(E: int, n: int, cfg: PrecisionConfig) -> VerificationReport:
    if E < 2 or n < 0:
        raise InvalidParameters("need E >= 2 and n >= 0")
    if E > VASILYEV_MAX_E or n > VASILYEV_MAX_N:
        raise InvalidParameters(f"desk-scale limit is E <= {VASILYEV_MAX_E}, n <= {VASILYEV_MAX_N}")
    p = JmParams.vasilyev(E, n)
    verdict = check_jm_conditions(p)
    _guard(verdict)
    pref, spec = build_vasilyev_series(E, n)

    def compute(run):
        lhs = eval_jm_recursive(p, run)
        rs = eval_pfq(spec, run)
        with mp.workprec(run.prec):
            rhs = to_mpf(pref) * rs.value
        return lhs.value, rhs, {"lhs": lhs.terms, "rhs": rs.terms}, [], []

    notes = []
    if p.b[0] - p.a[1] == p.a[0]:
        notes.append("boundary case b1-a1 = a0, admitted for m > 1")
    rep = _numeric_report("vasilyev", {"E": E, "n": n}, cfg, compute, verdict.conditions)
    rep.notes.extend(notes)
    return rep


# ------------------------------------------------------------ generators

def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def random_andrews_case(rng: random.Random, s: int, N: int, tries: int = 10000):
    """Rejection-sample (a, b, c) admissible for the terminating identity."""
    for _ in range(tries):
        a = random_rational(rng)
        b = tuple(random_rational(rng) for _ in range(s + 1))
        c = tuple(random_rational(rng) for _ in range(s + 1))
        if not andrews_preconditions(N, a, b, c):
            continue
        if is_nonpositive_integer(a / 2) or any(is_nonpositive_integer(x) for x in b + c):
            continue
        try:
            andrews_lhs_spec(N, a, b, c)
            eval_andrews_rhs_exact(N, a, b, c)
        except (ZeroDenominator, InvalidParameters):
            continue
        return a, b, c
    raise RuntimeError("no admissible Andrews parameters found")


def random_whipple_case(rng: random.Random, N: int, tries: int = 10000):
    for _ in range(tries):
        a, b, c, e, f = (random_rational(rng) for _ in range(5))
        if any(is_nonpositive_integer(x) for x in (a, b, c, e, f)):
            continue
        if not andrews_preconditions(N, *whipple_as_andrews(N, a, b, c, e, f)):
            continue
        try:
            four, pref, seven = whipple_sides(N, a, b, c, e, f)
            eval_pfq_exact_terminating(four)
            eval_pfq_exact_terminating(seven)
        except (ZeroDenominator, InvalidParameters):
            continue
        if any(is_nonpositive_integer(x) for x in seven.alphas[:6]):
            continue
        return a, b, c, e, f
    raise RuntimeError("no admissible Whipple parameters found")


_GRID_VALUES = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3),
                Fraction(2, 3), Fraction(7, 4))


def zudilin_grid(m: int, count: int = 20) -> list[ParameterVectorH]:
    """Deterministic admissible vectors: h_0 in 20..26 + 2m, h_j drawn from a small rational set.

    The large h_0 keeps every convergence margin of the multisum above 8,
    so the simplex evaluator reaches 1e-22 within its cap.
    """
    out = []
    for i in range(count):
        h0 = Fraction(20 + 2 * m + 2 * (i % 4)) + (Fraction(1, 2) if i % 3 == 1 else 0)
        hs = tuple(_GRID_VALUES[(7 * i + 3 * j + j * j) % len(_GRID_VALUES)] for j in range(1, m + 3))
        h = ParameterVectorH(m, (h0,) + hs)
        if not h.admissibility():
            continue
        out.append(h)
    return out


def prop2_grid(part: str, s: int, count: int = 16) -> list[dict]:
    out = []
    for i in range(count):
        a = Fraction(10 + (i % 5) * 2) + (Fraction(1, 3) if i % 2 else 0)
        if part == "even":
            b = tuple(_GRID_VALUES[(5 * i + 2 * j) % len(_GRID_VALUES)] for j in range(s + 1))
            c = tuple(_GRID_VALUES[(3 * i + 5 * j + 1) % len(_GRID_VALUES)] for j in range(s + 1))
            params = {"a": a, "b": b, "c": c}
        else:
            b = tuple(_GRID_VALUES[(5 * i + 2 * j) % len(_GRID_VALUES)] for j in range(s))
            c = tuple(_GRID_VALUES[(3 * i + 5 * j + 1) % len(_GRID_VALUES)] for j in range(s))
            c0 = _GRID_VALUES[(i + 4) % len(_GRID_VALUES)]
            params = {"a": a, "c0": c0, "b": b, "c": c}
        if check_prop2_conditions(part, params):
            out.append(params)
    return out


def random_jm_case(rng: random.Random, m: int, zmax: float = 0.9) -> JmParams:
    """Random admissible J_m with a_i, b_i - a_i, a_0 in (0.2, 3) and |z| <= zmax."""
    def pick():
        return Fraction(rng.randint(21, 299), 100)
    a = [pick() for _ in range(m + 1)]
    b = [a[i] + pick() for i in range(1, m + 1)]
    z = Fraction(rng.randint(-int(zmax * 100), int(zmax * 100)), 100)
    return JmParams(m, tuple(a), tuple(b), z)
