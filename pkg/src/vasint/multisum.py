"""Multiple sums over k_1..k_s >= 0 with nested partial-sum structure.

Every summand handled here factors level by level as

    prod_j  A_j(k_j) * C_j(k_1 + ... + k_j)   times  z^(k_1 + ... + k_s),

with A_j(k) = prod (u)_k / (k! prod (v)_k) depending on one index and
C_j(K) = prod (x)_K / prod (y)_K on the running total.  A :class:`Level`
stores the four parameter lists.  Shell sums (fixed total degree K) are
then a chain of discrete convolutions, which is what the simplex
evaluator exploits.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .errors import ConditionViolated, InvalidParameters, MaxTermsExceeded, ZeroDenominator
from .numeric import GammaQuotient, PrecisionConfig, is_nonpositive_integer, to_mpf
from .params import JmParams, normalize, normalize_all
from .summation import SumResult, nested_levin_adaptive
from .verdict import ConvergenceVerdict


@dataclass(frozen=True)
class Level:
    single_num: tuple = ()
    single_den: tuple = ()
    cum_num: tuple = ()
    cum_den: tuple = ()

    def exponents(self):
        """(E, F) of the power-law model (k+1)^E (K+1)^F for this level."""
        E = sum(self.single_num) - sum(self.single_den) - 1
        F = sum(self.cum_num) - sum(self.cum_den)
        return E, F


KINDS = ("andrews_rhs", "feven_rhs", "fodd_rhs", "zlobin_even", "zlobin_odd")


@dataclass(frozen=True)
class MultisumSpec:
    kind: str
    levels: tuple
    z: object = Fraction(1)
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"unknown multisum kind {self.kind!r}")
        object.__setattr__(self, "z", normalize(self.z))

    @property
    def s(self) -> int:
        return len(self.levels)

    def domain_input(self) -> "DomainInput":
        ef = [lv.exponents() for lv in self.levels]
        return DomainInput(tuple(e for e, _ in ef), tuple(f for _, f in ef))


# ---------------------------------------------------------------- builders

def andrews_levels(N: int, a, b, c) -> tuple:
    s = len(b) - 1
    if s < 1 or len(c) != s + 1:
        raise InvalidParameters("need b and c of equal length s+1 >= 2")
    levels = []
    for j in range(s):
        cum_num = (b[j + 1], c[j + 1])
        cum_den = (1 + a - b[j], 1 + a - c[j])
        if j == s - 1:
            cum_num += (-N,)
            cum_den += (b[s] + c[s] - a - N,)
        levels.append(Level((1 + a - b[j] - c[j],), (), cum_num, cum_den))
    return tuple(levels)


def feven_spec(a, b, c) -> MultisumSpec:
    a, b, c = normalize(a), normalize_all(b), normalize_all(c)
    s = len(b) - 1
    if s < 1 or len(c) != s + 1:
        raise InvalidParameters("even part needs b, c of equal length s+1 >= 2")
    levels = tuple(Level((1 + a - b[j] - c[j],), (), (b[j + 1], c[j + 1]),
                         (1 + a - b[j], 1 + a - c[j])) for j in range(s))
    return MultisumSpec("feven_rhs", levels, 1, {"a": a, "b": b, "c": c})


def fodd_spec(a, c0, b, c) -> MultisumSpec:
    a, c0, b, c = normalize(a), normalize(c0), normalize_all(b), normalize_all(c)
    s = len(b)
    if s < 1 or len(c) != s:
        raise InvalidParameters("odd part needs b, c of equal length s >= 1")
    levels = [Level((), (), (b[0], c[0]), (1 + a - c0,))]
    for j in range(1, s):
        levels.append(Level((1 + a - b[j - 1] - c[j - 1],), (), (b[j], c[j]),
                            (1 + a - b[j - 1], 1 + a - c[j - 1])))
    return MultisumSpec("fodd_rhs", tuple(levels), 1, {"a": a, "c0": c0, "b": b, "c": c})


def zlobin_spec(p: JmParams) -> MultisumSpec:
    """Level structure of the multisum expansion of J_m (any m >= 1)."""
    a = p.a
    b = (None,) + p.b           # b[i] is b_i
    m = p.m
    levels = []
    if m % 2 == 0:
        s = m // 2
        for j in range(1, s + 1):
            i = 2 * s - 2 * j
            levels.append(Level((b[i + 2] - a[i + 2],), (), (a[i + 1], a[i]),
                                (b[i + 1], b[i + 2])))
        kind = "zlobin_even"
    else:
        s = (m - 1) // 2
        levels.append(Level((a[2 * s + 1],), (), (a[2 * s],), (b[2 * s + 1],)))
        for j in range(2, s + 2):
            i = 2 * s - 2 * j + 2
            levels.append(Level((b[i + 2] - a[i + 2],), (), (a[i + 1], a[i]),
                                (b[i + 1], b[i + 2])))
        kind = "zlobin_odd"
    return MultisumSpec(kind, tuple(levels), p.z, {"jm": p})


def jm_beta_prefactor(p: JmParams) -> GammaQuotient:
    num, den = [], []
    for i in range(1, p.m + 1):
        num += [p.a[i], p.b[i - 1] - p.a[i]]
        den.append(p.b[i - 1])
    return GammaQuotient(tuple(num), tuple(den))


# ------------------------------------------------------- convergence domain

@dataclass(frozen=True)
class DomainInput:
    E: tuple
    F: tuple

    def __post_init__(self):
        if len(self.E) != len(self.F):
            raise InvalidParameters("E and F must have equal lengths")
        object.__setattr__(self, "E", normalize_all(self.E))
        object.__setattr__(self, "F", normalize_all(self.F))

    @property
    def s(self) -> int:
        return len(self.E)

    def values(self) -> list:
        """v_r = E_r + F_r + 1 + max(Z_{r+1} + ... + Z_s), r = 1..s.

        The maximum of a sum-set is the sum of the maxima, so no set is
        ever enumerated.
        """
        E, F, s = self.E, self.F, self.s
        out, tail = [None] * s, 0
        for r in range(s - 1, -1, -1):
            out[r] = E[r] + F[r] + 1 + tail
            tail += max(F[r], E[r] + F[r] + 1)
        return out


def check_lemma4(d: DomainInput) -> ConvergenceVerdict:
    v = ConvergenceVerdict()
    for r, val in enumerate(d.values(), start=1):
        v.add(f"r={r}: E_r+F_r+1+max(Z_(r+1)+...+Z_s) < 0", val < 0, f"value={val}", index=r)
    return v


def check_multizeta_domain(s_vec) -> ConvergenceVerdict:
    """Absolute convergence of zeta(s_d, ..., s_1); ``s_vec`` lists s_1 .. s_d."""
    s_vec = normalize_all(s_vec)
    d = len(s_vec)
    if d < 1:
        raise InvalidParameters("need at least one exponent")
    v = ConvergenceVerdict()
    tail = 0
    rows = []
    for r in range(d, 0, -1):
        tail += s_vec[r - 1]
        rows.append((r, tail))
    for r, total in reversed(rows):
        v.add(f"r={r}: s_r+...+s_d > {d - r + 1}", total > d - r + 1,
              f"sum={total}", index=r)
    return v


def model_partial_sums(d: DomainInput, caps=(20, 40, 80), first: int = 1) -> list[float]:
    """Simplex partial sums of prod (k_j+1)^E_j (k_1+..+k_j+1)^F_j in floating point.

    Indices before ``first`` (1-based) are pinned to zero, giving the
    sub-sum over k_first .. k_s.
    """
    E = [float(x) for x in d.E]
    F = [float(x) for x in d.F]
    K = max(caps)
    k = np.arange(K + 1, dtype=float)
    G = None
    for j in range(d.s):
        C = (k + 1) ** F[j]
        if j < first - 1:
            A = np.zeros(K + 1)
            A[0] = 1.0
        else:
            A = (k + 1) ** E[j]
        G = A * C if G is None else C * np.convolve(A, G)[:K + 1]
    S = np.cumsum(G)
    return [float(S[c]) for c in caps]


# ------------------------------------------------------------ conditions

def _nonpolar(v: ConvergenceVerdict, label: str, x):
    v.add(f"{label} not a non-positive integer", not is_nonpositive_integer(x), f"{x}")


def check_prop2_conditions(part: str, params: dict) -> ConvergenceVerdict:
    """All inequalities guarding the nonterminating identities.

    ``params`` holds a, b, c (even) or a, c0, b, c (odd).  Each sign-pattern
    inequality is reported with its r and A-pattern.
    """
    v = ConvergenceVerdict()
    a = normalize(params["a"])
    b, c = normalize_all(params["b"]), normalize_all(params["c"])
    if part == "even":
        s = len(b) - 1
        if s < 1 or len(c) != s + 1:
            raise InvalidParameters("even part needs b, c of equal length s+1 >= 2")
        for j in range(s + 1):
            _nonpolar(v, f"1+a-b{j + 1}", 1 + a - b[j])
            _nonpolar(v, f"1+a-c{j + 1}", 1 + a - c[j])
        lhs = (2 * s + 1) * (a + 1) - 2 * sum(b[j] + c[j] for j in range(s + 1))
        v.add("cond1: (2s+1)(a+1) - 2 sum(b_j+c_j) > 0", lhs > 0, f"value={lhs}", index=1)
        d = [1 + a - b[j] - c[j] for j in range(s + 1)]     # d[j-1] = 1+a-b_j-c_j
        for r in range(2, s + 2):
            idx = list(range(r, s + 1))
            for pattern in itertools.product((1, 2), repeat=len(idx)):
                val = d[s] + sum(A * d[j - 1] for A, j in zip(pattern, idx))
                v.add(f"cond2 r={r} A={pattern}", val > 0, f"value={val}", index=r)
        return v
    if part == "odd":
        c0 = normalize(params["c0"])
        s = len(b)
        if s < 1 or len(c) != s:
            raise InvalidParameters("odd part needs b, c of equal length s >= 1")
        _nonpolar(v, "1+a-c0", 1 + a - c0)
        for j in range(s):
            _nonpolar(v, f"1+a-b{j + 1}", 1 + a - b[j])
            _nonpolar(v, f"1+a-c{j + 1}", 1 + a - c[j])
        lhs = 2 * s * (a + 1) - 2 * c0 - 2 * sum(b[j] + c[j] for j in range(s))
        v.add("cond1a: 2s(a+1) - 2c0 - 2 sum(b_j+c_j) > 0", lhs > 0, f"value={lhs}", index=1)
        d = [1 + a - b[j] - c[j] for j in range(s)]
        for r in range(2, s + 1):
            idx = list(range(r, s))
            for pattern in itertools.product((1, 2), repeat=len(idx)):
                val = d[s - 1] + sum(A * d[j - 1] for A, j in zip(pattern, idx))
                v.add(f"cond2a r={r} A={pattern}", val > 0, f"value={val}", index=r)
        idx = list(range(2, s))
        for pattern in itertools.product((1, 2), repeat=len(idx)):
            val = 1 + a - c0 - b[0] - c[0] + sum(A * d[j - 1] for A, j in zip(pattern, idx))
            v.add(f"cond3a A={pattern}", val > 0, f"value={val}", index=1)
        return v
    raise InvalidParameters(f"part must be 'even' or 'odd', got {part!r}")


# ------------------------------------------------------------ evaluation

def _table(num, den, factorial: bool, K: int, start: list | None = None):
    """Return [prod (num)_k / (k!? prod (den)_k) for k = 0..K], extending ``start``."""
    t = start if start is not None else [None]
    if t[0] is None:
        t[0] = mp.mpf(1) if any(isinstance(x, mp.mpf) for x in num + den) else Fraction(1)
    for k in range(len(t), K + 1):
        r = t[k - 1]
        if r == 0:
            t.append(r)
            continue
        for x in num:
            r *= x + (k - 1)
        dd = k if factorial else 1
        for y in den:
            dd *= y + (k - 1)
        if dd == 0:
            raise ZeroDenominator(f"denominator Pochhammer vanishes at index {k}")
        t.append(r / dd)
    return t


def sum_exact(levels, z, K: int) -> Fraction:
    """Exact sum over k_1 + ... + k_s <= K (the full sum when it terminates by K)."""
    G = None
    for lv in levels:
        A = _table(lv.single_num, lv.single_den, True, K)
        C = _table(lv.cum_num, lv.cum_den, False, K)
        if G is None:
            G = [A[k] * C[k] for k in range(K + 1)]
        else:
            G = [C[k] * sum(A[i] * G[k - i] for i in range(k + 1) if A[i] and G[k - i])
                 for k in range(K + 1)]
    zk = Fraction(1)
    total = Fraction(0)
    for k in range(K + 1):
        total += G[k] * zk
        zk *= z
    return total


class _Shells:
    """Incremental shell sums g_K = z^K * (sum over k_1+..+k_s = K)."""

    def __init__(self, levels, z):
        self.levels = levels
        self.z = to_mpf(z)
        n = len(levels)
        self.A = [[mp.mpf(1)] for _ in range(n)]
        self.C = [[mp.mpf(1)] for _ in range(n)]
        self.G = [[] for _ in range(n)]
        self.shells = []
        self.zk = mp.mpf(1)

    def extend(self, K: int):
        for j, lv in enumerate(self.levels):
            _table([to_mpf(x) for x in lv.single_num], [to_mpf(x) for x in lv.single_den],
                   True, K, self.A[j])
            _table([to_mpf(x) for x in lv.cum_num], [to_mpf(x) for x in lv.cum_den],
                   False, K, self.C[j])
        for k in range(len(self.shells), K + 1):
            for j in range(len(self.levels)):
                if j == 0:
                    g = self.A[0][k] * self.C[0][k]
                else:
                    prev = self.G[j - 1]
                    g = self.C[j][k] * mp.fdot(self.A[j][:k + 1], prev[k::-1])
                self.G[j].append(g)
            if k:
                self.zk *= self.z
            self.shells.append(self.G[-1][k] * self.zk)


def sum_simplex(levels, z, cfg: PrecisionConfig, tol=None) -> SumResult:
    """Truncate at total degree K, doubling K until the estimate settles.

    Stops when consecutive estimates agree to tol/2, the last shell is below
    tol/2 and a power-law tail extrapolated from the shells at K/2 and K is
    below tol/2.
    """
    with mp.workprec(cfg.prec):
        tol = mp.mpf(cfg.target_abs_tol if tol is None else tol)
        sh = _Shells(levels, z)
        K, prev = 16, None
        while True:
            K = min(K, cfg.simplex_cap)
            sh.extend(K)
            total = mp.fsum(sh.shells)
            if prev is not None:
                last = abs(sh.shells[K])
                half = abs(sh.shells[K // 2])
                tail = _power_tail(last, half, K)
                diff = abs(total - prev)
                if diff < tol / 2 and last < tol / 2 and tail < tol / 2:
                    return SumResult(total, diff + tail, K + 1, "simplex")
            if K >= cfg.simplex_cap:
                raise MaxTermsExceeded(
                    f"simplex sum not within {mp.nstr(tol, 3)} at cap {cfg.simplex_cap}", total,
                    abs(total - prev) if prev is not None else None)
            prev = total
            K *= 2


def _power_tail(last, half, K):
    # shells ~ K^(-1-e): fit e from two shells, integrate the tail
    if last == 0:
        return mp.mpf(0)
    if half == 0 or last >= half:
        return mp.inf
    e = mp.log(half / last) / mp.log(2) - 1
    if e <= 0:
        return mp.inf
    return last * K / e


def sum_iterated(levels, z, cfg: PrecisionConfig, tol=None) -> SumResult:
    """Nested evaluation: F(j, P) = sum_k A_j(k) C_j(P+k) F(j+1, P+k), F(s+1, P) = z^P."""
    with mp.workprec(cfg.prec):
        tol = mp.mpf(cfg.target_abs_tol if tol is None else tol)
        cache = {}

        def tables(j, kind, K):
            # keyed on precision too: each adaptive pass runs with more bits
            key = (j, kind, mp.mp.prec)
            lv = levels[j]
            if key not in cache:
                cache[key] = [mp.mpf(1)]
            if kind == "A":
                num, den = lv.single_num, lv.single_den
            else:
                num, den = lv.cum_num, lv.cum_den
            return _table([to_mpf(x) for x in num], [to_mpf(x) for x in den],
                          kind == "A", K, cache[key])

        def coefficients(j, P, count):
            A = tables(j, "A", count - 1)
            C = tables(j, "C", P + count - 1)
            return 1, [A[k] * C[P + k] for k in range(count)]

        def leaf(P):
            return to_mpf(z) ** P

        res = nested_levin_adaptive(len(levels), coefficients, leaf, tol / 4)
        return SumResult(+res.value, res.error, res.terms, res.method)


PILOT_DEGREE = 128


def predicted_simplex_ok(spec: MultisumSpec, cfg: PrecisionConfig) -> bool:
    """Heuristic: can the simplex truncation plausibly reach tolerance within the cap?

    On |z| = 1 the domain margin alone is not enough (large parameters give
    large constants), so shells up to a pilot degree are computed and the
    power law fitted from degrees K/2 and K is extrapolated to the cap.
    """
    z = abs(float(spec.z))
    digits = -math.log10(cfg.target_abs_tol)
    if z < 1:
        if z == 0:
            return True
        need = digits / -math.log10(z)
        return 2 * need + 64 < cfg.simplex_cap
    margin = -max(float(v) for v in spec.domain_input().values())
    if margin <= 0:
        return False
    K = min(PILOT_DEGREE, cfg.simplex_cap)
    with mp.workprec(64 + int(3.33 * digits)):
        sh = _Shells(spec.levels, spec.z)
        sh.extend(K)
        last, half = abs(sh.shells[K]), abs(sh.shells[K // 2])
        if last == 0:
            return True
        if half == 0 or last >= half:
            return False
        e = float(mp.log(half / last) / mp.log(2)) - 1
        if e <= 0.5:
            return False
        # degree at which the tail beyond K'/2 drops below a quarter of the tolerance
        tail_now = float(mp.log10(last * K / e))
        target = math.log10(cfg.target_abs_tol / 4)
        needed = 2 * K * 10 ** max(0.0, (tail_now - target) / e)
    return needed <= cfg.simplex_cap


def eval_multisum(spec: MultisumSpec, cfg: PrecisionConfig, method: str = "auto") -> SumResult:
    if method == "auto":
        method = "simplex" if predicted_simplex_ok(spec, cfg) else "iterated"
    if method == "simplex":
        return sum_simplex(spec.levels, spec.z, cfg)
    if method == "iterated":
        return sum_iterated(spec.levels, spec.z, cfg)
    raise InvalidParameters(f"unknown method {method!r}")


def eval_andrews_rhs_exact(N: int, a, b, c) -> Fraction:
    a, b, c = normalize(a), normalize_all(b), normalize_all(c)
    if not all(isinstance(x, Fraction) for x in (a,) + b + c):
        raise InvalidParameters("exact evaluation needs rational parameters")
    if N < 0:
        raise InvalidParameters("N must be non-negative")
    s = len(b) - 1
    levels = andrews_levels(N, a, b, c)
    pref = Fraction(1)
    for k in range(N):
        num = (1 + a + k) * (1 + a - b[s] - c[s] + k)
        den = (1 + a - b[s] + k) * (1 + a - c[s] + k)
        if den == 0:
            raise ZeroDenominator("prefactor denominator vanishes")
        pref *= Fraction(num) / den
    return pref * sum_exact(levels, 1, N)


def _require(verdict: ConvergenceVerdict):
    if not verdict:
        raise ConditionViolated(verdict.summary(), verdict)


def prop2_prefactor(a, b, c) -> GammaQuotient:
    """Gamma quotient in front of both nonterminating multisums (uses the last b, c)."""
    a, bl, cl = normalize(a), normalize(b[-1]), normalize(c[-1])
    return GammaQuotient((1 + a - bl, 1 + a - cl), (1 + a, 1 + a - bl - cl))


def eval_feven_rhs(a, b, c, cfg: PrecisionConfig, method: str = "auto") -> SumResult:
    """Multiple sum of the even nonterminating identity, without its Gamma prefactor."""
    _require(check_prop2_conditions("even", {"a": a, "b": b, "c": c}))
    return eval_multisum(feven_spec(a, b, c), cfg, method)


def eval_fodd_rhs(a, c0, b, c, cfg: PrecisionConfig, method: str = "auto") -> SumResult:
    _require(check_prop2_conditions("odd", {"a": a, "c0": c0, "b": b, "c": c}))
    return eval_multisum(fodd_spec(a, c0, b, c), cfg, method)


def check_zlobin_conditions(p: JmParams) -> ConvergenceVerdict:
    """Admissibility of the multisum expansion: |z| < 1, or z = 1 with strict domain conditions."""
    v = ConvergenceVerdict()
    v.add("a0 > 0", p.a[0] > 0, f"a0={p.a[0]}")
    for i in range(1, p.m + 1):
        v.add(f"b{i} > a{i} > 0", p.b[i - 1] > p.a[i] > 0, f"a{i}={p.a[i]}, b{i}={p.b[i - 1]}")
    if abs(p.z) < 1:
        v.add("|z| < 1", True, f"z={p.z}")
        return v
    v.add("z = 1", p.z == 1, f"z={p.z}")
    gap = p.b[0] - p.a[1] - p.a[0]
    if p.m == 1:
        v.add("b1-a1 > a0", gap > 0, f"b1-a1-a0={gap}")
    else:
        v.add("b1-a1 >= a0", gap >= 0, f"b1-a1-a0={gap}")
    v.extend(check_lemma4(zlobin_spec(p).domain_input()), prefix="domain ")
    return v


def eval_zlobin_multisum(p: JmParams, cfg: PrecisionConfig, method: str = "auto") -> SumResult:
    """J_m through its multisum expansion, Gamma prefactor included."""
    _require(check_zlobin_conditions(p))
    spec = zlobin_spec(p)
    res = eval_multisum(spec, cfg, method)
    with mp.workprec(cfg.prec):
        pref = jm_beta_prefactor(p).evaluate(cfg)
        return SumResult(pref * res.value, abs(pref) * res.error, res.terms, res.method)
