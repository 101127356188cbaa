"""Exact zeta-value decomposition of the Vasilyev integrals J_{E,n}.

With the prefactor folded in, the k-th term of the very-well-poised
series is sigma^k R(k), sigma = (-1)^(E+1), with

    R(k) = n!^(E-1) (2k+3n+2) prod_{i=1}^{3n+1} (k+i) / prod_{i=n+1}^{2n+1} (k+i)^(E+2).

After cancelling the numerator factors against the denominator every
pole -j, n+1 <= j <= 2n+1, has order at most E+1, and R has no
polynomial part.  Summing the partial fractions against sigma^k turns
each c/(k+j)^i into zeta(i) (or the alternating eta(i)) plus a rational
correction.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import InvalidParameters, LogTermSurvives, ParityViolation, ReconstructionMismatch
from .numeric import PrecisionConfig, lcm_upto, pochhammer, to_mpf, zeta_int

MAX_E = 6
MAX_N = 3


def _check_size(E: int, n: int):
    if E < 2 or n < 0:
        raise InvalidParameters("need E >= 2 and n >= 0")
    if E > MAX_E or n > MAX_N:
        raise InvalidParameters(f"desk-scale limit is E <= {MAX_E}, n <= {MAX_N}")


def specialized_summand(E: int, n: int, k: int) -> Fraction:
    """k-th term of the Vasilyev series with its prefactor, sign (+-1)^k excluded."""
    if k < 0:
        raise ValueError("k must be non-negative")
    f = math.factorial
    pref = Fraction(f(n) ** (2 * E + 1) * f(3 * n + 2), f(2 * n + 1) ** (E + 2))
    t = pochhammer(3 * n + 2, k) * Fraction(3 * n + 2 + 2 * k, 3 * n + 2)
    t *= (pochhammer(n + 1, k) / pochhammer(2 * n + 2, k)) ** (E + 2)
    return pref * t / math.factorial(k)


def _numerator_roots(n: int) -> list[int]:
    # linear factors (k+i) that survive cancellation
    return [i for i in range(1, 3 * n + 2) if not n + 1 <= i <= 2 * n + 1]


def summand_rational(E: int, n: int, k) -> Fraction:
    """R(k) in reduced form, valid at any rational k away from the poles."""
    k = Fraction(k)
    num = Fraction(math.factorial(n) ** (E - 1)) * (2 * k + 3 * n + 2)
    for i in _numerator_roots(n):
        num *= k + i
    den = Fraction(1)
    for j in range(n + 1, 2 * n + 2):
        den *= (k + j) ** (E + 1)
    return num / den


@dataclass
class PartialFractionTable:
    E: int
    n: int
    entries: dict = field(default_factory=dict)     # (j, i) -> c_{i,j}
    polynomial_part: list = field(default_factory=list)

    def poles(self) -> list[int]:
        return sorted({j for j, _ in self.entries})

    def max_order(self, j: int) -> int:
        return max((i for jj, i in self.entries if jj == j), default=0)

    def evaluate(self, k) -> Fraction:
        k = Fraction(k)
        return sum((c / (k + j) ** i for (j, i), c in self.entries.items()), Fraction(0))


def _series_mul(p: list, q: list, order: int) -> list:
    out = [Fraction(0)] * order
    for i, x in enumerate(p[:order]):
        if x:
            for j, y in enumerate(q[:order - i]):
                out[i + j] += x * y
    return out


def _taylor_at_pole(E: int, n: int, j: int, order: int) -> list[Fraction]:
    """First ``order`` Taylor coefficients in t of R(-j+t) * t^(E+1)."""
    M = E + 1
    g = [Fraction(math.factorial(n) ** (E - 1))]
    # linear factors: (k + r) = (r - j) + t
    for r in [Fraction(3 * n + 2, 2)] + [Fraction(i) for i in _numerator_roots(n)]:
        g = _series_mul(g, [r - j, Fraction(1)], order)
    g = [2 * x for x in g]   # 2k+3n+2 = 2 (k + (3n+2)/2)
    for l in range(n + 1, 2 * n + 2):
        if l == j:
            continue
        d = Fraction(l - j)
        # (d + t)^(-M) = d^(-M) sum_r binom(-M, r) (t/d)^r
        inv = [Fraction(math.comb(M + r - 1, r) * (-1) ** r) / d ** (M + r) for r in range(order)]
        g = _series_mul(g, inv, order)
    return g


def partial_fraction_decompose(E: int, n: int) -> PartialFractionTable:
    _check_size(E, n)
    M = E + 1
    table = PartialFractionTable(E, n)
    for j in range(n + 1, 2 * n + 2):
        g = _taylor_at_pole(E, n, j, M)
        for r, c in enumerate(g):
            if c:
                table.entries[(j, M - r)] = c
    # exact re-evaluation: integers 0..19 against the series term, then seeded rational points
    for k in range(20):
        if table.evaluate(k) != specialized_summand(E, n, k):
            raise ReconstructionMismatch(f"partial fractions disagree with the summand at k={k}")
    rng = random.Random(1000 * E + n)
    poles = set(range(n + 1, 2 * n + 2))
    points = []
    while len(points) < 5:
        k = Fraction(rng.randint(-99, 99), rng.randint(1, 12))
        if -k not in poles:
            points.append(k)
    for k in points:
        if table.evaluate(k) != summand_rational(E, n, k):
            raise ReconstructionMismatch(f"partial fractions disagree with R at k={k}")
    return table


@dataclass
class ZetaDecomposition:
    E: int
    n: int
    p0: Fraction
    p: dict                      # m -> p_m for m = 2..E, m = E mod 2
    raw: dict                    # every zeta index produced, including wrong parity
    residual_terms: list = field(default_factory=list)

    def value(self, cfg: PrecisionConfig):
        with mp.workprec(cfg.prec):
            v = to_mpf(self.p0)
            for m, c in self.p.items():
                if c:
                    v += to_mpf(c) * zeta_int(m, cfg)
            return v

    def to_dict(self) -> dict:
        return {"E": self.E, "n": self.n, "p0": str(self.p0),
                "p": {str(m): str(c) for m, c in sorted(self.p.items())}}


def zeta_decompose(E: int, n: int) -> ZetaDecomposition:
    table = partial_fraction_decompose(E, n)
    alternating = E % 2 == 0           # series argument (-1)^(E+1)
    p0 = Fraction(0)
    zeta = {}
    poles = range(n + 1, 2 * n + 2)
    c1 = {j: table.entries.get((j, 1), Fraction(0)) for j in poles}
    if sum(c1.values()) != 0:
        raise LogTermSurvives("simple-pole residues do not telescope")
    if alternating:
        log2 = sum((-1) ** (j + 1) * c for j, c in c1.items())
        if log2 != 0:
            raise LogTermSurvives(f"coefficient of log 2 is {log2}")
    for (j, i), c in table.entries.items():
        if not alternating:
            head = sum((Fraction(1, l ** i) for l in range(1, j)), Fraction(0))
            if i == 1:
                p0 -= c * head
            else:
                zeta[i] = zeta.get(i, Fraction(0)) + c
                p0 -= c * head
        else:
            # sum_k (-1)^k/(k+j)^i = (-1)^j [ -eta(i) - sum_{l<j} (-1)^l / l^i ]
            sgn = (-1) ** j
            head = sum((Fraction((-1) ** l, l ** i) for l in range(1, j)), Fraction(0))
            p0 -= sgn * c * head
            if i >= 2:
                zeta[i] = zeta.get(i, Fraction(0)) - sgn * c * (1 - Fraction(2) ** (1 - i))
    raw = {m: zeta.get(m, Fraction(0)) for m in range(2, E + 2)}
    for m, c in raw.items():
        if (m - E) % 2 and c != 0:
            raise ParityViolation(f"zeta({m}) has coefficient {c} for E={E}")
    p = {m: raw[m] for m in range(2, E + 1) if (m - E) % 2 == 0}
    return ZetaDecomposition(E, n, p0, p, raw)


@dataclass
class IntegralityReport:
    E: int
    n: int
    scale: int
    entries: list               # (name, scaled value, is_integer, note)
    passed: bool

    def to_dict(self) -> dict:
        return {"E": self.E, "n": self.n, "scale": str(self.scale), "passed": self.passed,
                "entries": [{"coefficient": name, "scaled": str(v), "integer": ok, "note": note}
                            for name, v, ok, note in self.entries]}


def check_integrality(E: int, n: int, decomp: ZetaDecomposition | None = None) -> IntegralityReport:
    """Is d_n^E p_m an integer for every computed coefficient?"""
    d = decomp or zeta_decompose(E, n)
    scale = lcm_upto(n) ** E
    rows = []
    for name, c in [("p0", d.p0)] + [(f"p{m}", c) for m, c in sorted(d.p.items())]:
        v = c * scale
        note = ""
        if name == "p0" and E % 2 == 0:
            note = "p0 integrality is conjectural for even E"
        rows.append((name, v, v.denominator == 1, note))
    return IntegralityReport(E, n, scale, rows, all(ok for _, _, ok, _ in rows))
