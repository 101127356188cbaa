"""Generalized hypergeometric series p+1Fp: construction, classification, evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import InvalidParameters, MaxTermsExceeded, NotConvergent, ZeroDenominator
from .numeric import GammaQuotient, PrecisionConfig, as_rational, is_nonpositive_integer, to_mpf
from .params import ParameterVectorH, normalize, normalize_all
from .summation import LazySeries, SumResult, levin_until
from .verdict import ConvergenceVerdict

# direct summation is abandoned in favour of extrapolation past this many terms
DIRECT_BUDGET = 3000


def _terminating_order(alphas):
    orders = [-int(as_rational(a)) for a in alphas if is_nonpositive_integer(a)]
    return min(orders) if orders else None


@dataclass(frozen=True)
class SeriesSpec:
    alphas: tuple
    betas: tuple
    z: object

    def __post_init__(self):
        object.__setattr__(self, "alphas", normalize_all(self.alphas))
        object.__setattr__(self, "betas", normalize_all(self.betas))
        object.__setattr__(self, "z", normalize(self.z))
        if len(self.alphas) != len(self.betas) + 1:
            raise InvalidParameters("need exactly one more numerator than denominator parameter")
        if abs(self.z) > 1:
            raise InvalidParameters(f"|z| must be <= 1, got {self.z}")
        N = _terminating_order(self.alphas)
        for b in self.betas:
            if not is_nonpositive_integer(b):
                continue
            if N is None:
                raise InvalidParameters(f"denominator parameter {b} is a non-positive integer")
            if N > -as_rational(b):
                raise ZeroDenominator(f"(beta)_k vanishes for beta={b} before the series ends at N={N}")

    @property
    def p(self) -> int:
        return len(self.betas)

    @property
    def terminating_order(self):
        return _terminating_order(self.alphas)

    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.alphas + self.betas + (self.z,))

    def excess(self):
        """sum(betas) - sum(alphas); positive means convergence on |z| = 1."""
        return sum(self.betas) - sum(self.alphas)

    def to_dict(self) -> dict:
        return {"alphas": [str(x) for x in self.alphas],
                "betas": [str(x) for x in self.betas], "z": str(self.z)}


@dataclass(frozen=True)
class SeriesClass:
    terminating: bool
    balanced: bool
    very_well_poised: bool
    convergent: ConvergenceVerdict


def classify_series(spec: SeriesSpec) -> SeriesClass:
    al, be = spec.alphas, spec.betas
    terminating = spec.terminating_order is not None
    balanced = sum(al) + 1 == sum(be)
    vwp = (len(al) >= 2 and al[1] == al[0] / 2 + 1
           and all(al[0] + 1 == al[j] + be[j - 1] for j in range(1, len(al))))
    conv = ConvergenceVerdict()
    if terminating:
        conv.add("terminating", True, f"N={spec.terminating_order}")
    elif abs(spec.z) < 1:
        conv.add("|z|<1", True, f"z={spec.z}")
    else:
        ex = spec.excess()
        conv.add("sum(beta) > sum(alpha) on |z|=1", ex > 0, f"excess={ex}")
    return SeriesClass(terminating, balanced, vwp, conv)


def term_ratio(alphas, betas, z, k):
    """t_{k+1}/t_k."""
    r = z
    for a in alphas:
        r *= a + k
    r /= k + 1
    for b in betas:
        r /= b + k
    return r


def _hump(spec: SeriesSpec) -> int:
    # beyond this index every factor (x+k) has fixed sign and |ratio| is monotone
    return int(math.ceil(max(abs(float(x)) for x in spec.alphas + spec.betas))) + 1


def eval_pfq(spec: SeriesSpec, cfg: PrecisionConfig) -> SumResult:
    """Evaluate the series to ``cfg.target_abs_tol``; returns value and error estimate.

    Terminating series are summed exactly in floating point.  Otherwise the
    direct partial sum is used when the tail rule certifies it within
    ``DIRECT_BUDGET`` terms; power-law series on |z| = 1 that converge too
    slowly fall back to Levin extrapolation started past the initial hump.
    """
    cls = classify_series(spec)
    if not cls.convergent:
        raise NotConvergent(cls.convergent.summary())
    with mp.workprec(cfg.prec):
        al = [to_mpf(x) for x in spec.alphas]
        be = [to_mpf(x) for x in spec.betas]
        z = to_mpf(spec.z)
        tol = mp.mpf(cfg.target_abs_tol)
        N = spec.terminating_order
        if N is not None:
            t, s = mp.mpf(1), mp.mpf(1)
            for k in range(N):
                t *= term_ratio(al, be, z, k)
                s += t
            return SumResult(s, mp.mpf(0), N + 1, "finite")

        state = {"k": -1, "t": None}

        def term_at(k):
            if k == 0:
                t = mp.mpf(1)
            else:
                t = state["t"] * term_ratio(al, be, z, k - 1)
            state["k"], state["t"] = k, t
            return t

        series = LazySeries(term_at, cfg.max_terms)
        hump = _hump(spec)
        budget = min(cfg.max_terms, DIRECT_BUDGET)
        azf = abs(z)
        excess = to_mpf(spec.excess())
        k = 0
        while k < budget:
            series.extend(k + 1)
            t = series.terms[k]
            if k > hump:
                if azf < 1:
                    q = max(abs(term_ratio(al, be, z, k)), azf)
                    if q < 1:
                        tail = abs(t) * q / (1 - q)
                        if tail < tol:
                            return SumResult(series.sums[k], tail, k + 1, "direct")
                else:
                    tail = abs(t) * (k + 1) / excess
                    if tail < tol:
                        return SumResult(series.sums[k], tail, k + 1, "direct")
            k += 1
        try:
            return levin_until(series, tol / 4, start=min(hump, budget // 2))
        except MaxTermsExceeded as exc:
            raise MaxTermsExceeded(
                f"tolerance {cfg.target_abs_tol} not reached within {cfg.max_terms} terms",
                exc.estimate) from None


def eval_pfq_exact_terminating(spec: SeriesSpec) -> Fraction:
    N = spec.terminating_order
    if N is None:
        raise InvalidParameters("series does not terminate")
    if not spec.is_exact():
        raise InvalidParameters("exact evaluation needs rational parameters")
    s = t = Fraction(1)
    for k in range(N):
        den = Fraction(k + 1)
        for b in spec.betas:
            den *= b + k
        if den == 0:
            raise ZeroDenominator(f"denominator Pochhammer vanishes at k={k + 1}")
        num = spec.z
        for a in spec.alphas:
            num *= a + k
        t = t * num / den
        s += t
    return s


def build_zudilin_rhs_series(h: ParameterVectorH) -> tuple[GammaQuotient, SeriesSpec]:
    """Gamma prefactor and very-well-poised series on the right of Zudilin's identity.

    The Gamma product over single h_j runs over h_2 .. h_{m+1}; this is the
    form that reproduces Dougall's 5F4 sum at m = 1 and the Vasilyev
    prefactor n!^(2E+1) (3n+2)! / (2n+1)!^(E+2).
    """
    m, hh = h.m, h.h
    h0 = hh[0]
    for j in range(1, m + 3):
        if is_nonpositive_integer(1 + h0 - hh[j]):
            raise InvalidParameters(f"1+h0-h{j} = {1 + h0 - hh[j]} is a non-positive integer")
    alphas = (h0, h0 / 2 + 1) + tuple(hh[1:m + 3])
    betas = (h0 / 2,) + tuple(1 + h0 - hh[j] for j in range(1, m + 3))
    try:
        spec = SeriesSpec(alphas, betas, (-1) ** (m + 1))
    except InvalidParameters as exc:
        raise InvalidParameters(str(exc)) from None
    num = ((1 + h0,) + tuple(hh[2:m + 2])
           + tuple(1 + h0 - hh[j] - hh[j + 1] for j in range(1, m + 2)))
    den = tuple(1 + h0 - hh[j] for j in range(1, m + 3))
    return GammaQuotient(num, den), spec


def build_vasilyev_series(E: int, n: int) -> tuple[Fraction, SeriesSpec]:
    if E < 2 or n < 0:
        raise InvalidParameters("need E >= 2 and n >= 0")
    f = math.factorial
    pref = Fraction(f(n) ** (2 * E + 1) * f(3 * n + 2), f(2 * n + 1) ** (E + 2))
    alphas = (Fraction(3 * n + 2), Fraction(3 * n, 2) + 2) + (Fraction(n + 1),) * (E + 2)
    betas = (Fraction(3 * n, 2) + 1,) + (Fraction(2 * n + 2),) * (E + 2)
    return pref, SeriesSpec(alphas, betas, (-1) ** (E + 1))
