"""Series summation with tail control.

Two strategies are used throughout the package:

* direct partial sums with a tail estimate (geometric for |ratio| < 1,
  power-law ``|t_k| (k+1) / E`` on the unit circle), and
* the Levin u-transform applied to a window of partial sums, for the
  power-law series at z = +-1 that direct summation cannot resolve to
  1e-20 in any reasonable number of terms.

All functions expect to be called inside ``mp.workprec``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import mpmath as mp

from .errors import MaxTermsExceeded


@dataclass
class SumResult:
    value: object
    error: object
    terms: int
    method: str

    def __iter__(self):
        # allows ``value, err = result``
        yield self.value
        yield self.error


def levin_u(partial_sums, terms, start: int, width: int, beta=1):
    """Levin u-transform using partial sums S_start .. S_{start+width}.

    ``partial_sums[i]`` must equal ``terms[0] + ... + terms[i]``.
    """
    k = width
    bn = mp.mpf(beta + start)
    last = bn + k
    num = mp.mpf(0)
    den = mp.mpf(0)
    for j in range(k + 1):
        t = terms[start + j]
        if t == 0:
            return partial_sums[start + k]
        c = comb(k, j) * ((bn + j) / last) ** (k - 1)
        if j % 2:
            c = -c
        om = (bn + j) * t
        num += c * partial_sums[start + j] / om
        den += c / om
    return num / den


class LazySeries:
    """Terms and partial sums of a series, extended on demand."""

    def __init__(self, term_at, max_terms: int):
        self._term_at = term_at
        self.max_terms = max_terms
        self.terms = []
        self.sums = []

    def extend(self, n: int):
        if n > self.max_terms:
            raise MaxTermsExceeded(f"needs {n} terms, budget is {self.max_terms}")
        s = self.sums[-1] if self.sums else mp.mpf(0)
        for k in range(len(self.terms), n):
            t = self._term_at(k)
            s += t
            self.terms.append(t)
            self.sums.append(s)

    def __len__(self):
        return len(self.terms)


def levin_until(series: LazySeries, tol, start: int = 0, first: int = 16,
                step: int = 8) -> SumResult:
    """Grow the Levin window until two successive estimates agree to ``tol``."""
    prev = None
    width = first
    best = None
    while True:
        try:
            series.extend(start + width + 1)
        except MaxTermsExceeded as exc:
            exc.estimate = best
            raise
        est = levin_u(series.sums, series.terms, start, width)
        if prev is not None:
            err = abs(est - prev)
            best = est
            if err <= tol:
                return SumResult(est, err, len(series), "levin")
        prev = est
        width += step


def geometric_tail(term_abs, ratio_abs):
    """Bound on sum_{j>=1} t r^j given a ratio bound r < 1."""
    return term_abs * ratio_abs / (1 - ratio_abs)


def nested_levin(depth: int, coefficients, leaf, width: int, lead: int = 2):
    """Evaluate V(0, 0) for the nested sums V(d, P) = pre * sum_k c_k V(d+1, P+k).

    ``coefficients(d, P, count)`` returns ``(pre, [c_0, ..., c_{count-1}])``
    and ``leaf(P)`` gives V(depth, P).  Every level is summed by a Levin
    window of fixed ``width`` starting at index lead*P: an inner sum whose
    parameters have been shifted by P only reaches its asymptotic regime
    for k of order P.  Values are memoised on (d, P).

    Inner values must be far more accurate than the outer target because
    the outer transform amplifies their noise, and the transform itself
    cancels more digits as the start index grows; callers should add
    guard bits accordingly (see ``nested_guard_bits``).
    """
    memo = {}

    def value(d, P):
        if d == depth:
            return leaf(P)
        key = (d, P)
        if key in memo:
            return memo[key]
        start = lead * P
        count = start + width + 1
        pre, coef = coefficients(d, P, count)
        terms, sums, s = [], [], mp.mpf(0)
        for k in range(count):
            c = coef[k]
            t = c * value(d + 1, P + k) if c != 0 else mp.mpf(0)
            s += t
            terms.append(t)
            sums.append(s)
        v = pre * levin_u(sums, terms, start, width)
        memo[key] = v
        return v

    return value(0, 0), len(memo)


def nested_guard_bits(width: int) -> int:
    return 12 * width


def nested_levin_adaptive(depth, coefficients, leaf, tol, first=20, step=10,
                          max_width=120) -> SumResult:
    """Run ``nested_levin`` with growing windows until two passes agree to ``tol``.

    Each pass runs with ``nested_guard_bits(width)`` extra bits on top of
    the caller's precision.
    """
    prev, width, nodes = None, first, 0
    base = mp.mp.prec
    while width <= max_width:
        with mp.workprec(base + nested_guard_bits(width)):
            v, n = nested_levin(depth, coefficients, leaf, width)
        nodes += n
        if prev is not None:
            err = abs(v - prev)
            if err <= tol:
                return SumResult(v, err, nodes, "nested-levin")
        prev = v
        width += step
    raise MaxTermsExceeded(f"nested extrapolation did not settle to {mp.nstr(tol, 3)}", prev)
