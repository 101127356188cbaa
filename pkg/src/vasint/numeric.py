"""Exact and arbitrary-precision primitives.

Rationals are :class:`fractions.Fraction`; reals are :class:`mpmath.mpf`
evaluated inside ``mp.workprec(cfg.prec)``.  Every public routine sets its
own precision, so callers never need to touch ``mpmath.mp`` themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from numbers import Rational

import mpmath as mp

from .errors import InvalidOrder, NonPositiveArgument

DEFAULT_GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionConfig:
    working_bits: int = 256
    target_abs_tol: float = 1e-20
    max_terms: int = 20000
    simplex_cap: int = 2048
    guard_bits: int = DEFAULT_GUARD_BITS

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be >= 64")
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if self.max_terms < 1 or self.simplex_cap < 1:
            raise ValueError("max_terms and simplex_cap must be >= 1")

    @property
    def prec(self) -> int:
        """Bits actually used for evaluation (working bits plus guard)."""
        return self.working_bits + self.guard_bits

    @property
    def digits(self) -> int:
        return int(self.working_bits * math.log10(2))

    def with_guard(self, guard_bits: int) -> "PrecisionConfig":
        return replace(self, guard_bits=guard_bits)

    def with_tol(self, tol: float) -> "PrecisionConfig":
        return replace(self, target_abs_tol=tol)


def as_rational(x) -> Fraction | None:
    """Return ``x`` as a Fraction when it is exactly rational, else None.

    Strings follow :class:`Fraction` syntax ("3/4", "0.125", "1e-3"); they
    are never routed through binary floating point.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    return None


def to_mpf(x):
    """Convert an int, Fraction, float, string or mpf at the current precision."""
    if isinstance(x, mp.mpf):
        return +x
    q = as_rational(x)
    if q is not None:
        return mp.mpf(q.numerator) / q.denominator
    return mp.mpf(x)


def is_nonpositive_integer(x) -> bool:
    q = as_rational(x)
    if q is not None:
        return q.denominator == 1 and q <= 0
    return bool(mp.isint(x)) and x <= 0


def is_integer(x) -> bool:
    q = as_rational(x)
    if q is not None:
        return q.denominator == 1
    return bool(mp.isint(x))


def pochhammer(x, ell: int):
    """Rising factorial (x)_ell; exact for ints and Fractions."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    q = None if isinstance(x, mp.mpf) else as_rational(x)
    if q is not None:
        r = Fraction(1)
        for i in range(ell):
            r *= q + i
        return r
    r = mp.mpf(1)
    for i in range(ell):
        r *= x + i
    return r


def gamma(x, cfg: PrecisionConfig):
    with mp.workprec(cfg.prec):
        v = to_mpf(x)
        if v <= 0:
            raise NonPositiveArgument(f"gamma needs a positive argument, got {x}")
        return mp.gamma(v)


def gamma_ratio(alpha, beta, k: int, cfg: PrecisionConfig):
    """Gamma(alpha+k)/Gamma(beta+k).

    If alpha-beta is an integer the quotient is a finite Pochhammer ratio
    and is formed exactly before the final rounding.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    with mp.workprec(cfg.prec):
        qa, qb = as_rational(alpha), as_rational(beta)
        if qa is not None and qb is not None:
            if qa + k <= 0 or qb + k <= 0:
                raise NonPositiveArgument("gamma_ratio arguments must be positive")
            d = qa - qb
            if d.denominator == 1:
                d = int(d)
                if d >= 0:
                    return to_mpf(pochhammer(qb + k, d))
                return to_mpf(1 / pochhammer(qa + k, -d))
            return mp.gamma(to_mpf(qa + k)) / mp.gamma(to_mpf(qb + k))
        a, b = to_mpf(alpha) + k, to_mpf(beta) + k
        if a <= 0 or b <= 0:
            raise NonPositiveArgument("gamma_ratio arguments must be positive")
        if mp.isint(a - b):
            d = int(a - b)
            return mp.rf(b, d) if d >= 0 else 1 / mp.rf(a, -d)
        return mp.exp(mp.loggamma(a) - mp.loggamma(b))


def _borwein_d(n: int) -> list[int]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), all integers
    out, acc = [], Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i,
                        math.factorial(n - i) * math.factorial(2 * i))
        out.append(n * acc)
    return [int(v) for v in out]


def zeta_int(m: int, cfg: PrecisionConfig):
    """Riemann zeta at an integer m >= 2.

    Uses Borwein's accelerated alternating series for the eta function,
    whose error decays like (3+sqrt 8)^-n.
    """
    if int(m) != m or m < 2:
        raise InvalidOrder(f"zeta_int needs an integer m >= 2, got {m}")
    m = int(m)
    prec = cfg.prec + 16
    n = int(prec * math.log(2) / math.log(3 + math.sqrt(8))) + 4
    d = _borwein_d(n)
    with mp.workprec(prec):
        s = mp.mpf(0)
        for k in range(n):
            s += (-1) ** k * mp.mpf(d[k] - d[n]) / mp.mpf(k + 1) ** m
        eta = -s / d[n]
        z = eta / (1 - mp.mpf(2) ** (1 - m))
    with mp.workprec(cfg.prec):
        return +z


def lcm_upto(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return reduce(math.lcm, range(1, n + 1), 1)


@dataclass(frozen=True)
class GammaQuotient:
    """prod Gamma(num) / prod Gamma(den), kept symbolic until evaluated."""

    num: tuple
    den: tuple

    def exact(self) -> Fraction | None:
        """Exact value when every argument is a positive integer."""
        args = [as_rational(x) for x in self.num + self.den]
        if any(q is None or q.denominator != 1 or q <= 0 for q in args):
            return None
        r = Fraction(1)
        for x in self.num:
            r *= math.factorial(int(x) - 1)
        for x in self.den:
            r /= math.factorial(int(x) - 1)
        return r

    def check_positive(self):
        for x in self.num + self.den:
            if to_mpf(x) <= 0:
                raise NonPositiveArgument(f"Gamma argument {x} is not positive")

    def evaluate(self, cfg: PrecisionConfig):
        ex = self.exact()
        with mp.workprec(cfg.prec):
            if ex is not None:
                return to_mpf(ex)
            self.check_positive()
            r = mp.mpf(1)
            for x in self.num:
                r *= mp.gamma(to_mpf(x))
            for x in self.den:
                r /= mp.gamma(to_mpf(x))
            return r

    def __mul__(self, other: "GammaQuotient") -> "GammaQuotient":
        return GammaQuotient(self.num + other.num, self.den + other.den)
