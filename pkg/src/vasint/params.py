"""Parameter containers shared between the integral, series and harness code."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numeric import as_rational, to_mpf
from .verdict import ConvergenceVerdict


def normalize(x):
    """Keep exact rationals as Fractions; anything else becomes an mpf."""
    q = as_rational(x)
    return q if q is not None else to_mpf(x)


def normalize_all(xs) -> tuple:
    return tuple(normalize(x) for x in xs)


@dataclass(frozen=True)
class JmParams:
    """Parameters of the integral J_m[a_0..a_m; b_1..b_m; z].

    ``b[i-1]`` holds b_i, so ``a`` and ``b`` are offset by one index.
    """

    m: int
    a: tuple
    b: tuple
    z: object = Fraction(1)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if len(self.a) != self.m + 1 or len(self.b) != self.m:
            raise ValueError(f"J_{self.m} needs {self.m + 1} a's and {self.m} b's")
        object.__setattr__(self, "a", normalize_all(self.a))
        object.__setattr__(self, "b", normalize_all(self.b))
        object.__setattr__(self, "z", normalize(self.z))

    @classmethod
    def vasilyev(cls, E: int, n: int) -> "JmParams":
        return cls(E, (n + 1,) * (E + 1), (2 * n + 2,) * E, 1)

    def to_dict(self) -> dict:
        return {"m": self.m, "a": [str(x) for x in self.a],
                "b": [str(x) for x in self.b], "z": str(self.z)}


@dataclass(frozen=True)
class ParameterVectorH:
    """h_0 .. h_{m+2} for Zudilin's identity (``h[j]`` is h_j)."""

    m: int
    h: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if len(self.h) != self.m + 3:
            raise ValueError(f"m={self.m} needs {self.m + 3} entries h_0..h_{self.m + 2}")
        object.__setattr__(self, "h", normalize_all(self.h))

    @classmethod
    def vasilyev(cls, E: int, n: int) -> "ParameterVectorH":
        return cls(E, (3 * n + 2,) + (n + 1,) * (E + 2))

    def admissibility(self) -> ConvergenceVerdict:
        h, m = self.h, self.m
        v = ConvergenceVerdict()
        lhs = 1 + h[0]
        rhs = Fraction(2, m + 1) * sum(h[1:m + 3])
        v.add("1+h0 > 2/(m+1) sum h_j", lhs > rhs, f"{lhs} vs {rhs}")
        for j in range(2, m + 2):
            v.add(f"1+h0-h{j + 1} > h{j} > 0", 1 + h[0] - h[j + 1] > h[j] > 0,
                  f"{1 + h[0] - h[j + 1]} > {h[j]}")
        v.add("1+h0-h3-h2 >= h1", 1 + h[0] - h[3] - h[2] >= h[1],
              f"{1 + h[0] - h[3] - h[2]} >= {h[1]}")
        return v

    def to_dict(self) -> dict:
        return {"m": self.m, "h": [str(x) for x in self.h]}
