"""Independent evaluators for the Vasilyev-type integral

    J_m = int_[0,1]^m  prod x_i^(a_i-1) (1-x_i)^(b_i-a_i-1) / Q_m(x; z)^a_0  dx

by tensor Gauss-Jacobi quadrature and by the one-index recursions that
peel off one (odd m) or two (even m) integration variables at a time.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.special import roots_jacobi

from .errors import ConditionViolated, DimensionTooLarge
from .numeric import PrecisionConfig, to_mpf
from .params import JmParams
from .summation import SumResult, nested_levin_adaptive
from .verdict import ConvergenceVerdict

MAX_QUADRATURE_DIM = 4


def eval_Q(x, z):
    """Nested denominator 1 - (1 - (... (1 - x_m) x_{m-1} ...) x_2) x_1 z.

    Works for scalars (exact with Fractions) and for broadcastable numpy arrays.
    """
    m = len(x)
    if m == 0:
        return 1
    if m == 1:
        return 1 - x[0] * z
    u = 1 - x[m - 1]
    for i in range(m - 2, 0, -1):
        u = 1 - x[i] * u
    return 1 - z * x[0] * u


def check_jm_conditions(p: JmParams) -> ConvergenceVerdict:
    v = ConvergenceVerdict()
    v.add("a0 > 0", p.a[0] > 0, f"a0={p.a[0]}")
    for i in range(1, p.m + 1):
        v.add(f"b{i} > a{i} > 0", p.b[i - 1] > p.a[i] > 0, f"a{i}={p.a[i]}, b{i}={p.b[i - 1]}")
    v.add("|z| <= 1", abs(p.z) <= 1, f"z={p.z}")
    if p.z == 1:
        gap = p.b[0] - p.a[1] - p.a[0]
        if p.m == 1:
            v.add("z=1: b1-a1 > a0", gap > 0, f"b1-a1-a0={gap}")
        else:
            v.add("z=1: b1-a1 >= a0", gap >= 0, f"b1-a1-a0={gap}")
    return v


def _require(p: JmParams) -> ConvergenceVerdict:
    v = check_jm_conditions(p)
    if not v:
        raise ConditionViolated(v.summary(), v)
    return v


@dataclass(frozen=True)
class QuadratureGrid:
    coarse: int = 32
    fine: int = 64


def _tensor_quadrature(p: JmParams, n: int) -> float:
    a = [float(x) for x in p.a]
    b = [float(x) for x in p.b]
    z = float(p.z)
    nodes, weights = [], []
    scale = 1.0
    for i in range(1, p.m + 1):
        t, w = roots_jacobi(n, b[i - 1] - a[i] - 1, a[i] - 1)
        nodes.append((1 + t) / 2)
        weights.append(w)
        scale *= 2.0 ** (1 - b[i - 1])
    m = p.m
    if m == 1:
        return scale * float(np.dot(weights[0], eval_Q([nodes[0]], z) ** -a[0]))
    # broadcast the inner m-1 axes; loop over x_1 to bound memory at m = 4
    shape = [1] * (m - 1)
    inner_x, inner_w = [], None
    for i in range(1, m):
        sh = list(shape)
        sh[i - 1] = n
        inner_x.append(nodes[i].reshape(sh))
        wi = weights[i].reshape(sh)
        inner_w = wi if inner_w is None else inner_w * wi
    u = 1 - inner_x[-1]
    for i in range(len(inner_x) - 2, -1, -1):
        u = 1 - inner_x[i] * u
    total = 0.0
    for x1, w1 in zip(nodes[0], weights[0]):
        total += w1 * float(np.sum(inner_w * (1 - z * x1 * u) ** -a[0]))
    return scale * total


def eval_jm_quadrature(p: JmParams, grid: QuadratureGrid = QuadratureGrid()) -> tuple[float, float]:
    """Tensor Gauss-Jacobi estimate with the endpoint weights built into the nodes.

    Returns (value, |fine - coarse|) in double precision.
    """
    _require(p)
    if p.m > MAX_QUADRATURE_DIM:
        raise DimensionTooLarge(
            f"tensor quadrature is limited to m <= {MAX_QUADRATURE_DIM}; use eval_jm_recursive")
    coarse = _tensor_quadrature(p, grid.coarse)
    fine = _tensor_quadrature(p, grid.fine)
    return fine, abs(fine - coarse)


def _steps(m: int) -> list[int]:
    # orders at which a step is taken, from the top: one odd step first if m is odd
    out = []
    while m > 0:
        out.append(m)
        m -= 1 if m % 2 else 2
    return out


def beta_product(p: JmParams, cfg: PrecisionConfig):
    with mp.workprec(cfg.prec):
        r = mp.mpf(1)
        for i in range(1, p.m + 1):
            r *= mp.beta(to_mpf(p.a[i]), to_mpf(p.b[i - 1] - p.a[i]))
        return r


def eval_jm_recursive(p: JmParams, cfg: PrecisionConfig) -> SumResult:
    """J_m by repeated one-index expansion down to J_0 = 1.

    Even order 2s:  Gamma factors of variables 2s-1, 2s times
        sum_k z^k (b_2s - a_2s)_k (a_2s-1)_k (a_0)_k / (k! (b_2s)_k (b_2s-1)_k) J_2s-2[shift k]
    odd order 2s+1: Gamma factors of variable 2s+1 times
        sum_k z^k (a_0)_k (a_2s+1)_k / (k! (b_2s+1)_k) J_2s[shift k]
    where "shift k" adds k to every a_i and b_i that remains.
    """
    _require(p)
    if p.z == 0:
        return SumResult(beta_product(p, cfg), mp.mpf(0), 1, "closed-form")
    steps = _steps(p.m)

    def coefficients(d, P, count):
        mm = steps[d]
        a = [to_mpf(x) + P for x in p.a]
        b = [None] + [to_mpf(x) + P for x in p.b]
        z = to_mpf(p.z)
        G = mp.gamma
        if mm % 2 == 0:
            c0 = b[mm] - a[mm]
            pre = (G(a[mm]) * G(a[mm - 1]) * G(c0) * G(b[mm - 1] - a[mm - 1])
                   / (G(b[mm]) * G(b[mm - 1])))
            num, den = (c0, a[mm - 1], a[0]), (b[mm], b[mm - 1])
        else:
            pre = G(a[mm]) * G(b[mm] - a[mm]) / G(b[mm])
            num, den = (a[0], a[mm]), (b[mm],)
        coef = [mp.mpf(1)]
        for k in range(1, count):
            r = coef[-1] * z
            for x in num:
                r *= x + k - 1
            r /= k
            for y in den:
                r /= y + k - 1
            coef.append(r)
        return pre, coef

    with mp.workprec(cfg.prec):
        res = nested_levin_adaptive(len(steps), coefficients, lambda P: mp.mpf(1),
                                    mp.mpf(cfg.target_abs_tol) / 4)
        return SumResult(+res.value, res.error, res.terms, res.method)
