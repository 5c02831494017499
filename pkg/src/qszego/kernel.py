"""Closed-form Szego kernel ``S(q, p) = c * s(q1 + conj(p1) - 2 <p', q'>)``.

``s_unnorm`` is the 2n-th ``x1``-derivative of ``conj(sigma)/|sigma|^4``,
evaluated through the finite expansion
``(2n)! sum_k (2n-k+1) conj(sigma)^{-1-k} sigma^{-2-2n+k}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

import numpy as np

from . import quaternion as qt
from .constants import PiScaled, c_paper
from .errors import DomainMargin, Singular, SizeMismatch, ZeroDivision
from .fueter import fd_derivative
from .quaternion import Quaternion
from .siegel import SiegelPoint

NORMALIZATIONS = ("paper", "empirical", "unnormalized")
DEFAULT_EPS_REL = 1e-9


def s_unnorm(sigma: Quaternion, n: int, eps_sing=None) -> Quaternion:
    """Unnormalised profile ``d^{2n}/dx1^{2n} conj(sigma)/|sigma|^4`` via quaternion powers.

    Exact when ``sigma`` has rational components.
    """
    if n < 0:
        raise ValueError(f"kernel order must be nonnegative, got {n}")
    try:
        inv = qt.qinv(sigma, eps_sing)
    except ZeroDivision as exc:
        raise Singular(f"kernel argument {sigma!r} is singular") from exc
    inv_bar = inv.conj()
    acc = Quaternion(0, 0, 0, 0)
    left = inv_bar  # conj(sigma)^{-1-k}
    for k in range(2 * n + 1):
        right = qt.qpow(inv, 2 + 2 * n - k)  # sigma^{-2-2n+k}
        acc = acc + (left * right) * (2 * n - k + 1)
        left = left * inv_bar
    return acc * factorial(2 * n)


def _complex_profile(z: np.ndarray, n: int) -> np.ndarray:
    zi = 1.0 / z
    zbi = np.conj(zi)
    acc = np.zeros_like(z)
    left = zbi
    for k in range(2 * n + 1):
        acc += (2 * n - k + 1) * left * zi ** (2 + 2 * n - k)
        left = left * zbi
    return factorial(2 * n) * acc


def s_unnorm_arr(sigma: np.ndarray, n: int) -> np.ndarray:
    """Vectorised ``s_unnorm`` on an ``(..., 4)`` array.

    ``sigma`` and ``conj(sigma)`` live in the complex slice spanned by 1 and
    the unit imaginary direction of ``sigma``; the expansion is evaluated in
    that slice with complex arithmetic and mapped back.
    """
    x = sigma[..., 0]
    v = sigma[..., 1:]
    y = np.sqrt(np.sum(v * v, axis=-1))
    safe = np.where(y > 0, y, 1.0)
    u = v / safe[..., None]
    u = np.where((y > 0)[..., None], u, np.array([1.0, 0.0, 0.0]))
    val = _complex_profile(x + 1j * y, n)
    out = np.empty(sigma.shape)
    out[..., 0] = val.real
    out[..., 1:] = val.imag[..., None] * u
    return out


@dataclass(frozen=True)
class KernelContext:
    """Kernel order ``n`` together with the horizontal dimension ``m`` and constants.

    ``m`` defaults to ``n``; any other value is refused unless
    ``allow_mismatched_dimension`` is set (used only by negative controls).
    """

    n: int
    m: Optional[int] = None
    c_emp: Optional[float] = None
    eps_rel: float = DEFAULT_EPS_REL
    allow_mismatched_dimension: bool = False
    c_paper: Optional[PiScaled] = field(init=False, default=None)
    c_paper_float: Optional[float] = field(init=False, default=None)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        if self.m is None:
            object.__setattr__(self, "m", self.n)
        if self.m != self.n and not self.allow_mismatched_dimension:
            raise ValueError(f"horizontal dimension m={self.m} must equal kernel order n={self.n}")
        if self.n >= 1:
            cp = c_paper(self.n)
            object.__setattr__(self, "c_paper", cp)
            object.__setattr__(self, "c_paper_float", float(cp))

    def with_c_emp(self, c: float) -> "KernelContext":
        return KernelContext(self.n, self.m, c, self.eps_rel, self.allow_mismatched_dimension)

    def constant(self, normalization: str) -> float:
        if normalization == "unnormalized":
            return 1.0
        if normalization == "paper":
            if self.c_paper_float is None:
                raise ValueError("the closed-form constant is defined only for n >= 1")
            return self.c_paper_float
        if normalization == "empirical":
            if self.c_emp is None:
                raise ValueError("no empirical constant attached to this context")
            return self.c_emp
        raise ValueError(f"unknown normalization {normalization!r}; expected one of {NORMALIZATIONS}")


def kernel_arg(q: SiegelPoint, p: SiegelPoint, variant: str = "theorem") -> Quaternion:
    """``q1 + conj(p1) - 2 <p', q'>``.

    ``variant="boundary_minus"`` gives ``q1 - conj(p1) - 2 <p', q'>`` for comparison only.
    """
    if q.m != p.m:
        raise SizeMismatch(f"points of horizontal dimension {q.m} and {p.m}")
    if variant == "theorem":
        first = q.q1 + p.q1.conj()
    elif variant == "boundary_minus":
        first = q.q1 - p.q1.conj()
    else:
        raise ValueError(f"unknown kernel argument variant {variant!r}")
    return first - 2 * qt.inner(p.qprime, q.qprime)


def kernel_S(q: SiegelPoint, p: SiegelPoint, ctx: KernelContext, normalization: str = "paper") -> Quaternion:
    if q.m != ctx.m or p.m != ctx.m:
        raise SizeMismatch(f"context expects m={ctx.m}, got points with m={q.m}, {p.m}")
    sigma = kernel_arg(q, p)
    const = ctx.constant(normalization)
    if sigma.is_exact and normalization == "unnormalized":
        return s_unnorm(sigma, ctx.n)
    eps = ctx.eps_rel * (abs(q.q1) + abs(p.q1))
    if abs(sigma) <= eps:
        raise Singular(f"|kernel argument| = {abs(sigma):.3e} <= {eps:.3e}")
    return s_unnorm(sigma.to_float(), ctx.n, eps_sing=eps) * const


def kernel_arg_arr(q1: np.ndarray, qp: np.ndarray, p1: np.ndarray, pp: np.ndarray) -> np.ndarray:
    """Vectorised ``kernel_arg``; ``q1``/``p1`` are ``(...,4)``, ``qp``/``pp`` are ``(...,m,4)``."""
    sig = q1 + qt.qconj_arr(p1)
    if qp.shape[-2]:
        sig = sig - 2 * np.sum(qt.qmul_arr(qt.qconj_arr(pp), qp), axis=-2)
    return sig


def slice_components(x1: float, x2: float, n: int) -> tuple[float, float, float, float]:
    """Components of ``s_unnorm(x1 + i x2)``."""
    if x1 == 0 and x2 == 0:
        raise Singular("slice evaluated at the origin")
    return tuple(float(c) for c in s_unnorm(Quaternion(float(x1), float(x2), 0.0, 0.0), n))


def ode_residuals(theta: float, n: int, h: float = 1e-3, accuracy: int = 4) -> tuple[float, float]:
    """Residuals of ``g1' = (2n+1) g2`` and ``sin g2' = -2 g2 cos - (2n+3) g1 sin``.

    ``g_j(theta) = f_j(cos theta, sin theta)``; derivatives by central differences.
    """
    reach = h * (accuracy // 2)
    if not abs(theta) + reach < math.pi / 2:
        raise DomainMargin(f"theta={theta} too close to +-pi/2 for step {h}")

    def g(j):
        return lambda t: slice_components(math.cos(t), math.sin(t), n)[j]

    g1, g2 = g(0)(theta), g(1)(theta)
    dg1 = fd_derivative(g(0), theta, 1, h, accuracy)
    dg2 = fd_derivative(g(1), theta, 1, h, accuracy)
    s, c = math.sin(theta), math.cos(theta)
    r1 = dg1 - (2 * n + 1) * g2
    r2 = s * dg2 + 2 * g2 * c + (2 * n + 3) * g1 * s
    return r1, r2


def s_by_differentiation(sigma: Quaternion, n: int, h: float = 1e-3, accuracy: int = 8, dps: int = 40) -> Quaternion:
    """Oracle: ``2n``-fold central differencing of ``conj(sigma)/|sigma|^4`` in ``x1``.

    Evaluated in mpmath at ``dps`` digits so rounding does not swamp the stencil.
    """
    import mpmath

    with mpmath.workdps(dps):
        comps = [mpmath.mpf(float(c)) for c in sigma.components]
        hh = mpmath.mpf(h)

        def component(j):
            def g(x):
                y = [comps[0] + x, comps[1], comps[2], comps[3]]
                n2 = sum(t * t for t in y)
                conj = [y[0], -y[1], -y[2], -y[3]]
                return conj[j] / n2**2

            return g

        vals = [fd_derivative(component(j), mpmath.mpf(0), 2 * n, hh, accuracy) for j in range(4)]
        return Quaternion(*(float(v) for v in vals))
