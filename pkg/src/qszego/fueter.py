"""Cauchy-Fueter operators evaluated by central finite differences."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import DomainMargin
from .quaternion import UNITS, Quaternion
from .siegel import SiegelPoint, defining_r

MACHINE_EPS = float(np.finfo(float).eps)


@lru_cache(maxsize=None)
def central_weights(deriv: int, accuracy: int) -> tuple[Fraction, ...]:
    """Exact central-difference weights on offsets ``-p..p``.

    Fornberg's recursion in rational arithmetic; ``accuracy`` must be even.
    """
    if accuracy % 2 or accuracy <= 0:
        raise ValueError("accuracy order must be a positive even integer")
    p = (deriv + 1) // 2 - 1 + accuracy // 2
    xs = [Fraction(k) for k in range(-p, p + 1)]
    npts = len(xs)
    c = [[Fraction(0)] * (deriv + 1) for _ in range(npts)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = xs[0]
    for i in range(1, npts):
        mn = min(i, deriv)
        c2 = Fraction(1)
        c5 = c4
        c4 = xs[i]
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(c[i][deriv] for i in range(npts))


def fd_derivative(g: Callable, x, deriv: int, h, accuracy: int = 4):
    """``deriv``-th derivative of a scalar function by a central stencil.

    Arithmetic follows the type of ``x``/``h`` so mpmath numbers work too.
    """
    w = central_weights(deriv, accuracy)
    p = (len(w) - 1) // 2
    acc = 0
    for k, wk in enumerate(w):
        if wk:
            acc = acc + (wk.numerator * g(x + (k - p) * h)) / wk.denominator
    return acc / h**deriv


@dataclass(frozen=True)
class FDScheme:
    """Central stencil of accuracy ``order`` with step ``h`` (``None``: automatic)."""

    order: int = 4
    h: Optional[float] = None

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")
        if self.h is not None and not self.h > 0:
            raise ValueError(f"step must be positive, got {self.h}")

    def step(self, scale: float) -> float:
        if self.h is not None:
            return self.h
        return MACHINE_EPS ** (1.0 / 5.0) * max(1.0, scale)


@dataclass(frozen=True)
class QFunction:
    """Quaternion-valued function of a point plus the predicate of its domain."""

    func: Callable[[SiegelPoint], Quaternion]
    domain: Optional[Callable[[SiegelPoint], bool]] = None

    def __call__(self, q: SiegelPoint) -> Quaternion:
        return self.func(q)

    def contains(self, q: SiegelPoint) -> bool:
        return True if self.domain is None else bool(self.domain(q))


def siegel_domain(q: SiegelPoint) -> bool:
    return defining_r(q) > 0


def _as_qfunction(f) -> QFunction:
    return f if isinstance(f, QFunction) else QFunction(f)


def _shift(q: SiegelPoint, coord: int, delta: float) -> SiegelPoint:
    xs = q.to_coords()
    xs[coord] += delta
    return SiegelPoint.from_coords(xs)


def _partials(f, q: SiegelPoint, l: int, scheme: FDScheme) -> list[Quaternion]:
    f = _as_qfunction(f)
    slot = q.slots()[l]
    h = scheme.step(abs(slot))
    base = 4 * l
    for c in range(4):
        for delta in (-2 * h, 2 * h):
            if not f.contains(_shift(q, base + c, delta)):
                raise DomainMargin(f"stencil of width 2h={2 * h:.2e} leaves the domain in slot {l}")
    w = central_weights(1, scheme.order)
    p = (len(w) - 1) // 2
    out = []
    for c in range(4):
        acc = Quaternion(0.0, 0.0, 0.0, 0.0)
        for k, wk in enumerate(w):
            if wk:
                acc = acc + f(_shift(q, base + c, (k - p) * h)) * float(wk)
        out.append(acc * (1.0 / h))
    return out


def cf_bar(f, q: SiegelPoint, l: int, scheme: FDScheme = FDScheme()) -> Quaternion:
    """``d/dx1 f + i d/dx2 f + j d/dx3 f + k d/dx4 f`` in slot ``l`` (0 = q1); units on the left."""
    d = _partials(f, q, l, scheme)
    acc = d[0]
    for unit, dc in zip(UNITS[1:], d[1:]):
        acc = acc + unit * dc
    return acc


def cf(f, q: SiegelPoint, l: int, scheme: FDScheme = FDScheme()) -> Quaternion:
    """``d/dx1 f - (d/dx2 f) i - (d/dx3 f) j - (d/dx4 f) k``; units on the right."""
    d = _partials(f, q, l, scheme)
    acc = d[0]
    for unit, dc in zip(UNITS[1:], d[1:]):
        acc = acc - dc * unit
    return acc


def laplacian_slot(f, q: SiegelPoint, l: int, scheme: FDScheme = FDScheme()) -> Quaternion:
    f = _as_qfunction(f)
    slot = q.slots()[l]
    h = scheme.step(abs(slot))
    base = 4 * l
    for c in range(4):
        for delta in (-2 * h, 2 * h):
            if not f.contains(_shift(q, base + c, delta)):
                raise DomainMargin(f"stencil of width 2h={2 * h:.2e} leaves the domain in slot {l}")
    w = central_weights(2, scheme.order)
    p = (len(w) - 1) // 2
    acc = Quaternion(0.0, 0.0, 0.0, 0.0)
    for c in range(4):
        for k, wk in enumerate(w):
            if wk:
                acc = acc + f(_shift(q, base + c, (k - p) * h)) * float(wk)
    return acc * (1.0 / (h * h))


def regularity_residual(
    f,
    points: Iterable[SiegelPoint],
    scheme: FDScheme = FDScheme(),
    slots: Optional[Iterable[int]] = None,
    operator: Callable = cf_bar,
) -> float:
    """Max of ``|operator(f, q, l)|`` over the points and slots, in input order."""
    worst = 0.0
    for q in points:
        for l in range(q.m + 1) if slots is None else slots:
            worst = max(worst, abs(operator(f, q, l, scheme)))
    return worst
