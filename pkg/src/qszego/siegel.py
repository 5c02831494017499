"""Siegel upper half space, its boundary as the quaternionic Heisenberg group,
and the translate / rotation / dilation families acting on it.

A point is ``(q1, q')`` with ``q' in H^m``; the interior is ``Re q1 > |q'|^2``.
Boundary points are identified with group elements ``(w, z')``, ``w`` purely
imaginary, through ``project``/``lift``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from . import quaternion as qt
from .errors import NonpositiveScale, NotOnBoundary, NotSymplectic, NotUnit, SizeMismatch
from .quaternion import Quaternion

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class SiegelPoint:
    q1: Quaternion
    qprime: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "qprime", tuple(self.qprime))

    @property
    def m(self) -> int:
        return len(self.qprime)

    @property
    def is_exact(self) -> bool:
        return self.q1.is_exact and all(z.is_exact for z in self.qprime)

    def slots(self) -> tuple:
        return (self.q1,) + self.qprime

    def to_coords(self) -> np.ndarray:
        return np.concatenate([q.to_array() for q in self.slots()])

    @classmethod
    def from_coords(cls, xs) -> "SiegelPoint":
        xs = [float(x) for x in xs]
        if len(xs) % 4 or not xs:
            raise SizeMismatch(f"need 4(m+1) coordinates, got {len(xs)}")
        quats = [Quaternion(*xs[i : i + 4]) for i in range(0, len(xs), 4)]
        return cls(quats[0], tuple(quats[1:]))


@dataclass(frozen=True)
class HeisenbergElement:
    w: Quaternion
    zprime: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "zprime", tuple(self.zprime))
        if self.w.x1 != 0:
            raise ValueError(f"Heisenberg coordinate w must be purely imaginary, got Re w = {self.w.x1}")

    @property
    def m(self) -> int:
        return len(self.zprime)

    @classmethod
    def identity(cls, m: int, exact: bool = False) -> "HeisenbergElement":
        z = Quaternion.exact(0, 0, 0, 0) if exact else Quaternion(0.0, 0.0, 0.0, 0.0)
        return cls(z, (z,) * m)


def _tol_for(*objs) -> float:
    exact = all(getattr(o, "is_exact", False) for o in objs)
    return 0 if exact else BOUNDARY_TOL


def origin(m: int, exact: bool = False) -> SiegelPoint:
    z = Quaternion.exact(0, 0, 0, 0) if exact else Quaternion(0.0, 0.0, 0.0, 0.0)
    return SiegelPoint(z, (z,) * m)


def defining_r(q: SiegelPoint):
    """``Re q1 - |q'|^2``: positive inside, zero on the boundary."""
    return q.q1.x1 - qt.hnorm2(q.qprime)


def is_boundary(q: SiegelPoint, tol=None) -> bool:
    tol = _tol_for(q) if tol is None else tol
    r = defining_r(q)
    return r == 0 if tol == 0 else abs(r) <= tol


def project(q: SiegelPoint, tol=None) -> HeisenbergElement:
    if not is_boundary(q, tol):
        raise NotOnBoundary(f"defining function {float(defining_r(q)):.3e} is not zero")
    return HeisenbergElement(q.q1.imag, q.qprime)


def lift(h: HeisenbergElement) -> SiegelPoint:
    """Boundary point over ``h``: ``(|z'|^2 + w, z')``."""
    return SiegelPoint(h.w + qt.hnorm2(h.zprime), h.zprime)


def h_mul(p: HeisenbergElement, q: HeisenbergElement) -> HeisenbergElement:
    """Group law ``(w,p')(v,q') = (w + v + 2 Im<p',q'>, p' + q')``."""
    if p.m != q.m:
        raise SizeMismatch(f"group elements of dimension {p.m} and {q.m}")
    return HeisenbergElement(p.w + q.w + 2 * qt.inner(p.zprime, q.zprime).imag, qt.vadd(p.zprime, q.zprime))


def h_inv(p: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-p.w, qt.vneg(p.zprime))


def translate(p: SiegelPoint, q: SiegelPoint, tol=None) -> SiegelPoint:
    """Heisenberg translate by the boundary point ``p``."""
    if p.m != q.m:
        raise SizeMismatch(f"points of dimension {p.m} and {q.m}")
    if not is_boundary(p, tol):
        raise NotOnBoundary(f"translation base has defining function {float(defining_r(p)):.3e}")
    return SiegelPoint(q.q1 + p.q1 + 2 * qt.inner(p.qprime, q.qprime), qt.vadd(q.qprime, p.qprime))


def translate_by(h: HeisenbergElement, q: SiegelPoint) -> SiegelPoint:
    return translate(lift(h), q, tol=math.inf)


def rotate_a(a, q: SiegelPoint, tol=None) -> SiegelPoint:
    tol = (0 if q.is_exact else 1e-10) if tol is None else tol
    if not qt.is_sp(a, tol):
        raise NotSymplectic("matrix is not in Sp(m)")
    return SiegelPoint(q.q1, qt.mat_apply(a, q.qprime))


def rotate_sigma(sigma: Quaternion, q: SiegelPoint, tol=None) -> SiegelPoint:
    """``(conj(sigma) q1 sigma, q' sigma)`` for a unit quaternion ``sigma``."""
    tol = (0 if sigma.is_exact else 1e-10) if tol is None else tol
    dev = sigma.norm2() - 1
    if (dev != 0) if tol == 0 else abs(dev) > tol:
        raise NotUnit(f"|sigma|^2 - 1 = {float(dev):.3e}")
    return SiegelPoint(sigma.conj() * q.q1 * sigma, qt.vscale_right(q.qprime, sigma))


def dilate(r, q: SiegelPoint) -> SiegelPoint:
    if not r > 0:
        raise NonpositiveScale(f"dilation factor must be positive, got {r}")
    return SiegelPoint(q.q1 * (r * r), tuple(z * r for z in q.qprime))


def vertical_translate(q: SiegelPoint, eps) -> SiegelPoint:
    if eps < 0:
        raise ValueError(f"vertical shift must be nonnegative, got {eps}")
    return SiegelPoint(q.q1 + eps, q.qprime)


def random_interior(m: int, rng: np.random.Generator, height=(0.5, 2.0), spread: float = 1.0) -> SiegelPoint:
    """Interior point with defining function drawn uniformly from ``height``."""
    zp = tuple(qt.random_quaternion(rng, spread / 2) for _ in range(m))
    eps = float(rng.uniform(*height))
    w = Quaternion(0.0, *(float(x) for x in rng.normal(scale=spread, size=3)))
    return SiegelPoint(w + (qt.hnorm2(zp) + eps), zp)


def random_group_element(m: int, rng: np.random.Generator, spread: float = 1.0) -> HeisenbergElement:
    w = Quaternion(0.0, *(float(x) for x in rng.normal(scale=spread, size=3)))
    return HeisenbergElement(w, tuple(qt.random_quaternion(rng, spread / 2) for _ in range(m)))


def random_exact_group_element(m: int, rng: np.random.Generator, den: int = 7) -> HeisenbergElement:
    from fractions import Fraction

    def frac():
        return Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, den + 1)))

    w = Quaternion(Fraction(0), frac(), frac(), frac())
    return HeisenbergElement(w, tuple(Quaternion(frac(), frac(), frac(), frac()) for _ in range(m)))


def lift_arrays(w: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``lift``: ``w`` (N,3), ``z`` (N,m,4) -> ``q1`` (N,4), ``q'`` (N,m,4)."""
    q1 = np.empty(w.shape[:-1] + (4,))
    q1[..., 0] = np.sum(z * z, axis=(-1, -2)) if z.shape[-2] else 0.0
    q1[..., 1:] = w
    return q1, z


def points_to_arrays(p: SiegelPoint) -> tuple[np.ndarray, np.ndarray]:
    q1 = p.q1.to_array()
    zp = np.array([z.to_array() for z in p.qprime]).reshape(p.m, 4)
    return q1, zp

