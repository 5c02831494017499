"""Quaternions, quaternionic vectors and matrices.

Components may be ``fractions.Fraction`` (exact mode) or ``float``; every
operation is written once and works in both.  Vectorised helpers at the bottom
act on numpy arrays whose last axis holds the four components.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import LengthMismatch, SizeMismatch, ZeroDivision

DEFAULT_EPS_SING = 1e-300


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class Quaternion:
    """x1 + x2 i + x3 j + x4 k."""

    x1: numbers.Real = 0
    x2: numbers.Real = 0
    x3: numbers.Real = 0
    x4: numbers.Real = 0

    @classmethod
    def from_seq(cls, xs: Iterable) -> "Quaternion":
        a, b, c, d = xs
        return cls(a, b, c, d)

    @classmethod
    def exact(cls, *xs) -> "Quaternion":
        return cls(*(Fraction(x) for x in xs))

    @property
    def components(self) -> tuple:
        return (self.x1, self.x2, self.x3, self.x4)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(x) for x in self.components)

    @property
    def real(self):
        return self.x1

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0 * self.x1, self.x2, self.x3, self.x4)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        return "Quaternion({}, {}, {}, {})".format(*self.components)

    def to_float(self) -> "Quaternion":
        return Quaternion(*(float(x) for x in self.components))

    def to_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.components])

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(*(a + b for a, b in zip(self, other)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(*(a - b for a, b in zip(self, other)))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quaternion(-self.x1, -self.x2, -self.x3, -self.x4)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, numbers.Real):
            return Quaternion(*(a * other for a in self))
        return NotImplemented

    def __rmul__(self, other):
        # only real scalars reach here, and reals commute with everything
        if isinstance(other, numbers.Real):
            return Quaternion(*(other * a for a in self))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            if _is_exact(other) and all(_is_exact(x) for x in self):
                return Quaternion(*(Fraction(a) / other for a in self))
            return Quaternion(*(a / other for a in self))
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.x1, -self.x2, -self.x3, -self.x4)

    def norm2(self):
        return self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4

    def __abs__(self) -> float:
        return math.sqrt(float(self.norm2()))

    def inv(self, eps_sing=None) -> "Quaternion":
        return qinv(self, eps_sing)

    def __pow__(self, k: int):
        return qpow(self, k)


def _coerce(x):
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, numbers.Real):
        return Quaternion(x, 0 * x, 0 * x, 0 * x)
    return NotImplemented


ZERO = Quaternion(0, 0, 0, 0)
ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)
UNITS = (ONE, I, J, K)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a*b`` written out term by term."""
    x1, x2, x3, x4 = a.components
    s1, s2, s3, s4 = b.components
    return Quaternion(
        s1 * x1 - s2 * x2 - s3 * x3 - s4 * x4,
        s2 * x1 + s1 * x2 + s4 * x3 - s3 * x4,
        s3 * x1 - s4 * x2 + s1 * x3 + s2 * x4,
        s4 * x1 + s3 * x2 - s2 * x3 + s1 * x4,
    )


def qinv(a: Quaternion, eps_sing=None) -> Quaternion:
    """Inverse ``conj(a)/|a|^2``.

    In exact mode only an exact zero is rejected; in float mode anything with
    ``|a| <= eps_sing`` (default 1e-300) raises :class:`ZeroDivision`.
    """
    n2 = a.norm2()
    if a.is_exact and eps_sing is None:
        if n2 == 0:
            raise ZeroDivision("inverse of the zero quaternion")
        n2 = Fraction(n2)
    else:
        eps = DEFAULT_EPS_SING if eps_sing is None else eps_sing
        if not n2 > 0 or math.sqrt(float(n2)) <= eps:
            raise ZeroDivision(f"|q| = {math.sqrt(float(n2)):.3e} below eps_sing = {eps:.1e}")
    c = a.conj()
    return Quaternion(*(x / n2 for x in c))


def qpow(a: Quaternion, k: int, eps_sing=None) -> Quaternion:
    """Integer power by repeated squaring; negative powers invert first."""
    if k < 0:
        a = qinv(a, eps_sing)
        k = -k
    result = Quaternion(1, 0, 0, 0) if not a.is_exact else Quaternion.exact(1, 0, 0, 0)
    base = a
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


# --- quaternionic vectors -------------------------------------------------

HVector = tuple  # tuple[Quaternion, ...]


def hvector(*entries) -> HVector:
    return tuple(e if isinstance(e, Quaternion) else _coerce(e) for e in entries)


def inner(p: Sequence[Quaternion], q: Sequence[Quaternion]) -> Quaternion:
    """``<p, q> = sum conj(p_l) q_l``; conjugate-linear in the first slot."""
    if len(p) != len(q):
        raise LengthMismatch(f"vectors of length {len(p)} and {len(q)}")
    acc = ZERO
    for a, b in zip(p, q):
        acc = acc + a.conj() * b
    return acc


def hnorm2(v: Sequence[Quaternion]):
    acc = 0
    for a in v:
        acc = acc + a.norm2()
    return acc


def hnorm(v: Sequence[Quaternion]) -> float:
    return math.sqrt(float(hnorm2(v)))


def vadd(p, q) -> HVector:
    if len(p) != len(q):
        raise LengthMismatch(f"vectors of length {len(p)} and {len(q)}")
    return tuple(a + b for a, b in zip(p, q))


def vscale_right(v, sigma: Quaternion) -> HVector:
    """Right scalar multiplication ``v sigma``."""
    return tuple(a * sigma for a in v)


def vneg(v) -> HVector:
    return tuple(-a for a in v)


# --- quaternionic matrices ------------------------------------------------

QuatMatrix = tuple  # tuple[tuple[Quaternion, ...], ...]


def _shape(A) -> tuple[int, int]:
    rows = len(A)
    cols = {len(r) for r in A}
    if len(cols) != 1:
        raise SizeMismatch("ragged quaternionic matrix")
    return rows, cols.pop()


def identity_matrix(m: int) -> QuatMatrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(m)) for i in range(m))


def diag_matrix(entries: Sequence[Quaternion]) -> QuatMatrix:
    m = len(entries)
    return tuple(tuple(entries[i] if i == j else ZERO for j in range(m)) for i in range(m))


def mat_apply(A: QuatMatrix, q: Sequence[Quaternion]) -> HVector:
    """Left action ``(A q)_j = sum_k A_jk q_k``."""
    rows, cols = _shape(A)
    if cols != len(q):
        raise SizeMismatch(f"{rows}x{cols} matrix applied to length-{len(q)} vector")
    out = []
    for row in A:
        acc = ZERO
        for a, x in zip(row, q):
            acc = acc + a * x
        out.append(acc)
    return tuple(out)


def mat_adjoint(A: QuatMatrix) -> QuatMatrix:
    rows, cols = _shape(A)
    return tuple(tuple(A[k][j].conj() for k in range(rows)) for j in range(cols))


def mat_mul(A: QuatMatrix, B: QuatMatrix) -> QuatMatrix:
    ra, ca = _shape(A)
    rb, cb = _shape(B)
    if ca != rb:
        raise SizeMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    out = []
    for i in range(ra):
        row = []
        for j in range(cb):
            acc = ZERO
            for k in range(ca):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _close(a: Quaternion, b: Quaternion, tol) -> bool:
    d = a - b
    if tol == 0:
        return d.norm2() == 0
    return abs(d) <= tol


def is_hyperhermitian(A: QuatMatrix, tol=1e-12) -> bool:
    rows, cols = _shape(A)
    if rows != cols:
        raise SizeMismatch("hyperhermitian test needs a square matrix")
    adj = mat_adjoint(A)
    return all(_close(A[i][j], adj[i][j], tol) for i in range(rows) for j in range(cols))


def is_sp(A: QuatMatrix, tol=1e-12) -> bool:
    """``A* A = I`` entrywise within ``tol`` (``tol=0`` for exact input)."""
    rows, cols = _shape(A)
    if rows != cols:
        raise SizeMismatch("Sp membership needs a square matrix")
    P = mat_mul(mat_adjoint(A), A)
    return all(
        _close(P[i][j], ONE if i == j else ZERO, tol) for i in range(rows) for j in range(cols)
    )


def real_matrix_of(sigma: Quaternion) -> np.ndarray:
    """4x4 real matrix M with ``(q sigma)^R = M q^R``."""
    s1, s2, s3, s4 = (float(x) for x in sigma.components)
    return np.array(
        [
            [s1, -s2, -s3, -s4],
            [s2, s1, s4, -s3],
            [s3, -s4, s1, s2],
            [s4, s3, -s2, s1],
        ]
    )


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion(*(float(x) for x in rng.normal(scale=scale, size=4)))


def random_unit(rng: np.random.Generator) -> Quaternion:
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return Quaternion(*(float(x) for x in v))


def random_sp(m: int, rng: np.random.Generator) -> QuatMatrix:
    """Random element of Sp(m) via Gram-Schmidt in the right H-module H^m."""
    cols: list[HVector] = []
    while len(cols) < m:
        v = tuple(random_quaternion(rng) for _ in range(m))
        for c in cols:
            v = tuple(a - b for a, b in zip(v, vscale_right(c, inner(c, v))))
        nv = hnorm(v)
        if nv < 1e-8:
            continue
        cols.append(tuple(a * (1.0 / nv) for a in v))
    return tuple(tuple(cols[j][i] for j in range(m)) for i in range(m))


# --- vectorised helpers (last axis = components) --------------------------


def qmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4 = np.moveaxis(a, -1, 0)
    s1, s2, s3, s4 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            s1 * x1 - s2 * x2 - s3 * x3 - s4 * x4,
            s2 * x1 + s1 * x2 + s4 * x3 - s3 * x4,
            s3 * x1 - s4 * x2 + s1 * x3 + s2 * x4,
            s4 * x1 + s3 * x2 - s2 * x3 + s1 * x4,
        ],
        axis=-1,
    )


def qconj_arr(a: np.ndarray) -> np.ndarray:
    out = -a
    out[..., 0] = a[..., 0]
    return out
