"""Exact special functions at half-integer and rational arguments.

This is an independent route to the numbers produced in :mod:`constants`:
Gamma/Beta at half-integers, terminating 2F1, Jacobi polynomials, the radial
integrals ``I_{n,d}(w)`` and the cosine/Fejer bookkeeping.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from scipy import integrate

from .constants import PI, PiScaled, alpha, binom
from .errors import PoleError, RangeError


@dataclass(frozen=True)
class HalfInt:
    """The number ``twice_value / 2``."""

    twice_value: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        t = Fraction(x) * 2
        if t.denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.twice_value + other.twice_value)


def _half(x) -> HalfInt:
    return x if isinstance(x, HalfInt) else HalfInt.of(x)


def gamma_half(a) -> PiScaled:
    a = _half(a)
    if a.is_integer:
        k = a.twice_value // 2
        if k <= 0:
            raise PoleError(f"Gamma has a pole at {k}")
        return PiScaled(Fraction(factorial(k - 1)), 0)
    k = (a.twice_value - 1) // 2  # a = 1/2 + k
    if k >= 0:
        return PiScaled(Fraction(factorial(2 * k), 4**k * factorial(k)), 1)
    m = -k
    return PiScaled(Fraction((-4) ** m * factorial(m), factorial(2 * m)), 1)


def beta_half(a, b) -> PiScaled:
    a, b = _half(a), _half(b)
    return gamma_half(a) * gamma_half(b) / gamma_half(a + b)


def pochhammer(a, d: int) -> Fraction:
    """Rising factorial ``(a)_d`` with ``(a)_0 = 1``."""
    if d < 0:
        raise RangeError("Pochhammer index must be nonnegative")
    out = Fraction(1)
    a = Fraction(a)
    for i in range(d):
        out *= a + i
    return out


def hyp2f1_term(d: int, b, c, x) -> Fraction:
    """Terminating ``2F1(-d, b; c; x) = sum_{s<=d} (-d)_s (b)_s / ((c)_s s!) x^s``."""
    if d < 0:
        raise RangeError("terminating 2F1 needs d >= 0")
    b, c, x = Fraction(b), Fraction(c), Fraction(x)
    total = Fraction(0)
    for s in range(d + 1):
        cs = pochhammer(c, s)
        if cs == 0:
            raise PoleError(f"(c)_s vanishes at s={s} for c={c}")
        total += pochhammer(-d, s) * pochhammer(b, s) / (cs * factorial(s)) * x**s
    return total


def gen_binom(z, s: int) -> Fraction:
    """``z (z-1) ... (z-s+1) / s!`` for rational ``z``; zero for ``s < 0``."""
    if s < 0:
        return Fraction(0)
    z = Fraction(z)
    out = Fraction(1)
    for i in range(s):
        out *= z - i
    return out / factorial(s)


def jacobi_p(d: int, a, b, x) -> Fraction:
    """``P_d^{(a,b)}(x)`` by the finite binomial sum."""
    a, b, x = Fraction(a), Fraction(b), Fraction(x)
    return sum(
        (gen_binom(d + a, s) * gen_binom(d + b, d - s) * ((x - 1) / 2) ** (d - s) * ((x + 1) / 2) ** s for s in range(d + 1)),
        Fraction(0),
    )


def jacobi_at_minus3(n: int, d: int) -> Fraction:
    """``P_d^{(4n+5, -d-3/2)}(-3)`` by the explicit factorial sum."""
    tot = Fraction(0)
    for s in range(d + 1):
        j = d - s
        tot += Fraction((-1) ** s * factorial(2 * (j + 1)), 2 ** (j + 1) * factorial(s) * factorial(j) * factorial(j + 1) * factorial(4 * n + 5 + d - s))
    return factorial(4 * n + 5 + d) * tot


def hyp2f1_via_jacobi(n: int, d: int) -> Fraction:
    """``2F1(-d, 4n+9/2; 4n+6; 2) = d!/(4n+6)_d P_d^{(4n+5,-d-3/2)}(-3)``."""
    return factorial(d) / pochhammer(4 * n + 6, d) * jacobi_p(d, 4 * n + 5, Fraction(-2 * d - 3, 2), -3)


def hyp2f1_factorial_form(n: int, d: int) -> Fraction:
    """Same value written as ``(4n+5)! sum_s C(d,s)/2^{d-s+1} (-1)^s (2(d-s+1))!/((d-s+1)!(4n+5+d-s)!)``."""
    tot = Fraction(0)
    for s in range(d + 1):
        j = d - s + 1
        tot += Fraction(binom(d, s) * (-1) ** s * factorial(2 * j), 2**j * factorial(j) * factorial(4 * n + 5 + d - s))
    return factorial(4 * n + 5) * tot


def I_closed_exact(n: int, d: int) -> PiScaled:
    """``I_{n,d}(1)`` in closed form."""
    if n < 1 or d < 0:
        raise RangeError(f"I_closed needs n >= 1 and d >= 0, got n={n}, d={d}")
    tot = Fraction(0)
    for s in range(d + 1):
        j = d - s + 1
        tot += Fraction(binom(d, s) * (-1) ** s * factorial(2 * j), 2**j * factorial(j) * factorial(4 * n + 5 + d - s))
    coeff = Fraction((-1) ** d * factorial(8 * n + 8), 2 ** (8 * n + 10) * factorial(4 * n + 4)) * tot
    return PiScaled(coeff, 2)


def I_closed(n: int, d: int, w: float = 1.0) -> float:
    """``I_{n,d}(w) = I_{n,d}(1) / w^{8n+9}``."""
    if not w > 0:
        raise RangeError(f"w must be positive, got {w}")
    return float(I_closed_exact(n, d)) / w ** (8 * n + 9)


def I_integrand(n: int, d: int, w: float):
    w2 = w * w

    def g(r):
        r2 = r * r
        return r2 / (w2 + r2) ** (4 * n + 6) * ((w2 - r2) / (w2 + r2)) ** d

    return g


def I_quadrature(n: int, d: int, w: float = 1.0) -> tuple[float, float]:
    """Adaptive 1-D quadrature of the defining integral (value, error estimate)."""
    val, err = integrate.quad(I_integrand(n, d, w), 0, np.inf, epsabs=0, epsrel=1e-13, limit=500)
    return val, err


def cos_k_expansion(k: int) -> list[int]:
    """Coefficients ``c[p]`` with ``cos(k t) = sum_p c[p] cos(t)^p``."""
    if k < 0:
        raise RangeError("k must be nonnegative")
    coeffs = [0] * (k + 1)
    for l in range(k + 1):
        ck = binom(k, 2 * l)
        if not ck:
            continue
        for m in range(l + 1):
            coeffs[k - 2 * m] += ck * (-1) ** m * binom(l, m)
    return coeffs


def eval_cos_poly(coeffs, theta: float) -> float:
    c = math.cos(theta)
    return sum(a * c**p for p, a in enumerate(coeffs))


def fejer_square(n: int, theta: float) -> tuple[float, float]:
    """``(|sum_k (2n-k+1) e^{ik theta}|^2, sum_k alpha_k cos(k theta))``.

    The two sides differ for ``theta != 0``: the autocorrelation of the weights
    puts a factor 2 on every ``k >= 1`` cosine that ``alpha_k`` omits.
    """
    if n < 1:
        raise RangeError("n must be >= 1")
    lhs = abs(sum((2 * n - k + 1) * cmath.exp(1j * k * theta) for k in range(2 * n + 1))) ** 2
    rhs = sum(float(alpha(n, k)) * math.cos(k * theta) for k in range(2 * n + 1))
    return lhs, rhs


def fejer_cosine_coefficients(n: int) -> list[int]:
    """Cosine coefficients of the squared modulus, from the autocorrelation of the weights."""
    a = [2 * n + 1 - k for k in range(2 * n + 1)]
    out = []
    for k in range(2 * n + 1):
        corr = sum(a[j] * a[j + k] for j in range(2 * n + 1 - k))
        out.append(corr if k == 0 else 2 * corr)
    return out


def alpha_cos_power_coefficients(n: int) -> list[Fraction]:
    """``sum_k alpha_k cos(k t)`` rewritten as a polynomial in ``cos t``."""
    out = [Fraction(0)] * (2 * n + 1)
    for k in range(2 * n + 1):
        for p, c in enumerate(cos_k_expansion(k)):
            out[p] += alpha(n, k) * c
    return out


def bracket(n: int) -> Fraction:
    """``sum_d b_d (-1)^d 2F1(-d, 4n+9/2; 4n+6; 2)`` with ``b_d`` the cos-power coefficients."""
    b = alpha_cos_power_coefficients(n)
    return sum(
        (bd * (-1) ** d * hyp2f1_term(d, Fraction(8 * n + 9, 2), 4 * n + 6, 2) for d, bd in enumerate(b)),
        Fraction(0),
    )


def sphere_ball_factor(n: int) -> PiScaled:
    """``pi^{2n-1/2} / Gamma(2n+1/2)`` (the factor used for the angular part)."""
    if n < 1:
        raise RangeError("n must be >= 1")
    return PiScaled(Fraction(1), 4 * n - 1) / gamma_half(Fraction(4 * n + 1, 2))


def radial_integral(n: int) -> PiScaled:
    """``Gamma(2n-1/2) Gamma(2n+5) / (2 Gamma(4n+9/2))``."""
    if n < 1:
        raise RangeError("n must be >= 1")
    return gamma_half(Fraction(4 * n - 1, 2)) * gamma_half(2 * n + 5) / gamma_half(Fraction(8 * n + 9, 2)) / 2


def boundary_norm_integral(n: int) -> PiScaled:
    """``2^{8n+8} pi^{2n-1} (2n+4)!/(4n-1) (4n+4)!/(8n+8)!``."""
    if n < 1:
        raise RangeError("n must be >= 1")
    coeff = Fraction(2 ** (8 * n + 8) * factorial(2 * n + 4) * factorial(4 * n + 4), (4 * n - 1) * factorial(8 * n + 8))
    return PiScaled(coeff, 4 * n - 2)


def c_via_oracle(n: int) -> PiScaled:
    """Normalisation constant assembled from Beta, 2F1 and the q'-integral.

    ``F(e) = c 4 pi ((2n)!)^2 [q'-integral] B(4n+9/2, 3/2)/2 [bracket]``
    solved for ``c``; must agree exactly with :func:`constants.c_paper`.
    """
    from .constants import F_e_closed

    denom = (
        4
        * PI
        * factorial(2 * n) ** 2
        * boundary_norm_integral(n)
        * beta_half(Fraction(8 * n + 9, 2), Fraction(3, 2))
        / 2
        * bracket(n)
    )
    return PiScaled.rational(F_e_closed(n)) / denom
