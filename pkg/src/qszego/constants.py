"""Exact normalisation constants of the Szego kernel.

Everything here is rational arithmetic; powers of pi are carried symbolically
by :class:`PiScaled`.  No floating point is used except in ``float()``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import RangeError


@dataclass(frozen=True)
class PiScaled:
    """``coeff * pi**(pi_half_exponent / 2)`` with ``coeff`` rational."""

    coeff: Fraction
    pi_half_exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff == 0:
            object.__setattr__(self, "pi_half_exponent", 0)

    @classmethod
    def rational(cls, x) -> "PiScaled":
        return cls(Fraction(x), 0)

    def __mul__(self, other):
        if isinstance(other, PiScaled):
            return PiScaled(self.coeff * other.coeff, self.pi_half_exponent + other.pi_half_exponent)
        if isinstance(other, (int, Fraction)):
            return PiScaled(self.coeff * other, self.pi_half_exponent)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiScaled):
            return PiScaled(self.coeff / other.coeff, self.pi_half_exponent - other.pi_half_exponent)
        if isinstance(other, (int, Fraction)):
            return PiScaled(self.coeff / other, self.pi_half_exponent)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiScaled(Fraction(other) / self.coeff, -self.pi_half_exponent)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiScaled.rational(other)
        if not isinstance(other, PiScaled):
            return NotImplemented
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        if self.pi_half_exponent != other.pi_half_exponent:
            raise ValueError(
                f"cannot add pi^({self.pi_half_exponent}/2) and pi^({other.pi_half_exponent}/2) terms"
            )
        return PiScaled(self.coeff + other.coeff, self.pi_half_exponent)

    __radd__ = __add__

    def __neg__(self):
        return PiScaled(-self.coeff, self.pi_half_exponent)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, k: int):
        return PiScaled(self.coeff**k, self.pi_half_exponent * k)

    def __float__(self):
        return float(self.coeff) * math.pi ** (self.pi_half_exponent / 2)

    def __str__(self):
        return f"{self.coeff} * pi^({self.pi_half_exponent}/2)"

    def to_json(self) -> dict:
        return {"coeff": f"{self.coeff.numerator}/{self.coeff.denominator}", "pi_half_exponent": self.pi_half_exponent}

    @classmethod
    def from_json(cls, d: dict) -> "PiScaled":
        return cls(Fraction(d["coeff"]), int(d["pi_half_exponent"]))


PI = PiScaled(Fraction(1), 2)


def binom(t: int, s: int) -> int:
    """Binomial coefficient, zero outside ``0 <= s <= t`` (Pascal recurrence)."""
    if t < 0 or s < 0 or s > t:
        return 0
    return _pascal_row(t)[s]


_PASCAL: list[list[int]] = [[1]]


def _pascal_row(t: int) -> list[int]:
    while len(_PASCAL) <= t:
        prev = _PASCAL[-1]
        _PASCAL.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    return _PASCAL[t]


def _check_n(n: int, lo: int = 1):
    if not isinstance(n, int) or n < lo:
        raise RangeError(f"constant formula requires n >= {lo}, got {n}")


def alpha(n: int, k: int) -> Fraction:
    """Closed form ``(2n+1-k)(2n+2-k)(4n+3+k)/6``."""
    _check_n(n)
    if not 0 <= k <= 2 * n:
        raise RangeError(f"alpha index k={k} outside 0..{2 * n}")
    return Fraction((2 * n + 1 - k) * (2 * n + 2 - k) * (4 * n + 3 + k), 6)


def alpha_sum(n: int, k: int) -> int:
    """Defining sum ``sum_{j=1}^{2n+1-k} j (j + k)``."""
    _check_n(n)
    if not 0 <= k <= 2 * n:
        raise RangeError(f"alpha index k={k} outside 0..{2 * n}")
    return sum(j * (j + k) for j in range(1, 2 * n + 2 - k))


def _inner_s_sum(n: int, d: int) -> Fraction:
    # sum_s C(d,s)/2^{d-s+1} (-1)^s (2(d-s+1))! / ((d-s+1)! (4n+5+d-s)!)
    tot = Fraction(0)
    for s in range(d + 1):
        j = d - s + 1
        tot += Fraction((-1) ** s * binom(d, s) * factorial(2 * j), 2**j * factorial(j) * factorial(4 * n + 5 + d - s))
    return tot


def K_sum(n: int) -> Fraction:
    """The quadruple sum K(n) entering the normalisation constant."""
    _check_n(n)
    total = Fraction(0)
    for k in range(2 * n + 1):
        a = alpha(n, k)
        for l in range(k + 1):
            ck = binom(k, 2 * l)
            if not ck:
                continue
            for m in range(l + 1):
                d = k - 2 * m
                if d < 0:
                    continue
                total += a * ck * (-1) ** (k + m) * binom(l, m) * _inner_s_sum(n, d)
    return total


def c_paper(n: int) -> PiScaled:
    """``(4n-1) / (2^{2n+5} pi^{2n+1} ((2n)!)^2 K(n) (n+2)(2n+3))``."""
    _check_n(n)
    coeff = Fraction(4 * n - 1, 2 ** (2 * n + 5) * factorial(2 * n) ** 2 * (n + 2) * (2 * n + 3)) / K_sum(n)
    return PiScaled(coeff, -(4 * n + 2))


def F_e_closed(n: int) -> Fraction:
    """Value at ``e`` of the test function: ``(2n+2)! / 2^{2n+4}``."""
    if not isinstance(n, int) or n < 0:
        raise RangeError(f"n must be a nonnegative integer, got {n}")
    return Fraction(factorial(2 * n + 2), 2 ** (2 * n + 4))


def F_e_from_constant(n: int) -> PiScaled:
    """``c_n pi^{2n+1} ((2n)!)^2 (2n+4)! K(n) / (4n-1)`` -- must equal ``F_e_closed``."""
    return c_paper(n) * PI ** (2 * n + 1) * Fraction(factorial(2 * n) ** 2 * factorial(2 * n + 4), 4 * n - 1) * K_sum(n)
