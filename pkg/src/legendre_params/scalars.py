"""Half-integer bookkeeping and the gamma family (ln Gamma, 1/Gamma, digamma).

Gamma-type functions use Stirling's series after shifting the argument up to
``Re(z) >= 15`` with the recurrence ``Gamma(z+1) = z Gamma(z)``.  Arguments are
accepted as int, float or complex; results are always complex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from legendre_params.errors import DomainError, PoleError

POLE_TOL = 1e-12

_STIRLING_SHIFT = 15.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# B_2, B_4, ..., B_20
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)
_RE_BOX = (-50.0, 171.7)
_IM_BOX = 50.0


@dataclass(frozen=True, order=True)
class HalfInteger:
    """An exact number of the form ``twice_value / 2``."""

    twice_value: int

    @classmethod
    def from_number(cls, x) -> "HalfInteger":
        if isinstance(x, HalfInteger):
            return x
        twice = 2 * Fraction(x)
        if twice.denominator != 1:
            raise ValueError(f"{x!r} is not a multiple of 1/2")
        return cls(int(twice))

    @classmethod
    def half(cls, k: int) -> "HalfInteger":
        """The value ``k - 1/2``."""
        return cls(2 * k - 1)

    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def is_odd_half(self) -> bool:
        return self.twice_value % 2 == 1

    def __add__(self, other):
        if isinstance(other, int):
            other = HalfInteger(2 * other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.twice_value + other.twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = HalfInteger(2 * other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.twice_value - other.twice_value)

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInteger(2 * other) - self
        return NotImplemented

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __float__(self) -> float:
        return self.twice_value / 2.0

    def __complex__(self) -> complex:
        return complex(float(self))

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def __str__(self) -> str:
        if self.is_integer():
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def _as_complex(x) -> complex:
    if isinstance(x, HalfInteger):
        return complex(float(x))
    return complex(x)


def nonpositive_integer(z: complex, tol: float = POLE_TOL) -> int | None:
    """Return ``-k`` if ``z`` lies within ``tol`` of the pole ``-k`` of Gamma."""
    if abs(z.imag) > tol or z.real > tol:
        return None
    k = round(z.real)
    if abs(z.real - k) <= tol:
        return int(k)
    return None


def _check_box(z: complex) -> None:
    if not (_RE_BOX[0] <= z.real <= _RE_BOX[1]) or abs(z.imag) > _IM_BOX:
        raise DomainError(f"gamma-family argument {z} outside the supported box")


def _shift(z: complex) -> int:
    return max(0, math.ceil(_STIRLING_SHIFT - z.real))


def _stirling_correction(w):
    w2 = w * w
    wp = w
    corr = 0.0
    for k, b in enumerate(_BERNOULLI, start=1):
        corr += b / (2 * k * (2 * k - 1) * wp)
        wp *= w2
    return corr


def _stirling_lngamma(w: complex) -> complex:
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + _stirling_correction(w)


def _stirling_digamma(w: complex) -> complex:
    w2 = w * w
    wp = w2
    corr = 0j
    for k, b in enumerate(_BERNOULLI, start=1):
        corr += b / (2 * k * wp)
        wp *= w2
    return cmath.log(w) - 0.5 / w - corr


def gamma_ln(x) -> complex:
    """Log-gamma, continued analytically off the positive real axis.

    Raises PoleError at the nonpositive integers.
    """
    z = _as_complex(x)
    _check_box(z)
    if nonpositive_integer(z) is not None:
        raise PoleError(f"Gamma has a pole at {z}")
    n = _shift(z)
    acc = _stirling_lngamma(z + n)
    for k in range(n):
        acc -= cmath.log(z + k)
    return acc


def _real_stirling_gamma(w: float) -> float:
    # w**(w - 1/2) split in two so the power never overflows and keeps ~1 ulp
    half_pow = math.pow(w, 0.5 * (w - 0.5))
    return half_pow * (half_pow * math.exp(-w)) * _SQRT_2PI * math.exp(_stirling_correction(w))


def _gamma_parts(z: complex) -> tuple[complex, complex]:
    # Gamma(z) = big / prod, with big = Gamma(z + n) from Stirling.
    n = _shift(z)
    prod = 1.0 + 0j
    for k in range(n):
        prod *= z + k
    if z.imag == 0.0:
        return complex(_real_stirling_gamma(z.real + n)), prod
    return cmath.exp(_stirling_lngamma(z + n)), prod


def gamma(x) -> complex:
    z = _as_complex(x)
    _check_box(z)
    if nonpositive_integer(z) is not None:
        raise PoleError(f"Gamma has a pole at {z}")
    big, prod = _gamma_parts(z)
    return big / prod


def recip_gamma(x) -> complex:
    """1/Gamma, an entire function: exactly zero at the poles of Gamma."""
    z = _as_complex(x)
    _check_box(z)
    if nonpositive_integer(z) is not None:
        return 0j
    big, prod = _gamma_parts(z)
    return prod / big


def digamma(x) -> complex:
    z = _as_complex(x)
    _check_box(z)
    if nonpositive_integer(z) is not None:
        raise PoleError(f"digamma has a pole at {z}")
    n = _shift(z)
    acc = _stirling_digamma(z + n)
    for k in range(n):
        acc -= 1.0 / (z + k)
    return acc


def digamma_diff_sum(mu, n: int) -> complex:
    """``psi(mu + n + 1/2) - psi(mu - n + 1/2)`` as a finite rational sum.

    Equal to ``2 mu sum_{l=1}^{n} 1 / (mu^2 - (l - 1/2)^2)``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    mu = _as_complex(mu)
    total = 0j
    for l in range(1, n + 1):
        h = l - 0.5
        # factored so the pole test is a distance in mu
        if abs(mu - h) <= POLE_TOL or abs(mu + h) <= POLE_TOL:
            raise PoleError(f"mu = {mu} hits the pole at +-{h}")
        total += 1.0 / ((mu - h) * (mu + h))
    return 2.0 * mu * total
