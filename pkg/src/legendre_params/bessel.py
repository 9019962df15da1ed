"""Modified Bessel functions of real order and their order derivatives at integers.

The real-order functions delegate to the AMOS routines in :mod:`scipy.special`.
The order derivatives at integer orders are finite sums of integer-order
functions.

``scaled=True`` returns ``exp(-t) I`` and ``exp(t) K`` respectively, which is
what the quadrature oracle integrates against exponential weights.
"""

from __future__ import annotations

import math

from scipy import special

from legendre_params.errors import DomainError

MAX_ORDER = 60.0
MAX_T_I = 700.0


def _check(order: float, t: float) -> None:
    if not t > 0.0:
        raise DomainError(f"Bessel argument must be positive, got t={t}")
    if abs(order) > MAX_ORDER:
        raise DomainError(f"|order| = {abs(order)} exceeds {MAX_ORDER}")


def bessel_i(order: float, t: float, scaled: bool = False) -> float:
    _check(order, t)
    if scaled:
        return float(special.ive(order, t))
    if t > MAX_T_I:
        raise OverflowError(f"I_nu(t) overflows double precision for t={t}")
    return float(special.iv(order, t))


def bessel_k(order: float, t: float, scaled: bool = False) -> float:
    _check(order, t)
    # K is even in its order; folding makes the symmetry exact.
    order = abs(order)
    if scaled:
        return float(special.kve(order, t))
    return float(special.kv(order, t))


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")


def dk_dorder_at_int(m: int, sign: int, t: float, scaled: bool = False) -> float:
    """``d K_mu(t) / d mu`` at ``mu = sign * m``.

    ``sign * m! * sum_{k<m} t**(k-m) / (k! (m-k) 2**(k-m+1)) * K_k(t)``
    """
    _check_sign(sign)
    if m < 0:
        raise ValueError("m must be nonnegative")
    _check(m, t)
    total = 0.0
    for k in range(m):
        coef = (t / 2.0) ** (k - m) / (2.0 * math.factorial(k) * (m - k))
        total += coef * bessel_k(k, t, scaled)
    return sign * math.factorial(m) * total


def di_dorder_at_int(n: int, sign: int, t: float, scaled: bool = False) -> float:
    """``d I_nu(t) / d nu`` at ``nu = sign * n``.

    ``(-1)**(n+1) K_n(t) + sign * n! * sum_{k<n} (-1)**(k-n) t**(k-n)
    / (k! (n-k) 2**(k-n+1)) * I_k(t)``

    With ``scaled=True`` every term is multiplied by ``exp(-t)``, including
    the ``K_n`` term.
    """
    _check_sign(sign)
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check(n, t)
    if scaled:
        k_term = math.exp(-2.0 * t) * bessel_k(n, t, scaled=True)
    else:
        k_term = bessel_k(n, t)
    total = 0.0
    for k in range(n):
        coef = (-1) ** (k - n) * (t / 2.0) ** (k - n) / (2.0 * math.factorial(k) * (n - k))
        total += coef * bessel_i(k, t, scaled)
    return (-1) ** (n + 1) * k_term + sign * math.factorial(n) * total
