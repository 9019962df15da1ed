"""Associated Legendre functions P and Q of complex degree and order off the cut.

Conventions follow Hobson: ``Q`` carries the factor ``exp(i pi mu)`` and both
functions are analytic on ``C \\ (-inf, 1]``.  Powers of ``z**2 - 1`` are taken
as ``exp(a log(z-1) + a log(z+1))`` with principal logarithms, which is
positive on ``(1, inf)`` and continuous off the cut.

Evaluation routes (all hypergeometric series, regularized so that integer
``1 - mu`` or half-integer ``nu + 3/2`` need no special casing)::

    P_nu^mu(z)  = ((z+1)/(z-1))**(mu/2) ((z+1)/2)**nu
                  * F~(-nu, -nu-mu; 1-mu; (z-1)/(z+1))
    Q_nu^mu(z)  = e^{i pi mu} Gamma(nu+mu+1) sqrt(pi) (z^2-1)**(mu/2)
                  / (2**(nu+1) z**(nu+mu+1))
                  * F~((nu+mu)/2 + 1, (nu+mu+1)/2; nu+3/2; 1/z^2)

and, when ``1/z^2`` converges slowly (z close to 1), ``Q`` is taken from the
``P`` series at the Whipple argument ``z / sqrt(z^2 - 1)``.  Points the
series cannot reach efficiently fall back to :mod:`mpmath`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath

from legendre_params.errors import ConvergenceError, DomainError, PoleError
from legendre_params.scalars import nonpositive_integer, recip_gamma

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"
FINITE_DIFFERENCE = "finite-difference"
SERIES = "series"
METHODS = (CLOSED_FORM, QUADRATURE, FINITE_DIFFERENCE, SERIES)

CUT_TOL = 1e-14
PARAM_BOX = 30.0
_EPS = 2.220446049250313e-16
# beyond this the series needs ~1e5 terms; hand over to mpmath
_MAX_SERIES_ARG = 0.9995
# below |z|^2 = 2 the Whipple route converges faster and cancels less;
# above it, x - 1 at the Whipple argument starts losing digits
_DIRECT_Q_MIN_ABS_Z2 = 2.0
_MAX_TERMS = 200_000


@dataclass(frozen=True)
class EvalResult:
    value: complex
    method: str
    err_estimate: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not math.isfinite(self.err_estimate) or self.err_estimate < 0:
            raise ValueError(f"err_estimate must be finite and nonnegative, got {self.err_estimate}")


def on_cut(z: complex) -> bool:
    return abs(z.imag) <= CUT_TOL and -1.0 - CUT_TOL <= z.real <= 1.0 + CUT_TOL


def check_off_cut(z: complex) -> None:
    if on_cut(z):
        raise DomainError(f"z = {z} lies on the cut [-1, 1]")


@dataclass(frozen=True)
class ParamPoint:
    """Degree ``nu``, order ``mu`` and argument ``z`` of a Legendre function."""

    nu: complex
    mu: complex
    z: complex

    def __post_init__(self):
        for name in ("nu", "mu", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        check_off_cut(self.z)


def z2m1_pow(z: complex, alpha) -> complex:
    """``(z**2 - 1)**alpha`` on the principal branch cut along ``(-inf, 1]``."""
    return cmath.exp(alpha * (cmath.log(z - 1.0) + cmath.log(z + 1.0)))


def _half_integer_part(x: complex) -> int | None:
    # 2x when x is (numerically exactly) a real multiple of 1/2
    if x.imag != 0.0:
        return None
    twice = 2.0 * x.real
    if twice == round(twice):
        return int(round(twice))
    return None


def exp_i_pi(x: complex) -> complex:
    """``exp(i pi x)``, exact for real multiples of 1/2."""
    twice = _half_integer_part(complex(x))
    if twice is not None:
        return (1.0, 1j, -1.0, -1j)[twice % 4] + 0j
    return cmath.exp(1j * math.pi * x)


def sin_pi(x: complex) -> complex:
    """``sin(pi x)``, exactly zero at real integers."""
    twice = _half_integer_part(complex(x))
    if twice is not None:
        return (0.0, 1.0, 0.0, -1.0)[twice % 4] + 0j
    return cmath.sin(math.pi * x)


def hyp2f1_regularized(a: complex, b: complex, c: complex, x: complex,
                       max_terms: int = _MAX_TERMS) -> tuple[complex, float]:
    """Series for ``2F1(a, b; c; x) / Gamma(c)`` with ``|x| < 1``.

    Returns the sum and an absolute error estimate (rounding plus truncated
    tail).  When ``c`` is a nonpositive integer the leading terms vanish and
    summation starts at ``k = 1 - c``.
    """
    if abs(x) >= 1.0:
        raise DomainError(f"series argument |x| = {abs(x)} must be < 1")
    k = 0
    pole = nonpositive_integer(c)
    if pole is not None:
        k = 1 - pole
    term = recip_gamma(c + k)
    for j in range(k):
        term *= (a + j) * (b + j) / (j + 1) * x
    total = term
    magnitude = abs(term)
    absx = abs(x)
    while True:
        if k >= max_terms:
            raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms (x={x})")
        ratio = (a + k) * (b + k) / ((k + 1) * (c + k))
        term *= ratio * x
        k += 1
        total += term
        at = abs(term)
        magnitude += at
        if at == 0.0:
            break
        # tail bound once the term ratio has settled below one
        r = abs(ratio) * absx
        if r < 1.0:
            bound = abs((a + k) * (b + k) / ((k + 1) * (c + k))) * absx
            if bound < 1.0 and at * bound / (1.0 - bound) <= 0.5 * _EPS * abs(total):
                break
    # recurrence error grows slowly with the term count
    return total, 4.0 * _EPS * magnitude * (1.0 + 0.05 * math.sqrt(k))


def _check_box(nu: complex, mu: complex) -> None:
    if abs(nu) > PARAM_BOX or abs(mu) > PARAM_BOX:
        raise DomainError(f"|nu|, |mu| must not exceed {PARAM_BOX} (nu={nu}, mu={mu})")


def _mp(x: complex):
    # mpmath's degenerate-case detection needs real parameters typed as real
    return mpmath.mpf(x.real) if x.imag == 0.0 else mpmath.mpc(x)


def _mp_p(nu: complex, mu: complex, z: complex) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.legenp(_mp(nu), _mp(mu), _mp(z), type=3))


def _mp_q(nu: complex, mu: complex, z: complex) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.legenq(_mp(nu), _mp(mu), _mp(z), type=3))


def _p_series_arg(z: complex) -> float:
    return abs((z - 1.0) / (z + 1.0))


def _p_series(nu: complex, mu: complex, z: complex) -> tuple[complex, float]:
    if nu.real < -0.5:
        # P_nu = P_{-nu-1}; the reflected degree keeps the series terms small
        nu = -nu - 1.0
    y = (z - 1.0) / (z + 1.0)
    f, ferr = hyp2f1_regularized(-nu, -nu - mu, 1.0 - mu, y)
    log_pref = 0.5 * mu * (cmath.log(z + 1.0) - cmath.log(z - 1.0)) + nu * cmath.log(0.5 * (z + 1.0))
    pref = cmath.exp(log_pref)
    value = pref * f
    return value, abs(pref) * ferr + 8.0 * _EPS * abs(value)


def _q_gamma_factor(nu: complex, mu: complex) -> complex:
    s = nu + mu + 1.0
    if nonpositive_integer(s) is not None:
        raise PoleError(f"Q_nu^mu undefined: nu + mu + 1 = {s} is a pole of Gamma")
    return 1.0 / recip_gamma(s)


def _q_series(nu: complex, mu: complex, z: complex) -> tuple[complex, float]:
    g = _q_gamma_factor(nu, mu)
    f, ferr = hyp2f1_regularized(0.5 * (nu + mu) + 1.0, 0.5 * (nu + mu + 1.0), nu + 1.5, 1.0 / (z * z))
    pref = (exp_i_pi(mu) * g * math.sqrt(math.pi) * z2m1_pow(z, 0.5 * mu)
            * cmath.exp(-(nu + 1.0) * math.log(2.0) - (nu + mu + 1.0) * cmath.log(z)))
    value = pref * f
    return value, abs(pref) * ferr + 8.0 * _EPS * abs(value)


def whipple_argument(z) -> complex:
    """``z / sqrt(z**2 - 1)``; an involution on ``Re z > 0`` off the cut."""
    z = complex(z)
    check_off_cut(z)
    return z / z2m1_pow(z, 0.5)


def _q_via_whipple(nu: complex, mu: complex, z: complex) -> tuple[complex, float]:
    g = _q_gamma_factor(nu, mu)
    x = whipple_argument(z)
    p, perr = _p_series(-mu - 0.5, -nu - 0.5, x)
    pref = math.sqrt(0.5 * math.pi) * exp_i_pi(mu) * g * z2m1_pow(z, -0.25)
    value = pref * p
    return value, abs(pref) * perr + 8.0 * _EPS * abs(value)


def legendre_p(p: ParamPoint, method: str = "auto") -> EvalResult:
    """``P_nu^mu(z)`` for ``z`` off the cut.

    ``method`` is ``"auto"``, ``"series"`` (force the native series) or
    ``"mpmath"``.
    """
    nu, mu, z = p.nu, p.mu, p.z
    _check_box(nu, mu)
    if method not in ("auto", "series", "mpmath"):
        raise ValueError(f"unknown method {method!r}")
    usable = z.real > 0.0 and _p_series_arg(z) <= _MAX_SERIES_ARG
    if method == "series" and z.real <= 0.0:
        raise DomainError("the P series needs Re(z) > 0")
    if method == "series" or (method == "auto" and usable):
        value, err = _p_series(nu, mu, z)
    else:
        value = _mp_p(nu, mu, z)
        err = 1e-14 * abs(value)
    return EvalResult(value, SERIES, err)


def legendre_q(p: ParamPoint, method: str = "auto") -> EvalResult:
    """``Q_nu^mu(z)`` (Hobson normalization) for ``z`` off the cut.

    ``method`` is ``"auto"``, ``"series"`` (the ``1/z**2`` series),
    ``"whipple"`` (``P`` series at the Whipple argument) or ``"mpmath"``.
    Raises PoleError when ``nu + mu`` is a negative integer.
    """
    nu, mu, z = p.nu, p.mu, p.z
    _check_box(nu, mu)
    if method not in ("auto", "series", "whipple", "mpmath"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        if abs(z * z) >= _DIRECT_Q_MIN_ABS_Z2:
            method = "series"
        elif z.real > 0.0 and _p_series_arg(whipple_argument(z)) <= _MAX_SERIES_ARG:
            method = "whipple"
        elif abs(z * z) > 1.0 / _MAX_SERIES_ARG:
            method = "series"
        else:
            method = "mpmath"
    if method == "series":
        if abs(z) <= 1.0:
            raise DomainError("the 1/z^2 series needs |z| > 1")
        value, err = _q_series(nu, mu, z)
    elif method == "whipple":
        if z.real <= 0.0:
            raise DomainError("the Whipple route needs Re(z) > 0")
        value, err = _q_via_whipple(nu, mu, z)
    else:
        _q_gamma_factor(nu, mu)
        value = _mp_q(nu, mu, z)
        err = 1e-14 * abs(value)
    return EvalResult(value, SERIES, err)


def P(nu, mu, z) -> complex:
    """Shorthand for ``legendre_p(ParamPoint(nu, mu, z)).value``."""
    return legendre_p(ParamPoint(nu, mu, z)).value


def Q(nu, mu, z) -> complex:
    """Shorthand for ``legendre_q(ParamPoint(nu, mu, z)).value``."""
    return legendre_q(ParamPoint(nu, mu, z)).value


def log_coth_map(z) -> complex:
    """``w(z) = log coth(z/2)``, which swaps cosh with coth and sinh with 1/sinh.

    Defined on the strip ``|Im z| < pi`` minus the ray ``Re z <= 0, Im z = 0``.
    """
    z = complex(z)
    if not abs(z.imag) < math.pi or (z.imag == 0.0 and z.real <= 0.0):
        raise DomainError(f"log_coth_map is defined on |Im z| < pi minus (-inf, 0]; got {z}")
    q = cmath.exp(-z)
    if abs(q) < 1.0:
        # log((1+q)/(1-q)); atanh keeps full relative accuracy as q -> 0
        return 2.0 * cmath.atanh(q)
    return cmath.log(1.0 / cmath.tanh(0.5 * z))


def whipple_q_to_p(nu, mu, z, direction: str = "q_to_p", method: str = "auto") -> EvalResult:
    """Whipple's index-interchange relation, valid for ``Re z > 0``::

        P_{-mu-1/2}^{-nu-1/2}(z / sqrt(z^2-1))
            = sqrt(2/pi) (z^2-1)**(1/4) e^{-i mu pi} / Gamma(nu+mu+1) * Q_nu^mu(z)

    ``direction="q_to_p"`` returns the left side computed from ``Q``;
    ``direction="p_to_q"`` returns ``Q_nu^mu(z)`` computed from the ``P`` on
    the left.  ``method`` is passed to the underlying evaluator.
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    check_off_cut(z)
    if z.real <= 0.0:
        raise DomainError("Whipple's relation requires Re(z) > 0")
    s = nu + mu + 1.0
    if nonpositive_integer(s) is not None:
        raise PoleError(f"Gamma(nu + mu + 1) has a pole at {s}")
    scale = math.sqrt(2.0 / math.pi) * z2m1_pow(z, 0.25) * exp_i_pi(-mu) * recip_gamma(s)
    if direction == "q_to_p":
        q = legendre_q(ParamPoint(nu, mu, z), method=method)
        return EvalResult(scale * q.value, CLOSED_FORM, abs(scale) * q.err_estimate)
    if direction == "p_to_q":
        x = whipple_argument(z)
        p = legendre_p(ParamPoint(-mu - 0.5, -nu - 0.5, x), method=method)
        return EvalResult(p.value / scale, CLOSED_FORM, p.err_estimate / abs(scale))
    raise ValueError(f"direction must be 'q_to_p' or 'p_to_q', got {direction!r}")


def negative_order_p(nu, mu, z, p_value: complex | None = None,
                     q_value: complex | None = None) -> EvalResult:
    """``P_nu^{-mu}(z)`` from ``P_nu^mu(z)`` and ``Q_nu^mu(z)``::

        P_nu^{-mu} = Gamma(nu-mu+1)/Gamma(nu+mu+1)
                     * [P_nu^mu - (2/pi) e^{-i mu pi} sin(mu pi) Q_nu^mu]

    ``p_value``/``q_value`` override the directly evaluated ``P_nu^mu`` and
    ``Q_nu^mu`` (used to chain the connection with itself).
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    point = ParamPoint(nu, mu, z)
    if p_value is None:
        p_value = legendre_p(point).value
    if mu == 0:
        return EvalResult(complex(p_value), CLOSED_FORM, 0.0)
    lo, hi = nu - mu + 1.0, nu + mu + 1.0
    for s in (lo, hi):
        if nonpositive_integer(s) is not None:
            raise PoleError(f"connection gamma factor Gamma({s}) has a pole")
    ratio = recip_gamma(hi) / recip_gamma(lo)
    s_mu = sin_pi(mu)
    value = complex(p_value)
    if s_mu != 0:
        if q_value is None:
            q_value = legendre_q(point).value
        value -= (2.0 / math.pi) * exp_i_pi(-mu) * s_mu * q_value
    value *= ratio
    return EvalResult(value, CLOSED_FORM, 16.0 * _EPS * abs(value))


def wronskian(nu, mu, z) -> complex:
    """Handbook value of ``P Q' - P' Q`` for fixed ``(nu, mu)``::

        e^{i mu pi} Gamma(nu+mu+1) / (Gamma(nu-mu+1) (1 - z^2))
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    return exp_i_pi(mu) * recip_gamma(nu - mu + 1.0) / recip_gamma(nu + mu + 1.0) / (1.0 - z * z)
