"""Closed-form derivatives of P and Q with respect to degree and order.

Every family is written for the functions ``P_{nu-1/2}^mu(z)`` and
``Q_{nu-1/2}^mu(z)``:

* order derivatives are taken at integer orders ``mu = +-m`` for a free
  degree parameter ``nu``;
* degree derivatives are taken at odd-half-integer degrees ``nu - 1/2`` with
  ``nu = +-n``, for a free order ``mu``.

The integer-order formulas come with a gamma ratio ``Gamma(nu -+ m + 1/2) /
Gamma(nu - m + 1/2)`` on the derivative side.  The functions here divide it
out and return the derivative itself, raising :class:`PoleError` when either
gamma sits on a pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from legendre_params.errors import DomainError, LegendreError, PoleError
from legendre_params.legendre import (
    CLOSED_FORM,
    EvalResult,
    ParamPoint,
    check_off_cut,
    exp_i_pi,
    legendre_p,
    legendre_q,
    whipple_argument,
    z2m1_pow,
)
from legendre_params.scalars import (
    HalfInteger,
    digamma,
    digamma_diff_sum,
    gamma,
    nonpositive_integer,
    recip_gamma,
)

TARGETS = ("P", "Q")
WRT = ("degree", "order")
_EPS = 2.220446049250313e-16
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)


@dataclass(frozen=True)
class DerivRequest:
    """One parameter derivative to evaluate.

    ``fixed_param`` is the free (non-differentiated) parameter: the ``nu`` of
    ``P_{nu-1/2}^mu`` for order derivatives, the order ``mu`` for degree
    derivatives.  ``eval_int`` and ``sign`` pin the other parameter at
    ``sign * eval_int``.
    """

    target: str
    with_respect_to: str
    fixed_param: complex
    eval_int: int
    sign: int
    z: complex

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.with_respect_to not in WRT:
            raise ValueError(f"with_respect_to must be one of {WRT}, got {self.with_respect_to!r}")
        if int(self.eval_int) != self.eval_int or self.eval_int < 0:
            raise ValueError(f"eval_int must be a nonnegative integer, got {self.eval_int!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        object.__setattr__(self, "eval_int", int(self.eval_int))
        object.__setattr__(self, "fixed_param", complex(self.fixed_param))
        object.__setattr__(self, "z", complex(self.z))
        check_off_cut(self.z)

    @property
    def eval_point(self) -> HalfInteger:
        """Exact value of the differentiated Legendre parameter at evaluation."""
        if self.with_respect_to == "order":
            return HalfInteger(2 * self.sign * self.eval_int)
        return HalfInteger(2 * self.sign * self.eval_int - 1)

    @property
    def degree(self) -> complex:
        """Legendre degree at the evaluation point."""
        if self.with_respect_to == "order":
            return self.fixed_param - 0.5
        return complex(float(self.eval_point))

    @property
    def order(self) -> complex:
        """Legendre order at the evaluation point."""
        if self.with_respect_to == "order":
            return complex(float(self.eval_point))
        return self.fixed_param

    @property
    def family(self) -> str:
        return f"d{self.target}/d{'mu' if self.with_respect_to == 'order' else 'nu'}"


class _Acc:
    """Running sum of ``coef * f`` with its propagated error estimate."""

    def __init__(self):
        self.value = 0j
        self.err = 0.0

    def add(self, coef: complex, result: EvalResult) -> None:
        term = coef * result.value
        self.value += term
        self.err += abs(coef) * result.err_estimate + 4.0 * _EPS * abs(term)


def _p(nu, mu, z) -> EvalResult:
    return legendre_p(ParamPoint(nu, mu, z))


def _q(nu, mu, z) -> EvalResult:
    return legendre_q(ParamPoint(nu, mu, z))


def _require(req: DerivRequest, target: str, wrt: str) -> None:
    if req.target != target or req.with_respect_to != wrt:
        raise ValueError(f"request is {req.family}, expected d{target}/d{wrt}")


def _check_gamma(x: complex, what: str) -> None:
    if nonpositive_integer(x) is not None:
        raise PoleError(f"{what}: Gamma({x}) is at a pole")


def _order_ratio(nu: complex, m: int, sign: int) -> complex:
    """``Gamma(nu - m + 1/2) / Gamma(nu - sign*m + 1/2)``."""
    a0 = nu - m + 0.5
    _check_gamma(a0, "denominator of the gamma ratio")
    _check_gamma(nu - sign * m + 0.5, "numerator of the gamma ratio")
    if sign == 1:
        return 1.0 + 0j
    # Gamma(a0) / Gamma(a0 + 2m) = 1 / (a0)_{2m}
    prod = 1.0 + 0j
    for j in range(2 * m):
        prod *= a0 + j
    return 1.0 / prod


def _integer_order_sum(acc: _Acc, evaluator, nu: complex, m: int, sign: int, z: complex) -> None:
    # sign m! sum_{k<m} (-1)^(k-m) (z^2-1)^((k-m)/2) / (k! (m-k) 2^(k-m+1)) F_{nu+k-m-1/2}^k(z)
    for k in range(m):
        coef = (sign * math.factorial(m) * (-1) ** (k - m) * z2m1_pow(z, 0.5 * (k - m))
                * 2.0 ** (m - k - 1) / (math.factorial(k) * (m - k)))
        acc.add(coef, evaluator(nu + k - m - 0.5, k, z))


def dq_dorder(req: DerivRequest) -> EvalResult:
    """``d/dmu Q_{nu-1/2}^mu(z)`` at ``mu = sign * m``."""
    _require(req, "Q", "order")
    nu, m, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    ratio = _order_ratio(nu, m, s)
    acc = _Acc()
    acc.add(1j * math.pi + digamma(nu - s * m + 0.5), _q(nu - 0.5, m, z))
    _integer_order_sum(acc, _q, nu, m, s, z)
    return EvalResult(ratio * acc.value, CLOSED_FORM, abs(ratio) * acc.err)


def dp_dorder(req: DerivRequest) -> EvalResult:
    """``d/dmu P_{nu-1/2}^mu(z)`` at ``mu = sign * m``."""
    _require(req, "P", "order")
    nu, m, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    ratio = _order_ratio(nu, m, s)
    acc = _Acc()
    acc.add(1.0, _q(nu - 0.5, m, z))
    acc.add(digamma(nu - s * m + 0.5), _p(nu - 0.5, m, z))
    _integer_order_sum(acc, _p, nu, m, s, z)
    return EvalResult(ratio * acc.value, CLOSED_FORM, abs(ratio) * acc.err)


def dp_ddegree(req: DerivRequest, digamma_route: str = "sum") -> EvalResult:
    """``d/dnu P_{nu-1/2}^mu(z)`` at ``nu = sign * n``.

    ``digamma_route="sum"`` evaluates ``psi(mu+n+1/2) - psi(mu-n+1/2)`` as a
    finite rational sum, ``"direct"`` with two digamma calls.
    """
    _require(req, "P", "degree")
    mu, n, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    if n == 0:
        # P_{nu-1/2} is even in nu
        return EvalResult(0j, CLOSED_FORM, 0.0)
    if digamma_route == "sum":
        psi_diff = digamma_diff_sum(mu, n)
    elif digamma_route == "direct":
        psi_diff = digamma(mu + n + 0.5) - digamma(mu - n + 0.5)
    else:
        raise ValueError(f"digamma_route must be 'sum' or 'direct', got {digamma_route!r}")
    _check_gamma(mu - n + 0.5, "dP/dnu prefactor")
    g = gamma(mu - n + 0.5)
    acc = _Acc()
    acc.add(psi_diff, _p(n - 0.5, mu, z))
    for k in range(n):
        coef = (math.factorial(n) * g * z2m1_pow(z, 0.5 * (n - k)) * recip_gamma(mu + n - 2 * k + 0.5)
                * 2.0 ** (n - k - 1) / (math.factorial(k) * (n - k)))
        acc.add(coef, _p(k - 0.5, mu + n - k, z))
    return EvalResult(s * acc.value, CLOSED_FORM, acc.err)


def dp_ddegree_negative_order(mu, n: int, sign: int, z) -> EvalResult:
    """``d/dnu P_{nu-1/2}^{-mu}(z)`` at ``nu = sign * n``, in the ``-mu`` form.

    Same quantity as ``dp_ddegree`` with order ``-mu``, written with the
    digamma difference and gammas of the negated order.
    """
    req = DerivRequest("P", "degree", -complex(mu), n, sign, z)
    mu, z = complex(mu), req.z
    if n == 0:
        return EvalResult(0j, CLOSED_FORM, 0.0)
    psi_diff = digamma(mu - n + 0.5) - digamma(mu + n + 0.5)
    _check_gamma(mu + n + 0.5, "dP/dnu (-mu form) prefactor")
    acc = _Acc()
    acc.add(psi_diff, _p(n - 0.5, -mu, z))
    rg = recip_gamma(mu + n + 0.5)
    for k in range(n):
        _check_gamma(mu - n + 2 * k + 0.5, "dP/dnu (-mu form) sum")
        coef = (math.factorial(n) * rg * gamma(mu - n + 2 * k + 0.5) * z2m1_pow(z, 0.5 * (n - k))
                * 2.0 ** (n - k - 1) / (math.factorial(k) * (n - k)))
        acc.add(coef, _p(k - 0.5, -mu + n - k, z))
    return EvalResult(sign * acc.value, CLOSED_FORM, acc.err)


def dq_ddegree(req: DerivRequest) -> EvalResult:
    """``d/dnu Q_{nu-1/2}^mu(z)`` at ``nu = sign * n``; needs ``Re z > 0``."""
    _require(req, "Q", "degree")
    mu, n, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    if z.real <= 0.0:
        raise DomainError("the Whipple-argument term is only established for Re(z) > 0")
    _check_gamma(mu - n + 0.5, "dQ/dnu prefactor")
    x = whipple_argument(z)
    acc = _Acc()
    lead = -_SQRT_HALF_PI * exp_i_pi(mu) * gamma(mu - n + 0.5) * z2m1_pow(z, -0.25)
    acc.add(lead, _q(mu - 0.5, n, x))
    for k in range(n):
        coef = (s * math.factorial(n) * z2m1_pow(z, 0.5 * (n - k)) * 2.0 ** (n - k - 1)
                / (math.factorial(k) * (n - k)))
        acc.add(coef, _q(k - 0.5, mu + k - n, z))
    return EvalResult(acc.value, CLOSED_FORM, acc.err)


_DISPATCH = {
    ("Q", "order"): dq_dorder,
    ("P", "order"): dp_dorder,
    ("P", "degree"): dp_ddegree,
    ("Q", "degree"): dq_ddegree,
}


def evaluate(req: DerivRequest) -> EvalResult:
    """Closed-form derivative for any request."""
    return _DISPATCH[req.target, req.with_respect_to](req)


def baseline(req: DerivRequest):
    """The Legendre function being differentiated, as a function of the
    differentiated parameter (``mu`` or the ``nu`` of ``nu - 1/2``)."""
    z, fixed = req.z, req.fixed_param
    if req.target == "P":
        evaluator = legendre_p
    else:
        evaluator = legendre_q
    if req.with_respect_to == "order":
        return lambda mu: evaluator(ParamPoint(fixed - 0.5, mu, z)).value
    return lambda nu: evaluator(ParamPoint(nu - 0.5, fixed, z)).value


# Displayed special cases, transcribed term by term (no shared sums).

def _w(z, power):
    return z2m1_pow(complex(z), power)


def displayed_dq_dorder(nu, sign_m: int, z) -> complex:
    nu, z = complex(nu), complex(z)
    if sign_m == 0:
        return (1j * math.pi + digamma(nu + 0.5)) * _q(nu - 0.5, 0, z).value
    if sign_m == 1:
        return ((1j * math.pi + digamma(nu - 0.5)) * _q(nu - 0.5, 1, z).value
                - _w(z, -0.5) * _q(nu - 1.5, 0, z).value)
    if sign_m == -1:
        lhs = ((1j * math.pi + digamma(nu + 1.5)) * _q(nu - 0.5, 1, z).value
               + _w(z, -0.5) * _q(nu - 1.5, 0, z).value)
        return lhs / (nu * nu - 0.25)
    raise ValueError("displayed cases exist for mu in {0, +1, -1}")


def displayed_dp_ddegree(mu, sign_n: int, z) -> complex:
    mu, z = complex(mu), complex(z)
    if sign_n == 0:
        return 0j
    if sign_n in (1, -1):
        lhs = 2.0 * mu * _p(0.5, mu, z).value + _w(z, 0.5) * _p(-0.5, mu + 1.0, z).value
        return lhs / (sign_n * (mu * mu - 0.25))
    raise ValueError("displayed cases exist for nu in {0, +1, -1}")


def displayed_dq_ddegree(mu, sign_n: int, z) -> complex:
    mu, z = complex(mu), complex(z)
    x = whipple_argument(z)
    lead = -_SQRT_HALF_PI * exp_i_pi(mu) * _w(z, -0.25)
    if sign_n == 0:
        return lead * gamma(mu + 0.5) * _q(mu - 0.5, 0, x).value
    if sign_n in (1, -1):
        return (lead * gamma(mu - 0.5) * _q(mu - 0.5, 1, x).value
                + sign_n * _w(z, 0.5) * _q(-0.5, mu - 1.0, z).value)
    raise ValueError("displayed cases exist for nu in {0, +1, -1}")


def displayed_dp_dorder(nu, sign_m: int, z) -> complex:
    nu, z = complex(nu), complex(z)
    if sign_m == 0:
        return _q(nu - 0.5, 0, z).value + digamma(nu + 0.5) * _p(nu - 0.5, 0, z).value
    if sign_m == 1:
        return (_q(nu - 0.5, 1, z).value + digamma(nu - 0.5) * _p(nu - 0.5, 1, z).value
                - _w(z, -0.5) * _p(nu - 1.5, 0, z).value)
    if sign_m == -1:
        lhs = (_q(nu - 0.5, 1, z).value + digamma(nu + 1.5) * _p(nu - 0.5, 1, z).value
               + _w(z, -0.5) * _p(nu - 1.5, 0, z).value)
        return lhs / (nu * nu - 0.25)
    raise ValueError("displayed cases exist for mu in {0, +1, -1}")


_DISPLAYED = {
    ("Q", "order"): displayed_dq_dorder,
    ("P", "degree"): displayed_dp_ddegree,
    ("Q", "degree"): displayed_dq_ddegree,
    ("P", "order"): displayed_dp_dorder,
}

SPECIAL_CASE_FREE = (0.3, 0.7, 1.4, 2.6)
SPECIAL_CASE_Z = (1.1, 1.5, 2.0, 5.0)
SPECIAL_CASE_TOL = 1e-12


@dataclass
class SpecialCase:
    request: DerivRequest
    general: complex | None
    displayed: complex | None
    discrepancy: float | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.discrepancy is not None and self.discrepancy <= SPECIAL_CASE_TOL


@dataclass
class SpecialCaseReport:
    cases: list[SpecialCase] = field(default_factory=list)

    @property
    def max_discrepancy(self) -> float:
        return max((c.discrepancy for c in self.cases if c.discrepancy is not None), default=0.0)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def special_case_requests(free_values=SPECIAL_CASE_FREE, z_values=SPECIAL_CASE_Z) -> list[DerivRequest]:
    reqs = []
    for target, wrt in _DISPLAYED:
        for signed in (0, 1, -1):
            for free in free_values:
                for z in z_values:
                    reqs.append(DerivRequest(target, wrt, free, abs(signed), signed or 1, z))
    return reqs


def special_case_suite(free_values=SPECIAL_CASE_FREE, z_values=SPECIAL_CASE_Z) -> SpecialCaseReport:
    """Compare each general formula with the displayed form of its low cases
    (index 0 and +-1) on a grid; discrepancies are relative, or absolute when
    the displayed value is exactly zero."""
    report = SpecialCaseReport()
    for req in special_case_requests(free_values, z_values):
        signed = req.sign * req.eval_int
        try:
            general = evaluate(req).value
            displayed = _DISPLAYED[req.target, req.with_respect_to](req.fixed_param, signed, req.z)
        except LegendreError as exc:
            report.cases.append(SpecialCase(req, None, None, None, f"{type(exc).__name__}: {exc}"))
            continue
        diff = abs(general - displayed)
        disc = diff / abs(displayed) if displayed != 0 else diff
        report.cases.append(SpecialCase(req, general, displayed, disc))
    return report
