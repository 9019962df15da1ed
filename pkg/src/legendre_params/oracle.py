"""Independent numerical ground truth for the closed forms.

Two kinds of oracle:

* Laplace-type quadrature of ``exp(-z t) B(t) t**(alpha - 1/2)`` over
  ``(0, inf)`` for ``B`` a modified Bessel function (or its order derivative
  at an integer), which reproduces P and Q through their integral
  representations;
* Richardson-extrapolated central differences of the baseline evaluators in
  degree or order.

:func:`conformance_run` drives both over a grid of derivative requests.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

from scipy import integrate

from legendre_params import bessel
from legendre_params.errors import ConvergenceError, DomainError, EvaluationError, LegendreError
from legendre_params.legendre import (
    FINITE_DIFFERENCE,
    QUADRATURE,
    EvalResult,
    ParamPoint,
    exp_i_pi,
    legendre_p,
    legendre_q,
    whipple_argument,
    z2m1_pow,
)
from legendre_params.param_derivs import DerivRequest, baseline, evaluate
from legendre_params.scalars import digamma, gamma, recip_gamma

FD_TOL = 1e-6
QUAD_TOL = 1e-7
_EPS = 2.220446049250313e-16
# ln(1e18): the tail is cut where the envelope falls below 1e-18 of its peak
_TAIL_DECADES = 18.0 * math.log(10.0)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    max_subdivisions: int = 60
    tail_cut: float | None = None

    def __post_init__(self):
        if not 1e-14 <= self.rel_tol <= 1e-6:
            raise ValueError(f"rel_tol must lie in [1e-14, 1e-6], got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        if self.tail_cut is not None and not (0.0 < self.tail_cut < math.inf):
            raise ValueError(f"tail_cut must be finite and positive, got {self.tail_cut}")


def _tail_cut(rate: float, power: float) -> float:
    """Point past which ``exp(-rate t) t**power`` is below 1e-18 of its peak."""
    t_ref = power / rate if power > 0 else min(1.0, 1.0 / rate)
    log_env = lambda t: -rate * t + power * math.log(t)
    peak = log_env(t_ref)
    t = t_ref + 1.0 / rate
    while log_env(t) - peak > -_TAIL_DECADES:
        t *= 1.5
    return t


def _quad_part(f, a: float, b: float, spec: QuadratureSpec) -> tuple[float, float]:
    # QUADPACK refuses epsrel below 50 eps with epsabs = 0
    value, abserr = integrate.quad(f, a, b, epsabs=0.0, epsrel=max(spec.rel_tol, 50.0 * _EPS),
                                   limit=spec.max_subdivisions)
    return value, abserr


def _laplace_integral(kernel, shift: float, alpha: complex, z: complex, spec: QuadratureSpec) -> EvalResult:
    """``int_0^inf exp(-(z - shift) t) kernel(t) t**(alpha - 1/2) dt``.

    ``kernel`` is an exponentially scaled Bessel-type function and ``shift``
    the growth rate removed by the scaling (+1 for I, -1 for K).
    """
    rate = z.real - shift
    a = alpha - 0.5
    b = z - shift

    def integrand(t: float) -> complex:
        return kernel(t) * cmath.exp(-b * t + a * math.log(t))

    cut = spec.tail_cut or _tail_cut(rate, a.real - 0.5)
    pieces = [(0.0, min(1.0, cut))]
    if cut > 1.0:
        pieces.append((1.0, cut))
    is_real = alpha.imag == 0.0 and z.imag == 0.0
    total = 0j
    err = 0.0
    for lo, hi in pieces:
        parts = [lambda t: integrand(t).real]
        if not is_real:
            parts.append(lambda t: integrand(t).imag)
        values = []
        for part in parts:
            with _quad_warnings() as caught:
                value, abserr = _quad_part(part, lo, hi, spec)
            if caught and abserr > 10.0 * spec.rel_tol * max(abs(value), 1e-300):
                raise ConvergenceError(
                    f"quadrature on [{lo}, {hi}] did not converge: {caught[0].message}")
            values.append(value)
            err += abserr
        total += complex(values[0], values[1] if len(values) > 1 else 0.0)
    # the neglected tail behaves like its integrand times 1/rate
    err += 2.0 * abs(integrand(cut)) / rate
    return EvalResult(total, QUADRATURE, err)


class _quad_warnings:
    """Collect QUADPACK's IntegrationWarning instead of printing it."""

    def __enter__(self):
        self._ctx = warnings.catch_warnings(record=True)
        caught = self._ctx.__enter__()
        warnings.simplefilter("always", integrate.IntegrationWarning)
        return caught

    def __exit__(self, *exc):
        return self._ctx.__exit__(*exc)


def quad_ik(alpha, order: float, z, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``int_0^inf exp(-z t) K_order(t) t**(alpha - 1/2) dt``."""
    alpha, z = complex(alpha), complex(z)
    if z.real <= -1.0:
        raise DomainError(f"K-integral diverges at infinity for Re(z) = {z.real} <= -1")
    if alpha.real + 0.5 - abs(order) <= 0.0:
        raise DomainError(f"K-integral diverges at 0: Re(alpha) + 1/2 - |order| = "
                          f"{alpha.real + 0.5 - abs(order)} <= 0")
    return _laplace_integral(lambda t: bessel.bessel_k(order, t, scaled=True), -1.0, alpha, z, spec)


def quad_ii(alpha, order: float, z, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``int_0^inf exp(-z t) I_order(t) t**(alpha - 1/2) dt``."""
    alpha, z = complex(alpha), complex(z)
    if z.real <= 1.0:
        raise DomainError(f"I-integral diverges at infinity for Re(z) = {z.real} <= 1")
    if alpha.real + order + 0.5 <= 0.0:
        raise DomainError(f"I-integral diverges at 0: Re(alpha) + order + 1/2 = "
                          f"{alpha.real + order + 0.5} <= 0")
    return _laplace_integral(lambda t: bessel.bessel_i(order, t, scaled=True), 1.0, alpha, z, spec)


def ik_closed_forms(alpha, order: float, z) -> tuple[complex, complex]:
    """The two Legendre-function evaluations of the K-integral::

        sqrt(pi/2) G(a-v+1/2) G(a+v+1/2) (z^2-1)^(-a/2) P_{v-1/2}^{-a}(z)
        G(a-v+1/2) (z^2-1)^(-a/2-1/4) e^{-i pi v} Q_{a-1/2}^v(z / sqrt(z^2-1))
    """
    a, v, z = complex(alpha), float(order), complex(z)
    g1 = gamma(a - v + 0.5)
    first = (math.sqrt(0.5 * math.pi) * g1 * gamma(a + v + 0.5) * z2m1_pow(z, -0.5 * a)
             * legendre_p(ParamPoint(v - 0.5, -a, z)).value)
    x = whipple_argument(z)
    second = (g1 * z2m1_pow(z, -0.5 * a - 0.25) * exp_i_pi(-v)
              * legendre_q(ParamPoint(a - 0.5, v, x)).value)
    return first, second


def ii_closed_forms(alpha, order: float, z) -> tuple[complex, complex]:
    """The two Legendre-function evaluations of the I-integral::

        sqrt(2/pi) e^{-i pi a} (z^2-1)^(-a/2) Q_{v-1/2}^a(z)
        G(a+v+1/2) (z^2-1)^(-a/2-1/4) P_{a-1/2}^{-v}(z / sqrt(z^2-1))
    """
    a, v, z = complex(alpha), float(order), complex(z)
    first = (math.sqrt(2.0 / math.pi) * exp_i_pi(-a) * z2m1_pow(z, -0.5 * a)
             * legendre_q(ParamPoint(v - 0.5, a, z)).value)
    x = whipple_argument(z)
    second = (gamma(a + v + 0.5) * z2m1_pow(z, -0.5 * a - 0.25)
              * legendre_p(ParamPoint(a - 0.5, -v, x)).value)
    return first, second


def quad_legendre_p(nu, mu, z, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``P_nu^mu(z)`` by quadrature.

    Uses the K-integral when ``nu`` is real and ``1/2 - Re mu > |nu + 1/2|``,
    otherwise the I-integral at the Whipple argument (needs ``mu`` real,
    ``Re(nu - mu) > -1`` and ``Re w(z) > 1``).
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if nu.imag == 0.0 and 0.5 - mu.real > abs(nu.real + 0.5) and z.real > -1.0:
        a, v = -mu, nu.real + 0.5
        r = quad_ik(a, v, z, spec)
        scale = (math.sqrt(0.5 * math.pi) * gamma(a - v + 0.5) * gamma(a + v + 0.5)
                 * z2m1_pow(z, -0.5 * a))
    elif mu.imag == 0.0 and z.real > 0.0:
        zw = whipple_argument(z)
        a, v = nu + 0.5, -mu.real
        r = quad_ii(a, v, zw, spec)
        scale = gamma(a + v + 0.5) * z2m1_pow(zw, -0.5 * a - 0.25)
    else:
        raise DomainError(f"no convergent integral representation of P for nu={nu}, mu={mu}, z={z}")
    return EvalResult(r.value / scale, QUADRATURE, r.err_estimate / abs(scale))


def quad_legendre_q(nu, mu, z, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``Q_nu^mu(z)`` by quadrature of the I-integral (``nu`` real,
    ``Re(nu + mu) > -1``, ``Re z > 1``)."""
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if nu.imag != 0.0:
        raise DomainError("the I-integral needs a real degree")
    a, v = mu, nu.real + 0.5
    r = quad_ii(a, v, z, spec)
    scale = math.sqrt(2.0 / math.pi) * exp_i_pi(-a) * z2m1_pow(z, -0.5 * a)
    return EvalResult(r.value / scale, QUADRATURE, r.err_estimate / abs(scale))


# Derivatives differentiated under the integral sign.

def _integrable_at_zero(power: complex, m: int) -> bool:
    # t**(power - 1/2) against a kernel ~ t**(-m) (log t for m = 0)
    return power.real + 0.5 - m > 0.0


def quad_dq_dorder(req: DerivRequest, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``d/dmu Q_{nu-1/2}^mu(z)`` at ``mu = +-m`` from the K-representation
    of Q at the Whipple argument, with the K order derivative inside."""
    nu, m, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    if req.target != "Q" or req.with_respect_to != "order":
        raise ValueError("request is not dQ/dmu")
    if not _integrable_at_zero(nu, m) or z.real <= 0.0:
        raise DomainError("K-representation does not converge for this request")
    x = whipple_argument(z)
    i1 = _laplace_integral(lambda t: bessel.bessel_k(m, t, scaled=True), -1.0, nu, x, spec)
    i2 = _laplace_integral(lambda t: bessel.dk_dorder_at_int(m, s, t, scaled=True), -1.0, nu, x, spec)
    a = nu - s * m + 0.5
    pref = z2m1_pow(z, -0.5 * nu - 0.25) * (-1) ** m * recip_gamma(a)
    c1 = pref * (1j * math.pi + digamma(a))
    value = c1 * i1.value + pref * i2.value
    return EvalResult(value, QUADRATURE, abs(c1) * i1.err_estimate + abs(pref) * i2.err_estimate)


def quad_dp_ddegree(req: DerivRequest, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``d/dnu P_{nu-1/2}^mu(z)`` at ``nu = +-n`` from the K-representation of
    ``P^{-alpha}`` with ``alpha = -mu``; converges only for ``Re mu < 1/2 - n``."""
    order, n, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    if req.target != "P" or req.with_respect_to != "degree":
        raise ValueError("request is not dP/dnu")
    alpha = -order
    if not _integrable_at_zero(alpha, n) or z.real <= -1.0:
        raise DomainError("K-representation does not converge for this request")
    j1 = _laplace_integral(lambda t: bessel.bessel_k(n, t, scaled=True), -1.0, alpha, z, spec)
    j2 = _laplace_integral(lambda t: bessel.dk_dorder_at_int(n, s, t, scaled=True), -1.0, alpha, z, spec)
    rg = recip_gamma(alpha - n + 0.5) * recip_gamma(alpha + n + 0.5)
    pref = math.sqrt(2.0 / math.pi) * z2m1_pow(z, 0.5 * alpha)
    c1 = pref * rg * (digamma(alpha - s * n + 0.5) - digamma(alpha + s * n + 0.5))
    c2 = pref * rg
    value = c1 * j1.value + c2 * j2.value
    return EvalResult(value, QUADRATURE, abs(c1) * j1.err_estimate + abs(c2) * j2.err_estimate)


def quad_dq_ddegree(req: DerivRequest, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``d/dnu Q_{nu-1/2}^mu(z)`` at ``nu = +-n`` from the I-representation
    with the I order derivative inside; needs ``Re z > 1``."""
    mu, n, s, z = req.fixed_param, req.eval_int, req.sign, req.z
    if req.target != "Q" or req.with_respect_to != "degree":
        raise ValueError("request is not dQ/dnu")
    if not _integrable_at_zero(mu, n) or z.real <= 1.0:
        raise DomainError("I-representation does not converge for this request")
    j = _laplace_integral(lambda t: bessel.di_dorder_at_int(n, s, t, scaled=True), 1.0, mu, z, spec)
    pref = math.sqrt(0.5 * math.pi) * exp_i_pi(mu) * z2m1_pow(z, 0.5 * mu)
    return EvalResult(pref * j.value, QUADRATURE, abs(pref) * j.err_estimate)


QUAD_ORACLES = {
    ("Q", "order"): quad_dq_dorder,
    ("P", "degree"): quad_dp_ddegree,
    ("Q", "degree"): quad_dq_ddegree,
}


def quad_oracle_applies(req: DerivRequest) -> bool:
    key = (req.target, req.with_respect_to)
    if key not in QUAD_ORACLES:
        return False
    if key == ("Q", "order"):
        return _integrable_at_zero(req.fixed_param, req.eval_int) and req.z.real > 0.0
    if key == ("P", "degree"):
        return _integrable_at_zero(-req.fixed_param, req.eval_int) and req.z.real > -1.0
    return _integrable_at_zero(req.fixed_param, req.eval_int) and req.z.real > 1.0


def _check_fd_args(h: float, levels: int) -> None:
    if not 1e-6 <= h <= 1e-1:
        raise ValueError(f"h must lie in [1e-6, 1e-1], got {h}")
    if levels < 0:
        raise ValueError("levels must be nonnegative")


def _guarded(f):
    def call(x):
        try:
            return complex(f(x))
        except LegendreError:
            raise
        except Exception as exc:
            raise EvaluationError(f"f({x}) failed: {exc}") from exc
    return call


def _richardson(estimates: list[complex]) -> tuple[complex, float]:
    """Extrapolate estimates taken at steps ``h * 2**j`` whose error is even
    in ``h``.  Stops once a correction grows; returns (value, last correction)."""
    best = estimates[0]
    best_corr = math.inf
    column = estimates
    for k in range(1, len(estimates)):
        factor = 4.0 ** k - 1.0
        column = [column[j] + (column[j] - column[j + 1]) / factor for j in range(len(column) - 1)]
        corr = abs(column[0] - best)
        if corr > best_corr:
            break
        best, best_corr = column[0], corr
    return best, best_corr


def fd_param_derivative(f, at: float, h: float = 1e-3, levels: int = 2) -> EvalResult:
    """Central difference of ``f`` at ``at`` with Richardson extrapolation.

    Differences use the steps ``h * 2**j`` for ``j = 0..levels``; each
    extrapolation level removes the next even power of the step.  The ladder
    stops early once a correction grows instead of shrinking, and the last
    correction used is reported as the error estimate.
    """
    _check_fd_args(h, levels)
    call = _guarded(f)
    diffs = []
    for j in range(levels + 1):
        step = h * 2 ** j
        diffs.append((call(at + step) - call(at - step)) / (2.0 * step))
    if levels == 0:
        return EvalResult(diffs[0], FINITE_DIFFERENCE, _EPS * abs(diffs[0]) / h)
    value, err = _richardson(diffs)
    return EvalResult(value, FINITE_DIFFERENCE, err)


def fd_neighbour_average(f, at: float, h: float = 1e-3, levels: int = 2) -> EvalResult:
    """``f(at)`` rebuilt from the symmetric averages ``(f(at+s) + f(at-s)) / 2``
    alone, extrapolated like :func:`fd_param_derivative`.  Never calls
    ``f(at)``, so it exposes evaluators that are discontinuous at ``at``."""
    _check_fd_args(h, levels)
    call = _guarded(f)
    means = []
    for j in range(levels + 1):
        step = h * 2 ** j
        means.append(0.5 * (call(at + step) + call(at - step)))
    if levels == 0:
        return EvalResult(means[0], FINITE_DIFFERENCE, abs(means[0]) * h)
    value, err = _richardson(means)
    return EvalResult(value, FINITE_DIFFERENCE, err)


@dataclass
class CaseResult:
    fields: tuple
    request: DerivRequest | None = None
    closed_form: EvalResult | None = None
    fd: EvalResult | None = None
    quadrature: EvalResult | None = None
    scale: float = 0.0
    error: str | None = None
    fd_tol: float = FD_TOL
    quad_tol: float = QUAD_TOL

    @staticmethod
    def relative(value: complex, oracle: complex) -> float:
        return abs(value - oracle) / max(abs(oracle), 1e-300)

    def _agrees(self, oracle: EvalResult | None, tol: float) -> bool:
        if oracle is None:
            return True
        diff = abs(self.closed_form.value - oracle.value)
        # relative test, with the function's own size as floor when the
        # derivative itself vanishes
        return diff <= tol * max(abs(oracle.value), abs(self.closed_form.value)) or diff <= tol * self.scale

    @property
    def fd_discrepancy(self) -> float | None:
        if self.closed_form is None or self.fd is None:
            return None
        return self.relative(self.closed_form.value, self.fd.value)

    @property
    def quad_discrepancy(self) -> float | None:
        if self.closed_form is None or self.quadrature is None:
            return None
        return self.relative(self.closed_form.value, self.quadrature.value)

    @property
    def passed(self) -> bool:
        if self.error is not None or self.closed_form is None:
            return False
        return self._agrees(self.fd, self.fd_tol) and self._agrees(self.quadrature, self.quad_tol)


@dataclass
class ConformanceReport:
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def __len__(self) -> int:
        return len(self.cases)


REQUEST_FIELDS = ("target", "with_respect_to", "fixed_param", "eval_int", "sign", "z")


def request_fields(entry) -> tuple:
    """``(target, with_respect_to, fixed_param, eval_int, sign, z)`` from a
    DerivRequest, a mapping with those keys (sign defaults to +1) or a tuple."""
    if isinstance(entry, DerivRequest):
        return tuple(getattr(entry, f) for f in REQUEST_FIELDS)
    if isinstance(entry, dict):
        return tuple(entry.get(f, 1) if f == "sign" else entry[f] for f in REQUEST_FIELDS)
    fields = tuple(entry)
    if len(fields) != len(REQUEST_FIELDS):
        raise ValueError(f"expected {len(REQUEST_FIELDS)} request fields, got {len(fields)}")
    return fields


def check_case(entry, spec: QuadratureSpec = QuadratureSpec(), fd_tol: float = FD_TOL,
               quad_tol: float = QUAD_TOL, h: float = 1e-3, levels: int = 2,
               use_quadrature: bool = True) -> CaseResult:
    """Run one grid entry.  Requests that cannot even be built (an argument
    on the cut, say) come back as a failed case, not an exception."""
    case = CaseResult(request_fields(entry), fd_tol=fd_tol, quad_tol=quad_tol)
    try:
        req = entry if isinstance(entry, DerivRequest) else DerivRequest(*case.fields)
        case.request = req
        case.closed_form = evaluate(req)
        f = baseline(req)
        at = float(req.sign * req.eval_int)
        case.scale = abs(f(at))
        case.fd = fd_param_derivative(f, at, h=h, levels=levels)
        if use_quadrature and quad_oracle_applies(req):
            case.quadrature = QUAD_ORACLES[req.target, req.with_respect_to](req, spec)
    except (LegendreError, OverflowError) as exc:
        case.error = f"{type(exc).__name__}: {exc}"
    return case


def conformance_run(grid, spec: QuadratureSpec = QuadratureSpec(), fd_tol: float = FD_TOL,
                    quad_tol: float = QUAD_TOL, **kwargs) -> ConformanceReport:
    """Closed form vs finite-difference (and, where the integral
    representation converges, quadrature) for every entry in ``grid``.

    Entries are DerivRequests or anything :func:`request_fields` accepts.
    Per-case failures are recorded, never raised.  Cases come back in grid
    order.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid must not be empty")
    return ConformanceReport([check_case(r, spec, fd_tol, quad_tol, **kwargs) for r in grid])


ACCEPTANCE_INTS = (0, 1, 2, 3)
ACCEPTANCE_FREE = (0.3, 0.7, 1.4, 2.6)
ACCEPTANCE_Z = (1.1, 1.5, 2.0, 5.0)


def default_grid() -> list[DerivRequest]:
    """All four families, m/n in 0..3, both signs, on the acceptance grid."""
    return [
        DerivRequest(target, wrt, free, k, sign, z)
        for target, wrt in (("Q", "order"), ("P", "degree"), ("Q", "degree"), ("P", "order"))
        for k in ACCEPTANCE_INTS
        for sign in (1, -1)
        for free in ACCEPTANCE_FREE
        for z in ACCEPTANCE_Z
    ]


def quadrature_grid() -> list[DerivRequest]:
    """Reduced grid on which the quadrature-differentiated oracles converge.

    dP/dnu needs a negative order (``Re mu < 1/2 - n``); the others need
    ``Re(free) > n - 1/2``.
    """
    grid = []
    for k in ACCEPTANCE_INTS:
        for sign in (1, -1):
            for z in (1.5, 2.0, 5.0):
                for free in ACCEPTANCE_FREE:
                    for target, wrt, param in (("Q", "order", free), ("P", "degree", -free),
                                               ("Q", "degree", free)):
                        req = DerivRequest(target, wrt, param, k, sign, z)
                        if quad_oracle_applies(req):
                            grid.append(req)
    return grid
