"""Fractional and integer moments of the extended distributions.

Three kinds of evaluation paths, deliberately redundant so that they can
be played against each other:

* power series in the distortion weights (both expansions),
* closed forms and scaling relations per baseline family,
* adaptive quadrature of x^r times the density (:mod:`moq.oracle`).

The series for the exponential baseline contains an inner alternating
binomial sum that loses digits catastrophically once indices reach the
several dozens; its conditioning is tracked term by term, and the
computation abandons the branch (or raises, if the caller pinned it)
rather than returning quietly wrong numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .baselines import Baseline, Exponential, GeneralizedWeibull, LogLogistic, Weibull
from .errors import ConditionViolated, DomainError, Nonconvergence
from .extended import ExtendedDistribution
from .family import ParameterVector, _SeriesStream
from .oracle import beta_fn, integrate_semiinfinite, log_gamma

__all__ = [
    "MomentResult",
    "moment_exponential",
    "moment_loglogistic",
    "moment_q2_loglogistic_closed",
    "moment_weibull_scaled",
    "moment_generalized_weibull",
    "moment_bound_check",
    "moment",
]

_EPS = 2.220446049250313e-16
_CANCEL_LIMIT = 1e12
_DEFAULT_MAX_TERMS = 200_000


@dataclass(frozen=True)
class MomentResult:
    """A moment value with provenance and an error estimate."""

    value: float
    method_used: str
    terms_used: int
    error_estimate: float


def _require_pmf(pv: ParameterVector, what: str):
    if not pv.pmf_ok:
        raise ConditionViolated(
            f"{what} requires sum(a) >= q and a_i <= 1 for i >= 2; got a = {pv.a}"
        )


def _alternating_binomial_inner(m: int, r: float) -> tuple[float, float]:
    """sum_{j=0}^{m-1} C(m-1, j) (-1)^j (j+1)^(-r-1), compensated.

    Returns (value, sum of absolute terms).  The second output is the
    cancellation mass: value / eps over it bounds the attainable relative
    accuracy.
    """
    total = 0.0
    comp = 0.0
    abssum = 0.0
    binom = 1.0
    for j in range(m):
        term = binom * (j + 1.0) ** (-r - 1.0)
        if j % 2 == 1:
            term = -term
        abssum += abs(term)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        binom *= (m - 1 - j) / (j + 1.0)
    return total, abssum


def _exp_series_at_zero(pv: ParameterVector, r: float, tol: float, max_terms: int) -> MomentResult:
    stream = _SeriesStream(pv, "at_zero")
    pref = math.exp(math.log(r) + log_gamma(r)) if r > 0 else 0.0  # r * Gamma(r)
    total = 0.0
    cancel_err = 0.0
    recent: list[float] = []
    m = 0
    while m < max_terms:
        m += 1
        w = stream.value(m)
        inner, abssum = _alternating_binomial_inner(m, r)
        term = pref * m * w * inner
        total += term
        cancel_err += pref * m * abs(w) * abssum * _EPS
        if abs(inner) > 0 and abssum / abs(inner) > _CANCEL_LIMIT and abs(term) > tol * 1e-3:
            raise Nonconvergence(
                f"inner alternating sum ill-conditioned at index {m} "
                f"(cancellation ratio {abssum / abs(inner):.2e})"
            )
        recent.append(abs(term))
        if len(recent) > pv.q + 1:
            recent.pop(0)
        if m >= pv.q + 2:
            # weight ratio bound times the (m+1)/m growth of the m factor
            rho = stream.envelope_ratio(m) * (m + 1) / m
            if rho < 1.0:
                tail = max(recent) * rho / (1.0 - rho)
                if tail < tol:
                    return MomentResult(total, "series_at_zero", m, tail + cancel_err)
    raise Nonconvergence(f"exponential moment series (at zero) exceeded {max_terms} terms")


def _exp_series_at_one(pv: ParameterVector, r: float, tol: float, max_terms: int) -> MomentResult:
    if not pv.series_at_one_ok:
        raise ConditionViolated(
            f"series about u = 1 requires sum(a) < 2q; got sum(a) = {pv.sum_a}, q = {pv.q}"
        )
    stream = _SeriesStream(pv, "at_one")
    pref = math.exp(math.log(r) + log_gamma(r))
    total = 0.0
    prev = math.inf
    m = 0
    while m < max_terms:
        m += 1
        term = pref * stream.value(m) * m ** (-r)
        if m % 2 == 0:
            term = -term
        total += term
        mag = abs(term)
        if m > pv.q + 2 and mag <= prev and mag < tol:
            return MomentResult(total, "series_at_one", m, mag)
        prev = mag
    raise Nonconvergence(f"exponential moment series (at one) exceeded {max_terms} terms")


def moment_exponential(
    pv: ParameterVector,
    r: float,
    tol: float = 1e-10,
    method: str = "auto",
    max_terms: int = _DEFAULT_MAX_TERMS,
) -> MomentResult:
    """E(X^r) for the extended unit exponential, r > 0.

    ``method`` is one of ``auto``, ``series_at_zero``, ``series_at_one``,
    ``quadrature``.  ``auto`` starts from the series with the smaller
    geometric ratio (always the one at zero) and falls back, first to the
    alternating series at one and then to quadrature, if the inner sums
    become too ill-conditioned to trust.
    """
    _require_pmf(pv, "exponential-baseline moment series")
    if r == 0.0:
        return MomentResult(1.0, "closed_form", 1, 0.0)
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"moment order must satisfy r > 0, got {r!r}")
    if method == "series_at_zero":
        return _exp_series_at_zero(pv, r, tol, max_terms)
    if method == "series_at_one":
        return _exp_series_at_one(pv, r, tol, max_terms)
    if method == "quadrature":
        return _moment_quadrature(Exponential(1.0), pv, r, tol)
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    try:
        return _exp_series_at_zero(pv, r, tol, max_terms)
    except Nonconvergence:
        pass
    if pv.series_at_one_ok:
        try:
            return _exp_series_at_one(pv, r, tol, max_terms)
        except Nonconvergence:
            pass
    return _moment_quadrature(Exponential(1.0), pv, r, tol)


def moment_loglogistic(
    pv: ParameterVector,
    r: float,
    tol: float = 1e-10,
    method: str = "auto",
    max_terms: int = _DEFAULT_MAX_TERMS,
) -> MomentResult:
    """E(X^r) for the extended standard log-logistic, |r| < 1.

    The series at zero has non-negative terms in the pmf regime, so unlike
    the exponential case it never cancels; the one at one alternates with
    an immediate next-term error bound.
    """
    _require_pmf(pv, "log-logistic-baseline moment series")
    if not (math.isfinite(r) and abs(r) < 1.0):
        raise DomainError(f"log-logistic moment series requires |r| < 1, got r = {r!r}")
    if r == 0.0:
        return MomentResult(1.0, "closed_form", 1, 0.0)
    if method not in ("auto", "series_at_zero", "series_at_one", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if method == "quadrature":
        return _moment_quadrature(LogLogistic(), pv, r, tol)
    if method == "series_at_one":
        return _ll_series_at_one(pv, r, tol, max_terms)
    # auto: the series at zero has the smaller ratio and non-negative terms
    return _ll_series_at_zero(pv, r, tol, max_terms)


def _ll_series_at_zero(pv: ParameterVector, r: float, tol: float, max_terms: int) -> MomentResult:
    stream = _SeriesStream(pv, "at_zero")
    total = 0.0
    recent: list[float] = []
    m = 0
    while m < max_terms:
        m += 1
        term = m * stream.value(m) * beta_fn(1.0 - r, m + r)
        total += term
        recent.append(abs(term))
        if len(recent) > pv.q + 1:
            recent.pop(0)
        if m >= pv.q + 2:
            # Beta(1-r, m+r) shrinks with m; the weight-envelope ratio and
            # the (m+1)/m growth of the m factor bound the rest
            rho = stream.envelope_ratio(m) * (m + 1) / m
            if rho < 1.0:
                tail = max(recent) * rho / (1.0 - rho)
                if tail < tol:
                    return MomentResult(total, "series_at_zero", m, tail)
    raise Nonconvergence(f"log-logistic moment series (at zero) exceeded {max_terms} terms")


def _ll_series_at_one(pv: ParameterVector, r: float, tol: float, max_terms: int) -> MomentResult:
    if not pv.series_at_one_ok:
        raise ConditionViolated(
            f"series about u = 1 requires sum(a) < 2q; got sum(a) = {pv.sum_a}, q = {pv.q}"
        )
    stream = _SeriesStream(pv, "at_one")
    total = 0.0
    prev = math.inf
    m = 0
    while m < max_terms:
        m += 1
        term = m * stream.value(m) * beta_fn(m - r, 1.0 + r)
        if m % 2 == 0:
            term = -term
        total += term
        mag = abs(term)
        if m > pv.q + 2 and mag <= prev and mag < tol:
            return MomentResult(total, "series_at_one", m, mag)
        prev = mag
    raise Nonconvergence(f"log-logistic moment series (at one) exceeded {max_terms} terms")


def moment_q2_loglogistic_closed(a1: float, a2: float, b1: float, b2: float, r: float) -> float:
    """Closed-form E(X^r) for the two-parameter extension of LogLogistic(b1, b2).

    Valid for any strictly positive (a1, a2) and |r| < b2; at r = 0 the
    analytic limit is 1.
    """
    for name, v in (("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be strictly positive, got {v!r}")
    if not (math.isfinite(r) and abs(r) < b2):
        raise DomainError(f"closed form requires |r| < b2 = {b2}, got r = {r!r}")
    if r == 0.0:
        return 1.0
    s = r / b2
    return (
        b1**r
        * ((a1 + a2) / 2.0) ** s
        * (r * math.pi / (b2 * math.sin(math.pi * s)))
        * (s * (a1 - a2) / (a1 + a2) + 1.0)
    )


def moment_weibull_scaled(
    pv: ParameterVector,
    scale: float,
    shape: float,
    r: float,
    tol: float = 1e-10,
    method: str = "auto",
) -> MomentResult:
    """E(X^r) for the extended Weibull(scale, shape), via the power-scaling
    relation to the extended unit exponential at order r/shape."""
    if not (math.isfinite(scale) and scale > 0 and math.isfinite(shape) and shape > 0):
        raise DomainError("scale and shape must be strictly positive")
    inner = moment_exponential(pv, r / shape, tol=tol / max(scale**r, 1.0), method=method)
    factor = scale**r
    return MomentResult(
        value=factor * inner.value,
        method_used=f"scaling({inner.method_used})",
        terms_used=inner.terms_used,
        error_estimate=factor * inner.error_estimate,
    )


def moment_generalized_weibull(
    pv: ParameterVector,
    scale: float,
    shape: float,
    shape2: float,
    m: int,
    tol: float = 1e-10,
) -> MomentResult:
    """Integer moment E(X^m) for the extended GeneralizedWeibull(scale, shape, shape2).

    Needs 1/shape and shape2 to be positive integers; the variable is then
    a polynomial transform of the extended unit exponential and the moment
    reduces to a double binomial combination of its integer moments.  The
    inner exponent is the plain binomial-expansion index, and the result is
    only trusted against quadrature (see the test suite).
    """
    _require_pmf(pv, "generalized-Weibull moment formula")
    if not (isinstance(m, (int,)) and m >= 1):
        raise DomainError(f"moment order must be a positive integer, got {m!r}")
    inv_shape = 1.0 / shape
    if abs(inv_shape - round(inv_shape)) > 1e-9 or round(inv_shape) < 1:
        raise DomainError(f"1/shape must be a positive integer, got 1/{shape}")
    if abs(shape2 - round(shape2)) > 1e-9 or round(shape2) < 1:
        raise DomainError(f"shape2 must be a positive integer, got {shape2!r}")
    m2 = int(round(inv_shape))
    b3 = int(round(shape2))

    exp_moments: dict[int, MomentResult] = {}

    def unit_exp_moment(j: int) -> MomentResult:
        if j == 0:
            return MomentResult(1.0, "closed_form", 1, 0.0)
        if j not in exp_moments:
            exp_moments[j] = moment_exponential(pv, float(j), tol=tol * 1e-3)
        return exp_moments[j]

    total = 0.0
    err = 0.0
    terms = 0
    for k in range(m * m2 + 1):
        sign = -1.0 if (m * m2 - k) % 2 else 1.0
        outer = math.comb(m * m2, k)
        for j in range(b3 * k + 1):
            c = sign * outer * math.comb(b3 * k, j)
            mom = unit_exp_moment(j)
            total += c * mom.value
            err += abs(c) * (mom.error_estimate + _EPS * abs(mom.value))
            terms = max(terms, mom.terms_used)
    factor = scale**m
    return MomentResult(factor * total, "binomial_transform", terms, factor * err)


def _moment_quadrature(baseline: Baseline, pv: ParameterVector, r: float, tol: float) -> MomentResult:
    ed = ExtendedDistribution(baseline, pv)
    res = integrate_semiinfinite(lambda x: x**r * ed.pdf(x), lo=0.0, tol=tol)
    return MomentResult(res.value, "quadrature", res.evaluations, res.error_estimate)


def moment_bound_check(
    pv: ParameterVector,
    baseline: Baseline,
    r: float,
    n_mc: int = 0,
    tol: float = 1e-10,
    seed: int = 0,
) -> tuple[float, float]:
    """Return (E|X|^r for the extension, a_1 * E|X0|^r for the baseline).

    In the pmf regime the first never exceeds the second.  With
    ``n_mc == 0`` both sides come from quadrature; with ``n_mc > 0`` the
    left side is a Monte-Carlo estimate from ``n_mc`` inverse-CDF draws.
    """
    _require_pmf(pv, "moment domination bound")
    rhs = pv.a[0] * integrate_semiinfinite(lambda x: x**r * baseline.pdf(x), lo=0.0, tol=tol).value
    if n_mc > 0:
        from .sampling import RandomSource, sample_inverse_cdf

        ed = ExtendedDistribution(baseline, pv)
        batch = sample_inverse_cdf(ed, RandomSource(seed), n_mc)
        lhs = float((batch.values**r).mean())
    else:
        ed = ExtendedDistribution(baseline, pv)
        lhs = integrate_semiinfinite(lambda x: x**r * ed.pdf(x), lo=0.0, tol=tol).value
    return lhs, rhs


def moment(
    baseline: Baseline,
    pv: ParameterVector,
    r: float,
    method: str = "auto",
    tol: float = 1e-10,
) -> MomentResult:
    """Front door used by the CLI: route a moment query to the right path.

    ``auto`` prefers the closed form where one exists (two-parameter
    log-logistic), then the series through the family's scaling relation,
    then quadrature.  Explicit methods: ``closed_form``, ``series_at_zero``,
    ``series_at_one``, ``scaling``, ``quadrature``.
    """
    if method == "quadrature":
        return _moment_quadrature(baseline, pv, r, tol)
    if isinstance(baseline, LogLogistic):
        closed_ok = pv.q == 2 and abs(r) < baseline.shape
        if method == "closed_form" or (method == "auto" and closed_ok):
            if not closed_ok:
                raise ConditionViolated(
                    f"closed form needs q = 2 and |r| < shape = {baseline.shape}; "
                    f"got q = {pv.q}, r = {r}"
                )
            val = moment_q2_loglogistic_closed(pv.a[0], pv.a[1], baseline.scale, baseline.shape, r)
            return MomentResult(val, "closed_form", 1, 4.0 * _EPS * abs(val))
        if abs(r) >= baseline.shape:
            raise DomainError(f"log-logistic moments need |r| < shape = {baseline.shape}")
        inner_method = method if method in ("series_at_zero", "series_at_one") else "auto"
        inner = moment_loglogistic(pv, r / baseline.shape, tol=tol, method=inner_method)
        factor = baseline.scale**r
        return MomentResult(
            factor * inner.value,
            f"scaling({inner.method_used})",
            inner.terms_used,
            factor * inner.error_estimate,
        )
    if isinstance(baseline, (Exponential, Weibull)):
        if method == "closed_form":
            raise DomainError(f"no closed form for {baseline.name} moments")
        shape = baseline.shape if isinstance(baseline, Weibull) else 1.0
        inner_method = method if method in ("series_at_zero", "series_at_one") else "auto"
        return moment_weibull_scaled(pv, baseline.scale, shape, r, tol=tol, method=inner_method)
    if isinstance(baseline, GeneralizedWeibull):
        r_int = int(round(r))
        if method in ("auto", "closed_form") and abs(r - r_int) < 1e-12 and r_int >= 1:
            try:
                return moment_generalized_weibull(
                    pv, baseline.scale, baseline.shape, baseline.shape2, r_int, tol=tol
                )
            except DomainError:
                if method == "closed_form":
                    raise
        if method not in ("auto",):
            raise DomainError(f"method {method!r} unavailable for {baseline.name}")
        return _moment_quadrature(baseline, pv, r, tol)
    raise DomainError(f"unsupported baseline {baseline!r}")
