"""The multi-parameter distortion function and its power-series expansions.

Everything in this package is built on one monotone map of the unit
interval.  For ``q`` strictly positive parameters ``a = (a_1, ..., a_q)``
with ``S = a_1 + ... + a_q``, the distortion is

    T(u) = q^q * u * prod_{i=2}^{q} (a_i + u - a_i*u) / (S - (S - q)*u)^q

which fixes 0 and 1 and increases strictly on [0, 1].  Applied to a
baseline CDF it yields the extended distribution of :mod:`moq.extended`;
for equal parameters ``a_i = a`` it collapses to the classical
Marshall-Olkin map ``u / (a + (1 - a)*u)``.

This module exposes the distortion, its derivative, the complement
``1 - T(1 - s)`` in a cancellation-free form for accurate survival tails,
a bracketed inverse, and the two power-series expansions (about ``u = 0``
and ``u = 1``) whose coefficients drive the moment formulas and the
random-maxima sampler.

All operations are pure; :class:`ParameterVector` and
:class:`SeriesCoefficients` are immutable and safe to share across
threads.  Scalar inputs return floats, array inputs return arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConditionViolated,
    DomainError,
    LengthMismatch,
    Nonconvergence,
    NonPositiveParameter,
)

__all__ = [
    "ParameterVector",
    "SeriesCoefficients",
    "validate_params",
    "elementary_symmetric",
    "distortion",
    "distortion_deriv",
    "distortion_complement",
    "distortion_inverse",
    "composition_pair",
    "series_at_zero",
    "series_at_one",
]

# Inputs within this distance outside [0, 1] are clamped; CDF round-off only.
U_SLACK = 1e-12

# Reported series tail estimates never drop below this: it absorbs the
# float rounding of the coefficient evaluation and of partial sums.
_TAIL_FLOOR = 256 * np.finfo(float).eps


@dataclass(frozen=True)
class ParameterVector:
    """Validated distortion parameters: q >= 1 and a_1..a_q all > 0.

    Use :func:`validate_params` to construct one; the raw constructor does
    not check anything.
    """

    q: int
    a: tuple[float, ...]
    sum_a: float

    @property
    def series_at_zero_ok(self) -> bool:
        """Whether the expansion about u = 0 converges on [-1, 1] (sum a_i > q/2)."""
        return self.sum_a > 0.5 * self.q

    @property
    def series_at_one_ok(self) -> bool:
        """Whether the expansion about u = 1 converges on [0, 2] (sum a_i < 2q)."""
        return self.sum_a < 2.0 * self.q

    @property
    def pmf_ok(self) -> bool:
        """Whether the series weights at zero form a probability mass function.

        Requires sum a_i >= q and a_i <= 1 for every i >= 2.  In this regime
        the distortion is convex, all series-at-zero weights are >= 0 and sum
        to one, and the extended density is dominated by a_1 times the
        baseline density.
        """
        return self.sum_a >= self.q and all(ai <= 1.0 for ai in self.a[1:])

    def describe_conditions(self) -> str:
        return (
            f"series_at_zero_ok={self.series_at_zero_ok} "
            f"series_at_one_ok={self.series_at_one_ok} pmf_ok={self.pmf_ok}"
        )


def validate_params(q: int, a: Sequence[float]) -> ParameterVector:
    """Check and package distortion parameters.

    Raises
    ------
    LengthMismatch
        If ``len(a) != q`` or ``q < 1``.
    NonPositiveParameter
        If any entry is not a strictly positive finite real.
    """
    if not isinstance(q, (int, np.integer)) or q < 1:
        raise LengthMismatch(f"q must be a positive integer, got {q!r}")
    vals = tuple(float(x) for x in a)
    if len(vals) != q:
        raise LengthMismatch(f"expected {q} parameters, got {len(vals)}")
    for i, x in enumerate(vals):
        if not math.isfinite(x) or x <= 0.0:
            raise NonPositiveParameter(f"a[{i}] = {x!r} is not strictly positive")
    return ParameterVector(q=int(q), a=vals, sum_a=math.fsum(vals))


def _as_unit_interval(u, *, slack: float = U_SLACK):
    """Coerce ``u`` to float array clamped to [0, 1]; reject anything further out."""
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    if not np.all(np.isfinite(arr)) or np.any(arr < -slack) or np.any(arr > 1.0 + slack):
        bad = arr if scalar else arr[~((arr >= -slack) & (arr <= 1.0 + slack))][:1]
        raise DomainError(f"u = {np.ravel(bad)[:1]} outside [0, 1] beyond tolerance {slack}")
    return np.clip(arr, 0.0, 1.0), scalar


def _ret(arr, scalar: bool):
    return float(arr) if scalar else arr


def distortion(pv: ParameterVector, u):
    """Evaluate the distortion T(u) on [0, 1].

    The linear factors are evaluated as ``u + a_i*(1 - u)`` and the
    denominator base as ``q*u + S*(1 - u)`` so that the endpoint values
    T(0) = 0 and T(1) = 1 are exact in floating point.
    """
    uu, scalar = _as_unit_interval(u)
    s = 1.0 - uu
    num = np.array(uu, copy=True)
    for ai in pv.a[1:]:
        num = num * (uu + ai * s)
    denom = (pv.q * uu + pv.sum_a * s) ** pv.q
    val = (float(pv.q) ** pv.q) * num / denom
    # analytically in [0, 1]; rounding can poke a couple of ulp past 1
    return _ret(np.clip(val, 0.0, 1.0), scalar)


def distortion_deriv(pv: ParameterVector, u):
    """Evaluate T'(u) >= 0 on [0, 1], with T'(1) = a_1 exact to rounding.

    Uses the regrouped form

        T'(u) = q^q * B(u) / (q*u + S*(1-u))^(q+1),
        B(u)  = P * (S*(1-u) + q*a_1*u)
                + u*(1-u) * sum_{i>=2} (1-a_i)*(S - q*a_i) * P / f_i,

    with ``f_i = u + a_i*(1-u)`` and ``P = prod f_i``.  This is the analytic
    derivative of :func:`distortion`; the grouping removes the endpoint
    cancellation that the naive three-term product rule suffers when a_1 is
    many orders of magnitude below the other parameters.
    """
    uu, scalar = _as_unit_interval(u)
    s = 1.0 - uu
    q, big_s, a1 = pv.q, pv.sum_a, pv.a[0]
    factors = [uu + ai * s for ai in pv.a[1:]]
    prod = np.ones_like(uu)
    for f in factors:
        prod = prod * f
    bracket = prod * (big_s * s + q * a1 * uu)
    if q >= 2:
        corr = np.zeros_like(uu)
        for ai, f in zip(pv.a[1:], factors):
            corr += (1.0 - ai) * (big_s - q * ai) * (prod / f)
        bracket = bracket + uu * s * corr
    denom = (q * uu + big_s * s) ** (q + 1)
    val = (float(q) ** q) * bracket / denom
    return _ret(val, scalar)


@lru_cache(maxsize=256)
def _complement_numerator_coeffs(pv: ParameterVector) -> tuple[float, ...]:
    """Coefficients (degrees 1..q in s) of D(s)^q - N(s) where

    D(s)^q = (q + (S-q)*s)^q  and  N(s) = q^q * (1-s) * prod_i (1 - (1-a_i)*s)

    are the denominator and numerator of T(1-s).  Both have constant term
    q^q, so the difference starts at degree one: evaluating it never
    subtracts two near-equal O(1) quantities.
    """
    q, big_s = pv.q, pv.sum_a
    qq = float(q) ** q
    denom = [math.comb(q, k) * float(q) ** (q - k) * (big_s - q) ** k for k in range(q + 1)]
    numer = [qq]
    for w in [-(1.0 - ai) for ai in pv.a[1:]] + [-1.0]:
        nxt = numer + [0.0]
        for j in range(len(numer)):
            nxt[j + 1] += w * numer[j]
        numer = nxt
    diff = [d - n for d, n in zip(denom, numer)]
    return tuple(diff[1:])


def distortion_complement(pv: ParameterVector, s):
    """Evaluate 1 - T(1 - s) accurately for small survival values s.

    Expands numerator and denominator of T(1-s) as polynomials in s and
    subtracts them coefficient-wise, leaving a single polynomial whose
    constant term vanishes exactly.  Near s = 0 the result behaves like
    a_1 * s without catastrophic cancellation.
    """
    ss, scalar = _as_unit_interval(s)
    coeffs = _complement_numerator_coeffs(pv)
    acc = np.zeros_like(ss)
    for c in reversed(coeffs):
        acc = acc * ss + c
    acc = acc * ss
    denom = (pv.q * (1.0 - ss) + pv.sum_a * ss) ** pv.q
    return _ret(np.clip(acc / denom, 0.0, 1.0), scalar)


def distortion_inverse(pv: ParameterVector, p, *, tol: float = 1e-12, max_iter: int = 200):
    """Solve T(u) = p for u in [0, 1] by bracketed bisection with secant steps.

    The distortion is strictly increasing, so [0, 1] always brackets the
    root.  Secant candidates accelerate convergence but are only accepted
    while they stay safely inside the current bracket; otherwise the step
    falls back to bisection, which keeps the iteration globally convergent
    even where the derivative vanishes at an endpoint.

    Raises
    ------
    DomainError
        If ``p`` is outside (0, 1).
    Nonconvergence
        If the residual still exceeds ``tol`` once the bracket has
        collapsed to machine width and the iteration cap is hit.
    """
    pp = np.asarray(p, dtype=float)
    scalar = pp.ndim == 0
    pp = np.atleast_1d(pp)
    if np.any(~np.isfinite(pp)) or np.any(pp <= 0.0) or np.any(pp >= 1.0):
        raise DomainError("quantile level must lie strictly inside (0, 1)")

    lo = np.zeros_like(pp)
    hi = np.ones_like(pp)
    flo = -pp
    fhi = 1.0 - pp
    u = np.array(pp, copy=True)
    f = distortion(pv, u) - pp
    for it in range(max_iter):
        below = f < 0.0
        lo = np.where(below, u, lo)
        flo = np.where(below, f, flo)
        hi = np.where(below, hi, u)
        fhi = np.where(below, fhi, f)
        if np.all(np.abs(f) <= tol):
            break
        width = hi - lo
        if np.all(width <= 4.0 * np.finfo(float).eps * np.maximum(hi, 1e-300)):
            break
        mid = 0.5 * (lo + hi)
        if it % 2 == 0:
            denom = fhi - flo
            with np.errstate(divide="ignore", invalid="ignore"):
                sec = lo - flo * (hi - lo) / denom
            margin = 0.01 * width
            good = np.isfinite(sec) & (sec > lo + margin) & (sec < hi - margin)
            u = np.where(good, sec, mid)
        else:
            u = mid
        f = distortion(pv, u) - pp
    else:
        resid = np.max(np.abs(f))
        if resid > 1e-9:
            raise Nonconvergence(f"distortion inverse stalled at residual {resid:.3e}")
    return _ret(u[0] if scalar else u, scalar)


def composition_pair(pv: ParameterVector, b: float, u):
    """Return (T_a(T_{b,..,b}(u)), T_{b*a}(u)); the two agree analytically.

    Composing with the equal-parameter map rescales every parameter by
    ``b``, which is what makes the random-maxima construction closed over
    the equal-parameter subfamily.  Callers assert equality of the pair.
    """
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError(f"scale b must be strictly positive, got {b!r}")
    inner_pv = validate_params(pv.q, (float(b),) * pv.q)
    scaled_pv = validate_params(pv.q, tuple(b * ai for ai in pv.a))
    left = distortion(pv, distortion(inner_pv, u))
    right = distortion(scaled_pv, u)
    return left, right


def elementary_symmetric(weights: Iterable[float], upto: int) -> list[float]:
    """Elementary symmetric polynomials e_0..e_upto of the given weights.

    e_0 = 1; e_i = 0 for i beyond the number of weights.  Built by
    incrementally multiplying the linear factors (1 + w*x), which is stable
    for mixed-sign weights, unlike subset enumeration.
    """
    if upto < 0:
        raise DomainError("upto must be >= 0")
    sig = [0.0] * (upto + 1)
    sig[0] = 1.0
    for count, w in enumerate(weights, start=1):
        for j in range(min(count, upto), 0, -1):
            sig[j] += w * sig[j - 1]
    return sig


@dataclass(frozen=True)
class SeriesCoefficients:
    """Truncated power-series weights of the distortion.

    ``kind`` is ``"at_zero"`` (T(u) = sum_m values[m-1] * u^m) or
    ``"at_one"`` (T(u) = 1 + sum_m values[m-1] * (u-1)^m).  ``values[i]``
    is the weight of index m = i + 1.  ``tail_estimate`` bounds the total
    absolute weight beyond ``truncation_index``, and therefore also the
    reconstruction error at any point of the series' convergence interval
    and, for ``at_zero``, the distance of the partial sum from one.
    """

    kind: str
    values: tuple[float, ...]
    truncation_index: int
    tail_estimate: float
    sigma: tuple[float, ...]

    def reconstruct(self, u):
        """Evaluate the truncated series at ``u`` (array-friendly)."""
        uu = np.asarray(u, dtype=float)
        scalar = uu.ndim == 0
        base = uu if self.kind == "at_zero" else uu - 1.0
        acc = np.zeros_like(uu, dtype=float)
        for c in reversed(self.values):
            acc = acc * base + c
        acc = acc * base
        if self.kind == "at_one":
            acc = acc + 1.0
        return _ret(acc, scalar)


class _SeriesStream:
    """Streaming evaluator for the series weights, shared by the truncated
    builders, the moment series, and the lazily extended sampling tables.

    Each weight of index m is a finite sum over shifts j of

        coeff[j] * C(k+q-1, q-1) * srat^k,    k = m - j,

    evaluated in log space so that the binomial growth and the geometric
    decay never overflow on the way to a representable product.
    """

    def __init__(self, pv: ParameterVector, kind: str):
        q, big_s = pv.q, pv.sum_a
        self.q = q
        self.kind = kind
        if kind == "at_zero":
            if not pv.series_at_zero_ok:
                raise ConditionViolated(
                    f"expansion about u = 0 requires sum(a) > q/2; got sum(a) = {big_s}, q = {q}"
                )
            sig = elementary_symmetric([(1.0 - ai) / ai for ai in pv.a[1:]], q - 1)
            # coeff[j] multiplies the k = m - j term; j runs from 1 here.
            self.coeff = {j: sig[j - 1] for j in range(1, q + 1)}
            self.srat = (big_s - q) / big_s
            self.log_pref = q * math.log(q) + math.fsum(math.log(ai) for ai in pv.a[1:]) - q * math.log(big_s)
            self.sigma = tuple(sig)
        elif kind == "at_one":
            if not pv.series_at_one_ok:
                raise ConditionViolated(
                    f"expansion about u = 1 requires sum(a) < 2q; got sum(a) = {big_s}, q = {q}"
                )
            sig = elementary_symmetric([1.0 - ai for ai in pv.a[1:]], q)
            self.coeff = {0: 1.0}
            for j in range(1, q + 1):
                self.coeff[j] = sig[j] + sig[j - 1]
            self.srat = (big_s - q) / q
            self.log_pref = 0.0
            self.sigma = tuple(sig[: q])
        else:  # pragma: no cover - internal misuse
            raise ValueError(kind)
        self.ratio = abs(self.srat)
        self._log_ratio = math.log(self.ratio) if self.ratio > 0.0 else -math.inf
        self._lgq = math.lgamma(q)

    def value_and_envelope(self, m: int) -> tuple[float, float]:
        """The weight of index m together with its absolute-value envelope.

        The envelope is the same mode sum with every sign dropped.  Unlike
        the weight itself it cannot dip through cancellation, so it is the
        quantity the tail bounds have to be built from when the modes carry
        mixed signs.
        """
        logs: list[float] = []
        signs: list[float] = []
        for j, cj in self.coeff.items():
            k = m - j
            if k < 0 or cj == 0.0:
                continue
            if k > 0 and self.ratio == 0.0:
                continue
            lg = math.lgamma(k + self.q) - math.lgamma(k + 1) - self._lgq
            lg += k * self._log_ratio if k > 0 else 0.0
            logs.append(lg + math.log(abs(cj)))
            signs.append(math.copysign(1.0, cj) * (1.0 if (k % 2 == 0 or self.srat >= 0.0) else -1.0))
        if not logs:
            return 0.0, 0.0
        top = max(logs)
        if top + self.log_pref == -math.inf:
            return 0.0, 0.0
        scale = math.exp(top + self.log_pref)
        acc = math.fsum(s * math.exp(lg - top) for s, lg in zip(signs, logs))
        env = math.fsum(math.exp(lg - top) for lg in logs)
        return acc * scale, env * scale

    def value(self, m: int) -> float:
        return self.value_and_envelope(m)[0]

    def envelope_ratio(self, m: int) -> float:
        """Bound on envelope(m+1) / envelope(m), valid for m >= q + 1.

        Mode j scales by ratio * (m-j+q)/(m-j+1) per index, which is
        largest for the youngest mode j = q; the bound is decreasing in m,
        so once it drops below one the envelope tail is geometric.
        """
        if m <= self.q:
            return math.inf
        return self.ratio * m / (m - self.q + 1)


def _truncated_series(pv: ParameterVector, kind: str, tol: float, max_terms: int) -> SeriesCoefficients:
    stream = _SeriesStream(pv, kind)
    q = pv.q
    values: list[float] = []
    burn_in = q + 2
    tail = math.inf
    m = 0
    while m < max_terms:
        m += 1
        val, env = stream.value_and_envelope(m)
        values.append(val)
        if m < burn_in:
            continue
        rho = stream.envelope_ratio(m)
        if rho >= 1.0:
            continue
        tail = env * rho / (1.0 - rho)
        if tail < tol:
            break
    else:
        raise Nonconvergence(
            f"series {kind} for q={q}, a={pv.a} still above tol={tol} after {max_terms} terms"
        )
    if not math.isfinite(tail):
        tail = _TAIL_FLOOR
    return SeriesCoefficients(
        kind=kind,
        values=tuple(values),
        truncation_index=m,
        tail_estimate=max(tail, _TAIL_FLOOR),
        sigma=stream.sigma,
    )


def series_at_zero(pv: ParameterVector, tol: float = 1e-12, max_terms: int = 10**6) -> SeriesCoefficients:
    """Weights of T(u) = sum_{m>=1} w_m u^m, valid on [-1, 1].

    Requires ``pv.series_at_zero_ok``.  When ``pv.pmf_ok`` holds the
    weights are all non-negative and sum to one: they are the distribution
    of the random sample size in the maxima construction.
    """
    return _truncated_series(pv, "at_zero", tol, max_terms)


def series_at_one(pv: ParameterVector, tol: float = 1e-12, max_terms: int = 10**6) -> SeriesCoefficients:
    """Weights of T(u) = 1 + sum_{m>=1} w_m (u-1)^m, valid on [0, 2].

    Requires ``pv.series_at_one_ok``.
    """
    return _truncated_series(pv, "at_one", tol, max_terms)
