"""Clutter distribution families: validation, densities, compound structure.

Ten families cover the usual simple models of amplitude or power
(exponential, gamma, Nakagami, Maxwell, Weibull, Rayleigh) and the compound
ones built from a speckle component whose mean is modulated by a random
texture (gamma-gamma, K, generalized Weibull-Nakagami, Fisher).  An auxiliary
inverse-gamma family exists as the texture component of the Fisher model.

All supports are (0, inf) and all parameters are strictly positive.  Model
values are immutable; every operation is a pure function and thread-safe.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from functools import singledispatch
from typing import ClassVar, Union

import scipy.integrate
from scipy.special import gammaln, kve

from .errors import (
    NonConvergenceError,
    NotCompoundError,
    NumericOverflowError,
    ParameterError,
)
from .specfun import Tolerance

__all__ = [
    "Exponential",
    "Gamma",
    "Nakagami",
    "Maxwell",
    "Weibull",
    "Rayleigh",
    "GammaGamma",
    "KAmplitude",
    "WeibullNakagami",
    "Fisher",
    "InverseGamma",
    "ClutterModel",
    "Decomposition",
    "FAMILIES",
    "validate",
    "pdf",
    "decompose",
    "model_to_dict",
    "model_from_dict",
]


@dataclass(frozen=True)
class Exponential:
    """Power pdf f(x) = exp(-x/mu) / mu with mean mu (gamma with L = 1)."""

    mu: float
    family: ClassVar[str] = "exponential"


@dataclass(frozen=True)
class Gamma:
    """Speckle-power pdf with L looks and mean power mu:

    f(v) = (L/mu)^L v^(L-1) exp(-L v / mu) / Gamma(L)
    """

    L: float
    mu: float
    family: ClassVar[str] = "gamma"


@dataclass(frozen=True)
class Nakagami:
    """Amplitude pdf with shape L and scale mu:

    f(r) = 2 (L/mu^2)^L r^(2L-1) exp(-L r^2 / mu^2) / Gamma(L)

    The square of a Nakagami variate is gamma with shape L and mean mu^2.
    """

    L: float
    mu: float
    family: ClassVar[str] = "nakagami"


@dataclass(frozen=True)
class Maxwell:
    """Speed-like amplitude pdf with scale sigma:

    f(u) = sqrt(2/pi) u^2 exp(-u^2 / (2 sigma^2)) / sigma^3
    """

    sigma: float
    family: ClassVar[str] = "maxwell"


@dataclass(frozen=True)
class Weibull:
    """Long-tailed amplitude pdf with shape b and scale z:

    f(x) = (b/z) (x/z)^(b-1) exp(-(x/z)^b)
    """

    b: float
    z: float
    family: ClassVar[str] = "weibull"


@dataclass(frozen=True)
class Rayleigh:
    """Amplitude pdf f(r) = 2 (r/z^2) exp(-(r/z)^2): Weibull with b = 2."""

    z: float
    family: ClassVar[str] = "rayleigh"


@dataclass(frozen=True)
class GammaGamma:
    """Compound power model: unit-mean gamma speckle (shape L) times gamma
    texture (shape M, mean mu):

    f(v) = 2 (LM/mu)^((L+M)/2) v^((L+M)/2 - 1)
           K_{M-L}(2 sqrt(LM v / mu)) / (Gamma(L) Gamma(M))

    The first moment equals mu.
    """

    L: float
    M: float
    mu: float
    family: ClassVar[str] = "gamma_gamma"


@dataclass(frozen=True)
class KAmplitude:
    """Compound amplitude (K) model: Rayleigh speckle whose mean-square is
    gamma-distributed with shape alpha and rate b; mu is an overall amplitude
    scale (the textbook K-pdf has mu = 1):

    f(r) = (4 b^((alpha+1)/2) / Gamma(alpha)) (r/mu)^alpha
           K_{alpha-1}(2 (r/mu) sqrt(b)) / mu
    """

    alpha: float
    b: float
    mu: float = 1.0
    family: ClassVar[str] = "k_amplitude"


@dataclass(frozen=True)
class WeibullNakagami:
    """Compound amplitude model: generalized Weibull speckle (shape c) whose
    scale is Nakagami-distributed (shape alpha, rate b on the mean square),
    with overall mean-square scale sigma.  The density has no elementary
    closed form and is evaluated by quadrature over the texture variable:

    f(r) = (2 c b^alpha / Gamma(alpha)) r'^(c-1) / sqrt(sigma)
           * Int_0^inf z^(2 alpha - 1 - c) exp(-(r'/z)^c - b z^2) dz,
    with r' = r / sqrt(sigma).
    """

    c: float
    alpha: float
    b: float
    sigma: float
    family: ClassVar[str] = "weibull_nakagami"


@dataclass(frozen=True)
class Fisher:
    """Compound power model with gamma speckle (shape L) and inverse-gamma
    texture (shape M), scale mu:

    f(u) = (Gamma(L+M) / (Gamma(L) Gamma(M))) (L/(M mu))
           lam^(L-1) / (1 + lam)^(L+M),   lam = L u / (M mu)

    Heavy-tailed: moments of order n >= M diverge.
    """

    L: float
    M: float
    mu: float
    family: ClassVar[str] = "fisher"


@dataclass(frozen=True)
class InverseGamma:
    """Texture component of the Fisher model: reciprocal of a gamma variate,
    shape M and scale mu:

    f(z) = mu^M z^(-M-1) exp(-mu/z) / Gamma(M)
    """

    M: float
    mu: float
    family: ClassVar[str] = "inverse_gamma"


ClutterModel = Union[
    Exponential,
    Gamma,
    Nakagami,
    Maxwell,
    Weibull,
    Rayleigh,
    GammaGamma,
    KAmplitude,
    WeibullNakagami,
    Fisher,
    InverseGamma,
]

_ALL_FAMILY_TYPES = (
    Exponential,
    Gamma,
    Nakagami,
    Maxwell,
    Weibull,
    Rayleigh,
    GammaGamma,
    KAmplitude,
    WeibullNakagami,
    Fisher,
    InverseGamma,
)

FAMILIES = {cls.family: cls for cls in _ALL_FAMILY_TYPES}

COMPOUND_FAMILY_TYPES = (GammaGamma, KAmplitude, WeibullNakagami, Fisher)


@dataclass(frozen=True)
class Decomposition:
    """Speckle and texture components of a compound model.

    The components multiply in the transform domain: the product of their
    second-kind characteristic functions equals the compound's on the common
    analyticity strip, and their log-cumulants add order by order.
    """

    speckle: ClutterModel
    texture: ClutterModel


def validate(model: ClutterModel) -> ClutterModel:
    """Return the model unchanged if every parameter is positive and finite."""
    if not isinstance(model, _ALL_FAMILY_TYPES):
        raise ParameterError(f"not a clutter model: {model!r}")
    for field in fields(model):
        value = getattr(model, field.name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParameterError(f"parameter {field.name} must be a real number")
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            raise ParameterError(f"parameter {field.name} must be finite")
        if value <= 0:
            raise ParameterError(f"parameter {field.name} must be > 0")
    return model


# Inner quadrature budget for the Weibull-Nakagami density; tighter than the
# callers' budgets so nested integrals (normalization, transforms) still meet
# their own tolerances.
_WN_INNER_TOL = Tolerance(abs_tol=1e-14, rel_tol=1e-10, max_subdivisions=200)

_LOG_EPS = -745.0  # exp() underflows to zero below this
_LOG_MAX = 709.0


def _exp_or_zero(log_value: float) -> float:
    if log_value < _LOG_EPS:
        return 0.0
    if log_value > _LOG_MAX:
        raise NumericOverflowError("density overflow")
    return math.exp(log_value)


def pdf(model: ClutterModel, x: float) -> float:
    """Probability density of the model at x > 0."""
    validate(model)
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise ParameterError(f"x must be > 0, got {x!r}")
    if math.isinf(x):
        raise ParameterError("x must be finite")
    value = _pdf(model, x)
    if math.isnan(value) or math.isinf(value):
        raise NumericOverflowError(
            f"pdf overflow for {type(model).__name__} at x={x:g}"
        )
    return value


@singledispatch
def _pdf(model, x: float) -> float:
    raise ParameterError(f"no density for {type(model).__name__}")


@_pdf.register
def _(model: Exponential, x: float) -> float:
    return _exp_or_zero(-x / model.mu - math.log(model.mu))


@_pdf.register
def _(model: Gamma, x: float) -> float:
    L, mu = model.L, model.mu
    log_f = (
        L * math.log(L / mu)
        + (L - 1.0) * math.log(x)
        - L * x / mu
        - gammaln(L)
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: Nakagami, x: float) -> float:
    L, mu = model.L, model.mu
    log_f = (
        math.log(2.0)
        + L * math.log(L / (mu * mu))
        + (2.0 * L - 1.0) * math.log(x)
        - L * x * x / (mu * mu)
        - gammaln(L)
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: Maxwell, x: float) -> float:
    s = model.sigma
    log_f = (
        0.5 * math.log(2.0 / math.pi)
        - 3.0 * math.log(s)
        + 2.0 * math.log(x)
        - x * x / (2.0 * s * s)
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: Weibull, x: float) -> float:
    b, z = model.b, model.z
    log_ratio = math.log(x / z)
    t = b * log_ratio
    if t > _LOG_MAX:
        return 0.0
    log_f = math.log(b / z) + (b - 1.0) * log_ratio - math.exp(t)
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: Rayleigh, x: float) -> float:
    return _pdf(Weibull(b=2.0, z=model.z), x)


def _log_kve(nu: float, w: float) -> float:
    """log of the scaled Bessel K; raises on overflow at extreme arguments."""
    value = float(kve(nu, w))
    if math.isinf(value) or value <= 0.0:
        raise NumericOverflowError(
            f"Bessel factor not representable (nu={nu:g}, w={w:g})"
        )
    return math.log(value)


@_pdf.register
def _(model: GammaGamma, x: float) -> float:
    L, M, mu = model.L, model.M, model.mu
    half_sum = 0.5 * (L + M)
    w = 2.0 * math.sqrt(L * M * x / mu)
    log_f = (
        math.log(2.0)
        - gammaln(L)
        - gammaln(M)
        + half_sum * math.log(L * M / mu)
        + (half_sum - 1.0) * math.log(x)
        + _log_kve(M - L, w)
        - w
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: KAmplitude, x: float) -> float:
    alpha, b, mu = model.alpha, model.b, model.mu
    r = x / mu
    w = 2.0 * r * math.sqrt(b)
    log_f = (
        math.log(4.0)
        + 0.5 * (alpha + 1.0) * math.log(b)
        + alpha * math.log(r)
        - gammaln(alpha)
        + _log_kve(alpha - 1.0, w)
        - w
        - math.log(mu)
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: WeibullNakagami, x: float) -> float:
    c, alpha, b = model.c, model.alpha, model.b
    root_sigma = math.sqrt(model.sigma)
    r = x / root_sigma
    ln_r = math.log(r)

    # The texture integral has two scales: the speckle cutoff at z ~ r and
    # the texture cutoff at z ~ 1/sqrt(b).  Substituting z = exp(u) makes
    # both knees O(1) wide, so adaptive quadrature resolves them at any r.
    def log_integrand(u: float) -> float:
        t = c * (ln_r - u)
        if t > _LOG_MAX:
            return -math.inf
        value = (2.0 * alpha - c) * u - math.exp(t)
        if 2.0 * u < _LOG_MAX:
            value -= b * math.exp(2.0 * u)
        else:
            return -math.inf
        return value

    u_lo = ln_r - 40.0 / c
    u_hi = 0.5 * math.log(1500.0 / b)
    while log_integrand(u_hi) > -700.0:
        u_hi += 1.0
    if u_lo >= u_hi:
        return 0.0  # speckle cutoff beyond the texture tail: no mass left
    scan = [u_lo + (u_hi - u_lo) * i / 64.0 for i in range(65)]
    shift = max(log_integrand(u) for u in scan)
    if shift == -math.inf:
        return 0.0

    def integrand(u: float) -> float:
        value = log_integrand(u) - shift
        return math.exp(value) if value > _LOG_EPS else 0.0

    out = scipy.integrate.quad(
        integrand,
        u_lo,
        u_hi,
        epsabs=1e-14,
        epsrel=1e-10,
        limit=_WN_INNER_TOL.max_subdivisions,
        full_output=1,
    )
    if len(out) > 3 or not math.isfinite(out[0]):
        raise NonConvergenceError(
            f"texture integral did not converge at x={x:g}"
        )
    if out[0] <= 0.0:
        return 0.0
    log_pref = (
        math.log(2.0 * c)
        + alpha * math.log(b)
        - gammaln(alpha)
        + (c - 1.0) * ln_r
        - math.log(root_sigma)
    )
    return _exp_or_zero(log_pref + shift + math.log(out[0]))


@_pdf.register
def _(model: Fisher, x: float) -> float:
    L, M, mu = model.L, model.M, model.mu
    lam = L * x / (M * mu)
    log_f = (
        gammaln(L + M)
        - gammaln(L)
        - gammaln(M)
        + math.log(L / (M * mu))
        + (L - 1.0) * math.log(lam)
        - (L + M) * math.log1p(lam)
    )
    return _exp_or_zero(log_f)


@_pdf.register
def _(model: InverseGamma, x: float) -> float:
    M, mu = model.M, model.mu
    log_f = M * math.log(mu) - (M + 1.0) * math.log(x) - mu / x - gammaln(M)
    return _exp_or_zero(log_f)


def decompose(model: ClutterModel) -> Decomposition:
    """Split a compound model into (speckle, texture) components whose
    second-kind characteristic functions multiply to the compound's.

    Texture components of the amplitude-domain compounds are returned in the
    amplitude domain as well (square root of the gamma-distributed mean
    square), so the product identity holds exactly.
    """
    validate(model)
    if isinstance(model, GammaGamma):
        return Decomposition(
            speckle=Gamma(L=model.L, mu=1.0),
            texture=Gamma(L=model.M, mu=model.mu),
        )
    if isinstance(model, KAmplitude):
        return Decomposition(
            speckle=Rayleigh(z=model.mu),
            texture=Nakagami(L=model.alpha, mu=math.sqrt(model.alpha / model.b)),
        )
    if isinstance(model, WeibullNakagami):
        return Decomposition(
            speckle=Weibull(b=model.c, z=1.0),
            texture=Nakagami(
                L=model.alpha,
                mu=math.sqrt(model.alpha * model.sigma / model.b),
            ),
        )
    if isinstance(model, Fisher):
        return Decomposition(
            speckle=Gamma(L=model.L, mu=1.0),
            texture=InverseGamma(M=model.M, mu=model.M * model.mu),
        )
    raise NotCompoundError(f"{type(model).__name__} is not a compound model")


def model_to_dict(model: ClutterModel) -> dict:
    """Flat record {family, <parameter>: value, ...} for JSON serialization."""
    validate(model)
    record = {"family": type(model).family}
    for field in fields(model):
        record[field.name] = float(getattr(model, field.name))
    return record


def model_from_dict(record: dict) -> ClutterModel:
    """Inverse of model_to_dict; validates family, field names and values."""
    if "family" not in record:
        raise ParameterError("model record must contain a 'family' key")
    data = dict(record)
    name = data.pop("family")
    cls = FAMILIES.get(name)
    if cls is None:
        raise ParameterError(
            f"unknown family {name!r}; expected one of {sorted(FAMILIES)}"
        )
    known = {field.name for field in fields(cls)}
    extra = set(data) - known
    if extra:
        raise ParameterError(
            f"parameters {sorted(extra)} are not part of family {name!r}"
        )
    required = {
        field.name
        for field in fields(cls)
        if field.default is dataclasses.MISSING
        and field.default_factory is dataclasses.MISSING
    }
    missing = required - set(data)
    if missing:
        raise ParameterError(
            f"family {name!r} requires parameters {sorted(missing)}"
        )
    try:
        model = cls(**{key: float(value) for key, value in data.items()})
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"invalid parameters for {name!r}: {exc}") from exc
    return validate(model)
