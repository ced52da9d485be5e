"""Oracle cross-check suite backing the `verify` CLI subcommand.

Three independent routes are compared on a representative parameter set per
family: closed-form transforms against direct quadrature, closed-form
log-cumulants against central-difference derivatives, and compound
transforms against the product of their decomposition factors (with the
matching log-cumulant additivity).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from . import mellin
from .errors import ClutterStatsError
from .models import (
    COMPOUND_FAMILY_TYPES,
    ClutterModel,
    Exponential,
    Fisher,
    Gamma,
    GammaGamma,
    KAmplitude,
    Maxwell,
    Nakagami,
    Rayleigh,
    Weibull,
    WeibullNakagami,
    decompose,
)
from .specfun import Tolerance

__all__ = ["Check", "run_suite", "VERIFY_MODELS"]

VERIFY_MODELS = (
    Exponential(mu=1.5),
    Gamma(L=2.0, mu=1.0),
    Gamma(L=0.5, mu=3.0),
    Nakagami(L=1.5, mu=1.0),
    Maxwell(sigma=1.0),
    Weibull(b=2.5, z=1.5),
    Rayleigh(z=2.0),
    GammaGamma(L=2.0, M=3.0, mu=1.5),
    KAmplitude(alpha=2.0, b=1.0, mu=1.0),
    WeibullNakagami(c=2.0, alpha=1.5, b=1.0, sigma=1.0),
    Fisher(L=2.0, M=3.0, mu=1.0),
)

_S_CANDIDATES = (0.5, 1.5, 2.0, 2.5, 3.0)

# Agreement floors of the differentiation oracle itself; the CLI tolerance
# cannot meaningfully go below these.
_CUMULANT_FLOORS = {1: 1e-5, 2: 1e-5, 3: 1e-3, 4: 1e-3}

_QUAD_TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-9, max_subdivisions=400)


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float
    passed: bool
    detail: str = ""


def _interior_points(model: ClutterModel):
    strip = mellin.analyticity_strip(model)
    points = [
        s
        for s in _S_CANDIDATES
        if strip.lower + 0.05 < s < strip.upper - 0.1
    ]
    return points[:3]


def _label(model: ClutterModel) -> str:
    return type(model).family


def run_suite(tolerance: float = 1e-6) -> List[Check]:
    """Run all cross-checks at the given relative tolerance."""
    checks: List[Check] = []

    for model in VERIFY_MODELS:
        worst = 0.0
        detail = ""
        try:
            for s in _interior_points(model):
                closed = mellin.phi(model, s)
                numeric = mellin.phi_numeric(model, s, _QUAD_TOL)
                err = abs(closed - numeric) / abs(closed)
                if err > worst:
                    worst, detail = err, f"s={s:g}"
        except ClutterStatsError as exc:
            checks.append(
                Check(
                    f"transform vs quadrature [{_label(model)}]",
                    float("nan"),
                    tolerance,
                    False,
                    str(exc),
                )
            )
            continue
        checks.append(
            Check(
                f"transform vs quadrature [{_label(model)}]",
                worst,
                tolerance,
                worst <= tolerance,
                detail,
            )
        )

    for model in VERIFY_MODELS:
        closed = mellin.log_cumulants(model, 4)
        numeric = mellin.log_cumulants_numeric(model, 4)
        worst_margin = -1.0
        worst_err = 0.0
        worst_tol = tolerance
        detail = ""
        for order in range(1, 5):
            err = abs(closed.values[order - 1] - numeric.values[order - 1])
            tol = max(tolerance, _CUMULANT_FLOORS[order])
            margin = err / tol
            if margin > worst_margin:
                worst_margin, worst_err, worst_tol = margin, err, tol
                detail = f"order {order}"
        checks.append(
            Check(
                f"cumulants vs derivatives [{_label(model)}]",
                worst_err,
                worst_tol,
                worst_margin <= 1.0,
                detail,
            )
        )

    for model in VERIFY_MODELS:
        if not isinstance(model, COMPOUND_FAMILY_TYPES):
            continue
        parts = decompose(model)
        worst = 0.0
        detail = ""
        for s in _interior_points(model):
            whole = mellin.phi(model, s)
            split = mellin.phi(parts.speckle, s) * mellin.phi(parts.texture, s)
            err = abs(whole - split) / abs(whole)
            if err > worst:
                worst, detail = err, f"s={s:g}"
        k_whole = mellin.log_cumulants(model, 4)
        k_parts = [
            mellin.log_cumulants(parts.speckle, 4),
            mellin.log_cumulants(parts.texture, 4),
        ]
        for order in range(1, 5):
            total = sum(p.values[order - 1] for p in k_parts)
            err = abs(k_whole.values[order - 1] - total)
            if err > worst:
                worst, detail = err, f"cumulant order {order}"
        checks.append(
            Check(
                f"product/additivity [{_label(model)}]",
                worst,
                tolerance,
                worst <= tolerance,
                detail,
            )
        )

    return checks
