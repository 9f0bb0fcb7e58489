"""Contour-agreement error control.

Price the same option along several genuinely different admissible contour
deformations.  The trapezoid sums sample the integrand at unrelated points,
so agreement of the results to 10^-m certifies the common value to about
10^-(m-2); disagreement flags an analyticity or discretization problem and
carries an escalation hint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .charfn import CharFnDivergence, DecayProfile
from .inversion import (OptionSpec, SideFlip, SinhContour, build_sinh_contour,
                        plan_truncation, price_sinh)

CERTIFICATE_FACTOR = 100.0  # certified tolerance = spread * 100


class BootstrapStatus(Enum):
    AGREED = "agreed"
    REFINE_DISCRETIZATION = "refine_discretization"
    CHANGE_DEFORMATION = "change_deformation"
    REDUCE_OMEGA_TO_FLAT = "reduce_omega_to_flat"
    FAILED = "failed"


@dataclass(frozen=True)
class BootstrapReport:
    prices: tuple[float, ...]
    contours: tuple[SinhContour, ...]
    spread: float
    certified_tolerance: float
    agreed: bool
    status: BootstrapStatus
    relative_spread: float | None
    excluded: tuple[int, ...]  # indices of contours whose CF diverged

    @property
    def value(self) -> float:
        return float(np.mean(self.prices))


def bootstrap_price(opt: OptionSpec, cf, contour_specs: Sequence[tuple[float, tuple[float, float]]],
                    eps: float, profile: DecayProfile,
                    threshold: float = 1e-5, strict: bool = True,
                    cone: tuple[float, float] = (-math.pi / 4, math.pi / 4),
                    H_const: float = 100.0) -> BootstrapReport:
    """Price on >= 2 distinct contours and certify their agreement.

    contour_specs are (omega, strip) pairs; each gets its own independent
    truncation plan.  In strict mode specs must differ pairwise by >= 0.05 in
    omega or have different strips, otherwise the certificate is vacuous.
    threshold applies to the relative spread when the price scale allows,
    absolute spread otherwise.
    """
    specs = list(contour_specs)
    if len(specs) < 2:
        raise ValueError("need at least two contour deformations")
    if strict:
        for i in range(len(specs)):
            for j in range(i + 1, len(specs)):
                om_i, st_i = specs[i]
                om_j, st_j = specs[j]
                if abs(om_i - om_j) < 0.05 and st_i == st_j:
                    raise ValueError(
                        f"contours {i} and {j} are not distinct "
                        "(|omega_i - omega_j| < 0.05 with the same strip)")
    prices: list[float] = []
    contours: list[SinhContour] = []
    excluded: list[int] = []
    for i, (om, strip) in enumerate(specs):
        try:
            c = build_sinh_contour(opt.kind, strip, cone=cone,
                                   omega_override=om, eps=eps)
            plan = plan_truncation(profile, c, eps, H_const=H_const)
            prices.append(float(price_sinh(opt, cf, c, N=plan.N)))
            contours.append(c)
        except (CharFnDivergence, SideFlip, OverflowError):
            excluded.append(i)
    if len(prices) < 2:
        return BootstrapReport(
            prices=tuple(prices), contours=tuple(contours), spread=math.inf,
            certified_tolerance=math.inf, agreed=False,
            status=BootstrapStatus.FAILED, relative_spread=None,
            excluded=tuple(excluded))
    arr = np.asarray(prices)
    spread = float(arr.max() - arr.min())
    scale = float(np.abs(arr).min())
    rel = spread / scale if scale > 1e-12 else None
    measure = rel if rel is not None else spread
    agreed = measure <= threshold
    if agreed:
        status = BootstrapStatus.AGREED
    elif measure <= 100.0 * threshold:
        # moderately good agreement: refine the discretization first
        status = BootstrapStatus.REFINE_DISCRETIZATION
    elif all(abs(om) > 0.05 for om, _ in specs):
        # no flat member tried yet; a latent pole crossing is possible
        status = BootstrapStatus.REDUCE_OMEGA_TO_FLAT
    else:
        status = BootstrapStatus.CHANGE_DEFORMATION
    return BootstrapReport(
        prices=tuple(prices), contours=tuple(contours), spread=spread,
        certified_tolerance=CERTIFICATE_FACTOR * spread, agreed=agreed,
        status=status, relative_spread=rel, excluded=tuple(excluded))


def default_contour_specs(profile: DecayProfile, kind: str,
                          include_flat: bool = False) -> list[tuple[float, tuple[float, float]]]:
    """Default deformation pair: omega = +-0.1 and +-0.2 on the side selected
    by sign(z_T), plus the flat covered-call line as an optional tiebreaker."""
    side = 1.0 if profile.z_T > 0 else -1.0
    if kind == "put":
        strip = (0.0, 1.0)
    elif kind == "call":
        strip = (-2.0, -1.0)
    else:
        strip = (-1.0, 0.0)
    specs = [(side * 0.1, strip), (side * 0.2, strip)]
    if include_flat:
        specs.append((0.0, (-1.0, 0.0)))
    return specs
