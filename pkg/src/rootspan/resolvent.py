"""Resolvents, the regularized spectral product, the Carleman-type bound,
ray scans with decay-order fitting, and the sector-opening condition."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BiorthogonalSystem, ExponentContext
from .schatten import NormBounds, OperatorMatrix, lp_operator_norm_bounds, sigma_p_norm
from .trace_ops import is_quasinilpotent, power_trace_defect

__all__ = [
    "resolvent",
    "regularized_determinant",
    "CarlemanReport",
    "carleman_report",
    "QuasinilpotentResolventReport",
    "quasinilpotent_resolvent_report",
    "ArcConfiguration",
    "SectorReport",
    "sector_condition_check",
    "RayScan",
    "ray_scan",
]


def resolvent(a: OperatorMatrix, lam: complex) -> OperatorMatrix:
    """(lam I - A)^{-1}; refuses points within 1e-12 of the spectrum."""
    lam = complex(lam)
    eigenvalues = np.linalg.eigvals(a.entries)
    distances = np.abs(eigenvalues - lam)
    nearest = int(np.argmin(distances))
    if distances[nearest] <= 1e-12:
        raise ValueError(f"lambda {lam} lies in the spectrum; nearest eigenvalue "
                         f"{complex(eigenvalues[nearest])}")
    eye = np.eye(a.n, dtype=complex)
    return OperatorMatrix(np.linalg.solve(lam * eye - a.entries, eye), a.context)


def regularized_determinant(a: OperatorMatrix, lam: complex) -> complex:
    """Product of (1 - mu/lam) e^{mu/lam} over the eigenvalues mu."""
    lam = complex(lam)
    if lam == 0:
        raise ValueError("the regularized product is undefined at lambda = 0")
    eigenvalues = np.linalg.eigvals(a.entries)
    ratios = eigenvalues / lam
    return complex(np.prod((1.0 - ratios) * np.exp(ratios)))


def _norm_bracket(matrix: np.ndarray, context: ExponentContext) -> NormBounds:
    if context.p == 2.0:
        top = float(np.linalg.svd(matrix, compute_uv=False)[0])
        return NormBounds(top, top)
    return lp_operator_norm_bounds(OperatorMatrix(matrix, context))


@dataclass(frozen=True)
class CarlemanReport:
    lam: complex
    lhs: NormBounds
    rhs: float
    satisfied_at_bracket: bool
    asserted: bool


def carleman_report(a: OperatorMatrix, system: BiorthogonalSystem,
                    lam: complex) -> CarlemanReport:
    """Norm bracket of phi_lam(A) (lam - A)^{-1} against the exponential bound.

    The Hilbert case (p = 2) uses the exact spectral norm and is the asserted
    path; other exponents are reported against the interpolation bracket.
    """
    res = resolvent(a, lam)
    phi = regularized_determinant(a, lam)
    combined = phi * res.entries
    lhs = _norm_bracket(combined, a.context)
    p = a.context.p
    snorm = sigma_p_norm(a, system)
    rhs = abs(lam) * math.exp(0.5 * (1.0 + snorm ** p / abs(lam) ** 2))
    satisfied = lhs.upper <= rhs * (1.0 + 1e-12)
    return CarlemanReport(lam=complex(lam), lhs=lhs, rhs=rhs,
                          satisfied_at_bracket=satisfied, asserted=p == 2.0)


@dataclass(frozen=True)
class QuasinilpotentResolventReport:
    lam: complex
    lhs: NormBounds
    rhs: float
    satisfied_at_bracket: bool


def quasinilpotent_resolvent_report(n_op: OperatorMatrix, system: BiorthogonalSystem,
                                    lam: complex, margin: float = 1.0
                                    ) -> QuasinilpotentResolventReport:
    """Resolvent-norm bracket of a quasi-nilpotent operator against the
    exponential bound with the free constant ``margin``."""
    if complex(lam) == 0:
        raise ValueError("lambda must be nonzero")
    if not is_quasinilpotent(n_op.entries):
        raise ValueError(f"operator is not quasi-nilpotent (power-trace defect "
                         f"{power_trace_defect(n_op.entries):.3e})")
    lam = complex(lam)
    eye = np.eye(n_op.n, dtype=complex)
    res = np.linalg.solve(lam * eye - n_op.entries, eye)
    lhs = _norm_bracket(res, n_op.context)
    scaled = sigma_p_norm(n_op, system) / abs(lam)
    rhs = abs(lam) * math.exp(margin * (1.0 + scaled ** n_op.context.p))
    return QuasinilpotentResolventReport(lam=lam, lhs=lhs, rhs=rhs,
                                         satisfied_at_bracket=lhs.upper <= rhs * (1 + 1e-12))


class ArcConfiguration:
    """Rays from the origin, strictly increasing angles in [0, 2*pi)."""

    def __init__(self, ray_angles, context: ExponentContext):
        angles = tuple(float(t) for t in ray_angles)
        if not angles:
            raise ValueError("at least one ray is required")
        if any(not 0.0 <= t < 2.0 * math.pi for t in angles):
            raise ValueError("ray angles must lie in [0, 2*pi)")
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise ValueError("ray angles must be strictly increasing")
        self.ray_angles = angles
        self.context = context
        if abs(sum(self.openings()) - 2.0 * math.pi) > 1e-12:
            raise ValueError("sector openings must tile the full circle")

    def openings(self) -> tuple:
        angles = self.ray_angles
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2.0 * math.pi + angles[0] - angles[-1])
        return tuple(gaps)

    @classmethod
    def equally_spaced(cls, count: int, context: ExponentContext,
                       offset: float = 0.0) -> "ArcConfiguration":
        angles = sorted((offset + 2.0 * math.pi * k / count) % (2.0 * math.pi)
                        for k in range(count))
        return cls(angles, context)

    def to_json(self) -> dict:
        return {"angles": list(self.ray_angles), "p": self.context.p}

    @classmethod
    def from_json(cls, data: dict) -> "ArcConfiguration":
        return cls(data["angles"], ExponentContext(float(data["p"])))


@dataclass(frozen=True)
class SectorReport:
    max_opening: float
    threshold: float
    holds: bool
    openings: tuple


def sector_condition_check(arcs: ArcConfiguration) -> SectorReport:
    """Every sector opening must stay strictly below pi / p."""
    openings = arcs.openings()
    max_opening = max(openings)
    threshold = math.pi / arcs.context.p
    # guard band flips float-noise at exact equality to "does not hold"
    holds = max_opening < threshold * (1.0 - 1e-12)
    return SectorReport(max_opening=max_opening, threshold=threshold,
                        holds=holds, openings=openings)


@dataclass(frozen=True)
class RayScan:
    angle: float
    radii: tuple
    lower: tuple
    upper: tuple
    fitted_order: float
    r_squared: float
    regime: str

    @property
    def confident(self) -> bool:
        return self.r_squared >= 0.99

    def rows(self):
        return list(zip(self.radii, self.lower, self.upper))

    def to_json(self) -> dict:
        return {
            "angle": self.angle,
            "regime": self.regime,
            "fitted_order": self.fitted_order,
            "r_squared": self.r_squared,
            "confident": self.confident,
            "samples": [{"radius": r, "norm_lower": lo, "norm_upper": up}
                        for r, lo, up in self.rows()],
        }


def ray_scan(a: OperatorMatrix, angle: float, r_min: float, r_max: float,
             points: int = 48, regime: str = "origin") -> RayScan:
    """Resolvent-norm samples along a ray with a decade log-log order fit.

    ``regime`` picks the decade: "origin" fits over [r_min, 10 r_min] for
    behavior as lambda -> 0, "infinity" over [r_max / 10, r_max].
    """
    if regime not in ("origin", "infinity"):
        raise ValueError("regime must be 'origin' or 'infinity'")
    if not 0.0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    direction = np.exp(1j * angle)
    radii = np.geomspace(r_max, r_min, points)
    eigenvalues = np.linalg.eigvals(a.entries)
    eye = np.eye(a.n, dtype=complex)
    lowers, uppers = [], []
    for r in radii:
        lam = r * direction
        if np.min(np.abs(eigenvalues - lam)) <= 1e-10:
            raise ValueError(f"sampled point {lam} hits the spectrum")
        res = np.linalg.solve(lam * eye - a.entries, eye)
        bracket = _norm_bracket(res, a.context)
        lowers.append(bracket.lower)
        uppers.append(bracket.upper)
    lowers = np.array(lowers)
    uppers = np.array(uppers)
    if regime == "origin":
        mask = radii <= 10.0 * r_min * (1 + 1e-12)
    else:
        mask = radii >= r_max / 10.0 * (1 - 1e-12)
    x = -np.log(radii[mask])
    y = 0.5 * (np.log(lowers[mask]) + np.log(uppers[mask]))
    slope, intercept = np.polyfit(x, y, 1)
    fitted = y - (slope * x + intercept)
    total = float(np.sum((y - np.mean(y)) ** 2))
    if total <= 1e-16 * max(1.0, float(np.sum(y ** 2))):
        r_squared = 1.0  # flat scan: the order-zero fit is exact
    else:
        r_squared = 1.0 - float(np.sum(fitted ** 2)) / total
    return RayScan(angle=float(angle), radii=tuple(float(r) for r in radii),
                   lower=tuple(map(float, lowers)), upper=tuple(map(float, uppers)),
                   fitted_order=float(slope), r_squared=r_squared, regime=regime)
