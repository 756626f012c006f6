"""Quasi-nuclear sigma_p norms over biorthogonal systems, lp operator-norm
brackets, approximation numbers, and the eigenvalue/singular-value check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BiorthogonalSystem, ExponentContext, b_condition_constant

__all__ = [
    "OperatorMatrix",
    "NormBounds",
    "sigma_p_norm",
    "sigma_dual_norm",
    "lp_operator_norm_bounds",
    "approximation_numbers",
    "weyl_check",
    "WeylReport",
    "basis_equivalence_check",
    "BasisEquivalenceReport",
    "adjoint_norm_identity",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex square matrix with an attached exponent context."""

    entries: np.ndarray
    context: ExponentContext

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(entries.view(float))):
            raise ValueError("operator matrix must have finite entries")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        from .serialize import matrix_to_flat_pairs

        return {"n": self.n, "entries": matrix_to_flat_pairs(self.entries)}

    @classmethod
    def from_json(cls, data: dict, context: ExponentContext) -> "OperatorMatrix":
        from .serialize import flat_pairs_to_matrix

        return cls(flat_pairs_to_matrix(data["entries"], int(data["n"])), context)

    @classmethod
    def from_csv(cls, path, context: ExponentContext) -> "OperatorMatrix":
        from .serialize import read_complex_csv

        return cls(read_complex_csv(path), context)


@dataclass(frozen=True)
class NormBounds:
    """Bracket [lower, upper] around a norm value."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        lower = float(self.lower)
        upper = float(self.upper)
        if lower < 0.0 and lower > -1e-12:
            lower = 0.0
        if upper < lower:
            if lower - upper > 1e-9 * max(1.0, lower):
                raise ValueError(f"invalid bracket [{lower}, {upper}]")
            upper = lower
        if lower < 0.0:
            raise ValueError("norm bracket must be nonnegative")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


def pair_table(a: OperatorMatrix, system: BiorthogonalSystem) -> np.ndarray:
    """Matrix of pairings <A e_j, f_i> (row i, column j)."""
    if a.n != system.n:
        raise ValueError(f"operator size {a.n} does not match system size {system.n}")
    return system.dual.T @ a.entries @ system.primal


def sigma_p_norm(a: OperatorMatrix, system: BiorthogonalSystem) -> float:
    """Entrywise lp norm of the pairing table: the quasi-nuclear norm."""
    table = pair_table(a, system)
    return float(np.linalg.norm(table.ravel(), a.context.p))


def sigma_dual_norm(b: OperatorMatrix, system: BiorthogonalSystem) -> float:
    """Quasi-nuclear norm of the bilinear adjoint (transpose) computed in the
    swapped system, with the dual exponent q."""
    if b.n != system.n:
        raise ValueError("operator size does not match system size")
    table = system.primal.T @ b.entries.T @ system.dual
    return float(np.linalg.norm(table.ravel(), b.context.q))


def lp_operator_norm_bounds(a: OperatorMatrix, probe_count: int = 96, seed: int = 0) -> NormBounds:
    """Bracket for the lp -> lp operator norm.

    Upper bound interpolates the exact l1 and linf norms; the lower bound is
    a seeded search over coordinate and random unit vectors.
    """
    p, q = a.context.p, a.context.q
    mags = np.abs(a.entries)
    col_l1 = float(np.max(mags.sum(axis=0)))
    row_l1 = float(np.max(mags.sum(axis=1)))
    upper = col_l1 ** (1.0 / p) * row_l1 ** (1.0 / q)
    rng = np.random.default_rng(seed)
    n = a.n
    probes = rng.standard_normal((n, probe_count)) + 1j * rng.standard_normal((n, probe_count))
    probes = np.concatenate([np.eye(n, dtype=complex), probes], axis=1)
    images = a.entries @ probes
    in_norms = np.linalg.norm(probes, ord=p, axis=0)
    out_norms = np.linalg.norm(images, ord=p, axis=0)
    lower = float(np.max(out_norms / in_norms))
    return NormBounds(min(lower, upper), max(lower, upper))


def approximation_numbers(a: OperatorMatrix, k_max: int):
    """Brackets for the first k_max approximation numbers.

    For p = 2 these are the singular values and the brackets collapse; for
    other exponents each bracket encloses the lp norm of the residual after
    subtracting the best rank-(j-1) singular-value truncation, so the upper
    entries bound s_j from above.
    """
    n = a.n
    if not 1 <= k_max <= n:
        raise ValueError(f"k_max must lie in [1, {n}]")
    if a.context.p == 2.0:
        svals = np.linalg.svd(a.entries, compute_uv=False)
        return tuple(NormBounds(float(s), float(s)) for s in svals[:k_max])
    u, s, vh = np.linalg.svd(a.entries)
    out = []
    best_upper = math.inf
    for j in range(1, k_max + 1):
        rank = j - 1
        truncation = (u[:, :rank] * s[:rank]) @ vh[:rank] if rank else np.zeros_like(a.entries)
        residual = OperatorMatrix(a.entries - truncation, a.context)
        bracket = lp_operator_norm_bounds(residual)
        best_upper = min(best_upper, bracket.upper)
        out.append(NormBounds(min(bracket.lower, best_upper), best_upper))
    return tuple(out)


@dataclass(frozen=True)
class WeylReport:
    lhs: float
    rhs: float
    holds: bool


def weyl_check(a: OperatorMatrix) -> WeylReport:
    """Eigenvalue power sum against the approximation-number power sum."""
    p = a.context.p
    eigenvalues = np.linalg.eigvals(a.entries)
    lhs = float(np.sum(np.abs(eigenvalues) ** p))
    if p == 2.0:
        svals = np.linalg.svd(a.entries, compute_uv=False)
        rhs = float(np.sum(svals ** 2))
    else:
        rhs = float(sum(nb.upper ** p for nb in approximation_numbers(a, a.n)))
    return WeylReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-9)


@dataclass(frozen=True)
class BasisEquivalenceReport:
    ratio: float
    bound: float
    holds: bool


def basis_equivalence_check(a: OperatorMatrix, system1: BiorthogonalSystem,
                            system2: BiorthogonalSystem, sample_count: int = 400,
                            seed: int = 0) -> BasisEquivalenceReport:
    """Quotient of the two quasi-nuclear norms against the product of the
    systems' estimated geometry constants."""
    if system1.n != system2.n:
        raise ValueError("systems must share a dimension")
    n1 = sigma_p_norm(a, system1)
    n2 = sigma_p_norm(a, system2)
    if (n1 == 0.0) != (n2 == 0.0):
        raise ValueError("one basis reports a zero norm while the other does not")
    ratio = 1.0 if n1 == n2 == 0.0 else n1 / n2
    c1 = b_condition_constant(system1, sample_count, seed)
    c2 = b_condition_constant(system2, sample_count, seed + 1)
    bound = c1 * c2
    holds = ratio <= bound + 1e-9 and 1.0 / ratio <= bound + 1e-9
    return BasisEquivalenceReport(ratio=ratio, bound=bound, holds=holds)


def adjoint_norm_identity(a: OperatorMatrix, system: BiorthogonalSystem) -> dict:
    """Primal norm against the transpose computed in the swapped system."""
    primal = sigma_p_norm(a, system)
    table = system.primal.T @ a.entries.T @ system.dual
    dual = float(np.linalg.norm(table.ravel(), a.context.p))
    return {"primal": primal, "dual": dual}
