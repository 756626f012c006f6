"""Bilinear trace of operator pairs, its symmetry and Holder bound, the
polynomial functional calculus, and the vanishing trace of nilpotents."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BiorthogonalSystem
from .schatten import OperatorMatrix, sigma_dual_norm, sigma_p_norm

__all__ = [
    "AnalyticFunctionSpec",
    "trace_pair",
    "trace_symmetry_check",
    "trace_holder_check",
    "HolderReport",
    "apply_function",
    "spectral_trace_check",
    "SpectralTraceReport",
    "power_trace_defect",
    "is_quasinilpotent",
    "quasinilpotent_trace",
]


@dataclass(frozen=True)
class AnalyticFunctionSpec:
    """Polynomial c_1 z + ... + c_K z^K; the constant term is fixed at zero."""

    coefficients: tuple

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("at least one coefficient is required")
        object.__setattr__(self, "coefficients", coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full_like(z, self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            acc = acc * z + c
        return acc * z

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=complex)
        eye = np.eye(matrix.shape[0], dtype=complex)
        acc = self.coefficients[-1] * eye
        for c in reversed(self.coefficients[:-1]):
            acc = acc @ matrix + c * eye
        return acc @ matrix

    def to_json(self) -> dict:
        from .serialize import vector_to_pairs

        return {"coeffs": vector_to_pairs(np.array(self.coefficients))}

    @classmethod
    def from_json(cls, data: dict) -> "AnalyticFunctionSpec":
        from .serialize import pairs_to_vector

        return cls(tuple(pairs_to_vector(data["coeffs"])))


def apply_function(spec: AnalyticFunctionSpec, a: OperatorMatrix) -> OperatorMatrix:
    """Horner evaluation of the polynomial at the matrix."""
    return OperatorMatrix(spec.apply(a.entries), a.context)


def trace_pair(a: OperatorMatrix, b: OperatorMatrix, system: BiorthogonalSystem) -> complex:
    """Sum of pairings <A e_i, B^T f_i> over the system."""
    if a.n != b.n or a.n != system.n:
        raise ValueError("operator and system dimensions must agree")
    table = system.dual.T @ (b.entries @ a.entries) @ system.primal
    return complex(np.trace(table))


def trace_symmetry_check(a: OperatorMatrix, b: OperatorMatrix,
                         system: BiorthogonalSystem) -> dict:
    delta = abs(trace_pair(a, b, system) - trace_pair(b, a, system))
    return {"delta": float(delta)}


@dataclass(frozen=True)
class HolderReport:
    lhs: float
    rhs: float
    holds: bool


def trace_holder_check(a: OperatorMatrix, b: OperatorMatrix,
                       system: BiorthogonalSystem) -> HolderReport:
    """|trace| against the product of the sigma_p and dual sigma_q norms."""
    lhs = abs(trace_pair(a, b, system))
    rhs = sigma_p_norm(a, system) * sigma_dual_norm(b, system)
    return HolderReport(lhs=float(lhs), rhs=float(rhs), holds=lhs <= rhs + 1e-9)


@dataclass(frozen=True)
class SpectralTraceReport:
    trace_side: complex
    eigen_side: complex
    delta: float
    holds: bool


def spectral_trace_check(a: OperatorMatrix, f: AnalyticFunctionSpec,
                         g: AnalyticFunctionSpec,
                         system: BiorthogonalSystem) -> SpectralTraceReport:
    """Trace of (F(A), g(A)) against the eigenvalue sum of F * g."""
    trace_side = trace_pair(apply_function(f, a), apply_function(g, a), system)
    eigenvalues = np.linalg.eigvals(a.entries)
    eigen_side = complex(np.sum(f(eigenvalues) * g(eigenvalues)))
    delta = abs(trace_side - eigen_side)
    return SpectralTraceReport(trace_side=trace_side, eigen_side=eigen_side,
                               delta=float(delta),
                               holds=delta <= 1e-8 * (1.0 + abs(eigen_side)))


def power_trace_defect(matrix: np.ndarray) -> float:
    """max_k |tr(M^k)| for M = N normalized by its Frobenius norm, k <= n.

    The power traces of a matrix vanish for k = 1..n exactly when the matrix
    is nilpotent, and unlike computed eigenvalues they are stable under
    similarity: this is the robust nilpotency certificate.
    """
    matrix = np.asarray(matrix, dtype=complex)
    scale = float(np.linalg.norm(matrix))
    if scale == 0.0:
        return 0.0
    m = matrix / scale
    power = m.copy()
    worst = abs(np.trace(power))
    for _ in range(matrix.shape[0] - 1):
        power = power @ m
        worst = max(worst, abs(np.trace(power)))
    return float(worst)


def is_quasinilpotent(matrix: np.ndarray, tol: float = 1e-8) -> bool:
    return power_trace_defect(matrix) <= tol


def quasinilpotent_trace(n_op: OperatorMatrix, system: BiorthogonalSystem,
                         tol: float = 1e-8) -> complex:
    """Trace of (N, N) for a quasi-nilpotent operator; vanishes up to rounding."""
    if not is_quasinilpotent(n_op.entries, tol):
        defect = power_trace_defect(n_op.entries)
        raise ValueError(f"operator is not quasi-nilpotent at tolerance {tol:.0e} "
                         f"(power-trace defect {defect:.3e})")
    value = trace_pair(n_op, n_op, system)
    bound = 1e-10 * max(sigma_p_norm(n_op, system) ** 2, 1e-300)
    if abs(value) > bound:
        raise ValueError(f"nilpotent trace {abs(value):.3e} exceeds the rounding "
                         f"budget {bound:.3e}")
    return value
