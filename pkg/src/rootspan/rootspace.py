"""Root-vector machinery: eigenvalue clustering, Jordan chains, spectral
projections via contour quadrature, span distances, and the completeness
verdict combining geometry and decay hypotheses."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from .geometry import ExponentContext
from .resolvent import ArcConfiguration, RayScan, SectorReport, ray_scan, sector_condition_check
from .schatten import OperatorMatrix

__all__ = [
    "EigenCluster",
    "SpectralDecomposition",
    "spectral_decomposition",
    "riesz_projection",
    "root_span_distance",
    "truncate_root_system",
    "CompletenessReport",
    "completeness_verdict",
]


@dataclass(frozen=True)
class EigenCluster:
    eigenvalue: complex
    multiplicity: int
    chains: tuple  # each chain is an (n, length) array, columns v_1..v_r
    projection: np.ndarray | None

    @property
    def chain_lengths(self) -> tuple:
        return tuple(c.shape[1] for c in self.chains)


@dataclass(frozen=True)
class SpectralDecomposition:
    clusters: tuple
    dimension: int
    tol: float

    def root_matrix(self) -> np.ndarray:
        columns = [chain for cluster in self.clusters for chain in cluster.chains]
        if not columns:
            return np.zeros((self.dimension, 0), dtype=complex)
        return np.concatenate(columns, axis=1)

    @property
    def total_multiplicity(self) -> int:
        return sum(c.multiplicity for c in self.clusters)

    def to_json(self) -> dict:
        from .serialize import complex_to_pair, matrix_to_pairs

        return {
            "dimension": self.dimension,
            "tol": self.tol,
            "clusters": [
                {
                    "eigenvalue": complex_to_pair(c.eigenvalue),
                    "multiplicity": c.multiplicity,
                    "chains": [matrix_to_pairs(chain.T) for chain in c.chains],
                }
                for c in self.clusters
            ],
        }


def _cluster_eigenvalues(values: np.ndarray, radius: float):
    """Single-linkage grouping of complex points at the given radius."""
    m = values.size
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return [np.array(idx, dtype=int) for idx in groups.values()]


def _numerical_nullspace(matrix: np.ndarray, threshold: float):
    _, svals, vh = np.linalg.svd(matrix)
    count = int(np.sum(svals <= threshold))
    if count == 0:
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    return np.conj(vh[-count:]).T


def _jordan_chains(a: np.ndarray, center: complex, multiplicity: int, radius: float):
    """Nullspace-ladder chain construction around one eigenvalue cluster."""
    n = a.shape[0]
    shifted = a - center * np.eye(n, dtype=complex)
    if multiplicity == 1:
        vec = _numerical_nullspace_vector(shifted)
        return (vec[:, None],)
    norm_e = max(1.0, float(np.linalg.norm(shifted, 2)))
    nullities = [0]
    spaces = [np.zeros((n, 0), dtype=complex)]
    power = np.eye(n, dtype=complex)
    depth = 0
    while nullities[-1] < multiplicity and depth < multiplicity:
        depth += 1
        power = power @ shifted
        threshold = 10.0 * depth * norm_e ** (depth - 1) * radius
        space = _numerical_nullspace(power, threshold)
        nullity = min(max(space.shape[1], nullities[-1]), multiplicity)
        nullities.append(nullity)
        spaces.append(space)
    if nullities[-1] != multiplicity:
        raise ValueError(f"chain ladder for eigenvalue {center} resolved only "
                         f"{nullities[-1]} of {multiplicity} root directions")
    # number of blocks of each size from the nullity increments
    increments = [nullities[j + 1] - nullities[j] for j in range(depth)]
    blocks = []
    for size in range(depth, 0, -1):
        count = increments[size - 1] - (increments[size] if size < depth else 0)
        blocks.extend([size] * max(count, 0))
    chains = []
    used = np.zeros((n, 0), dtype=complex)
    for size in blocks:
        big = spaces[size]
        small = spaces[size - 1]
        exclusion = np.concatenate([small, used], axis=1)
        candidate = _most_independent_column(big, exclusion)
        chain = [candidate]
        for _ in range(size - 1):
            chain.append(shifted @ chain[-1])
        chain.reverse()  # v_1 = E^{s-1} v is the eigenvector
        mat = np.stack(chain, axis=1)
        mat /= np.linalg.norm(mat[:, 0])
        chains.append(mat)
        used = np.concatenate([used, mat], axis=1)
    return tuple(chains)


def _numerical_nullspace_vector(matrix: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(matrix)
    return np.conj(vh[-1])


def _most_independent_column(candidates: np.ndarray, exclusion: np.ndarray) -> np.ndarray:
    """Candidate basis column with the largest residual off the exclusion span."""
    if candidates.shape[1] == 0:
        raise ValueError("empty candidate nullspace")
    if exclusion.shape[1] == 0:
        return candidates[:, 0]
    q, _ = np.linalg.qr(exclusion)
    residuals = candidates - q @ (np.conj(q).T @ candidates)
    scores = np.linalg.norm(residuals, axis=0)
    return candidates[:, int(np.argmax(scores))]


def spectral_decomposition(a: OperatorMatrix, tol: float = 1e-8) -> SpectralDecomposition:
    """Eigenvalue clusters with Jordan chains and chain-based projections."""
    if tol < 1e-10:
        raise ValueError("tol must be at least 1e-10")
    eigenvalues = np.linalg.eigvals(a.entries)
    radius = tol * (1.0 + float(np.max(np.abs(eigenvalues))))
    groups = _cluster_eigenvalues(eigenvalues, radius)
    raw = []
    for idx in groups:
        center = complex(np.mean(eigenvalues[idx]))
        multiplicity = int(idx.size)
        chains = _jordan_chains(a.entries, center, multiplicity, radius)
        raw.append((center, multiplicity, chains))
    raw.sort(key=lambda item: (item[0].real, item[0].imag))
    basis = np.concatenate([chain for _, _, chains in raw for chain in chains], axis=1)
    inverse = np.linalg.inv(basis)
    clusters = []
    offset = 0
    for center, multiplicity, chains in raw:
        selector = np.zeros(a.n)
        selector[offset:offset + multiplicity] = 1.0
        projection = basis @ (selector[:, None] * inverse)
        clusters.append(EigenCluster(eigenvalue=center, multiplicity=multiplicity,
                                     chains=chains, projection=projection))
        offset += multiplicity
    return SpectralDecomposition(clusters=tuple(clusters), dimension=a.n, tol=tol)


def riesz_projection(a: OperatorMatrix, center: complex, radius: float,
                     quad_points: int = 128) -> OperatorMatrix:
    """Spectral projection by trapezoidal contour quadrature on a circle.

    The circle must separate the enclosed cluster from the rest of the
    spectrum; eigenvalues closer to the circle than ten quadrature spacings
    are rejected.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    center = complex(center)
    eigenvalues = np.linalg.eigvals(a.entries)
    spacing = 2.0 * math.pi * radius / quad_points
    ring_distance = np.abs(np.abs(eigenvalues - center) - radius)
    if np.min(ring_distance) < 10.0 * spacing:
        raise ValueError("circle passes too close to an eigenvalue for the "
                         "quadrature spacing; shrink the radius or add points")
    eye = np.eye(a.n, dtype=complex)
    total = np.zeros_like(eye)
    for m in range(quad_points):
        phase = np.exp(2j * math.pi * m / quad_points)
        zeta = center + radius * phase
        total += phase * np.linalg.solve(zeta * eye - a.entries, eye)
    return OperatorMatrix(total * (radius / quad_points), a.context)


def root_span_distance(decomposition: SpectralDecomposition, u, context: ExponentContext,
                       node_weights=None) -> float:
    """Upper bound on the lp distance from u to the root-vector span.

    Exact (least squares) for p = 2; other exponents refine the p = 2
    solution by smooth minimization of the lp residual.
    """
    u = np.asarray(u, dtype=complex)
    p = context.p
    if node_weights is not None:
        scale = np.asarray(node_weights, dtype=float) ** (1.0 / p)
        u = u * scale
    basis = decomposition.root_matrix()
    if node_weights is not None and basis.shape[1]:
        basis = basis * scale[:, None]
    if basis.shape[1] == 0:
        return float(np.linalg.norm(u, p))
    coeff, *_ = np.linalg.lstsq(basis, u, rcond=None)
    if p == 2.0:
        return float(np.linalg.norm(u - basis @ coeff, 2))

    def objective(x):
        c = x[:basis.shape[1]] + 1j * x[basis.shape[1]:]
        r = u - basis @ c
        mags = np.abs(r)
        value = float(np.sum(mags ** p))
        scaled = np.where(mags > 0, mags ** (p - 2.0), 0.0) * np.conj(r)
        grad_c = -p * (np.conj(basis).T @ np.conj(scaled))
        # gradient with respect to the real and imaginary parts of c
        return value, np.concatenate([grad_c.real, grad_c.imag])

    x0 = np.concatenate([coeff.real, coeff.imag])
    start_value = objective(x0)[0]
    result = scipy.optimize.minimize(objective, x0, jac=True, method="L-BFGS-B")
    best = min(start_value, float(result.fun))
    return float(max(best, 0.0) ** (1.0 / p))


def truncate_root_system(decomposition: SpectralDecomposition, remove: int) -> SpectralDecomposition:
    """Deliberately deficient copy with the last `remove` root vectors dropped;
    used to exercise the failure path of the completeness verdict."""
    if remove <= 0:
        return decomposition
    clusters = list(decomposition.clusters)
    removed = 0
    out = []
    for cluster in reversed(clusters):
        chains = list(cluster.chains)
        while chains and removed < remove:
            chain = chains[-1]
            if chain.shape[1] > 1:
                chains[-1] = chain[:, :-1]
            else:
                chains.pop()
            removed += 1
        out.append(replace(cluster, chains=tuple(chains), projection=None))
    out.reverse()
    return SpectralDecomposition(clusters=tuple(out), dimension=decomposition.dimension,
                                 tol=decomposition.tol)


@dataclass(frozen=True)
class CompletenessReport:
    sector: SectorReport
    rays: tuple
    decay_orders_hold: bool
    regime: str
    max_distance: float
    max_relative_distance: float
    complete: bool

    def to_json(self) -> dict:
        return {
            "hypotheses": {
                "sector_openings_hold": self.sector.holds,
                "decay_orders_hold": self.decay_orders_hold,
            },
            "regime": self.regime,
            "max_opening": self.sector.max_opening,
            "opening_threshold": self.sector.threshold,
            "rays": [scan.to_json() for scan in self.rays],
            "max_distance": self.max_distance,
            "max_relative_distance": self.max_relative_distance,
            "complete": self.complete,
        }


def completeness_verdict(a: OperatorMatrix, m: int, arcs: ArcConfiguration,
                         sample_count: int, seed: int,
                         decomposition: SpectralDecomposition | None = None,
                         r_min: float | None = None, r_max: float | None = None,
                         scan_points: int = 48, tol: float = 1e-7,
                         node_weights=None) -> CompletenessReport:
    """Sector and decay hypotheses plus a sampled root-span distance check.

    With m > 0 the decay order is fitted near the origin and must stay at or
    below m; the m = 0 variant checks first-order decay at infinity instead.
    The distance check applies A^m to seeded random vectors and verifies the
    span of the root vectors catches them.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    decomposition = decomposition or spectral_decomposition(a, tol)
    sector = sector_condition_check(arcs)
    eigenvalues = np.linalg.eigvals(a.entries)
    scale = 1.0 + float(np.max(np.abs(eigenvalues)))
    regime = "infinity" if m == 0 else "origin"
    if regime == "origin":
        lo = 1e-6 * scale if r_min is None else r_min
        hi = 2.0 * scale if r_max is None else r_max
    else:
        hi = 1e3 * scale if r_max is None else r_max
        lo = 1e-2 * scale if r_min is None else r_min
    rays = []
    orders_ok = True
    for angle in arcs.ray_angles:
        scan = ray_scan(a, angle, lo, hi, points=scan_points, regime=regime)
        if regime == "origin":
            ok = scan.fitted_order <= m + 0.1
        else:
            ok = scan.fitted_order >= 1.0 - 0.1
        orders_ok = orders_ok and ok
        rays.append(scan)
    rng = np.random.default_rng(seed)
    power = np.linalg.matrix_power(a.entries, m)
    max_distance = 0.0
    max_relative = 0.0
    for _ in range(sample_count):
        u = rng.standard_normal(a.n) + 1j * rng.standard_normal(a.n)
        target = power @ u
        dist = root_span_distance(decomposition, target, a.context,
                                  node_weights=node_weights)
        if node_weights is None:
            norm = float(np.linalg.norm(target, a.context.p))
        else:
            w = np.asarray(node_weights, dtype=float)
            norm = float(np.linalg.norm(target * w ** (1.0 / a.context.p), a.context.p))
        max_distance = max(max_distance, dist)
        if norm > 0:
            max_relative = max(max_relative, dist / norm)
    complete = sector.holds and orders_ok and max_relative <= 1e-6
    return CompletenessReport(sector=sector, rays=tuple(rays),
                              decay_orders_hold=orders_ok, regime=regime,
                              max_distance=max_distance,
                              max_relative_distance=max_relative, complete=complete)
