"""Nonlocal second-order operator boundary value problems on a grid:
assembly, coefficient condition reports, coercive-estimate sweeps, embedding
s-number asymptotics, spectral reports, and the degenerate-weight substitution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .geometry import ExponentContext, OperatorFamily, r_bound_estimate
from .resolvent import ArcConfiguration
from .rootspace import CompletenessReport, completeness_verdict
from .schatten import OperatorMatrix

__all__ = [
    "InteriorTerm",
    "BoundaryFunctional",
    "BvpProblem",
    "dirichlet_conditions",
    "neumann_conditions",
    "CharacteristicData",
    "characteristic_data",
    "validate_problem",
    "Condition1Report",
    "condition1_check",
    "DiscretizedOperator",
    "discretize",
    "discrete_norm",
    "discrete_derivative",
    "CoerciveReport",
    "coercive_estimate_report",
    "EmbeddingReport",
    "embedding_snumbers",
    "BvpSpectralReport",
    "bvp_spectral_report",
    "DegenerateTransform",
    "degenerate_transform",
]


@dataclass(frozen=True)
class InteriorTerm:
    """Contribution of an interior point to a boundary functional."""

    point: float
    coefficients: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients",
                           tuple(complex(c) for c in self.coefficients))


@dataclass(frozen=True)
class BoundaryFunctional:
    """Functional sum_i [alpha_i u^(i)(0) + beta_i u^(i)(L) + interior terms]."""

    order: int
    alpha: tuple
    beta: tuple
    interior: tuple = ()

    def __post_init__(self) -> None:
        if self.order not in (0, 1):
            raise ValueError("boundary functional order must be 0 or 1")
        alpha = tuple(complex(c) for c in self.alpha)
        beta = tuple(complex(c) for c in self.beta)
        if len(alpha) != self.order + 1 or len(beta) != self.order + 1:
            raise ValueError("need one endpoint coefficient per derivative order")
        for term in self.interior:
            if len(term.coefficients) != self.order + 1:
                raise ValueError("interior coefficients must match the order")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "interior", tuple(self.interior))

    @property
    def top_alpha(self) -> complex:
        return self.alpha[self.order]

    @property
    def top_beta(self) -> complex:
        return self.beta[self.order]


def dirichlet_conditions() -> tuple:
    return (BoundaryFunctional(0, (1.0,), (0.0,)),
            BoundaryFunctional(0, (0.0,), (1.0,)))


def neumann_conditions() -> tuple:
    return (BoundaryFunctional(1, (0.0, 1.0), (0.0, 0.0)),
            BoundaryFunctional(1, (0.0, 0.0), (0.0, 1.0)))


@dataclass(frozen=True)
class BvpProblem:
    """Second-order problem a u'' + B u' + A u with two nonlocal conditions.

    ``a`` is a scalar complex coefficient function, ``A_fn`` and ``B_fn``
    return d x d blocks, the weight is weight_scale * x^weight_exponent on
    (0, length).
    """

    a: object
    A_fn: object
    B_fn: object
    conditions: tuple
    weight_exponent: float
    context: ExponentContext
    d: int = 1
    length: float = 1.0
    weight_scale: float = 1.0

    def weight(self, x: float) -> float:
        return self.weight_scale * x ** self.weight_exponent


@dataclass(frozen=True)
class CharacteristicData:
    omega1: complex
    omega2: complex
    eta: complex


def characteristic_data(problem: BvpProblem, x: float) -> CharacteristicData:
    """Roots of a(x) w^2 + 1 = 0 and the boundary determinant built from the
    top-order endpoint coefficients."""
    a_val = complex(problem.a(x))
    if a_val == 0:
        raise ValueError(f"coefficient a vanishes at x = {x}")
    omega1 = complex(np.sqrt(-1.0 / a_val))
    omega2 = -omega1
    first, second = problem.conditions
    m1, m2 = first.order, second.order
    eta = ((-omega1) ** m1 * first.top_alpha * second.top_beta * omega2 ** m2
           - first.top_beta * omega1 ** m1 * (-omega2) ** m2 * second.top_alpha)
    return CharacteristicData(omega1=omega1, omega2=omega2, eta=complex(eta))


def validate_problem(problem: BvpProblem, samples: int = 33) -> None:
    """Coefficient sector membership, nonvanishing determinant, weight range,
    and interior-point placement, checked on a sample grid."""
    p = problem.context.p
    if not 0.0 <= problem.weight_exponent < p - 1.0:
        raise ValueError("weight exponent must lie in [0, p - 1)")
    xs = np.linspace(0.0, problem.length, samples + 2)[1:-1]
    for x in xs:
        a_val = complex(problem.a(x))
        if a_val == 0:
            raise ValueError(f"coefficient a vanishes at x = {x}")
        if abs(np.angle(-a_val)) >= math.pi - 1e-12:
            raise ValueError(f"-a(x) touches the negative real axis at x = {x}")
        data = characteristic_data(problem, x)
        if abs(data.eta) <= 1e-12:
            raise ValueError(f"boundary determinant eta vanishes at x = {x}")
        block = np.asarray(problem.A_fn(x))
        if block.shape != (problem.d, problem.d):
            raise ValueError("A_fn block size does not match d")
    for functional in problem.conditions:
        for term in functional.interior:
            if not 0.0 < term.point < problem.length:
                raise ValueError("interior points must be strictly inside the domain")


@dataclass(frozen=True)
class Condition1Report:
    positivity_bound: float
    r_bound: float
    continuity_defect: float
    lower_order_bound: float
    sector_ok: bool
    eta_ok: bool


def condition1_check(problem: BvpProblem, x_samples: int = 9, xi_samples: int = 12,
                     phi: float = 0.0, mu: float = 0.25, seed: int = 0) -> Condition1Report:
    """Report on the operator-coefficient hypotheses at sampled points.

    Positivity reports the smallest constant in the sampled resolvent bound
    (1 + |lambda|) ||(A(x) + lambda)^{-1}||; R-positivity samples the
    multiplier family; continuity measures successive relative changes of
    A(x) A^{-1}(1/2); the lower-order bound is sup ||B(x) A(x)^{-(1/2 - mu)}||.
    """
    if not 0.0 < mu < 0.5:
        raise ValueError("mu must lie in (0, 1/2)")
    xs = np.linspace(0.0, problem.length, x_samples + 2)[1:-1]
    d = problem.d
    eye = np.eye(d, dtype=complex)
    radii = np.geomspace(1e-3, 1e4, xi_samples)
    angles = [0.0] if phi == 0.0 else [-phi, -phi / 2, 0.0, phi / 2, phi]
    lambdas = [r * np.exp(1j * t) for r in radii for t in angles] + [0.0]
    positivity = 0.0
    r_bound = 0.0
    lower_order = 0.0
    sector_ok = True
    eta_ok = True
    mid_inv = np.linalg.inv(np.asarray(problem.A_fn(problem.length / 2.0), dtype=complex))
    continuity = 0.0
    previous = None
    for x in xs:
        a_block = np.asarray(problem.A_fn(x), dtype=complex)
        for lam in lambdas:
            res = np.linalg.inv(a_block + lam * eye)
            positivity = max(positivity, (1.0 + abs(lam)) * float(np.linalg.norm(res, 2)))
        family = OperatorFamily.resolvent_multipliers(a_block, radii)
        r_bound = max(r_bound, r_bound_estimate(family, problem.context, 256,
                                                seed=seed, trials=16))
        w, v = np.linalg.eig(a_block)
        fractional = v @ np.diag(w.astype(complex) ** (-(0.5 - mu))) @ np.linalg.inv(v)
        b_block = np.asarray(problem.B_fn(x), dtype=complex)
        lower_order = max(lower_order, float(np.linalg.norm(b_block @ fractional, 2)))
        current = a_block @ mid_inv
        if previous is not None:
            continuity = max(continuity, float(np.linalg.norm(current - previous, 2)))
        previous = current
        a_val = complex(problem.a(x))
        sector_ok = sector_ok and abs(np.angle(-a_val)) < math.pi - 1e-12 and a_val != 0
        eta_ok = eta_ok and abs(characteristic_data(problem, x).eta) > 1e-12
    return Condition1Report(positivity_bound=positivity, r_bound=r_bound,
                            continuity_defect=continuity, lower_order_bound=lower_order,
                            sector_ok=sector_ok, eta_ok=eta_ok)


@dataclass(frozen=True)
class DiscretizedOperator:
    """Grid realization of the problem on interior nodes.

    ``matrix`` acts on node-major block vectors of length n * d; the
    boundary rows reconstruct the eliminated endpoint values from the
    interior unknowns.
    """

    grid: np.ndarray
    matrix: np.ndarray
    weight_vector: np.ndarray
    context: ExponentContext
    h: float
    d: int
    boundary_rows: tuple
    problem: BvpProblem = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.grid.size


def discretize(problem: BvpProblem, n: int) -> DiscretizedOperator:
    """Second-order central-difference assembly with boundary elimination.

    Endpoint derivatives use one-sided second-order stencils; interior
    points of the nonlocal functionals are linearly interpolated between
    neighboring nodes.  The two eliminated endpoint values are resolved from
    the 2 x 2 system of boundary functionals.
    """
    if n < 8:
        raise ValueError("need at least 8 interior nodes")
    length = problem.length
    h = length / (n + 1)
    xs = h * np.arange(1, n + 1)
    d = problem.d
    gmat = np.zeros((2, 2), dtype=complex)
    rows = np.zeros((2, n), dtype=complex)

    def deposit(k: int, node: int, value: complex) -> None:
        if node == 0:
            gmat[k, 0] += value
        elif node == n + 1:
            gmat[k, 1] += value
        else:
            rows[k, node - 1] += value

    for k, functional in enumerate(problem.conditions):
        gmat[k, 0] += functional.alpha[0]
        gmat[k, 1] += functional.beta[0]
        if functional.order == 1:
            a1, b1 = functional.alpha[1], functional.beta[1]
            # one-sided second-order endpoint derivatives
            deposit(k, 0, -1.5 * a1 / h)
            deposit(k, 1, 2.0 * a1 / h)
            deposit(k, 2, -0.5 * a1 / h)
            deposit(k, n + 1, 1.5 * b1 / h)
            deposit(k, n, -2.0 * b1 / h)
            deposit(k, n - 1, 0.5 * b1 / h)
        for term in functional.interior:
            position = term.point / h
            left = int(math.floor(position))
            left = min(max(left, 0), n)
            t = position - left
            deposit(k, left, term.coefficients[0] * (1.0 - t))
            deposit(k, left + 1, term.coefficients[0] * t)
            if functional.order == 1:
                deposit(k, left, -term.coefficients[1] / h)
                deposit(k, left + 1, term.coefficients[1] / h)
    det = gmat[0, 0] * gmat[1, 1] - gmat[0, 1] * gmat[1, 0]
    scale = max(1.0, float(np.max(np.abs(gmat))))
    if abs(det) <= 1e-12 * scale:
        raise ValueError("boundary elimination is singular: the functional "
                         "determinant (eta analogue) vanishes")
    reconstruction = -np.linalg.solve(gmat, rows)  # rows: u_0 and u_{n+1}
    q = np.zeros((n * d, n * d), dtype=complex)
    eye = np.eye(d, dtype=complex)
    for i in range(n):
        x = xs[i]
        a_val = complex(problem.a(x))
        a_block = np.asarray(problem.A_fn(x), dtype=complex)
        b_block = np.asarray(problem.B_fn(x), dtype=complex)
        c2 = a_val / h ** 2
        left_block = c2 * eye - b_block / (2.0 * h)
        right_block = c2 * eye + b_block / (2.0 * h)
        sl = slice(i * d, (i + 1) * d)
        q[sl, sl] += -2.0 * c2 * eye + a_block
        if i > 0:
            q[sl, (i - 1) * d:i * d] += left_block
        else:
            for j in range(n):
                q[sl, j * d:(j + 1) * d] += reconstruction[0, j] * left_block
        if i < n - 1:
            q[sl, (i + 1) * d:(i + 2) * d] += right_block
        else:
            for j in range(n):
                q[sl, j * d:(j + 1) * d] += reconstruction[1, j] * right_block
    if not np.all(np.isfinite(q.view(float))):
        raise ValueError("assembled operator has non-finite entries; check the "
                         "coefficient functions")
    weights = problem.weight_scale * xs ** problem.weight_exponent
    if np.any(weights <= 0):
        raise ValueError("weight values must be positive on the interior grid")
    return DiscretizedOperator(grid=xs, matrix=q, weight_vector=weights,
                               context=problem.context, h=h, d=d,
                               boundary_rows=(reconstruction[0], reconstruction[1]),
                               problem=problem)


def _with_boundary(op: DiscretizedOperator, u: np.ndarray) -> np.ndarray:
    """(n + 2) x d node values including the reconstructed endpoints."""
    u = u.reshape(op.n, op.d)
    u0 = op.boundary_rows[0] @ u
    u1 = op.boundary_rows[1] @ u
    return np.concatenate([u0[None, :], u, u1[None, :]], axis=0)


def discrete_derivative(op: DiscretizedOperator, u: np.ndarray, order: int) -> np.ndarray:
    """Central-difference derivative sampled on the interior nodes."""
    full = _with_boundary(op, np.asarray(u, dtype=complex))
    if order == 0:
        return full[1:-1].reshape(-1)
    if order == 1:
        return ((full[2:] - full[:-2]) / (2.0 * op.h)).reshape(-1)
    if order == 2:
        return ((full[2:] - 2.0 * full[1:-1] + full[:-2]) / op.h ** 2).reshape(-1)
    raise ValueError("derivative order must be 0, 1 or 2")


def discrete_norm(op: DiscretizedOperator, u: np.ndarray, exponent: float | None = None) -> float:
    """Weighted grid norm (sum_i w_i h ||u_i||_p^p)^(1/p)."""
    p = exponent or op.context.p
    u = np.asarray(u, dtype=complex).reshape(op.n, op.d)
    node_norms = np.linalg.norm(u, ord=p, axis=1)
    return float(np.sum(op.weight_vector * op.h * node_norms ** p) ** (1.0 / p))


@dataclass(frozen=True)
class CoerciveReport:
    lambdas: tuple
    ratios: tuple
    observed_bound: float
    top_decade_max: float
    stable: bool


def coercive_estimate_report(op: DiscretizedOperator, lambdas, trials: int = 4,
                             seed: int = 0) -> CoerciveReport:
    """Sampled constant in the parameter-weighted regularity estimate.

    For random right-hand sides f the solve (Q + lambda) u = f is measured by
    [sum_i |lambda|^{1 - i/2} ||u^(i)|| + ||A u||] / ||f|| in the weighted
    grid norms; the report flags whether the constant has stopped growing
    over the largest |lambda| decade.
    """
    rng = np.random.default_rng(seed)
    size = op.n * op.d
    rhs = rng.standard_normal((size, trials)) + 1j * rng.standard_normal((size, trials))
    eye = np.eye(size, dtype=complex)
    a_blocks = [np.asarray(op.problem.A_fn(x), dtype=complex) for x in op.grid]
    lam_list = [complex(l) for l in lambdas]
    ratios = []
    for lam in lam_list:
        solution = np.linalg.solve(op.matrix + lam * eye, rhs)
        worst = 0.0
        for t in range(trials):
            u = solution[:, t]
            numerator = 0.0
            for order in range(3):
                du = discrete_derivative(op, u, order)
                numerator += abs(lam) ** (1.0 - order / 2.0) * discrete_norm(op, du)
            au = np.concatenate([a_blocks[i] @ u.reshape(op.n, op.d)[i]
                                 for i in range(op.n)])
            numerator += discrete_norm(op, au)
            worst = max(worst, numerator / discrete_norm(op, rhs[:, t]))
        ratios.append(worst)
    observed = max(ratios)
    magnitudes = np.array([abs(l) for l in lam_list])
    top = magnitudes >= magnitudes.max() / 10.0
    top_decade_max = float(np.max(np.array(ratios)[top]))
    return CoerciveReport(lambdas=tuple(lam_list), ratios=tuple(ratios),
                          observed_bound=float(observed),
                          top_decade_max=top_decade_max,
                          stable=observed <= 1.1 * top_decade_max)


@dataclass(frozen=True)
class EmbeddingReport:
    s_numbers: np.ndarray
    fitted_exponent: float
    expected_exponent: float
    fit_range: tuple
    holds: bool


def _middle_third_slope(values: np.ndarray, count: int) -> tuple:
    lo = count // 3
    hi = 2 * count // 3
    idx = np.arange(lo + 1, hi + 1)
    slope, _ = np.polyfit(np.log(idx), np.log(values[lo:hi]), 1)
    return float(slope), (lo + 1, hi)


def embedding_snumbers(d: int, nu: float, context: ExponentContext,
                       k_max: int | None = None, n: int | None = None,
                       gamma: float = 0.0, length: float = math.pi) -> EmbeddingReport:
    """s-numbers of the grid embedding of the second-order smoothness space
    with operator graph norm into the weighted Lebesgue space.

    The operator block is diag(j^(1/nu)); separability over its eigenbasis
    reduces the generalized singular values to (mu_k + 1 + a_j^2)^(-1/2)
    where mu_k are the weighted fourth-order grid eigenvalues.  The domain
    length pi balances the two mode ladders at finite truncation so the
    mixed decay rate is visible in the fitted window.
    """
    if context.p != 2.0:
        raise ValueError("exact s-numbers require p = 2")
    if d < 64:
        raise ValueError("d must be at least 64 for a stable slope fit")
    n = n or d
    h = length / (n + 1)
    xs = h * np.arange(1, n + 1)
    w = xs ** gamma * h
    diff2 = (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1)
             + np.diag(np.ones(n - 1), -1)) / h ** 2
    kernel = diff2.T @ np.diag(w) @ diff2
    mu = scipy.linalg.eigh(kernel, np.diag(w), eigvals_only=True)
    mu = np.clip(mu, 0.0, None)
    a_sq = (np.arange(1, d + 1) ** (1.0 / nu)) ** 2
    values = mu[:, None] + 1.0 + a_sq[None, :]
    s = np.sort(1.0 / np.sqrt(values.ravel()))[::-1]
    if k_max is None:
        saturation = int(np.count_nonzero(values <= 1.0 + a_sq[-1]))
        k_max = max(48, int(0.9 * saturation))
    k_max = min(k_max, s.size)
    slope, fit_range = _middle_third_slope(s, k_max)
    expected = -2.0 / (2.0 * nu + 1.0)
    return EmbeddingReport(s_numbers=s[:k_max], fitted_exponent=slope,
                           expected_exponent=expected, fit_range=fit_range,
                           holds=abs(slope - expected) <= 0.1)


@dataclass(frozen=True)
class BvpSpectralReport:
    eigenvalues: np.ndarray
    min_gap: float
    median_gap: float
    sector_exponent_ok: bool
    snumber_slope: float | None
    snumber_expected: float | None
    completeness: CompletenessReport | None
    max_relative_distance: float | None


def bvp_spectral_report(op: DiscretizedOperator, arcs: ArcConfiguration, q: float,
                        nu: float, lam: complex = 1.0, sample_count: int = 6,
                        seed: int = 0, fit_count: int | None = None,
                        include: tuple = ("spectrum", "snumbers", "completeness"),
                        ) -> BvpSpectralReport:
    """Discreteness statistics, resolvent s-number decay, and root-span
    completeness for the assembled grid operator.

    ``q`` is the summability exponent of the resolvent class and must exceed
    nu + 1/2; the sector openings of ``arcs`` are checked against pi / q.
    """
    if q <= nu + 0.5:
        raise ValueError("q must exceed nu + 1/2")
    eigenvalues = np.linalg.eigvals(op.matrix)
    order = np.argsort(eigenvalues.real)
    eigenvalues = eigenvalues[order]
    gaps = []
    for i, ev in enumerate(eigenvalues):
        others = np.delete(eigenvalues, i)
        gaps.append(float(np.min(np.abs(others - ev))))
    sector_ok = max(ArcConfiguration(arcs.ray_angles,
                                     ExponentContext(q)).openings()) < math.pi / q * (1 - 1e-12)
    slope = None
    expected = None
    if "snumbers" in include:
        size = op.n * op.d
        eye = np.eye(size, dtype=complex)
        inverse = np.linalg.solve(op.matrix + complex(lam) * eye, eye)
        scale = np.repeat((op.weight_vector * op.h) ** 0.5, op.d)
        weighted = (scale[:, None] * inverse) / scale[None, :]
        svals = np.linalg.svd(weighted, compute_uv=False)
        if fit_count is None:
            level = float(np.max(np.abs(np.asarray(op.problem.A_fn(op.grid[0])))))
            level = max(level, float(op.d ** (1.0 / nu)))
            fit_count = int(0.8 * np.count_nonzero(np.abs(eigenvalues) <= 2.0 * level))
            fit_count = max(fit_count, 24)
        fit_count = min(fit_count, svals.size)
        slope, _ = _middle_third_slope(svals, fit_count)
        expected = -2.0 / (2.0 * nu + 1.0)
    completeness = None
    max_rel = None
    if "completeness" in include:
        node_weights = np.repeat(op.weight_vector * op.h, op.d)
        completeness = completeness_verdict(
            OperatorMatrix(op.matrix, op.context), 0, arcs, sample_count, seed,
            node_weights=node_weights)
        max_rel = completeness.max_relative_distance
    return BvpSpectralReport(eigenvalues=eigenvalues, min_gap=min(gaps),
                             median_gap=float(np.median(gaps)),
                             sector_exponent_ok=bool(sector_ok),
                             snumber_slope=slope, snumber_expected=expected,
                             completeness=completeness,
                             max_relative_distance=max_rel)


@dataclass(frozen=True)
class DegenerateTransform:
    regular: BvpProblem
    b: float
    source_exponent: float
    weight_mode: str
    identity_defect: float

    def y_of_x(self, x):
        g = self.source_exponent
        return np.asarray(x) ** (1.0 - g) / (1.0 - g)

    def x_of_y(self, y):
        g = self.source_exponent
        return ((1.0 - g) * np.asarray(y)) ** (1.0 / (1.0 - g))


def degenerate_transform(problem: BvpProblem, weight_mode: str = "chain_rule",
                         ) -> DegenerateTransform:
    """Substitution y = integral of z^{-gamma} turning the degenerate
    derivative x^gamma d/dx into d/dy on (0, b).

    ``weight_mode`` picks the transformed weight exponent: "chain_rule" uses
    gamma / (1 - gamma) (consistent with the measure transport), while
    "as_printed" uses 1 / (1 - gamma).
    """
    gamma = problem.weight_exponent
    if not 0.0 < gamma < 1.0:
        raise ValueError("the degenerate substitution needs 0 < gamma < 1")
    if abs(problem.length - 1.0) > 1e-14:
        raise ValueError("the degenerate problem is posed on (0, 1)")
    if weight_mode not in ("chain_rule", "as_printed"):
        raise ValueError("weight_mode must be 'chain_rule' or 'as_printed'")
    b = 1.0 / (1.0 - gamma)
    exponent = gamma / (1.0 - gamma) if weight_mode == "chain_rule" else 1.0 / (1.0 - gamma)
    scale = (1.0 - gamma) ** exponent

    def x_of_y(y):
        return ((1.0 - gamma) * y) ** (1.0 / (1.0 - gamma))

    def y_of_x(x):
        return x ** (1.0 - gamma) / (1.0 - gamma)

    mapped_conditions = []
    for functional in problem.conditions:
        mapped_terms = tuple(replace(term, point=float(y_of_x(term.point)))
                             for term in functional.interior)
        mapped_conditions.append(replace(functional, interior=mapped_terms))

    regular = BvpProblem(
        a=lambda y: problem.a(x_of_y(y)),
        A_fn=lambda y: problem.A_fn(x_of_y(y)),
        B_fn=lambda y: problem.B_fn(x_of_y(y)),
        conditions=tuple(mapped_conditions),
        weight_exponent=exponent,
        context=problem.context,
        d=problem.d,
        length=b,
        weight_scale=scale,
    )

    # chain-rule identity x^gamma u'(x) = d/dy u(x(y)) on polynomial probes
    defect = 0.0
    ys = np.linspace(0.15 * b, 0.9 * b, 17)
    step = 1e-3 * b
    for power_ in (1, 2, 3):
        def u(x):
            return x ** power_

        def du(x):
            return power_ * x ** (power_ - 1)

        stencil = (u(x_of_y(ys - 2 * step)) - 8.0 * u(x_of_y(ys - step))
                   + 8.0 * u(x_of_y(ys + step)) - u(x_of_y(ys + 2 * step))) / (12.0 * step)
        direct = x_of_y(ys) ** gamma * du(x_of_y(ys))
        defect = max(defect, float(np.max(np.abs(stencil - direct))))

    return DegenerateTransform(regular=regular, b=b, source_exponent=gamma,
                               weight_mode=weight_mode, identity_defect=defect)
