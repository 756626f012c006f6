"""Sequence-space geometry: exponent pairs, biorthogonal systems, power
weights, and randomized estimates of the associated constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExponentContext",
    "BiorthogonalSystem",
    "PowerWeight",
    "OperatorFamily",
    "pairing",
    "fourier_coefficients",
    "synthesize",
    "b_condition_constant",
    "ap_constant",
    "rademacher_quotient",
    "r_bound_estimate",
]


@dataclass(frozen=True)
class ExponentContext:
    """A Lebesgue exponent p in (1, inf) together with its stored dual q."""

    p: float
    q: float | None = None

    def __post_init__(self) -> None:
        if not 1.0 < self.p < math.inf:
            raise ValueError(f"exponent p must lie in (1, inf), got {self.p!r}")
        if self.q is None:
            object.__setattr__(self, "q", self.p / (self.p - 1.0))
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-12:
            raise ValueError("dual exponent mismatch: 1/p + 1/q must equal 1")


def _lp(v: np.ndarray, p: float) -> float:
    return float(np.linalg.norm(v, p))


def pairing(u, f) -> complex:
    """Bilinear duality value <u, f> = sum_j u_j f_j (no conjugation)."""
    u = np.asarray(u, dtype=complex)
    f = np.asarray(f, dtype=complex)
    if u.ndim != 1 or u.shape != f.shape:
        raise ValueError(f"pairing needs equal-length vectors, got {u.shape} and {f.shape}")
    return complex(np.sum(u * f))


def _holder_extremal(f: np.ndarray, p: float, q: float) -> np.ndarray:
    """Unit lp vector v maximizing the bilinear pairing <v, f>."""
    a = np.abs(f)
    peak = float(np.max(a))
    if peak == 0.0:
        raise ValueError("cannot norm against the zero functional")
    a = a / peak
    v = np.zeros_like(f, dtype=complex)
    nz = a > 1e-15
    v[nz] = a[nz] ** (q - 2.0) * np.conj(f[nz]) / peak
    return v / _lp(v, p)


class BiorthogonalSystem:
    """Truncated biorthonormal pair {e_j} / {f_i} with unit lp / lq columns.

    ``primal`` holds e_1..e_n as columns, ``dual`` the coefficient vectors of
    the functionals f_1..f_n.  Construction validates <e_j, f_i> = delta_ij
    and the two unit-norm constraints; use the classmethods to obtain systems
    that satisfy them by design.
    """

    def __init__(self, primal, dual, context: ExponentContext, validate: bool = True):
        primal = np.array(primal, dtype=complex)
        dual = np.array(dual, dtype=complex)
        if primal.ndim != 2 or primal.shape[0] != primal.shape[1]:
            raise ValueError("primal vectors must form a square matrix")
        if dual.shape != primal.shape:
            raise ValueError("dual vectors must match the primal shape")
        self.n = primal.shape[0]
        self.primal = primal
        self.dual = dual
        self.context = context
        if validate:
            self.validate()

    def validate(self, tol: float = 1e-10) -> None:
        gram = self.dual.T @ self.primal  # (i, j) entry is <e_j, f_i>
        defect = float(np.max(np.abs(gram - np.eye(self.n))))
        if defect > tol:
            raise ValueError(f"biorthogonality defect {defect:.3e} exceeds {tol:.0e}")
        p, q = self.context.p, self.context.q
        en = np.linalg.norm(self.primal, ord=p, axis=0)
        fn = np.linalg.norm(self.dual, ord=q, axis=0)
        worst = float(max(np.max(np.abs(en - 1.0)), np.max(np.abs(fn - 1.0))))
        if worst > tol:
            raise ValueError(f"unit-norm defect {worst:.3e} exceeds {tol:.0e}")

    @classmethod
    def canonical(cls, n: int, context: ExponentContext) -> "BiorthogonalSystem":
        eye = np.eye(n, dtype=complex)
        return cls(eye, eye.copy(), context, validate=False)

    @classmethod
    def signed_permutation(cls, context: ExponentContext, permutation, phases=None) -> "BiorthogonalSystem":
        """Canonical basis reordered by ``permutation`` with unimodular phases."""
        perm = np.asarray(permutation, dtype=int)
        n = perm.size
        if sorted(perm.tolist()) != list(range(n)):
            raise ValueError("not a permutation")
        if phases is None:
            phases = np.ones(n, dtype=complex)
        phases = np.asarray(phases, dtype=complex)
        if np.any(np.abs(np.abs(phases) - 1.0) > 1e-14):
            raise ValueError("phases must be unimodular")
        primal = np.zeros((n, n), dtype=complex)
        dual = np.zeros((n, n), dtype=complex)
        for j in range(n):
            primal[perm[j], j] = phases[j]
            dual[perm[j], j] = 1.0 / phases[j]
        return cls(primal, dual, context)

    @classmethod
    def from_unitary(cls, unitary, context: ExponentContext) -> "BiorthogonalSystem":
        """Hilbert-case system e_j = U d_j, f_j = conj(e_j); requires p = 2."""
        if abs(context.p - 2.0) > 1e-14:
            raise ValueError("unitary images are unit-norm systems only for p = 2")
        u = np.asarray(unitary, dtype=complex)
        return cls(u, np.conj(u), context)

    @classmethod
    def fourier(cls, n: int, context: ExponentContext, seed: int | None = None) -> "BiorthogonalSystem":
        """Scaled DFT system, exactly valid for every p; optional random
        column phases and permutation for variety."""
        k = np.arange(n)
        dft = np.exp(2j * math.pi * np.outer(k, k) / n)
        primal = dft * n ** (-1.0 / context.p)
        dual = np.conj(dft) * n ** (-1.0 / context.q)
        if seed is not None:
            rng = np.random.default_rng(seed)
            phases = np.exp(2j * math.pi * rng.random(n))
            perm = rng.permutation(n)
            primal = primal[:, perm] * phases
            dual = dual[:, perm] / phases
        return cls(primal, dual, context)

    @classmethod
    def random(cls, n: int, context: ExponentContext, seed: int, spread: float = 1.0,
               max_sweeps: int = 6000, tol: float = 5e-11) -> "BiorthogonalSystem":
        """Random valid system via determinant-ascent (Auerbach) iteration.

        Starting from a random perturbation of the identity, each sweep
        replaces a column by the Holder-extremal vector of its dual
        functional.  |det| increases monotonically and at the fixed point all
        dual columns have unit lq norm.  The tail of the iteration can be
        sublinear, so a plateau just inside the validation tolerance is
        accepted and a few deterministic restarts are attempted.
        """
        p, q = context.p, context.q
        stall_tol = 9e-11
        for attempt in range(4):
            rng = np.random.default_rng(seed + 9973 * attempt)
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            e = np.eye(n, dtype=complex) + spread * g / math.sqrt(n)
            e /= np.linalg.norm(e, ord=p, axis=0)
            finv = np.linalg.inv(e)
            best = math.inf
            since_progress = 0
            for sweep in range(max_sweeps):
                if sweep % 40 == 0:
                    finv = np.linalg.inv(e)  # refresh rank-one update drift
                qn = np.linalg.norm(finv, ord=q, axis=1)
                dev = float(np.max(np.abs(qn - 1.0)))
                if dev <= tol:
                    return cls(e, np.linalg.inv(e).T, context)
                if dev < 0.999 * best:
                    best, since_progress = dev, 0
                else:
                    since_progress += 1
                if best <= stall_tol and since_progress > 200:
                    break
                for j in range(n):
                    v = _holder_extremal(finv[j, :], p, q)
                    u = v - e[:, j]
                    denom = 1.0 + finv[j, :] @ u
                    finv -= np.outer(finv @ u, finv[j, :]) / denom
                    e[:, j] = v
            if best <= stall_tol:
                finv = np.linalg.inv(e)
                qn = np.linalg.norm(finv, ord=q, axis=1)
                if float(np.max(np.abs(qn - 1.0))) <= stall_tol:
                    return cls(e, finv.T, context)
        raise RuntimeError("biorthogonal ascent did not converge; try another seed")

    def to_json(self) -> dict:
        from .serialize import matrix_to_pairs

        return {
            "n": self.n,
            "p": self.context.p,
            "e": matrix_to_pairs(self.primal.T),
            "f": matrix_to_pairs(self.dual.T),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BiorthogonalSystem":
        from .serialize import pairs_to_matrix

        context = ExponentContext(float(data["p"]))
        primal = pairs_to_matrix(data["e"]).T
        dual = pairs_to_matrix(data["f"]).T
        return cls(primal, dual, context)


def fourier_coefficients(u, system: BiorthogonalSystem) -> np.ndarray:
    """Coefficients alpha_j = <u, f_j> of u against the dual vectors."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (system.n,):
        raise ValueError(f"vector length {u.shape} does not match system dimension {system.n}")
    return system.dual.T @ u


def synthesize(coefficients, system: BiorthogonalSystem) -> np.ndarray:
    """Reassemble sum_j alpha_j e_j."""
    alpha = np.asarray(coefficients, dtype=complex)
    if alpha.shape != (system.n,):
        raise ValueError("coefficient length does not match system dimension")
    return system.primal @ alpha


@dataclass(frozen=True)
class PowerWeight:
    """Weight x^exponent on the interval (0, b)."""

    exponent: float
    b: float = 1.0

    def __post_init__(self) -> None:
        if self.exponent <= -1.0:
            raise ValueError("power weight needs exponent > -1 for integrability near 0")
        if self.b <= 0.0:
            raise ValueError("interval length must be positive")

    def to_json(self) -> dict:
        return {"gamma": self.exponent, "b": self.b}

    @classmethod
    def from_json(cls, data: dict) -> "PowerWeight":
        return cls(float(data["gamma"]), float(data["b"]))


def b_condition_constant(system: BiorthogonalSystem, sample_count: int, seed: int,
                         ascent_steps: int = 200) -> float:
    """Estimated least C with ||u||_p^p <= C * sum_j |<u, f_j>|^p.

    Sampling covers random directions, coordinate vectors and the primal
    columns, followed by a seeded hill climb from the best candidate.  The
    value is an estimate of the supremum, not a certificate.
    """
    if sample_count < 100:
        raise ValueError("sample_count must be at least 100")
    n, p = system.n, system.context.p
    if not np.all(np.isfinite(system.primal)) or abs(np.linalg.det(system.primal)) < 1e-300:
        raise ValueError("degenerate system: primal matrix is not invertible")
    dual_t = system.dual.T
    rng = np.random.default_rng(seed)

    def ratio_of(mat: np.ndarray) -> np.ndarray:
        alpha = dual_t @ mat
        num = np.sum(np.abs(mat) ** p, axis=0)
        den = np.sum(np.abs(alpha) ** p, axis=0)
        return num / den

    samples = rng.standard_normal((n, sample_count)) + 1j * rng.standard_normal((n, sample_count))
    candidates = np.concatenate([np.eye(n, dtype=complex), system.primal, samples], axis=1)
    ratios = ratio_of(candidates)
    best_idx = int(np.argmax(ratios))
    best = float(ratios[best_idx])
    u = candidates[:, best_idx].copy()
    u /= _lp(u, p)
    step = 0.3
    for _ in range(ascent_steps):
        trial = u + step * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        r = float(ratio_of(trial[:, None])[0])
        if r > best:
            best, u = r, trial / _lp(trial, p)
            step = min(step * 1.5, 1.0)
        else:
            step *= 0.95
    return best


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _gl_panel(s: float, lo: float, hi: float) -> float:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid + half * _GL_NODES
    return float(half * np.sum(_GL_WEIGHTS * x ** s))


def _power_integral(s: float, lo: float, hi: float) -> float:
    """Adaptive Gauss-Legendre integral of x^s over (lo, hi), 1e-10 target.

    Panels are refined geometrically toward a singular left endpoint; each
    panel has aspect ratio at most 2 so a 24-point rule is exact to rounding.
    """
    if hi <= lo or lo < 0.0:
        raise ValueError("need 0 <= lo < hi")
    if s == 0.0:
        return hi - lo
    if lo == 0.0:
        if s <= -1.0:
            raise ValueError("non-integrable endpoint singularity")
        total = 0.0
        right = hi
        for _ in range(5000):
            left = right / 2.0
            total += _gl_panel(s, left, right)
            tail = left ** (s + 1.0) / (s + 1.0)
            if tail <= 1e-13 * abs(total):
                return total
            right = left
        raise RuntimeError("quadrature refinement did not terminate")
    total = 0.0
    cursor = lo
    while hi / cursor > 2.0:
        total += _gl_panel(s, cursor, 2.0 * cursor)
        cursor *= 2.0
    total += _gl_panel(s, cursor, hi)
    return total


def _power_average(s: float, lo: float, hi: float, refinement: int) -> float:
    """Average of x^s over (lo, hi); divergent prefixes are truncated at a
    dyadic depth tied to the refinement so the estimate grows without
    saturating instead of overflowing."""
    if s == 0.0:
        return 1.0
    if lo == 0.0 and s <= -1.0:
        integral = _power_integral(s, hi * 2.0 ** (-refinement), hi)
    else:
        integral = _power_integral(s, lo, hi)
    return integral / (hi - lo)


def ap_constant(weight: PowerWeight, context: ExponentContext, refinement: int) -> float:
    """Muckenhoupt-style constant of the power weight over a dyadic family.

    The family at a given refinement holds every dyadic cell of (0, b) down
    to that level, including the prefixes touching 0; the result is monotone
    nondecreasing in the refinement.  Weights at or beyond the p-1 boundary
    produce estimates that keep growing with refinement.
    """
    if refinement < 4:
        raise ValueError("refinement must be at least 4")
    g = weight.exponent
    p = context.p
    b = weight.b
    s_dual = -g / (p - 1.0)
    best = 0.0
    for level in range(refinement + 1):
        width = b * 2.0 ** (-level)
        for k in range(2 ** level):
            lo = k * width
            hi = lo + width
            a1 = _power_average(g, lo, hi, refinement)
            a2 = _power_average(s_dual, lo, hi, refinement)
            best = max(best, a1 * a2 ** (p - 1.0))
    return best


@dataclass(frozen=True)
class OperatorFamily:
    """Finite family of same-sized square matrices, e.g. sampled multipliers
    A(A + xi)^{-1} along a sector."""

    matrices: tuple
    parameters: tuple = ()

    def __post_init__(self) -> None:
        mats = tuple(np.asarray(m, dtype=complex) for m in self.matrices)
        if not mats:
            raise ValueError("operator family must be nonempty")
        n = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (n, n):
                raise ValueError("family members must be square matrices of one size")
        object.__setattr__(self, "matrices", mats)

    @property
    def dimension(self) -> int:
        return self.matrices[0].shape[0]

    @classmethod
    def resolvent_multipliers(cls, a, xis) -> "OperatorFamily":
        """Family {A (A + xi I)^{-1}} over the given sector samples."""
        a = np.asarray(a, dtype=complex)
        eye = np.eye(a.shape[0], dtype=complex)
        mats = []
        for xi in xis:
            mats.append(a @ np.linalg.solve(a + xi * eye, eye))
        return cls(tuple(mats), tuple(complex(x) for x in xis))


def rademacher_quotient(mats, vectors: np.ndarray, p: float, signs: np.ndarray) -> float:
    """Quotient of mean lp norms of +-1 combinations, with and without the
    operators applied; ``signs`` has one +-1 row per sample."""
    vectors = np.asarray(vectors, dtype=complex)
    signs = np.asarray(signs, dtype=float)
    transformed = np.stack([np.asarray(m, dtype=complex) @ vectors[:, j]
                            for j, m in enumerate(mats)], axis=1)
    num = np.mean(np.linalg.norm(signs @ transformed.T, ord=p, axis=1))
    den = np.mean(np.linalg.norm(signs @ vectors.T, ord=p, axis=1))
    return float(num / den)


def r_bound_estimate(family: OperatorFamily, context: ExponentContext, sign_samples: int,
                     seed: int, trials: int = 48, subset_max: int = 4) -> float:
    """Monte-Carlo estimate of the least constant in the random-sign
    averaging inequality for the family; deterministic for a fixed seed."""
    if sign_samples < 64:
        raise ValueError("sign_samples must be at least 64")
    n = family.dimension
    p = context.p
    rng = np.random.default_rng(seed)
    best = 0.0
    for mat in family.matrices:
        cols = np.linalg.norm(mat, ord=p, axis=0)
        best = max(best, float(np.max(cols)))
    for _ in range(trials):
        m = int(rng.integers(1, subset_max + 1))
        picks = rng.integers(0, len(family.matrices), size=m)
        mats = [family.matrices[i] for i in picks]
        vectors = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        signs = rng.choice([-1.0, 1.0], size=(sign_samples, m))
        best = max(best, rademacher_quotient(mats, vectors, p, signs))
    return best
