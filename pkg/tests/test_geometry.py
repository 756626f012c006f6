"""Biorthogonal systems, duality pairing, weight constants, R-bounds."""

import itertools

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from rootspan.geometry import (
    BiorthogonalSystem,
    ExponentContext,
    OperatorFamily,
    PowerWeight,
    ap_constant,
    b_condition_constant,
    fourier_coefficients,
    pairing,
    r_bound_estimate,
    rademacher_quotient,
    synthesize,
)

CTX2 = ExponentContext(2.0)


def _random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestExponentContext:
    def test_dual_exponent(self):
        assert ExponentContext(2.0).q == 2.0
        assert abs(ExponentContext(3.0).q - 1.5) < 1e-15

    @pytest.mark.parametrize("bad", [1.0, 0.5, -2.0, float("inf")])
    def test_rejects_bad_exponents(self, bad):
        with pytest.raises(ValueError):
            ExponentContext(bad)

    def test_rejects_inconsistent_dual(self):
        with pytest.raises(ValueError):
            ExponentContext(2.0, 3.0)


class TestPairing:
    def test_canonical_biorthogonality(self):
        sys_ = BiorthogonalSystem.canonical(4, CTX2)
        assert pairing(sys_.primal[:, 0], sys_.dual[:, 0]) == 1.0 + 0j

    def test_direct_sum(self):
        assert pairing([1.0, 2.0], [3.0, 4.0]) == 11.0 + 0j

    def test_matches_bruteforce_sum(self):
        rng = np.random.default_rng(5)
        u = _random_complex(rng, 16)
        f = _random_complex(rng, 16)
        oracle = sum(u[j] * f[j] for j in range(16))  # independent summation
        assert abs(pairing(u, f) - oracle) <= 1e-13

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pairing([1.0, 2.0], [1.0, 2.0, 3.0])

    @settings(max_examples=40, derandomize=True, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False,
                                       allow_infinity=False), min_size=1, max_size=8),
           st.integers(0, 2 ** 31))
    def test_bilinear_against_python_sum(self, us, seed):
        rng = np.random.default_rng(seed)
        f = _random_complex(rng, len(us))
        u = np.array(us, dtype=complex)
        expected = complex(sum(a * b for a, b in zip(u, f)))
        assert abs(pairing(u, f) - expected) <= 1e-9 * (1.0 + abs(expected))


class TestBiorthogonalSystem:
    def test_biorthogonality_invariant_random(self):
        for seed, p in [(0, 1.5), (1, 2.0), (2, 2.5), (3, 3.0)]:
            sys_ = BiorthogonalSystem.random(6, ExponentContext(p), seed=seed)
            gram = sys_.dual.T @ sys_.primal
            assert np.max(np.abs(gram - np.eye(6))) <= 1e-10

    def test_fourier_system_valid_any_p(self):
        for p in (1.5, 2.0, 2.7):
            BiorthogonalSystem.fourier(12, ExponentContext(p), seed=4).validate()

    def test_unitary_requires_p2(self):
        with pytest.raises(ValueError):
            BiorthogonalSystem.from_unitary(np.eye(3), ExponentContext(3.0))

    def test_json_roundtrip(self):
        sys_ = BiorthogonalSystem.random(5, ExponentContext(2.5), seed=9)
        back = BiorthogonalSystem.from_json(sys_.to_json())
        assert np.allclose(back.primal, sys_.primal)
        assert np.allclose(back.dual, sys_.dual)
        assert back.context.p == 2.5


class TestFourierCoefficients:
    def test_canonical_unit_vector(self):
        sys_ = BiorthogonalSystem.canonical(6, CTX2)
        u = np.zeros(6, dtype=complex)
        u[2] = 1.0
        alpha = fourier_coefficients(u, sys_)
        assert np.allclose(alpha, u)

    def test_canonical_identity(self):
        sys_ = BiorthogonalSystem.canonical(5, CTX2)
        rng = np.random.default_rng(0)
        u = _random_complex(rng, 5)
        assert np.allclose(fourier_coefficients(u, sys_), u)

    def test_reconstruction_random_system(self):
        ctx = ExponentContext(2.5)
        sys_ = BiorthogonalSystem.random(8, ctx, seed=2)
        rng = np.random.default_rng(11)
        u = _random_complex(rng, 8)
        alpha = fourier_coefficients(u, sys_)
        # linear-solve oracle for the coefficients
        oracle = np.linalg.solve(sys_.primal, u)
        assert np.allclose(alpha, oracle, atol=1e-10)
        assert np.linalg.norm(synthesize(alpha, sys_) - u) <= 1e-9

    def test_dimension_mismatch(self):
        sys_ = BiorthogonalSystem.canonical(4, CTX2)
        with pytest.raises(ValueError):
            fourier_coefficients(np.ones(5), sys_)


class TestBConditionConstant:
    def test_canonical_is_one(self):
        sys_ = BiorthogonalSystem.canonical(6, ExponentContext(2.5))
        assert abs(b_condition_constant(sys_, 200, seed=0) - 1.0) <= 1e-9

    def test_signed_permutation_is_one(self):
        phases = np.exp(1j * np.array([0.3, 1.1, 2.2, 0.0, 5.0]))
        sys_ = BiorthogonalSystem.signed_permutation(
            ExponentContext(3.0), [2, 0, 1, 4, 3], phases)
        assert abs(b_condition_constant(sys_, 200, seed=0) - 1.0) <= 1e-9

    def test_matches_dense_sampling_oracle(self):
        # p = 2: every valid system is a unitary image, so the constant is 1;
        # p = 2.5 exercises the estimator against a 2e5-sample sphere search.
        for p, seed, spread in [(2.0, 1, 0.25), (2.5, 3, 0.6)]:
            ctx = ExponentContext(p)
            sys_ = BiorthogonalSystem.random(8 if p == 2.0 else 6, ctx, seed=seed,
                                             spread=spread)
            n = sys_.n
            est = b_condition_constant(sys_, 2000, seed=7)
            rng = np.random.default_rng(99)
            u = _random_complex(rng, n, 200000)
            u = np.concatenate([u, np.eye(n), sys_.primal], axis=1)
            alpha = sys_.dual.T @ u
            ratios = (np.sum(np.abs(u) ** p, axis=0)
                      / np.sum(np.abs(alpha) ** p, axis=0))
            oracle = float(ratios.max())
            assert abs(est - oracle) <= 0.05 * oracle
            if p == 2.0:
                exact = 1.0 / np.linalg.svd(sys_.dual, compute_uv=False)[-1] ** 2
                assert est <= exact * (1.0 + 1e-9)

    def test_sample_count_too_small(self):
        sys_ = BiorthogonalSystem.canonical(4, CTX2)
        with pytest.raises(ValueError):
            b_condition_constant(sys_, 50, seed=0)


class TestApConstant:
    def test_unweighted_is_exactly_one(self):
        assert ap_constant(PowerWeight(0.0), CTX2, 6) == 1.0

    def test_half_power_stable_and_matches_quadrature_oracle(self):
        v8 = ap_constant(PowerWeight(0.5), CTX2, 8)
        v9 = ap_constant(PowerWeight(0.5), CTX2, 9)
        assert abs(v9 - v8) <= 0.01 * v8

        def quad_average(s, lo, hi):
            if s == 0.0:
                return 1.0
            val, _ = scipy.integrate.quad(lambda x: x ** s, lo, hi)
            return val / (hi - lo)

        best = 0.0
        for level in range(9):
            width = 2.0 ** (-level)
            for k in range(2 ** level):
                lo, hi = k * width, (k + 1) * width
                best = max(best, quad_average(0.5, lo, hi)
                           * quad_average(-0.5, lo, hi))
        assert abs(v8 - best) <= 1e-6 * best  # quad's own floor at deep prefixes

    def test_monotone_in_refinement(self):
        vals = [ap_constant(PowerWeight(0.4), ExponentContext(2.5), r) for r in range(4, 9)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_scale_invariance(self):
        a = ap_constant(PowerWeight(0.5, b=1.0), CTX2, 8)
        b = ap_constant(PowerWeight(0.5, b=3.7), CTX2, 8)
        assert abs(a - b) <= 1e-9 * a

    def test_boundary_weight_diverges(self):
        # gamma = p - 1 sits on the boundary of the admissible class
        vals = [ap_constant(PowerWeight(1.0), CTX2, r) for r in range(4, 9)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[1] / vals[0] > 1.2

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            PowerWeight(-1.5)
        with pytest.raises(ValueError):
            ap_constant(PowerWeight(0.5), CTX2, 3)


class TestRBoundEstimate:
    def test_identity_singleton(self):
        fam = OperatorFamily((np.eye(4),))
        est = r_bound_estimate(fam, CTX2, 128, seed=0)
        assert abs(est - 1.0) <= 0.02

    def test_scalar_multiples(self):
        fam = OperatorFamily((np.eye(4), 2.0 * np.eye(4)))
        est = r_bound_estimate(fam, CTX2, 256, seed=0)
        assert est <= 2.0 * 1.02
        assert est >= 1.0

    def test_singleton_matches_operator_norm_lower_bound(self):
        d = np.diag([1.0, 2.0, 3.0, 4.0, 5.0]).astype(complex)
        est = r_bound_estimate(OperatorFamily((d,)), CTX2, 128, seed=0)
        assert abs(est - 5.0) <= 0.02 * 5.0

    def test_resolvent_multiplier_family_vs_enumeration(self):
        a = np.diag(np.arange(1.0, 9.0)).astype(complex)
        fam = OperatorFamily.resolvent_multipliers(a, np.geomspace(0.1, 100.0, 6))
        est = r_bound_estimate(fam, CTX2, 4096, seed=3)
        assert np.isfinite(est)

        # exhaustive sign-enumeration oracle on identical trial draws
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(12):
            m = int(rng.integers(1, 5))
            picks = rng.integers(0, len(fam.matrices), size=m)
            mats = [fam.matrices[i] for i in picks]
            vecs = _random_complex(rng, 8, m)
            mc = rademacher_quotient(mats, vecs, 2.0,
                                     rng.choice([-1.0, 1.0], size=(20000, m)))

            def mean_norm(ops):
                total = 0.0
                patterns = list(itertools.product([-1.0, 1.0], repeat=m))
                for signs in patterns:
                    acc = np.zeros(8, dtype=complex)
                    for j, s in enumerate(signs):
                        term = vecs[:, j] if ops is None else ops[j] @ vecs[:, j]
                        acc = acc + s * term
                    total += np.linalg.norm(acc, 2.0)
                return total / len(patterns)

            exact = mean_norm(mats) / mean_norm(None)
            worst = max(worst, abs(mc - exact) / exact)
        assert worst <= 0.05

    def test_validation(self):
        with pytest.raises(ValueError):
            OperatorFamily(())
        fam = OperatorFamily((np.eye(2),))
        with pytest.raises(ValueError):
            r_bound_estimate(fam, CTX2, 32, seed=0)
