"""Grid BVP assembly, condition reports, coercive sweeps, s-numbers,
degenerate substitution."""

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg

from rootspan.geometry import ExponentContext
from rootspan.resolvent import ArcConfiguration
from rootspan.bvp import (
    BoundaryFunctional,
    BvpProblem,
    InteriorTerm,
    bvp_spectral_report,
    characteristic_data,
    coercive_estimate_report,
    condition1_check,
    degenerate_transform,
    dirichlet_conditions,
    discrete_derivative,
    discrete_norm,
    discretize,
    embedding_snumbers,
    neumann_conditions,
    validate_problem,
)

CTX2 = ExponentContext(2.0)


def scalar_problem(c=1.0, b_coeff=0.0, gamma=0.0, a_fn=None, conditions=None,
                   context=CTX2, length=1.0):
    return BvpProblem(
        a=a_fn or (lambda x: -1.0),
        A_fn=lambda x: np.array([[c]], dtype=complex),
        B_fn=lambda x: np.array([[b_coeff]], dtype=complex),
        conditions=conditions or dirichlet_conditions(),
        weight_exponent=gamma,
        context=context,
        d=1,
        length=length,
    )


def diag_power_problem(d, nu, n_unused=None, length=math.pi):
    return BvpProblem(
        a=lambda x: -1.0,
        A_fn=lambda x: np.diag(np.arange(1.0, d + 1.0) ** (1.0 / nu)).astype(complex),
        B_fn=lambda x: np.zeros((d, d), dtype=complex),
        conditions=dirichlet_conditions(),
        weight_exponent=0.0,
        context=CTX2,
        d=d,
        length=length,
    )


class TestCharacteristicData:
    def test_unit_roots(self):
        data = characteristic_data(scalar_problem(), 0.5)
        assert {data.omega1, data.omega2} == {1.0 + 0j, -1.0 + 0j}

    def test_dirichlet_determinant(self):
        data = characteristic_data(scalar_problem(), 0.3)
        assert data.eta == 1.0 + 0j

    def test_neumann_determinant(self):
        # direct 2x2 evaluation: eta = -omega1*omega2 = omega1^2 = -1/a = 1
        prob = scalar_problem(conditions=neumann_conditions())
        data = characteristic_data(prob, 0.3)
        assert abs(data.eta - 1.0) <= 1e-12

    def test_roots_are_negatives(self):
        prob = scalar_problem(a_fn=lambda x: -2.0 - 1.0j)
        data = characteristic_data(prob, 0.7)
        assert abs(data.omega1 + data.omega2) <= 1e-14

    def test_eta_homogeneity(self):
        # scaling a by t^2 scales eta by t^{-(m1 + m2)}
        t = 1.7
        base = scalar_problem(a_fn=lambda x: -1.3 - 0.4j, conditions=neumann_conditions())
        scaled = scalar_problem(a_fn=lambda x: t ** 2 * (-1.3 - 0.4j),
                                conditions=neumann_conditions())
        eta0 = characteristic_data(base, 0.5).eta
        eta1 = characteristic_data(scaled, 0.5).eta
        assert abs(eta1 - eta0 * t ** (-2.0)) <= 1e-10 * abs(eta0)

    def test_vanishing_a_rejected(self):
        prob = scalar_problem(a_fn=lambda x: 0.0)
        with pytest.raises(ValueError):
            characteristic_data(prob, 0.5)


class TestValidation:
    def test_valid_problem_passes(self):
        validate_problem(scalar_problem())

    def test_weight_out_of_range(self):
        with pytest.raises(ValueError):
            validate_problem(scalar_problem(gamma=1.5))

    def test_negative_axis_coefficient(self):
        with pytest.raises(ValueError):
            validate_problem(scalar_problem(a_fn=lambda x: 1.0))  # -a on R_-

    def test_interior_point_placement(self):
        cond1 = BoundaryFunctional(0, (1.0,), (0.0,), (InteriorTerm(1.5, (1.0,)),))
        cond2 = BoundaryFunctional(0, (0.0,), (1.0,))
        with pytest.raises(ValueError):
            validate_problem(scalar_problem(conditions=(cond1, cond2)))


class TestCondition1:
    def test_scalar_identity_coefficient(self):
        report = condition1_check(scalar_problem(c=1.0))
        assert abs(report.positivity_bound - 1.0) <= 1e-10
        assert abs(report.r_bound - 1.0) <= 0.02
        assert report.sector_ok and report.eta_ok

    def test_constant_diagonal(self):
        prob = BvpProblem(a=lambda x: -1.0,
                          A_fn=lambda x: np.diag(np.arange(1.0, 5.0)).astype(complex),
                          B_fn=lambda x: np.zeros((4, 4), dtype=complex),
                          conditions=dirichlet_conditions(), weight_exponent=0.0,
                          context=CTX2, d=4)
        report = condition1_check(prob)
        assert report.sector_ok and report.eta_ok
        assert report.continuity_defect <= 1e-12
        assert report.lower_order_bound == 0.0

    def test_affine_diagonal_matches_closed_form(self):
        prob = BvpProblem(a=lambda x: -1.0,
                          A_fn=lambda x: (1.0 + x) * np.diag(np.arange(1.0, 5.0)).astype(complex),
                          B_fn=lambda x: np.zeros((4, 4), dtype=complex),
                          conditions=dirichlet_conditions(), weight_exponent=0.0,
                          context=CTX2, d=4)
        report = condition1_check(prob, x_samples=9, xi_samples=12)
        xs = np.linspace(0.0, 1.0, 11)[1:-1]
        lams = list(np.geomspace(1e-3, 1e4, 12)) + [0.0]
        oracle = max((1.0 + abs(l)) / abs(l + (1.0 + x) * j)
                     for x in xs for l in lams for j in range(1, 5))
        assert abs(report.positivity_bound - oracle) <= 1e-10 * oracle
        assert report.continuity_defect > 0.0

    def test_mu_validation(self):
        with pytest.raises(ValueError):
            condition1_check(scalar_problem(), mu=0.7)


class TestDiscretize:
    def test_dirichlet_spectrum_closed_form(self):
        op = discretize(scalar_problem(c=1.0), 16)
        eigenvalues = np.sort(np.linalg.eigvals(op.matrix).real)
        nodes = 17.0
        expected = 4.0 * nodes ** 2 * np.sin(np.arange(1, 17) * math.pi / (2 * nodes)) ** 2 + 1.0
        assert np.max(np.abs(eigenvalues - expected)) <= 1e-9

    def test_eigenvalue_convergence_second_order(self):
        target = math.pi ** 2 + 1.0
        errors = []
        steps = []
        for n in (16, 32, 64, 128):
            op = discretize(scalar_problem(c=1.0), n)
            lowest = np.sort(np.linalg.eigvals(op.matrix).real)[0]
            errors.append(abs(lowest - target))
            steps.append(1.0 / (n + 1))
        slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert abs(slope - 2.0) <= 0.2

    def test_nonlocal_condition_continuity(self):
        def with_delta(delta):
            cond1 = BoundaryFunctional(0, (1.0,), (0.0,),
                                       (InteriorTerm(0.5, (-delta,)),))
            cond2 = BoundaryFunctional(0, (0.0,), (1.0,))
            return discretize(scalar_problem(conditions=(cond1, cond2)), 15)

        base = np.sort(np.linalg.eigvals(with_delta(0.0).matrix).real)
        displacements = []
        for delta in (0.1, 0.01, 0.001):
            evs = np.sort(np.linalg.eigvals(with_delta(delta).matrix).real)
            displacements.append(np.max(np.abs(evs - base)))
        assert displacements[0] > displacements[1] > displacements[2]
        assert displacements[2] <= 0.05

    def test_singular_boundary_elimination(self):
        # both functionals pin the same endpoint: determinant vanishes
        cond1 = BoundaryFunctional(0, (1.0,), (0.0,))
        cond2 = BoundaryFunctional(0, (2.0,), (0.0,))
        with pytest.raises(ValueError, match="eta"):
            discretize(scalar_problem(conditions=(cond1, cond2)), 12)

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            discretize(scalar_problem(), 4)

    def test_neumann_assembly_runs(self):
        op = discretize(scalar_problem(c=1.0, conditions=neumann_conditions()), 24)
        evs = np.sort(np.linalg.eigvals(op.matrix).real)
        # lowest mode of -u'' + 1 with Neumann data sits near 1
        assert abs(evs[0] - 1.0) <= 0.05


class TestDiscreteNorms:
    def test_weighted_norm_converges_to_integral(self):
        gamma = 0.5
        u = lambda x: np.sin(math.pi * x) + 0.3 * x ** 2
        exact = scipy.integrate.quad(lambda x: abs(u(x)) ** 2 * x ** gamma, 0, 1)[0] ** 0.5
        errors = []
        for n in (32, 64, 128, 256):
            op = discretize(scalar_problem(gamma=gamma), n)
            errors.append(abs(discrete_norm(op, u(op.grid).astype(complex)) - exact))
        slope = np.polyfit(np.log([1.0 / (n + 1) for n in (32, 64, 128, 256)]),
                           np.log(errors), 1)[0]
        assert slope >= 0.8  # first order or better

    def test_derivative_orders(self):
        op = discretize(scalar_problem(), 64)
        u = np.sin(math.pi * op.grid).astype(complex)
        d2 = discrete_derivative(op, u, 2)
        assert np.max(np.abs(d2 + math.pi ** 2 * np.sin(math.pi * op.grid))) <= 0.05
        with pytest.raises(ValueError):
            discrete_derivative(op, u, 3)


class TestCoerciveEstimate:
    def test_single_lambda_finite(self):
        op = discretize(scalar_problem(c=1.0), 48)
        report = coercive_estimate_report(op, [1.0], trials=3, seed=0)
        assert np.isfinite(report.observed_bound)
        assert report.observed_bound > 0

    def test_sweep_stable_over_top_decades(self):
        op = discretize(scalar_problem(c=1.0), 96)
        lams = np.geomspace(1.0, 1e4, 13)
        report = coercive_estimate_report(op, lams, trials=4, seed=0)
        assert report.stable
        mags = np.array([abs(l) for l in report.lambdas])
        ratios = np.array(report.ratios)
        decade3 = ratios[(mags >= 1e2) & (mags < 1e3)].max()
        decade4 = ratios[(mags >= 1e3) & (mags <= 1e4)].max()
        assert abs(decade3 - decade4) <= 0.1 * max(decade3, decade4)

    def test_large_lower_order_term_grows(self):
        op = discretize(scalar_problem(c=1.0, b_coeff=400.0), 96)
        lams = np.geomspace(1.0, 1e4, 9)
        report = coercive_estimate_report(op, lams, trials=3, seed=1)
        # reported, not asserted: the sampled constant keeps growing
        assert report.ratios[0] < report.observed_bound


class TestEmbeddingSnumbers:
    def test_blockwise_matches_dense_svd_oracle(self):
        d, n = 64, 16
        report = embedding_snumbers(d, 1.0, CTX2, n=n)
        h = math.pi / (n + 1)
        w = np.full(n, h)
        diff2 = (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1)
                 + np.diag(np.ones(n - 1), -1)) / h ** 2
        wmat = np.diag(w)
        ladder = np.arange(1, d + 1).astype(float)
        blocks = [diff2.T @ wmat @ diff2 + (1.0 + aj ** 2) * wmat for aj in ladder]
        gw = scipy.linalg.block_diag(*blocks)
        # whitening by Cholesky yields the same singular values as gw^{-1/2}
        chol = np.linalg.cholesky(gw)
        gl_sqrt = np.kron(np.eye(d), np.diag(np.sqrt(w)))
        assembled = scipy.linalg.solve_triangular(chol, gl_sqrt.T, lower=True).T
        oracle = np.sort(np.linalg.svd(assembled, compute_uv=False))[::-1]
        k = report.s_numbers.size
        assert np.max(np.abs(report.s_numbers - oracle[:k]) / oracle[:k]) <= 1e-8

    def test_rate_nu_one(self):
        report = embedding_snumbers(128, 1.0, CTX2)
        assert abs(report.fitted_exponent + 2.0 / 3.0) <= 0.1
        assert report.holds

    def test_rate_nu_two(self):
        report = embedding_snumbers(128, 2.0, CTX2)
        assert abs(report.fitted_exponent + 2.0 / 5.0) <= 0.1

    def test_flat_ladder_limit(self):
        report = embedding_snumbers(128, 50.0, CTX2)
        assert abs(report.fitted_exponent) <= 0.1

    def test_small_dimension_rejected(self):
        with pytest.raises(ValueError):
            embedding_snumbers(32, 1.0, CTX2)

    def test_requires_p2(self):
        with pytest.raises(ValueError):
            embedding_snumbers(128, 1.0, ExponentContext(3.0))


class TestBvpSpectralReport:
    def test_scalar_self_adjoint_model(self):
        op = discretize(scalar_problem(c=1.0), 48)
        arcs = ArcConfiguration.equally_spaced(6, CTX2, offset=0.35)
        report = bvp_spectral_report(op, arcs, q=2.0, nu=1.0,
                                     include=("spectrum", "completeness"))
        assert np.max(np.abs(report.eigenvalues.imag)) <= 1e-8
        assert report.min_gap > 1.0
        assert report.max_relative_distance <= 1e-8
        assert report.completeness.complete

    def test_sector_rotated_model(self):
        prob = scalar_problem(c=1.0, b_coeff=0.5, a_fn=lambda x: -np.exp(0.3j))
        op = discretize(prob, 48)
        arcs = ArcConfiguration.equally_spaced(6, CTX2, offset=2.0)
        report = bvp_spectral_report(op, arcs, q=2.0, nu=1.0,
                                     include=("spectrum", "completeness"))
        angles = np.angle(report.eigenvalues - 1.0)
        assert np.max(np.abs(report.eigenvalues.imag)) > 1.0
        assert np.max(angles) <= 0.3 + 1e-4
        assert np.min(angles) >= -1e-4
        assert report.max_relative_distance <= 1e-6

    def test_resolvent_snumber_slope(self):
        op = discretize(diag_power_problem(32, 1.0), 32)
        arcs = ArcConfiguration.equally_spaced(6, CTX2, offset=0.35)
        report = bvp_spectral_report(op, arcs, q=2.0, nu=1.0, include=("snumbers",))
        assert abs(report.snumber_slope + 2.0 / 3.0) <= 0.1

    def test_exponent_gate(self):
        op = discretize(scalar_problem(), 12)
        arcs = ArcConfiguration.equally_spaced(6, CTX2, offset=0.35)
        with pytest.raises(ValueError):
            bvp_spectral_report(op, arcs, q=1.0, nu=1.0)


class TestDegenerateTransform:
    def test_small_gamma_is_near_identity(self):
        transform = degenerate_transform(scalar_problem(gamma=1e-8))
        assert abs(transform.b - 1.0) <= 1e-7
        xs = np.linspace(0.1, 0.9, 5)
        assert np.max(np.abs(transform.y_of_x(xs) - xs)) <= 1e-6

    def test_half_gamma_closed_form(self):
        transform = degenerate_transform(scalar_problem(gamma=0.5))
        assert transform.b == 2.0
        assert np.allclose(transform.y_of_x(np.array([0.25, 1.0])), [1.0, 2.0])
        assert transform.regular.weight_exponent == 1.0

    @pytest.mark.parametrize("gamma", [0.25, 0.5, 0.75])
    def test_chain_rule_identity(self, gamma):
        transform = degenerate_transform(scalar_problem(gamma=gamma))
        assert transform.identity_defect <= 1e-8

    @pytest.mark.parametrize("gamma", [0.25, 0.5, 0.75])
    def test_chain_rule_identity_independent_oracle(self, gamma):
        # finite-difference oracle for d/dy of u(x(y)) against x^gamma u'(x)
        transform = degenerate_transform(scalar_problem(gamma=gamma))
        ys = np.linspace(0.2 * transform.b, 0.85 * transform.b, 9)
        step = 1e-4 * transform.b

        def u(x):
            return x ** 2 + 0.5 * x

        fd = (u(transform.x_of_y(ys + step)) - u(transform.x_of_y(ys - step))) / (2 * step)
        xs = transform.x_of_y(ys)
        direct = xs ** gamma * (2.0 * xs + 0.5)
        assert np.max(np.abs(fd - direct)) <= 1e-6

    def test_roundtrip_map(self):
        transform = degenerate_transform(scalar_problem(gamma=0.3))
        xs = np.linspace(0.05, 0.95, 11)
        assert np.max(np.abs(transform.x_of_y(transform.y_of_x(xs)) - xs)) <= 1e-9

    def test_weight_mode_as_printed(self):
        transform = degenerate_transform(scalar_problem(gamma=0.5), weight_mode="as_printed")
        assert transform.regular.weight_exponent == 2.0

    def test_interior_points_mapped(self):
        cond1 = BoundaryFunctional(0, (1.0,), (0.0,), (InteriorTerm(0.25, (-0.1,)),))
        cond2 = BoundaryFunctional(0, (0.0,), (1.0,))
        transform = degenerate_transform(scalar_problem(gamma=0.5,
                                                        conditions=(cond1, cond2)))
        mapped = transform.regular.conditions[0].interior[0].point
        assert abs(mapped - 2.0 * math.sqrt(0.25)) <= 1e-12

    def test_gamma_range(self):
        with pytest.raises(ValueError):
            degenerate_transform(scalar_problem(gamma=0.0))

    def test_transformed_problem_discretizes(self):
        transform = degenerate_transform(scalar_problem(gamma=0.25))
        op = discretize(transform.regular, 16)
        assert op.matrix.shape == (16, 16)
        assert np.all(op.weight_vector > 0)

    @pytest.mark.parametrize("gamma", [0.25, 0.5])
    def test_substitution_spectrum_matches_direct_degenerate_form(self, gamma):
        # the lowest eigenvalue of -(x^g d/dx)^2 + c with endpoint conditions
        # is ((1-g) pi)^2 + c; the substitution route must agree with a
        # direct flux-form discretization of the degenerate operator
        c = 1.0
        target = ((1.0 - gamma) * math.pi) ** 2 + c

        transform = degenerate_transform(scalar_problem(c=c, gamma=gamma))
        op = discretize(transform.regular, 256)
        transformed = float(np.sort(np.linalg.eigvals(op.matrix).real)[0])
        assert abs(transformed - target) <= 1e-3

        n = 1024
        h = 1.0 / (n + 1)
        half = ((np.arange(0, n + 1) + 0.5) * h) ** gamma
        main = np.zeros(n)
        lower = np.zeros(n - 1)
        upper = np.zeros(n - 1)
        for i in range(1, n + 1):
            fp, fm = half[i], half[i - 1]
            g = (h * i) ** gamma
            main[i - 1] = g * (fp + fm) / h ** 2 + c
            if i > 1:
                lower[i - 2] = -g * fm / h ** 2
            if i < n:
                upper[i - 1] = -g * fp / h ** 2
        flux = np.diag(main) + np.diag(lower, -1) + np.diag(upper, 1)
        direct = float(np.sort(np.linalg.eigvals(flux).real)[0])
        assert abs(direct - target) <= 1e-1
        assert abs(transformed - target) < abs(direct - target)
