import math
import warnings

import numpy as np
import pytest

import reference_values as ref
from hhfrac.certificates import gronwall_bound, ulam_hyers_constant
from hhfrac.errors import DomainError, GridMismatchError
from hhfrac.grids import GridFunction, LogGrid, Order, log_power
from hhfrac.problems import ProblemSpec, affine_rhs, manufactured_problem
from hhfrac.solver import picard_solve, solve_with_fixed_constant
from hhfrac.stability import (
    MODE_GENERALIZED_UH,
    MODE_GENERALIZED_UHR,
    MODE_UH,
    MODE_UHR,
    PerturbationSpec,
    run_uh_experiment,
    run_uhr_experiment,
    verdicts_to_csv,
)

ORDER = Order(1.0 / 3.0, 2.0 / 3.0)


def critical_profile(grid):
    return log_power(grid, ORDER.gamma, ORDER.gamma - 1.0)


class TestPerturbationSpec:
    def test_positive_epsilon_required(self):
        with pytest.raises(DomainError):
            PerturbationSpec("constant", 0.0)
        with pytest.raises(DomainError):
            PerturbationSpec("constant", -1e-3)

    def test_constant_realization_is_admissible(self, grid512):
        spec = PerturbationSpec("constant", 1e-3)
        h = spec.realize(grid512, ORDER.gamma)
        assert np.max(np.abs(h.raw_tail())) <= 1e-3 * (1.0 + 1e-12)

    def test_log_power_needs_profile(self):
        with pytest.raises(DomainError):
            PerturbationSpec("log-power", 1e-3)

    def test_supplied_table_admissibility_enforced(self, section5, grid512):
        # a table exceeding epsilon anywhere must be rejected at run time
        w = np.zeros(grid512.n_nodes)
        w[40] = 10.0 * grid512.log_nodes[40] ** (1.0 - ORDER.gamma)
        table = GridFunction(grid512, ORDER.gamma, w * 1e-3)
        spec = PerturbationSpec("supplied-table", 1e-3, table=table)
        with pytest.raises(DomainError, match="admissibility"):
            run_uh_experiment(section5, spec, grid512)

    def test_perturbation_grid_must_match(self, section5, grid512):
        other = LogGrid(math.e, 256)
        table = log_power(other, ORDER.gamma, 0.0, coeff=1e-4)
        spec = PerturbationSpec("supplied-table", 1e-3, table=table)
        with pytest.raises(GridMismatchError):
            run_uh_experiment(section5, spec, grid512)


class TestUlamHyers:
    def test_reference_problem_bounds(self, section5, grid512):
        for eps in (1e-2, 1e-3):
            verdict = run_uh_experiment(
                section5, PerturbationSpec("constant", eps), grid512
            )
            assert verdict.passed
            assert verdict.mode == MODE_UH
            assert verdict.certified_bound == pytest.approx(ref.C_F * eps, rel=1e-10)
            assert verdict.observed_deviation <= verdict.certified_bound
            # shared constant part: the weighted limits agree exactly
            assert verdict.weighted_limit_deviation == 0.0

    def test_deviation_scales_linearly(self, section5, grid512):
        v_big = run_uh_experiment(section5, PerturbationSpec("constant", 1e-2), grid512)
        v_small = run_uh_experiment(section5, PerturbationSpec("constant", 1e-3), grid512)
        ratio = v_big.observed_deviation / v_small.observed_deviation
        assert ratio == pytest.approx(10.0, rel=0.1)
        # halving epsilon halves the deviation up to the quadratic response
        # of the saturating nonlinearity (about 0.1 percent here)
        v_half = run_uh_experiment(section5, PerturbationSpec("constant", 5e-3), grid512)
        assert v_half.observed_deviation <= 0.5 * v_big.observed_deviation * 1.01

    def test_tiny_epsilon_trivially_passes(self, section5, grid512):
        verdict = run_uh_experiment(
            section5, PerturbationSpec("constant", 1e-9), grid512
        )
        assert verdict.passed
        assert verdict.observed_deviation <= 5e-9

    def test_manufactured_closed_form_response(self, grid512):
        # K_f = L_f = 0: the deviation is exactly I^alpha(h), and with the
        # shared constant part it stays below B epsilon nodewise
        problem = manufactured_problem(ORDER, math.e, 2.0, 1.0)
        eps = 1e-3
        verdict = run_uh_experiment(problem, PerturbationSpec("constant", eps), grid512)
        b_const, _ = ulam_hyers_constant(problem)
        x = grid512.log_nodes
        closed_form = eps * x[-1] ** ORDER.alpha / math.gamma(ORDER.alpha + 1.0)
        assert verdict.observed_deviation == pytest.approx(closed_form, rel=1e-6)
        assert verdict.observed_deviation <= b_const * eps

    def test_integral_inequality_nodewise(self, section5, grid512):
        # |u~ - Z (log t)^(gamma-1) - I^alpha F_u~| <= B eps + slack, with
        # the constant part shared between the two solves
        from hhfrac.hadamard import hadamard_integral
        from hhfrac.solver import _implicit_rhs_grid

        eps = 1e-3
        u, _ = picard_solve(section5, grid512)
        h = PerturbationSpec("constant", eps).realize(grid512, ORDER.gamma)
        u_tilde, _ = solve_with_fixed_constant(
            section5, grid512, z_fixed=u.weighted_limit, shift=h
        )
        f_tilde, _ = _implicit_rhs_grid(section5.rhs, ORDER, grid512, u_tilde)
        reconstructed = hadamard_integral(f_tilde, ORDER.alpha)
        defect = (
            u_tilde.raw_tail()
            - u.weighted_limit * grid512.log_nodes[1:] ** (ORDER.gamma - 1.0)
            - reconstructed.raw_tail()
        )
        b_const, _ = ulam_hyers_constant(section5)
        assert np.max(np.abs(defect)) <= b_const * eps + 1e-8

    def test_gronwall_bound_dominates_deviation(self, section5, grid512):
        eps = 1e-3
        u, _ = picard_solve(section5, grid512)
        h = PerturbationSpec("constant", eps).realize(grid512, ORDER.gamma)
        u_tilde, _ = solve_with_fixed_constant(
            section5, grid512, z_fixed=u.weighted_limit, shift=h
        )
        deviation = np.abs(u_tilde.raw_tail() - u.raw_tail())
        rhs = section5.rhs
        b_const, _ = ulam_hyers_constant(section5)
        k = rhs.K_f / ((1.0 - rhs.L_f) * math.gamma(ORDER.alpha))
        bound = gronwall_bound(
            grid512, np.full(grid512.n_nodes, b_const * eps), k=k, alpha=ORDER.alpha
        )
        assert np.all(deviation <= bound[1:] + 1e-9)

    def test_epsilon_one_labelled_generalized(self, grid512):
        # a contraction-certified problem with a unit perturbation realizes
        # the generalized mode
        problem = manufactured_problem(ORDER, math.e, 2.0, 1.0)
        verdict = run_uh_experiment(problem, PerturbationSpec("constant", 1.0), grid512)
        assert verdict.mode == MODE_GENERALIZED_UH
        assert verdict.passed

    def test_uh_pass_implies_generalized_pass(self, section5, grid512):
        # the generalized bound reuses C_f eps; a UH pass carries over
        verdict = run_uh_experiment(
            section5, PerturbationSpec("constant", 1e-3), grid512
        )
        assert verdict.passed
        assert verdict.observed_deviation <= verdict.certified_bound

    def test_requires_contraction(self, grid512):
        problem = ProblemSpec(
            order=ORDER, b=math.e, c1=2.0, c2=1.0, phi=0.0,
            rhs=affine_rhs(0.1, 0.0, 2.0, 0.0, math.e),
        )
        with pytest.raises(DomainError, match="contraction"):
            run_uh_experiment(problem, PerturbationSpec("constant", 1e-3), grid512)


class TestUlamHyersRassias:
    def test_critical_profile_nodewise(self, section5, grid512):
        phi = critical_profile(grid512)
        spec = PerturbationSpec("log-power", 1e-3, phi_profile=phi)
        with pytest.warns(UserWarning, match="not increasing"):
            verdict = run_uhr_experiment(
                section5, spec, ref.LAMBDA_PHI_CRITICAL, grid512
            )
        assert verdict.passed
        assert verdict.mode == MODE_UHR
        assert verdict.margin >= 0.0

    def test_constant_profile_reduces_to_uh_shape(self, section5, grid512):
        # phi = 1 turns the nodewise bound into C_f_phi eps
        phi = log_power(grid512, ORDER.gamma, 0.0)
        lam = math.log(section5.b) ** ORDER.alpha / math.gamma(ORDER.alpha + 1.0)
        spec = PerturbationSpec("log-power", 1e-3, phi_profile=phi)
        verdict = run_uhr_experiment(section5, spec, lam, grid512)
        assert verdict.passed
        uh = run_uh_experiment(section5, PerturbationSpec("constant", 1e-3), grid512)
        assert verdict.observed_deviation == pytest.approx(
            uh.observed_deviation, rel=1e-10
        )

    def test_epsilon_one_is_generalized_mode(self, grid512):
        problem = manufactured_problem(ORDER, math.e, 2.0, 1.0)
        phi = log_power(grid512, ORDER.gamma, 0.0)
        lam = math.log(math.e) ** ORDER.alpha / math.gamma(ORDER.alpha + 1.0)
        spec = PerturbationSpec("log-power", 1.0, phi_profile=phi)
        verdict = run_uhr_experiment(problem, spec, lam, grid512)
        assert verdict.mode == MODE_GENERALIZED_UHR
        assert verdict.passed

    def test_bad_lambda_rejected_before_solving(self, section5, grid512):
        phi = critical_profile(grid512)
        spec = PerturbationSpec("log-power", 1e-3, phi_profile=phi)
        from hhfrac.errors import CertificateRejected

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(CertificateRejected):
                run_uhr_experiment(section5, spec, 0.5, grid512)


class TestDeterminismAndSerialization:
    def test_repeated_runs_identical(self, section5, grid512):
        spec = PerturbationSpec("constant", 1e-3)
        a = run_uh_experiment(section5, spec, grid512)
        b = run_uh_experiment(section5, spec, grid512)
        assert a == b

    def test_csv_rows(self, section5, grid512):
        verdicts = [
            run_uh_experiment(section5, PerturbationSpec("constant", eps), grid512)
            for eps in (1e-2, 1e-3)
        ]
        csv = verdicts_to_csv(verdicts)
        lines = csv.splitlines()
        assert lines[0] == "mode,epsilon,deviation,bound,margin,pass"
        assert len(lines) == 3
        assert lines[1].startswith("UH,0.01,")
        assert lines[1].endswith(",true")
        assert "\r" not in csv
