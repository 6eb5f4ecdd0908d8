import random
from fractions import Fraction

import pytest

from convdecomp import (
    BinaryPoint,
    ConvexCombination,
    DegenerateSegment,
    ExtendedVerifier,
    RVector,
    VerifierGapViolation,
    decompose_epsilon,
    iteration_budget,
    optimal_step,
    squared_l2,
)
from helpers import (
    OriginVerifier,
    cube_problem,
    random_combination,
    random_explicit_problem,
    random_knapsack_problem,
    random_nonneg_mu,
)

F = Fraction


class TestOptimalStep:
    def test_projects_target_onto_segment(self):
        step = optimal_step(RVector([0, 0]), BinaryPoint([1, 0]), RVector(["1/2", "1/2"]))
        assert step == F(1, 2)

    def test_target_at_sampled_endpoint(self):
        step = optimal_step(RVector([0, 0]), BinaryPoint([1, 0]), RVector([1, 0]))
        assert step == 0

    def test_clamps_at_zero(self):
        step = optimal_step(RVector([0, 0]), BinaryPoint([1, 0]), RVector([2, 0]))
        assert step == 0

    def test_clamps_at_one(self):
        step = optimal_step(RVector(["1/2", 0]), BinaryPoint([1, 0]), RVector([0, 0]))
        assert step == 1

    def test_degenerate_segment(self):
        with pytest.raises(DegenerateSegment):
            optimal_step(RVector([1, 0]), BinaryPoint([1, 0]), RVector([0, 0]))


def test_iteration_budget_examples():
    assert iteration_budget(4, 1) == 3
    assert iteration_budget(2, F(1, 10)) == 199
    with pytest.raises(ValueError):
        iteration_budget(3, 0)


class TestDecomposeEpsilon:
    def test_zero_target_terminates_immediately(self):
        problem = cube_problem(3)
        run = decompose_epsilon(RVector([0, 0, 0]), problem.extended_verifier(), F(1, 10))
        assert run.iterations == 0
        assert run.result == ConvexCombination.point_mass(BinaryPoint.origin(3))
        assert run.final_squared_residual == 0

    def test_cube_center_is_hit_exactly_in_one_pass(self):
        problem = cube_problem(2)
        run = decompose_epsilon(
            RVector(["1/2", "1/2"]), problem.extended_verifier(), F(1, 10)
        )
        assert run.iterations == 1
        record = run.trace[0]
        assert record.squared_residual == F(1, 2)
        assert record.sampled == BinaryPoint([1, 1])
        assert record.step == F(1, 2)
        assert run.final_squared_residual == 0
        assert run.result.barycenter() == RVector(["1/2", "1/2"])

    def test_cube_half_edge_first_pass(self):
        problem = cube_problem(2)
        run = decompose_epsilon(
            RVector(["1/2", 0]), problem.extended_verifier(), F(1, 10)
        )
        assert run.trace[0].sampled == BinaryPoint([1, 0])
        assert run.trace[0].step == F(1, 2)
        assert run.final_squared_residual == 0

    def test_target_outside_unit_box_rejected(self):
        problem = cube_problem(2)
        with pytest.raises(ValueError):
            decompose_epsilon(RVector([2, 0]), problem.extended_verifier(), F(1, 2))

    def test_epsilon_must_be_positive(self):
        problem = cube_problem(2)
        with pytest.raises(ValueError):
            decompose_epsilon(RVector([0, 0]), problem.extended_verifier(), 0)

    def test_broken_verifier_is_caught_in_first_pass(self):
        problem = cube_problem(2)
        broken = ExtendedVerifier(OriginVerifier(2), problem.feasible)
        with pytest.raises(VerifierGapViolation) as caught:
            decompose_epsilon(RVector(["1/2", "1/2"]), broken, F(1, 10))
        assert caught.value.iteration == 0
        assert caught.value.mu == RVector(["1/2", "1/2"])

    def test_wrong_dimension_verifier_rejected(self):
        problem = cube_problem(3)
        with pytest.raises(ValueError):
            decompose_epsilon(RVector([0, 0]), problem.extended_verifier(), F(1, 2))


class TestRunInvariants:
    def _check_run(self, problem, target, epsilon):
        run = decompose_epsilon(target, problem.extended_verifier(), epsilon)
        n = target.dim
        # termination and final precision
        assert run.final_squared_residual <= epsilon * epsilon
        assert run.iterations <= iteration_budget(n, epsilon)
        # residuals decrease strictly and respect the n/(i+1) envelope
        residuals = [rec.squared_residual for rec in run.trace]
        residuals.append(run.final_squared_residual)
        for i in range(len(residuals) - 1):
            assert residuals[i + 1] < residuals[i]
        for i, rec in enumerate(run.trace):
            assert rec.squared_residual <= F(n, i + 1)
        # support growth: one new point per pass at most
        assert run.result.support_size <= run.iterations + 1
        # everything in the support is feasible, and the trace is honest
        for point in run.result.support():
            assert problem.feasible(point)
        for rec in run.trace:
            assert problem.feasible(rec.sampled)
        assert squared_l2(target - run.result.barycenter()) == run.final_squared_residual
        return run

    def test_scaled_relaxed_optima(self):
        rng = random.Random(31)
        for _ in range(25):
            if rng.random() < 0.5:
                problem = random_knapsack_problem(rng, rng.randint(3, 12))
            else:
                problem = random_explicit_problem(rng, rng.randint(2, 9))
            mu = random_nonneg_mu(rng, problem.n)
            xstar = problem.relaxed_optimum(mu)
            target = xstar.scale(F(1) / problem.alpha)
            for epsilon in (F(1), F(1, 2), F(1, 10)):
                self._check_run(problem, target, epsilon)

    def test_fractional_targets_inside_scaled_hull(self):
        # Any point of the feasible hull scaled by 1/alpha is a valid target.
        # Denominators grow quickly for such generic targets, so keep the
        # dimension small at the tightest precision.
        rng = random.Random(32)
        for _ in range(15):
            problem = random_explicit_problem(rng, rng.randint(2, 5))
            lam = random_combination(rng, problem.polytope.points, max_support=3)
            target = lam.barycenter()
            for epsilon in (F(1, 2), F(1, 10)):
                self._check_run(problem, target, epsilon)
