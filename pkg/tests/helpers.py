"""Shared fixtures-in-spirit: random instances, oracles, a broken verifier."""

import itertools
import random
from fractions import Fraction

from convdecomp import (
    BinaryPoint,
    ConvexCombination,
    ExplicitPolytope,
    ExplicitProblem,
    GapVerifier,
    KnapsackInstance,
    KnapsackProblem,
    RVector,
)

F = Fraction


def cube_problem(n):
    """Explicit problem whose feasible set is the whole 0/1 cube."""
    return ExplicitProblem(ExplicitPolytope(n, [BinaryPoint([1] * n)]))


def random_explicit_problem(rng: random.Random, n: int, eligible=True, max_seeds=None):
    """Random downward-closed point set; eligible adds every unit vector."""
    if max_seeds is None:
        max_seeds = min(2**n, n + 3)
    seeds = [
        BinaryPoint([rng.randint(0, 1) for _ in range(n)])
        for _ in range(rng.randint(1, max_seeds))
    ]
    if eligible:
        seeds += [BinaryPoint.unit(n, k) for k in range(n)]
    return ExplicitProblem(ExplicitPolytope(n, seeds))


def random_knapsack_problem(rng: random.Random, n: int, eligible=True):
    cap = rng.randint(5, 60)
    if eligible:
        weights = [F(rng.randint(1, cap)) for _ in range(n)]
    else:
        weights = [F(rng.randint(1, cap)) for _ in range(n - 1)] + [F(cap + rng.randint(1, 9))]
    if rng.random() < 0.3:
        weights = [w / rng.randint(1, 3) for w in weights]
    return KnapsackProblem(KnapsackInstance(weights, cap))


def random_nonneg_mu(rng: random.Random, n: int) -> RVector:
    return RVector([F(rng.randint(0, 24), rng.randint(1, 4)) for _ in range(n)])


def random_signed_mu(rng: random.Random, n: int) -> RVector:
    return RVector([F(rng.randint(-24, 24), rng.randint(1, 4)) for _ in range(n)])


def random_combination(rng: random.Random, points, max_support=4) -> ConvexCombination:
    """Random distribution over a sample of the given points."""
    pool = sorted(points, key=lambda p: p.bits)
    support = rng.sample(pool, min(rng.randint(1, max_support), len(pool)))
    weights = [F(rng.randint(1, 9)) for _ in support]
    total = sum(weights)
    return ConvexCombination({p: w / total for p, w in zip(support, weights)})


class OriginVerifier(GapVerifier):
    """Deliberately broken: answers the origin no matter the objective."""

    def __init__(self, n, alpha=1):
        super().__init__(n, alpha)

    def query(self, mu):
        return BinaryPoint.origin(self.n)


def knapsack_lp_oracle(weights, capacity, mu) -> Fraction:
    """Exact optimum of the knapsack relaxation, independently of the solver.

    A vertex of the relaxation has at most one fractional coordinate, so the
    optimum is the best over all integral subsets that fit, each optionally
    extended by a fractional slice of one leftover item.
    """
    n = len(weights)
    best = F(0)
    for pattern in itertools.product((0, 1), repeat=n):
        load = sum((w for w, b in zip(weights, pattern) if b), F(0))
        if load > capacity:
            continue
        value = sum((c for c, b in zip(mu, pattern) if b), F(0))
        best = max(best, value)
        room = capacity - load
        for j in range(n):
            if pattern[j]:
                continue
            slice_ = min(F(1), room / weights[j])
            best = max(best, value + slice_ * mu[j])
    return best


def brute_force_sigma(combination) -> RVector:
    """Recompute the barycenter the slow, obvious way."""
    n = combination.dim
    comps = [F(0)] * n
    for point, weight in combination.items():
        for k in range(n):
            comps[k] += weight * point[k]
    return RVector(comps)
