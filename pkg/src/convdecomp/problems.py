"""Concrete packing problems, their verifiers, and desk-scale oracles.

Two problem families ship with the package.  Knapsack is the nontrivial
one: its relaxation has an exact closed-form optimum (fractional greedy),
so no external LP solver is needed, and the classic greedy-or-best-single
rule verifies a gap of 2.  Explicit polytopes store their feasible points
outright, closed downward on construction, and verify a gap of 1 by exact
maximization; they are the workhorse for oracle-backed testing.
"""

from __future__ import annotations

import itertools
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

from .errors import (
    DimensionMismatch,
    IneligibleInstanceError,
    InstanceFormatError,
)
from .geometry import (
    BinaryPoint,
    ConvexCombination,
    RVector,
    RationalLike,
    to_rational,
)
from .verifier import ExtendedVerifier, GapVerifier, clip_negative

_ZERO = Fraction(0)
_ONE = Fraction(1)

ENUMERATION_LIMIT = 16


class PackingProblem(ABC):
    """A downward-closed 0/1 problem bundled with its verifier and solver."""

    kind: str = "abstract"

    @property
    @abstractmethod
    def n(self) -> int:
        """Dimension of the problem."""

    @property
    @abstractmethod
    def alpha(self) -> Fraction:
        """Gap constant verified by :attr:`verifier`."""

    @abstractmethod
    def feasible(self, point: BinaryPoint) -> bool:
        """Membership test for binary points."""

    @property
    @abstractmethod
    def verifier(self) -> GapVerifier:
        """The problem's gap verifier (nonnegative objectives only)."""

    @abstractmethod
    def relaxed_optimum(self, mu: RVector) -> RVector:
        """An exact optimizer of the relaxation for a nonnegative objective."""

    def relaxed_value(self, mu: RVector) -> Fraction:
        """Optimal value of the relaxation for a nonnegative objective."""
        return mu.dot(self.relaxed_optimum(mu))

    def extended_verifier(self) -> ExtendedVerifier:
        """The verifier wrapped for arbitrary signed objectives."""
        return ExtendedVerifier(self.verifier, self.feasible)

    def _check_dim(self, v: Union[RVector, BinaryPoint]) -> None:
        if v.dim != self.n:
            raise DimensionMismatch(
                f"dimension {v.dim} does not match problem dimension {self.n}"
            )


def _require_nonnegative(mu: RVector) -> None:
    for k, c in enumerate(mu):
        if c < 0:
            raise ValueError(f"objective component {k} is negative: {c}")


def _point_value(mu: RVector, point: BinaryPoint) -> Fraction:
    """mu . point, summing only over the point's one-bits."""
    total = _ZERO
    for k in point.ones():
        c = mu[k]
        if c:
            total += c
    return total


# ---------------------------------------------------------------------------
# Knapsack


@dataclass(frozen=True)
class KnapsackInstance:
    """Item weights and a capacity, all exact rationals."""

    weights: Tuple[Fraction, ...]
    capacity: Fraction

    def __init__(self, weights: Sequence[RationalLike], capacity: RationalLike):
        ws = tuple(to_rational(w) for w in weights)
        cap = to_rational(capacity)
        if not ws:
            raise InstanceFormatError("knapsack needs at least one item")
        if any(w <= 0 for w in ws):
            raise InstanceFormatError("knapsack weights must be positive")
        if cap <= 0:
            raise InstanceFormatError("knapsack capacity must be positive")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "capacity", cap)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def decomposition_eligible(self) -> bool:
        """True iff every single item fits on its own."""
        return all(w <= self.capacity for w in self.weights)

    def fits(self, point: BinaryPoint) -> bool:
        load = sum((self.weights[k] for k in point.ones()), _ZERO)
        return load <= self.capacity

    def density_order(self, mu: RVector) -> List[int]:
        """Indices with positive objective, by value density, ties by index.

        Items the objective ignores are excluded so that a zero objective
        yields the origin.
        """
        keep = [k for k in range(self.n) if mu[k] > 0]
        keep.sort(key=lambda k: (-(mu[k] / self.weights[k]), k))
        return keep


class KnapsackVerifier(GapVerifier):
    """Greedy-or-best-single rule; verifies a gap of 2.

    The answer is the better, by objective value, of the density-ordered
    prefix that fits and the single most valuable item.  The fractional
    optimum never exceeds the prefix value plus one item's value, so twice
    the answer's value covers it.  Requires every item to fit on its own.
    """

    def __init__(self, instance: KnapsackInstance):
        super().__init__(instance.n, 2)
        self._instance = instance

    def query(self, mu: RVector) -> BinaryPoint:
        inst = self._instance
        if mu.dim != inst.n:
            raise DimensionMismatch(
                f"objective dimension {mu.dim} does not match instance dimension {inst.n}"
            )
        _require_nonnegative(mu)
        if not inst.decomposition_eligible:
            heavy = [k for k, w in enumerate(inst.weights) if w > inst.capacity]
            raise IneligibleInstanceError(
                f"item(s) {heavy} are heavier than the capacity; the greedy "
                "rule does not verify a gap of 2 on such instances"
            )
        order = inst.density_order(mu)
        prefix_bits = [0] * inst.n
        prefix_value = _ZERO
        remaining = inst.capacity
        for k in order:
            if inst.weights[k] > remaining:
                break
            prefix_bits[k] = 1
            prefix_value += mu[k]
            remaining -= inst.weights[k]
        if not order:
            return BinaryPoint.origin(inst.n)
        best_single = min(order, key=lambda k: (-mu[k], k))
        if mu[best_single] > prefix_value:
            return BinaryPoint.unit(inst.n, best_single)
        return BinaryPoint(prefix_bits)


class KnapsackProblem(PackingProblem):
    """Knapsack packing problem with the gap-2 greedy verifier."""

    kind = "knapsack"

    def __init__(self, instance: KnapsackInstance):
        self._instance = instance
        self._verifier = KnapsackVerifier(instance)

    @property
    def instance(self) -> KnapsackInstance:
        return self._instance

    @property
    def n(self) -> int:
        return self._instance.n

    @property
    def alpha(self) -> Fraction:
        return Fraction(2)

    def feasible(self, point: BinaryPoint) -> bool:
        self._check_dim(point)
        return self._instance.fits(point)

    @property
    def verifier(self) -> GapVerifier:
        return self._verifier

    def relaxed_optimum(self, mu: RVector) -> RVector:
        """Fractional greedy: fill by density, split the first misfit."""
        self._check_dim(mu)
        _require_nonnegative(mu)
        inst = self._instance
        comps = [_ZERO] * inst.n
        remaining = inst.capacity
        for k in inst.density_order(mu):
            w = inst.weights[k]
            if w <= remaining:
                comps[k] = _ONE
                remaining -= w
            else:
                if remaining > 0:
                    comps[k] = remaining / w
                break
        return RVector(comps)


# ---------------------------------------------------------------------------
# Explicit polytopes


class ExplicitPolytope:
    """A feasible set stored point by point, closed downward on construction.

    Lowering any coordinate of a feasible point must stay feasible, so the
    constructor completes the given set and reports what it had to add via
    :attr:`closure_added`.
    """

    def __init__(self, n: int, points: Iterable[BinaryPoint]):
        if n < 1:
            raise InstanceFormatError(f"dimension must be positive, got {n}")
        seeds = set()
        for p in points:
            if p.dim != n:
                raise DimensionMismatch(
                    f"point {p!r} has dimension {p.dim}, expected {n}"
                )
            seeds.add(p)
        closed = {BinaryPoint.origin(n)}
        for p in seeds:
            ones = p.ones()
            for pattern in itertools.product((0, 1), repeat=len(ones)):
                bits = [0] * n
                for k, keep in zip(ones, pattern):
                    bits[k] = keep
                closed.add(BinaryPoint(bits))
        self._n = n
        self._points = frozenset(closed)
        self._closure_added = frozenset(closed - seeds)
        self._ordered = tuple(sorted(self._points, key=lambda p: p.bits))

    @property
    def n(self) -> int:
        return self._n

    @property
    def points(self) -> FrozenSet[BinaryPoint]:
        return self._points

    @property
    def closure_added(self) -> FrozenSet[BinaryPoint]:
        """Points the downward closure added beyond the given ones."""
        return self._closure_added

    def ordered_points(self) -> Tuple[BinaryPoint, ...]:
        return self._ordered

    def __contains__(self, point: BinaryPoint) -> bool:
        return point in self._points


class ExplicitVerifier(GapVerifier):
    """Exact maximization over the stored points; verifies a gap of 1.

    For a nonnegative objective the relaxation over the convex hull of a
    downward-closed point set peaks at a stored point, so exact enumeration
    is a verifier with no gap at all.  Ties go to the lexicographically
    smallest point.
    """

    def __init__(self, polytope: ExplicitPolytope):
        super().__init__(polytope.n, 1)
        self._polytope = polytope

    def query(self, mu: RVector) -> BinaryPoint:
        if mu.dim != self._polytope.n:
            raise DimensionMismatch(
                f"objective dimension {mu.dim} does not match polytope dimension {self._polytope.n}"
            )
        _require_nonnegative(mu)
        return min(
            self._polytope.ordered_points(),
            key=lambda p: (-_point_value(mu, p), p.bits),
        )


class ExplicitProblem(PackingProblem):
    """Packing problem given by an explicit, downward-closed point list."""

    kind = "explicit"

    def __init__(self, polytope: ExplicitPolytope):
        self._polytope = polytope
        self._verifier = ExplicitVerifier(polytope)

    @property
    def polytope(self) -> ExplicitPolytope:
        return self._polytope

    @property
    def n(self) -> int:
        return self._polytope.n

    @property
    def alpha(self) -> Fraction:
        return Fraction(1)

    def feasible(self, point: BinaryPoint) -> bool:
        self._check_dim(point)
        return point in self._polytope

    @property
    def verifier(self) -> GapVerifier:
        return self._verifier

    def relaxed_optimum(self, mu: RVector) -> RVector:
        self._check_dim(mu)
        return self._verifier.query(mu).as_vector()


# ---------------------------------------------------------------------------
# Desk-scale oracles


def brute_force_lp_bound(
    problem: PackingProblem, mu: RVector, limit: int = ENUMERATION_LIMIT
) -> Fraction:
    """Exact optimum of the relaxation for an arbitrary signed objective.

    Negative components contribute nothing at the optimum of a downward
    closed problem, so the objective is clipped to its nonnegative part and
    handed to the problem's exact solver.
    """
    if problem.n > limit:
        raise ValueError(
            f"dimension {problem.n} exceeds the enumeration limit {limit}"
        )
    clipped = clip_negative(mu)
    return problem.relaxed_value(clipped)


def feasible_points(
    problem: PackingProblem, limit: int = ENUMERATION_LIMIT
) -> Iterator[BinaryPoint]:
    """Enumerate all feasible binary points (desk scale only)."""
    if problem.n > limit:
        raise ValueError(
            f"dimension {problem.n} exceeds the enumeration limit {limit}"
        )
    for bits in itertools.product((0, 1), repeat=problem.n):
        point = BinaryPoint(bits)
        if problem.feasible(point):
            yield point


def brute_force_integer_bound(
    problem: PackingProblem, mu: RVector, limit: int = ENUMERATION_LIMIT
) -> Fraction:
    """max of mu . x over all feasible binary points, by enumeration."""
    best = None
    for point in feasible_points(problem, limit):
        value = _point_value(mu, point)
        if best is None or value > best:
            best = value
    assert best is not None  # the origin is always feasible
    return best


# ---------------------------------------------------------------------------
# Decomposition validation


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a decomposition against its target."""

    failures: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_decomposition(
    problem: PackingProblem,
    combination: ConvexCombination,
    target: RVector,
) -> ValidationReport:
    """Re-derive every guarantee a finished decomposition must satisfy.

    Checks that the weights are positive and sum to exactly 1, that every
    support point is feasible, and that the barycenter equals the target
    bit for bit.  All failures are itemized rather than raised.
    """
    failures: List[str] = []
    total = _ZERO
    for point, weight in combination.items():
        total += weight
        if weight <= 0:
            failures.append(f"weight of {list(point.bits)} is {weight}, not positive")
    if total != _ONE:
        failures.append(f"weights sum to {total}, not exactly 1")
    if combination.dim != problem.n:
        failures.append(
            f"combination dimension {combination.dim} does not match problem "
            f"dimension {problem.n}"
        )
    else:
        for point in combination.support():
            if not problem.feasible(point):
                failures.append(f"support point {list(point.bits)} is infeasible")
    if target.dim != combination.dim:
        failures.append(
            f"target dimension {target.dim} does not match combination "
            f"dimension {combination.dim}"
        )
    else:
        sigma = combination.barycenter()
        for k in range(target.dim):
            if sigma[k] != target[k]:
                failures.append(
                    f"barycenter component {k} is {sigma[k]}, target wants {target[k]}"
                )
    return ValidationReport(failures=tuple(failures))


# ---------------------------------------------------------------------------
# Instance files


def load_instance(source: Union[str, Path, dict]) -> PackingProblem:
    """Build a problem from a JSON file path or an already-parsed dict.

    Knapsack instances look like
    ``{"problem": "knapsack", "weights": ["2", "3", "4"], "capacity": "5"}``
    and explicit instances like
    ``{"problem": "explicit", "n": 2, "points": [[1, 0], [0, 1]]}``.
    Rationals may be integers or "p/q" strings.
    """
    if isinstance(source, dict):
        data = source
    elif isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    else:
        raise TypeError(f"instance source must be a path or dict, got {type(source).__name__}")
    if not isinstance(data, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    kind = data.get("problem")
    if kind == "knapsack":
        try:
            weights = data["weights"]
            capacity = data["capacity"]
        except KeyError as missing:
            raise InstanceFormatError(f"knapsack instance lacks {missing}") from None
        if not isinstance(weights, list):
            raise InstanceFormatError("knapsack weights must be a list")
        try:
            return KnapsackProblem(KnapsackInstance(weights, capacity))
        except (TypeError, ValueError, ZeroDivisionError) as bad:
            raise InstanceFormatError(f"bad knapsack instance: {bad}") from bad
    if kind == "explicit":
        try:
            n = data["n"]
            rows = data["points"]
        except KeyError as missing:
            raise InstanceFormatError(f"explicit instance lacks {missing}") from None
        if not isinstance(n, int):
            raise InstanceFormatError("explicit instance dimension must be an integer")
        if not isinstance(rows, list):
            raise InstanceFormatError("explicit points must be a list of bit lists")
        try:
            points = [BinaryPoint(row) for row in rows]
            return ExplicitProblem(ExplicitPolytope(n, points))
        except (TypeError, ValueError) as bad:
            raise InstanceFormatError(f"bad explicit instance: {bad}") from bad
    raise InstanceFormatError(f"unknown problem kind: {kind!r}")
