"""Batch front end: load an instance, decompose, emit a JSON report.

The report carries every number as an exact rational string, so parsing it
back yields the same values bit for bit.  Sampling from the resulting
distribution lives here rather than in the core: the decomposition's job
ends at the distribution, drawing outcomes from it is application plumbing.

Exit codes: 0 success, 2 validation failure or ineligible instance,
3 verifier-contract violation, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import bisect
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .epsilon import decompose_epsilon
from .errors import (
    DecompositionError,
    InstanceFormatError,
    VerifierGapViolation,
    VerifierViolation,
)
from .exact import decompose_exact
from .geometry import BinaryPoint, ConvexCombination, RVector, squared_l2, to_rational
from .problems import (
    PackingProblem,
    ValidationReport,
    load_instance,
    validate_decomposition,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFIER = 3
EXIT_USAGE = 4

MODES = ("epsilon", "exact", "exact-overall")


class CLIUsageError(Exception):
    """Bad command line or unreadable input; maps to exit code 4."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline invocation needs."""

    instance: str
    epsilon: Fraction
    mu: Optional[RVector] = None
    xstar: Optional[RVector] = None
    mode: str = "exact"
    verify: bool = False
    sample_count: int = 0
    rng_seed: int = 0
    out: Optional[str] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.sample_count < 0:
            raise ValueError(f"sample count must be >= 0, got {self.sample_count}")
        if (self.mu is None) == (self.xstar is None):
            raise ValueError("exactly one of mu and xstar must be given")


@dataclass(frozen=True)
class RunStats:
    epsilon_iterations: int
    final_squared_residual: Fraction
    support_size_epsilon: int
    exact_steps: Optional[int]
    support_size_dominating: Optional[int]
    support_size_final: int
    wall_time_seconds: float

    def to_dict(self) -> dict:
        return {
            "epsilon_iterations": self.epsilon_iterations,
            "final_squared_residual": str(self.final_squared_residual),
            "support_size_epsilon": self.support_size_epsilon,
            "exact_steps": self.exact_steps,
            "support_size_dominating": self.support_size_dominating,
            "support_size_final": self.support_size_final,
            "wall_time_seconds": self.wall_time_seconds,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunStats":
        return cls(
            epsilon_iterations=data["epsilon_iterations"],
            final_squared_residual=to_rational(data["final_squared_residual"]),
            support_size_epsilon=data["support_size_epsilon"],
            exact_steps=data["exact_steps"],
            support_size_dominating=data["support_size_dominating"],
            support_size_final=data["support_size_final"],
            wall_time_seconds=data["wall_time_seconds"],
        )


def _vector_to_strings(v: Optional[RVector]) -> Optional[List[str]]:
    return None if v is None else [str(c) for c in v]


def _vector_from_strings(data) -> Optional[RVector]:
    return None if data is None else RVector(data)


@dataclass(frozen=True)
class DecompositionReport:
    """Full machine-readable outcome of one run."""

    problem_kind: str
    n: int
    alpha: Fraction
    mode: str
    epsilon: Fraction
    slack: Optional[Fraction]
    mu: Optional[RVector]
    xstar: RVector
    target: RVector
    support: ConvexCombination
    stats: RunStats
    verification: Optional[ValidationReport]
    samples: Tuple[BinaryPoint, ...]

    def to_dict(self) -> dict:
        return {
            "problem_kind": self.problem_kind,
            "n": self.n,
            "alpha": str(self.alpha),
            "mode": self.mode,
            "epsilon": str(self.epsilon),
            "slack": None if self.slack is None else str(self.slack),
            "mu": _vector_to_strings(self.mu),
            "xstar": _vector_to_strings(self.xstar),
            "target": _vector_to_strings(self.target),
            "support": [
                {"point": list(point.bits), "weight": str(weight)}
                for point, weight in self.support.items()
            ],
            "stats": self.stats.to_dict(),
            "verification": (
                None
                if self.verification is None
                else {
                    "passed": self.verification.passed,
                    "failures": list(self.verification.failures),
                }
            ),
            "samples": [list(p.bits) for p in self.samples],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DecompositionReport":
        verification = data["verification"]
        return cls(
            problem_kind=data["problem_kind"],
            n=data["n"],
            alpha=to_rational(data["alpha"]),
            mode=data["mode"],
            epsilon=to_rational(data["epsilon"]),
            slack=None if data["slack"] is None else to_rational(data["slack"]),
            mu=_vector_from_strings(data["mu"]),
            xstar=_vector_from_strings(data["xstar"]),
            target=_vector_from_strings(data["target"]),
            support=ConvexCombination(
                (BinaryPoint(entry["point"]), to_rational(entry["weight"]))
                for entry in data["support"]
            ),
            stats=RunStats.from_dict(data["stats"]),
            verification=(
                None
                if verification is None
                else ValidationReport(failures=tuple(verification["failures"]))
            ),
            samples=tuple(BinaryPoint(row) for row in data["samples"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DecompositionReport":
        return cls.from_dict(json.loads(text))


def sample(
    combination: ConvexCombination, count: int, seed: int
) -> List[BinaryPoint]:
    """Draw ``count`` points i.i.d. from the distribution given by the weights.

    Deterministic for a fixed seed: each draw turns 64 generator bits into
    the fraction k / 2^64 and inverts the exact cumulative weights at it, so
    the same seed reproduces the same sequence bit for bit.
    """
    if count < 0:
        raise ValueError(f"sample count must be >= 0, got {count}")
    points = []
    cumulative = []
    running = _ZERO
    for point, weight in combination.items():
        running += weight
        points.append(point)
        cumulative.append(running)
    rng = random.Random(seed)
    denominator = 1 << 64
    draws = []
    for _ in range(count):
        u = Fraction(rng.getrandbits(64), denominator)
        draws.append(points[bisect.bisect_right(cumulative, u)])
    return draws


def _verify_exact(
    problem: PackingProblem,
    result: ConvexCombination,
    target: RVector,
    mu: Optional[RVector],
) -> ValidationReport:
    report = validate_decomposition(problem, result, target)
    failures = list(report.failures)
    if mu is not None and not failures:
        # Expected value of the objective under the distribution must match
        # the objective at the target; restated over the report's numbers.
        expected = sum(
            (w * mu.dot(p.as_vector()) for p, w in result.items()), _ZERO
        )
        direct = mu.dot(target)
        if expected != direct:
            failures.append(
                f"expected objective value {expected} differs from {direct}"
            )
    return ValidationReport(failures=tuple(failures))


def _verify_epsilon(
    problem: PackingProblem,
    result: ConvexCombination,
    target: RVector,
    epsilon: Fraction,
    final_squared_residual: Fraction,
) -> ValidationReport:
    failures: List[str] = []
    total = sum((w for _, w in result.items()), _ZERO)
    if total != _ONE:
        failures.append(f"weights sum to {total}, not exactly 1")
    for point in result.support():
        if not problem.feasible(point):
            failures.append(f"support point {list(point.bits)} is infeasible")
    actual = squared_l2(target - result.barycenter())
    if actual != final_squared_residual:
        failures.append(
            f"recomputed squared residual {actual} differs from reported "
            f"{final_squared_residual}"
        )
    if actual > epsilon * epsilon:
        failures.append(
            f"squared residual {actual} exceeds epsilon^2 = {epsilon * epsilon}"
        )
    return ValidationReport(failures=tuple(failures))


def run(config: RunConfig) -> DecompositionReport:
    """Execute one pipeline invocation and assemble its report."""
    problem = load_instance(config.instance)
    if config.mu is not None:
        if config.mu.dim != problem.n:
            raise ValueError(
                f"objective dimension {config.mu.dim} does not match instance "
                f"dimension {problem.n}"
            )
        xstar = problem.relaxed_optimum(config.mu)
    else:
        xstar = config.xstar
        if xstar.dim != problem.n:
            raise ValueError(
                f"xstar dimension {xstar.dim} does not match instance "
                f"dimension {problem.n}"
            )

    started = time.perf_counter()
    if config.mode == "epsilon":
        target = xstar.scale(_ONE / problem.alpha)
        phase1 = decompose_epsilon(
            target, problem.extended_verifier(), config.epsilon
        )
        elapsed = time.perf_counter() - started
        result = phase1.result
        slack = None
        stats = RunStats(
            epsilon_iterations=phase1.iterations,
            final_squared_residual=phase1.final_squared_residual,
            support_size_epsilon=phase1.result.support_size,
            exact_steps=None,
            support_size_dominating=None,
            support_size_final=result.support_size,
            wall_time_seconds=elapsed,
        )
        verification = (
            _verify_epsilon(
                problem, result, target, config.epsilon, phase1.final_squared_residual
            )
            if config.verify
            else None
        )
    else:
        exact_run = decompose_exact(
            problem,
            xstar,
            config.epsilon,
            overall=(config.mode == "exact-overall"),
        )
        elapsed = time.perf_counter() - started
        target = exact_run.scaled_target
        result = exact_run.result
        slack = exact_run.slack
        stats = RunStats(
            epsilon_iterations=exact_run.phase1.iterations,
            final_squared_residual=exact_run.phase1.final_squared_residual,
            support_size_epsilon=exact_run.phase1.result.support_size,
            exact_steps=exact_run.exact_steps,
            support_size_dominating=exact_run.dominating.support_size,
            support_size_final=result.support_size,
            wall_time_seconds=elapsed,
        )
        verification = (
            _verify_exact(problem, result, target, config.mu)
            if config.verify
            else None
        )

    samples = tuple(sample(result, config.sample_count, config.rng_seed))
    return DecompositionReport(
        problem_kind=problem.kind,
        n=problem.n,
        alpha=problem.alpha,
        mode=config.mode,
        epsilon=config.epsilon,
        slack=slack,
        mu=config.mu,
        xstar=xstar,
        target=target,
        support=result,
        stats=stats,
        verification=verification,
        samples=samples,
    )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise CLIUsageError(message)


def _parse_vector(text: str, flag: str) -> RVector:
    try:
        return RVector(part for part in text.split(","))
    except (ValueError, ZeroDivisionError, TypeError) as bad:
        raise CLIUsageError(f"cannot parse {flag} {text!r}: {bad}") from bad


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="decompose",
        description=(
            "Decompose a scaled optimum of a packing relaxation into an exact "
            "convex combination of feasible 0/1 points."
        ),
    )
    parser.add_argument("--instance", required=True, help="path to a JSON instance file")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--mu",
        help="nonnegative objective, comma-separated rationals, e.g. '3,3,4'; "
        "the relaxed optimum is computed from it",
    )
    group.add_argument(
        "--xstar",
        help="use this relaxed optimum directly, comma-separated rationals",
    )
    parser.add_argument(
        "--epsilon", required=True, help="precision of the first phase, e.g. '1/10'"
    )
    parser.add_argument(
        "--mode",
        choices=MODES,
        default="exact",
        help="epsilon: stop after the precision phase; exact: full pipeline; "
        "exact-overall: run the precision phase at epsilon/ceil(sqrt(n)) so "
        "the extra scaling is epsilon itself",
    )
    parser.add_argument(
        "--verify",
        action="store_true",
        help="re-derive all guarantees of the output and fail (exit 2) if any breaks",
    )
    parser.add_argument(
        "--sample",
        type=int,
        default=0,
        metavar="COUNT",
        help="draw COUNT points from the resulting distribution",
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for the sample generator"
    )
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    try:
        epsilon = to_rational(args.epsilon)
    except (ValueError, ZeroDivisionError, TypeError) as bad:
        raise CLIUsageError(f"cannot parse --epsilon {args.epsilon!r}: {bad}") from bad
    mu = _parse_vector(args.mu, "--mu") if args.mu is not None else None
    xstar = _parse_vector(args.xstar, "--xstar") if args.xstar is not None else None
    if mu is not None and any(c < 0 for c in mu):
        raise CLIUsageError("--mu must be nonnegative")
    try:
        return RunConfig(
            instance=args.instance,
            epsilon=epsilon,
            mu=mu,
            xstar=xstar,
            mode=args.mode,
            verify=args.verify,
            sample_count=args.sample,
            rng_seed=args.seed,
            out=args.out,
        )
    except ValueError as bad:
        raise CLIUsageError(str(bad)) from bad


def _emit(report: DecompositionReport, out: Optional[str]) -> None:
    text = report.to_json()
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        print(f"wrote report to {out}", file=sys.stderr)


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except CLIUsageError as bad:
        print(f"error: {bad}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = run(config)
    except (InstanceFormatError, OSError, json.JSONDecodeError) as bad:
        print(f"error: {bad}", file=sys.stderr)
        return EXIT_USAGE
    except VerifierGapViolation as bad:
        print(f"verifier contract violated: {bad}", file=sys.stderr)
        if bad.mu is not None:
            print(
                "certificate objective: "
                + ",".join(str(c) for c in bad.mu),
                file=sys.stderr,
            )
        return EXIT_VERIFIER
    except VerifierViolation as bad:
        print(f"verifier contract violated: {bad}", file=sys.stderr)
        return EXIT_VERIFIER
    except (DecompositionError, ValueError) as bad:
        print(f"error: {bad}", file=sys.stderr)
        return EXIT_VALIDATION

    _emit(report, config.out)
    if report.verification is not None and not report.verification.passed:
        for failure in report.verification.failures:
            print(f"verification failure: {failure}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
