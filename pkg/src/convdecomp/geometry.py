"""Exact rational vectors, binary lattice points, and convex combinations.

Everything in this module is an immutable value over exact fractions, and no
operation rounds.  These are the carriers for the whole pipeline: targets and
residuals are rational vectors, solution candidates are 0/1 points, and
distributions over candidates are convex combinations whose weights sum to
exactly 1 as a rational identity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

from .errors import DimensionMismatch

RationalLike = Union[Fraction, int, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or "p/q" string to an exact Fraction.

    Floats are rejected on purpose: converting one silently would smuggle
    rounding into a pipeline that promises bit-exact results.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing to convert float {value!r}; pass an exact rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


class RVector:
    """Immutable fixed-dimension vector with exact rational components."""

    __slots__ = ("_parts",)

    def __init__(self, components: Iterable[RationalLike]):
        parts = tuple(to_rational(c) for c in components)
        if not parts:
            raise ValueError("a vector needs at least one component")
        self._parts = parts

    @classmethod
    def zeros(cls, dim: int) -> "RVector":
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        return cls([_ZERO] * dim)

    @property
    def dim(self) -> int:
        return len(self._parts)

    def __len__(self) -> int:
        return len(self._parts)

    def __getitem__(self, index: int) -> Fraction:
        return self._parts[index]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._parts)

    def _check_dim(self, other: "RVector") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"vector dimensions differ: {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "RVector") -> "RVector":
        if not isinstance(other, RVector):
            return NotImplemented
        self._check_dim(other)
        return RVector(a + b for a, b in zip(self._parts, other._parts))

    def __sub__(self, other: "RVector") -> "RVector":
        if not isinstance(other, RVector):
            return NotImplemented
        self._check_dim(other)
        return RVector(a - b for a, b in zip(self._parts, other._parts))

    def scale(self, factor: RationalLike) -> "RVector":
        f = to_rational(factor)
        return RVector(f * a for a in self._parts)

    def dot(self, other: "RVector") -> Fraction:
        self._check_dim(other)
        total = _ZERO
        for a, b in zip(self._parts, other._parts):
            if a and b:
                total += a * b
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RVector):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self) -> int:
        return hash(self._parts)

    def __repr__(self) -> str:
        return "RVector((%s))" % ", ".join(f"'{c}'" for c in self._parts)


def squared_l2(v: RVector) -> Fraction:
    """Exact sum of squared components.

    Comparisons throughout the pipeline are done on squared norms so that
    irrational square roots never arise.
    """
    total = _ZERO
    for c in v:
        if c:
            total += c * c
    return total


def l1_distance(a: RVector, b: RVector) -> Fraction:
    """Exact sum of componentwise absolute differences."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"vector dimensions differ: {a.dim} vs {b.dim}")
    return sum((abs(x - y) for x, y in zip(a, b)), _ZERO)


class BinaryPoint:
    """A 0/1 lattice point, hashable and ordered lexicographically."""

    __slots__ = ("_bits", "_ones")

    def __init__(self, bits: Iterable[int]):
        bs = tuple(bits)
        if not bs:
            raise ValueError("a point needs at least one component")
        for b in bs:
            if b != 0 and b != 1:
                raise ValueError(f"binary point component must be 0 or 1, got {b!r}")
        self._bits = tuple(int(b) for b in bs)
        self._ones = tuple(k for k, b in enumerate(self._bits) if b)

    @classmethod
    def origin(cls, dim: int) -> "BinaryPoint":
        return cls([0] * dim)

    @classmethod
    def unit(cls, dim: int, k: int) -> "BinaryPoint":
        """The point whose only 1 sits at index ``k``."""
        if not 0 <= k < dim:
            raise IndexError(f"unit index {k} out of range for dimension {dim}")
        bits = [0] * dim
        bits[k] = 1
        return cls(bits)

    @property
    def dim(self) -> int:
        return len(self._bits)

    @property
    def bits(self) -> Tuple[int, ...]:
        return self._bits

    def ones(self) -> Tuple[int, ...]:
        """Indices of the components equal to 1."""
        return self._ones

    def __len__(self) -> int:
        return len(self._bits)

    def __getitem__(self, index: int) -> int:
        return self._bits[index]

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def is_origin(self) -> bool:
        return not self._ones

    def minus_unit(self, k: int) -> "BinaryPoint":
        """Copy of this point with component ``k`` lowered from 1 to 0."""
        if self._bits[k] != 1:
            raise ValueError(f"component {k} is 0, cannot lower it")
        bits = list(self._bits)
        bits[k] = 0
        return BinaryPoint(bits)

    def dominates(self, other: "BinaryPoint") -> bool:
        """Componentwise ``self >= other``."""
        if self.dim != other.dim:
            raise DimensionMismatch(f"point dimensions differ: {self.dim} vs {other.dim}")
        return all(a >= b for a, b in zip(self._bits, other._bits))

    def as_vector(self) -> RVector:
        return RVector(self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryPoint):
            return NotImplemented
        return self._bits == other._bits

    def __lt__(self, other: "BinaryPoint") -> bool:
        if not isinstance(other, BinaryPoint):
            return NotImplemented
        return self._bits < other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        return f"BinaryPoint({list(self._bits)})"


class ConvexCombination:
    """A finite distribution over binary points with exact positive weights.

    Invariants enforced at construction: all weights strictly positive
    (zero entries are dropped), all support points share one dimension, and
    the weights sum to exactly 1.  Iteration over the support is always in
    lexicographic order of the points, so downstream algorithms that "pick
    some point" are reproducible.
    """

    __slots__ = ("_items", "_lookup")

    def __init__(
        self,
        weights: Union[
            Mapping[BinaryPoint, RationalLike],
            Iterable[Tuple[BinaryPoint, RationalLike]],
        ],
    ):
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        merged: dict = {}
        for point, raw in pairs:
            if not isinstance(point, BinaryPoint):
                raise TypeError(f"support keys must be BinaryPoint, got {point!r}")
            w = to_rational(raw)
            if w < 0:
                raise ValueError(f"negative weight {w} for {point!r}")
            if w == 0:
                continue
            merged[point] = merged.get(point, _ZERO) + w
        if not merged:
            raise ValueError("combination has empty support; weights must sum to 1")
        dims = {p.dim for p in merged}
        if len(dims) > 1:
            raise DimensionMismatch(f"support points have mixed dimensions {sorted(dims)}")
        total = sum(merged.values(), _ZERO)
        if total != _ONE:
            raise ValueError(f"weights sum to {total}, expected exactly 1")
        self._items = tuple(sorted(merged.items(), key=lambda kv: kv[0].bits))
        self._lookup = dict(self._items)

    @classmethod
    def point_mass(cls, point: BinaryPoint) -> "ConvexCombination":
        """The distribution concentrated entirely on one point."""
        return cls({point: _ONE})

    @property
    def dim(self) -> int:
        return self._items[0][0].dim

    @property
    def support_size(self) -> int:
        return len(self._items)

    def support(self) -> Tuple[BinaryPoint, ...]:
        return tuple(p for p, _ in self._items)

    def items(self) -> Tuple[Tuple[BinaryPoint, Fraction], ...]:
        return self._items

    def weight(self, point: BinaryPoint) -> Fraction:
        return self._lookup.get(point, _ZERO)

    def __contains__(self, point: BinaryPoint) -> bool:
        return point in self._lookup

    def __iter__(self) -> Iterator[BinaryPoint]:
        return iter(p for p, _ in self._items)

    def barycenter(self) -> RVector:
        """The exact weighted sum of the support points.

        Every component lies in [0, 1] because the support is binary and the
        weights form a distribution.
        """
        comps = [_ZERO] * self.dim
        for point, w in self._items:
            for k in point.ones():
                comps[k] += w
        return RVector(comps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexCombination):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{list(p.bits)}: '{w}'" for p, w in self._items)
        return "ConvexCombination({%s})" % inner


def mix(
    a: ConvexCombination,
    wa: RationalLike,
    b: ConvexCombination,
    wb: RationalLike,
) -> ConvexCombination:
    """Blend two combinations with weights ``wa`` and ``wb``.

    Requires wa, wb >= 0 with wa + wb = 1.  The result's barycenter is
    exactly wa * barycenter(a) + wb * barycenter(b).
    """
    wa = to_rational(wa)
    wb = to_rational(wb)
    if wa < 0 or wb < 0:
        raise ValueError(f"mixture weights must be nonnegative, got {wa}, {wb}")
    if wa + wb != _ONE:
        raise ValueError(f"mixture weights must sum to 1, got {wa + wb}")
    if a.dim != b.dim:
        raise DimensionMismatch(f"combination dimensions differ: {a.dim} vs {b.dim}")
    merged: dict = {}
    if wa:
        for point, w in a.items():
            merged[point] = w * wa
    if wb:
        for point, w in b.items():
            merged[point] = merged.get(point, _ZERO) + w * wb
    return ConvexCombination(merged)
