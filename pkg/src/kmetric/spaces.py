"""Finite metric spaces with exact rational distances.

Everything here is exact: distances are `fractions.Fraction`, so the
equality test d(x,u) = d(x,v) that defines a bisector is decidable and
transitive.  Floating-point input is quantized to a fixed number of
decimal digits at load time and the precision is recorded in the space's
metadata, because tolerance-based equality would corrupt bisectors.

All types are immutable after construction and all operations are pure
functions; spaces can be shared freely across parallel workers.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import (
    AsymmetricDistance,
    DuplicateLabel,
    FormatError,
    LabelCollision,
    NegativeDistance,
    NonpositiveParameter,
    SamePoint,
    TriangleViolation,
    ZeroOffDiagonal,
)

DEFAULT_QUANTIZE_DIGITS = 12


class TwoPointSpaceWarning(UserWarning):
    """A 2-point space is accepted but degenerate for dimension analysis."""


def as_rational(value, quantize_digits: int = DEFAULT_QUANTIZE_DIGITS) -> tuple[Fraction, bool]:
    """Coerce a distance entry to an exact Fraction.

    Returns (fraction, quantized) where `quantized` is True iff the value
    was a float that had to be rounded to `quantize_digits` decimal digits.
    Strings accept both rational ("3/2") and decimal ("1.5") notation.
    """
    if isinstance(value, Fraction):
        return value, False
    if isinstance(value, bool):
        raise FormatError(f"distance entry {value!r} is not a number")
    if isinstance(value, int):
        return Fraction(value), False
    if isinstance(value, float):
        scale = 10**quantize_digits
        return Fraction(round(value * scale), scale), True
    if isinstance(value, str):
        try:
            return Fraction(value), False
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"cannot parse distance entry {value!r}") from exc
    raise FormatError(f"distance entry {value!r} is not a number")


@dataclass(frozen=True, order=True)
class PointSet:
    """A sorted, duplicate-free set of point indices into a space."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
            raise FormatError(f"indices must be strictly increasing, got {idx}")
        if idx and idx[0] < 0:
            raise FormatError(f"negative point index in {idx}")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "PointSet":
        return cls(tuple(sorted(set(indices))))

    @classmethod
    def from_mask(cls, mask: int) -> "PointSet":
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return cls(tuple(out))

    def to_mask(self) -> int:
        mask = 0
        for i in self.indices:
            mask |= 1 << i
        return mask

    def labels(self, space: "FiniteMetricSpace") -> tuple[str, ...]:
        return tuple(space.labels[i] for i in self.indices)

    def __contains__(self, index: int) -> bool:
        return index in self.indices

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """n labeled points with an exact, symmetric distance matrix."""

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        return self._label_index[label]

    def distance(self, u: int, v: int) -> Fraction:
        return self.dist[u][v]

    def diameter(self) -> Fraction:
        return max(max(row) for row in self.dist)

    def pairs(self) -> Iterator[tuple[int, int]]:
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                yield u, v

    @cached_property
    def _distinguishers(self) -> "DistinguisherMap":
        pairs = []
        sets = []
        n = self.n
        for u in range(n):
            du = self.dist[u]
            for v in range(u + 1, n):
                dv = self.dist[v]
                pairs.append((u, v))
                sets.append(PointSet(tuple(x for x in range(n) if du[x] != dv[x])))
        return DistinguisherMap(tuple(pairs), tuple(sets))


@dataclass(frozen=True)
class DistinguisherMap:
    """For each unordered pair (u,v), the points whose distances to u and v differ."""

    pairs: tuple[tuple[int, int], ...]
    sets: tuple[PointSet, ...]

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], int]:
        return {p: i for i, p in enumerate(self.pairs)}

    def get(self, u: int, v: int) -> PointSet:
        return self.sets[self._pair_index[(min(u, v), max(u, v))]]

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.to_mask() for s in self.sets)

    def min_size(self) -> int:
        return min(len(s) for s in self.sets)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class KGeneratorCertificate:
    """Coverage evidence that a set is (or is not) a k-metric generator."""

    k: int
    set: PointSet
    coverage: Mapping[tuple[int, int], int]
    valid: bool
    witness: tuple[int, int] | None

    def __post_init__(self):
        object.__setattr__(self, "coverage", MappingProxyType(dict(self.coverage)))

    def min_coverage(self) -> int:
        return min(self.coverage.values())


def build_space(labels, dist, meta=None, *, quantize_digits: int = DEFAULT_QUANTIZE_DIGITS) -> FiniteMetricSpace:
    """Validate and construct a FiniteMetricSpace from raw input.

    Checks every invariant: distinct labels, zero diagonal, positive
    symmetric off-diagonal entries, and the triangle inequality for all
    triples.  Float entries are quantized (recorded in meta).
    """
    labels = tuple(str(lab) for lab in labels)
    n = len(labels)
    if n < 2:
        raise FormatError(f"a metric space needs at least 2 points, got {n}")
    if n == 2:
        warnings.warn("2-point spaces are degenerate for dimension analysis", TwoPointSpaceWarning, stacklevel=2)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(lab)
        seen.add(lab)
    rows = list(dist)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise FormatError(f"distance matrix must be {n}x{n}")
    quantized = False
    matrix: list[tuple[Fraction, ...]] = []
    for row in rows:
        cooked = []
        for entry in row:
            value, was_quantized = as_rational(entry, quantize_digits)
            quantized = quantized or was_quantized
            cooked.append(value)
        matrix.append(tuple(cooked))
    d = tuple(matrix)
    for i in range(n):
        if d[i][i] != 0:
            raise FormatError(f"d[{i}][{i}]={d[i][i]} must be 0")
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise AsymmetricDistance(i, j, d[i][j], d[j][i])
            if d[i][j] < 0:
                raise NegativeDistance(i, j, d[i][j])
            if d[i][j] == 0:
                raise ZeroOffDiagonal(i, j)
    for i in range(n):
        di = d[i]
        for j in range(n):
            if j == i:
                continue
            dj = d[j]
            dij = di[j]
            for k in range(n):
                if di[k] > dij + dj[k]:
                    raise TriangleViolation(i, j, k, di[k], dij + dj[k])
    meta = dict(meta or {})
    if quantized:
        meta.setdefault("quantization_digits", quantize_digits)
    return FiniteMetricSpace(labels, d, meta)


def _check_pair(space: FiniteMetricSpace, u: int, v: int) -> None:
    n = space.n
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"point index out of range for n={n}: ({u}, {v})")
    if u == v:
        raise SamePoint(u)


def bisector(space: FiniteMetricSpace, u: int, v: int) -> PointSet:
    """Points equidistant from u and v.  Never contains u or v."""
    _check_pair(space, u, v)
    du, dv = space.dist[u], space.dist[v]
    return PointSet(tuple(x for x in range(space.n) if du[x] == dv[x]))


def distinguishers(space: FiniteMetricSpace, u: int, v: int) -> PointSet:
    """Complement of the bisector of (u,v).  Always contains u and v."""
    _check_pair(space, u, v)
    du, dv = space.dist[u], space.dist[v]
    return PointSet(tuple(x for x in range(space.n) if du[x] != dv[x]))


def all_distinguishers(space: FiniteMetricSpace) -> DistinguisherMap:
    """Distinguisher sets for all n(n-1)/2 pairs, in lexicographic pair order."""
    return space._distinguishers


def is_k_generator(space: FiniteMetricSpace, points: PointSet | Iterable[int], k: int) -> KGeneratorCertificate:
    """Certificate for whether `points` distinguishes every pair at least k times."""
    if k < 1:
        raise NonpositiveParameter("k", k)
    pset = points if isinstance(points, PointSet) else PointSet.of(points)
    mask = pset.to_mask()
    dmap = all_distinguishers(space)
    coverage: dict[tuple[int, int], int] = {}
    witness = None
    for pair, pair_mask in zip(dmap.pairs, dmap.masks):
        count = (mask & pair_mask).bit_count()
        coverage[pair] = count
        if count < k and witness is None:
            witness = pair
    return KGeneratorCertificate(k=k, set=pset, coverage=coverage, valid=witness is None, witness=witness)


def max_k(space: FiniteMetricSpace) -> int:
    """Largest k admitting a k-metric generator: the smallest distinguisher set size."""
    return all_distinguishers(space).min_size()


def truncate(space: FiniteMetricSpace, t, cutoff=None) -> FiniteMetricSpace:
    """Cap every off-diagonal distance at `cutoff` (default 2t).

    The default cutoff of 2t is the one used by the join construction; the
    parameter is explicit so the alternative single-t reading can be tested.
    """
    t = Fraction(t)
    if t <= 0:
        raise NonpositiveParameter("t", t)
    cap = Fraction(cutoff) if cutoff is not None else 2 * t
    if cap <= 0:
        raise NonpositiveParameter("cutoff", cap)
    d = tuple(tuple(min(x, cap) for x in row) for row in space.dist)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TwoPointSpaceWarning)
        return build_space(space.labels, d, meta=dict(space.meta))


def join(a: FiniteMetricSpace, b: FiniteMetricSpace, t) -> FiniteMetricSpace:
    """Disjoint union with within-part distances capped at 2t and cross distance t.

    The construction always yields a metric for t > 0, but the result is
    revalidated anyway so ingestion bugs surface as hard errors.
    """
    t = Fraction(t)
    if t <= 0:
        raise NonpositiveParameter("t", t)
    shared = set(a.labels) & set(b.labels)
    if shared:
        raise LabelCollision(shared)
    cap = 2 * t
    na, nb = a.n, b.n
    labels = a.labels + b.labels
    size = na + nb
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if i < na and j < na:
                row.append(min(a.dist[i][j], cap))
            elif i >= na and j >= na:
                row.append(min(b.dist[i - na][j - na], cap))
            else:
                row.append(t)
        rows.append(tuple(row))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TwoPointSpaceWarning)
        return build_space(labels, tuple(rows))


def permute_space(space: FiniteMetricSpace, perm: Iterable[int]) -> FiniteMetricSpace:
    """Relabel points by a permutation: new point i is old point perm[i]."""
    perm = tuple(perm)
    if sorted(perm) != list(range(space.n)):
        raise FormatError(f"not a permutation of 0..{space.n - 1}: {perm}")
    labels = tuple(space.labels[p] for p in perm)
    d = tuple(tuple(space.dist[p][q] for q in perm) for p in perm)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TwoPointSpaceWarning)
        return build_space(labels, d, meta=dict(space.meta))


# --- JSON interchange -------------------------------------------------------
#
# {"labels": [...], "distances": [["0","3/2"],["3/2","0"]], "meta": {...}}
#
# Distance entries are strings in lowest-terms rational ("3/2") or decimal
# ("1.5") notation; plain integers are also accepted.  Serialization is
# deterministic: label order is preserved and rationals are emitted in
# lowest terms.

def space_to_json_dict(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "distances": [[str(x) for x in row] for row in space.dist],
        "meta": {key: space.meta[key] for key in sorted(space.meta)},
    }


def space_from_json_dict(data: dict, *, quantize_digits: int = DEFAULT_QUANTIZE_DIGITS) -> FiniteMetricSpace:
    try:
        labels = data["labels"]
        distances = data["distances"]
    except (TypeError, KeyError) as exc:
        raise FormatError("space JSON needs 'labels' and 'distances'") from exc
    return build_space(labels, distances, meta=data.get("meta"), quantize_digits=quantize_digits)


def dump_space(space: FiniteMetricSpace) -> str:
    return json.dumps(space_to_json_dict(space), indent=2, sort_keys=True)


def load_space(text: str, *, quantize_digits: int = DEFAULT_QUANTIZE_DIGITS) -> FiniteMetricSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return space_from_json_dict(data, quantize_digits=quantize_digits)
