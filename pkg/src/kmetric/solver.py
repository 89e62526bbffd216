"""Exact, brute-force, and greedy computation of k-metric dimensions.

The problem solved here: find a minimum set S of points such that for
every pair of distinct points (u,v), S contains at least k points whose
distances to u and v differ.  This is a set multicover instance whose
covering sets are the per-pair distinguisher sets; it is attacked by
branch-and-bound over point inclusion.

Search design (sequential mode is deterministic):
  * constraints are deduplicated and superset-dominated ones dropped;
  * branching picks the unsatisfied pair with the smallest residual
    distinguisher set (fail-first) and tries its remaining points in
    index order, excluding earlier-tried siblings to avoid revisits;
  * points forced by tight constraints (residual set size equals the
    residual requirement) are included without branching;
  * the incumbent is seeded by `greedy_upper`;
  * lower bounds: the coverage requirement itself, the previous dimension
    plus one when solving a sequence level, a greedy packing of pairwise
    disjoint distinguisher sets, and a decomposition bound that solves
    support-disjoint constraint clusters exactly when their support is
    small (memoized); the maximum of all applies.

After the optimum is proven, the reported basis is recomputed as the
lexicographically smallest optimal set (sequential mode), so repeated
runs are byte-identical.  Parallel mode splits the root branches over a
process pool: the optimum is schedule-independent but the basis is
whichever witness a worker found first.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations
from typing import Sequence

from .errors import InstanceTooLarge, KMetricError, NonpositiveParameter
from .spaces import FiniteMetricSpace, PointSet, all_distinguishers, max_k

DEFAULT_BUDGET_SECS = 60.0
BRUTEFORCE_CAP = 16
# Constraint clusters with support at most this many points get an exact
# (memoized) multicover solve inside the lower bound.
COMPONENT_SUPPORT_CAP = 12


@total_ordering
class ExtendedNat:
    """A non-negative integer or infinity; infinity exceeds every finite value."""

    __slots__ = ("value",)

    def __init__(self, value: int | None):
        if value is not None:
            if value < 0:
                raise ValueError(f"ExtendedNat must be non-negative, got {value}")
            value = int(value)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, _value):
        raise AttributeError("ExtendedNat is immutable")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    @staticmethod
    def of(x: "ExtendedNat | int") -> "ExtendedNat":
        return x if isinstance(x, ExtendedNat) else ExtendedNat(x)

    def _cmp_key(self):
        return (1,) if self.value is None else (0, self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, (ExtendedNat, int)):
            return self._cmp_key() == ExtendedNat.of(other)._cmp_key()
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (ExtendedNat, int)):
            return self._cmp_key() < ExtendedNat.of(other)._cmp_key()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._cmp_key())

    def __add__(self, other: "ExtendedNat | int") -> "ExtendedNat":
        other = ExtendedNat.of(other)
        if self.value is None or other.value is None:
            return INFINITY
        return ExtendedNat(self.value + other.value)

    __radd__ = __add__

    def __repr__(self) -> str:
        return "inf" if self.value is None else str(self.value)

    __str__ = __repr__

    def to_json(self) -> int | str:
        return "inf" if self.value is None else self.value


INFINITY = ExtendedNat(None)


@dataclass(frozen=True)
class DimensionSequence:
    """Finite dimension values for k = 1..len(entries); infinite from tail_start on."""

    entries: tuple[ExtendedNat, ...]
    tail_start: int | None

    def __post_init__(self):
        prev = None
        for i, entry in enumerate(self.entries, start=1):
            if not entry.is_finite:
                raise ValueError(f"entry for k={i} must be finite (tail_start marks infinity)")
            if entry < i:
                raise ValueError(f"dim_{i}={entry} below the floor k={i}")
            if prev is not None and entry.value < prev + 1:
                raise ValueError(f"dim_{i}={entry} not above dim_{i - 1}={prev}")
            prev = entry.value
        if self.tail_start is not None and self.tail_start <= len(self.entries):
            raise ValueError("tail_start lies inside the finite entries")

    def get(self, k: int) -> ExtendedNat:
        if k < 1:
            raise NonpositiveParameter("k", k)
        if k <= len(self.entries):
            return self.entries[k - 1]
        if self.tail_start is not None and k >= self.tail_start:
            return INFINITY
        raise KMetricError(f"dim_{k} was not computed (horizon {len(self.entries)})")

    def as_values(self) -> tuple[int, ...]:
        return tuple(e.value for e in self.entries)

    def to_csv(self) -> str:
        lines = ["k,dim_k"]
        lines.extend(f"{k},{entry}" for k, entry in enumerate(self.entries, start=1))
        if self.tail_start is not None:
            lines.append(f"{self.tail_start},inf")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one dim_k computation."""

    k: int
    optimum: ExtendedNat
    basis: PointSet | None
    lower_bound_trace: tuple[tuple[str, int], ...]
    nodes_explored: int
    greedy_value: int | None
    elapsed: float
    status: str  # "optimal" (exact, possibly infinite) or "bounded" (budget ran out)
    bounds: tuple[int, int] | None = None  # (proven lower, incumbent) when bounded

    def to_json_dict(self, include_timing: bool = True) -> dict:
        out = {
            "k": self.k,
            "optimum": self.optimum.to_json(),
            "basis": list(self.basis.indices) if self.basis is not None else None,
            "lower_bound_trace": [[name, value] for name, value in self.lower_bound_trace],
            "nodes_explored": self.nodes_explored,
            "greedy_value": self.greedy_value,
            "status": self.status,
            "bounds": list(self.bounds) if self.bounds else None,
        }
        if include_timing:
            out["elapsed"] = self.elapsed
        return out


def greedy_upper(space: FiniteMetricSpace, k: int) -> tuple[int, PointSet] | None:
    """Greedy k-generator: repeatedly add the point that cuts the total
    coverage deficit the most (ties to the smallest index).  Returns None
    when no k-generator exists (k exceeds max_k)."""
    if k < 1:
        raise NonpositiveParameter("k", k)
    masks = all_distinguishers(space).masks
    if min(m.bit_count() for m in masks) < k:
        return None
    n = space.n
    deficits = [k] * len(masks)
    chosen_mask = 0
    chosen: list[int] = []
    while any(d > 0 for d in deficits):
        best_gain = -1
        best_x = -1
        for x in range(n):
            bit = 1 << x
            if chosen_mask & bit:
                continue
            gain = sum(1 for m, d in zip(masks, deficits) if d > 0 and m & bit)
            if gain > best_gain:
                best_gain = gain
                best_x = x
        chosen_mask |= 1 << best_x
        chosen.append(best_x)
        for i, m in enumerate(masks):
            if deficits[i] > 0 and m & (1 << best_x):
                deficits[i] -= 1
    return len(chosen), PointSet.of(chosen)


def dim_bruteforce(space: FiniteMetricSpace, k: int, *, cap: int = BRUTEFORCE_CAP) -> ExtendedNat:
    """Independent oracle: scan subsets by increasing cardinality.

    Starts at size k because a set smaller than k cannot meet a coverage
    requirement of k.  Intended for cross-validating the exact solver.
    """
    if k < 1:
        raise NonpositiveParameter("k", k)
    n = space.n
    if n > cap:
        raise InstanceTooLarge(n, cap)
    masks = sorted(all_distinguishers(space).masks, key=lambda m: m.bit_count())
    if masks[0].bit_count() < k:
        return INFINITY
    for size in range(k, n + 1):
        for combo in combinations(range(n), size):
            sm = 0
            for x in combo:
                sm |= 1 << x
            if all((sm & m).bit_count() >= k for m in masks):
                return ExtendedNat(size)
    raise AssertionError("a feasible instance must admit the full point set")


# --- constraint preprocessing -----------------------------------------------

def _reduced_constraints(masks: Sequence[int], k: int) -> list[tuple[int, int]]:
    """Dedup equal distinguisher sets and drop supersets of other sets.

    All constraints carry the same requirement k, so if one distinguisher
    set contains another, satisfying the smaller one implies the larger.
    """
    unique = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in unique:
        if any(km & m == km for km in kept):
            continue
        kept.append(m)
    return [(m, k) for m in kept]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _packing_bound(residuals: Sequence[tuple[int, int]]) -> int:
    """Sum of requirements over a greedily chosen pairwise-disjoint family."""
    used = 0
    total = 0
    for mask, need in sorted(residuals, key=lambda c: (c[0].bit_count(), c[0])):
        if mask & used == 0:
            used |= mask
            total += need
    return total


def _exact_cluster_min(members: tuple[tuple[int, int], ...], support: tuple[int, ...]) -> int:
    """Minimum points meeting every (mask, need) constraint; support is small."""
    for size in range(1, len(support) + 1):
        for combo in combinations(support, size):
            sm = 0
            for x in combo:
                sm |= 1 << x
            if all((sm & m).bit_count() >= need for m, need in members):
                return size
    return len(support)


def _cluster_bound(residuals: Sequence[tuple[int, int]], cache: dict) -> int:
    """Partition constraints into support-disjoint clusters and bound each.

    Clusters whose support fits under COMPONENT_SUPPORT_CAP are solved
    exactly (memoized on a support-relabeled key); larger ones fall back
    to the disjoint-set packing bound.  Cluster bounds add up because the
    clusters share no points.
    """
    clusters: list[tuple[int, list[tuple[int, int]]]] = []  # (support mask, members)
    for mask, need in residuals:
        merged_mask = mask
        merged_members = [(mask, need)]
        rest = []
        for cmask, members in clusters:
            if cmask & mask:
                merged_mask |= cmask
                merged_members.extend(members)
            else:
                rest.append((cmask, members))
        rest.append((merged_mask, merged_members))
        clusters = rest
    total = 0
    for cmask, members in clusters:
        support = _bits(cmask)
        if len(support) <= COMPONENT_SUPPORT_CAP and len(members) <= 64:
            pos = {b: i for i, b in enumerate(support)}
            normalized = []
            for m, need in members:
                nm = 0
                for b in _bits(m):
                    nm |= 1 << pos[b]
                normalized.append((nm, need))
            key = tuple(sorted(set(normalized)))
            value = cache.get(key)
            if value is None:
                value = _exact_cluster_min(key, tuple(range(len(support))))
                cache[key] = value
            total += value
        else:
            total += _packing_bound(members)
    return total


# --- branch and bound ---------------------------------------------------------

class _BudgetExceeded(Exception):
    pass


class _Search:
    """DFS over point inclusions for one multicover instance."""

    def __init__(self, constraints: Sequence[tuple[int, int]], incumbent_size: int,
                 incumbent_mask: int, deadline: float | None):
        self.constraints = list(constraints)
        self.best_size = incumbent_size
        self.best_mask = incumbent_mask
        self.deadline = deadline
        self.nodes = 0
        self.cache: dict = {}

    def _check_budget(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _BudgetExceeded

    def _residuals(self, chosen: int, banned: int) -> list[tuple[int, int]] | None:
        """Residual (available mask, remaining need) per unsatisfied constraint,
        with forced points absorbed into `chosen`; None when infeasible."""
        while True:
            forced = 0
            residuals = []
            for mask, need in self.constraints:
                have = (mask & chosen).bit_count()
                if have >= need:
                    continue
                rmask = mask & ~chosen & ~banned
                rneed = need - have
                avail = rmask.bit_count()
                if avail < rneed:
                    return None
                if avail == rneed:
                    forced |= rmask
                    continue
                residuals.append((rmask, rneed))
            if not forced:
                self._chosen = chosen
                return residuals
            chosen |= forced

    def run(self):
        self._visit(0, 0)

    def _visit(self, chosen: int, banned: int):
        self.nodes += 1
        self._check_budget()
        residuals = self._residuals(chosen, banned)
        if residuals is None:
            return
        chosen = self._chosen
        size = chosen.bit_count()
        if not residuals:
            if size < self.best_size:
                self.best_size = size
                self.best_mask = chosen
            return
        bound = max(max(need for _, need in residuals), _cluster_bound(residuals, self.cache))
        if size + bound >= self.best_size:
            return
        rmask, rneed = min(residuals, key=lambda c: (c[0].bit_count(), c[0]))
        points = _bits(rmask)
        excluded = 0
        for j in range(len(points) - rneed + 1):
            self._visit(chosen | (1 << points[j]), banned | excluded)
            excluded |= 1 << points[j]


def _solve_subtree(args) -> tuple[int, int, int, bool]:
    """Worker entry for parallel mode: solve one root branch to completion."""
    constraints, chosen, banned, incumbent_size, incumbent_mask, budget = args
    deadline = time.monotonic() + budget if budget is not None else None
    search = _Search(constraints, incumbent_size, incumbent_mask, deadline)
    timed_out = False
    try:
        search._visit(chosen, banned)
    except _BudgetExceeded:
        timed_out = True
    return search.best_size, search.best_mask, search.nodes, timed_out


def _lex_min_basis(constraints: Sequence[tuple[int, int]], target: int,
                   deadline: float | None, cache: dict) -> tuple[int | None, int]:
    """First valid point set of size `target` in lexicographic subset order.

    Only points in some unsatisfied constraint's residual set can appear in
    an optimal solution (anything else could be dropped), so candidates are
    drawn from the residual support at each step.
    """
    nodes = 0

    def residuals_for(chosen: int, start: int) -> list[tuple[int, int]] | None:
        low_banned = (1 << start) - 1 & ~chosen
        out = []
        for mask, need in constraints:
            have = (mask & chosen).bit_count()
            if have >= need:
                continue
            rmask = mask & ~chosen & ~low_banned
            rneed = need - have
            if rmask.bit_count() < rneed:
                return None
            out.append((rmask, rneed))
        return out

    def extend(chosen: int, start: int, count: int) -> int | None:
        nonlocal nodes
        nodes += 1
        if deadline is not None and time.monotonic() > deadline:
            raise _BudgetExceeded
        residuals = residuals_for(chosen, start)
        if residuals is None:
            return None
        if not residuals:
            return chosen
        if count >= target:
            return None
        if count + max(max(need for _, need in residuals),
                       _cluster_bound(residuals, cache)) > target:
            return None
        support = 0
        for rmask, _ in residuals:
            support |= rmask
        for x in _bits(support):
            found = extend(chosen | (1 << x), x + 1, count + 1)
            if found is not None:
                return found
        return None

    try:
        return extend(0, 0, 0), nodes
    except _BudgetExceeded:
        return None, nodes


def dim_exact(space: FiniteMetricSpace, k: int, *, budget_secs: float | None = DEFAULT_BUDGET_SECS,
              prev_dim: int | None = None, parallel: bool = False) -> SolveReport:
    """Exact k-metric dimension via branch-and-bound multicover search.

    `prev_dim` feeds the previous sequence level in as a lower bound.
    On budget exhaustion the report carries status "bounded" with the
    proven (lower, incumbent) interval instead of an exact optimum.  If
    the budget runs out only during the lex-min basis reconstruction the
    optimum is still exact and some optimal basis is returned, just not
    necessarily the lexicographically smallest one.
    """
    if k < 1:
        raise NonpositiveParameter("k", k)
    start = time.monotonic()
    deadline = start + budget_secs if budget_secs is not None else None
    dmap = all_distinguishers(space)
    feasible_cap = dmap.min_size()
    if k > feasible_cap:
        return SolveReport(
            k=k, optimum=INFINITY, basis=None,
            lower_bound_trace=(("max_k", feasible_cap),),
            nodes_explored=0, greedy_value=None,
            elapsed=time.monotonic() - start, status="optimal",
        )
    greedy_value, greedy_set = greedy_upper(space, k)
    constraints = _reduced_constraints(dmap.masks, k)
    cache: dict = {}
    trace = [("requirement", k)]
    if prev_dim is not None:
        trace.append(("chain", prev_dim + 1))
    trace.append(("packing", _packing_bound(constraints)))
    trace.append(("clusters", _cluster_bound(constraints, cache)))
    root_lb = max(value for _, value in trace)
    if root_lb > greedy_value:
        raise AssertionError(
            f"lower bound {root_lb} exceeds the greedy solution {greedy_value}: bound bug")
    nodes = 0
    timed_out = False
    best_size, best_mask = greedy_value, greedy_set.to_mask()
    if root_lb < greedy_value:
        if parallel:
            best_size, best_mask, nodes, timed_out = _parallel_search(
                constraints, best_size, best_mask, deadline, cache)
        else:
            search = _Search(constraints, best_size, best_mask, deadline)
            try:
                search.run()
            except _BudgetExceeded:
                timed_out = True
            best_size, best_mask, nodes = search.best_size, search.best_mask, search.nodes
    if timed_out:
        return SolveReport(
            k=k, optimum=ExtendedNat(best_size), basis=PointSet.from_mask(best_mask),
            lower_bound_trace=tuple(trace), nodes_explored=nodes,
            greedy_value=greedy_value, elapsed=time.monotonic() - start,
            status="bounded", bounds=(max(root_lb, k), best_size),
        )
    basis_mask = best_mask
    if not parallel:
        lex_mask, lex_nodes = _lex_min_basis(constraints, best_size, deadline, cache)
        nodes += lex_nodes
        if lex_mask is not None:
            basis_mask = lex_mask
    return SolveReport(
        k=k, optimum=ExtendedNat(best_size), basis=PointSet.from_mask(basis_mask),
        lower_bound_trace=tuple(trace), nodes_explored=nodes,
        greedy_value=greedy_value, elapsed=time.monotonic() - start, status="optimal",
    )


def _parallel_search(constraints, incumbent_size, incumbent_mask, deadline, cache):
    """Split the root's branches over a process pool and merge the results."""
    probe = _Search(constraints, incumbent_size, incumbent_mask, None)
    residuals = probe._residuals(0, 0)
    if residuals is None:
        raise AssertionError("feasible instance reduced to an infeasible root")
    chosen0 = probe._chosen
    if not residuals:
        size = chosen0.bit_count()
        if size < incumbent_size:
            return size, chosen0, 1, False
        return incumbent_size, incumbent_mask, 1, False
    rmask, rneed = min(residuals, key=lambda c: (c[0].bit_count(), c[0]))
    points = _bits(rmask)
    remaining = None if deadline is None else max(deadline - time.monotonic(), 0.01)
    tasks = []
    excluded = 0
    for j in range(len(points) - rneed + 1):
        tasks.append((list(constraints), chosen0 | (1 << points[j]), excluded,
                      incumbent_size, incumbent_mask, remaining))
        excluded |= 1 << points[j]
    best_size, best_mask = incumbent_size, incumbent_mask
    nodes = 1
    timed_out = False
    workers = min(len(tasks), os.cpu_count() or 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for size, mask, sub_nodes, sub_timeout in pool.map(_solve_subtree, tasks):
            nodes += sub_nodes
            timed_out = timed_out or sub_timeout
            if size < best_size:
                best_size, best_mask = size, mask
    return best_size, best_mask, nodes, timed_out


def sequence_with_reports(space: FiniteMetricSpace, k_max: int | None = None, *,
                          budget_secs: float | None = DEFAULT_BUDGET_SECS,
                          parallel: bool = False) -> tuple[DimensionSequence | None, list[SolveReport]]:
    """Solve dimension levels k = 1..min(k_max, max_k).

    Returns the sequence plus per-level reports; the sequence is None when
    some level only bounded its optimum (budget ran out), in which case the
    reports carry the interval information.
    """
    cap = max_k(space)
    horizon = cap if k_max is None else min(k_max, cap)
    reports: list[SolveReport] = []
    prev: int | None = None
    exact = True
    for k in range(1, horizon + 1):
        report = dim_exact(space, k, budget_secs=budget_secs, prev_dim=prev, parallel=parallel)
        reports.append(report)
        if report.status != "optimal":
            exact = False
            break
        prev = report.optimum.value
    if not exact:
        return None, reports
    entries = tuple(r.optimum for r in reports)
    return DimensionSequence(entries, tail_start=cap + 1), reports


def dimension_sequence(space: FiniteMetricSpace, k_max: int | None = None, *,
                       budget_secs: float | None = DEFAULT_BUDGET_SECS,
                       parallel: bool = False) -> DimensionSequence:
    """Dimension sequence up to k_max (default: the feasibility cap max_k)."""
    seq, reports = sequence_with_reports(space, k_max, budget_secs=budget_secs, parallel=parallel)
    if seq is None:
        bounded = reports[-1]
        raise KMetricError(
            f"budget exhausted at k={bounded.k}: optimum in {bounded.bounds}; "
            "rerun with a larger budget or use sequence_with_reports")
    return seq
