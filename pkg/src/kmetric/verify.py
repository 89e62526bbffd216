"""Executable property suites for the theorems the toolkit relies on.

Every suite generates seeded instances, checks a universally quantified
statement exactly, and reports per-case pass/fail.  A failure here means
an implementation bug, so the smallest failing instance is serialized
into the result for debugging.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import KMetricError
from .graphs import Graph, check_odd_distance_bisectors, format_edge_list
from .randgen import (
    random_bipartite_connected_graph,
    random_rational_metric,
    random_space,
)
from .solver import dim_exact, sequence_with_reports
from .spaces import FiniteMetricSpace, bisector, join, max_k, space_to_json_dict, truncate

DEFAULT_ST_PAIRS = ((Fraction(1), Fraction(2)), (Fraction(1), Fraction(4)), (Fraction(2), Fraction(4)))
SUITE_NAMES = ("monotonicity", "truncation", "join", "join-trivial", "bipartite")


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    cases: int
    failures: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def _sorted_failures(failures: list[dict]) -> tuple[dict, ...]:
    # smallest instance first so the reported counterexample is minimal
    return tuple(sorted(failures, key=lambda f: (f.get("n", 0), str(f))))


def _space_failure(space: FiniteMetricSpace, detail: str, **extra) -> dict:
    out = {"n": space.n, "detail": detail, "space": space_to_json_dict(space)}
    out.update(extra)
    return out


def monotonicity_suite(count: int = 100, n: int = 8, seed: int = 0, *,
                       budget_secs: float | None = None) -> SuiteResult:
    """Dimension sequences step by at least one, respect the floor dim_k >= k,
    and grow at least linearly from dim_1."""
    rng = random.Random(seed)
    failures: list[dict] = []
    for case in range(count):
        size = rng.randint(3, n)
        space = random_space(size, rng)
        seq, reports = sequence_with_reports(space, budget_secs=budget_secs)
        if seq is None:
            failures.append(_space_failure(space, f"budget exhausted at k={reports[-1].k}", case=case))
            continue
        values = seq.as_values()
        cap = max_k(space)
        for k, value in enumerate(values, start=1):
            problems = []
            if value < k:
                problems.append(f"dim_{k}={value} < k")
            if k > 1 and value < values[k - 2] + 1:
                problems.append(f"dim_{k}={value} not above dim_{k - 1}={values[k - 2]}")
            if value + 1 < values[0] + k:
                problems.append(f"dim_{k}+1={value + 1} < dim_1+k={values[0] + k}")
            if problems:
                failures.append(_space_failure(space, "; ".join(problems), case=case))
        if seq.tail_start != cap + 1:
            failures.append(_space_failure(space, f"tail_start {seq.tail_start} != max_k+1 {cap + 1}", case=case))
    return SuiteResult("monotonicity", count, _sorted_failures(failures))


def truncation_suite(count: int = 50, n: int = 8, seed: int = 0, *,
                     st_pairs: Sequence[tuple[Fraction, Fraction]] = DEFAULT_ST_PAIRS,
                     k_values: Sequence[int] = (1, 2),
                     budget_secs: float | None = None) -> SuiteResult:
    """Capping distances can only grow dimensions, and more aggressive caps
    only grow bisectors: for s < t, every bisector of d sits inside the
    bisector of d^t, which sits inside the bisector of d^s."""
    rng = random.Random(seed)
    failures: list[dict] = []
    for case in range(count):
        size = rng.randint(3, n)
        space = random_rational_metric(size, rng)
        for s, t in st_pairs:
            space_s = truncate(space, s)
            space_t = truncate(space, t)
            for u, v in space.pairs():
                b_plain = set(bisector(space, u, v))
                b_t = set(bisector(space_t, u, v))
                b_s = set(bisector(space_s, u, v))
                if not (b_plain <= b_t and b_t <= b_s):
                    failures.append(_space_failure(
                        space, f"bisector nesting fails for pair ({u},{v}) at s={s}, t={t}", case=case))
            for k in k_values:
                d_plain = dim_exact(space, k, budget_secs=budget_secs).optimum
                d_t = dim_exact(space_t, k, budget_secs=budget_secs).optimum
                d_s = dim_exact(space_s, k, budget_secs=budget_secs).optimum
                if not (d_s >= d_t >= d_plain):
                    failures.append(_space_failure(
                        space,
                        f"dim chain fails at k={k}, s={s}, t={t}: {d_s} >= {d_t} >= {d_plain}",
                        case=case))
    return SuiteResult("truncation", count, _sorted_failures(failures))


def _random_join_parts(rng: random.Random, n: int):
    na = rng.randint(2, n)
    nb = rng.randint(2, n)
    a = random_rational_metric(na, rng)
    b = random_rational_metric(nb, rng)
    b = FiniteMetricSpace(tuple(f"y{i}" for i in range(b.n)), b.dist, dict(b.meta))
    return a, b


def join_suite(count: int = 50, n: int = 5, seed: int = 0, *,
               k_values: Sequence[int] = (1, 2),
               budget_secs: float | None = None) -> SuiteResult:
    """Joining two spaces never loses dimension: the sum of the parts'
    dimensions bounds the joined dimension from below, through the
    truncated dimensions."""
    rng = random.Random(seed)
    failures: list[dict] = []
    for case in range(count):
        a, b = _random_join_parts(rng, n)
        t = Fraction(rng.randint(1, 10), rng.randint(1, 2))
        joined = join(a, b, t)
        for k in k_values:
            da = dim_exact(a, k, budget_secs=budget_secs).optimum
            db = dim_exact(b, k, budget_secs=budget_secs).optimum
            dat = dim_exact(truncate(a, t), k, budget_secs=budget_secs).optimum
            dbt = dim_exact(truncate(b, t), k, budget_secs=budget_secs).optimum
            dj = dim_exact(joined, k, budget_secs=budget_secs).optimum
            if not (da + db <= dat + dbt and dat + dbt <= dj):
                failures.append(_space_failure(
                    joined,
                    f"join chain fails at k={k}, t={t}: {da}+{db} <= {dat}+{dbt} <= {dj}",
                    case=case))
    return SuiteResult("join", count, _sorted_failures(failures))


def join_trivial_suite(count: int = 20, n: int = 5, seed: int = 0, *,
                       k_values: Sequence[int] = (1, 2),
                       budget_secs: float | None = None) -> SuiteResult:
    """With the cross distance beyond both diameters, dimensions add exactly."""
    rng = random.Random(seed)
    failures: list[dict] = []
    for case in range(count):
        a, b = _random_join_parts(rng, n)
        t = max(a.diameter(), b.diameter()) + 1
        joined = join(a, b, t)
        for k in k_values:
            da = dim_exact(a, k, budget_secs=budget_secs).optimum
            db = dim_exact(b, k, budget_secs=budget_secs).optimum
            dj = dim_exact(joined, k, budget_secs=budget_secs).optimum
            if dj != da + db:
                failures.append(_space_failure(
                    joined, f"expected dim_{k} {da}+{db}, got {dj} (t={t})", case=case))
    return SuiteResult("join-trivial", count, _sorted_failures(failures))


def bipartite_suite(count: int = 20, n: int = 10, seed: int = 0, *,
                    graphs: Sequence[Graph] | None = None) -> SuiteResult:
    """Odd-distance pairs in odd-cycle-free graphs have empty bisectors."""
    rng = random.Random(seed)
    failures: list[dict] = []
    if graphs is not None:
        pool = list(graphs)
    else:
        pool = [random_bipartite_connected_graph(rng.randint(3, n), rng) for _ in range(count)]
    for case, graph in enumerate(pool):
        report = check_odd_distance_bisectors(graph)
        if not report.bipartite:
            failures.append({
                "n": graph.n,
                "detail": "generated graph is not bipartite",
                "graph": format_edge_list(graph),
                "case": case,
            })
        elif report.violations:
            failures.append({
                "n": graph.n,
                "detail": f"non-empty bisectors at odd distance: {report.violations}",
                "graph": format_edge_list(graph),
                "case": case,
            })
    return SuiteResult("bipartite", len(pool), _sorted_failures(failures))


def run_suite(name: str, *, count: int | None = None, n: int | None = None, seed: int = 0,
              graphs: Sequence[Graph] | None = None,
              budget_secs: float | None = None,
              st_pair: tuple[Fraction, Fraction] | None = None) -> SuiteResult:
    """Dispatch a suite by CLI name with its default case counts."""
    st_pairs = DEFAULT_ST_PAIRS if st_pair is None else (st_pair,)
    table: dict[str, Callable[[], SuiteResult]] = {
        "monotonicity": lambda: monotonicity_suite(count or 100, n or 8, seed, budget_secs=budget_secs),
        "truncation": lambda: truncation_suite(count or 50, n or 8, seed, st_pairs=st_pairs,
                                               budget_secs=budget_secs),
        "join": lambda: join_suite(count or 50, n or 5, seed, budget_secs=budget_secs),
        "join-trivial": lambda: join_trivial_suite(count or 20, n or 5, seed, budget_secs=budget_secs),
        "bipartite": lambda: bipartite_suite(count or 20, n or 10, seed, graphs=graphs),
    }
    if name not in table:
        raise KMetricError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    return table[name]()
