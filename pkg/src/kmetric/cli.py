"""Command-line front end.

Subcommands: analyze (max_k / dim_k with a certificate), sequence (full
dimension sequence with expected-value verdicts), verify (theorem property
suites on seeded random instances), join (join two spaces and compare
dimensions).

Exit codes: 0 success, 2 input error, 3 budget exhausted with only bounds,
4 property violation in a verify suite.

Sequential runs are reproducible: the same arguments and seed produce
byte-identical JSON/CSV output, so timing never appears in the payload.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import KMetricError
from .families import expected_sequence, make_space, parse_family
from .graphs import parse_edge_list, shortest_path_metric
from .solver import ExtendedNat, dim_exact, sequence_with_reports
from .spaces import (
    FiniteMetricSpace,
    dump_space,
    is_k_generator,
    load_space,
    max_k,
    space_to_json_dict,
    truncate,
)
from .verify import SUITE_NAMES, run_suite

SCHEMA = 1
EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VIOLATION = 4

BUDGET_ENV_VAR = "KMETRIC_BUDGET_SECS"


@dataclass(frozen=True)
class RunConfig:
    """Everything one command invocation depends on."""

    command: str
    family: str | None = None
    input_path: str | None = None
    family2: str | None = None
    input_path2: str | None = None
    k: int | None = None
    k_max: int | None = None
    t: Fraction | None = None
    s: Fraction | None = None
    fmt: str = "plain"
    seed: int = 0
    budget_secs: float | None = None
    parallel: bool = False
    random_count: int | None = None
    n: int | None = None
    suite: str | None = None

    def budget(self) -> float:
        if self.budget_secs is not None:
            return self.budget_secs
        env = os.environ.get(BUDGET_ENV_VAR)
        if env is not None:
            try:
                return float(env)
            except ValueError as exc:
                raise KMetricError(f"{BUDGET_ENV_VAR}={env!r} is not a number") from exc
        return 60.0


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        family=getattr(args, "family", None),
        input_path=getattr(args, "input", None),
        family2=getattr(args, "family2", None),
        input_path2=getattr(args, "input2", None),
        k=getattr(args, "k", None),
        k_max=getattr(args, "k_max", None),
        t=getattr(args, "t", None),
        s=getattr(args, "s", None),
        fmt=getattr(args, "format", "plain"),
        seed=getattr(args, "seed", 0),
        budget_secs=getattr(args, "budget_secs", None),
        parallel=getattr(args, "parallel", False),
        random_count=getattr(args, "random", None),
        n=getattr(args, "n", None),
        suite=getattr(args, "suite", None),
    )


def _load_source(family: str | None, input_path: str | None,
                 flags: str = "--family/--input") -> tuple[FiniteMetricSpace, str]:
    """Resolve one input source to a space plus a printable source name."""
    if (family is None) == (input_path is None):
        raise KMetricError(f"exactly one of {flags} is required")
    if family is not None:
        spec = parse_family(family)
        return make_space(spec), str(spec)
    text = Path(input_path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return load_space(text), input_path
    return shortest_path_metric(parse_edge_list(text)), input_path


def _emit(payload: dict, fmt: str, plain_lines: list[str], csv_text: str | None = None):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "csv":
        if csv_text is None:
            raise KMetricError(f"command {payload.get('command')} has no CSV form")
        sys.stdout.write(csv_text)
    else:
        print("\n".join(plain_lines))


def _dim_cell(value: ExtendedNat) -> int | str:
    return value.to_json()


def cmd_analyze(config: RunConfig) -> int:
    space, source = _load_source(config.family, config.input_path)
    if config.t is not None:
        space = truncate(space, config.t)
        source = f"{source} truncated at t={config.t}"
    cap = max_k(space)
    payload: dict = {
        "schema": SCHEMA,
        "command": "analyze",
        "source": source,
        "n": space.n,
        "max_k": cap,
    }
    lines = [f"space: {source} (n={space.n})", f"max_k: {cap}"]
    csv_rows = ["key,value", f"n,{space.n}", f"max_k,{cap}"]
    exit_code = EXIT_OK
    if config.k is not None:
        report = dim_exact(space, config.k, budget_secs=config.budget(), parallel=config.parallel)
        payload["k"] = config.k
        payload["dim"] = _dim_cell(report.optimum)
        payload["status"] = report.status
        payload["nodes"] = report.nodes_explored
        payload["lower_bound_trace"] = [[name, value] for name, value in report.lower_bound_trace]
        lines.append(f"dim_{config.k}: {report.optimum}")
        csv_rows.append(f"dim_{config.k},{report.optimum}")
        if report.status == "bounded":
            payload["bounds"] = list(report.bounds)
            lines.append(f"bounds: [{report.bounds[0]}, {report.bounds[1]}]")
            exit_code = EXIT_BUDGET
        if report.basis is not None:
            certificate = is_k_generator(space, report.basis, config.k)
            payload["basis"] = list(report.basis.labels(space))
            payload["certificate"] = {
                "valid": certificate.valid,
                "min_coverage": certificate.min_coverage(),
            }
            lines.append("basis: " + " ".join(report.basis.labels(space)))
            lines.append(
                f"certificate: {'valid' if certificate.valid else 'INVALID'}"
                f" (min coverage {certificate.min_coverage()})")
        else:
            payload["basis"] = None
            payload["certificate"] = None
    _emit(payload, config.fmt, lines, "\n".join(csv_rows) + "\n")
    return exit_code


def cmd_sequence(config: RunConfig) -> int:
    space, source = _load_source(config.family, config.input_path)
    truncated = config.t is not None
    if truncated:
        space = truncate(space, config.t)
        source = f"{source} truncated at t={config.t}"
    cap = max_k(space)
    seq, reports = sequence_with_reports(
        space, config.k_max, budget_secs=config.budget(), parallel=config.parallel)
    payload: dict = {
        "schema": SCHEMA,
        "command": "sequence",
        "source": source,
        "n": space.n,
        "max_k": cap,
    }
    if seq is None:
        last = reports[-1]
        payload["status"] = "bounded"
        payload["bounded_at_k"] = last.k
        payload["bounds"] = list(last.bounds)
        payload["entries"] = [r.optimum.to_json() for r in reports[:-1]]
        _emit(payload, config.fmt,
              [f"sequence {source}: budget exhausted at k={last.k}, optimum in {last.bounds}"])
        return EXIT_BUDGET
    payload["entries"] = [e.to_json() for e in seq.entries]
    payload["tail_start"] = seq.tail_start
    payload["status"] = "optimal"
    lines = [f"sequence {source} (n={space.n}, max_k={cap})"]
    expected = None
    if config.family is not None and not truncated:
        expected = expected_sequence(parse_family(config.family))
    if expected is not None:
        verdicts = []
        horizon = len(seq.entries)
        for k in range(1, horizon + 1):
            if k <= len(expected.entries):
                verdicts.append("PASS" if seq.entries[k - 1] == expected.entries[k - 1] else "FAIL")
            elif expected.partial:
                verdicts.append("UNKNOWN")
            else:
                verdicts.append("FAIL")  # expected infinite here, computed finite
        tail_verdict = None
        if not expected.partial:
            tail_verdict = "PASS" if expected.tail_start == seq.tail_start else "FAIL"
        payload["expected"] = {
            "entries": list(expected.entries),
            "tail_start": expected.tail_start,
            "partial": expected.partial,
        }
        payload["verdicts"] = verdicts
        payload["tail_verdict"] = tail_verdict
        overall = "FAIL" if ("FAIL" in verdicts or tail_verdict == "FAIL") else "PASS"
        payload["overall"] = overall
        for k, entry in enumerate(seq.entries, start=1):
            want = expected.entries[k - 1] if k <= len(expected.entries) else None
            verdict = verdicts[k - 1] if k - 1 < len(verdicts) else "UNKNOWN"
            want_text = "?" if want is None else str(want)
            lines.append(f"k={k} dim={entry} expected={want_text} {verdict}")
        if tail_verdict is not None:
            lines.append(f"k>={seq.tail_start} dim=inf expected tail {expected.tail_start} {tail_verdict}")
        lines.append(f"overall: {overall}")
    else:
        payload["expected"] = None
        payload["verdicts"] = None
        payload["overall"] = "UNKNOWN"
        for k, entry in enumerate(seq.entries, start=1):
            lines.append(f"k={k} dim={entry}")
        lines.append(f"k>={seq.tail_start} dim=inf")
    _emit(payload, config.fmt, lines, seq.to_csv())
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    if config.suite is None:
        raise KMetricError("verify needs --suite")
    graphs = None
    if config.family is not None:
        from .families import make
        from .graphs import Graph

        member = make(parse_family(config.family))
        if not isinstance(member, Graph):
            raise KMetricError("--family for verify must name a graph family")
        graphs = [member]
    st_pair = None
    if config.s is not None or config.t is not None:
        if config.s is None or config.t is None or not 0 < config.s < config.t:
            raise KMetricError("custom truncation needs --s and --t with 0 < s < t")
        st_pair = (config.s, config.t)
    result = run_suite(
        config.suite,
        count=config.random_count,
        n=config.n,
        seed=config.seed,
        graphs=graphs,
        budget_secs=config.budget(),
        st_pair=st_pair,
    )
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "seed": config.seed,
        **result.to_json_dict(),
    }
    status = "PASS" if result.passed else "FAIL"
    lines = [f"suite {result.suite}: {result.cases - len(result.failures)}/{result.cases} {status}"]
    for failure in result.failures[:3]:
        lines.append(f"counterexample: {json.dumps(failure, sort_keys=True)}")
    _emit(payload, config.fmt, lines)
    return EXIT_OK if result.passed else EXIT_VIOLATION


def cmd_join(config: RunConfig) -> int:
    from .spaces import join as join_spaces

    space_a, source_a = _load_source(config.family, config.input_path)
    space_b, source_b = _load_source(config.family2, config.input_path2, "--family2/--input2")
    if config.t is None:
        raise KMetricError("join needs --t")
    t = Fraction(config.t)
    joined = join_spaces(space_a, space_b, t)
    ks = [config.k] if config.k is not None else list(range(1, (config.k_max or 1) + 1))
    budget = config.budget()
    table = []
    for k in ks:
        da = dim_exact(space_a, k, budget_secs=budget).optimum
        db = dim_exact(space_b, k, budget_secs=budget).optimum
        dat = dim_exact(truncate(space_a, t), k, budget_secs=budget).optimum
        dbt = dim_exact(truncate(space_b, t), k, budget_secs=budget).optimum
        dj = dim_exact(joined, k, budget_secs=budget).optimum
        total = da + db
        relation = "=" if total == dj else ("<" if total < dj else ">")
        table.append({
            "k": k,
            "dim_a": da.to_json(),
            "dim_b": db.to_json(),
            "sum": total.to_json(),
            "dim_a_trunc": dat.to_json(),
            "dim_b_trunc": dbt.to_json(),
            "dim_join": dj.to_json(),
            "relation": relation,
        })
    payload = {
        "schema": SCHEMA,
        "command": "join",
        "source_a": source_a,
        "source_b": source_b,
        "t": str(t),
        "space": space_to_json_dict(joined),
        "table": table,
    }
    lines = [f"join {source_a} + {source_b} at t={t} (n={joined.n})", dump_space(joined)]
    for row in table:
        lines.append(
            f"k={row['k']}: dim_a={row['dim_a']} dim_b={row['dim_b']} sum={row['sum']}"
            f" dim_join={row['dim_join']} sum{row['relation']}join")
    csv_rows = ["k,dim_a,dim_b,sum,dim_a_trunc,dim_b_trunc,dim_join,relation"]
    csv_rows += [
        f"{r['k']},{r['dim_a']},{r['dim_b']},{r['sum']},{r['dim_a_trunc']},{r['dim_b_trunc']},{r['dim_join']},{r['relation']}"
        for r in table
    ]
    _emit(payload, config.fmt, lines, "\n".join(csv_rows) + "\n")
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser, *, source: bool = True):
    if source:
        group = sub.add_mutually_exclusive_group()
        group.add_argument("--family", help="family token, e.g. petersen, cycle:8, grid-ball:2,4")
        group.add_argument("--input", help="path to a space JSON or edge-list file")
    sub.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget-secs", dest="budget_secs", type=float, default=None,
                     help=f"per-level time budget (default 60, env {BUDGET_ENV_VAR})")
    sub.add_argument("--parallel", action="store_true",
                     help="split the search over processes; optimum unchanged, basis may differ")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmetric",
        description="bisectors, k-metric generators and dimension sequences of finite metric spaces",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="max_k and dim_k with basis and certificate")
    _add_common(analyze)
    analyze.add_argument("--k", type=int, default=None)
    analyze.add_argument("--t", type=Fraction, default=None, help="truncate the space at t first")

    sequence = commands.add_parser("sequence", help="full dimension sequence with expected verdicts")
    _add_common(sequence)
    sequence.add_argument("--k-max", dest="k_max", type=int, default=None)
    sequence.add_argument("--t", type=Fraction, default=None, help="truncate the space at t first")

    verify = commands.add_parser("verify", help="run a theorem property suite")
    _add_common(verify)
    verify.add_argument("--suite", choices=SUITE_NAMES, required=True)
    verify.add_argument("--random", type=int, default=None, help="number of random instances")
    verify.add_argument("--n", type=int, default=None, help="max instance size")
    verify.add_argument("--s", type=Fraction, default=None, help="smaller truncation parameter")
    verify.add_argument("--t", type=Fraction, default=None, help="larger truncation parameter")

    join_cmd = commands.add_parser("join", help="join two spaces and compare dimensions")
    _add_common(join_cmd)
    group2 = join_cmd.add_mutually_exclusive_group()
    group2.add_argument("--family2", help="second input as a family token")
    group2.add_argument("--input2", help="second input as a file path")
    join_cmd.add_argument("--k", type=int, default=None)
    join_cmd.add_argument("--k-max", dest="k_max", type=int, default=None)
    join_cmd.add_argument("--t", type=Fraction, required=True, help="cross-part distance (rational)")
    return parser


_COMMANDS = {
    "analyze": cmd_analyze,
    "sequence": cmd_sequence,
    "verify": cmd_verify,
    "join": cmd_join,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        return _COMMANDS[config.command](config)
    except KMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
