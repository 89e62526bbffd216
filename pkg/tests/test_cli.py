import json

import pytest

from kmetric import cli
from kmetric.verify import SuiteResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestAnalyze:
    def test_petersen_k2(self, capsys):
        code, out = run(capsys, "analyze", "--family", "petersen", "--k", "2", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["schema"] == 1
        assert data["dim"] == 4
        assert data["max_k"] == 6
        assert data["certificate"]["valid"] is True
        assert len(data["basis"]) == 4

    def test_complete5_k3_infinite(self, capsys):
        code, out = run(capsys, "analyze", "--family", "complete:5", "--k", "3", "--format", "json")
        assert code == 0
        assert json.loads(out)["dim"] == "inf"

    def test_cycle7_k6(self, capsys):
        code, out = run(capsys, "analyze", "--family", "cycle:7", "--k", "6", "--format", "json")
        assert code == 0
        assert json.loads(out)["dim"] == 7

    def test_plain_format(self, capsys):
        code, out = run(capsys, "analyze", "--family", "cycle:7", "--k", "1")
        assert code == 0
        assert "max_k: 6" in out and "dim_1: 2" in out

    def test_truncated_analysis(self, capsys):
        code, out = run(capsys, "analyze", "--family", "path:6", "--t", "1", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert "truncated" in data["source"]

    def test_edge_list_input(self, tmp_path, capsys):
        path = tmp_path / "triangle.txt"
        path.write_text("a b\nb c\nc a\n")
        code, out = run(capsys, "analyze", "--input", str(path), "--k", "1", "--format", "json")
        assert code == 0
        assert json.loads(out)["dim"] == 2

    def test_budget_exhaustion_exit_code(self, capsys):
        # an already-expired deadline stops the search at its first node
        code, out = run(capsys, "analyze", "--family", "grid-ball:2,3", "--k", "1",
                        "--budget-secs", "-1", "--format", "json")
        assert code == 3
        data = json.loads(out)
        assert data["status"] == "bounded"
        low, high = data["bounds"]
        assert low <= 3 <= high

    def test_json_space_input(self, tmp_path, capsys):
        path = tmp_path / "space.json"
        path.write_text(json.dumps({
            "labels": ["a", "b", "c"],
            "distances": [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]],
            "meta": {},
        }))
        code, out = run(capsys, "analyze", "--input", str(path), "--k", "1", "--format", "json")
        assert code == 0
        assert json.loads(out)["dim"] == 2


class TestSequence:
    def test_petersen_pass(self, capsys):
        code, out = run(capsys, "sequence", "--family", "petersen", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["entries"] == [3, 4, 7, 8, 9, 10]
        assert data["tail_start"] == 7
        assert data["verdicts"] == ["PASS"] * 6
        assert data["tail_verdict"] == "PASS"
        assert data["overall"] == "PASS"

    def test_cycle8_csv(self, capsys):
        code, out = run(capsys, "sequence", "--family", "cycle:8", "--format", "csv")
        assert code == 0
        assert out == "k,dim_k\n1,2\n2,3\n3,4\n4,6\n5,7\n6,8\n7,inf\n"

    def test_lollipop_partial_expectation(self, capsys):
        code, out = run(capsys, "sequence", "--family", "lollipop:5,4", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["entries"] == [2, 3, 4, 5]
        assert data["verdicts"] == ["PASS"] * 4
        assert data["overall"] == "PASS"

    def test_k_max_cap(self, capsys):
        code, out = run(capsys, "sequence", "--family", "petersen", "--k-max", "2", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["entries"] == [3, 4]

    def test_unknown_expectation(self, capsys):
        code, out = run(capsys, "sequence", "--family", "ladder:3", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["expected"] is None
        assert data["overall"] == "UNKNOWN"


class TestVerify:
    def test_monotonicity_pass(self, capsys):
        code, out = run(capsys, "verify", "--suite", "monotonicity",
                        "--random", "5", "--n", "6", "--seed", "0", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["passed"] is True and data["cases"] == 5

    def test_bipartite_family(self, capsys):
        code, out = run(capsys, "verify", "--suite", "bipartite",
                        "--family", "grid-ball:2,3", "--format", "json")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_custom_truncation_pair(self, capsys):
        code, _ = run(capsys, "verify", "--suite", "truncation", "--random", "2",
                      "--n", "5", "--s", "1", "--t", "3")
        assert code == 0

    def test_violation_exit_code(self, capsys, monkeypatch):
        def fake_run_suite(name, **kwargs):
            return SuiteResult(name, 1, ({"n": 3, "detail": "forced failure"},))

        monkeypatch.setattr(cli, "run_suite", fake_run_suite)
        code, out = run(capsys, "verify", "--suite", "join", "--format", "json")
        assert code == 4
        assert json.loads(out)["passed"] is False

    def test_bad_st_pair(self, capsys):
        code, _ = run(capsys, "verify", "--suite", "truncation", "--s", "3", "--t", "1")
        assert code == 2


class TestJoin:
    @pytest.fixture()
    def segments(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(json.dumps({"labels": ["1", "3"],
                                 "distances": [["0", "2"], ["2", "0"]], "meta": {}}))
        b.write_text(json.dumps({"labels": ["2", "4"],
                                 "distances": [["0", "2"], ["2", "0"]], "meta": {}}))
        return str(a), str(b)

    def test_counterexample_inputs(self, segments, capsys):
        a, b = segments
        code, out = run(capsys, "join", "--input", a, "--input2", b, "--t", "1",
                        "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["t"] == "1"
        assert data["space"]["labels"] == ["1", "3", "2", "4"]
        row = data["table"][0]
        assert row["sum"] == 2
        # the computed joined space is the 4-cycle, resolved by two points
        assert row["dim_join"] == 2
        assert row["relation"] == "="

    def test_equality_when_t_dominates(self, capsys):
        # label sets are disjoint: lattice coordinates vs path names
        code, out = run(capsys, "join", "--family", "grid-ball:2,1", "--family2", "path:3",
                        "--t", "5", "--k-max", "2", "--format", "json")
        assert code == 0
        for row in json.loads(out)["table"]:
            assert row["relation"] == "="

    def test_identical_labels_error(self, segments, capsys):
        a, _ = segments
        code, _ = run(capsys, "join", "--input", a, "--input2", a, "--t", "1")
        assert code == 2

    def test_missing_t(self, segments, capsys):
        a, b = segments
        with pytest.raises(SystemExit) as err:
            cli.main(["join", "--input", a, "--input2", b])
        assert err.value.code == 2


class TestSequenceAgainstBruteForce:
    # the PASS/FAIL verdicts rest on dim_exact; cross-check the printed
    # values against the independent oracle on every small stock family
    @pytest.mark.parametrize("token", [
        "complete:4", "path:6", "cycle:8", "petersen", "lollipop:5,4", "sqrt-primes:5",
    ])
    def test_entries_match_oracle(self, token, capsys):
        from kmetric.families import make_space, parse_family
        from kmetric.solver import dim_bruteforce

        code, out = run(capsys, "sequence", "--family", token, "--format", "json")
        assert code == 0
        entries = json.loads(out)["entries"]
        space = make_space(parse_family(token))
        for k, value in enumerate(entries, start=1):
            assert dim_bruteforce(space, k) == value


class TestErrors:
    def test_unknown_family(self, capsys):
        code, _ = run(capsys, "analyze", "--family", "dodecahedron")
        assert code == 2

    def test_missing_file(self, capsys):
        code, _ = run(capsys, "analyze", "--input", "/nonexistent/file.json")
        assert code == 2

    def test_no_source(self, capsys):
        code, _ = run(capsys, "analyze", "--k", "1")
        assert code == 2

    def test_both_sources_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["analyze", "--family", "petersen", "--input", "x.json"])
        assert err.value.code == 2


class TestDeterminism:
    def test_repeated_runs_byte_identical(self, capsys):
        first = run(capsys, "sequence", "--family", "cycle:8", "--format", "json")
        second = run(capsys, "sequence", "--family", "cycle:8", "--format", "json")
        assert first == second

    def test_budget_env_override(self, monkeypatch):
        monkeypatch.setenv(cli.BUDGET_ENV_VAR, "12.5")
        config = cli.RunConfig(command="analyze")
        assert config.budget() == 12.5
        monkeypatch.delenv(cli.BUDGET_ENV_VAR)
        assert cli.RunConfig(command="analyze").budget() == 60.0
        assert cli.RunConfig(command="analyze", budget_secs=3.0).budget() == 3.0
