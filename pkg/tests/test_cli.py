"""Tests for the command-line interface."""

import pytest

from ccto.cli import _colorcoding_mode, choose_solver, main
from ccto.core import CctoInstance, TemporalCostGraph
from ccto.instances import InstanceFile, random_instance, save_instance
from ccto.result import SolveResult

from conftest import I1_TUPLES, make_graph

I1_TEXT = """version 1
n 3
name 0 s
name 1 a
name 2 b
tuple 0 1 1 2 2
tuple 1 2 2 3 4
tuple 2 1 4 5 1
tuple 1 0 5 6 1
query 0 0 3 8
"""

I3_TEXT = """version 1
n 3
tuple 0 1 1 2 2
tuple 1 2 3 4 1
query 0 2 3 3
"""


@pytest.fixture
def i1_path(tmp_path):
    path = tmp_path / "i1.ccto"
    path.write_text(I1_TEXT)
    return str(path)


@pytest.fixture
def i3_path(tmp_path):
    path = tmp_path / "i3.ccto"
    path.write_text(I3_TEXT)
    return str(path)


class TestSolve:
    def test_structured_golden(self, i1_path, capsys):
        code = main(["solve", i1_path, "--algorithm", "oracle", "--format", "structured"])
        assert code == 0
        assert capsys.readouterr().out == (
            "feasible yes\n"
            "cost 8\n"
            "solver oracle\n"
            "step 0 1 1 2\n"
            "step 1 2 2 3\n"
            "step 2 1 4 5\n"
            "step 1 0 5 6\n"
            "stat states 6\n"
        )

    def test_forced_inapplicable_algorithm(self, i1_path, capsys):
        code = main(["solve", i1_path, "--algorithm", "sparse"])
        assert code == 2
        err = capsys.readouterr().err
        assert "vertex a participates in 4" in err

    def test_budget_precheck_short_circuits(self, i3_path, capsys):
        code = main(
            ["solve", i3_path, "--k", "5", "--budget", "3", "--format", "structured"]
        )
        assert code == 1
        out = capsys.readouterr().out
        assert "feasible no" in out
        assert "solver precheck" in out
        assert "stat lower_bound 4" in out

    def test_infeasible_exit_code(self, i1_path, capsys):
        code = main(["solve", i1_path, "--budget", "7"])
        assert code == 1
        out = capsys.readouterr().out
        assert "result: infeasible" in out
        assert "optimal cost: 8" in out

    def test_query_flags_override_file(self, i1_path, capsys):
        code = main(["solve", i1_path, "--k", "1", "--format", "structured"])
        assert code == 0
        out = capsys.readouterr().out
        assert "cost 0\n" in out

    def test_missing_query_field(self, tmp_path, capsys):
        path = tmp_path / "bare.ccto"
        path.write_text("version 1\nn 2\ntuple 0 1 3 4 1\n")
        code = main(["solve", str(path), "--source", "0", "--sink", "1", "--k", "2"])
        assert code == 2
        assert "--budget" in capsys.readouterr().err

    def test_query_flags_on_bare_file(self, tmp_path, capsys):
        path = tmp_path / "bare.ccto"
        path.write_text("version 1\nn 2\ntuple 0 1 3 4 1\ntuple 1 0 3 4 1\n")
        code = main(
            [
                "solve", str(path),
                "--source", "0", "--sink", "1", "--k", "2", "--budget", "2",
                "--format", "structured",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "cost 1\n" in out
        assert "step 0 1 3 4\n" in out

    def test_parse_failure(self, tmp_path, capsys):
        path = tmp_path / "broken.ccto"
        path.write_text("version 1\nn 2\ntuple 0 1 5 4 1\n")
        assert main(["solve", str(path)]) == 2
        assert "line 3" in capsys.readouterr().err

    def test_randomized_no_is_labelled(self, i3_path, capsys):
        code = main(
            [
                "solve", i3_path,
                "--algorithm", "colorcoding", "--mode", "randomized",
                "--seed", "5", "--budget", "2",
            ]
        )
        assert code == 1
        out = capsys.readouterr().out
        assert "result: not found (failure prob <= 0.001)" in out
        assert "result: infeasible" not in out

    def test_every_forced_algorithm_agrees(self, i1_path, capsys):
        costs = {}
        for algorithm in ("oracle", "tree", "subforest", "vitw", "colorcoding"):
            code = main(
                ["solve", i1_path, "--algorithm", algorithm, "--format", "structured"]
            )
            assert code == 0
            out = capsys.readouterr().out
            costs[algorithm] = [l for l in out.splitlines() if l.startswith("cost ")]
        assert all(lines == ["cost 8"] for lines in costs.values())


class TestChooseSolver:
    def test_small_instances_go_to_the_oracle(self, i1):
        assert choose_solver(CctoInstance(i1, 0, 0, 3, 8)) == "oracle"

    def test_sparse_wins_past_oracle_size(self):
        tuples = [(v, v + 1, 2 * v + 1, 2 * v + 2, 1) for v in range(11)]
        g = make_graph(12, tuples)
        assert choose_solver(CctoInstance(g, 0, 11, 2, 20)) == "sparse"

    def test_tree_when_too_busy_for_sparse(self):
        tuples = []
        for v in range(1, 12):
            tuples += [(0, v, 2 * v - 1, 2 * v, 1), (v, 0, 2 * v, 2 * v + 1, 1)]
        g = make_graph(12, tuples)
        assert choose_solver(CctoInstance(g, 0, 0, 3, 30)) == "tree"

    def test_vitw_for_open_walks_on_busy_trees(self):
        tuples = []
        for v in range(1, 12):
            tuples += [(0, v, 2 * v - 1, 2 * v, 1), (v, 0, 2 * v, 2 * v + 1, 1)]
        g = make_graph(12, tuples)
        assert choose_solver(CctoInstance(g, 0, 5, 3, 30)) == "vitw"

    def test_colorcoding_is_the_fallback(self):
        # Wide bags (13 simultaneous vertices), a cycle edge, open query:
        # nothing cheaper applies.
        tuples = []
        for v in range(1, 14):
            tuples += [(0, v, 1, 2, 1), (v, 0, 3, 4, 1)]
        tuples += [(1, 2, 2, 3, 1)]
        g = make_graph(14, tuples)
        assert choose_solver(CctoInstance(g, 0, 2, 3, 10)) == "colorcoding"

    def test_colorcoding_mode_split(self):
        small = CctoInstance(make_graph(3, I1_TUPLES), 0, 0, 3, 8)
        assert _colorcoding_mode(small) == "exhaustive"
        wide = CctoInstance(make_graph(14, [(0, 1, 1, 2, 1)]), 0, 1, 6, 99)
        assert _colorcoding_mode(wide) == "randomized"


class TestAnalyze:
    def test_golden_report(self, i1_path, capsys):
        assert main(["analyze", i1_path]) == 0
        assert capsys.readouterr().out == (
            "n 3\n"
            "lifetime 6\n"
            "connected yes\n"
            "traversal s a 2\n"
            "traversal a b 2\n"
            "width 2\n"
            "bag 2 a\n"
            "bag 3 a b\n"
            "bag 4 a b\n"
            "bag 5 a\n"
            "applicable oracle yes\n"
            "applicable sparse no\n"
            "applicable tree yes\n"
            "applicable subforest yes\n"
            "applicable vitw yes\n"
            "applicable colorcoding yes\n"
        )

    def test_tuple_free_instance(self, tmp_path, capsys):
        path = tmp_path / "empty.ccto"
        path.write_text("version 1\nn 2\n")
        assert main(["analyze", str(path)]) == 0
        out = capsys.readouterr().out
        assert "lifetime 0\n" in out
        assert "width 0\n" in out
        assert "connected no\n" in out
        assert "warning graph is not connected\n" in out
        assert out.count("applicable") == 6
        assert "applicable sparse yes" in out

    def test_sparse_applicability_reported(self, i3_path, capsys):
        assert main(["analyze", i3_path]) == 0
        assert "applicable sparse yes" in capsys.readouterr().out

    def test_export_expanded(self, i1_path, tmp_path, capsys):
        target = tmp_path / "arcs.txt"
        assert main(["analyze", i1_path, "--export-expanded", str(target)]) == 0
        out = capsys.readouterr().out
        assert f"expanded 21 22 {target}" in out
        lines = target.read_text().splitlines()
        assert len(lines) == 22
        assert "0 1 1 2 2" in lines  # movement arc keeps its cost
        assert "0 0 0 1 0" in lines  # waiting arc is free

    def test_parse_failure(self, tmp_path, capsys):
        path = tmp_path / "broken.ccto"
        path.write_text("n 2\n")
        assert main(["analyze", str(path)]) == 2
        assert "version" in capsys.readouterr().err


class TestGenerate:
    def test_star_exp_golden(self, capsys):
        assert main(["generate", "star-exp", "--leaves", "2", "--labels", "1,2;3,4"]) == 0
        assert capsys.readouterr().out == (
            "version 1\n"
            "n 3\n"
            "tuple 0 1 1 2 1\n"
            "tuple 0 1 2 3 1\n"
            "tuple 0 2 3 4 1\n"
            "tuple 0 2 4 5 1\n"
            "tuple 1 0 1 2 1\n"
            "tuple 1 0 2 3 1\n"
            "tuple 2 0 3 4 1\n"
            "tuple 2 0 4 5 1\n"
            "query 0 0 3 4\n"
        )

    def test_leaves_mismatch(self, capsys):
        assert main(["generate", "star-exp", "--leaves", "3", "--labels", "1;2"]) == 2
        assert "disagrees" in capsys.readouterr().err

    def test_from_temporal_edge(self, capsys):
        assert main(["generate", "from-temporal", "--edge", "0 1 @ 3"]) == 0
        assert capsys.readouterr().out == (
            "version 1\nn 2\ntuple 0 1 3 4 1\ntuple 1 0 3 4 1\n"
        )

    def test_from_temporal_needs_edges(self, capsys):
        assert main(["generate", "from-temporal"]) == 2

    def test_random_is_deterministic(self, tmp_path, capsys):
        argv = ["generate", "random", "--seed", "7", "--n", "4", "--horizon", "5"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        assert main(argv + ["--seed", "8"]) == 0
        assert capsys.readouterr().out != first

    def test_output_file_parses_back(self, tmp_path):
        target = tmp_path / "gen.ccto"
        argv = [
            "generate", "random", "--seed", "3", "--n", "5",
            "--horizon", "6", "--output", str(target),
        ]
        assert main(argv) == 0
        assert main(["analyze", str(target)]) == 0

    def test_solve_consumes_generated_file(self, tmp_path, capsys):
        target = tmp_path / "gen.ccto"
        main(
            ["generate", "star-exp", "--labels", "1,2;3,4", "--output", str(target)]
        )
        capsys.readouterr()
        code = main(["solve", str(target), "--format", "structured"])
        out = capsys.readouterr().out
        assert code == 0
        assert "cost 4\n" in out


class TestBench:
    def _suite(self, tmp_path, count=10):
        paths = []
        for index in range(count):
            inst = random_instance(
                seed=900 + index, n=5, horizon=6, density=0.35, shape="tree"
            )
            path = tmp_path / f"b{index}.ccto"
            save_instance(path, InstanceFile(inst.graph, inst))
            paths.append(str(path))
        return paths

    def test_rows_agree_across_solvers(self, tmp_path, capsys):
        paths = self._suite(tmp_path)
        code = main(["bench", *paths, "--solvers", "oracle,tree,vitw"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "# instance solver feasible cost states millis"
        rows = [l.split() for l in lines[1:]]
        assert len(rows) == 30
        by_instance = {}
        for row in rows:
            if row[2] != "skipped":
                by_instance.setdefault(row[0], set()).add((row[2], row[3]))
        assert all(len(v) == 1 for v in by_instance.values())

    def test_empty_suite(self, capsys):
        assert main(["bench"]) == 0
        assert capsys.readouterr().out == "# instance solver feasible cost states millis\n"

    def test_disagreement_trips_exit_3(self, tmp_path, capsys, monkeypatch):
        import ccto.cli as cli_module

        def wrong_oracle(instance):
            return SolveResult(
                feasible=True, optimal_cost=0, witness=[], solver="oracle"
            )

        monkeypatch.setattr(cli_module, "solve_exact", wrong_oracle)
        paths = self._suite(tmp_path, count=3)
        code = main(["bench", *paths, "--solvers", "oracle,vitw"])
        assert code == 3
        err = capsys.readouterr().err
        assert "disagreement" in err
        assert "oracle=0" in err

    def test_inapplicable_rows_marked_skipped(self, tmp_path, capsys):
        graph = TemporalCostGraph(3, I1_TUPLES)
        path = tmp_path / "open.ccto"
        save_instance(path, InstanceFile(graph, CctoInstance(graph, 0, 2, 3, 9)))
        code = main(["bench", str(path), "--solvers", "tree,oracle"])
        assert code == 0
        out = capsys.readouterr().out
        assert f"{path} tree skipped - - -" in out

    def test_missing_query_is_an_error(self, tmp_path, capsys):
        path = tmp_path / "bare.ccto"
        path.write_text("version 1\nn 2\ntuple 0 1 1 2 1\n")
        assert main(["bench", str(path)]) == 2
        assert "no query" in capsys.readouterr().err
