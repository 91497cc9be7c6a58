"""End-to-end tests for the command-line interface."""

from __future__ import annotations

import io
import json

import pytest

from blockdel import cli
from blockdel.branching import Instance
from blockdel.generators import random_graph
from blockdel.graphs import CLIQUES, CYCLES_AND_K2, format_edge_list, is_in_phi, parse_edge_list
from blockdel.oracle import brute_force

DIAMOND = "4 5\n0 1\n0 2\n0 3\n1 2\n1 3\n"
TRIANGLE = "3 3\n0 1\n0 2\n1 2\n"
C5_PENDANT_TRIANGLE = "7 8\n0 1\n1 2\n2 3\n3 4\n0 4\n3 5\n3 6\n5 6\n"
THREE_K4 = "12 18\n" + "".join(
    f"{o + a} {o + b}\n" for o in (0, 4, 8) for a in range(4) for b in range(a + 1, 4)
)


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name: str, text: str) -> str:
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestSolve:
    def test_diamond_cycles_is_yes_with_one_deletion(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, out, _ = run(
            capsys, "solve", "--input", path, "--class", "cycles", "--d", "4", "--k", "1"
        )
        assert code == cli.EXIT_YES
        assert "answer: yes" in out
        sol_line = next(l for l in out.splitlines() if l.startswith("solution:"))
        assert len(sol_line.split()[1:]) == 1

    def test_brute_on_clean_graph_reports_empty_solution(self, tmp_path, capsys):
        path = write(tmp_path, "tri.txt", TRIANGLE)
        code, out, _ = run(
            capsys,
            "solve", "--input", path, "--class", "cliques", "--d", "3", "--k", "0",
            "--solver", "brute", "--output", "structured",
        )
        assert code == cli.EXIT_YES
        record = json.loads(out)
        assert record["answer"] == "yes"
        assert record["solution"] == []

    def test_no_verdict_exits_twenty(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, out, _ = run(
            capsys, "solve", "--input", path, "--class", "cycles", "--d", "3", "--k", "0"
        )
        assert code == cli.EXIT_NO
        assert "answer: no" in out

    def test_structured_record_round_trips(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, out, _ = run(
            capsys,
            "solve", "--input", path, "--class", "cycles", "--d", "3", "--k", "2",
            "--output", "structured",
        )
        assert code == cli.EXIT_YES
        record = json.loads(out)
        assert record["format_version"] == 1
        assert record["answer"] == "yes"
        assert set(record["stats"]) == {"branch_nodes", "leaves", "rules_applied", "elapsed_ms"}
        g = parse_edge_list(DIAMOND)
        assert is_in_phi(g.delete_vertices(record["solution"]), CYCLES_AND_K2, 3)

    def test_kernel_branch_reports_kernel_fields(self, tmp_path, capsys):
        path = write(tmp_path, "c5p.txt", C5_PENDANT_TRIANGLE)
        trace_out = str(tmp_path / "trace.log")
        code, out, _ = run(
            capsys,
            "solve", "--input", path, "--class", "cliques", "--d", "3", "--k", "1",
            "--solver", "kernel-branch", "--trace-out", trace_out,
            "--output", "structured",
        )
        assert code == cli.EXIT_YES
        record = json.loads(out)
        assert record["kernel_size"] == 5
        assert record["solution_scope"] == "kernel"
        assert record["stats"]["rules_applied"] == ["cut-vertex"]
        assert record["trace_path"] == trace_out
        assert (tmp_path / "trace.log").read_text().startswith("RULE cut-vertex")

    def test_approx_solver_answers_yes_or_unknown(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, out, _ = run(
            capsys,
            "solve", "--input", path, "--class", "cycles", "--d", "4", "--k", "4",
            "--solver", "approx", "--output", "structured",
        )
        assert code == cli.EXIT_YES
        assert json.loads(out)["answer"] == "yes"

        code, out, _ = run(
            capsys,
            "solve", "--input", path, "--class", "cycles", "--d", "3", "--k", "0",
            "--solver", "approx", "--output", "structured",
        )
        assert code == cli.EXIT_OK
        record = json.loads(out)
        assert record["answer"] == "unknown"
        assert record["solution"] is None

    def test_stdin_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(DIAMOND))
        code, out, _ = run(
            capsys, "solve", "--class", "cycles", "--d", "4", "--k", "1"
        )
        assert code == cli.EXIT_YES

    def test_cross_solver_verdicts_agree(self, tmp_path, capsys):
        for seed in range(8):
            g = random_graph(7, 0.4, seed=3000 + seed)
            path = write(tmp_path, f"g{seed}.txt", format_edge_list(g))
            answers = {}
            for solver in ("branch", "brute", "compress", "kernel-branch"):
                code, out, _ = run(
                    capsys,
                    "solve", "--input", path, "--class", "cliques",
                    "--d", "3", "--k", "2", "--solver", solver,
                    "--output", "structured",
                )
                answers[solver] = json.loads(out)["answer"]
                assert code in (cli.EXIT_YES, cli.EXIT_NO)
            assert len(set(answers.values())) == 1, answers


class TestApprox:
    def test_diamond(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, out, _ = run(
            capsys, "approx", "--input", path, "--class", "cycles", "--d", "4",
            "--output", "structured",
        )
        assert code == cli.EXIT_OK
        record = json.loads(out)
        assert record["size"] <= 4
        assert record["deleted"] == sorted(record["deleted"])


class TestKernelize:
    def test_reduction_with_artifacts(self, tmp_path, capsys):
        path = write(tmp_path, "c5p.txt", C5_PENDANT_TRIANGLE)
        kernel_out = str(tmp_path / "kernel.txt")
        trace_out = str(tmp_path / "trace.log")
        code, out, _ = run(
            capsys,
            "kernelize", "--input", path, "--class", "cliques", "--d", "3", "--k", "1",
            "--kernel-out", kernel_out, "--trace-out", trace_out,
            "--output", "structured",
        )
        assert code == cli.EXIT_OK
        record = json.loads(out)
        assert record["verdict"] == "reduced"
        assert record["kernel"]["n"] == 5
        assert record["kernel"]["k"] == 1
        assert record["rules_applied"] == ["cut-vertex"]
        assert record["trace"] == ["RULE cut-vertex verts=[5, 6] size=5"]
        reparsed = parse_edge_list((tmp_path / "kernel.txt").read_text())
        assert reparsed.n == 5 and reparsed.m == 5
        assert (tmp_path / "trace.log").read_text() == "RULE cut-vertex verts=[5, 6] size=5\n"

    def test_no_instance_exits_twenty(self, tmp_path, capsys):
        path = write(tmp_path, "k4s.txt", THREE_K4)
        code, out, _ = run(
            capsys,
            "kernelize", "--input", path, "--class", "cliques", "--d", "3", "--k", "1",
            "--output", "structured",
        )
        assert code == cli.EXIT_NO
        record = json.loads(out)
        assert record["verdict"] == "no"
        assert record["kernel"] is None


class TestDifftest:
    def test_agreement_run(self, capsys):
        code, out, _ = run(
            capsys,
            "difftest", "--trials", "40", "--n", "7", "--seed", "42",
            "--solvers", "branch,compress,kernel-branch",
            "--output", "structured",
        )
        assert code == cli.EXIT_OK
        record = json.loads(out)
        assert record["trials"] == 40
        assert record["all_agree"] is True
        assert record["mismatches"] == []

    def test_zero_trials_is_an_empty_report(self, capsys):
        code, out, _ = run(capsys, "difftest", "--trials", "0")
        assert code == cli.EXIT_OK
        assert "trials=0 mismatches=0" in out

    def test_mismatch_sets_exit_status(self, capsys, monkeypatch):
        from blockdel import oracle

        monkeypatch.setitem(
            oracle.SOLVER_REGISTRY,
            "branch",
            lambda inst: oracle.brute_force(inst) is None,
        )
        code, out, _ = run(
            capsys, "difftest", "--trials", "5", "--n", "6", "--seed", "1"
        )
        assert code == cli.EXIT_MISMATCH
        assert "mismatches=5" in out


class TestGen:
    def test_random_is_deterministic_and_parseable(self, capsys):
        code1, out1, _ = run(
            capsys, "gen", "--family", "random", "--n", "9", "--p", "0.4", "--seed", "11"
        )
        code2, out2, _ = run(
            capsys, "gen", "--family", "random", "--n", "9", "--p", "0.4", "--seed", "11"
        )
        assert code1 == code2 == cli.EXIT_OK
        assert out1 == out2
        g = parse_edge_list(out1)
        assert g.n == 9

    def test_kxk_output_carries_instance_parameters(self, capsys):
        code, out, _ = run(
            capsys, "gen", "--family", "kxk", "--k", "3", "--p", "0.12",
            "--seed", "7", "--plant",
        )
        assert code == cli.EXIT_OK
        g = parse_edge_list(out)  # comment lines are ignored by the parser
        assert "# class biconnected" in out
        d_line = next(l for l in out.splitlines() if l.startswith("# d "))
        k_line = next(l for l in out.splitlines() if l.startswith("# k "))
        assert int(k_line.split()[2]) == 3
        assert int(d_line.split()[2]) > 0
        assert g.n % 1 == 0 and g.n >= 9

    def test_structured_families(self, capsys):
        for name, size, n in (
            ("path", 6, 6),
            ("cycle", 5, 5),
            ("clique", 4, 4),
            ("diamond", 0, 4),
            ("bowtie", 0, 5),
            ("block-chain", 3, 7),
        ):
            code, out, _ = run(
                capsys,
                "gen", "--family", "structured", "--name", name, "--size", str(size),
            )
            assert code == cli.EXIT_OK
            assert parse_edge_list(out).n == n

    def test_cycle_needs_three_vertices(self, capsys):
        code, _, err = run(
            capsys, "gen", "--family", "structured", "--name", "cycle", "--size", "2"
        )
        assert code == cli.EXIT_USAGE
        assert "at least 3" in err

    def test_structured_output_embeds_the_edge_list(self, capsys):
        code, out, _ = run(
            capsys,
            "gen", "--family", "random", "--n", "6", "--p", "0.3", "--seed", "5",
            "--output", "structured",
        )
        assert code == cli.EXIT_OK
        record = json.loads(out)
        g = parse_edge_list(record["graph"]["edge_list"])
        assert g.n == 6 and g.m == record["graph"]["m"]


class TestErrors:
    def test_parse_error_names_the_line(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("4 1\nnot an edge\n"))
        code, _, err = run(capsys, "solve", "--d", "3", "--k", "1")
        assert code == cli.EXIT_USAGE
        assert "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "solve", "--input", str(tmp_path / "absent.txt"), "--d", "3", "--k", "1",
        )
        assert code == cli.EXIT_USAGE
        assert "cannot read" in err

    def test_compress_requires_a_restricted_class(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, _, err = run(
            capsys,
            "solve", "--input", path, "--class", "biconnected", "--d", "3", "--k", "1",
            "--solver", "compress",
        )
        assert code == cli.EXIT_USAGE
        assert "cliques or cycles" in err

    def test_rejects_bad_bounds(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, _, err = run(
            capsys, "solve", "--input", path, "--d", "0", "--k", "1"
        )
        assert code == cli.EXIT_USAGE
        code, _, err = run(
            capsys, "solve", "--input", path, "--d", "3", "--k", "-1"
        )
        assert code == cli.EXIT_USAGE

    def test_kernel_branch_needs_d_at_least_two(self, tmp_path, capsys):
        path = write(tmp_path, "dia.txt", DIAMOND)
        code, _, err = run(
            capsys,
            "solve", "--input", path, "--class", "cliques", "--d", "1", "--k", "1",
            "--solver", "kernel-branch",
        )
        assert code == cli.EXIT_USAGE
        assert "kernel-branch" in err

    def test_unknown_difftest_solver(self, capsys):
        code, _, err = run(capsys, "difftest", "--trials", "1", "--solvers", "magic")
        assert code == cli.EXIT_USAGE
        assert "magic" in err

    def test_oracle_cap_env_is_honored(self, tmp_path, capsys, monkeypatch):
        g = random_graph(9, 0.3, seed=2)
        path = write(tmp_path, "big.txt", format_edge_list(g))
        monkeypatch.setenv("BPBVD_ORACLE_CAP", "5")
        code, _, err = run(
            capsys,
            "solve", "--input", path, "--d", "3", "--k", "1", "--solver", "brute",
        )
        assert code == cli.EXIT_USAGE
        assert "cap is 5" in err
