from __future__ import annotations

import pytest

from stringtop.cli import run
from stringtop.dialgebra import (
    dual_numbers,
    dual_numbers_mutated,
    serialize_dialgebra,
    zero_dialgebra,
)

DUAL = "samples/dual-numbers.dlg"
MUTATED = "samples/dual-numbers-mutated.dlg"
MATRIX = "samples/matrix-square.dlg"
TRIANGLE = "samples/triangle.graph"
HANDLE = "samples/handle.bord"
SPLIT_MERGE = "samples/split-merge.bord"


def call(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBracketCommands:
    def test_bracket_pilot(self, capsys):
        code, out, err = call(capsys, "bracket", "--surface", "torus-1",
                              "a", "b")
        assert (code, out, err) == (0, "1/1 ab\n", "")

    def test_bracket_antisymmetry(self, capsys):
        code, out, _ = call(capsys, "bracket", "--surface", "torus-1",
                            "b", "a")
        assert code == 0
        assert out == "-1/1 ab\n"

    def test_bracket_zero(self, capsys):
        code, out, _ = call(capsys, "bracket", "--surface", "torus-1",
                            "a", "a")
        assert code == 0
        assert out == "(empty)\n"

    def test_explicit_symbol_order(self, capsys):
        code, out, _ = call(capsys, "bracket", "--symbol", "a,A,b,B",
                            "a", "b")
        assert code == 0
        assert out == "(empty)\n"

    def test_cobracket_zero_and_nonzero(self, capsys):
        code, out, _ = call(capsys, "cobracket", "--surface", "torus-1", "ab")
        assert (code, out) == (0, "(empty)\n")
        code, out, _ = call(capsys, "cobracket", "--surface", "torus-1",
                            "aabAB")
        assert code == 0
        assert out == "1/1 a (x) abAB\n-1/1 abAB (x) a\n"

    def test_bad_word_is_a_usage_error(self, capsys):
        code, out, err = call(capsys, "bracket", "--surface", "torus-1",
                              "a", "q")
        assert code == 2
        assert out == ""
        assert err.startswith("error: ")

    def test_trivial_word_is_rejected(self, capsys):
        code, _, err = call(capsys, "cobracket", "--surface", "torus-1", "aA")
        assert code == 2
        assert "trivial" in err

    def test_bialgebra_suite_small(self, capsys):
        code, out, _ = call(capsys, "bialgebra-suite", "--surface", "torus-1",
                            "--max-len", "2", "--samples", "5",
                            "--random-max-len", "4", "--seed", "9")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "surface torus-1"
        assert lines[1] == "words 12"
        assert lines[2] == "samples 5"
        assert set(lines[3:]) == {"PASS antisymmetry", "PASS jacobi",
                                  "PASS co-antisymmetry", "PASS cojacobi",
                                  "PASS drinfeld"}


class TestDialgebraCommands:
    def test_check_reports_pass_fail_table(self, capsys):
        code, out, _ = call(capsys, "dialgebra-check", DUAL)
        assert code == 1
        lines = out.splitlines()
        assert lines[0] == "dialgebra dual-numbers"
        assert "PASS associativity" in lines
        assert "PASS module" in lines
        assert "PASS unit" in lines
        assert "FAIL derivation" in lines
        at = lines.index("FAIL derivation")
        assert lines[at + 1] == "  witness (e, e): v(a.b) != (va).b + a.(vb)"
        assert lines[at + 2] == "    lhs = 1/1 e (x) x + 1/1 x (x) e"
        assert lines[at + 3] == "    rhs = 2/1 e (x) x + 2/1 x (x) e"

    def test_check_selected_axioms_exit_zero(self, capsys):
        code, out, _ = call(capsys, "dialgebra-check", DUAL,
                            "--axioms", "associativity,module")
        assert code == 0
        assert out.splitlines()[1:] == ["PASS associativity", "PASS module"]

    def test_check_unknown_axiom(self, capsys):
        code, _, err = call(capsys, "dialgebra-check", DUAL,
                            "--axioms", "frobnication")
        assert code == 2
        assert "unknown axiom" in err

    def test_check_missing_file(self, capsys):
        code, _, err = call(capsys, "dialgebra-check", "no-such-file.dlg")
        assert code == 2
        assert err.startswith("error: no-such-file.dlg:")

    def test_check_parse_error_carries_line_number(self, capsys, tmp_path):
        bad = tmp_path / "bad.dlg"
        bad.write_text("dialgebra d\nbasis e deg 0\nprod e q -> e : 1/1\n")
        code, _, err = call(capsys, "dialgebra-check", str(bad))
        assert code == 2
        assert f"error: {bad}: line 3:" in err

    def test_classify_output(self, capsys):
        code, out, _ = call(capsys, "classify", DUAL)
        assert code == 0
        assert out == ("dialgebra dual-numbers\n"
                       "cell (associative, module)\n"
                       "cell (commutative, module)\n"
                       "hopf no\n")

    def test_classify_empty_table(self, capsys):
        code, out, _ = call(capsys, "classify", MUTATED)
        assert code == 0
        assert "cell (none)" in out
        assert out.endswith("hopf no\n")


class TestTqftCommands:
    def test_eval_handle(self, capsys):
        code, out, _ = call(capsys, "tqft-eval", DUAL, HANDLE, "--input", "e")
        assert (code, out) == (0, "2/1 x\n")
        code, out, _ = call(capsys, "tqft-eval", DUAL, HANDLE, "--input", "x")
        assert (code, out) == (0, "(empty)\n")

    def test_eval_split_merge(self, capsys):
        code, out, _ = call(capsys, "tqft-eval", DUAL, SPLIT_MERGE,
                            "--input", "e,e")
        assert code == 0
        assert out == "1/1 e (x) x\n1/1 x (x) e\n"

    def test_eval_rejects_bad_input_symbol(self, capsys):
        code, _, err = call(capsys, "tqft-eval", DUAL, HANDLE, "--input", "zz")
        assert code == 2
        assert "unknown basis symbol" in err

    def test_eval_rejects_arity_mismatch(self, capsys):
        code, _, err = call(capsys, "tqft-eval", DUAL, HANDLE,
                            "--input", "e,e")
        assert code == 2
        assert "arity" in err

    def test_eval_open_sector_rejects_twists(self, capsys):
        code, _, err = call(capsys, "tqft-eval", MATRIX, SPLIT_MERGE,
                            "--input", "e11,e11", "--sector", "open")
        assert code == 2
        assert "planar" in err

    def test_invariance_clean(self, capsys):
        code, out, _ = call(capsys, "tqft-invariance", DUAL, "--genus-max",
                            "1", "--ports-max", "2", "--samples", "2",
                            "--seed", "11")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "dialgebra dual-numbers"
        assert all(line.startswith("gate PASS") for line in lines[1:6])
        assert lines[-1] == "invariant yes"

    def test_invariance_detects_mutation(self, capsys):
        code, out, _ = call(capsys, "tqft-invariance", MUTATED, "--genus-max",
                            "0", "--ports-max", "2", "--samples", "3",
                            "--seed", "11", "--stop-early")
        assert code == 1
        assert "gate FAIL module" in out
        assert "invariant no" in out
        assert "FAIL type (g=" in out


class TestGraphCommands:
    def test_compose(self, capsys):
        code, out, _ = call(capsys, "graph", TRIANGLE, "compose", "e1", "e2")
        assert (code, out) == (0, "1/1 e1.e2\n")

    def test_compose_mismatch(self, capsys):
        code, _, err = call(capsys, "graph", TRIANGLE, "compose", "e1", "e1")
        assert code == 2
        assert "label mismatch" in err

    def test_cut_interior(self, capsys):
        code, out, _ = call(capsys, "graph", TRIANGLE, "cut", "e1.f.e2",
                            "--label", "all")
        assert code == 0
        assert out == "1/1 e1 (x) f.e2\n1/1 e1.f (x) e2\n"

    def test_cut_at_index(self, capsys):
        code, out, _ = call(capsys, "graph", TRIANGLE, "cut", "e1.f.e2",
                            "--label", "all", "--index", "2")
        assert (code, out) == (0, "1/1 e1.f (x) e2\n")

    def test_cut_boundary(self, capsys):
        code, out, _ = call(capsys, "graph", TRIANGLE, "cut", "e1.e2",
                            "--label", "La", "--boundary", "start")
        assert (code, out) == (0, "1/1 @u (x) e1.e2\n")
        code, out, _ = call(capsys, "graph", TRIANGLE, "cut", "e1.e2",
                            "--label", "La", "--boundary", "end")
        assert (code, out) == (0, "(empty)\n")

    def test_cut_site_options_conflict(self, capsys):
        code, _, err = call(capsys, "graph", TRIANGLE, "cut", "e1.e2",
                            "--label", "all", "--index", "1",
                            "--boundary", "end")
        assert code == 2

    def test_cut_unknown_label(self, capsys):
        code, _, err = call(capsys, "graph", TRIANGLE, "cut", "e1.e2",
                            "--label", "nope")
        assert code == 2
        assert "unknown label" in err

    def test_restrict(self, capsys):
        code, out, _ = call(capsys, "graph", TRIANGLE, "restrict", "e1.e2",
                            "e1", "@u", "--start", "La", "--end", "Lc")
        assert (code, out) == (0, "1/1 e1.e2\n")

    def test_bad_graph_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.graph"
        bad.write_text("graph g\nvertex u\nedge e u\n")
        code, _, err = call(capsys, "graph", str(bad), "compose", "x", "y")
        assert code == 2
        assert f"error: {bad}: line 3:" in err


class TestSelftest:
    def test_reduced_scale_selftest(self, capsys):
        code, out, _ = call(capsys, "selftest", "--max-len", "2",
                            "--samples", "5", "--graphs", "2",
                            "--samples-tqft", "1", "--seed", "23")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 7
        for i, line in enumerate(lines, start=1):
            assert line.startswith(f"criterion {i} PASS: ")


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("bracket", "--surface", "torus-1", "a", "b"),
        ("cobracket", "--surface", "torus-1", "aabaB"),
        ("dialgebra-check", DUAL),
        ("classify", MATRIX),
        ("tqft-eval", DUAL, SPLIT_MERGE, "--input", "e,e"),
        ("tqft-invariance", DUAL, "--genus-max", "0", "--ports-max", "2",
         "--samples", "2"),
        ("graph", TRIANGLE, "cut", "e1.f.e2", "--label", "all"),
    ])
    def test_repeated_runs_are_byte_identical(self, capsys, argv):
        first = call(capsys, *argv)
        second = call(capsys, *argv)
        assert first == second

    def test_sample_files_match_fixture_serialization(self):
        assert open(DUAL).read() == serialize_dialgebra(dual_numbers())
        assert open(MUTATED).read() == serialize_dialgebra(dual_numbers_mutated())


class TestUsage:
    def test_missing_subcommand_exits_2(self, capsys):
        assert run([]) == 2
        capsys.readouterr()

    def test_help_exits_0(self, capsys):
        assert run(["--help"]) == 0
        out = capsys.readouterr().out
        assert "bracket" in out

    def test_surface_and_symbol_are_exclusive(self, capsys):
        code = run(["bracket", "--surface", "torus-1", "--symbol", "a,A",
                    "a", "b"])
        capsys.readouterr()
        assert code == 2
