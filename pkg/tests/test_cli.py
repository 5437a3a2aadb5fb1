import os
from fractions import Fraction

import pytest

from bellpoly.cli import main, worker_count
from bellpoly.core import (
    CorrelationTable,
    Scenario,
    format_point,
    format_table,
    parse_inequality_file,
    parse_vertex_file,
    project_bidir,
)
from bellpoly.bounds import hat_distribution


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def pr_box_text() -> str:
    t = CorrelationTable.from_function(
        Scenario(2, 2),
        lambda a, b, i, j: Fraction(1, 2) if (a + b) % 2 == i * j else Fraction(0),
    )
    return format_table(t)


class TestStirlingCommand:
    def test_value(self, capsys):
        code, out, _ = run(capsys, "stirling", "3", "2")
        assert code == 0 and out.strip() == "3"

    def test_large(self, capsys):
        code, out, _ = run(capsys, "stirling", "20", "5")
        assert code == 0 and out.strip() == "749206090500"


class TestVerticesCommand:
    def test_lsr_1x1(self, tmp_path, capsys):
        out_file = tmp_path / "v.txt"
        code, out, _ = run(
            capsys, "vertices", "--model", "lsr", "--ma", "1", "--mb", "1",
            "--out", str(out_file),
        )
        assert code == 0
        space, sc, rbits, points = parse_vertex_file(out_file.read_text())
        assert space == "bidir" and sc == Scenario(1, 1) and rbits == 0
        assert len(points) == 4

    def test_fixed_ba_writes_mirrored_header(self, tmp_path, capsys):
        out_file = tmp_path / "v.txt"
        code, _, _ = run(
            capsys, "vertices", "--model", "fixed-ba", "--ma", "3", "--mb", "2",
            "--bits", "1", "--out", str(out_file),
        )
        assert code == 0
        space, sc, _, points = parse_vertex_file(out_file.read_text())
        assert space == "fixed" and sc == Scenario(2, 3)
        assert len(points) == 256

    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            run(capsys, "vertices", "--model", "bidir", "--ma", "2", "--mb", "2",
                "--bits", "1", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()


class TestPipeline:
    def test_fixed_22_classes_summary(self, tmp_path, capsys):
        v, f = tmp_path / "v.txt", tmp_path / "f.txt"
        run(capsys, "vertices", "--model", "fixed-ab", "--ma", "2", "--mb", "2",
            "--bits", "1", "--out", str(v))
        code, out, _ = run(capsys, "facets", "--in", str(v), "--out", str(f))
        assert code == 0
        space, sc, ineqs, eqs = parse_inequality_file(f.read_text())
        assert space == "fixed" and len(ineqs) == 16 and not eqs
        code, out, _ = run(capsys, "classes", "--in", str(f))
        assert code == 0
        assert out.strip() == "nontrivial=0 trivial=1 total=1"

    def test_class_report_with_chart(self, tmp_path, capsys):
        v, f, r = tmp_path / "v.txt", tmp_path / "f.txt", tmp_path / "report.txt"
        run(capsys, "vertices", "--model", "fixed-ab", "--ma", "2", "--mb", "2",
            "--bits", "1", "--out", str(v))
        run(capsys, "facets", "--in", str(v), "--out", str(f))
        code, out, _ = run(capsys, "classes", "--in", str(f), "--out", str(r),
                           "--pretty-chart")
        assert code == 0
        report = r.read_text()
        assert report.startswith("classes fixed 2 2 1")
        assert "trivial=yes" in report
        assert "<=" in report


class TestCheckCommand:
    def test_inside_exit_zero(self, tmp_path, capsys):
        v, p = tmp_path / "v.txt", tmp_path / "p.txt"
        run(capsys, "vertices", "--model", "bidir", "--ma", "2", "--mb", "2",
            "--bits", "1", "--out", str(v))
        uniform = CorrelationTable.from_function(
            Scenario(2, 2), lambda a, b, i, j: Fraction(1, 4)
        )
        p.write_text(format_point(project_bidir(uniform)))
        code, out, _ = run(capsys, "check", "--point", str(p), "--vertices", str(v))
        assert code == 0
        assert out.splitlines()[0] == "inside"
        assert any(line.startswith("weight ") for line in out.splitlines())

    def test_outside_exit_one(self, tmp_path, capsys):
        v, p = tmp_path / "v.txt", tmp_path / "p.txt"
        run(capsys, "vertices", "--model", "bidir", "--ma", "3", "--mb", "3",
            "--bits", "1", "--out", str(v))
        p.write_text(format_point(project_bidir(hat_distribution(3, 3))))
        code, out, _ = run(capsys, "check", "--point", str(p), "--vertices", str(v))
        assert code == 1
        assert out.splitlines()[0] == "outside"
        assert out.splitlines()[1].startswith("separator ")

    def test_dimension_mismatch_exit_two(self, tmp_path, capsys):
        v, p = tmp_path / "v.txt", tmp_path / "p.txt"
        run(capsys, "vertices", "--model", "bidir", "--ma", "2", "--mb", "2",
            "--bits", "1", "--out", str(v))
        uniform = CorrelationTable.from_function(
            Scenario(3, 2), lambda a, b, i, j: Fraction(1, 4)
        )
        p.write_text(format_point(project_bidir(uniform)))
        code, _, err = run(capsys, "check", "--point", str(p), "--vertices", str(v))
        assert code == 2
        assert "dimension" in err


class TestSimulateCommand:
    def test_pr_box(self, tmp_path, capsys):
        table = tmp_path / "t.txt"
        ensemble = tmp_path / "e.txt"
        table.write_text(pr_box_text())
        code, out, _ = run(capsys, "simulate", "--table", str(table),
                           "--out", str(ensemble))
        assert code == 0
        assert out.strip() == "bits=1 exact=yes"
        assert ensemble.read_text().startswith("ensemble ba 2 2 2 2 2")

    def test_signaling_table_exit_one(self, tmp_path, capsys):
        sc = Scenario(3, 2)
        t = CorrelationTable.from_function(
            sc, lambda a, b, i, j: int(a == j % 2 and b == i % 2)
        )
        table = tmp_path / "t.txt"
        table.write_text(format_table(t))
        code, _, err = run(capsys, "simulate", "--table", str(table))
        assert code == 1
        assert "signaling" in err


class TestHatAndLowerbound:
    def test_hat_writes_table(self, tmp_path, capsys):
        out = tmp_path / "hat.txt"
        code, _, _ = run(capsys, "hat", "--ma", "3", "--mb", "2", "--out", str(out))
        assert code == 0
        from bellpoly.core import parse_table

        assert parse_table(out.read_text()) == hat_distribution(3, 2)

    def test_lowerbound_2x2_inside_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "report.txt"
        code, printed, _ = run(capsys, "lowerbound", "--ma", "2", "--mb", "2",
                               "--bits", "1", "--out", str(out))
        assert code == 0
        assert "exhaustive_refuted=no" in printed
        assert "lp_outside=no" in printed
        assert out.read_text() == printed

    def test_thread_env_does_not_change_output(self, tmp_path, capsys, monkeypatch):
        outputs = []
        for threads in ("1", "2"):
            monkeypatch.setenv("BELLPOLY_THREADS", threads)
            out = tmp_path / f"report{threads}.txt"
            code, printed, _ = run(capsys, "lowerbound", "--ma", "2", "--mb", "2",
                                   "--bits", "1", "--out", str(out))
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]


class TestErrorsAndEnv:
    def test_malformed_file_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("vertices nowhere 2 2 1 0\n")
        code, _, err = run(capsys, "facets", "--in", str(bad), "--out",
                           str(tmp_path / "f.txt"))
        assert code == 2
        assert "error" in err

    def test_missing_file_exit_two(self, tmp_path, capsys):
        code, _, _ = run(capsys, "facets", "--in", str(tmp_path / "nope.txt"),
                         "--out", str(tmp_path / "f.txt"))
        assert code == 2

    def test_unknown_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["stirling", "3", "2", "--frobnicate"])
        assert info.value.code == 2

    def test_worker_count_default_and_env(self, monkeypatch):
        monkeypatch.delenv("BELLPOLY_THREADS", raising=False)
        assert worker_count() == 1
        monkeypatch.setenv("BELLPOLY_THREADS", "1")
        assert worker_count() == 1
        monkeypatch.setenv("BELLPOLY_THREADS", "0")
        assert worker_count() == 1
