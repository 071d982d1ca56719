import io

import pytest

from confsup.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_betti_disk_two_points():
    assert run("betti", "--complex", "disk", "--n", "2") == (0, "b0=1\tb1=1\n")


def test_betti_circle_one_point():
    assert run("betti", "--complex", "circle", "--n", "1") == (0, "b0=1\tb1=1\n")


def test_betti_reports_torsion():
    code, out = run("betti", "--complex", "rp2", "--n", "1", "--subdiv", "0", "--format", "text")
    assert code == 0 and out == "b0=1 b1=0 t1=2\n"


def test_malformed_file_exits_two_with_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2\n1 two\n")
    code, _ = run("betti", "--complex", str(bad), "--n", "1")
    assert code == 2
    assert "line 2" in capsys.readouterr().err


def test_unknown_fixture_exits_two():
    assert run("betti", "--complex", "nowhere", "--n", "1")[0] == 2


def test_complex_file_input(tmp_path):
    f = tmp_path / "tri.txt"
    f.write_text("# a triangle\n0 1 2\n")
    assert run("betti", "--complex", str(f), "--n", "2") == (0, "b0=1\tb1=1\n")


def test_sup_values():
    assert run("sup", "--complex", "disk", "--n", "1", "--m", "1", "--class-a", "0", "--class-b", "0") == (0, "2\n")
    assert run("sup", "--complex", "interval", "--n", "2", "--m", "1", "--class-a", "0", "--class-b", "0") == (0, "3\n")


def test_sup_with_empty_side_is_identity():
    code, out = run("sup", "--complex", "disk", "--n", "2", "--m", "0", "--subdiv", "1")
    assert code == 0
    assert out.splitlines() == ["2:0:0\t0:0:0\t4\t1", "2:1:0\t0:0:0\t5\t1"]


def test_sup_class_out_of_range():
    assert run("sup", "--complex", "disk", "--n", "1", "--m", "1", "--class-a", "5")[0] == 2


def test_build_model_output():
    code, out = run("build-model", "--complex", "disk", "--n", "2")
    assert code == 0
    assert out.splitlines() == ["model\tC2(disk)", "subdiv\t2", "cells\t300,1380,2292,1656,444", "chi\t0",
                                "betti\t1,1,0,0,0"]


def test_build_model_count_only_ordered():
    code, out = run("build-model", "--complex", "disk", "--n", "3", "--ordered", "--count-only")
    assert code == 0 and "chi\t0" in out


def test_guard_breach_exits_two():
    assert run("build-model", "--complex", "disk", "--n", "2", "--guard", "100")[0] == 2
    assert run("verify", "ring", "--complex", "disk", "--max-points", "4")[0] == 2


def test_verify_formal():
    code, out = run("verify", "formal", "--max-size", "4")
    assert code == 0 and all(line.startswith("PASS") for line in out.splitlines())


def test_verify_ring_small():
    code, out = run("verify", "ring", "--complex", "disk", "--max-points", "4", "--subdiv", "1")
    assert code == 0 and out.startswith("PASS\tring-axioms[disk]")


@pytest.mark.parametrize("suite", ["transfer", "lemma42", "phi-factor", "mu-factor"])
def test_verify_suites_pass(suite):
    code, out = run("verify", suite)
    assert code == 0 and out and "FAIL" not in out


def test_verify_models_and_divided_powers():
    assert run("verify", "models", "--subdiv", "1")[0] == 0
    assert run("verify", "divided-powers", "--subdiv", "1", "--max-points", "3")[0] == 0


def test_invalid_arguments_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2
    assert run("betti", "--complex", "disk", "--n", "-1")[0] == 2
    assert run("betti", "--complex", "disk", "--n", "1", "--guard", "0")[0] == 2


def test_output_is_deterministic():
    a = run("sup", "--complex", "disk", "--n", "1", "--m", "2", "--subdiv", "1")
    b = run("sup", "--complex", "disk", "--n", "1", "--m", "2", "--subdiv", "1")
    assert a == b and a[0] == 0
