import json

import pytest

from semlog.cli import main

TC = "T(x1, x2) :- R(x1, x2).\nT(x1, x2) :- T(x1, x3), R(x3, x2).\n@target T.\n"


@pytest.fixture
def tc_files(tmp_path):
    prog = tmp_path / "tc.dl"
    prog.write_text(TC)
    facts = tmp_path / "facts.txt"
    facts.write_text("R(a,b) = 1.\nR(b,c) = 2.\n")
    return str(prog), str(facts)


def test_run_tsv(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["run", "--program", prog, "--facts", facts,
               "--semiring", "tropical"])
    out, err = capsys.readouterr()
    assert rc == 0
    assert out.splitlines() == [
        "T(a,b)\t1",
        "T(a,c)\t3",
        "T(b,c)\t2",
    ]
    assert "grounding_size" in err


def test_run_structured(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["run", "--program", prog, "--facts", facts,
               "--semiring", "tropical", "--output", "structured"])
    out, _ = capsys.readouterr()
    assert rc == 0
    doc = json.loads(out)
    assert doc["relation"]["T(a,c)"] == "3"
    assert doc["stats"]["solver"] == "absorptive"


def test_run_corpus_program(capsys):
    rc = main(["run", "--program", "corpus:eq2_tc", "--semiring", "boolean",
               "--facts", "/dev/null"])
    out, _ = capsys.readouterr()
    assert rc == 0 and out == ""


def test_ground_explain(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["ground", "--program", prog, "--facts", facts,
               "--semiring", "tropical", "--strategy", "naive", "--explain"])
    out, _ = capsys.readouterr()
    assert rc == 0
    assert "% rule T body 1:" in out
    assert "x_T_a_b = " in out


def test_check_agrees(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["check", "--program", prog, "--facts", facts,
               "--semiring", "tropical"])
    out, _ = capsys.readouterr()
    assert rc == 0
    assert "DISAGREE" not in out and "agree" in out


def test_classify(tc_files, capsys):
    prog, _ = tc_files
    rc = main(["classify", "--program", prog])
    out, _ = capsys.readouterr()
    assert rc == 0
    assert "linear\ttrue" in out and "chain\ttrue" in out


def test_bad_program_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.dl"
    bad.write_text("T(x) :- R(y).\n@target T.\n")
    rc = main(["run", "--program", str(bad), "--facts", "/dev/null"])
    _, err = capsys.readouterr()
    assert rc == 2 and "error" in err


def test_missing_file_exits_2(capsys):
    rc = main(["run", "--program", "/nonexistent.dl", "--facts", "/dev/null"])
    assert rc == 2


def test_rank_on_tropical_exits_3(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["run", "--program", prog, "--facts", facts,
               "--semiring", "tropical", "--solver", "rank"])
    _, err = capsys.readouterr()
    assert rc == 3 and "capability" in err


def test_cap_size_exits_4(tc_files, capsys):
    prog, facts = tc_files
    rc = main(["run", "--program", prog, "--facts", facts,
               "--semiring", "tropical", "--cap-size", "3"])
    _, err = capsys.readouterr()
    assert rc == 4 and "cap exceeded" in err


def test_divergent_naturals_exits_5(tmp_path, capsys):
    prog = tmp_path / "tc.dl"
    prog.write_text(TC)
    facts = tmp_path / "loop.txt"
    facts.write_text("R(a,a) = 2.\n")
    rc = main(["run", "--program", str(prog), "--facts", str(facts),
               "--semiring", "naturals", "--max-iters", "30"])
    assert rc == 5


def test_bench_csv(capsys):
    args = ["bench", "--program", "corpus:sssp", "--semiring", "tropical",
            "--family", "path", "--sizes", "8,16,32", "--seed", "1"]
    rc = main(args)
    out1, err1 = capsys.readouterr()
    assert rc == 0
    lines = out1.splitlines()
    assert lines[0] == ("index,family,size,m,n,grounding_size,"
                        "canonical_size,solver,wall_time,status")
    assert len(lines) == 4 and all(",path," in l for l in lines[1:])
    assert "slope" in err1
    # identical seeds give identical measurements (modulo wall time)
    main(args)
    out2, _ = capsys.readouterr()
    strip = lambda s: ["," .join(l.split(",")[:8]) for l in s.splitlines()]
    assert strip(out1) == strip(out2)
