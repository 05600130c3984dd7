import json
import subprocess
import sys

import pytest

from ldim.cli import main
from ldim.order import format_poset, standard_example


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def s3_file(tmp_path):
    p = tmp_path / "s3.poset"
    p.write_text(format_poset(standard_example(3).to_poset()))
    return str(p)


def test_construct_then_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "far-layers", "--n", "3", "--l", "1", "--top", "2")
    assert code == 0
    assert "# max_multiplicity 3" in out
    f = tmp_path / "r.txt"
    f.write_text(out)
    code, out, _ = run(capsys, "verify", "--n", "3", "--l", "1", "--k", "2", "--realiser", str(f))
    assert code == 0
    assert out.splitlines()[0] == "valid true max_multiplicity 3"


@pytest.mark.parametrize(
    "kind, args, host",
    [
        ("far-layers", ["--n", "5", "--l", "1", "--top", "3"], (5, 1, 3)),
        ("far-layers", ["--n", "6", "--l", "2", "--top", "5"], (6, 2, 5)),
        ("bipartite", ["--n", "8", "--l", "1", "--k", "4"], (8, 1, 4)),
        ("bipartite", ["--n", "9", "--l", "1", "--k", "2"], (9, 1, 2)),
        ("hypercube", ["--m", "2", "--l", "1", "--k", "3"], (4, 1, 3)),
        ("hypercube", ["--m", "2", "--l", "2", "--k", "3"], (8, 2, 3)),
    ],
)
def test_construct_verify_grid(capsys, tmp_path, kind, args, host):
    f = tmp_path / "r.txt"
    code, _, _ = run(capsys, "construct", kind, *args, "-o", str(f))
    assert code == 0
    n, l, k = map(str, host)
    code, out, _ = run(capsys, "verify", "--n", n, "--l", l, "--k", k, "--realiser", str(f))
    assert code == 0 and out.startswith("valid true")


def test_verify_invalid_exit_code(capsys, tmp_path, s3_file):
    f = tmp_path / "bad.txt"
    f.write_text("realiser 6 1\n1 2 3\n")
    code, out, _ = run(capsys, "verify", "--poset", s3_file, "--realiser", str(f))
    assert code == 1
    assert out.startswith("valid false")
    assert "uncovered_pair" in out


def test_exact_ldim(capsys, s3_file):
    code, out, _ = run(capsys, "exact", "ldim", "--poset", s3_file)
    assert (code, out) == (0, "value 3\n")
    code, out, _ = run(capsys, "exact", "ldim", "--poset", s3_file, "--max-d", "2")
    assert (code, out) == (2, "exceeded lower_bound=3\n")
    code, out, _ = run(capsys, "exact", "dim", "--poset", s3_file, "--json")
    assert json.loads(out)["value"] == 3


def test_encode_decode_roundtrip(capsys, tmp_path):
    f = tmp_path / "r.txt"
    run(capsys, "construct", "far-layers", "--n", "4", "--l", "1", "--top", "3", "-o", str(f))
    code, word, _ = run(capsys, "encode", "--realiser", str(f))
    assert code == 0 and word.split()[0].endswith("i") and word.split()[-1].endswith("f")
    c = tmp_path / "w.txt"
    c.write_text(word)
    code, back, _ = run(capsys, "decode", "--code", str(c), "--n", "8")
    assert code == 0
    original = "".join(line for line in f.read_text().splitlines(True) if not line.startswith("#"))
    assert back == original


def test_decode_grammar_error(capsys, tmp_path):
    c = tmp_path / "w.txt"
    c.write_text("1i 2i 1f\n")
    code, _, err = run(capsys, "decode", "--code", str(c))
    assert code == 1 and "error" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "4", "--l", "1", "--k", "3")
    assert code == 0
    assert "metric far_layers 3" in out
    code, out, _ = run(capsys, "bounds", "--n", "4", "--l", "1", "--k", "2", "--json")
    assert json.loads(out)["kostochka"]["value"] == 4


def test_sample_deterministic(capsys):
    _, a, _ = run(capsys, "sample", "two-layer", "--n", "6", "--seed", "5")
    _, b, _ = run(capsys, "sample", "two-layer", "--n", "6", "--seed", "5")
    assert a == b and a.startswith("poset 6")
    code, out, _ = run(capsys, "sample", "layer", "--n", "4", "--l", "1", "--k", "2", "--m", "3", "--seed", "1")
    assert code == 0 and out.startswith("poset 7")


def test_sample_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sample", "two-layer", "--n", "4"])
    assert exc.value.code != 0


def test_experiment(capsys):
    code, out, _ = run(capsys, "experiment", "shannon", "--n", "4", "--samples", "50", "--seed", "3")
    assert code == 0
    assert "metric entropy_bits 4" in out
    code, _, err = run(capsys, "experiment", "avg-ldim", "--n", "4")
    assert code == 1 and "seed" in err


def test_embed(capsys):
    code, out, _ = run(capsys, "embed", "divisibility", "--n", "35", "--k", "4")
    assert code == 0 and out.rstrip().endswith("valid true")
    code, out, _ = run(capsys, "embed", "shift12", "--n", "4", "--k", "2", "--json")
    assert json.loads(out)["valid"]


def test_construct_lex(capsys, tmp_path):
    p = tmp_path / "a2.poset"
    p.write_text("poset 2\n")
    r = tmp_path / "a2.real"
    r.write_text("realiser 2 2\n1 2\n2 1\n")
    out_poset = tmp_path / "host.poset"
    for kind in ("lex-subst", "lex-add"):
        f = tmp_path / f"{kind}.txt"
        code, _, _ = run(
            capsys, "construct", kind, "--poset", str(p), "--realiser", str(r),
            "--m", "2", "--poset-out", str(out_poset), "-o", str(f),
        )
        assert code == 0
        code, out, _ = run(capsys, "verify", "--poset", str(out_poset), "--realiser", str(f))
        assert code == 0, out


def test_console_script_pipeline(tmp_path):
    built = subprocess.run(
        [sys.executable, "-m", "ldim", "construct", "far-layers", "--n", "3", "--l", "1", "--top", "2"],
        capture_output=True, text=True, check=True,
    )
    res = subprocess.run(
        [sys.executable, "-m", "ldim", "verify", "--n", "3", "--l", "1", "--k", "2", "--realiser", "-"],
        input=built.stdout, capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert res.stdout.startswith("valid true max_multiplicity 3")
