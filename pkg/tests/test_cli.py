import io
import subprocess
import sys

from spectrum.cli import main
from spectrum.logic import Prop, parse_formula, type_check
from spectrum.lts import parse_aut

from support import DATA, PHI_T

LEFT, RIGHT = str(DATA / "example_left.aut"), str(DATA / "example_right.aut")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def check(*extra, p=0, q=0):
    return run("check", "--lts1", LEFT, "--lts2", RIGHT, "--p", str(p), "--q", str(q), *extra)


def test_check_equivalent():
    for engine in ("treq", "oracle", "needdriven", "naive"):
        code, text = check("--equiv", "trace", "--engine", engine)
        assert code == 0 and text.strip() == "EQUIVALENT", engine


def test_check_not_equivalent():
    code, text = check("--equiv", "trace", p=1)
    assert code == 1 and text.strip() == "NOT EQUIVALENT"


def test_check_all_engines_with_stats():
    code, text = check("--equiv", "trace", "--engine", "all", "--stats")
    assert code == 0
    for engine in ("naive", "needdriven", "treq", "oracle"):
        assert f"{engine}: EQUIVALENT" in text
    assert "stats:" in text and "seconds=" in text
    assert text.strip().endswith("EQUIVALENT")


def test_possible_futures_needs_the_oracle(capsys):
    code, _ = check("--equiv", "possible_futures", "--engine", "naive")
    assert code == 2
    assert "order-2" in capsys.readouterr().err
    code, text = check("--equiv", "possible_futures", "--engine", "oracle")
    assert code == 0 and text.strip() == "EQUIVALENT"


def test_check_errors(capsys):
    assert check("--equiv", "failure", "--engine", "treq")[0] == 2
    assert check("--equiv", "weak")[0] == 2
    assert check("--equiv", "trace", p=7)[0] == 2
    code, _ = run("check", "--lts1", "missing.aut", "--lts2", RIGHT, "--p", "0", "--q", "0",
                  "--equiv", "trace")
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_dump_deps(tmp_path):
    target = tmp_path / "deps.dot"
    code, _ = check("--equiv", "trace", "--dump-deps", str(target))
    assert code == 0
    assert target.read_text().startswith("digraph")


def test_modelcheck_phi_t():
    code, text = run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT, "--expr", PHI_T)
    assert code == 0
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert rows == ["(0,1)", "(0,2)", "(1,0)"]
    code, naive = run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT, "--expr", PHI_T,
                      "--engine", "naive")
    assert naive == text


def test_modelcheck_simple_formulas(tmp_path):
    code, text = run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT, "--expr", "true")
    assert code == 0
    assert len([line for line in text.splitlines() if line.startswith("(")]) == 6
    source = tmp_path / "phi.txt"
    source.write_text("<a>1 true & [a]2 false")
    code, text = run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT, "--formula", str(source))
    assert [line for line in text.splitlines() if line.startswith("(")] == ["(1,0)"]


def test_modelcheck_errors(capsys):
    assert run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT, "--expr", "<a>1 (")[0] == 2
    assert run("modelcheck", "--lts1", LEFT, "--lts2", RIGHT,
               "--expr", "lambda X:+:P2. X")[0] == 2
    assert "expected a closed P2 formula" in capsys.readouterr().err


def test_emit_formula():
    code, text = run("emit-formula", "--equiv", "trace", "--alphabet", "a,b")
    assert code == 0
    assert parse_formula(text.strip()) is not None
    code, text = run("emit-formula", "--equiv", "bisimulation", "--alphabet", "a")
    assert text.strip() == "mu X:P2. false | <a>1 [a]2 X | <a>2 [a]1 X"
    code, text = run("emit-formula", "--equiv", "possible_futures", "--alphabet", "a")
    assert type_check([], parse_formula(text.strip())) == Prop(2)
    code, text = run("emit-formula", "--equiv", "simulation", "--alphabet", "a",
                     "--characteriser")
    assert text.startswith("!")


def test_gen_random_golden():
    code, text = run("gen-random", "--states", "3", "--actions", "2", "--seed", "42")
    assert code == 0
    assert text == (DATA / "random_seed42_n3_k2.aut").read_text()


def test_gen_random_extremes():
    code, text = run("gen-random", "--states", "1", "--actions", "1", "--density", "0")
    assert text.splitlines()[0] == "des (0, 0, 1)"
    code, text = run("gen-random", "--states", "3", "--actions", "2", "--density", "1.0")
    assert len(parse_aut(text).transitions) == 3 * 3 * 2
    assert run("gen-random", "--states", "0", "--actions", "1")[0] == 2
    assert run("gen-random", "--states", "2", "--actions", "1", "--density", "1.5")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spectrum", "check", "--lts1", LEFT,
                           "--lts2", RIGHT, "--p", "1", "--q", "0", "--equiv", "trace",
                           "--engine", "treq"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout.strip() == "NOT EQUIVALENT"
