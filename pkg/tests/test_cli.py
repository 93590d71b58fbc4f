import subprocess
import sys

import pytest

from wnrings.cli import FAIL, PASS, REFUTED, SKIP, InstanceError, main, parse_instance, run_command, verify_suite
from wnrings.errors import WnError

R23 = """\
# two primes
field Q
val v2 = padic 2
val v3 = padic 3
ring R = intersect(v2, v3)
ring R2 = intersect(v2)
module M = vec(1, 0) over R
lattice B2 = elements 4 cover 0 1 cover 0 2 cover 1 3 cover 2 3
"""

SINGLE = """\
field Q
val v2 = padic 2
ring R = intersect(v2)
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="inst.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_minimal():
    inst = parse_instance(SINGLE)
    assert inst.names() == ["v2", "R"] or "R" in inst.names()
    assert inst.ring("R").n == 1


@pytest.mark.parametrize(
    "text,message",
    [
        ("field Q\nval v4 = padic 4\n", "line 2: 4 is not prime"),
        ("field Q\nval v2 = padic 2\nring R = intersect(v2, v2)\n", "duplicate valuation"),
        ("field Q\nval v2 = padic 2\nring R = intersect(v2, v3)\n", "unknown valuation 'v3'"),
        ("field Q\nval v2 = padic 2\nval v2 = padic 3\n", "duplicate"),
        ("field Q\nfield Q\n", "field"),
        ("field Q\nbanana\n", "line 2"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(InstanceError) as e:
        parse_instance(text)
    assert message in str(e.value)


def test_weight_command(write, capsys):
    code, out, _ = run(capsys, "--instance", write(R23), "weight", "R")
    assert code == 0
    assert out.startswith("PASS") and "weight = 2, witness {3, 2}" in out


def test_coarsenings_command(write, capsys):
    _, out, _ = run(capsys, "--instance", write(R23), "coarsenings", "R")
    assert "2 V-topological coarsenings: padic 2, padic 3; bound 1..2 respected" in out


def test_check_w1_refuted(write, capsys):
    code, out, _ = run(capsys, "--instance", write(R23), "check", "Wn(1)", "R")
    assert code == 0 and out.startswith(REFUTED)
    assert "(3, 2)" in out


def test_vncheck_fail_exit(write, capsys):
    code, out, _ = run(capsys, "--instance", write(R23), "vncheck", "R", "0")
    assert code == 1 and out.startswith(FAIL) and "3/2" in out
    code, out, _ = run(capsys, "--instance", write(R23), "vncheck", "R", "0", "1")
    assert code == 0 and out.startswith(PASS)


@pytest.mark.parametrize(
    "args",
    [
        ["ideals", "R"],
        ["jacobson", "R"],
        ["selectors", "R", "1"],
        ["localize", "R", "1", "3"],
        ["cuberank", "B2"],
        ["semisimple", "2", "2"],
        ["golden", "R"],
        ["pedestal", "R"],
        ["guard", "R", "vec(0, 0)", "1/6"],
        ["bump", "R", "R2"],
        ["coembed", "M", "M"],
        ["wset", "R", "4", "9", "1"],
        ["dilworth", "B2"],
        ["check", "hausdorff", "R"],
    ],
)
def test_commands_pass(write, capsys, args):
    code, out, _ = run(capsys, "--instance", write(R23), *args)
    assert code == 0, out
    assert out.split()[0] == PASS


def test_machine_format(write, capsys):
    _, out, _ = run(capsys, "--instance", write(R23), "--machine", "weight", "R")
    assert out == "CHECK weight:R PASS ring=R weight=2 witness={3,2}\n"


def test_usage_errors(write, capsys):
    path = write(R23)
    assert run(capsys, "--instance", path, "bogus")[0] == 2
    assert run(capsys, "--instance", path, "weight")[0] == 2
    assert run(capsys, "--instance", path, "weight", "Nope")[0] == 2
    assert run(capsys, "--instance", path + ".missing", "weight", "R")[0] == 2
    assert run(capsys, "weight", "R")[0] == 2


def test_bad_instance_exit(write, capsys):
    code, _, err = run(capsys, "--instance", write("field Q\nval v4 = padic 4\n"), "suite")
    assert code == 2 and "4 is not prime" in err


def test_suite_two_primes(write, capsys):
    code, out, _ = run(capsys, "--instance", write(R23), "--machine", "suite")
    lines = out.splitlines()
    assert code == 0
    records = [l for l in lines if l.startswith("CHECK")]
    assert len(records) >= 10
    assert all(l.split()[2] in (PASS, SKIP) for l in records)
    # every SKIP comes from the single-valuation ring
    assert all(":R2" in l.split()[1] for l in records if l.split()[2] == SKIP)
    assert lines[-1].startswith("SUMMARY suite:")


def test_suite_single_valuation():
    rep = verify_suite(parse_instance(SINGLE))
    verdicts = {r.name: r.verdict for r in rep.records}
    assert any("W1" in n or "Wn(1)" in n for n, v in verdicts.items() if v == PASS)
    assert SKIP in verdicts.values()
    assert FAIL not in verdicts.values() and rep.exit_status == 0


def test_suite_empty_instance():
    with pytest.raises(WnError):
        verify_suite(parse_instance("field Q\n"))
    with pytest.raises(WnError):
        verify_suite(parse_instance(""))


def test_determinism(write):
    path = write(R23)
    cmd = [sys.executable, "-m", "wnrings", "--instance", path, "--machine", "suite"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_seed_does_not_change_results(write, capsys):
    path = write(R23)
    outs = {run(capsys, "--instance", path, "--seed", str(s), "golden", "R")[1].split(":")[0] for s in (0, 1, 7)}
    assert outs == {f"{PASS:<16} golden R"}


def test_run_command_api():
    inst = parse_instance(R23)
    rep = run_command(inst, ["weight", "R"])
    assert rep.exit_status == 0 and rep.records[0].fields["weight"] == 2


def test_f5_instance(write, capsys):
    text = "field F5 t\nval a = polyadic t\nval d = degree\nring S = intersect(a, d)\n"
    code, out, _ = run(capsys, "--instance", write(text), "weight", "S")
    assert code == 0 and "weight = 2" in out
