import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from tridisc.cli import load_schema, run_command

NODES = "[[0.3,0.1],[-0.2,0.4],[0.1,-0.5]]"
GAMMA = "[0.07,0]"
ALPHA = "[1,[0.5,0.5],0.8]"

VALID = {
    "check-alpha": ["check-alpha", "[[1,0],[1,0],[1,0]]"],
    "membership": ["membership", "--alpha", "[1,1,1]", "--point", "[0,0,0]"],
    "graph": ["graph", "--alpha", ALPHA, "--z1", "0.1", "--z2", "[0.2,0.1]"],
    "biholo": ["biholo", "--alpha", ALPHA, "--beta", "[1,1,1]", "--points", "[[0,0,0]]"],
    "normalize-alpha": ["normalize-alpha", "--alpha", "[[0,1],1,1]"],
    "interpolants": ["interpolants", "--nodes", NODES, "--gamma", GAMMA],
    "verify-discriminant": ["verify-discriminant", "--nodes", NODES, "--gamma", GAMMA, "--seed", "7", "--show-poly"],
    "uniqueness-z3": ["uniqueness-z3", "--nodes", NODES, "--gamma", GAMMA, "--z1", "0.1", "--z2", "0.2"],
    "normalize-disc": ["normalize-disc", "--nodes", NODES],
    "nondegenerate": ["nondegenerate", "--nodes", "[[0,0,0],[0.5,0.5,0.5],[-0.5,0,0.2]]", "--targets", "[0,0.1,0.2]"],
    "shilov-classify": ["shilov-classify", "--alpha", "[1,1,1]", "--point", "[[0,0,0],[0,-1,0.5],[0.5,0,0]]"],
    "sample": ["sample", "--alpha", ALPHA, "-n", "5", "--seed", "1"],
    "sample-shilov": ["sample-shilov", "--alpha", ALPHA, "-n", "5", "--seed", "1"],
    "verify-all": ["verify-all", "--seed", "1", "--count", "10"],
}


def run(*argv, stdin=""):
    return run_command(list(argv), stdin=io.StringIO(stdin))


@pytest.mark.parametrize("command", sorted(VALID))
def test_output_validates_against_schema(command):
    code, out, err = run(*VALID[command])
    assert code == 0, err
    jsonschema.validate(json.loads(out), load_schema(command))


@pytest.mark.parametrize("command", sorted(VALID))
def test_byte_identical_output(command):
    assert run(*VALID[command]) == run(*VALID[command])


def test_check_alpha_example():
    code, out, _ = run("check-alpha", "[[1,0],[1,0],[1,0]]")
    assert code == 0 and json.loads(out) == {"triangle": True}


def test_false_exits_one():
    code, out, _ = run("check-alpha", "[1,1,2]")
    assert code == 1 and json.loads(out) == {"triangle": False}


@pytest.mark.parametrize(
    "argv",
    [
        ["check-alpha", "[1,1"],
        ["check-alpha", "[1,1]"],
        ["check-alpha", "[0,0,0]"],
        ["check-alpha", '["a",1,1]'],
        ["graph", "--alpha", "[1,1,1]", "--z1", "0.5", "--z2", "0.5"],
        ["interpolants", "--nodes", "[0,0.25,0.5]", "--gamma", "0.2"],
        ["sample", "--alpha", ALPHA, "-n", "5"],
        ["sample", "--alpha", ALPHA, "-n", "-1", "--seed", "1"],
        ["sample", "--alpha", "[1,1,5]", "-n", "5", "--seed", "1"],
        ["no-such-command"],
        [],
    ],
)
def test_invalid_input_exits_two(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


def test_verify_discriminant_passes():
    code, out, _ = run(*VALID["verify-discriminant"])
    d = json.loads(out)
    assert code == 0 and d["pass"] and d["max_coefficient"] < 1e-9


def test_verify_discriminant_mutation_fails():
    code, out, _ = run("verify-discriminant", "--nodes", NODES, "--gamma", GAMMA, "--seed", "7", "--mutate", "E")
    assert code == 1 and json.loads(out)["max_coefficient"] > 1e-3


def test_csv_samples():
    argv = ["sample", "--alpha", ALPHA, "-n", "100", "--seed", "1", "--format", "csv"]
    code, out, _ = run(*argv)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["re1", "im1", "re2", "im2", "re3", "im3"]
    assert len(rows) == 101
    assert run(*argv)[1] == out


def test_seed_changes_samples():
    a = run("sample", "--alpha", ALPHA, "-n", "3", "--seed", "1")[1]
    b = run("sample", "--alpha", ALPHA, "-n", "3", "--seed", "2")[1]
    assert a != b


def test_global_flags_before_subcommand():
    a = run("--seed", "1", "sample", "--alpha", ALPHA, "-n", "3")
    b = run("sample", "--alpha", ALPHA, "-n", "3", "--seed", "1")
    assert a == b and a[0] == 0


def test_stdin_input():
    code, out, _ = run("check-alpha", "-", stdin="[1, 1, 1]")
    assert code == 0 and json.loads(out)["triangle"]


def test_classification_values():
    _, out, _ = run(*VALID["shilov-classify"])
    assert json.loads(out)["class"] == ["interior", "boundary-non-shilov", "outside-closure"]


def test_membership_false():
    code, out, _ = run("membership", "--alpha", "[1,1,1]", "--point", "[0.5,0,0]")
    assert code == 1 and json.loads(out)["member"] == [False]


def test_nondegenerate_false():
    code, _, _ = run("nondegenerate", "--nodes", "[[0,0,0],[0.5,0.5,0.5],[-0.5,0,0.2]]", "--targets", "[0,0.9,0.2]")
    assert code == 1


def test_verify_all_zero_count():
    code, out, err = run("verify-all", "--seed", "1", "--count", "0")
    assert code == 2
    assert json.loads(out)["totals"]["checks"] == 0
    assert "positive" in err


def test_verify_all_mutation():
    code, out, _ = run("verify-all", "--seed", "1", "--count", "10", "--mutate", "C'", "--check", "pick.discriminant_vanishing")
    assert code == 1 and json.loads(out)["checks"][0]["status"] == "fail"


def test_verify_all_timings_flag():
    _, out, _ = run("verify-all", "--seed", "1", "--count", "5", "--check", "cxcore.mobius_involution", "--timings")
    assert "wall_time" in json.loads(out)["checks"][0]
    _, out, _ = run("verify-all", "--seed", "1", "--count", "5", "--check", "cxcore.mobius_involution")
    assert "wall_time" not in json.loads(out)["checks"][0]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tridisc", "check-alpha", "[1,2,4]"], capture_output=True, text=True
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout) == {"triangle": False}
