import json
import shutil
import subprocess

import pytest

from setcalc.cli import SUBCOMMANDS, run_captured
from setcalc.goldens import library_value, load_goldens, render, run_case

GOLDENS = load_goldens()


@pytest.mark.parametrize("case", GOLDENS, ids=[" ".join(c["argv"])[:48] for c in GOLDENS])
def test_golden_case(case):
    code, out, err, result = run_case(case)
    assert code == case["exit"]
    assert out == case["stdout"]
    assert err == case["stderr"]
    if "library" in case:
        value = render(library_value(case["library"]))
        assert value == case["value"]
        assert result == value


def test_every_subcommand_has_a_golden():
    covered = {c["argv"][0] for c in GOLDENS}
    assert set(SUBCOMMANDS) <= covered


@pytest.mark.parametrize(
    "argv, stdout",
    [
        (["pair", "{}", "{{}}"], "{1}\n"),
        (["collapse", "\n1\n1/1\n2\n"], "2\n"),
        (["bisim", "1", "\n2\n"], "equal\n"),
    ],
)
def test_documented_examples(argv, stdout):
    assert run_captured(argv) == (0, stdout, "")


def test_json_envelope_key_order():
    code, out, _ = run_captured(["--json", "dom", "{{1}}"])
    doc = json.loads(out)
    assert code == 0 and list(doc) == ["command", "ok", "result", "error"]
    assert doc["command"] == "dom" and doc["ok"] and doc["error"] is None


def test_domain_error_envelope():
    code, out, err = run_captured(["--json", "encode", "0", "--labels", "1"])
    doc = json.loads(out)
    assert code == 1 and not doc["ok"] and err == ""
    assert list(doc["error"]) == ["name", "message"]
    assert doc["error"]["name"] == "NotOntoTransitiveClosure"


def test_usage_error_names_the_problem():
    code, out, err = run_captured(["eval", "x in x", "--rank", "three"])
    assert code == 2 and out == ""
    assert "usage error" in err and "--rank" in err


@pytest.mark.parametrize(
    "argv, name",
    [
        (["dom", "{1,"], "SetSyntaxError"),
        (["eval", "x in x", "--rank", "9"], "RankBoundExceeded"),
    ],
)
def test_bad_values_are_named_domain_errors(argv, name):
    code, out, err = run_captured(argv)
    assert code == 1 and out == ""
    assert err.startswith(f"error: {name}: ")


def test_positional_file_and_flag_file_agree():
    files = {"a.set": "{1,2}\n"}
    by_path = run_captured(["dom", "a.set"], files)
    by_flag = run_captured(["dom", "--a-file", "a.set"], files) if "--a-file" in _help("dom") else by_path
    assert by_path == by_flag == run_captured(["dom", "{1,2}"])


def _help(cmd):
    return run_captured([cmd, "--help"])[1]


@pytest.mark.skipif(shutil.which("setcalc") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["setcalc", "pair", "{}", "{{}}"], capture_output=True, text=True, check=False)
    assert (proc.returncode, proc.stdout) == (0, "{1}\n")
