import io
import json
import subprocess
import sys

import pytest

from tiltchar.cli import main

A1P3 = ["--type", "A", "--rank", "1", "--p", "3"]


def run(argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    extra = ["--cache-dir", str(cache)] if cache else ["--no-cache"]
    try:
        code = main(extra + argv, out, err)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue(), err.getvalue()


def test_t_numbers_command():
    code, out, _ = run(A1P3 + ["--r", "1", "t-numbers", "--lambda", "2"])
    assert code == 0
    data = json.loads(out)
    assert data["entries"] == {"[2]": 1, "[4]": 1}
    assert data["status"] == "complete"


def test_homdim_gr_command():
    code, out, _ = run(A1P3 + ["homdim-gr", "--lambda", "0", "--target-chi", "5"])
    assert code == 0 and json.loads(out)["value"] == 2


def test_form_and_character_refs():
    code, out, _ = run(A1P3 + ["form", "T:4", "L:12"])
    assert code == 0 and json.loads(out)["value"] == -1
    code, out, _ = run(A1P3 + ["char", "chi:1@1"])
    assert json.loads(out)["entries"] == {"[-3]": 1, "[3]": 1}
    code, out, _ = run(A1P3 + ["expand", "St"])
    assert json.loads(out)["entries"] == {"[2]": 1}


def test_simple_jsf_tilting_commands():
    code, out, _ = run(A1P3 + ["simple", "4"])
    data = json.loads(out)
    assert code == 0 and data["entries"] == {"[0]": -1, "[4]": 1}
    code, out, _ = run(A1P3 + ["jsf", "4"])
    assert json.loads(out)["entries"] == {"[0]": 1}
    code, out, _ = run(A1P3 + ["tilting", "4"])
    assert json.loads(out)["entries"] == {"[0]": 1, "[4]": 1}


def test_tensor_decompose_command():
    code, out, _ = run(A1P3 + ["tensor-decompose", "chi:2", "chi:2"])
    data = json.loads(out)
    assert code == 0 and data["entries"] == {"[2]": 1, "[4]": 1}


def test_other_multiplicity_commands():
    assert json.loads(run(A1P3 + ["s-numbers", "--lambda", "2"])[1])["entries"] == {"[0]": 1, "[2]": 1}
    assert json.loads(run(A1P3 + ["d-numbers", "--lambda", "2"])[1])["entries"] == {"[0]": 1, "[2]": 1}
    assert json.loads(run(A1P3 + ["p-numbers", "--lambda", "2"])[1])["entries"] == {"[0]": 1, "[2]": 2}
    assert json.loads(run(A1P3 + ["homdim-gfq", "--lambda", "0", "--target", "St"])[1])["value"] == 1
    rec = json.loads(run(A1P3 + ["reciprocity", "--lambda", "1", "--sigma", "0", "--mu", "3"])[1])
    assert (rec["lhs"], rec["rhs"]) == (1, 1)
    don = json.loads(run(A1P3 + ["donkin-check", "--lambda", "0", "--bound", "6"])[1])
    assert don["verdict"] == "consistent-with-DTC"


def test_tsv_output():
    code, out, _ = run(A1P3 + ["--output", "tsv", "t-numbers", "--lambda", "2"])
    assert code == 0
    assert out.splitlines() == ["[2]\t1", "[4]\t1"]


def test_deterministic_output(tmp_path):
    argv = ["--type", "A", "--rank", "2", "--p", "3", "expand", "chi:1,1"]
    first = run(argv)[1]
    assert first == run(argv)[1]
    cold = run(A1P3 + ["t-numbers", "--lambda", "5"], tmp_path)
    warm = run(A1P3 + ["t-numbers", "--lambda", "5"], tmp_path)
    assert cold == warm and cold[0] == 0
    assert (tmp_path / "A1_p3_simple.json").exists() or (tmp_path / "A1_p3_tilting.json").exists()


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("TILTCHAR_CACHE_DIR", str(tmp_path))
    out, err = io.StringIO(), io.StringIO()
    assert main(A1P3 + ["tilting", "7"], out, err) == 0
    assert (tmp_path / "A1_p3_tilting.json").exists()


@pytest.mark.parametrize("argv", [
    A1P3 + ["t-numbers", "--lambda", "x"],
    A1P3 + ["t-numbers", "--lambda", "1,2"],
    ["--type", "A", "--rank", "1", "--p", "4", "tilting", "3"],
    ["--type", "Q", "--rank", "1", "--p", "3", "tilting", "3"],
    A1P3 + ["t-numbers", "--lambda", "9"],
    A1P3 + ["form", "Z:1", "chi:0"],
    A1P3 + ["bogus"],
    ["tilting", "3"],
])
def test_malformed_input_exits_one(argv):
    assert run(argv)[0] == 1


def test_bad_table_file_exits_one(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"type": "A", "rank": 1, "p": 3, "kind": "tilting",
                                "entries": [{"weight": [2], "nabla_coeffs": {"[2]": 3}}]}))
    assert run(A1P3 + ["--table", str(path), "tilting", "2"])[0] == 1


def test_undetermined_exits_two():
    code, _, err = run(["--type", "A", "--rank", "4", "--p", "5", "tilting", "8,8,8,8"])
    assert code == 2 and "[8, 8, 8, 8]" in err
    code, out, err = run(["--type", "A", "--rank", "2", "--p", "5", "t-numbers", "--lambda", "1,0"])
    assert code == 2 and json.loads(out)["status"] == "partial"


def test_invariant_violation_exits_three():
    assert run(A1P3 + ["tensor-decompose", "chi:4"])[0] == 3


def test_user_table_enables_higher_rank(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"type": "A", "rank": 2, "p": 3, "kind": "tilting",
                                "entries": [{"weight": [1, 1],
                                             "nabla_coeffs": {"[1, 1]": 1, "[0, 0]": 1}}]}))
    base = ["--type", "A", "--rank", "2", "--p", "3", "--table", str(path)]
    assert run(base + ["tilting", "5,5"])[0] == 2
    code, out, _ = run(base + ["--assume-donkin", "tilting", "5,5"], tmp_path / "cache")
    assert code == 0
    assert not (tmp_path / "cache" / "A2_p3_tilting.json").exists()


def test_verify_suites():
    code, out, _ = run(["verify", "--suite", "form-axioms"])
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = run(["verify", "--suite", "sl5-counterexample"])
    assert code == 0 and "blocked at [8, 8, 8, 8]" in out


def test_verify_a1_core():
    code, out, _ = run(["verify", "--suite", "a1-core"])
    assert code == 0 and "FAIL" not in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tiltchar", "--no-cache"] + A1P3 +
                          ["homdim-gr", "--lambda", "0", "--target-chi", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 2
