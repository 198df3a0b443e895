from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from limkit.cli import example_names, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_limits_on_cycle(capsys):
    code, out, _ = run(capsys, "limits", "example:cycle")
    assert code == 0
    assert "lim_1 = Z" in out.splitlines()


def test_inverse_limits(capsys):
    code, out, _ = run(capsys, "limits", "--inverse", "example:pushout")
    assert code == 0 and out.splitlines()[0] == "lim^0 = Z"


def test_webb_d8(capsys):
    code, out, _ = run(capsys, "webb", "--group", "D8", "--prime", "2")
    assert code == 0
    assert "acyclic, |K0|=1" in out


def test_webb_group_file(capsys):
    code, out, _ = run(capsys, "webb", "--group", "example:d8", "--prime", "2")
    assert code == 0 and "acyclic, |K0|=1" in out


def test_webb_trivial_sylow(capsys):
    code, _, err = run(capsys, "webb", "--group", "S3", "--prime", "5")
    assert code == 1 and "trivial" in err


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.lk"
    bad.write_text("[poset]\na : 0\na -> nowhere\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "line 3" in err


def test_invalid_diagram(capsys, tmp_path):
    f = tmp_path / "square.lk"
    f.write_text(
        "[poset]\na : 0\nb : 1\nc : 1\nd : 2\na -> b\na -> c\nb -> d\nc -> d\n"
        "[diagram]\ngroup a = free 1\ngroup b = free 1\ngroup c = free 1\ngroup d = free 1\n"
        "map a->b = [[1]]\nmap a->c = [[1]]\nmap b->d = [[1]]\nmap c->d = [[2]]\n"
    )
    code, out, _ = run(capsys, "validate", str(f))
    assert code == 1 and "invalid" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "limits", "/nonexistent/file.lk")
    assert code == 1 and err.startswith("error:")


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "example:pushout")[0] == 2
    assert run(capsys, "spectral", "--variant", "9", "example:pushout")[0] == 2
    assert run(capsys)[0] == 2


def test_json_output(capsys):
    code, out, _ = run(capsys, "--format", "json", "limits", "example:cycle")
    data = json.loads(out)
    assert code == 0 and data["command"] == "limits"
    assert [v["text"] for v in data["values"]] == ["Z", "Z"]
    code, out, _ = run(capsys, "webb", "--group", "Q8", "--prime", "2", "--format", "json")
    assert json.loads(out)["verdict"] == "acyclic"


def test_json_error(capsys):
    code, out, _ = run(capsys, "--format", "json", "validate", "example:nope")
    assert code == 1 and json.loads(out)["error"] == "InvalidInput"


def test_check_flags(capsys):
    assert "pseudo-projective: yes" in run(capsys, "check", "--pseudo-projective", "example:pushout")[1]
    assert "0-condensed: yes" in run(capsys, "check", "--p-condensed=0", "example:delta2")[1]
    assert "1-condensed: no" in run(capsys, "check", "--p-condensed=1", "example:delta2")[1]


def test_spectral_pages(capsys):
    code, out, _ = run(capsys, "spectral", "--variant", "3", "--pages", "2", "example:pushout")
    assert code == 0 and "E_1" in out and "Z/2" in out


def test_cohomology_certificate(capsys):
    code, out, _ = run(capsys, "cohomology", "example:delta2")
    assert code == 0
    assert "certificate: acyclic, |K0|=1" in out


def test_fiber_libman(capsys):
    code, out, _ = run(capsys, "fiber", "example:libman")
    assert code == 0
    assert "H_2(F) = Z^5" in out and "H_3(F) = 0" in out


def test_core_and_euler(capsys):
    assert "core: (empty)" in run(capsys, "core", "example:cone")[1]
    assert "from cohomology: 0" in run(capsys, "euler", "example:cycle")[1]


@pytest.mark.parametrize("name", example_names())
def test_bundled_examples_end_to_end(capsys, name):
    t = time.perf_counter()
    assert run(capsys, "validate", f"example:{name}")[0] == 0
    if name == "d8":
        assert run(capsys, "webb", "--group", f"example:{name}", "--prime", "2")[0] == 0
    elif name in ("libman", "whitehead"):
        assert run(capsys, "fiber", f"example:{name}")[0] == 0
    else:
        for argv in (["limits"], ["limits", "--inverse"], ["core"], ["spectral", "--variant", "1"]):
            assert run(capsys, *argv, f"example:{name}")[0] == 0
    assert time.perf_counter() - t < 60


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "limkit", "examples"], capture_output=True, text=True)
    assert res.returncode == 0 and "cycle" in res.stdout
