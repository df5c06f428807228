import io
import json
import subprocess
import sys

import pytest

from conftest import T34, T34_KH, T35, TREFOIL
from khpages.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_kh_text():
    assert call("kh", T34) == (0, T34_KH + "\n")


def test_kh_json_round_trip():
    code, text = call("kh", "--json", T35)
    assert code == 0
    obj = json.loads(text)
    assert json.dumps(obj, sort_keys=True) + "\n" == text
    assert obj["delta"] == ["3", "4"] and obj["delta_width"] == 2


def test_deterministic():
    assert call("pages", "--json", "--assume-delta-shift", "--einf-rank", "1", T35) == \
        call("pages", "--json", "--assume-delta-shift", "--einf-rank", "1", T35)


def test_pages_t35():
    code, text = call("pages", "--assume-delta-shift", "--einf-rank", "1", T35)
    assert code == 0
    lines = text.splitlines()
    assert "status: unique" in lines
    assert "E^3 = h^0q^8 + h^3q^14 + h^6q^18" in lines
    assert "E^4 = E^inf = h^0q^8" in lines


def test_pages_json_records_assumptions():
    code, text = call("pages", "--json", "--assume-delta-shift", "--einf-rank", "3", T34)
    obj = json.loads(text)
    assert obj["assumptions"]["delta_shift"] is True
    assert obj["assumptions"]["survivors"] == [[0, 6]]
    assert obj["pages"][-1]["poincare"] == "h^0q^6 + h^3q^12 + h^5q^16"


def test_pages_lspace_uses_determinant():
    code, text = call("pages", "--json", "--assume-delta-shift", "--lspace", T34)
    assert code == 0 and json.loads(text)["assumptions"]["einf_rank"] == 3


def test_pages_ambiguous_without_psi_survivor():
    code, text = call("pages", "--assume-delta-shift", "--einf-rank", "1",
                      "--no-psi-survivor", T35)
    assert code == 0 and "status: ambiguous" in text


def test_pages_explicit_survivor():
    code, text = call("pages", "--json", "--assume-delta-shift", "--einf-rank", "1",
                      "--no-psi-survivor", "--survivor", "0,8", T35)
    assert json.loads(text)["status"] == "unique"


@pytest.mark.parametrize("argv", [
    ("pages", T35),
    ("pages", "--assume-delta-shift", T35),
    ("pages", "--assume-delta-shift", "--einf-rank", "1", "--lspace", T35),
    ("kh", "bogus-input"),
    ("kh", "--json", "bogus-input"),
    ("frobnicate", T35),
    ("kh", "--nope", T35),
    ("kh", "--marked-edge", "999", TREFOIL),
])
def test_usage_errors(argv, capsys):
    code, text = call(*argv)
    assert code == 2 and text == ""


def test_domain_errors(capsys):
    code, text = call("psi", '{"pd": [[1,4,2,5,"-"],[3,6,4,1,"-"],[5,2,6,3,"-"]]}')
    assert code == 1 and text == ""
    assert "braid input" in capsys.readouterr().err
    code, _ = call("det", "s=3; w=1,1")
    assert code == 1
    code, _ = call("pages", "--assume-delta-shift", "--einf-rank", "1", "--max-page", "2", T35)
    assert code == 1


def test_det_json():
    code, text = call("det", "--json", T34)
    assert json.loads(text) == {"determinant": 3, "goeritz": 3, "jones_at_i": 3}


def test_jones():
    assert call("jones", TREFOIL) == (0, "q^2 + q^6 - q^8\n")


def test_psi_text_and_json():
    code, text = call("psi", "--assume-delta-shift", "--einf-rank", "1", T35)
    assert code == 0 and "E^4: nonzero" in text
    code, text = call("psi", "--json", "s=2; w=-1,-1,-1")
    obj = json.loads(text)
    assert obj["bigrading"] == [0, -4] and obj["fillability_obstruction"] is True


def test_vk():
    code, text = call("vk", "--assume-delta-shift", "--einf-rank", "1", T35)
    assert text.splitlines()[-1] == "V^4 = q^4"
    assert call("vk", TREFOIL) == (0, "V^2 = q + q^3 - q^4\n")


def test_input_from_file(tmp_path):
    f = tmp_path / "knot.json"
    f.write_text('{"pd": [[4,2,5,1,"+"],[8,6,1,5,"+"],[6,3,7,4,"-"],[2,7,3,8,"-"]]}')
    assert call("det", str(f)) == (0, "5\n")


def test_threads_env(monkeypatch):
    monkeypatch.setenv("KHPAGES_THREADS", "2")
    assert call("kh", T34) == (0, T34_KH + "\n")


def test_check_subcommand():
    code, text = call("check", "--json")
    assert code == 0
    assert all(r["passed"] for r in json.loads(text))


def test_console_entry_exit_codes():
    proc = subprocess.run([sys.executable, "-m", "khpages.cli", "kh", "--json", "bogus-input"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "" and "usage" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "khpages.cli", "kh", TREFOIL],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "h^0q^2 + h^2q^6 + h^3q^8\n"
