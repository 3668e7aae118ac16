import io
import json

from hecke.cli import main, parse_set


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_expand_text_and_json():
    code, text = run("expand", "--q", "7", "l^2-1")
    assert code == 0 and "period: [1,-1], special=true" in text
    code, text = run("expand", "--q", "7", "671", "--json")
    rec = json.loads(text)
    assert rec["status"] == "preperiodic" and rec["preperiod"] == 39 and rec["special"] is True


def test_classify():
    assert run("classify", "--q", "3", "1/2") == (0, "cusp, digits [0,-2]\n")
    code, text = run("classify", "--q", "7", "l^7 * (-lp)^-23")
    assert code == 0 and text.startswith("special hyperbolic")


def test_usage_errors(capsys):
    assert run("expand", "--q", "7", "l +")[0] == 2
    assert "EXPR" in capsys.readouterr().err
    assert run("expand", "--q", "2", "1")[0] == 2
    assert run("census", "--q", "7", "--set", "ints:1..5")[0] == 2
    assert "--set" in capsys.readouterr().err
    assert run("bogus")[0] == 2
    assert run("expand", "--q", "7")[0] == 2
    assert run("expand", "--q", "7", "1", "--max-steps", "0")[0] == 2
    assert run("verify-families", "--q", "7")[0] == 2
    assert run("search-periodic", "--q", "18", "--length", "6", "--paper-constraints")[0] == 2


def test_census_csv(tmp_path):
    out = tmp_path / "c.csv"
    code, _ = run("census", "--q", "7", "--set", "int:665..675", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "label,special,count,representative"
    assert lines[1] == "cusp,,10,665"
    assert lines[2].endswith(",true,1,671")


def test_census_json_stable_across_threads():
    a = run("census", "--q", "7", "--set", "int:660..700", "--json")[1]
    b = run("census", "--q", "7", "--set", "int:660..700", "--json", "--threads", "2")[1]
    assert a == b


def test_set_parsing():
    assert parse_set("units:l,lp:-2..2", 7).size() == 25
    assert parse_set("grid:l^3,l^5:-1..1", 18, "l").size() == 9


def test_search_and_families():
    code, text = run("search-periodic", "--q", "18", "--length", "4", "--paper-constraints")
    assert code == 0 and json.loads(text)["count"] == 5
    code, text = run("search-periodic", "--q", "7", "--length", "2", "--digits=-1,1", "--balanced")
    assert code == 0 and json.loads(text)["count"] == 1
    code, text = run("verify-families", "--q", "18", "--kmax", "1")
    assert code == 0 and len(text.splitlines()) == 13


def test_heights(tmp_path):
    out = tmp_path / "h.csv"
    code, _ = run("heights", "--q", "7", "l", "--steps", "5", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "step,log_height"


def test_spot_check(tmp_path):
    assert run("spot-check", "--q", "14")[0] == 0
    bad = tmp_path / "t.txt"
    bad.write_text("7 | l^2 - 1 | [1, 2]\n")
    code, text = run("spot-check", "--q", "7", "--table", str(bad))
    assert code == 1 and text.startswith("FAIL")
    assert run("spot-check", "--q", "8", "--table", str(bad))[0] == 2
