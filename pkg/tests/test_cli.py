import json
import os

import pytest

from otb.cli import run

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poincare_text(capsys):
    code, out, _ = _capture(capsys, ["poincare", "--builtin", "9_3_2"])
    assert code == 0
    assert out.strip() == "1+9t+27t^2+19t^3"


def test_betti_text_table_layout(capsys):
    code, out, _ = _capture(capsys, ["betti", "--builtin", "braid-a3"])
    assert code == 0
    assert [l.split() for l in out.strip().splitlines()] == [
        ["total", "1", "4", "5", "2"],
        ["0:", "1", "-", "-", "-"],
        ["1:", "-", "4", "2", "-"],
        ["2:", "-", "-", "3", "2"],
    ]


def test_unknown_builtin_usage_error(capsys):
    code, _, err = _capture(capsys, ["flats", "--builtin", "nope"])
    assert code == 1


def test_missing_source_usage_error(capsys):
    code, _, err = _capture(capsys, ["flats"])
    assert code == 1
    assert "usage error" in err


def test_missing_subcommand(capsys):
    assert _capture(capsys, [])[0] == 1


def test_net_search_empty_exits_zero(capsys):
    code, out, _ = _capture(capsys, ["net-search", "--builtin", "9_3_2",
                                     "--k", "3"])
    assert code == 0
    assert "0 certificate(s)" in out


def test_net_search_json(capsys):
    code, out, _ = _capture(capsys, ["net-search", "--builtin", "braid-a3",
                                     "--k", "3", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    certs = payload["results"]["certificates"]
    assert len(certs) == 1
    assert certs[0]["blocks"] == [[1, 6], [2, 5], [3, 4]]
    assert certs[0]["kind"] == "net"
    assert certs[0]["neighborly"] is True


def test_scroll_check_exit_zero(capsys):
    code, out, _ = _capture(capsys, ["scroll-check", "--builtin", "braid-a3"])
    assert code == 0
    assert "EN beta1=2 b23=2" in out


def test_jacobian_check(capsys):
    code, out, _ = _capture(capsys, ["jacobian-check", "--builtin", "9_3_1"])
    assert code == 0
    assert "True" in out


def test_gradient_degree_json(capsys):
    code, out, _ = _capture(capsys, ["gradient-degree", "--builtin",
                                     "braid-a3", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["gradient_degree"] == 6
    assert payload["results"]["agree"] is True


def test_ot_hilbert(capsys):
    code, out, _ = _capture(capsys, ["ot-hilbert", "--builtin", "braid-a3",
                                     "--upto", "4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    res = payload["results"]
    assert res["agree"] is True
    assert res["series_coefficients"] == [1, 6, 17, 34, 57]


def test_h0_subcommand(capsys):
    arr_mults = ",".join(["1"] * 7)
    code, out, _ = _capture(capsys, ["h0", "--builtin", "braid-a3",
                                     "--m", "3", "--mults", arr_mults])
    assert code == 0
    assert out.startswith("h0 = 3")


def test_h0_needs_correct_mult_count(capsys):
    code, _, err = _capture(capsys, ["h0", "--builtin", "braid-a3",
                                     "--m", "3", "--mults", "1,1"])
    assert code == 1
    assert "7 comma-separated" in err


def test_file_input(tmp_path, capsys):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(
        {"name": "tri+1", "forms": [[1, 0, 0], [0, 1, 0], [0, 0, 1],
                                    ["1/2", 1, 1]]}))
    code, out, _ = _capture(capsys, ["info", "--arrangement", str(path)])
    assert code == 0
    assert "4 lines" in out


def test_file_input_duplicate_line(tmp_path, capsys):
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(
        {"forms": [[1, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    code, _, err = _capture(capsys, ["info", "--arrangement", str(path)])
    assert code == 1
    assert "duplicate line" in err


def test_flats_json_shape(capsys):
    code, out, _ = _capture(capsys, ["flats", "--builtin", "ex-2-4",
                                     "--format", "json"])
    payload = json.loads(out)
    flats = payload["results"]["flats"]
    assert len(flats) == 6
    assert all(f["mu"] == 1 for f in flats)


def test_repeat_invocations_byte_identical(capsys):
    a = _capture(capsys, ["resonance", "--builtin", "braid-a3",
                          "--format", "json"])
    b = _capture(capsys, ["resonance", "--builtin", "braid-a3",
                          "--format", "json"])
    assert a == b


@pytest.mark.parametrize("name", ["braid-a3", "ex-2-4", "9_3_1", "9_3_2",
                                  "b3"])
def test_report_matches_golden(name, capsys):
    code, out, _ = _capture(capsys, ["report", "--all", "--builtin", name])
    assert code == 0
    with open(os.path.join(GOLDEN_DIR, "%s.json" % name),
              encoding="utf-8") as fh:
        golden = fh.read()
    assert out == golden
