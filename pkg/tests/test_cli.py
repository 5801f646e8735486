import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

import oracles
from thetacn import report
from thetacn.cli import main
from thetacn.criteria import classify

GOLDEN = Path(__file__).parent / "data" / "scan_5_100.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def usage(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "7", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert list(rec) == [
        "n",
        "factors",
        "n_mod_24",
        "curves",
        "non_pi3_cn",
        "non_2pi3_cn",
        "non_tn",
        "tn_witness",
        "criteria",
    ]
    assert rec["non_tn"] == "certified"
    assert list(rec["curves"]) == ["pi_3", "2pi_3"]
    assert list(rec["curves"]["pi_3"]) == ["s_prime", "s", "rk2_s_prime", "rk2_s", "s_rank"]
    assert rec["curves"]["pi_3"]["s_prime"] == [-21, -3, 1, 7]


@pytest.mark.parametrize("n", [5, 7, 15, 23, 105, 1155])
def test_json_round_trip_is_byte_identical(n):
    text = report.record_json(classify(n))
    assert report.dump_json(json.loads(text)) == text
    line = report.record_jsonl(classify(n))
    assert report.dump_json(json.loads(line), pretty=False) == line


def test_big_integers_become_strings():
    assert report._int(1 << 53) == 1 << 53
    assert report._int((1 << 53) + 1) == str((1 << 53) + 1)
    assert report._int(-(1 << 60)) == str(-(1 << 60))


def test_classify_text_shows_witness(capsys):
    code, out, _ = run(capsys, "classify", "5")
    assert code == 0
    assert "(-1, +-8)" in out


def test_classify_out_of_scope(capsys):
    code, _, err = run(capsys, "classify", "12")
    assert code == 2
    assert "not square-free or even" in err


def test_classify_usage_errors(capsys):
    assert usage(capsys, "classify", "seven") == 64
    assert usage(capsys, "classify") == 64
    assert usage(capsys, "classify", "7", "--format", "dot") == 64
    assert usage(capsys, "frobnicate") == 64
    assert usage(capsys, "classify", "7", "--jobs", "0") == 64


def test_scan_golden_csv(capsys):
    code, out, _ = run(capsys, "scan", "5", "100", "--format", "csv")
    assert code == 0
    assert out == GOLDEN.read_text()
    assert "\n7,7,0,0," in out


def test_golden_ranks_match_oracle():
    rows = list(csv.DictReader(io.StringIO(GOLDEN.read_text())))
    assert [int(r["n"]) for r in rows] == [n for n in range(5, 101, 2) if oracles.sqfree(n) == n]
    for r in rows:
        n = int(r["n"])
        assert int(r["n_mod_24"]) == n % 24
        assert int(r["s_rank_pi_3"]) == oracles.s_rank_oracle(n, 1)
        assert int(r["s_rank_2pi_3"]) == oracles.s_rank_oracle(n, -1)
        assert (r["non_tn"] == "certified") == (r["non_pi3_cn"] == r["non_2pi3_cn"] == "certified")


def test_scan_only_certified_is_a_subset(capsys):
    _, full, _ = run(capsys, "scan", "5", "100", "--format", "csv")
    _, some, _ = run(capsys, "scan", "5", "100", "--format", "csv", "--only-certified")
    full_rows = full.splitlines()
    some_rows = some.splitlines()
    assert some_rows[0] == full_rows[0]
    assert set(some_rows) < set(full_rows)
    assert all("certified," in row for row in some_rows[1:])


def test_scan_empty_range(capsys):
    code, out, _ = run(capsys, "scan", "9", "5")
    assert (code, out) == (0, "")


def test_scan_json_lines(capsys):
    _, out, _ = run(capsys, "scan", "5", "30", "--format", "json")
    lines = out.splitlines()
    assert [json.loads(x)["n"] for x in lines] == [5, 7, 11, 13, 15, 17, 19, 21, 23, 29]


def test_scan_jobs_do_not_change_output(capsys):
    _, a, _ = run(capsys, "scan", "5", "300", "--format", "json")
    _, b, _ = run(capsys, "scan", "5", "300", "--format", "json", "--jobs", "3")
    assert a == b


def test_graph_commands(capsys):
    code, out, _ = run(capsys, "graph", "-21")
    assert code == 0
    assert "7->-1" in out and "7->3" in out and "odd: no" in out
    _, out, _ = run(capsys, "graph", "7")
    assert "odd: yes" in out
    _, out, _ = run(capsys, "graph", "-15", "--format", "dot")
    assert out.count('";') == 3 and "->" not in out
    _, out, _ = run(capsys, "graph", "-21", "--format", "json")
    assert json.loads(out)["arcs"] == [[7, -1], [7, 3]]
    code, _, _ = run(capsys, "graph", "12")
    assert code == 2
    code, _, _ = run(capsys, "graph", "1")
    assert code == 2


def test_selmer_command(capsys):
    code, out, _ = run(capsys, "selmer", "7", "pi3", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"s_prime": [-21, -3, 1, 7], "s": [1], "rk2_s_prime": 2, "rk2_s": 0, "s_rank": 0}
    code, _, _ = run(capsys, "selmer", "7", "pi4")
    assert code == 2


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify", "7", "7")
    assert code == 0
    assert "Cor4_5       applicable=1     agree=1" in out
    code, out, _ = run(capsys, "verify", "9", "5", "--format", "json")
    assert code == 0 and json.loads(out)["criteria"] == []
    code, out, _ = run(capsys, "verify", "5", "30", "--format", "json")
    body = json.loads(out)
    assert code == 1
    assert [d["n"] for d in body["disagreements"]] == [11]


def test_search_point_commands(capsys):
    code, out, _ = run(capsys, "search-point", "5", "2pi3", "--height", "10")
    assert (code, out) == (0, "(-1, 8)\n")
    code, out, _ = run(capsys, "search-point", "7", "pi3", "--height", "50")
    assert (code, out) == (0, "no point up to height 50\n")
    assert usage(capsys, "search-point", "5", "2pi3", "--height", "0") == 64
    code, _, _ = run(capsys, "search-point", "9", "pi3", "--height", "2")
    assert code == 2
    code, out, _ = run(capsys, "search-point", "5", "2pi3", "--height", "2", "--format", "json")
    assert json.loads(out)["point"] == {"theta": "2pi_3", "x": "-1", "y": "8"}


def test_module_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "thetacn", "graph", "-21", "--format", "csv"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert done.stdout == "source,target\n7,-1\n7,3\n"
