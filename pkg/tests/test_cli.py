import csv
import io as stdio
import json

import pytest

from cfhelly import cli
from cfhelly.campaign import CampaignReport
from cfhelly.io import emit_complex, load_complex

PATH_CX = {"maximal_faces": [[0, 2], [1, 2]], "n_per_color": [2, 2]}
CYCLE = {"maximal_faces": [[0, 2], [0, 3], [1, 2], [1, 3]], "n_per_color": [2, 2]}


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_collapse_command(tmp_path, capsys):
    code, out = run(capsys, "collapse", "--complex", write(tmp_path, "a.json", PATH_CX), "--d", "1")
    assert code == 0
    steps = json.loads(out)["steps"]
    assert steps[-1]["L"] == [] and all(set(s) == {"L", "M"} for s in steps)
    code, out = run(capsys, "collapse", "--complex", write(tmp_path, "c.json", CYCLE), "--d", "1")
    assert code == 0 and json.loads(out) == {"result": "not_collapsible"}


def test_budget_exhaustion_exit_code(tmp_path, capsys):
    sphere = {"n_per_color": [7], "maximal_faces": [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)] + [[0, 6]]}
    code, _ = run(capsys, "collapse", "--complex", write(tmp_path, "s.json", sphere), "--d", "2", "--budget", "1")
    assert code == 3


def test_bad_input_exit_code(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"n_per_color": [1], "maximal_faces": [[3]]})
    assert cli.main(["collapse", "--complex", bad, "--d", "1"]) == 1


def test_bounds_table_shape(capsys):
    code, out = run(capsys, "bounds", "table", "--d", "1..3", "--k", "1,1", "--grid", "0.1:1.0:0.1", "--samples", "2000")
    rows = list(csv.reader(stdio.StringIO(out)))
    assert code == 0 and out.endswith("\n")
    assert rows[0] == ["params", "p", "density", "alpha_closed", "alpha_mc", "stderr"]
    assert len(rows) == 1 + 3 * 10


def test_bounds_verify(tmp_path, capsys):
    code, out = run(capsys, "bounds", "verify", "--complex", write(tmp_path, "a.json", PATH_CX), "--d", "1", "--k", "1,1")
    data = json.loads(out)
    assert code == 0 and data["collapsible"] and data["tckp"]["holds"] and data["cfh"]["holds"] and data["kim"]["holds"]
    # the 4-cycle breaks the bound but is not 1-collapsible, so this is not a violation
    code, out = run(capsys, "bounds", "verify", "--complex", write(tmp_path, "c.json", CYCLE), "--d", "1", "--k", "1,1")
    assert code == 0 and not json.loads(out)["tckp"]["holds"]


def test_extremal_command(tmp_path, capsys):
    target = tmp_path / "ext.json"
    code, out = run(capsys, "extremal", "--d", "1", "--c", "2", "--m", "4", "--beta-prime", "0.5,0.5", "--k", "1,1", "--complex-out", str(target))
    data = json.loads(out)
    assert code == 0 and data["tightness"]["f_k"] == 12 and data["r"] == [2, 2]
    assert load_complex(target).colorful_f((1, 1)) == 12


def test_nerve_command(tmp_path, capsys):
    family = {
        "d": 2,
        "blocks": [
            [{"kind": "hpoly", "constraints": [{"a": ["1", "0"], "b": "0", "rel": "="}]}, {"kind": "whole"}],
            [{"kind": "hpoly", "constraints": [{"a": ["0", "1"], "b": "0", "rel": "="}]},
             {"kind": "hpoly", "constraints": [{"a": ["1", "1"], "b": "1", "rel": "="}]}],
        ],
    }
    f = write(tmp_path, "fam.json", family)
    code, out = run(capsys, "nerve", "--family", f, "--max-face-size", "4")
    code2, out2 = run(capsys, "nerve", "--family", f, "--max-face-size", "4", "--no-helly-shortcut")
    assert code == code2 == 0 and out == out2
    # vertex 1 is the whole plane; the three lines meet pairwise but not all together
    assert sorted(json.loads(out)["maximal_faces"]) == [[0, 1, 2], [0, 1, 3], [1, 2, 3]]


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_certify_command(tmp_path, capsys, mode):
    code, out = run(capsys, "--seed", "4", "certify", "--complex", write(tmp_path, "a.json", PATH_CX), "--d", "1", "--k", "1,1", "--mode", mode)
    data = json.loads(out)
    assert code == 0 and data["dim_intersection"] == 0 and data["mode"] == mode and len(data["basis_digest"]) == 16


def test_campaign_command(tmp_path, capsys):
    out_path, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    argv = ["--out", str(out_path), "campaign", "--vertices", "2..4", "--d", "1,2", "--csv", str(csv_path)]
    assert cli.main(argv) == 0
    first = json.loads(out_path.read_text())
    assert first["violations"] == [] and csv_path.read_text().startswith("n_per_color,")
    assert cli.main(argv) == 0
    second = json.loads(out_path.read_text())
    first.pop("elapsed_seconds"), second.pop("elapsed_seconds")
    assert first == second


def test_campaign_violation_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_campaign", lambda cfg, threads=1: CampaignReport(config={}, violations=[{"check": "fake"}]))
    assert cli.main(["campaign", "--count", "0"]) == 2


def test_zero_instance_campaign_succeeds(capsys):
    code, out = run(capsys, "campaign", "--mode", "random", "--count", "0")
    assert code == 0 and json.loads(out)["instances"] == 0


def test_complex_round_trip_is_byte_identical(tmp_path):
    text = json.dumps(PATH_CX, sort_keys=True, indent=2) + "\n"
    src = tmp_path / "in.json"
    src.write_text(text, encoding="utf-8")
    dst = tmp_path / "out.json"
    emit_complex(load_complex(src), dst)
    assert dst.read_text(encoding="utf-8") == text


def test_help_lists_every_subcommand(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--help"])
    out = capsys.readouterr().out
    for name in ("collapse", "bounds", "extremal", "nerve", "certify", "campaign", "--seed", "--threads", "--out"):
        assert name in out
