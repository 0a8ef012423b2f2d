"""Command line behavior pinned against golden output files."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from bflottery.cli import main
from bflottery.service import Api
from bflottery.store import WorkspaceStore

GOLDEN = Path(__file__).parent / "golden"

PAYOFF = {"id": "payoff", "labels": ["$100", "$0"]}
ORDER = {"frame": PAYOFF, "ranking": ["$100", "$0"]}
BET_ON_RED = {
    "outcomes": ORDER,
    "bpa": {"focal": [{"set": ["$100"], "mass": 1 / 3}, {"set": ["$0"], "mass": 2 / 3}]},
}
BET_ON_BLACK = {
    "outcomes": ORDER,
    "bpa": {
        "focal": [{"set": ["$0"], "mass": 1 / 3}, {"set": ["$100", "$0"], "mass": 2 / 3}]
    },
}
ATTITUDE = {
    "outcomes": ORDER,
    "singleton_utilities": {"$100": 1.0, "$0": 0.0},
    "model": {
        "kind": "table",
        "entries": [{"set": ["$100", "$0"], "u": 0.2, "v": 0.6, "w": 0.2}],
    },
}


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_evaluate_matches_golden(capsys):
    code, out, _ = run(
        capsys,
        "evaluate",
        "--lottery", json.dumps(BET_ON_BLACK),
        "--assessment", json.dumps(ATTITUDE),
        "--cross-check",
    )
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / "evaluate_black.json").read_text())


def test_compare_matches_golden(capsys):
    code, out, _ = run(
        capsys,
        "compare",
        "--a", json.dumps(BET_ON_RED),
        "--b", json.dumps(BET_ON_BLACK),
        "--assessment", json.dumps(ATTITUDE),
    )
    assert code == 0
    got = json.loads(out)
    assert got == json.loads((GOLDEN / "compare_red_black.json").read_text())
    assert got["verdict"] == "strictly_preferred"


def test_example_matches_golden(capsys):
    code, out, _ = run(capsys, "examples", "run", "two-urn-compound")
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / "example_two_urn.json").read_text())


def test_synthetic_elicit_matches_golden(capsys):
    code, out, _ = run(
        capsys,
        "elicit", "--target", "b,y", "--answer-u", "0.2", "--answer-v", "0.7",
    )
    assert code == 0
    got = json.loads(out)
    assert got == json.loads((GOLDEN / "elicit_synthetic.json").read_text())
    assert got["queries_used"] <= 18
    assert abs(got["recovered"]["u"] - 0.2) <= 0.005


def test_every_bundled_example_passes_its_checks(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    names = [row["name"] for row in json.loads(out)["examples"]]
    assert len(names) == 5
    for name in names:
        code, out, _ = run(capsys, "examples", "run", name)
        assert code == 0, name
        doc = json.loads(out)
        assert doc["ok"] is True
        assert all(check["ok"] for check in doc["checks"])


def test_example_size_knob(capsys):
    code, out, _ = run(capsys, "examples", "run", "one-red-ball", "--n", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["threshold"] == pytest.approx(1 / 3)
    # u=0.2 is now below the 1/3 tipping point, so red is not beaten
    assert doc["results"]["verdict"]["bet on black vs bet on red"] != "strictly_preferred"
    assert doc["ok"] is True


def test_csv_output(capsys):
    code, out, _ = run(
        capsys,
        "evaluate",
        "--lottery", json.dumps(BET_ON_BLACK),
        "--assessment", json.dumps(ATTITUDE),
        "--format", "csv",
    )
    assert code == 0
    rows = dict(
        (row[0], row[1]) for row in csv.reader(io.StringIO(out)) if len(row) == 2
    )
    assert rows["field"] == "value"
    assert float(rows["interval.lower"]) == pytest.approx(2 / 15)
    assert rows["jaffray"] == ""
    assert rows["schema"] == "bf/1"


def test_stored_names_resolve_through_the_workspace(capsys, tmp_path):
    store_path = tmp_path / "ws.json"
    api = Api(WorkspaceStore(store_path))
    api.handle("POST", "/lotteries", {"id": "black", "lottery": BET_ON_BLACK})
    api.handle("POST", "/assessments", {"id": "bettor", "assessment": ATTITUDE})
    code, out, _ = run(
        capsys,
        "evaluate", "--lottery", "black", "--assessment", "bettor",
        "--store", str(store_path),
    )
    assert code == 0
    assert json.loads(out)["interval"]["lower"] == pytest.approx(2 / 15)


def test_file_and_stdin_payloads(capsys, tmp_path, monkeypatch):
    lot_file = tmp_path / "lot.json"
    lot_file.write_text(json.dumps(BET_ON_BLACK))
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(ATTITUDE)))
    code, out, _ = run(
        capsys, "evaluate", "--lottery", str(lot_file), "--assessment", "-"
    )
    assert code == 0
    assert json.loads(out)["interval"]["upper"] == pytest.approx(4 / 15)


def test_errors_are_one_line_and_nonzero(capsys):
    code, out, err = run(
        capsys,
        "evaluate", "--lottery", "{broken json", "--assessment", json.dumps(ATTITUDE),
    )
    assert code == 1 and out == ""
    assert err.startswith("error: ") and err.count("\n") == 1

    code, _, err = run(
        capsys,
        "evaluate", "--lottery", "no-such-name", "--assessment", json.dumps(ATTITUDE),
    )
    assert code == 1 and "no lottery named" in err

    code, _, err = run(capsys, "examples", "run", "never-heard-of-it")
    assert code == 1 and "unknown example" in err

    code, _, err = run(capsys, "examples", "run")
    assert code == 2


def test_interactive_elicit_reads_prompts(capsys, monkeypatch):
    # scripted attitude of (0.5, 0.5): prefer the target below 0.5, the
    # probe above, never incomparable; one junk line exercises the re-ask
    lines = []

    def scripted(prompt=""):
        # a scripted attitude of (0.5, 0.5) with one junk line first
        if not lines:
            lines.append("junk")
            return "x"
        current = scripted.query[0]
        return "t" if current <= 0.5 else "p"

    scripted.query = [0.0]

    import bflottery.cli as cli_mod

    real_next = cli_mod.ElicitationSession.next_query

    def tracking_next(self):
        q = real_next(self)
        if q is not None:
            scripted.query[0] = q.probe_u
        return q

    monkeypatch.setattr(cli_mod.ElicitationSession, "next_query", tracking_next)
    monkeypatch.setattr("builtins.input", scripted)
    code = main(["elicit", "--target", "b", "--epsilon", "0.05"])
    captured = capsys.readouterr()
    assert code == 0
    doc = json.loads(captured.out)
    assert abs(doc["recovered"]["u"] - 0.5) <= 0.05
    assert "not one of t/p/i/q" in captured.err

    def quit_now(prompt=""):
        return "q"

    monkeypatch.setattr("builtins.input", quit_now)
    code = main(["elicit", "--target", "b"])
    captured = capsys.readouterr()
    assert code == 1
    assert "stopped" in captured.err
