import json

import pytest

from gridpilot import tcat
from gridpilot.cli import main
from gridpilot.repl import render_grid, render_status
from gridpilot.session import AuditSession
from gridpilot.tcat import Technology
from gridpilot.workbook import parse_address

from conftest import FIXTURES

RETAIL = str(FIXTURES / "retail.json")


@pytest.fixture
def session_log(retail, tmp_path):
    s = AuditSession(retail, technology=Technology.IVOICE)
    s.issue("jump down", 500)
    s.issue("mark error", 1500)
    s.issue("scan down", 2000)
    s.tick(6000)
    s.issue("stop", 6100)
    s.end(7000)
    path = tmp_path / "one.jsonl"
    tcat.save(s.log, path)
    return path


class TestSimulateCommand:
    def test_report_and_json(self, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({"tasks": [
            {"kind": "check_remote_ref", "intermediate_sheets": 1},
            {"kind": "scan_range", "cells": 10},
            {"kind": "skip_blanks", "gap_cells": 4},
        ]}))
        out_json = tmp_path / "report.json"
        rc = main(["simulate", "--script", str(script), "--json", str(out_json)])
        assert rc == 0
        text = capsys.readouterr().out
        assert "check_remote_ref" in text and "total" in text
        doc = json.loads(out_json.read_text())
        assert doc["tasks"][0]["baseline_s"] == pytest.approx(6.8)

    def test_custom_profile(self, tmp_path, capsys):
        script = tmp_path / "s.json"
        script.write_text('{"tasks": [{"kind": "skip_blanks", "gap_cells": 2}]}')
        profile = tmp_path / "p.json"
        profile.write_text('{"blank_jump_baseline_s": 2.0}')
        rc = main(["simulate", "--script", str(script), "--profile", str(profile)])
        assert rc == 0
        assert "2.00" in capsys.readouterr().out


class TestReplayCommand:
    def test_ok(self, session_log, capsys):
        rc = main(["replay", str(session_log), RETAIL])
        assert rc == 0
        assert "replay ok" in capsys.readouterr().out

    def test_mismatch_reported(self, session_log, tmp_path, capsys):
        lines = session_log.read_text().splitlines()
        tampered = json.loads(lines[-1])
        tampered["cell"] = "Z99"
        tampered["sheet"] = "Opening Stock"
        lines[-1] = json.dumps(tampered, separators=(",", ":"))
        bad = tmp_path / "bad.jsonl"
        bad.write_text("\n".join(lines) + "\n")
        rc = main(["replay", str(bad), RETAIL])
        assert rc == 1
        assert "REPLAY MISMATCH" in capsys.readouterr().out


class TestAnalyzeCommand:
    def test_per_log_table(self, session_log, capsys):
        rc = main(["analyze", str(session_log), "--workbook", RETAIL])
        assert rc == 0
        out = capsys.readouterr().out
        assert "coverage%" in out and "ivoice" in out

    def test_groups_and_rank_sum(self, retail, tmp_path, capsys):
        names = []
        for i in range(6):
            s = AuditSession(retail, session_id=f"p{i}")
            dwell = 400 + 150 * i
            for k in range(1 + i):
                s.issue("jump down", k * 2 * dwell)
                s.issue("mark error", k * 2 * dwell + dwell)
            s.end(20_000)
            path = tmp_path / f"p{i}.jsonl"
            tcat.save(s.log, path)
            names.append(path)
        out_json = tmp_path / "report.json"
        rc = main([
            "analyze", *map(str, names),
            "--workbook", RETAIL,
            "--group-a", names[3].name, names[4].name, names[5].name,
            "--group-b", names[0].name, names[1].name, names[2].name,
            "--json", str(out_json),
        ])
        assert rc == 0
        doc = json.loads(out_json.read_text())
        assert doc["rank_sum"]["n"] == 3
        assert 0 < doc["rank_sum"]["p_one_sided"] <= 1
        assert "rank-sum" in capsys.readouterr().out

    def test_unknown_group_member(self, session_log, capsys):
        rc = main([
            "analyze", str(session_log), "--workbook", RETAIL,
            "--group-a", "nope.jsonl", "--group-b", session_log.name,
        ])
        assert rc == 2

    def test_workbook_error_reported(self, session_log, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        rc = main(["analyze", str(session_log), "--workbook", str(bad)])
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestGridRendering:
    def test_cursor_colors_and_marks(self, cross_sheet_workbook):
        s = AuditSession(cross_sheet_workbook, start=parse_address("Sales and Profit!F6"))
        s.issue("mark error", 100)
        grid = render_grid(s.nav)
        assert "[" in grid and "]" in grid          # cursor bracket
        assert "G99.99" in grid                     # green tag on E6's value
        status = render_status(s.nav)
        assert "pink->Opening Stock!D6" in status   # off-screen chip line
        s.issue("show colours", 200)
        assert "colours:" in render_status(s.nav)

    def test_formats_render_with_prefix(self, retail):
        s = AuditSession(retail, start=parse_address("Sales and Profit!F4"))
        assert "€701.73" in render_grid(s.nav)
