import json
import subprocess
import sys

import pytest

from quatlab import checks, cli
from quatlab.checks import Config, Entry, UnknownSuite


def _failing(cfg):
    return [Entry("demo.fail", "demo", "fail", measured=1, expected=0, error=1.0)]


def _passing(cfg):
    return [Entry("demo.pass", "demo", "pass", measured=0, expected=0, error=0.0)]


@pytest.fixture
def demo_suites(monkeypatch):
    monkeypatch.setitem(checks.SUITES, "demo-fail", [_passing, _failing])
    monkeypatch.setitem(checks.SUITES, "demo-pass", [_passing])


def test_unknown_suite_exit_code(capsys):
    assert cli.main(["--suite", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err
    with pytest.raises(UnknownSuite):
        checks.suite_checks("nope")


def test_failing_entry_exit_code_and_repro(demo_suites, tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["--suite", "demo-fail", "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["summary"] == {"pass": 1, "fail": 1, "skip": 0}
    fail = [e for e in rep["entries"] if e["status"] == "fail"][0]
    assert fail["repro"].startswith("quatlab --suite demo-fail")
    assert cli.main(["--suite", "demo-pass", "--out", str(out)]) == 0


def test_report_schema(demo_suites, tmp_path):
    out = tmp_path / "r.json"
    cli.main(["--suite", "demo-pass", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert set(rep) == {"schemaVersion", "suite", "config", "entries", "summary", "wallTime"}
    assert rep["schemaVersion"] == 1 and rep["wallTime"] is None
    cli.main(["--suite", "demo-pass", "--out", str(out), "--timing"])
    assert json.loads(out.read_text())["wallTime"] >= 0


def test_empty_entries_summary_zeros():
    rep = cli.build_report(Config(suite="x"), [])
    assert rep["summary"] == {"pass": 0, "fail": 0, "skip": 0}
    assert cli.summary_from_markdown(cli.to_markdown(rep)) == rep["summary"]


def test_json_markdown_round_trip(demo_suites):
    cfg = Config(suite="demo-fail")
    rep = cli.build_report(cfg, cli.run_suite(cfg))
    md = cli.to_markdown(json.loads(cli.to_json(rep)))
    assert cli.summary_from_markdown(md) == rep["summary"]
    assert "demo.fail" in md and "reproduce" in md


def test_config_file_and_flag_override(tmp_path, demo_suites):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# demo\nsuite = demo-pass\nmax-2l = 3\ntol = 1e-7\nseed = 4\n")
    args = cli.parser().parse_args(["--config", str(cfgfile), "--seed", "9"])
    cfg = cli.make_config(args)
    assert (cfg.suite, cfg.max_2l, cfg.tol, cfg.seed) == ("demo-pass", 3, 1e-7, 9)


@pytest.mark.parametrize("text", ["bogus = 1\n", "seed = x\n", "no equals sign\n"])
def test_bad_config_file(tmp_path, text, capsys):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text(text)
    assert cli.main(["--config", str(cfgfile)]) == 2


@pytest.mark.parametrize("flags", [["--tol", "0"], ["--max-2l", "-1"], ["--quad-nodes", "2"]])
def test_invalid_values(flags):
    assert cli.main(["--suite", "kernels"] + flags) == 2


def test_unwritable_output(demo_suites, tmp_path):
    assert cli.main(["--suite", "demo-pass", "--out", str(tmp_path / "missing" / "r.json")]) == 2


def test_crashing_check_is_a_failure(monkeypatch):
    def boom(cfg):
        raise RuntimeError("bad")
    monkeypatch.setitem(checks.SUITES, "demo-crash", [boom])
    entries = cli.run_suite(Config(suite="demo-crash"))
    assert entries[0].status == "fail" and "RuntimeError" in entries[0].detail["exception"]


def test_markdown_output(demo_suites, capsys):
    assert cli.main(["--suite", "demo-pass", "--report", "md"]) == 0
    assert cli.summary_from_markdown(capsys.readouterr().out) == {"pass": 1, "fail": 0, "skip": 0}


def test_kernels_suite_writes_convergence_tables(tmp_path):
    out = tmp_path / "k.json"
    assert cli.main(["--suite", "kernels", "--tol", "1e-8", "--out", str(out),
                     "--tables-dir", str(tmp_path / "tables")]) == 0
    csvs = sorted((tmp_path / "tables").glob("*.csv"))
    assert csvs and csvs[0].read_text().startswith("kernel,two_l,")


def test_qlar_suite_passes_at_max_2l_4():
    entries = cli.run_suite(Config(suite="qlar-identities", max_2l=4))
    assert entries and all(e.status == "pass" for e in entries)


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    res = subprocess.run([sys.executable, "-m", "quatlab.cli", "--suite", "qlar-identities",
                          "--max-2l", "1", "--out", str(out)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert json.loads(out.read_text())["summary"]["fail"] == 0
