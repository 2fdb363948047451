"""The ten acceptance criteria, each at its stated tolerance."""

import json
import time

from quatlab import checks, cli
from quatlab.checks import Config

CFG = Config()


def _failed(entries):
    return [e.id for e in entries if e.status != "pass"]


def _summary(entries):
    bad = _failed(entries)
    return f"{len(entries) - len(bad)}/{len(entries)} entries pass" + (f"; failing: {', '.join(bad[:6])}" if bad else "")


def test_01_qlar_sweep(criterion):
    t0 = time.perf_counter()
    entries = checks.check_qlar_sweep(CFG, max_two_l=5)
    dt = time.perf_counter() - t0
    measured = sum(e.measured for e in entries if isinstance(e.measured, int))
    ok = not _failed(entries) and dt < 60
    criterion(1, ok, f"nabla box / right nabla box annihilate the basis for 2l <= 5; {_summary(entries)}; "
                     f"{measured} functions; {dt:.1f} s")
    assert ok


def test_02_dimensions(criterion):
    entries = checks.check_dimensions(CFG, max_deg=5)
    ok = not _failed(entries)
    criterion(2, ok, f"dim U(d) = 3d^2+3d+2, dim BH(d) = 2d^2+2 for |d| <= 5; {_summary(entries)}")
    assert ok


def test_03_action_tables(criterion):
    entries = {e.id: e for e in checks.check_action_tables(CFG, max_two_l=4)}
    judged = [entries["tables.offdiagonal"], entries["tables.sl2.printed"]]
    ok = not _failed(judged)
    corr = entries["tables.sl2.corrected"]
    mism = entries["tables.sl2.printed"].error
    criterion(3, ok, f"printed tables for 2l <= 4, zero mismatches required; {_summary(judged)}; "
                     f"printed sl(2) mismatches: {mism:g}; with alpha restored in pi'_r(F2): {corr.status}")
    assert ok, ("the printed pi'_r(F2) row omits alpha in its first component; "
                "see tables.sl2.corrected for the row with alpha restored")


def test_04_pairings(criterion):
    entries = checks.check_pairings(CFG, tol=1e-9)
    ok = not _failed(entries)
    worst = max((e.error or 0) for e in entries)
    criterion(4, ok, f"structural constants vs quadrature and R in {{1/2, 1, 2}} at 1e-9; "
                     f"{_summary(entries)}; worst {worst:.2e}")
    assert ok


def test_05_invariance(criterion):
    inv = checks.check_invariance(CFG, max_two_l=3)
    signs = checks.check_inversion_signs(CFG)
    entries = inv + signs
    ok = not _failed(entries)
    pairs = sum(e.measured for e in inv if isinstance(e.measured, int))
    criterion(5, ok, f"exact invariance over 2l <= 3 ({pairs} pair checks), inversion sign -1 (QR) / +1 (BH); "
                     f"{_summary(entries)}")
    assert ok


def test_06_kernels(criterion):
    entries = checks.check_kernels(CFG, cutoff=40, samples=20, tol=1e-8)
    ok = not _failed(entries)
    worst = max((e.error or 0) for e in entries if not e.id.startswith("kernels.gradient"))
    criterion(6, ok, f"2L = 40 series vs closed forms at 1e-8, gradient relation at 1e-6; "
                     f"{_summary(entries)}; worst series error {worst:.2e}")
    assert ok


def test_07_reproducing(criterion):
    t0 = time.perf_counter()
    entries = checks.check_reproducing(CFG, tol=1e-6, nodes=24)
    dt = time.perf_counter() - t0
    ok = not _failed(entries) and dt < 300
    criterion(7, ok, f"reproducing formulas inside and outside at 1e-6 with 24 nodes/angle; "
                     f"{_summary(entries)}; {dt:.1f} s")
    assert ok


def test_08_intertwiners(criterion):
    entries = checks.check_intertwiners(CFG, tol=1e-6, nodes=24)
    ok = not _failed(entries)
    criterion(8, ok, f"jPrime targets at 1e-6, Mx partition exact on 20 functions, Mx+ integral at 1e-6; "
                     f"{_summary(entries)}")
    assert ok


def test_09_clifford(criterion):
    entries = checks.check_clifford(CFG, tol=1e-6)
    ok = not _failed(entries)
    criterion(9, ok, f"anticommutators exact, defects vs truncated/closed kernels, correlations at 1e-9; "
                     f"{_summary(entries)}")
    assert ok


def test_10_determinism(criterion, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = (cli.main(["--suite", "all", "--seed", "3", "--out", str(a)]),
             cli.main(["--suite", "all", "--seed", "3", "--jobs", "4", "--out", str(b)]))
    same = a.read_bytes() == b.read_bytes()
    n = len(json.loads(a.read_text())["entries"])
    criterion(10, same, f"two runs of suite 'all' ({n} entries; serial and 4 workers) are "
                        f"{'byte-identical' if same else 'different'}; exit codes {codes}")
    assert same
