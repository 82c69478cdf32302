"""Smoke tests for the cocrash python module and the CLI binary."""

import math
import os
import random
import subprocess
from pathlib import Path

import pytest

import cocrash


def test_spearman_hand_values():
    assert cocrash.spearman([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == 1.0
    assert cocrash.spearman([1, 2, 3, 4, 5], [5, 4, 3, 2, 1]) == -1.0
    assert cocrash.spearman([1, 2, 3, 4, 5], [1, 3, 2, 4, 5]) == 0.9
    with pytest.raises(cocrash.CocrashError):
        cocrash.spearman([1, 1, 1], [1, 2, 3])


def test_average_ranks_ties():
    assert cocrash.average_ranks([10.0, 20.0, 20.0, 30.0]) == [1.0, 2.5, 2.5, 4.0]
    assert cocrash.decreasing_ranks([5.0, 5.0, 1.0]) == [1.5, 1.5, 3.0]


def test_detector_flags_planted_jump():
    rng = random.Random(7)
    returns = [1e-3 * rng.gauss(0.0, 1.0) for _ in range(2000)]
    returns[1200] = -15e-3
    events = cocrash.detect_jumps(returns, min_observations=100)
    hits = [e for e in events if e.timestamp == 1200]
    assert len(hits) == 1
    assert hits[0].direction == -1
    assert abs(hits[0].statistic) > 5.0

    sigma = cocrash.bipower_scale(returns, 1200, 270)
    assert sigma == pytest.approx(1e-3, rel=0.2)


def test_missing_values_pass_through():
    rng = random.Random(8)
    returns = [1e-3 * rng.gauss(0.0, 1.0) for _ in range(1500)]
    for i in range(50, 1450, 37):
        returns[i] = math.nan
    events = cocrash.detect_jumps(returns, min_observations=100)
    assert all(not math.isnan(e.raw_return) for e in events)


def test_crash_table_identities():
    events = [(1, ["AAA"]), (2, ["AAA"]), (3, ["AAA", "BBB"])]
    table = cocrash.CrashTable(events, ["AAA", "BBB", "CCC"])
    assert table.count("AAA", 1) == 2
    assert table.count("AAA", 2) == 1
    assert table.marginal(2) == 2
    assert table.events_at(2) == 1
    assert table.asset_total("AAA") == 3
    by_size, tail = table.size_distribution()
    assert by_size[1] == 2 and by_size[2] == 1
    assert tail[1] == 3 and tail[2] == 1
    assert table.ranks(2) == [1.5, 1.5, 3.0]


def test_null_model_uniform():
    null = cocrash.build_null([1.0, 2.0, 3.0, 4.0], [1.0, 1.0, 1.0, 1.0],
                              n_samples=20000, seed=3, threads=2)
    mean = sum(null.samples) / len(null.samples)
    assert abs(mean) < 0.02
    assert null.quantile_of(1.1) == 1.0
    q = [null.quantile_of(x / 10 - 1.0) for x in range(21)]
    assert q == sorted(q)


def test_weighted_permutation_dominant_leader():
    lead = sum(
        cocrash.weighted_permutation([1000.0, 1.0, 1.0, 1.0], seed)[0] == 0
        for seed in range(500)
    )
    assert lead >= 490


def test_liquidity_helpers():
    events = [(1, ["AAA", "BBB"]), (2, ["CCC", "DDD"])]
    table = cocrash.CrashTable(events, ["AAA", "BBB", "CCC", "DDD"])
    dtv = [4e6, 3e6, 2e6, 1e6]
    assert cocrash.crash_weighted_dtv(table, dtv, 2) == pytest.approx(2.5e6)
    assert cocrash.liquid_crash_fraction(events, table, dtv, 2, 2) == 0.5


def test_end_to_end_simulate_and_analyze(tmp_path: Path):
    plan = tmp_path / "plan.cfg"
    plan.write_text(
        "n_assets = 12\nn_weeks = 5\nbase_vol = 0.001\nstart_date = 2024-01-08\n"
        "systemic_count = 5\nfragile_count = 5\nauto_events_per_size = 6\n"
        "auto_min_size = 1\nauto_max_size = 4\nauto_threshold = 3\nseed = 7\n"
    )
    sim_dir = tmp_path / "sim"
    artifacts = cocrash.simulate(str(plan), str(sim_dir))
    assert "panel_snapshot.csv" in artifacts
    assert "ground_truth.csv" in artifacts

    out_dir = tmp_path / "out"
    produced = cocrash.analyze(
        str(sim_dir / "panel_snapshot.csv"),
        str(out_dir),
        {
            "window_k": "120",
            "min_observations": "200",
            "null_samples": "2000",
            "vol_corr_shuffles": "200",
            "seed": "11",
        },
    )
    for name in [
        "cocrash_events.csv",
        "crash_frequency.csv",
        "size_distribution.csv",
        "rank_corr_curves.csv",
        "steady_state.csv",
        "significance.csv",
        "dtv_by_size.csv",
        "vol_freq_corr.csv",
        "liquid_fraction.csv",
        "manifest.json",
    ]:
        assert name in produced, name
        assert (out_dir / name).exists()


def test_calendar_and_periodicity_roundtrip():
    cal = cocrash.SessionCalendar("09:30", "16:00")
    grid = cal.session_grid("2024-01-08", 5)
    assert len(grid) == 25 * 390
    rng = random.Random(9)
    returns = [1e-3 * rng.gauss(0.0, 1.0) for _ in grid]
    factors = cocrash.estimate_periodicity(grid, returns, cal)
    assert len(factors) == 5 * 390
    mean_sq = sum(f * f for f in factors) / len(factors)
    assert mean_sq == pytest.approx(1.0, abs=1e-9)
    adjusted = cocrash.deseasonalize(grid, returns, factors, cal)
    assert len(adjusted) == len(returns)


CLI = os.environ.get("COCRASH_CLI")


@pytest.mark.skipif(CLI is None, reason="COCRASH_CLI not set")
def test_cli_stage_exit_codes(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"input = {tmp_path / 'missing.csv'}\noutput = {tmp_path / 'out'}\n")
    proc = subprocess.run([CLI, "analyze", "--config", str(cfg)], capture_output=True)
    assert proc.returncode == 10  # ingest stage
    out = tmp_path / "out"
    assert not any(p.name != ".partial" for p in out.iterdir())

    bad_cfg = tmp_path / "bad.cfg"
    bad_cfg.write_text("direction = sideways\n")
    proc = subprocess.run([CLI, "analyze", "--config", str(bad_cfg)], capture_output=True)
    assert proc.returncode == 2  # configuration error


@pytest.mark.skipif(CLI is None, reason="COCRASH_CLI not set")
def test_cli_stage_chain_matches_analyze(tmp_path: Path):
    plan = tmp_path / "plan.cfg"
    plan.write_text(
        "n_assets = 10\nn_weeks = 5\nbase_vol = 0.001\nstart_date = 2024-01-08\n"
        "systemic_count = 4\nfragile_count = 4\nauto_events_per_size = 5\n"
        "auto_min_size = 1\nauto_max_size = 3\nauto_threshold = 2\nseed = 13\n"
    )
    sim = tmp_path / "sim"
    run = [CLI, "simulate", "--plan", str(plan), "--output", str(sim)]
    assert subprocess.run(run, capture_output=True).returncode == 0

    cfg = tmp_path / "run.cfg"
    staged = tmp_path / "staged"
    cfg.write_text(
        f"input = {sim / 'panel_snapshot.csv'}\noutput = {staged}\n"
        "window_k = 120\nmin_observations = 200\nnull_samples = 1000\n"
        "vol_corr_shuffles = 200\nseed = 3\n"
    )
    for stage in ["ingest", "detect", "cojump", "rank", "null", "liquidity"]:
        proc = subprocess.run([CLI, stage, "--config", str(cfg)], capture_output=True)
        assert proc.returncode == 0, (stage, proc.stderr)

    full = tmp_path / "full"
    full_cfg = tmp_path / "full.cfg"
    full_cfg.write_text(cfg.read_text().replace(str(staged), str(full)))
    assert subprocess.run([CLI, "analyze", "--config", str(full_cfg)],
                          capture_output=True).returncode == 0

    for name in ["events.csv", "crash_frequency.csv", "steady_state.csv",
                 "significance.csv", "liquid_fraction.csv"]:
        assert (staged / name).read_bytes() == (full / name).read_bytes(), name

    proc = subprocess.run([CLI, "report", "--output", str(full)], capture_output=True)
    assert proc.returncode == 0
    assert (full / "report.txt").exists()
