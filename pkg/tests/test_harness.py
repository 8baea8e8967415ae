"""Harness behavior: scenario validation, reproducibility, the four attack
cases, dataset replay, benchmarks, and the CLI surface."""

import json
from pathlib import Path

import pytest

from relaysim import cli, harness
from relaysim.scenario import (
    DatasetError,
    ScenarioError,
    default_scenario,
    load_scenario,
    parse_dataset,
    scenario_from_dict,
)

SCEN = default_scenario(seed=5, count=30)


def _small_scenario(seed=5, count=20, rc_validators=4):
    raw = {
        "name": "small",
        "seed": seed,
        "relay_chain": {"chain_id": 100, "validators": rc_validators, "epoch_size": 10},
        "chains": [
            {"chain_id": 1, "validators": 3, "epoch_size": 6},
            {"chain_id": 2, "validators": 3, "epoch_size": 6},
        ],
        "provers": [{"name": "p0"}],
        "workload": {"kind": "synthetic", "count": count},
        "stakes": {"1": 7_000_000, "2": 7_000_000, "100": 7_000_000},
    }
    return scenario_from_dict(raw)


# ---------------------------------------------------------------------------
# scenario parsing


def test_scenario_validation_collects_all_problems():
    raw = {
        "name": "broken",
        "chains": [{"chain_id": 1, "validators": 0, "epoch_size": 0}],
        "provers": [{"name": "x", "profile": "chaotic"}],
        "workload": {"kind": "nope", "amount_min": 10, "amount_max": 1},
        "horizon_rounds": 0,
    }
    with pytest.raises(ScenarioError) as err:
        scenario_from_dict(raw)
    problems = err.value.problems
    assert len(problems) >= 5
    assert any("relay_chain" in p for p in problems)
    assert any("profile" in p for p in problems)
    assert any("horizon" in p for p in problems)


def test_scenario_file_roundtrip(tmp_path):
    raw = {
        "name": "file",
        "seed": 9,
        "relay_chain": {"chain_id": 100, "validators": 4, "epoch_size": 10},
        "chains": [
            {"chain_id": 1, "validators": 3, "epoch_size": 10},
            {"chain_id": 2, "weights": [30, 30, 40], "epoch_size": 10, "vote_threshold": "2/3"},
        ],
    }
    json_path = tmp_path / "scen.json"
    json_path.write_text(json.dumps(raw))
    scenario = load_scenario(json_path)
    assert scenario.chains[1].weights == (30, 30, 40)

    yaml_path = tmp_path / "scen.yaml"
    yaml_path.write_text(
        "name: file\nseed: 9\n"
        "relay_chain: {chain_id: 100, validators: 4, epoch_size: 10}\n"
        "chains:\n  - {chain_id: 1, validators: 3, epoch_size: 10}\n"
        "  - {chain_id: 2, validators: 3, epoch_size: 10}\n"
    )
    assert load_scenario(yaml_path).seed == 9


# ---------------------------------------------------------------------------
# run + reproducibility


def test_run_confirms_all(tmp_path):
    result = harness.run(_small_scenario(), outdir=tmp_path / "a")
    assert result.ok
    assert result.confirmed == result.submitted == 20
    assert (tmp_path / "a" / "trace.jsonl").exists()
    assert (tmp_path / "a" / "summary.json").exists()


def test_same_seed_byte_identical_artifacts(tmp_path):
    harness.run(_small_scenario(seed=11), outdir=tmp_path / "r1")
    harness.run(_small_scenario(seed=11), outdir=tmp_path / "r2")
    for name in ("trace.jsonl", "receipts.jsonl", "records.jsonl", "summary.json"):
        a = (tmp_path / "r1" / name).read_bytes()
        b = (tmp_path / "r2" / name).read_bytes()
        assert a == b, f"{name} differs between identical runs"


def test_different_seed_changes_trace(tmp_path):
    harness.run(_small_scenario(seed=1), outdir=tmp_path / "s1")
    harness.run(_small_scenario(seed=2), outdir=tmp_path / "s2")
    assert (tmp_path / "s1" / "trace.jsonl").read_bytes() != (
        tmp_path / "s2" / "trace.jsonl"
    ).read_bytes()


# ---------------------------------------------------------------------------
# attacks


def test_liveness_one_honest_prover_suffices():
    verdict = harness.attack_liveness(_small_scenario(), honest_provers=1, silent_provers=3, count=10)
    assert verdict.ok and not verdict.observed_breach
    assert verdict.details["confirmed"] == 10


def test_liveness_all_silent_stalls():
    verdict = harness.attack_liveness(_small_scenario(), honest_provers=0, silent_provers=2, count=5)
    assert verdict.ok and verdict.observed_breach
    assert verdict.details["confirmed"] == 0


def test_liveness_withholding_stalls():
    verdict = harness.attack_liveness(
        _small_scenario(), honest_provers=1, withhold={100: 0.4}, count=5
    )
    assert verdict.ok and verdict.observed_breach


def test_liveness_small_withholding_harmless():
    verdict = harness.attack_liveness(
        _small_scenario(), honest_provers=1, withhold={100: 0.25}, count=5
    )
    assert verdict.ok and not verdict.observed_breach


def test_consistency_corpus_rejects_all():
    verdict = harness.attack_consistency(_small_scenario(), forgeries=150, honest_count=10)
    assert verdict.ok and not verdict.observed_breach
    details = verdict.details
    assert details["accepted_at_relay"] == 0
    assert details["forged_final_confirmations"] == 0
    assert details["payload_violations"] == 0
    assert all(count > 0 for count in details["per_strategy"].values())
    assert details["rejection_reasons"].get("epoch-gap", 0) > 0


def test_collusion_bound_tightness():
    scenario = _small_scenario(rc_validators=10)
    breach = harness.attack_collusion(scenario, colluding_fraction=0.7)
    assert breach.ok and breach.observed_breach
    assert breach.details["forged_key_confirmed"]
    safe = harness.attack_collusion(scenario, colluding_fraction=0.6)
    assert safe.ok and not safe.observed_breach
    assert safe.details["prover_refused"]


def test_attack_suite_covers_all_cases():
    verdicts = harness.attack_suite(_small_scenario(), forgeries=50)
    assert {v.case for v in verdicts} == set(harness.ALL_CASES)
    assert all(v.ok for v in verdicts)


def test_fault_isolation_tampering_prover_changes_nothing():
    """Verdicts of honest traffic are identical with and without an injected
    tampering prover (its bundles are all rejected)."""
    control = harness.run(_small_scenario(seed=3, count=10))
    raw = {
        "name": "small",
        "seed": 3,
        "relay_chain": {"chain_id": 100, "validators": 4, "epoch_size": 10},
        "chains": [
            {"chain_id": 1, "validators": 3, "epoch_size": 6},
            {"chain_id": 2, "validators": 3, "epoch_size": 6},
        ],
        "provers": [{"name": "p0"}, {"name": "evil", "profile": "tampering"}],
        "workload": {"kind": "synthetic", "count": 10},
    }
    experiment = harness.run(scenario_from_dict(raw))
    assert control.ok and experiment.ok
    control_keys = control.env.trace.completed_keys()
    experiment_keys = experiment.env.trace.completed_keys()
    assert control_keys == experiment_keys
    for key in control_keys:
        c = control.env.final_confirmations()
        e = experiment.env.final_confirmations()
        assert {k: v.payload_bytes for k, v in c.items()} == {
            k: v.payload_bytes for k, v in e.items()
        }


# ---------------------------------------------------------------------------
# replay


def _write_dataset(path: Path, rows):
    lines = ["src_chain,dst_chain,start_ts,end_ts,token,amount"]
    lines += [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def test_replay_single_row(tmp_path):
    data = tmp_path / "one.csv"
    _write_dataset(data, [(1, 2, 1700000000, 1700000100, "USDC", 500)])
    result, report = harness.replay(data, _small_scenario(), outdir=tmp_path / "out")
    assert result.ok and result.submitted == 1
    assert report.total_txs == 1
    assert report.max_value == 500
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert "degradation" in summary


def test_replay_rejects_bad_rows(tmp_path):
    data = tmp_path / "bad.csv"
    _write_dataset(
        data,
        [
            (1, 2, 1700000100, 1700000000, "USDC", 500),  # end before start
            (1, 2, 1700000000, 1700000100, "USDC", -5),  # negative amount
            (1, 2, "soon", 1700000100, "USDC", 5),  # non-integer timestamp
        ],
    )
    with pytest.raises(DatasetError) as err:
        parse_dataset(data)
    problems = err.value.problems
    assert len(problems) == 3
    assert all("line" in p for p in problems)


def test_replay_rejects_unknown_chains(tmp_path):
    data = tmp_path / "chains.csv"
    _write_dataset(data, [(1, 77, 1, 2, "USDC", 5)])
    with pytest.raises(DatasetError):
        harness.replay(data, _small_scenario())


def test_replay_header_mismatch(tmp_path):
    data = tmp_path / "hdr.csv"
    data.write_text("a,b,c\n")
    with pytest.raises(DatasetError):
        parse_dataset(data)


def test_degradation_report_anchor(tmp_path):
    data = tmp_path / "anchor.csv"
    _write_dataset(data, [(1, 2, 0, 1, "USDC", 100_000), (2, 1, 0, 1, "USDT", 40_000)])
    _, report = harness.replay(data, _small_scenario())
    assert report.max_value == 100_000
    assert abs(report.max_ratio - 0.013) < 0.0015  # 100K against the 7M stake
    assert float(report.headroom) == pytest.approx(4_666_666.67, abs=1.0)


def test_replay_ten_thousand_rows_desk_scale(tmp_path):
    """A 10^4-row synthetic dataset replays completely within a desk-scale
    budget (seconds, not minutes)."""
    import random
    import time

    rng = random.Random(77)
    rows = []
    for i in range(10_000):
        src = rng.randint(1, 2)
        dst = 3 - src
        start = 1_700_000_000 + i
        rows.append((src, dst, start, start + 60, "USDC", rng.randint(1, 100_000)))
    data = tmp_path / "big.csv"
    _write_dataset(data, rows)
    started = time.monotonic()
    result, report = harness.replay(data, _small_scenario())
    elapsed = time.monotonic() - started
    assert result.ok and result.confirmed == 10_000
    assert report.total_txs == 10_000
    assert elapsed < 120, f"replay took {elapsed:.1f}s"


def test_counting_backend_scenario_knob():
    raw = {
        "name": "counting",
        "seed": 2,
        "relay_chain": {"chain_id": 100, "validators": 4, "epoch_size": 10},
        "chains": [
            {"chain_id": 1, "validators": 3, "epoch_size": 6},
            {"chain_id": 2, "validators": 3, "epoch_size": 6},
        ],
        "backend": "counting",
        "workload": {"kind": "synthetic", "count": 5},
    }
    result = harness.run(scenario_from_dict(raw))
    assert result.ok
    assert any(e["context"] == "gate_report" for e in result.env.receipts_log)


# ---------------------------------------------------------------------------
# bench


def test_bench_tables():
    report = harness.bench(_small_scenario())
    gas = report["gas"]
    assert gas["verify_ratio"] <= 0.70
    assert abs(gas["normal_verify"] - 1_000_000) <= 100_000
    assert abs(gas["hybrid_verify"] - 650_000) <= 65_000
    gates = report["gates"]
    assert 0.75 <= gates["split_baseline_ratio_at_8"] <= 0.80
    n3 = next(r for r in report["deployment"] if r["chains"] == 3)
    assert n3["pairwise_lcs"] == n3["relayed_lcs"] == 6
    assert n3["pairwise_gas"] == 60_000_000
    assert n3["relayed_gas"] == 600_000
    text = harness.render_bench(report)
    assert "hybrid/normal verify ratio" in text


# ---------------------------------------------------------------------------
# CLI


def test_cli_plan(capsys):
    assert cli.main(["plan", "--chains", "3"]) == 0
    out = capsys.readouterr().out
    assert "pairwise" in out and "relayed" in out


def test_cli_run_and_exit_codes(tmp_path, capsys):
    scen = tmp_path / "s.json"
    scen.write_text(
        json.dumps(
            {
                "name": "cli",
                "seed": 4,
                "relay_chain": {"chain_id": 100, "validators": 4, "epoch_size": 10},
                "chains": [
                    {"chain_id": 1, "validators": 3, "epoch_size": 10},
                    {"chain_id": 2, "validators": 3, "epoch_size": 10},
                ],
                "workload": {"kind": "synthetic", "count": 5},
            }
        )
    )
    assert cli.main(["--scenario", str(scen), "run", "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "trace.jsonl").exists()
    capsys.readouterr()


def test_cli_invalid_scenario_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad"}))
    assert cli.main(["--scenario", str(bad), "run"]) == 2
    assert "invalid scenario" in capsys.readouterr().err


def test_cli_bench(capsys):
    assert cli.main(["bench"]) == 0
    assert "Deployment complexity" in capsys.readouterr().out
