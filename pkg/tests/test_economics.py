"""Stake boundaries, path security, and the degradation report."""

from fractions import Fraction

import pytest

from relaysim.economics import (
    StakeLedger,
    check_tx_safety,
    degradation_report,
    network_security,
)


def _ledger(chain_id, tau_target):
    # tau = 2S/3, so S = 3*tau/2
    return StakeLedger.from_total(chain_id, int(tau_target * 3 // 2))


def test_network_security_is_min():
    ledgers = [_ledger(1, 100), _ledger(2, 60), _ledger(3, 250)]
    assert network_security(ledgers) == min(l.tau for l in ledgers)
    assert network_security(ledgers) == ledgers[1].tau


def test_network_security_single_chain():
    ledger = StakeLedger.from_total(1, 999)
    assert network_security([ledger]) == ledger.tau == Fraction(2 * 999, 3)


def test_network_security_symmetric():
    ledgers = [StakeLedger.from_total(i, 300) for i in (1, 2, 3)]
    assert network_security(ledgers) == Fraction(200)


def test_network_security_empty_rejected():
    with pytest.raises(ValueError):
        network_security([])


def test_min_monotonicity():
    base = [StakeLedger.from_total(1, 900), StakeLedger.from_total(2, 600)]
    sec = network_security(base)
    assert network_security(base + [StakeLedger.from_total(3, 300)]) <= sec
    # removing the argmin never decreases security
    weakest = min(base, key=lambda l: l.tau)
    rest = [l for l in base if l is not weakest]
    assert network_security(rest) >= sec


def test_tx_safety_anchor_values():
    """Relay stake of 7M: boundary 2S/3 = 4.67M; a 100K transfer is safe with
    about 4.57M of margin."""
    rc = StakeLedger.from_total(100, 7_000_000)
    verdict = check_tx_safety(100_000, [rc])
    assert verdict.safe
    assert verdict.boundary == Fraction(14_000_000, 3)
    assert abs(float(verdict.boundary) - 4_666_666.67) < 1.0
    assert abs(float(verdict.margin) - 4_566_666.67) < 1.0


def test_tx_safety_boundary_inclusive():
    rc = StakeLedger.from_total(1, 300)  # tau == 200 exactly
    assert check_tx_safety(200, [rc]).safe  # V == tau stays safe
    degraded = check_tx_safety(201, [rc])
    assert degraded.degraded
    assert degraded.margin < 0


def test_safety_verdict_consistency():
    ledgers = [StakeLedger.from_total(1, 3000)]
    for value in (0, 1999, 2000, 2001, 10**6):
        verdict = check_tx_safety(value, ledgers)
        assert verdict.degraded == (verdict.margin < 0)


def test_degradation_report_ratio():
    rc = StakeLedger.from_total(100, 7_000_000)
    values = {f"1:{i}": 1000 * i for i in range(10)}
    values["1:max"] = 100_000
    report = degradation_report(values, [rc])
    assert report.max_value == 100_000
    # 100K over 7M stake: about 1.4%, the published rounded figure is 1.3%
    assert abs(report.max_ratio - 0.013) < 0.0015
    assert report.degraded_keys == ()
    assert float(report.headroom) == pytest.approx(4_666_666.67, abs=1.0)


def test_degradation_report_flags_extreme_value():
    rc = StakeLedger.from_total(100, 300)
    report = degradation_report({"1:0": 10, "1:1": 500}, [rc])
    assert report.degraded_keys == ("1:1",)


def test_degradation_report_empty_trace():
    report = degradation_report({}, [StakeLedger.from_total(1, 300)])
    assert report.total_txs == 0
    assert report.max_value == 0
    assert report.degraded_keys == ()


def test_ledger_validation():
    with pytest.raises(ValueError):
        StakeLedger(chain_id=1, stakes=(("v0", -5),))
    ledger = StakeLedger.from_total(1, 10, validators=3)
    assert ledger.total_stake == 10
    assert len(ledger.stakes) == 3
