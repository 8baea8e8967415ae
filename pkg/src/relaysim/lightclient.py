"""On-chain style light clients: the normal full-set client and the hybrid
proof-offloaded client.

Both are pure state machines over immutable states; every call returns a
result object carrying a gas receipt built from instrumentation counters.
The public verify contract is boolean, but rejections carry an enumerated
reason for the adversarial test harness.

Epoch discipline is strict: a client at epoch e accepts mid-epoch headers of
epoch e (signed by its stored set) and boundary headers of epoch e+1 (also
signed by its stored set, announcing the next set). Anything else is an
epoch gap; missed epochs require sequential updates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Optional

from .chain import BlockHeader, ReceiptMessage, quorum_reached
from .costs import GasCostTable, GasMeter, GasReceipt
from .crypto import bls
from .crypto.commitment import ValidatorSet, commitment_digest
from .crypto.hash_to_curve import base_to_g, hash_to_base
from .crypto.merkle import MerkleProof, merkle_verify


class RejectReason(Enum):
    BAD_SIGNATURE = "bad-signature"
    INSUFFICIENT_WEIGHT = "insufficient-weight"
    EPOCH_GAP = "epoch-gap"
    PROOF_INVALID = "proof-invalid"
    PUBLIC_INPUT_MISMATCH = "public-input-mismatch"
    MERKLE_FAIL = "merkle-fail"


@dataclass(frozen=True)
class NormalLcState:
    chain_id: int
    epoch: int
    validator_set: ValidatorSet
    epoch_size: int
    threshold: Fraction
    hash_algo: str = "sha256"


@dataclass(frozen=True)
class HybridLcState:
    chain_id: int
    epoch: int
    commitment: bytes
    epoch_size: int
    threshold: Fraction
    hash_algo: str = "sha256"


@dataclass(frozen=True)
class SetupResult:
    state: object
    receipt: GasReceipt


@dataclass(frozen=True)
class UpdateResult:
    accepted: bool
    state: object
    receipt: GasReceipt
    reason: Optional[RejectReason] = None


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    receipt: GasReceipt
    reason: Optional[RejectReason] = None


# ---------------------------------------------------------------------------
# Normal light client.


def lc_setup(
    chain_id: int,
    genesis_set: ValidatorSet,
    epoch_size: int,
    threshold: Fraction,
    table: GasCostTable,
    hash_algo: str = "sha256",
) -> SetupResult:
    if len(genesis_set) == 0:
        raise ValueError("cannot set up a light client with an empty validator set")
    meter = GasMeter(table, "lc_setup")
    meter.charge("sstore_word", len(genesis_set) * table.validator_words)
    state = NormalLcState(
        chain_id=chain_id,
        epoch=0,
        validator_set=genesis_set,
        epoch_size=epoch_size,
        threshold=threshold,
        hash_algo=hash_algo,
    )
    return SetupResult(state=state, receipt=meter.receipt())


def _header_matches_epoch(state_epoch: int, header: BlockHeader) -> bool:
    if header.is_boundary:
        return header.epoch == state_epoch + 1
    return header.epoch == state_epoch


def _check_signature(
    state: NormalLcState, header: BlockHeader, meter: GasMeter
) -> Optional[RejectReason]:
    vset = state.validator_set
    meter.charge("sload_word", len(vset) * meter.table.validator_words)
    bitmap = header.agg.bitmap
    if len(bitmap) != len(vset):
        return RejectReason.BAD_SIGNATURE
    meter.charge("weight_step", len(vset))
    weight = vset.bitmap_weight(bitmap)
    if not quorum_reached(weight, vset.total_weight, state.threshold):
        return RejectReason.INSUFFICIENT_WEIGHT
    meter.charge("hash_op", 3)  # hash-to-base expansion
    meter.charge("base_map", 2)
    signers = sum(1 for b in bitmap if b)
    meter.charge("g2_add", max(0, signers - 1))
    meter.charge("pairing_base", 1)
    meter.charge("pairing_check", 2)
    apk = bls.aggregate_pubkeys(vset.pubkeys(), bitmap)
    point = base_to_g(hash_to_base(header.signing_payload()))
    if not bls.verify_at_point(apk, point, header.agg.point):
        return RejectReason.BAD_SIGNATURE
    return None


def lc_update(state: NormalLcState, header: BlockHeader, table: GasCostTable) -> UpdateResult:
    meter = GasMeter(table, "lc_update")
    meter.charge("call_overhead")
    if not header.is_boundary or header.epoch != state.epoch + 1:
        return UpdateResult(False, state, meter.receipt(), RejectReason.EPOCH_GAP)
    announced = header.announced_set()
    if announced is None:
        raise ValueError("normal light client requires full validator info on boundary headers")
    reason = _check_signature(state, header, meter)
    if reason is not None:
        return UpdateResult(False, state, meter.receipt(), reason)
    meter.charge("hash_op", len(announced) + 1)  # recompute announced-set commitment
    if commitment_digest(announced, state.hash_algo) != header.announced_commitment:
        return UpdateResult(False, state, meter.receipt(), RejectReason.BAD_SIGNATURE)
    meter.charge("sstore_word", len(announced) * table.validator_words)
    new_state = replace(state, epoch=state.epoch + 1, validator_set=announced)
    return UpdateResult(True, new_state, meter.receipt(), None)


def lc_verify(
    state: NormalLcState,
    message: ReceiptMessage,
    header: BlockHeader,
    proof: MerkleProof,
    table: GasCostTable,
) -> VerifyResult:
    meter = GasMeter(table, "lc_verify")
    meter.charge("call_overhead")
    if header.chain_id != state.chain_id or not _header_matches_epoch(state.epoch, header):
        return VerifyResult(False, meter.receipt(), RejectReason.EPOCH_GAP)
    reason = _check_signature(state, header, meter)
    if reason is not None:
        return VerifyResult(False, meter.receipt(), reason)
    meter.charge("merkle_level", len(proof.path))
    if proof.root != header.receipt_root or not merkle_verify(
        header.receipt_root, message.to_bytes(), proof, state.hash_algo
    ):
        return VerifyResult(False, meter.receipt(), RejectReason.MERKLE_FAIL)
    return VerifyResult(True, meter.receipt(), None)


# ---------------------------------------------------------------------------
# Hybrid light client.


def hlc_setup(
    chain_id: int,
    genesis_set: ValidatorSet,
    epoch_size: int,
    threshold: Fraction,
    table: GasCostTable,
    hash_algo: str = "sha256",
) -> SetupResult:
    if len(genesis_set) == 0:
        raise ValueError("cannot set up a light client with an empty validator set")
    meter = GasMeter(table, "hlc_setup")
    meter.charge("sstore_word", table.commitment_words)
    state = HybridLcState(
        chain_id=chain_id,
        epoch=0,
        commitment=commitment_digest(genesis_set, hash_algo),
        epoch_size=epoch_size,
        threshold=threshold,
        hash_algo=hash_algo,
    )
    return SetupResult(state=state, receipt=meter.receipt())


def _expected_publics(state: HybridLcState, header: BlockHeader, meter: GasMeter):
    # the client derives every bindable public input itself, on-chain
    from .prover import PublicInputs  # local import to keep module layering acyclic

    meter.charge("sload_word", 3)
    meter.charge("hash_op", 3)  # hash-to-base of the signing payload
    t = hash_to_base(header.signing_payload())
    meter.charge("hash_op", 1)  # header digest
    return PublicInputs(
        commitment=state.commitment,
        t=(t.t0, t.t1),
        header_digest=header.digest(state.hash_algo),
        new_commitment=header.announced_commitment if header.is_boundary else None,
        threshold=state.threshold,
        claimed_weight=0,  # echoed from the proof, patched by callers
    )


def hlc_update(
    state: HybridLcState,
    header: BlockHeader,
    zk_proof,
    table: GasCostTable,
    backend,
) -> UpdateResult:
    meter = GasMeter(table, "hlc_update")
    meter.charge("call_overhead")
    if not header.is_boundary or header.epoch != state.epoch + 1:
        return UpdateResult(False, state, meter.receipt(), RejectReason.EPOCH_GAP)
    expected = _expected_publics(state, header, meter)
    expected = replace(expected, claimed_weight=zk_proof.publics.claimed_weight)
    if zk_proof.publics != expected or expected.claimed_weight <= 0:
        return UpdateResult(False, state, meter.receipt(), RejectReason.PUBLIC_INPUT_MISMATCH)
    meter.charge("snark_verify")
    if not backend.verify(zk_proof, expected):
        return UpdateResult(False, state, meter.receipt(), RejectReason.PROOF_INVALID)
    meter.charge("sstore_word", 2)
    new_state = replace(state, epoch=state.epoch + 1, commitment=header.announced_commitment)
    return UpdateResult(True, new_state, meter.receipt(), None)


def hlc_verify(
    state: HybridLcState,
    message: ReceiptMessage,
    header: BlockHeader,
    merkle_proof: MerkleProof,
    zk_proof,
    table: GasCostTable,
    backend,
) -> VerifyResult:
    meter = GasMeter(table, "hlc_verify")
    meter.charge("call_overhead")
    if header.chain_id != state.chain_id or not _header_matches_epoch(state.epoch, header):
        return VerifyResult(False, meter.receipt(), RejectReason.EPOCH_GAP)
    expected = _expected_publics(state, header, meter)
    expected = replace(expected, claimed_weight=zk_proof.publics.claimed_weight)
    if zk_proof.publics != expected or expected.claimed_weight <= 0:
        return VerifyResult(False, meter.receipt(), RejectReason.PUBLIC_INPUT_MISMATCH)
    meter.charge("snark_verify")
    if not backend.verify(zk_proof, expected):
        return VerifyResult(False, meter.receipt(), RejectReason.PROOF_INVALID)
    meter.charge("merkle_level", len(merkle_proof.path))
    if merkle_proof.root != header.receipt_root or not merkle_verify(
        header.receipt_root, message.to_bytes(), merkle_proof, state.hash_algo
    ):
        return VerifyResult(False, meter.receipt(), RejectReason.MERKLE_FAIL)
    return VerifyResult(True, meter.receipt(), None)
