"""Off-chain provers: statement construction, pluggable proof backends, and
the monitoring/relaying runtime.

No real SNARK is produced. Soundness at simulation scale comes from a
witness check at prove time plus a keyed attestation over the public inputs,
so attestation bytes cannot be minted for statements the backend never
checked. Succinctness and zero knowledge are explicitly not modeled. The
counting backend additionally prices the verification circuit (split
pipeline by default: the base-field hashing stays outside the circuit).
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import encoding
from .chain import BlockHeader, Chain, Confirmation, quorum_reached
from .costs import GateCostTable, GateReport, gate_report
from .crypto import bls
from .crypto.bn254 import G1Point
from .crypto.commitment import ValidatorSet, commitment_digest
from .crypto.hash_to_curve import base_to_g, BaseFieldPair
from .crypto.merkle import MerkleProof


class UnsatisfiedStatement(Exception):
    """The witness does not satisfy the statement; an honest prover refuses."""


@dataclass(frozen=True)
class PublicInputs:
    commitment: bytes
    t: Tuple[int, int]
    header_digest: bytes
    new_commitment: Optional[bytes]
    threshold: Fraction
    claimed_weight: int

    def canonical_bytes(self) -> bytes:
        return encoding.join(
            [
                b"PI1",
                encoding.lp(self.commitment),
                encoding.u256(self.t[0]),
                encoding.u256(self.t[1]),
                encoding.lp(self.header_digest),
                encoding.lp(self.new_commitment if self.new_commitment is not None else b""),
                encoding.u64(self.threshold.numerator),
                encoding.u64(self.threshold.denominator),
                encoding.u64(self.claimed_weight),
            ]
        )


@dataclass(frozen=True)
class Witness:
    validator_set: ValidatorSet
    bitmap: Tuple[bool, ...]
    signature: G1Point
    new_set: Optional[ValidatorSet] = None


@dataclass(frozen=True)
class ZkStatement:
    publics: PublicInputs
    witness: Witness


@dataclass(frozen=True)
class ZkProof:
    backend: str  # "transparent" | "counting"
    attestation: bytes
    publics: PublicInputs
    gate_report: Optional[GateReport] = None


class TransparentBackend:
    """Re-execution oracle: checks the witness, then binds the public inputs
    under a private key. Verification recomputes the binding."""

    name = "transparent"

    def __init__(self, key: bytes):
        self._key = key

    def _attest(self, publics: PublicInputs) -> bytes:
        return hmac.new(self._key, b"transparent|" + publics.canonical_bytes(), hashlib.sha256).digest()

    def check_statement(self, statement: ZkStatement) -> bool:
        pub, wit = statement.publics, statement.witness
        if commitment_digest(wit.validator_set) != pub.commitment:
            return False
        if len(wit.bitmap) != len(wit.validator_set):
            return False
        weight = wit.validator_set.bitmap_weight(wit.bitmap)
        if weight != pub.claimed_weight or weight <= 0:
            return False
        if not quorum_reached(weight, wit.validator_set.total_weight, pub.threshold):
            return False
        if pub.new_commitment is not None:
            if wit.new_set is None or commitment_digest(wit.new_set) != pub.new_commitment:
                return False
        apk = bls.aggregate_pubkeys(wit.validator_set.pubkeys(), wit.bitmap)
        point = base_to_g(BaseFieldPair(*pub.t))
        return bls.verify_at_point(apk, point, wit.signature)

    def prove(self, statement: ZkStatement) -> ZkProof:
        if not self.check_statement(statement):
            raise UnsatisfiedStatement("witness does not satisfy the statement")
        return ZkProof(
            backend=self.name, attestation=self._attest(statement.publics), publics=statement.publics
        )

    def verify(self, proof: ZkProof, publics: PublicInputs) -> bool:
        if proof.publics != publics:
            return False
        return hmac.compare_digest(proof.attestation, self._attest(publics))


class CountingBackend:
    """Same acceptance semantics through an independent check path, plus a
    circuit-size report priced from the gate table."""

    name = "counting"

    def __init__(self, key: bytes, gate_table: Optional[GateCostTable] = None, mode: str = "split"):
        self._key = key
        self.gate_table = gate_table if gate_table is not None else GateCostTable()
        if mode not in ("split", "baseline"):
            raise ValueError(f"unknown circuit mode {mode!r}")
        self.mode = mode

    def _attest(self, publics: PublicInputs) -> bytes:
        return hmac.new(self._key, b"counting|" + publics.canonical_bytes(), hashlib.sha256).digest()

    def check_statement(self, statement: ZkStatement) -> bool:
        pub, wit = statement.publics, statement.witness
        entries = wit.validator_set.entries
        if len(wit.bitmap) != len(entries):
            return False
        # weight accumulation, written as the circuit would: one pass, then
        # the threshold comparison by cross multiplication
        weight = 0
        for included, entry in zip(wit.bitmap, entries):
            weight += entry.weight if included else 0
        if weight <= 0 or weight != pub.claimed_weight:
            return False
        total = sum(e.weight for e in entries)
        if weight * pub.threshold.denominator < pub.threshold.numerator * total:
            return False
        if commitment_digest(wit.validator_set) != pub.commitment:
            return False
        if (pub.new_commitment is None) != (wit.new_set is None):
            return False
        if pub.new_commitment is not None and commitment_digest(wit.new_set) != pub.new_commitment:
            return False
        apk = bls.aggregate_pubkeys(wit.validator_set.pubkeys(), wit.bitmap)
        point = base_to_g(BaseFieldPair(*pub.t))
        # product form: e(-sig, g2) * e(point, apk) == 1
        return bls.verify_product(apk, point, wit.signature)

    def prove(self, statement: ZkStatement) -> ZkProof:
        if not self.check_statement(statement):
            raise UnsatisfiedStatement("witness does not satisfy the statement")
        signers = sum(1 for b in statement.witness.bitmap if b)
        report = gate_report(self.gate_table, signers, self.mode)
        return ZkProof(
            backend=self.name,
            attestation=self._attest(statement.publics),
            publics=statement.publics,
            gate_report=report,
        )

    def verify(self, proof: ZkProof, publics: PublicInputs) -> bool:
        if proof.publics != publics:
            return False
        return hmac.compare_digest(proof.attestation, self._attest(publics))


def verify_proof(proof: ZkProof, publics: PublicInputs, backend) -> bool:
    return backend.verify(proof, publics)


# ---------------------------------------------------------------------------
# Statement construction from chain data.


def statement_for_header(chain: Chain, header: BlockHeader) -> ZkStatement:
    """The aggregate-signature-validity statement for one header."""
    signing_set = chain.signing_set_for(header)
    from .crypto.hash_to_curve import hash_to_base

    t = hash_to_base(header.signing_payload())
    new_set = None
    if header.is_boundary:
        # commitment-only headers: open the announced set from chain state
        new_set = header.announced_set() or chain.validator_set(header.epoch)
    publics = PublicInputs(
        commitment=commitment_digest(signing_set),
        t=(t.t0, t.t1),
        header_digest=header.digest(chain.config.hash_algo),
        new_commitment=header.announced_commitment if header.is_boundary else None,
        threshold=chain.config.vote_threshold,
        claimed_weight=signing_set.bitmap_weight(header.agg.bitmap),
    )
    witness = Witness(
        validator_set=signing_set,
        bitmap=header.agg.bitmap,
        signature=header.agg.point,
        new_set=new_set,
    )
    return ZkStatement(publics=publics, witness=witness)


@dataclass(frozen=True)
class ProofBundle:
    """Everything one hop delivers to a hosted light client."""

    kind: str  # "ctx" | "update"
    origin_chain: int
    header: BlockHeader
    zk_proof: ZkProof
    merkle_proof: Optional[MerkleProof] = None
    receipt_payload: Optional[bytes] = None
    receipt_hash: Optional[bytes] = None


class Prover:
    """Monitors chains, extracts proofs, and transmits relay bundles.

    Profiles: honest provers relay faithfully; silent provers observe and
    produce nothing; tampering behavior is built in the attack harness on
    top of an honest prover's bundles.
    """

    def __init__(self, name: str, backend, profile: str = "honest"):
        if profile not in ("honest", "silent", "tampering"):
            raise ValueError(f"unknown prover profile {profile!r}")
        self.name = name
        self.backend = backend
        self.profile = profile
        self._receipt_cursors: Dict[int, int] = {}
        self._update_cursors: Dict[int, int] = {}
        self._zk_cache: Dict[Tuple[int, int], ZkProof] = {}

    # -- observation ---------------------------------------------------------

    def monitor(self, chain: Chain) -> List[Confirmation]:
        """Yield confirmations (receipt granularity) in chain order, each
        exactly once per prover."""
        start = self._receipt_cursors.get(chain.config.chain_id, 0)
        out: List[Confirmation] = []
        for height in range(start, chain.height + 1):
            block = chain.block_at(height)
            for i, receipt in enumerate(block.receipts):
                out.append(
                    Confirmation(
                        header=block.header,
                        receipt_root=block.header.receipt_root,
                        message=receipt,
                        leaf_index=i,
                    )
                )
        self._receipt_cursors[chain.config.chain_id] = chain.height + 1
        return out

    def new_boundaries(self, chain: Chain) -> List[BlockHeader]:
        start = max(1, self._update_cursors.get(chain.config.chain_id, 1))
        out = []
        for height in range(start, chain.height + 1):
            header = chain.block_at(height).header
            if header.is_boundary:
                out.append(header)
        self._update_cursors[chain.config.chain_id] = chain.height + 1
        return out

    # -- proof generation ------------------------------------------------------

    def zk_proof_for(self, chain: Chain, header: BlockHeader) -> ZkProof:
        key = (chain.config.chain_id, header.height)
        if key not in self._zk_cache:
            self._zk_cache[key] = self.backend.prove(statement_for_header(chain, header))
        return self._zk_cache[key]

    def gen_proofs(self, chain: Chain, header: BlockHeader, tx_hash: bytes) -> Tuple[MerkleProof, ZkProof]:
        """Merkle + signature-validity proofs for a confirmed transaction."""
        confirmation = chain.confirm(tx_hash)
        if confirmation.header.height != header.height:
            raise ValueError("transaction is not confirmed in the given block")
        merkle_proof = chain.receipt_proof(tx_hash)
        zk = self.zk_proof_for(chain, header)
        return merkle_proof, zk

    def ctx_bundle(self, chain: Chain, confirmation: Confirmation) -> ProofBundle:
        merkle_proof, zk = self.gen_proofs(chain, confirmation.header, confirmation.message.tx_hash)
        return ProofBundle(
            kind="ctx",
            origin_chain=chain.config.chain_id,
            header=confirmation.header,
            zk_proof=zk,
            merkle_proof=merkle_proof,
            receipt_payload=confirmation.message.payload,
            receipt_hash=confirmation.message.tx_hash,
        )

    def update_bundle(self, chain: Chain, header: BlockHeader) -> ProofBundle:
        return ProofBundle(
            kind="update",
            origin_chain=chain.config.chain_id,
            header=header,
            zk_proof=self.zk_proof_for(chain, header),
        )
