"""Deterministic PoS-BFT chain simulation.

Consensus is abstracted to weighted quorum signing: a block is produced when
the available validators of the signing epoch reach the vote threshold, and
withheld otherwise. Blocks at epoch-boundary heights (height = k*E, k > 0)
are handoff blocks: they announce the rotated validator set for their epoch
and are signed by the previous epoch's set, which is exactly what a light
client holding the previous set can verify. All headers sign over a
fixed-size payload that embeds the announced set only as its commitment.

Time is logical: every block consumes one tick from a monotone clock.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Deque, Dict, List, Optional, Tuple, Union

from . import encoding
from .crypto import bls
from .crypto.bn254 import G1Point, g1_to_bytes
from .crypto.commitment import ValidatorSet, commitment_digest
from .crypto.hashes import digest
from .crypto.merkle import MerkleProof, MerkleTree

ZERO32 = b"\x00" * 32
EMPTY_RECEIPT_ROOT = hashlib.sha256(b"relaysim/empty-receipt-trie").digest()


class BlockWithheld(Exception):
    """Raised when available signing weight is below the vote threshold."""

    def __init__(self, chain_id: int, available: int, total: int, threshold: Fraction):
        self.chain_id = chain_id
        self.available = available
        self.total = total
        self.threshold = threshold
        super().__init__(
            f"chain {chain_id}: available weight {available} < "
            f"{threshold} of total {total}; block withheld"
        )


class UnknownTransaction(KeyError):
    pass


# ---------------------------------------------------------------------------
# Transactions and receipts.


@dataclass(frozen=True)
class AssetPayload:
    token: str
    amount: int
    instruction: str = "transfer"

    def __post_init__(self):
        if self.amount < 0:
            raise ValueError("asset amount must be non-negative")

    def to_bytes(self) -> bytes:
        return b"A" + encoding.lp(self.token.encode()) + encoding.u64(self.amount) + encoding.lp(
            self.instruction.encode()
        )


@dataclass(frozen=True)
class MessagePayload:
    call_data: bytes

    def to_bytes(self) -> bytes:
        return b"M" + encoding.lp(self.call_data)


Payload = Union[AssetPayload, MessagePayload]


@dataclass(frozen=True)
class CrossChainTx:
    dest_chain: int
    payload: Payload
    origin_chain: int
    nonce: int

    def to_bytes(self) -> bytes:
        return encoding.join(
            [
                b"CTX1",
                encoding.u64(self.dest_chain),
                encoding.u64(self.origin_chain),
                encoding.u64(self.nonce),
                encoding.lp(self.payload.to_bytes()),
            ]
        )

    @property
    def tx_hash(self) -> bytes:
        return hashlib.sha256(self.to_bytes()).digest()

    @property
    def key(self) -> Tuple[int, int]:
        """Global identity: (origin chain id, origin nonce)."""
        return (self.origin_chain, self.nonce)


@dataclass(frozen=True)
class ReceiptMessage:
    tx_hash: bytes
    payload: bytes
    height: int

    def to_bytes(self) -> bytes:
        return encoding.join(
            [b"RCPT", encoding.lp(self.tx_hash), encoding.lp(self.payload), encoding.u64(self.height)]
        )


@dataclass(frozen=True)
class AggregateSignature:
    point: G1Point
    bitmap: Tuple[bool, ...]

    def to_bytes(self) -> bytes:
        return encoding.lp(g1_to_bytes(self.point)) + encoding.pack_bits(self.bitmap)


@dataclass(frozen=True)
class BlockHeader:
    chain_id: int
    height: int
    epoch: int
    epoch_size: int
    timestamp: int
    receipt_root: bytes
    announced_commitment: bytes  # ZERO32 on non-boundary headers
    validator_info: Optional[Tuple[str, object]]  # ("full", ValidatorSet) | ("committed", bytes)
    agg: AggregateSignature

    @property
    def is_boundary(self) -> bool:
        return self.announced_commitment != ZERO32

    def signing_payload(self) -> bytes:
        return encoding.join(
            [
                b"BH1",
                encoding.u64(self.chain_id),
                encoding.u64(self.height),
                encoding.u64(self.epoch),
                encoding.u64(self.epoch_size),
                encoding.u64(self.timestamp),
                encoding.lp(self.receipt_root),
                encoding.lp(self.announced_commitment),
            ]
        )

    def digest(self, algo: str = "sha256") -> bytes:
        return digest(self.signing_payload(), algo)

    def announced_set(self) -> Optional[ValidatorSet]:
        if self.validator_info and self.validator_info[0] == "full":
            return self.validator_info[1]  # type: ignore[return-value]
        return None


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    receipts: Tuple[ReceiptMessage, ...]
    leaves: Tuple[bytes, ...]


@dataclass(frozen=True)
class Confirmation:
    header: BlockHeader
    receipt_root: bytes
    message: ReceiptMessage
    leaf_index: int


# ---------------------------------------------------------------------------
# Configuration.


def parse_threshold(value) -> Fraction:
    if isinstance(value, Fraction):
        frac = value
    elif isinstance(value, str):
        num, _, den = value.partition("/")
        frac = Fraction(int(num), int(den)) if den else Fraction(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        frac = Fraction(value[0], value[1])
    elif isinstance(value, int):
        frac = Fraction(value)
    elif isinstance(value, float):
        frac = Fraction(value).limit_denominator(1_000_000)
    else:
        raise ValueError(f"cannot parse vote threshold from {value!r}")
    return frac


@dataclass(frozen=True)
class ChainConfig:
    chain_id: int
    epoch_size: int
    weights: Tuple[int, ...]
    vote_threshold: Fraction = Fraction(2, 3)
    rotation: str = "identity"  # identity | reweight | refresh
    genesis_time: int = 0
    hash_algo: str = "sha256"
    key_namespace: str = ""
    max_block_txs: int = 4096
    # relay-chain style headers announce only the set commitment; source
    # chains ship the full set so provers and normal clients can open it
    committed_validator_info: bool = False

    def __post_init__(self):
        if self.epoch_size < 1:
            raise ValueError("epoch size must be at least 1")
        if not self.weights:
            raise ValueError("need at least one validator")
        if any(w < 0 for w in self.weights):
            raise ValueError("validator weights must be non-negative")
        if sum(self.weights) <= 0:
            raise ValueError("total validator weight must be positive")
        t = self.vote_threshold
        if not (Fraction(1, 2) <= t <= 1):
            raise ValueError("vote threshold must lie in [1/2, 1]")
        if self.rotation not in ("identity", "reweight", "refresh"):
            raise ValueError(f"unknown rotation policy {self.rotation!r}")


class LogicalClock:
    """Monotone tick counter shared by every chain in a scenario."""

    def __init__(self, start: int = 0):
        self._now = start

    def next(self) -> int:
        self._now += 1
        return self._now

    @property
    def now(self) -> int:
        return self._now


def quorum_reached(weight: int, total: int, threshold: Fraction) -> bool:
    return weight * threshold.denominator >= threshold.numerator * total


# ---------------------------------------------------------------------------
# The chain state machine.


@dataclass
class _EpochKeys:
    vset: ValidatorSet
    secrets: Dict[bytes, int]  # pubkey bytes -> signing scalar


class Chain:
    """A single-threaded chain producing quorum-signed headers and receipts."""

    def __init__(self, config: ChainConfig, clock: Optional[LogicalClock] = None):
        self.config = config
        self.clock = clock if clock is not None else LogicalClock(config.genesis_time)
        self._epochs: List[_EpochKeys] = [self._genesis_keys()]
        self._blocks: List[Block] = []
        self._trees: Dict[int, MerkleTree] = {}
        self._pending: Deque[Tuple[str, object]] = deque()
        self._tx_index: Dict[bytes, Tuple[int, int]] = {}
        self._nonce = 0
        self._withheld: frozenset[bytes] = frozenset()
        self.produce_block()  # genesis

    # -- validator sets ----------------------------------------------------

    def _genesis_keys(self) -> _EpochKeys:
        ns = self.config.key_namespace
        pairs = []
        secrets: Dict[bytes, int] = {}
        for i, weight in enumerate(self.config.weights):
            kp = bls.keygen(f"{ns}/{self.config.chain_id}/0/{i}")
            pairs.append((kp.public_bytes, weight))
            secrets[kp.public_bytes] = kp.secret
        return _EpochKeys(vset=ValidatorSet.from_pairs(0, pairs), secrets=secrets)

    def _rotated_keys(self, prev: _EpochKeys, epoch: int) -> _EpochKeys:
        import random

        policy = self.config.rotation
        if policy == "identity":
            vset = ValidatorSet(epoch=epoch, entries=prev.vset.entries)
            return _EpochKeys(vset=vset, secrets=dict(prev.secrets))
        seed = f"{self.config.key_namespace}/{self.config.chain_id}/rotate/{epoch}"
        if policy == "reweight":
            rng = random.Random(seed)
            weights = [e.weight for e in prev.vset.entries]
            rng.shuffle(weights)
            pairs = [(e.pubkey_bytes, w) for e, w in zip(prev.vset.entries, weights)]
            vset = ValidatorSet.from_pairs(epoch, pairs)
            return _EpochKeys(vset=vset, secrets=dict(prev.secrets))
        # refresh: new keys, weights carried over in canonical order
        pairs = []
        secrets: Dict[bytes, int] = {}
        for i, entry in enumerate(prev.vset.entries):
            kp = bls.keygen(f"{seed}/{i}")
            pairs.append((kp.public_bytes, entry.weight))
            secrets[kp.public_bytes] = kp.secret
        return _EpochKeys(vset=ValidatorSet.from_pairs(epoch, pairs), secrets=secrets)

    def _ensure_epoch(self, epoch: int) -> _EpochKeys:
        while len(self._epochs) <= epoch:
            nxt = self._rotated_keys(self._epochs[-1], len(self._epochs))
            self._epochs.append(nxt)
        return self._epochs[epoch]

    def validator_set(self, epoch: int) -> ValidatorSet:
        return self._ensure_epoch(epoch).vset

    def rotate_validators(self, epoch: int) -> ValidatorSet:
        """Materialize (deterministically) the validator set for an epoch."""
        return self.validator_set(epoch)

    def epoch_secrets(self, epoch: int) -> Dict[bytes, int]:
        """Simulation-control surface: signing keys for fault injection."""
        return dict(self._ensure_epoch(epoch).secrets)

    # -- fault injection ----------------------------------------------------

    def withhold_fraction(self, fraction: float) -> int:
        """Mark validators (canonical order) unavailable until cumulative
        weight first reaches `fraction` of the signing total; returns the
        withheld weight."""
        vset = self._epochs[min(self.current_epoch, len(self._epochs) - 1)].vset
        target = fraction * vset.total_weight
        withheld = set()
        acc = 0
        for entry in vset.entries:
            if acc >= target:
                break
            withheld.add(entry.pubkey_bytes)
            acc += entry.weight
        self._withheld = frozenset(withheld)
        return acc

    def restore_all(self) -> None:
        self._withheld = frozenset()

    # -- tx intake ----------------------------------------------------------

    def make_tx(self, dest_chain: int, payload: Payload) -> CrossChainTx:
        tx = CrossChainTx(
            dest_chain=dest_chain, payload=payload, origin_chain=self.config.chain_id, nonce=self._nonce
        )
        self._nonce += 1
        return tx

    def submit_tx(self, ctx: CrossChainTx) -> bytes:
        if ctx.dest_chain == self.config.chain_id:
            raise ValueError("cross-chain destination equals the origin chain")
        if ctx.origin_chain != self.config.chain_id:
            raise ValueError("transaction origin does not match this chain")
        self._pending.append(("ctx", ctx))
        return ctx.tx_hash

    def append_event(self, payload: bytes) -> bytes:
        """Queue a local confirmation event (relay / destination bookkeeping)."""
        self._pending.append(("event", payload))
        event_hash = hashlib.sha256(b"EVT" + payload).digest()
        return event_hash

    @property
    def pending_count(self) -> int:
        return len(self._pending)

    # -- block production ---------------------------------------------------

    @property
    def height(self) -> int:
        return len(self._blocks) - 1

    @property
    def current_epoch(self) -> int:
        return max(0, self.height) // self.config.epoch_size

    @property
    def headers(self) -> List[BlockHeader]:
        return [b.header for b in self._blocks]

    def block_at(self, height: int) -> Block:
        return self._blocks[height]

    def _sign_header_payload(self, payload: bytes, keys: _EpochKeys) -> AggregateSignature:
        sigs = []
        bitmap = []
        for entry in keys.vset.entries:
            if entry.pubkey_bytes in self._withheld:
                bitmap.append(False)
                continue
            bitmap.append(True)
            sigs.append(bls.sign(keys.secrets[entry.pubkey_bytes], payload))
        available = keys.vset.bitmap_weight(bitmap)
        if not quorum_reached(available, keys.vset.total_weight, self.config.vote_threshold):
            raise BlockWithheld(
                self.config.chain_id, available, keys.vset.total_weight, self.config.vote_threshold
            )
        return AggregateSignature(point=bls.aggregate(sigs), bitmap=tuple(bitmap))

    def produce_block(self) -> Tuple[Block, BlockHeader]:
        height = len(self._blocks)
        epoch = height // self.config.epoch_size
        boundary = height == 0 or height % self.config.epoch_size == 0
        signing_keys = self._ensure_epoch(epoch if height == 0 else (epoch - 1 if boundary else epoch))

        items: List[Tuple[str, object]] = []
        while self._pending and len(items) < self.config.max_block_txs:
            items.append(self._pending.popleft())

        receipts: List[ReceiptMessage] = []
        for kind, item in items:
            if kind == "ctx":
                ctx: CrossChainTx = item  # type: ignore[assignment]
                receipts.append(ReceiptMessage(tx_hash=ctx.tx_hash, payload=ctx.to_bytes(), height=height))
            else:
                payload: bytes = item  # type: ignore[assignment]
                event_hash = hashlib.sha256(b"EVT" + payload).digest()
                receipts.append(ReceiptMessage(tx_hash=event_hash, payload=payload, height=height))
        leaves = tuple(r.to_bytes() for r in receipts)
        tree = MerkleTree(leaves, self.config.hash_algo) if leaves else None
        root = tree.root if tree is not None else EMPTY_RECEIPT_ROOT

        if boundary:
            announced = self._ensure_epoch(epoch).vset
            announced_commitment = commitment_digest(announced, self.config.hash_algo)
            if self.config.committed_validator_info:
                validator_info = ("committed", announced_commitment)
            else:
                validator_info = ("full", announced)
        else:
            announced_commitment = ZERO32
            validator_info = None

        draft = BlockHeader(
            chain_id=self.config.chain_id,
            height=height,
            epoch=epoch,
            epoch_size=self.config.epoch_size,
            timestamp=self.clock.next(),
            receipt_root=root,
            announced_commitment=announced_commitment,
            validator_info=validator_info,
            agg=AggregateSignature(point=None, bitmap=()),
        )
        agg = self._sign_header_payload(draft.signing_payload(), signing_keys)
        header = BlockHeader(**{**draft.__dict__, "agg": agg})
        block = Block(header=header, receipts=tuple(receipts), leaves=leaves)
        self._blocks.append(block)
        if tree is not None:
            self._trees[height] = tree
        for i, receipt in enumerate(receipts):
            self._tx_index.setdefault(receipt.tx_hash, (height, i))
        return block, header

    # -- confirmation queries ------------------------------------------------

    def confirm(self, tx_hash: bytes) -> Confirmation:
        if tx_hash not in self._tx_index:
            raise UnknownTransaction(tx_hash.hex())
        height, index = self._tx_index[tx_hash]
        block = self._blocks[height]
        return Confirmation(
            header=block.header,
            receipt_root=block.header.receipt_root,
            message=block.receipts[index],
            leaf_index=index,
        )

    def receipt_proof(self, tx_hash: bytes) -> MerkleProof:
        if tx_hash not in self._tx_index:
            raise UnknownTransaction(tx_hash.hex())
        height, index = self._tx_index[tx_hash]
        return self._trees[height].prove(index)

    def signing_set_for(self, header: BlockHeader) -> ValidatorSet:
        """The validator set whose quorum signed this header."""
        if header.height == 0:
            return self.validator_set(0)
        if header.is_boundary:
            return self.validator_set(header.epoch - 1)
        return self.validator_set(header.epoch)


def new_chain(config: ChainConfig, clock: Optional[LogicalClock] = None) -> Chain:
    return Chain(config, clock)
