"""The unified relay chain and the end-to-end relay pipeline.

One hybrid light client per registered source chain lives on the relay
chain; every destination chain hosts a single hybrid light client tracking
the relay chain. Cross-chain transactions are therefore verified twice:
source -> relay (intermediate confirmation) and relay -> destination (final
confirmation). Idempotence is keyed by (origin chain id, origin nonce), so
at-least-once prover delivery is harmless.

Everything runs on one deterministic scheduler; within a round, bundles are
applied in (origin, height, ctx-before-update, leaf) order so results do not
depend on prover interleaving.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from . import encoding
from .chain import (
    BlockWithheld,
    Chain,
    ChainConfig,
    CrossChainTx,
    LogicalClock,
    ReceiptMessage,
    new_chain,
)
from .costs import GasCostTable, GasReceipt, hlc_setup_gas, lc_setup_gas
from .lightclient import (
    HybridLcState,
    RejectReason,
    UpdateResult,
    VerifyResult,
    hlc_setup,
    hlc_update,
    hlc_verify,
)
from .prover import ProofBundle, Prover
from .trace import TraceEvent, TraceLog, ctx_key_str

ICTX_TAG = b"ICTX1"


def encode_intermediate(origin_chain: int, ctx_bytes: bytes) -> bytes:
    return ICTX_TAG + encoding.u64(origin_chain) + encoding.lp(ctx_bytes)


def decode_intermediate(payload: bytes) -> Tuple[int, bytes]:
    if not payload.startswith(ICTX_TAG):
        raise ValueError("not an intermediate cross-chain record")
    origin = int.from_bytes(payload[5:13], "big")
    body = payload[13:]
    length = int.from_bytes(body[:8], "big")
    ctx_bytes = body[8 : 8 + length]
    if len(ctx_bytes) != length:
        raise ValueError("truncated intermediate record")
    return origin, ctx_bytes


def decode_ctx(data: bytes) -> CrossChainTx:
    """Parse the canonical CrossChainTx encoding."""
    from .chain import AssetPayload, MessagePayload

    if data[:4] != b"CTX1":
        raise ValueError("not a cross-chain transaction record")
    dest = int.from_bytes(data[4:12], "big")
    origin = int.from_bytes(data[12:20], "big")
    nonce = int.from_bytes(data[20:28], "big")
    plen = int.from_bytes(data[28:36], "big")
    pbytes = data[36 : 36 + plen]
    if len(pbytes) != plen:
        raise ValueError("truncated payload")
    if pbytes[:1] == b"A":
        tlen = int.from_bytes(pbytes[1:9], "big")
        token = pbytes[9 : 9 + tlen].decode()
        off = 9 + tlen
        amount = int.from_bytes(pbytes[off : off + 8], "big")
        ilen = int.from_bytes(pbytes[off + 8 : off + 16], "big")
        instruction = pbytes[off + 16 : off + 16 + ilen].decode()
        payload = AssetPayload(token=token, amount=amount, instruction=instruction)
    elif pbytes[:1] == b"M":
        clen = int.from_bytes(pbytes[1:9], "big")
        payload = MessagePayload(call_data=pbytes[9 : 9 + clen])
    else:
        raise ValueError("unknown payload kind")
    ctx = CrossChainTx(dest_chain=dest, payload=payload, origin_chain=origin, nonce=nonce)
    if ctx.to_bytes() != data:
        raise ValueError("non-canonical transaction encoding")
    return ctx


@dataclass(frozen=True)
class IntermediateCtx:
    ctx: CrossChainTx
    origin_chain: int
    rc_height: int
    receipt: ReceiptMessage


@dataclass(frozen=True)
class FinalConfirmation:
    key: Tuple[int, int]
    payload_bytes: bytes
    dest_chain: int
    dc_height: int


@dataclass(frozen=True)
class DeliveryReceipt:
    target: int
    sequence: int


@dataclass(frozen=True)
class DeploymentPlan:
    n_chains: int
    topology: str
    lc_instances: int
    deployment_gas: int


def deployment_plan(
    n_chains: int,
    topology: str,
    table: Optional[GasCostTable] = None,
    validators_per_chain: int = 100,
) -> DeploymentPlan:
    """Light-client count and deployment gas for connecting N chains."""
    if n_chains < 2:
        raise ValueError("a deployment needs at least two chains")
    table = table if table is not None else GasCostTable()
    if topology == "pairwise":
        instances = n_chains * (n_chains - 1)
        gas = instances * lc_setup_gas(table, validators_per_chain)
    elif topology == "relayed":
        instances = 2 * n_chains
        gas = instances * hlc_setup_gas(table)
    else:
        raise ValueError(f"unknown topology {topology!r}")
    return DeploymentPlan(
        n_chains=n_chains, topology=topology, lc_instances=instances, deployment_gas=gas
    )


# ---------------------------------------------------------------------------


class RelayChain:
    """The relay chain: its own consensus plus one hybrid LC per source."""

    def __init__(self, chain: Chain, table: GasCostTable, backend):
        self.chain = chain
        self.table = table
        self.backend = backend
        self.clients: Dict[int, HybridLcState] = {}
        self.setup_receipts: Dict[int, GasReceipt] = {}
        self.intermediate: Dict[Tuple[int, int], IntermediateCtx] = {}
        self._accepted: set[Tuple[int, int]] = set()
        self._resolved_height = chain.height

    def register_source(self, source: Chain) -> GasReceipt:
        chain_id = source.config.chain_id
        if chain_id in self.clients:
            raise ValueError(f"source chain {chain_id} already registered")
        result = hlc_setup(
            chain_id,
            source.validator_set(0),
            source.config.epoch_size,
            source.config.vote_threshold,
            self.table,
            source.config.hash_algo,
        )
        self.clients[chain_id] = result.state
        self.setup_receipts[chain_id] = result.receipt
        return result.receipt

    def receive_update(self, bundle: ProofBundle) -> UpdateResult:
        state = self.clients.get(bundle.origin_chain)
        if state is None:
            raise ValueError(f"source chain {bundle.origin_chain} not registered")
        result = hlc_update(state, bundle.header, bundle.zk_proof, self.table, self.backend)
        if result.accepted:
            self.clients[bundle.origin_chain] = result.state
        return result

    def relay_receive(self, bundle: ProofBundle) -> Tuple[Optional[CrossChainTx], VerifyResult, bool]:
        """Verify a source confirmation; on acceptance queue the intermediate
        record for the next relay block. Returns (ctx, verify result, fresh)."""
        state = self.clients.get(bundle.origin_chain)
        if state is None:
            raise ValueError(f"source chain {bundle.origin_chain} not registered")
        try:
            ctx = decode_ctx(bundle.receipt_payload or b"")
        except ValueError:
            dummy = VerifyResult(False, _empty_receipt(self.table), RejectReason.MERKLE_FAIL)
            return None, dummy, False
        message = ReceiptMessage(
            tx_hash=bundle.receipt_hash or ctx.tx_hash,
            payload=bundle.receipt_payload,
            height=bundle.header.height,
        )
        result = hlc_verify(
            state, message, bundle.header, bundle.merkle_proof, bundle.zk_proof, self.table, self.backend
        )
        if not result.ok:
            return ctx, result, False
        if ctx.key in self._accepted:
            return ctx, result, False  # idempotent duplicate
        self._accepted.add(ctx.key)
        self.chain.append_event(encode_intermediate(bundle.origin_chain, ctx.to_bytes()))
        return ctx, result, True

    def resolve_confirmations(self) -> List[IntermediateCtx]:
        """Collect intermediate records confirmed by blocks not yet swept."""
        out = []
        while self._resolved_height < self.chain.height:
            self._resolved_height += 1
            block = self.chain.block_at(self._resolved_height)
            for receipt in block.receipts:
                try:
                    origin, ctx_bytes = decode_intermediate(receipt.payload)
                except ValueError:
                    continue
                ctx = decode_ctx(ctx_bytes)
                record = IntermediateCtx(
                    ctx=ctx, origin_chain=origin, rc_height=block.header.height, receipt=receipt
                )
                self.intermediate[ctx.key] = record
                out.append(record)
        return out


class DestinationHost:
    """A destination chain hosting the relay chain's light client."""

    def __init__(self, chain: Chain, rc_chain: Chain, table: GasCostTable, backend):
        self.chain = chain
        self.table = table
        self.backend = backend
        result = hlc_setup(
            rc_chain.config.chain_id,
            rc_chain.validator_set(0),
            rc_chain.config.epoch_size,
            rc_chain.config.vote_threshold,
            table,
            rc_chain.config.hash_algo,
        )
        self.rc_client: HybridLcState = result.state
        self.setup_receipt: GasReceipt = result.receipt
        self.confirmations: Dict[Tuple[int, int], FinalConfirmation] = {}
        self._accepted: set[Tuple[int, int]] = set()
        self._resolved_height = chain.height

    def receive_update(self, bundle: ProofBundle) -> UpdateResult:
        result = hlc_update(self.rc_client, bundle.header, bundle.zk_proof, self.table, self.backend)
        if result.accepted:
            self.rc_client = result.state
        return result

    def dest_receive(self, bundle: ProofBundle) -> Tuple[Optional[CrossChainTx], VerifyResult, bool]:
        """Final verification of an intermediate record against the RC client."""
        try:
            origin, ctx_bytes = decode_intermediate(bundle.receipt_payload or b"")
            ctx = decode_ctx(ctx_bytes)
        except ValueError:
            dummy = VerifyResult(False, _empty_receipt(self.table), RejectReason.MERKLE_FAIL)
            return None, dummy, False
        message = ReceiptMessage(
            tx_hash=bundle.receipt_hash or ctx.tx_hash,
            payload=bundle.receipt_payload,
            height=bundle.header.height,
        )
        result = hlc_verify(
            self.rc_client,
            message,
            bundle.header,
            bundle.merkle_proof,
            bundle.zk_proof,
            self.table,
            self.backend,
        )
        if not result.ok:
            return ctx, result, False
        if ctx.dest_chain != self.chain.config.chain_id:
            return ctx, VerifyResult(False, result.receipt, RejectReason.PUBLIC_INPUT_MISMATCH), False
        if ctx.key in self._accepted:
            return ctx, result, False
        self._accepted.add(ctx.key)
        self.chain.append_event(b"FIN1" + encoding.u64(origin) + encoding.lp(ctx.to_bytes()))
        return ctx, result, True

    def resolve_confirmations(self) -> List[FinalConfirmation]:
        out = []
        while self._resolved_height < self.chain.height:
            self._resolved_height += 1
            block = self.chain.block_at(self._resolved_height)
            for receipt in block.receipts:
                if not receipt.payload.startswith(b"FIN1"):
                    continue
                body = receipt.payload[4:]
                length = int.from_bytes(body[8:16], "big")
                ctx = decode_ctx(body[16 : 16 + length])
                record = FinalConfirmation(
                    key=ctx.key,
                    payload_bytes=ctx.payload.to_bytes(),
                    dest_chain=self.chain.config.chain_id,
                    dc_height=block.header.height,
                )
                self.confirmations[ctx.key] = record
                out.append(record)
        return out


def _empty_receipt(table: GasCostTable) -> GasReceipt:
    return GasReceipt(operation="rejected", items=(("call_overhead", 1, table.call_overhead),))


# ---------------------------------------------------------------------------
# The environment: chains, relay chain, provers, one deterministic scheduler.


@dataclass(frozen=True)
class Rejection:
    stage: str
    chain: int
    key: Optional[Tuple[int, int]]
    reason: str


class RelayEnvironment:
    """Wires chains, the relay chain, destination hosts, and provers together
    and advances them in deterministic rounds.

    A round moves every in-flight transaction at most one full pipeline pass:
    source blocks, prover scans, relay verification and inclusion, prover
    scans of the relay chain, destination verification and inclusion.
    """

    def __init__(
        self,
        rc_config: ChainConfig,
        backend,
        table: Optional[GasCostTable] = None,
    ):
        from dataclasses import replace

        self.table = table if table is not None else GasCostTable()
        self.backend = backend
        self.clock = LogicalClock()
        self.rc_id = rc_config.chain_id
        rc_chain = new_chain(replace(rc_config, committed_validator_info=True), self.clock)
        self.rc = RelayChain(rc_chain, self.table, backend)
        self.chains: Dict[int, Chain] = {}
        self.hosts: Dict[int, DestinationHost] = {}
        self.provers: List[Prover] = []
        self.trace = TraceLog()
        self.receipts_log: List[dict] = []
        self.rejections: List[Rejection] = []
        self.observers: List[Callable[[TraceEvent], None]] = []
        self.submitted: Dict[Tuple[int, int], CrossChainTx] = {}
        self._rc_inbox: List[ProofBundle] = []
        self._dest_inbox: Dict[int, List[ProofBundle]] = {}
        self._pending_rc_gas: Dict[Tuple[int, int], int] = {}
        self._seq = 0
        self.round = 0

    # -- wiring ---------------------------------------------------------------

    def add_chain(self, config: ChainConfig, as_source: bool = True, as_dest: bool = True) -> Chain:
        if config.chain_id in self.chains or config.chain_id == self.rc_id:
            raise ValueError(f"chain id {config.chain_id} already in use")
        chain = new_chain(config, self.clock)
        self.chains[config.chain_id] = chain
        if as_source:
            receipt = self.rc.register_source(chain)
            self._log_receipt("register_source", self.rc_id, receipt)
        if as_dest:
            host = DestinationHost(chain, self.rc.chain, self.table, self.backend)
            self.hosts[config.chain_id] = host
            self._dest_inbox[config.chain_id] = []
            self._log_receipt("register_rc_client", config.chain_id, host.setup_receipt)
        return chain

    def register_source(self, chain_id: int) -> GasReceipt:
        receipt = self.rc.register_source(self.chains[chain_id])
        self._log_receipt("register_source", self.rc_id, receipt)
        return receipt

    def add_prover(self, name: str, profile: str = "honest") -> Prover:
        prover = Prover(name, self.backend, profile)
        self.provers.append(prover)
        return prover

    # -- intake -----------------------------------------------------------------

    def submit(self, source_id: int, dest_id: int, payload) -> Tuple[int, int]:
        if source_id not in self.chains:
            raise ValueError(f"unknown source chain {source_id}")
        if dest_id not in self.hosts:
            raise ValueError(f"destination chain {dest_id} is not registered")
        chain = self.chains[source_id]
        ctx = chain.make_tx(dest_id, payload)
        chain.submit_tx(ctx)
        self.submitted[ctx.key] = ctx
        self._record(
            TraceEvent(
                key=ctx_key_str(ctx.key),
                stage="commit_sc",
                time=self.clock.next(),
                chain=source_id,
            )
        )
        return ctx.key

    def transmit(self, bundle: ProofBundle, target: int) -> DeliveryReceipt:
        if target == self.rc_id:
            self._rc_inbox.append(bundle)
        elif target in self._dest_inbox:
            self._dest_inbox[target].append(bundle)
        else:
            raise ValueError(f"unknown transmit target {target}")
        self._seq += 1
        return DeliveryReceipt(target=target, sequence=self._seq)

    # -- bookkeeping --------------------------------------------------------------

    def _record(self, event: TraceEvent, once: bool = False) -> None:
        recorded = self.trace.record_once(event) if once else (self.trace.record(event) or True)
        if recorded:
            for observer in self.observers:
                observer(event)

    def _log_receipt(self, context: str, chain_id: int, receipt: GasReceipt) -> None:
        entry = {"context": context, "chain": chain_id}
        entry.update(receipt.to_dict())
        self.receipts_log.append(entry)

    def _log_gate_report(self, bundle: ProofBundle) -> None:
        report = bundle.zk_proof.gate_report
        if report is None:
            return
        entry = {"context": "gate_report", "chain": bundle.origin_chain}
        entry.update(report.to_dict())
        self.receipts_log.append(entry)

    def _reject(self, stage: str, chain: int, key, reason: RejectReason) -> None:
        key_t = key if key is None else tuple(key)
        self.rejections.append(
            Rejection(stage=stage, chain=chain, key=key_t, reason=reason.value)
        )
        self._record(
            TraceEvent(
                key=ctx_key_str(key_t) if key_t else "?:?",
                stage=stage,
                time=self.clock.next(),
                chain=chain,
                verdict=f"reject:{reason.value}",
            )
        )

    @staticmethod
    def _bundle_order(bundle: ProofBundle):
        return (
            bundle.origin_chain,
            bundle.header.height,
            0 if bundle.kind == "ctx" else 1,
            bundle.receipt_hash or b"",
        )

    # -- the round ---------------------------------------------------------------

    def step(self) -> None:
        self.round += 1
        self._produce_source_blocks()
        self._scan_sources()
        self._relay_process()
        self._scan_relay()
        self._dest_process()

    def _produce_source_blocks(self) -> None:
        for cid in sorted(self.chains):
            chain = self.chains[cid]
            if not chain.pending_count:
                continue
            try:
                block, _ = chain.produce_block()
            except BlockWithheld:  # liveness fault: txs stay pending
                continue
            for receipt in block.receipts:
                try:
                    ctx = decode_ctx(receipt.payload)
                except ValueError:
                    continue
                self._record(
                    TraceEvent(
                        key=ctx_key_str(ctx.key),
                        stage="confirm_sc",
                        time=self.clock.next(),
                        chain=cid,
                    ),
                    once=True,
                )
            # delivery events may ride in these blocks too (a destination is
            # usually also a source); sweep their final confirmations now
            if cid in self.hosts:
                self._record_final_confirmations(cid)

    def _record_final_confirmations(self, host_id: int) -> None:
        for record in self.hosts[host_id].resolve_confirmations():
            self._record(
                TraceEvent(
                    key=ctx_key_str(record.key),
                    stage="confirm_dc",
                    time=self.clock.next(),
                    chain=host_id,
                ),
                once=True,
            )

    def _scan_sources(self) -> None:
        for prover in self.provers:
            if prover.profile == "silent":
                continue
            for cid in sorted(self.chains):
                if cid not in self.rc.clients:
                    continue
                chain = self.chains[cid]
                for header in prover.new_boundaries(chain):
                    self.transmit(prover.update_bundle(chain, header), self.rc_id)
                for conf in prover.monitor(chain):
                    try:
                        ctx = decode_ctx(conf.message.payload)
                    except ValueError:
                        continue  # local events are not relayed outward
                    bundle = prover.ctx_bundle(chain, conf)
                    self.transmit(bundle, self.rc_id)
                    self._record(
                        TraceEvent(
                            key=ctx_key_str(ctx.key),
                            stage="prove_sc",
                            time=self.clock.next(),
                            chain=cid,
                        ),
                        once=True,
                    )

    def _relay_process(self) -> None:
        bundles = sorted(self._rc_inbox, key=self._bundle_order)
        self._rc_inbox.clear()
        for bundle in bundles:
            if bundle.kind == "update":
                result = self.rc.receive_update(bundle)
                if result.accepted:
                    self._log_receipt("hlc_update", self.rc_id, result.receipt)
                elif result.reason != RejectReason.EPOCH_GAP:
                    self._reject("update_rc", self.rc_id, None, result.reason)
                continue
            ctx, result, fresh = self.rc.relay_receive(bundle)
            key = ctx.key if ctx is not None else None
            if not result.ok:
                self._reject("confirm_rc", self.rc_id, key, result.reason)
            elif fresh:
                self._pending_rc_gas[ctx.key] = result.receipt.total
                self._log_receipt("hlc_verify", self.rc_id, result.receipt)
                self._log_gate_report(bundle)
        if self.rc.chain.pending_count:
            try:
                self.rc.chain.produce_block()
            except BlockWithheld:
                return
            for record in self.rc.resolve_confirmations():
                gas = self._pending_rc_gas.pop(record.ctx.key, None)
                self._record(
                    TraceEvent(
                        key=ctx_key_str(record.ctx.key),
                        stage="confirm_rc",
                        time=self.clock.next(),
                        chain=self.rc_id,
                        gas=gas,
                    ),
                    once=True,
                )

    def _scan_relay(self) -> None:
        for prover in self.provers:
            if prover.profile == "silent":
                continue
            for header in prover.new_boundaries(self.rc.chain):
                bundle = prover.update_bundle(self.rc.chain, header)
                for host_id in sorted(self.hosts):
                    self.transmit(bundle, host_id)
            for conf in prover.monitor(self.rc.chain):
                try:
                    origin, ctx_bytes = decode_intermediate(conf.message.payload)
                    ctx = decode_ctx(ctx_bytes)
                except ValueError:
                    continue
                if ctx.dest_chain not in self.hosts:
                    continue
                bundle = prover.ctx_bundle(self.rc.chain, conf)
                self.transmit(bundle, ctx.dest_chain)
                self._record(
                    TraceEvent(
                        key=ctx_key_str(ctx.key),
                        stage="prove_rc",
                        time=self.clock.next(),
                        chain=self.rc_id,
                    ),
                    once=True,
                )

    def _dest_process(self) -> None:
        for host_id in sorted(self.hosts):
            host = self.hosts[host_id]
            bundles = sorted(self._dest_inbox[host_id], key=self._bundle_order)
            self._dest_inbox[host_id].clear()
            for bundle in bundles:
                if bundle.kind == "update":
                    result = host.receive_update(bundle)
                    if result.accepted:
                        self._log_receipt("hlc_update", host_id, result.receipt)
                    elif result.reason != RejectReason.EPOCH_GAP:
                        self._reject("update_dc", host_id, None, result.reason)
                    continue
                ctx, result, fresh = host.dest_receive(bundle)
                key = ctx.key if ctx is not None else None
                if not result.ok:
                    self._reject("verify_dc", host_id, key, result.reason)
                elif fresh:
                    self._log_receipt("hlc_verify", host_id, result.receipt)
                    self._record(
                        TraceEvent(
                            key=ctx_key_str(ctx.key),
                            stage="verify_dc",
                            time=self.clock.next(),
                            chain=host_id,
                            gas=result.receipt.total,
                        ),
                        once=True,
                    )
            if host.chain.pending_count:
                try:
                    host.chain.produce_block()
                except BlockWithheld:
                    continue
                self._record_final_confirmations(host_id)

    # -- driving -------------------------------------------------------------------

    def run(self, rounds: int) -> None:
        for _ in range(rounds):
            self.step()

    def run_until_complete(self, keys, horizon_rounds: int = 10) -> Tuple[bool, List[Tuple[int, int]]]:
        """Step until every key reaches final confirmation or the logical
        horizon is exhausted; returns (all confirmed, stalled keys)."""
        want = {ctx_key_str(tuple(k)) for k in keys}
        for _ in range(horizon_rounds):
            if want <= set(self.trace.completed_keys()):
                return True, []
            self.step()
        done = set(self.trace.completed_keys())
        stalled = sorted(
            tuple(int(p) for p in k.split(":")) for k in (want - done)
        )
        return not stalled, stalled

    # -- invariant helpers ------------------------------------------------------------

    def final_confirmations(self) -> Dict[Tuple[int, int], FinalConfirmation]:
        out: Dict[Tuple[int, int], FinalConfirmation] = {}
        for host in self.hosts.values():
            out.update(host.confirmations)
        return out

    def payload_conservation_violations(self) -> List[Tuple[int, int]]:
        """Keys whose finally confirmed payload differs from the committed one."""
        bad = []
        for key, record in self.final_confirmations().items():
            submitted = self.submitted.get(key)
            if submitted is None or submitted.payload.to_bytes() != record.payload_bytes:
                bad.append(key)
        return sorted(bad)


def end_to_end_relay(env: RelayEnvironment, source_id: int, dest_id: int, payload, horizon_rounds: int = 10):
    """Relay one transaction and return its ordered trace events."""
    key = env.submit(source_id, dest_id, payload)
    done, _ = env.run_until_complete([key], horizon_rounds)
    if not done:
        raise RuntimeError(f"relay of {key} did not complete within the horizon")
    return env.trace.for_key(ctx_key_str(key))
