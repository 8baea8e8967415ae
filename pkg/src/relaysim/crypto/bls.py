"""BLS signatures over BN254: signatures in G1, public keys in G2.

Keys are derived deterministically from seeds so simulation runs are
reproducible. Verification goes through an LRU cache keyed on compressed
encodings; the boolean outcome is pure, so caching repeated checks of the
same header is sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import bn254
from .bn254 import G1Point, G2Point
from .hash_to_curve import expand_message_xmd, hash_to_curve

DST_KEYGEN = b"RELAYSIM-BN254-KEYGEN_"


@dataclass(frozen=True)
class KeyPair:
    secret: int
    public: G2Point

    @property
    def public_bytes(self) -> bytes:
        return bn254.g2_to_bytes(self.public)


def keygen(seed: bytes | str) -> KeyPair:
    """Derive a keypair from a nonempty seed; same seed, same pair."""
    if isinstance(seed, str):
        seed = seed.encode()
    if not seed:
        raise ValueError("keygen seed must be nonempty")
    material = expand_message_xmd(seed, DST_KEYGEN, 48)
    secret = int.from_bytes(material, "big") % (bn254.R - 1) + 1
    return KeyPair(secret=secret, public=bn254.g2_base_mul(secret))


def sign(secret: int, message: bytes) -> G1Point:
    if not message:
        raise ValueError("cannot sign an empty message")
    return bn254.g1_mul(hash_to_curve(message), secret)


def aggregate(signatures: Sequence[G1Point]) -> G1Point:
    if not signatures:
        raise ValueError("cannot aggregate zero signatures")
    acc: G1Point = None
    for sig in signatures:
        acc = bn254.g1_add(acc, sig)
    return acc


def aggregate_pubkeys(pubkeys: Sequence[G2Point], bitmap: Sequence[bool]) -> G2Point:
    """Sum the public keys selected by the bitmap."""
    if len(pubkeys) != len(bitmap):
        raise ValueError(f"bitmap length {len(bitmap)} != validator count {len(pubkeys)}")
    acc: G2Point = None
    for pk, included in zip(pubkeys, bitmap):
        if included:
            acc = bn254.g2_add(acc, pk)
    return acc


@lru_cache(maxsize=16384)
def _pairing_equal_cached(sig_bytes: bytes, point_bytes: bytes, apk_bytes: bytes) -> bool:
    sig = bn254.g1_from_bytes(sig_bytes)
    point = bn254.g1_from_bytes(point_bytes)
    apk = bn254.g2_from_bytes(apk_bytes)
    return bn254.pairing(sig, bn254.G2_GEN) == bn254.pairing(point, apk)


@lru_cache(maxsize=16384)
def _pairing_product_cached(sig_bytes: bytes, point_bytes: bytes, apk_bytes: bytes) -> bool:
    sig = bn254.g1_from_bytes(sig_bytes)
    point = bn254.g1_from_bytes(point_bytes)
    apk = bn254.g2_from_bytes(apk_bytes)
    return bn254.pairing_check([(bn254.g1_neg(sig), bn254.G2_GEN), (point, apk)])


def verify_at_point(apk: G2Point, message_point: G1Point, signature: G1Point) -> bool:
    """Check e(sig, g2) == e(point, apk) with a precomputed message point."""
    if apk is None or signature is None or message_point is None:
        return False
    return _pairing_equal_cached(
        bn254.g1_to_bytes(signature), bn254.g1_to_bytes(message_point), bn254.g2_to_bytes(apk)
    )


def verify_product(apk: G2Point, message_point: G1Point, signature: G1Point) -> bool:
    """Same predicate as verify_at_point via the product-of-pairings route."""
    if apk is None or signature is None or message_point is None:
        return False
    return _pairing_product_cached(
        bn254.g1_to_bytes(signature), bn254.g1_to_bytes(message_point), bn254.g2_to_bytes(apk)
    )


def verify_aggregate(apk: G2Point, message: bytes, signature: G1Point) -> bool:
    """Check an aggregate (or single) signature against an aggregate pubkey."""
    if apk is None or signature is None:
        return False
    if not bn254.g1_is_on_curve(signature):
        return False
    return verify_at_point(apk, hash_to_curve(message), signature)


def verify_single(pubkey: G2Point, message: bytes, signature: G1Point) -> bool:
    return verify_aggregate(pubkey, message, signature)
