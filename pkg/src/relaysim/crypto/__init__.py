"""Pairing-based signature primitives, Merkle receipt tries, and commitments."""

from .bls import (
    KeyPair,
    aggregate,
    aggregate_pubkeys,
    keygen,
    sign,
    verify_aggregate,
    verify_at_point,
    verify_single,
)
from .commitment import (
    ValidatorEntry,
    ValidatorSet,
    ValidatorSetCommitment,
    commit_validator_set,
    commitment_digest,
)
from .hash_to_curve import BaseFieldPair, base_to_g, hash_to_base, hash_to_curve
from .merkle import MerkleProof, merkle_prove, merkle_root, merkle_verify

__all__ = [
    "KeyPair",
    "keygen",
    "sign",
    "aggregate",
    "aggregate_pubkeys",
    "verify_aggregate",
    "verify_at_point",
    "verify_single",
    "BaseFieldPair",
    "hash_to_base",
    "base_to_g",
    "hash_to_curve",
    "MerkleProof",
    "merkle_root",
    "merkle_prove",
    "merkle_verify",
    "ValidatorEntry",
    "ValidatorSet",
    "ValidatorSetCommitment",
    "commit_validator_set",
    "commitment_digest",
]
