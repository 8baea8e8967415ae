"""Configurable digest selection for commitments and receipt tries."""

from __future__ import annotations

import hashlib

SUPPORTED = ("sha256", "sha3_256", "blake2b_256")


def hash_fn(algo: str = "sha256"):
    """Return a hashlib constructor for a supported 32-byte digest."""
    if algo == "sha256":
        return hashlib.sha256
    if algo == "sha3_256":
        return hashlib.sha3_256
    if algo == "blake2b_256":
        return lambda data=b"": hashlib.blake2b(data, digest_size=32)
    raise ValueError(f"unsupported hash algorithm {algo!r}; pick one of {SUPPORTED}")


def digest(data: bytes, algo: str = "sha256") -> bytes:
    return hash_fn(algo)(data).digest()
