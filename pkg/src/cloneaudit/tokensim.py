"""Token-set similarity: exact Jaccard and a MinHash prefilter.

Jaccard is the reported metric and is always computed exactly; MinHash
signatures only decide which pairs are worth exact rescoring on large
corpora.
"""

from __future__ import annotations

import hashlib
import struct
from fractions import Fraction


class EmptyTokenSetError(ValueError):
    """Similarity over an empty token set is undefined (filtered upstream)."""


def jaccard(a: frozenset | set, b: frozenset | set) -> float:
    """Exact Jaccard similarity as a percentage, rounded to 4 decimals.

    The ratio is formed in exact rational arithmetic; rounding happens once,
    at the end.
    """
    if not a or not b:
        raise EmptyTokenSetError("jaccard over an empty token set")
    inter = len(a & b)
    union = len(a) + len(b) - inter
    return float(round(Fraction(100 * inter, union), 4))


def _seed_hashers(k: int) -> list[tuple[int, int]]:
    # One (multiplier, offset) pair per position, derived from a fixed
    # label so signatures are stable across runs and machines.
    params = []
    for i in range(k):
        digest = hashlib.blake2b(f"minhash-{i}".encode(), digest_size=16).digest()
        mult, off = struct.unpack("<QQ", digest)
        params.append((mult | 1, off))
    return params


_MASK64 = (1 << 64) - 1


def minhash_signature(tokens: frozenset | set, k: int) -> list[int]:
    """k minimum values under k independent seeded hash functions.

    The fraction of matching positions between two signatures is an
    unbiased estimate of the sets' Jaccard similarity.
    """
    if k < 1:
        raise ValueError("signature length must be >= 1")
    if not tokens:
        raise EmptyTokenSetError("minhash over an empty token set")
    base = [
        int.from_bytes(hashlib.blake2b(t.encode(), digest_size=8).digest(), "little")
        for t in tokens
    ]
    sig = []
    for mult, off in _seed_hashers(k):
        sig.append(min((h * mult + off) & _MASK64 for h in base))
    return sig


def minhash_estimate(sig_a: list[int], sig_b: list[int]) -> float:
    """Estimated Jaccard percentage from two equal-length signatures."""
    if len(sig_a) != len(sig_b) or not sig_a:
        raise ValueError("signatures must be non-empty and equally long")
    matches = sum(1 for x, y in zip(sig_a, sig_b) if x == y)
    return 100.0 * matches / len(sig_a)
