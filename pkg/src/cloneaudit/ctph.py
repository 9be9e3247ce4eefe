"""Context-triggered piecewise hashing (CTPH).

Produces fuzzy digests of byte streams and scores digest pairs on a 0-100
scale.  A 7-byte rolling hash decides piece boundaries; each piece
contributes one base64 symbol derived from an FNV-style hash.  Digests of
the same input are string-identical across runs and platforms, so digests
can be cached and compared later without access to the original bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

_B64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/"
_HASH_INIT = 0x28021967
_HASH_PRIME = 0x01000193
_U32 = 0xFFFFFFFF

MIN_BLOCKSIZE = 3
SIG_LENGTH = 64  # max symbols in the low-resolution signature
ROLLING_WINDOW = 7


class CtphError(ValueError):
    """Raised for empty inputs or malformed digests."""


@dataclass(frozen=True)
class FuzzyHash:
    """A CTPH digest: block size plus signatures at two adjacent resolutions.

    ``sig_lo`` is computed with piece boundaries triggered at ``block_size``
    (at most 64 symbols); ``sig_hi`` at ``2 * block_size`` (at most 32).
    """

    block_size: int
    sig_lo: str
    sig_hi: str

    def __post_init__(self):
        bs = self.block_size
        if bs < MIN_BLOCKSIZE or bs % MIN_BLOCKSIZE != 0 or (bs // MIN_BLOCKSIZE) & (bs // MIN_BLOCKSIZE - 1):
            raise CtphError(f"block size {bs} is not 3*2^i")
        for sig, cap in ((self.sig_lo, SIG_LENGTH), (self.sig_hi, SIG_LENGTH // 2)):
            if len(sig) > cap:
                raise CtphError(f"signature longer than {cap} symbols")
            if any(ch not in _B64 for ch in sig):
                raise CtphError("signature contains non-base64 symbols")

    def __str__(self):
        return f"{self.block_size}:{self.sig_lo}:{self.sig_hi}"

    @classmethod
    def parse(cls, text: str) -> "FuzzyHash":
        parts = text.split(":")
        if len(parts) != 3:
            raise CtphError(f"malformed digest {text!r}")
        try:
            bs = int(parts[0])
        except ValueError:
            raise CtphError(f"malformed block size in {text!r}") from None
        return cls(bs, parts[1], parts[2])


class _RollingHash:
    """Recursive hash over the last 7 bytes; drives piece boundaries."""

    __slots__ = ("h1", "h2", "h3", "window", "n")

    def __init__(self):
        self.h1 = 0
        self.h2 = 0
        self.h3 = 0
        self.window = bytearray(ROLLING_WINDOW)
        self.n = 0

    def update(self, c: int) -> int:
        self.h2 = (self.h2 - self.h1 + ROLLING_WINDOW * c) & _U32
        self.h1 = (self.h1 + c - self.window[self.n]) & _U32
        self.window[self.n] = c
        self.n = (self.n + 1) % ROLLING_WINDOW
        self.h3 = ((self.h3 << 5) ^ c) & _U32
        return (self.h1 + self.h2 + self.h3) & _U32


def _piecewise(data: bytes, block_size: int) -> tuple[str, str, int]:
    """One pass at a fixed block size.

    Returns (sig_lo, sig_hi, committed piece count at block_size).  Once a
    signature is full, later pieces fold into its final symbol instead of
    being dropped, so the tail of a long input still influences the digest.
    """
    lo: list[str] = []
    hi: list[str] = []
    lo_tail: str | None = None
    hi_tail: str | None = None
    h_lo = _HASH_INIT
    h_hi = _HASH_INIT
    roll = _RollingHash()
    double = block_size * 2
    s = 0
    for c in data:
        s = roll.update(c)
        h_lo = ((h_lo * _HASH_PRIME) ^ c) & _U32
        h_hi = ((h_hi * _HASH_PRIME) ^ c) & _U32
        if s % block_size == block_size - 1:
            if len(lo) < SIG_LENGTH - 1:
                lo.append(_B64[h_lo % 64])
                h_lo = _HASH_INIT
            else:
                lo_tail = _B64[h_lo % 64]
        if s % double == double - 1:
            if len(hi) < SIG_LENGTH // 2 - 1:
                hi.append(_B64[h_hi % 64])
                h_hi = _HASH_INIT
            else:
                hi_tail = _B64[h_hi % 64]
    if s != 0:
        lo_tail = _B64[h_lo % 64]
        hi_tail = _B64[h_hi % 64]
    return (
        "".join(lo) + (lo_tail or ""),
        "".join(hi) + (hi_tail or ""),
        len(lo),
    )


def ctph_digest(data: bytes) -> FuzzyHash:
    """Digest a byte stream.

    The initial block size is the smallest 3*2^i whose expected signature
    length fits in 64 symbols; it is halved and the pass repeated while the
    signature stays under half full, so low-entropy inputs still produce
    comparable signatures.
    """
    if not data:
        raise CtphError("cannot digest an empty stream")
    block_size = MIN_BLOCKSIZE
    while block_size * SIG_LENGTH < len(data):
        block_size *= 2
    while True:
        sig_lo, sig_hi, committed = _piecewise(data, block_size)
        if block_size > MIN_BLOCKSIZE and committed < SIG_LENGTH // 2:
            block_size //= 2
        else:
            return FuzzyHash(block_size, sig_lo, sig_hi)


def _eliminate_runs(sig: str) -> str:
    """Collapse runs of more than 3 identical symbols down to 3.

    Long runs carry almost no information and would distort both the
    common-substring gate and the edit distance.
    """
    out: list[str] = []
    for ch in sig:
        if len(out) >= 3 and ch == out[-1] == out[-2] == out[-3]:
            continue
        out.append(ch)
    return "".join(out)


def _has_common_substring(s1: str, s2: str) -> bool:
    """True iff the strings share a substring of length ROLLING_WINDOW."""
    n = ROLLING_WINDOW
    if len(s1) < n or len(s2) < n:
        return False
    grams = {s1[i : i + n] for i in range(len(s1) - n + 1)}
    return any(s2[i : i + n] in grams for i in range(len(s2) - n + 1))


def _edit_distance(s1: str, s2: str) -> int:
    """Weighted edit distance: insert/delete cost 1, substitute cost 2."""
    if s1 == s2:
        return 0
    prev = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1, 1):
        cur = [i]
        for j, c2 in enumerate(s2, 1):
            cur.append(
                min(
                    prev[j] + 1,  # delete from s1
                    cur[j - 1] + 1,  # insert into s1
                    prev[j - 1] + (0 if c1 == c2 else 2),
                )
            )
        prev = cur
    return prev[-1]


def _score_strings(s1: str, s2: str, block_size: int) -> int:
    if len(s1) > SIG_LENGTH or len(s2) > SIG_LENGTH:
        return 0
    if not _has_common_substring(s1, s2):
        return 0
    score = _edit_distance(s1, s2)
    score = score * SIG_LENGTH // (len(s1) + len(s2))
    score = 100 * score // SIG_LENGTH
    score = 100 - score
    # Small block sizes cover little input; cap so short signatures cannot
    # claim a strong match.
    if block_size >= (99 + ROLLING_WINDOW) // ROLLING_WINDOW * MIN_BLOCKSIZE:
        return score
    return min(score, block_size // MIN_BLOCKSIZE * min(len(s1), len(s2)))


def ctph_compare(h1: FuzzyHash, h2: FuzzyHash) -> int:
    """Score two digests on [0, 100].

    Digests whose block sizes differ by more than one doubling are
    incomparable and score 0.  Otherwise the signatures computed at the
    common resolution are compared by weighted edit distance, gated on a
    shared 7-symbol substring.
    """
    bs1, bs2 = h1.block_size, h2.block_size
    if bs1 != bs2 and bs1 != bs2 * 2 and bs2 != bs1 * 2:
        return 0
    s1_lo = _eliminate_runs(h1.sig_lo)
    s1_hi = _eliminate_runs(h1.sig_hi)
    s2_lo = _eliminate_runs(h2.sig_lo)
    s2_hi = _eliminate_runs(h2.sig_hi)
    if bs1 == bs2 and s1_lo == s2_lo:
        return 100
    if bs1 == bs2:
        return max(
            _score_strings(s1_lo, s2_lo, bs1),
            _score_strings(s1_hi, s2_hi, bs1 * 2),
        )
    if bs1 == bs2 * 2:
        return _score_strings(s1_lo, s2_hi, bs1)
    return _score_strings(s1_hi, s2_lo, bs2)


def comparison_grams(h: FuzzyHash) -> frozenset:
    """7-gram sets of both run-compressed signatures, for prefiltering.

    ``ctph_compare`` returns 0 unless the compared signature pair shares a
    7-symbol substring, so two digests with disjoint gram sets always score
    0 under every block-size pairing.
    """
    grams = set()
    for sig in (_eliminate_runs(h.sig_lo), _eliminate_runs(h.sig_hi)):
        for i in range(len(sig) - ROLLING_WINDOW + 1):
            grams.add(sig[i : i + ROLLING_WINDOW])
    return frozenset(grams)
