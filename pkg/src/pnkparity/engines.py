"""Sequence engines for the restricted partition function p(n, k).

p(n, k) counts partitions of n into parts no larger than k.  All three
engines below evaluate the same layered recurrence

    p(n, j) = p(n - j, j) + p(n, j - 1),    j = 1 .. k

starting from the layer p(n, 0) = [n == 0], with p(n, j) = 0 for n < 0.
Within a layer the recurrence has lag j, so a block of j consecutive
values depends only on the previous block.  Each engine exploits that in
its own arithmetic:

* ``exact_values``  -- arbitrary precision integers (numpy object arrays).
* ``mod_values``    -- residues mod m (int64 cumulative sums, chunked).
* ``parity_stream`` -- GF(2) bits packed into Python integers, where the
  lagged feedback x = y ^ (x << j) is solved by prefix-XOR doubling.

Windows that start at n0 > 0 are produced by running the recurrence from
n = 0 and discarding the prefix.  Only the last j values of layer j are
carried between chunks, so memory stays O(k^2 + chunk).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

WORD_BITS = 64
"""Bits per packed word.  Bit i of word w holds n = start + 64*w + i (LSB first)."""

DEFAULT_RESIDUE_CAP = 10**9
DEFAULT_EXACT_CAP = 10**5

_CHUNK = 1 << 20
_BIT_CHUNK = 1 << 22


class ResourceLimitError(RuntimeError):
    """A request exceeded a configured size cap."""


@dataclass
class Caps:
    residues: int = DEFAULT_RESIDUE_CAP
    exact: int = DEFAULT_EXACT_CAP


CAPS = Caps()
"""Process-wide caps used when a call does not pass ``cap`` explicitly."""


@contextmanager
def resource_caps(residues: Optional[int] = None, exact: Optional[int] = None):
    """Temporarily override the process-wide caps."""
    saved = Caps(CAPS.residues, CAPS.exact)
    if residues is not None:
        CAPS.residues = residues
    if exact is not None:
        CAPS.exact = exact
    try:
        yield CAPS
    finally:
        CAPS.residues, CAPS.exact = saved.residues, saved.exact


@dataclass(frozen=True)
class PartitionParams:
    k: int
    m: int = 2

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise ValueError(f"modulus must be >= 2, got {self.m!r}")


@dataclass(frozen=True, eq=False)
class ModSequence:
    """Window ``p(start + i, k) mod m`` for ``i in range(len(values))``."""

    params: PartitionParams
    start: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if vals.size and (vals.min() < 0 or vals.max() >= self.params.m):
            raise ValueError("residues must lie in [0, m)")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, ModSequence):
            return NotImplemented
        return (self.params == other.params and self.start == other.start
                and np.array_equal(self.values, other.values))

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def __getitem__(self, n: int) -> int:
        """Residue at absolute index ``n``."""
        if not self.start <= n < self.stop:
            raise IndexError(f"n={n} outside window [{self.start}, {self.stop})")
        return int(self.values[n - self.start])


@dataclass(frozen=True, eq=False)
class ParityBitStream:
    """Parities of p(n, k) packed LSB-first into 64-bit words."""

    params: PartitionParams
    start: int
    count: int
    words: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.params.m != 2:
            raise ValueError("parity streams require m = 2")
        words = np.ascontiguousarray(self.words, dtype=np.uint64).copy()
        if len(words) != -(-self.count // WORD_BITS):
            raise ValueError("word count does not match bit count")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    def __len__(self):
        return self.count

    def __eq__(self, other):
        if not isinstance(other, ParityBitStream):
            return NotImplemented
        return (self.params == other.params and self.start == other.start
                and self.count == other.count
                and np.array_equal(self.words, other.words))

    @classmethod
    def from_int(cls, k: int, start: int, count: int, bits: int) -> "ParityBitStream":
        nbytes = -(-count // WORD_BITS) * 8
        raw = bits.to_bytes(nbytes, "little")
        words = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
        return cls(PartitionParams(k, 2), start, count, words)

    def to_int(self) -> int:
        return int.from_bytes(self.words.astype("<u8").tobytes(), "little")

    def bits(self) -> np.ndarray:
        """Unpacked parities as a uint8 array."""
        raw = np.frombuffer(self.words.astype("<u8").tobytes(), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.count]

    def popcount(self) -> int:
        return self.to_int().bit_count()

    def unpack(self) -> ModSequence:
        return ModSequence(self.params, self.start, self.bits())


def _check_window(n_start: int, count: int, cap: int):
    if n_start < 0:
        raise ValueError("window start must be non-negative")
    if count < 1:
        raise ValueError("window length must be positive")
    if count > cap:
        raise ResourceLimitError(f"window of {count} values exceeds cap {cap}")


# ---------------------------------------------------------------------------
# exact engine


def _object_layer(lower: np.ndarray, carry: np.ndarray, j: int) -> tuple[np.ndarray, np.ndarray]:
    # out[i] = lower[i] + out[i - j]; carry holds out[-j .. -1]
    c = len(lower)
    rows = -(-c // j) + 1
    buf = np.zeros(rows * j, dtype=object)
    buf[:j] = carry
    buf[j:j + c] = lower
    buf = buf.reshape(rows, j).cumsum(axis=0).reshape(-1)
    return buf[j:j + c], buf[c:c + j]


def exact_columns(k_max: int, n_max: int, cap: Optional[int] = None
                  ) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(k, [p(0,k), ..., p(n_max,k)])`` for k = 1 .. k_max.

    The values are Python integers held in an object array.  One pass
    produces every column, which is cheaper than calling
    :func:`exact_values` once per k.
    """
    PartitionParams(k_max, 2)
    _check_window(0, n_max + 1, CAPS.exact if cap is None else cap)
    layer = np.zeros(n_max + 1, dtype=object)
    layer[0] = 1
    for j in range(1, k_max + 1):
        layer, _ = _object_layer(layer, np.zeros(j, dtype=object), j)
        yield j, layer


def exact_values(k: int, n_max: int, cap: Optional[int] = None) -> list[int]:
    """Exact values p(0, k) .. p(n_max, k) as Python integers."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    column = None
    for _, column in exact_columns(k, n_max, cap):
        pass
    return [int(v) for v in column]


# ---------------------------------------------------------------------------
# residue engine


def _residue_layer(lower: np.ndarray, carry: np.ndarray, j: int, m: int
                   ) -> tuple[np.ndarray, np.ndarray]:
    c = len(lower)
    rows = -(-c // j) + 1
    buf = np.zeros(rows * j, dtype=np.int64)
    buf[:j] = carry
    buf[j:j + c] = lower
    buf = buf.reshape(rows, j)
    if rows * (m - 1) < 2**62:
        np.cumsum(buf, axis=0, out=buf)
        buf %= m
    else:
        for r in range(1, rows):
            buf[r] = (buf[r] + buf[r - 1]) % m
    buf = buf.reshape(-1)
    return buf[j:j + c], buf[c:c + j].copy()


def _residue_chunks(k: int, m: int, stop: int, chunk: int = _CHUNK) -> Iterator[tuple[int, np.ndarray]]:
    carries = [np.zeros(j, dtype=np.int64) for j in range(k + 1)]
    pos = 0
    while pos < stop:
        c = min(chunk, stop - pos)
        layer = np.zeros(c, dtype=np.int64)
        if pos == 0:
            layer[0] = 1 % m
        for j in range(1, k + 1):
            layer, carries[j] = _residue_layer(layer, carries[j], j, m)
        yield pos, layer
        pos += c


def mod_values(params: PartitionParams, n_start: int, count: int,
               cap: Optional[int] = None) -> ModSequence:
    """Window of ``count`` residues p(n, k) mod m starting at ``n_start``."""
    _check_window(n_start, count, CAPS.residues if cap is None else cap)
    out = np.empty(count, dtype=np.int64)
    stop = n_start + count
    for pos, block in _residue_chunks(params.k, params.m, stop):
        lo = max(pos, n_start)
        hi = pos + len(block)
        if hi > lo:
            out[lo - n_start:hi - n_start] = block[lo - pos:]
    return ModSequence(params, n_start, out)


# ---------------------------------------------------------------------------
# bit-packed parity engine


def _xor_prefix(y: int, j: int, nbits: int, mask: int) -> int:
    # solve x = y ^ (x << j) on nbits bits: x = y ^ y<<j ^ y<<2j ^ ...
    x = y
    s = j
    while s < nbits:
        x ^= (x << s) & mask
        s <<= 1
    return x


def _parity_chunks(k: int, stop: int, chunk: int = _BIT_CHUNK) -> Iterator[tuple[int, int, int]]:
    tails = [0] * (k + 1)
    pos = 0
    while pos < stop:
        c = min(chunk, stop - pos)
        mask = (1 << c) - 1
        layer = 1 if pos == 0 else 0
        for j in range(1, k + 1):
            # previous chunk's last j bits of this layer feed positions 0 .. j-1
            y = layer ^ (tails[j] & mask)
            layer = _xor_prefix(y, j, c, mask)
            if c >= j:
                tails[j] = layer >> (c - j)
            else:
                tails[j] = (tails[j] >> c) | (layer << (j - c))
        yield pos, c, layer
        pos += c


def parity_stream(k: int, n_start: int, count: int,
                  cap: Optional[int] = None) -> ParityBitStream:
    """Parities of p(n, k) for n in [n_start, n_start + count), bit-packed."""
    PartitionParams(k, 2)
    _check_window(n_start, count, CAPS.residues if cap is None else cap)
    stop = n_start + count
    acc = 0
    for pos, c, bits in _parity_chunks(k, stop):
        hi = pos + c
        if hi <= n_start:
            continue
        if pos >= n_start:
            acc |= bits << (pos - n_start)
        else:
            acc |= bits >> (n_start - pos)
    return ParityBitStream.from_int(k, n_start, count, acc)


# ---------------------------------------------------------------------------
# cross-engine check


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    first_mismatch: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_window(seq: ModSequence, cap: Optional[int] = None) -> CheckReport:
    """Re-derive ``seq`` with every engine and check the recurrence inside it.

    Returns the first absolute index where anything disagrees.
    """
    k, m = seq.params.k, seq.params.m
    n0, count = seq.start, len(seq)
    got = seq.values
    mismatches: list[tuple[int, str]] = []

    ref = mod_values(seq.params, n0, count).values
    bad = np.flatnonzero(ref != got)
    if bad.size:
        mismatches.append((n0 + int(bad[0]), "residue engine disagrees"))

    exact = np.array(exact_values(k, seq.stop - 1, cap=cap)[n0:], dtype=object) % m
    bad = np.flatnonzero(exact.astype(np.int64) != got)
    if bad.size:
        mismatches.append((n0 + int(bad[0]), "exact engine disagrees"))

    if m == 2:
        bits = parity_stream(k, n0, count).bits()
        bad = np.flatnonzero(bits != got)
        if bad.size:
            mismatches.append((n0 + int(bad[0]), "bit engine disagrees"))

    if k >= 2:
        lower = mod_values(PartitionParams(k - 1, m), n0, count).values
        # p(n,k) - p(n-k,k) - p(n,k-1) == 0 wherever n-k is inside the window
        # or n - k < 0 (then the lagged term is 0 by convention)
        lag = np.zeros(count, dtype=np.int64)
        if count > k:
            lag[k:] = got[:count - k]
        lag_known = np.zeros(count, dtype=bool)
        lag_known[k:] = True
        if n0 < k:
            lag_known[: k - n0] = True
        resid = (got - lag - lower) % m
        bad = np.flatnonzero(lag_known & (resid != 0))
        if bad.size:
            mismatches.append((n0 + int(bad[0]), "recurrence violated"))
    if n0 == 0 and got[0] != 1 % m:
        mismatches.append((0, "p(0, k) must be 1"))

    if not mismatches:
        return CheckReport(True)
    idx, why = min(mismatches)
    return CheckReport(False, idx, why)


def self_check(k: int, m: int, window: Sequence[int] | range,
               cap: Optional[int] = None) -> CheckReport:
    """Compare all engines on ``window`` (a ``range`` or ``(start, stop)`` pair)."""
    if isinstance(window, range):
        start, stop = window.start, window.stop
    else:
        start, stop = window
    if stop - start < k + 1:
        raise ValueError("window must hold at least k + 1 values")
    seq = mod_values(PartitionParams(k, m), start, stop - start)
    return check_window(seq, cap=cap)
