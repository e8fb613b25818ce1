"""Length functions, encoders and decoders for the integer codes.

Symbols are positive Python ints of any size.  ``floor_log2`` is always
taken from ``int.bit_length`` so that no float ever decides which dyadic
block a symbol belongs to.
"""

from __future__ import annotations

import enum
import threading
from collections.abc import Iterable
from dataclasses import dataclass

from .bitio import (
    HEADER_SIZE,
    BitReader,
    BitString,
    BitWriter,
    ContainerError,
    StreamExhausted,
    pack_header,
    unpack_header,
)


class CodeId(enum.IntEnum):
    """Code selector; the integer value is the container's code id byte."""

    ALPHA = 0
    BETA = 1
    GAMMA = 2
    DELTA = 3
    DELTA_DELTA = 4
    NU = 5

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, name) -> CodeId:
        if isinstance(name, CodeId):
            return name
        key = str(name).strip().lower().replace("-", "_")
        key = {"dd": "delta_delta", "deltadelta": "delta_delta"}.get(key, key)
        try:
            return cls[key.upper()]
        except KeyError:
            raise ValueError(f"unknown code {name!r}; expected one of "
                             f"{', '.join(c.label for c in cls)}") from None


class TruncatedCodeword(ValueError):
    """The stream ended in the middle of a codeword."""


class UnsupportedCode(ValueError):
    """The operation is not defined for this code (beta is not prefix-free)."""


PREFIX_CODES = (CodeId.GAMMA, CodeId.DELTA, CodeId.DELTA_DELTA, CodeId.NU)

# Block indices t = floor(log2 a) whose nu lengths are shortened by 1 and 2.
S_NU1 = frozenset([7, *range(15, 25), *range(37, 51), *range(68, 85)])
S_NU2 = frozenset([*range(31, 37), *range(63, 68)])

# Explicit nu adjustments for a <= 7; they take precedence over block rules.
_SMALL_NU_DELTA = {1: 0, 2: -1, 3: 1, 4: 1, 5: 1, 6: 2, 7: 2}
_SMALL_DD_LEN = {2: 3, 3: 5, 6: 6, 7: 6}


def _check_symbol(a) -> int:
    if isinstance(a, bool) or not isinstance(a, int):
        raise TypeError(f"symbol must be an int, got {type(a).__name__}")
    if a < 1:
        raise ValueError(f"symbol must be >= 1, got {a}")
    return a


def floor_log2(a: int) -> int:
    return a.bit_length() - 1


def delta_block_length(t: int) -> int:
    """Elias delta length shared by every symbol of block t."""
    return 1 + t + 2 * floor_log2(1 + t)


def block_adjust(t: int) -> int:
    if t in S_NU1:
        return -1
    if t in S_NU2:
        return -2
    return 0


def nu_delta(a: int) -> int:
    """Length adjustment of the nu code relative to Elias delta."""
    _check_symbol(a)
    if a <= 7:
        return _SMALL_NU_DELTA[a]
    return block_adjust(floor_log2(a))


@dataclass(frozen=True)
class BlockLength:
    """Shared nu length of the dyadic block ``[2**t, 2**(t+1))`` for t >= 3."""

    t: int
    count: int
    base_len: int
    adj: int
    final_len: int


def nu_block(t: int) -> BlockLength:
    if t < 3:
        raise ValueError("blocks below t=3 do not share a single nu length")
    base = delta_block_length(t)
    adj = block_adjust(t)
    return BlockLength(t, 1 << t, base, adj, base + adj)


def uniform_block_length(code: CodeId, t: int) -> int | None:
    """Length shared by all symbols in block t, or None if they differ."""
    code = CodeId.parse(code)
    if code is CodeId.ALPHA:
        return 1 if t == 0 else None
    if code is CodeId.BETA:
        return 1 + t
    if code is CodeId.GAMMA:
        return 1 + 2 * t
    if code is CodeId.DELTA:
        return delta_block_length(t)
    if t >= 3:
        base = delta_block_length(t)
        return base + block_adjust(t) if code is CodeId.NU else base
    if t == 0:
        return 1
    return None


def code_length(code, a: int) -> int:
    """Codeword length in bits of symbol ``a``."""
    code = CodeId.parse(code)
    _check_symbol(a)
    t = floor_log2(a)
    if code is CodeId.ALPHA:
        return a
    if code is CodeId.BETA:
        return 1 + t
    if code is CodeId.GAMMA:
        return 1 + 2 * t
    if code is CodeId.DELTA:
        return delta_block_length(t)
    if code is CodeId.DELTA_DELTA:
        return _SMALL_DD_LEN.get(a) or delta_block_length(t)
    return delta_block_length(t) + nu_delta(a)


# --- canonical nu layout ---------------------------------------------------

class _NuLayout:
    """Canonical code table for all nu lengths up to ``max_len``.

    Symbols are ordered by (length, value).  Every symbol with length <= L
    is either a <= 7 or lies in a block t < L, because final_len(t) > t.
    """

    def __init__(self, max_len: int):
        self.max_len = max_len
        small: dict[int, list[int]] = {}
        for a in range(1, 8):
            small.setdefault(delta_block_length(floor_log2(a)) + _SMALL_NU_DELTA[a], []).append(a)
        blocks: dict[int, list[int]] = {}
        for t in range(3, max_len):
            fl = nu_block(t).final_len
            if fl <= max_len:
                blocks.setdefault(fl, []).append(t)
        self.small = small
        self.blocks = blocks
        self.count = {}
        self.first = {}
        self.lengths = sorted(set(small) | set(blocks))
        code, prev = 0, None
        for ell in self.lengths:
            if prev is not None:
                code = (code + self.count[prev]) << (ell - prev)
            n = len(small.get(ell, ())) + sum(1 << t for t in blocks.get(ell, ()))
            if code + n > 1 << ell:
                raise AssertionError(f"nu lengths overflow the code space at length {ell}")
            self.first[ell] = code
            self.count[ell] = n
            prev = ell

    def layout(self, ell: int) -> tuple[int, int]:
        if ell in self.first:
            return self.first[ell], self.count[ell]
        below = [x for x in self.lengths if x < ell]
        if not below:
            return 0, 0
        prev = below[-1]
        return (self.first[prev] + self.count[prev]) << (ell - prev), 0

    def rank(self, a: int, ell: int) -> int:
        small = self.small.get(ell, [])
        if a <= 7:
            return small.index(a)
        t = floor_log2(a)
        r = len(small)
        for tb in self.blocks[ell]:
            if tb == t:
                return r + (a - (1 << t))
            r += 1 << tb
        raise AssertionError(f"symbol {a} not in the layout for length {ell}")

    def symbol(self, ell: int, r: int) -> int:
        small = self.small.get(ell, [])
        if r < len(small):
            return small[r]
        r -= len(small)
        for t in self.blocks.get(ell, ()):
            if r < 1 << t:
                return (1 << t) + r
            r -= 1 << t
        raise AssertionError(f"rank out of range at length {ell}")


_layout_lock = threading.Lock()
_layout = _NuLayout(64)


def _nu_table(ell: int) -> _NuLayout:
    global _layout
    table = _layout
    if ell <= table.max_len:
        return table
    with _layout_lock:
        if ell > _layout.max_len:
            _layout = _NuLayout(max(ell, 2 * _layout.max_len))
        return _layout


def canonical_layout(ell: int) -> tuple[int, int]:
    """``(first_code_value, count)`` of the canonical nu code at length ``ell``.

    For a length no symbol attains, count is 0 and the first value is where
    the next attained length would continue from.
    """
    if ell < 1:
        raise ValueError("length must be >= 1")
    return _nu_table(ell).layout(ell)


# --- encoders ----------------------------------------------------------------

def _gamma(a: int) -> BitString:
    return BitString(a, 2 * floor_log2(a) + 1)


def _delta(a: int) -> BitString:
    t = floor_log2(a)
    return _gamma(t + 1) + BitString(a - (1 << t), t)


def encode(code, a: int) -> BitString:
    code = CodeId.parse(code)
    _check_symbol(a)
    if code is CodeId.ALPHA:
        return BitString(1, a)
    if code is CodeId.BETA:
        return BitString(a, a.bit_length())
    if code is CodeId.GAMMA:
        return _gamma(a)
    if code is CodeId.DELTA:
        return _delta(a)
    if code is CodeId.DELTA_DELTA:
        if a == 2:
            return BitString.from_str("010")
        if a == 3:
            return _delta(7)
        if a in (6, 7):
            return _delta(6) + BitString(a - 6, 1)
        return _delta(a)
    ell = code_length(CodeId.NU, a)
    table = _nu_table(ell)
    return BitString(table.first[ell] + table.rank(a, ell), ell)


# --- decoders ----------------------------------------------------------------

def _bit(reader: BitReader) -> int:
    try:
        return reader.read_bit()
    except StreamExhausted as e:
        raise TruncatedCodeword(str(e)) from None


def _bits(reader: BitReader, n: int) -> int:
    try:
        return reader.read_bits(n)
    except StreamExhausted as e:
        raise TruncatedCodeword(str(e)) from None


def _unary(reader: BitReader) -> int:
    zeros = 0
    while not _bit(reader):
        zeros += 1
    return zeros


def _decode_gamma(reader: BitReader) -> int:
    n = _unary(reader)
    return (1 << n) | _bits(reader, n)


def _decode_delta_delta(reader: BitReader) -> int:
    m = _decode_gamma(reader)
    if m == 1:
        return 1
    if m == 2:
        return 2  # "010" carries no suffix bit
    if m == 3:
        s = _bits(reader, 2)
        if s == 0b10:
            return 6 + _bit(reader)
        return {0b00: 4, 0b01: 5, 0b11: 3}[s]
    return (1 << (m - 1)) | _bits(reader, m - 1)


def _decode_nu(reader: BitReader) -> int:
    v = ell = 0
    while True:
        v = (v << 1) | _bit(reader)
        ell += 1
        table = _nu_table(ell)
        n = table.count.get(ell)
        if n:
            r = v - table.first[ell]
            if 0 <= r < n:
                return table.symbol(ell, r)


def decode(code, reader: BitReader) -> int:
    """Decode one symbol starting at the reader's position."""
    code = CodeId.parse(code)
    if code is CodeId.BETA:
        raise UnsupportedCode("beta is not a prefix code and cannot be decoded")
    if code is CodeId.ALPHA:
        return _unary(reader) + 1
    if code is CodeId.GAMMA:
        return _decode_gamma(reader)
    if code is CodeId.DELTA:
        m = _decode_gamma(reader)
        return (1 << (m - 1)) | _bits(reader, m - 1)
    if code is CodeId.DELTA_DELTA:
        return _decode_delta_delta(reader)
    return _decode_nu(reader)


def decode_bits(code, bits) -> int:
    """Decode a single codeword given as a ``BitString`` or '0101' string."""
    if isinstance(bits, str):
        bits = BitString.from_str(bits)
    writer = BitWriter()
    writer.write_bits(bits)
    reader = BitReader(writer.getvalue())
    reader.total_bits = bits.length
    return decode(code, reader)


# --- container streams -------------------------------------------------------

def encode_stream(code, symbols: Iterable[int], sink) -> int:
    """Write a container holding ``symbols`` to the binary file ``sink``.

    Returns the number of bytes written.
    """
    code = CodeId.parse(code)
    if code is CodeId.BETA:
        raise UnsupportedCode("beta streams could not be decoded")
    writer = BitWriter()
    count = 0
    for a in symbols:
        writer.write_bits(encode(code, a))
        count += 1
    data = pack_header(int(code), count) + writer.getvalue()
    sink.write(data)
    return len(data)


def decode_stream(source) -> tuple[CodeId, list[int]]:
    """Read a container from bytes or a binary file object."""
    data = source if isinstance(source, (bytes, bytearray, memoryview)) else source.read()
    data = bytes(data)
    code_id, count = unpack_header(data)
    try:
        code = CodeId(code_id)
    except ValueError:
        raise ContainerError(f"unknown code id {code_id}") from None
    if code is CodeId.BETA:
        raise UnsupportedCode("container declares beta, which is not decodable")
    reader = BitReader(data, 8 * HEADER_SIZE)
    out = []
    try:
        for _ in range(count):
            out.append(decode(code, reader))
    except TruncatedCodeword as e:
        raise ContainerError(f"truncated payload after {len(out)} of {count} symbols") from e
    return code, out
