"""Bit-granular I/O over byte buffers.

Bits are packed most-significant-bit first within each byte, and a
partially filled final byte is padded with zeros.
"""

from __future__ import annotations

import struct
from collections.abc import Iterator


class StreamExhausted(EOFError):
    """Raised when a read runs past the last bit of the source."""


class BufferOverflow(OverflowError):
    """Raised when a fixed-capacity writer has no room for more bits."""


class BitString:
    """Immutable finite bit sequence, stored as an integer plus a length.

    ``value`` holds the bits big-endian, so ``BitString(0b010, 3)`` reads
    as "010".  Leading zeros are kept by ``length``.
    """

    __slots__ = ("value", "length")

    def __init__(self, value: int = 0, length: int = 0):
        if length < 0:
            raise ValueError("length must be nonnegative")
        if value < 0 or value >> length:
            raise ValueError(f"value {value} does not fit in {length} bits")
        self.value = value
        self.length = length

    @classmethod
    def from_str(cls, bits: str) -> BitString:
        bits = bits.replace(" ", "")
        if bits.strip("01"):
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(int(bits, 2) if bits else 0, len(bits))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        if not self.length:
            return ""
        return format(self.value, f"0{self.length}b")

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            other = BitString.from_str(other)
        if not isinstance(other, BitString):
            return NotImplemented
        return self.length == other.length and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.value, self.length))

    def __add__(self, other: BitString) -> BitString:
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length - 1, -1, -1):
            yield (self.value >> i) & 1

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def startswith(self, prefix: BitString) -> bool:
        if prefix.length > self.length:
            return False
        return self.value >> (self.length - prefix.length) == prefix.value


class BitWriter:
    """Append-only bit sink backed by a ``bytearray``.

    ``capacity`` (in bytes) bounds the output; ``None`` means unbounded.
    """

    def __init__(self, capacity: int | None = None):
        self.capacity = capacity
        self._buf = bytearray()
        self._acc = 0
        self._nacc = 0  # pending bits in _acc, always < 8 between calls

    @property
    def position(self) -> int:
        return 8 * len(self._buf) + self._nacc

    def write_bits(self, bs: BitString) -> None:
        if self.capacity is not None and self.position + bs.length > 8 * self.capacity:
            raise BufferOverflow(
                f"cannot write {bs.length} bits at position {self.position}"
                f" into a {self.capacity}-byte buffer"
            )
        acc = (self._acc << bs.length) | bs.value
        n = self._nacc + bs.length
        full, rest = divmod(n, 8)
        if full:
            self._buf += (acc >> rest).to_bytes(full, "big")
            acc &= (1 << rest) - 1
        self._acc, self._nacc = acc, rest

    def write_bit(self, bit: int) -> None:
        self.write_bits(BitString(1 if bit else 0, 1))

    def getvalue(self) -> bytes:
        """Return the written bits, zero-padded to a byte boundary."""
        if self._nacc:
            return bytes(self._buf) + bytes([self._acc << (8 - self._nacc)])
        return bytes(self._buf)


class BitReader:
    """Sequential MSB-first reader over a byte sequence."""

    def __init__(self, data: bytes, position: int = 0):
        self.data = bytes(data)
        self.total_bits = 8 * len(self.data)
        if not 0 <= position <= self.total_bits:
            raise ValueError(f"position {position} outside 0..{self.total_bits}")
        self.position = position

    @property
    def remaining(self) -> int:
        return self.total_bits - self.position

    def read_bit(self) -> int:
        pos = self.position
        if pos >= self.total_bits:
            raise StreamExhausted(f"no bit at position {pos}")
        self.position = pos + 1
        return (self.data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_bits(self, n: int) -> int:
        """Read ``n`` bits and return them as a big-endian integer."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n > self.remaining:
            raise StreamExhausted(f"{n} bits requested, {self.remaining} left")
        if n == 0:
            return 0
        start, end = self.position, self.position + n
        first, last = start >> 3, (end - 1) >> 3
        chunk = int.from_bytes(self.data[first:last + 1], "big")
        chunk >>= 8 * (last + 1) - end
        self.position = end
        return chunk & ((1 << n) - 1)

    def read_bitstring(self, n: int) -> BitString:
        return BitString(self.read_bits(n), n)


# Container: 4-byte magic, 1-byte code id, 8-byte little-endian element
# count, then the concatenated codewords zero-padded to a byte boundary.
MAGIC = b"UCI1"
_HEADER = struct.Struct("<4sBQ")
HEADER_SIZE = _HEADER.size


class ContainerError(ValueError):
    """Malformed or truncated container."""


def pack_header(code_id: int, count: int) -> bytes:
    return _HEADER.pack(MAGIC, code_id, count)


def unpack_header(data: bytes) -> tuple[int, int]:
    """Return ``(code_id, count)`` from the first bytes of ``data``."""
    if len(data) < HEADER_SIZE:
        raise ContainerError(f"container shorter than its {HEADER_SIZE}-byte header")
    magic, code_id, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}, expected {MAGIC!r}")
    return code_id, count
