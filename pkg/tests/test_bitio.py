import pytest

from ucikit.bitio import (HEADER_SIZE, BitReader, BitString, BitWriter, BufferOverflow,
                          ContainerError, StreamExhausted, pack_header, unpack_header)


def test_bitstring_keeps_leading_zeros():
    b = BitString.from_str("0010")
    assert b.length == 4 and b.value == 2
    assert str(b) == "0010"
    assert b == "0010"
    assert b != "010"
    assert list(b) == [0, 0, 1, 0]
    assert b[2] == 1 and b[-1] == 0


def test_bitstring_concat_and_prefix():
    a, b = BitString.from_str("01"), BitString.from_str("100")
    assert str(a + b) == "01100"
    assert (a + b).startswith(a)
    assert not a.startswith(a + b)
    assert str(BitString()) == ""


@pytest.mark.parametrize("bad", ["012", "abc"])
def test_bitstring_rejects_non_bits(bad):
    with pytest.raises(ValueError):
        BitString.from_str(bad)


def test_bitstring_value_must_fit():
    with pytest.raises(ValueError):
        BitString(4, 2)


def test_writer_pads_final_byte_with_zeros():
    w = BitWriter()
    w.write_bits(BitString.from_str("101"))
    assert w.position == 3
    assert w.getvalue() == bytes([0b10100000])
    w.write_bits(BitString.from_str("11111"))
    w.write_bit(1)
    assert w.getvalue() == bytes([0b10111111, 0b10000000])


def test_writer_capacity():
    w = BitWriter(capacity=1)
    w.write_bits(BitString(0, 8))
    with pytest.raises(BufferOverflow):
        w.write_bit(0)


def test_reader_msb_first():
    r = BitReader(bytes([0b10110000, 0xFF]))
    assert r.read_bit() == 1
    assert r.read_bits(3) == 0b011
    assert r.read_bits(0) == 0
    assert r.read_bits(6) == 0b000011
    assert r.remaining == 6
    assert r.read_bitstring(6) == "111111"
    with pytest.raises(StreamExhausted):
        r.read_bit()


def test_reader_over_read_leaves_position():
    r = BitReader(b"\x00")
    with pytest.raises(StreamExhausted):
        r.read_bits(9)
    assert r.position == 0


def test_long_random_write_read_round_trip():
    import random
    rng = random.Random(7)
    pieces = [BitString(v, n) for n in (rng.randrange(0, 300) for _ in range(200))
              for v in [rng.getrandbits(n) if n else 0]]
    w = BitWriter()
    for p in pieces:
        w.write_bits(p)
    r = BitReader(w.getvalue())
    assert [r.read_bitstring(p.length) for p in pieces] == pieces


def test_header_layout():
    h = pack_header(5, 3)
    assert len(h) == HEADER_SIZE == 13
    assert h == b"UCI1\x05" + (3).to_bytes(8, "little")
    assert unpack_header(h + b"\xff") == (5, 3)


def test_header_errors():
    with pytest.raises(ContainerError):
        unpack_header(b"UCI1")
    with pytest.raises(ContainerError):
        unpack_header(b"XXXX" + bytes(9))
