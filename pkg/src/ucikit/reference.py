"""Published values that ``repro`` compares against, as printed."""

GAMMA_DELTA_TABLE = [
    (1, "1", "1"),
    (2, "01 0", "010 0"),
    (3, "01 1", "010 1"),
    (4, "001 00", "011 00"),
    (5, "001 01", "011 01"),
    (6, "001 10", "011 10"),
    (7, "001 11", "011 11"),
    (8, "0001 000", "00100 000"),
    (9, "0001 001", "00100 001"),
    (10, "0001 010", "00100 010"),
    (11, "0001 011", "00100 011"),
    (12, "0001 100", "00100 100"),
    (13, "0001 101", "00100 101"),
    (14, "0001 110", "00100 110"),
    (15, "0001 111", "00100 111"),
    (16, "00001 0000", "00101 0000"),
]

DELTA_DD_TABLE = [
    (1, "1", "1"),
    (2, "0100", "010"),
    (3, "0101", "01111"),
    (4, "01100", "01100"),
    (5, "01101", "01101"),
    (6, "01110", "011100"),
    (7, "01111", "011101"),
    (8, "00100000", "00100000"),
]

# Leading digits of the exact length sums over 2..2**m+1, as printed.
SUM_LEN_DD_68 = "2.32982377e22"
SUM_LEN_NU_132 = "7.891148088e41"
