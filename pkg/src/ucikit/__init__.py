"""Universal codes for the positive integers.

Elias gamma and delta, the delta-delta and nu variants, exact Kraft sums,
expansion ratios of decreasing distributions, and numerical checks of the
expansion-factor bounds.
"""

from .bitio import BitReader, BitString, BitWriter
from .codes import CodeId, code_length, decode, decode_bits, decode_stream, encode, encode_stream
from .dist import Explicit, SpikeUniform, avg_len, entropy, expansion_ratio, sum_len
from .kraft import Dyadic, kraft_block, kraft_prefix_sum

__all__ = [
    "BitReader", "BitString", "BitWriter", "CodeId", "Dyadic", "Explicit", "SpikeUniform",
    "avg_len", "code_length", "decode", "decode_bits", "decode_stream", "encode",
    "encode_stream", "entropy", "expansion_ratio", "kraft_block", "kraft_prefix_sum", "sum_len",
]
__version__ = "0.1.0"
