"""Exact Kraft sums over dyadic rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

from .codes import CodeId, code_length, floor_log2, uniform_block_length


@total_ordering
class Dyadic:
    """Nonnegative rational ``num / 2**shift`` kept in lowest terms."""

    __slots__ = ("num", "shift")

    def __init__(self, num: int = 0, shift: int = 0):
        if num < 0 or shift < 0:
            raise ValueError("Dyadic needs num >= 0 and shift >= 0")
        if num == 0:
            shift = 0
        else:
            tz = min((num & -num).bit_length() - 1, shift)
            num >>= tz
            shift -= tz
        self.num = num
        self.shift = shift

    @classmethod
    def pow2(cls, exponent: int) -> Dyadic:
        """2**exponent; exponent may be negative."""
        if exponent >= 0:
            return cls(1 << exponent, 0)
        return cls(1, -exponent)

    def __add__(self, other: Dyadic) -> Dyadic:
        if not isinstance(other, Dyadic):
            return NotImplemented
        s = max(self.shift, other.shift)
        return Dyadic((self.num << (s - self.shift)) + (other.num << (s - other.shift)), s)

    __radd__ = __add__

    def __sub__(self, other: Dyadic) -> Dyadic:
        s = max(self.shift, other.shift)
        diff = (self.num << (s - self.shift)) - (other.num << (s - other.shift))
        if diff < 0:
            raise ValueError("Dyadic subtraction would go negative")
        return Dyadic(diff, s)

    def __mul__(self, k: int) -> Dyadic:
        if not isinstance(k, int):
            return NotImplemented
        return Dyadic(self.num * k, self.shift)

    __rmul__ = __mul__

    def _cmp_key(self, other: Dyadic) -> tuple[int, int]:
        s = max(self.shift, other.shift)
        return self.num << (s - self.shift), other.num << (s - other.shift)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.num == other.num and self.shift == other.shift

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b = self._cmp_key(other)
        return a < b

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.shift)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __str__(self) -> str:
        if self.shift == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.shift}"

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.shift})"


ZERO = Dyadic(0)
ONE = Dyadic(1)


def dyadic_add(x: Dyadic, y: Dyadic) -> Dyadic:
    return x + y


def _sum(terms) -> Dyadic:
    total = ZERO
    for d in terms:
        total = total + d
    return total


def kraft_block(code, t: int) -> Dyadic:
    """Exact sum of 2**-L(a) over the block ``2**t <= a < 2**(t+1)``."""
    code = CodeId.parse(code)
    if t < 0:
        raise ValueError("block index must be >= 0")
    ell = uniform_block_length(code, t)
    if ell is not None:
        return Dyadic.pow2(t - ell)
    if code is CodeId.ALPHA:
        # sum_{a=2^t}^{2^(t+1)-1} 2^-a = 2^(1-2^t) - 2^(1-2^(t+1))
        return Dyadic.pow2(1 - (1 << t)) - Dyadic.pow2(1 - (1 << (t + 1)))
    return _sum(Dyadic.pow2(-code_length(code, a)) for a in range(1 << t, 1 << (t + 1)))


def kraft_through_block(code, T: int) -> Dyadic:
    return _sum(kraft_block(code, t) for t in range(T + 1))


def kraft_prefix_sum(code, a_max: int) -> Dyadic:
    """Exact ``sum_{a=1}^{a_max} 2**-L(a)``."""
    code = CodeId.parse(code)
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    top = floor_log2(a_max)
    total = kraft_through_block(code, top - 1) if top else ZERO
    lo = 1 << top
    ell = uniform_block_length(code, top)
    if ell is not None:
        return total + Dyadic.pow2(-ell) * (a_max - lo + 1)
    return total + _sum(Dyadic.pow2(-code_length(code, a)) for a in range(lo, a_max + 1))


def delta_tail(T: int) -> Dyadic:
    """Exact ``sum_{t>T} kraft_block(delta, t)``.

    Blocks sharing s = floor(log2(1+t)) each contribute 2**(-1-2s), and
    there are 2**s of them, so every complete s-group adds 2**(-1-s).
    """
    s0 = floor_log2(1 + T)
    left_in_group = (1 << (s0 + 1)) - 2 - T
    return Dyadic.pow2(-1 - 2 * s0) * left_in_group + Dyadic.pow2(-1 - s0)


def delta_tail_majorant(T: int) -> Dyadic:
    """Geometric upper bound on :func:`delta_tail`: ``2**-(s0)`` with s0 as above."""
    return Dyadic.pow2(-floor_log2(1 + T))


@dataclass
class IdentityReport:
    lhs: Dyadic
    rhs: Dyadic
    expected: Dyadic
    lhs_terms: list[tuple[str, Dyadic, Dyadic]] = field(default_factory=list)
    rhs_terms: list[tuple[str, Dyadic, Dyadic]] = field(default_factory=list)
    delta_partials: list[tuple[int, Dyadic, Dyadic]] = field(default_factory=list)
    nu_total: Dyadic | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _grouped(code: CodeId) -> list[tuple[str, Dyadic]]:
    groups = [("a=2..7", _sum(Dyadic.pow2(-code_length(code, a)) for a in range(2, 8)))]
    runs = [(7, 7), (15, 24), (31, 36), (37, 50), (63, 67), (68, 84)]
    for lo, hi in runs:
        groups.append((f"t={lo}..{hi}" if lo != hi else f"t={lo}",
                       _sum(kraft_block(code, t) for t in range(lo, hi + 1))))
    return groups


# Group values as displayed in the hand derivation, summed per run of blocks.
_PRINTED_DELTA_GROUPS = [Dyadic.pow2(-2), Dyadic.pow2(-7), Dyadic.pow2(-9) * 10,
              Dyadic.pow2(-11) * 6, Dyadic.pow2(-11) * 14,
              Dyadic.pow2(-13) * 5, Dyadic.pow2(-13) * 17]
_PRINTED_NU_GROUPS = [Dyadic.pow2(-3) + Dyadic.pow2(-5) * 2 + Dyadic.pow2(-6), Dyadic.pow2(-6),
              Dyadic.pow2(-8) * 10,
              Dyadic.pow2(-9) * 6, Dyadic.pow2(-10) * 14,
              Dyadic.pow2(-11) * 5, Dyadic.pow2(-12) * 17]


def verify_nu_identity(delta_through: int = 50) -> IdentityReport:
    """Check that the nu adjustments preserve Kraft mass exactly.

    Both sides sum 2**-L over a = 2..7 and over every block in S_NU1 | S_NU2,
    once with delta lengths and once with nu lengths; each must equal
    1187/4096.  Also checks that delta's block partial sums rise strictly
    towards 1 with the exact tail making up the difference, and that the nu
    mass through t = 84 plus the delta tail is exactly 1.
    """
    expected = Dyadic(1187, 12)
    failures = []
    sides = []
    for code, printed in ((CodeId.DELTA, _PRINTED_DELTA_GROUPS), (CodeId.NU, _PRINTED_NU_GROUPS)):
        running = ZERO
        terms = []
        mismatch = None
        for (label, value), want in zip(_grouped(code), printed):
            running = running + value
            terms.append((label, value, running))
            if value != want and mismatch is None:
                mismatch = (f"{code.label}: group {label} sums to {value}, expected {want}"
                            f" (partial sum {running})")
        if mismatch:
            failures.append(mismatch)
        if running != expected:
            failures.append(f"{code.label}: total {running} != {expected}")
        sides.append((running, terms))

    partials = []
    prev = ZERO
    for T in range(delta_through + 1):
        p = prev + kraft_block(CodeId.DELTA, T)
        tail = delta_tail(T)
        partials.append((T, p, tail))
        if not (prev < p < ONE):
            failures.append(f"delta partial sum through t={T} is {p}, not strictly between {prev} and 1")
        if p + tail != ONE:
            failures.append(f"delta partial through t={T} plus tail {tail} != 1")
        if p + delta_tail_majorant(T) < ONE:
            failures.append(f"delta partial through t={T} plus majorant falls below 1")
        prev = p

    nu_total = kraft_through_block(CodeId.NU, 84) + delta_tail(84)
    if nu_total != ONE:
        failures.append(f"nu mass through t=84 plus delta tail is {nu_total}, not 1")

    return IdentityReport(sides[0][0], sides[1][0], expected, sides[0][1], sides[1][1],
                          partials, nu_total, failures)


def nu_total_mass() -> Dyadic:
    """Total Kraft mass of nu: blocks through t=84 plus the delta tail."""
    return kraft_through_block(CodeId.NU, 84) + delta_tail(84)

