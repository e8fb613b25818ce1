"""Decreasing distributions, entropy, average length and expansion ratios.

Spike-uniform distributions put mass ``p1`` on symbol 1 and spread the rest
evenly over ``2, ..., 2**m + 1``.  Their average length is computed from
an exact integer length sum, so even ``m = 132`` is cheap and exact up to
the final high-precision division.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache, singledispatch

import mpmath
import numpy as np

from .codes import CodeId, code_length, floor_log2, uniform_block_length

DEFAULT_DIGITS = 40


def precision_digits() -> int:
    return int(os.environ.get("UCI_PRECISION_DIGITS", DEFAULT_DIGITS))


@dataclass(frozen=True)
class Explicit:
    """Finite distribution ``P(a) = probs[a-1]``."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise ValueError("empty distribution")
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if any(probs[i] < probs[i + 1] for i in range(len(probs) - 1)):
            raise ValueError("probabilities must be non-increasing")
        if all(isinstance(p, (int, Fraction)) for p in probs):
            if sum(probs) != 1:
                raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        elif abs(math.fsum(float(p) for p in probs) - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1 within 1e-12")

    def as_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs])


@dataclass(frozen=True)
class SpikeUniform:
    """``P(1) = p1``, ``P(a) = (1 - p1) / 2**m`` for ``2 <= a <= 2**m + 1``."""

    p1: Decimal
    m: int

    def __post_init__(self):
        p1 = self.p1 if isinstance(self.p1, Decimal) else Decimal(str(self.p1))
        object.__setattr__(self, "p1", p1)
        if not 0 <= p1 <= 1:
            raise ValueError("p1 must lie in [0, 1]")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if p1 < (1 - p1) / (Decimal(2) ** self.m):
            raise ValueError("spike-uniform is not decreasing: p1 < (1-p1)/2**m")

    @classmethod
    def pm(cls, m: int) -> SpikeUniform:
        """The family member with p1 = 1 - 1/m."""
        return cls(1 - Decimal(1) / Decimal(m), m)


@dataclass(frozen=True)
class Geometric:
    """``P(a)`` proportional to ``r**(a-1)``, truncated to ``a <= n``."""

    r: float
    n: int

    def __post_init__(self):
        if not 0 < self.r < 1 or self.n < 1:
            raise ValueError("geometric needs 0 < r < 1 and n >= 1")

    def explicit(self) -> Explicit:
        w = self.r ** np.arange(self.n)
        return Explicit(tuple(w / w.sum()))


@dataclass(frozen=True)
class Zipf:
    """``P(a)`` proportional to ``a**-s``, truncated to ``a <= n``."""

    s: float
    n: int

    def __post_init__(self):
        if self.s <= 1 or self.n < 1:
            raise ValueError("zipf needs s > 1 and n >= 1")

    def explicit(self) -> Explicit:
        w = np.arange(1, self.n + 1, dtype=float) ** -self.s
        return Explicit(tuple(w / w.sum()))


Distribution = Explicit | SpikeUniform | Geometric | Zipf


def parse_distribution(spec: str) -> Distribution:
    """Parse ``explicit:p1,p2,...``, ``spike:p1,m``, ``geom:r,N`` or ``zipf:s,N``."""
    kind, _, rest = spec.partition(":")
    args = [x.strip() for x in rest.split(",") if x.strip()]
    kind = kind.strip().lower()
    try:
        if kind == "explicit":
            return Explicit(tuple(Fraction(x) if "/" in x else float(x) for x in args))
        if kind == "spike":
            p1, m = args
            return SpikeUniform(Decimal(p1), int(m))
        if kind in ("geom", "geometric"):
            r, n = args
            return Geometric(float(r), int(n))
        if kind == "zipf":
            s, n = args
            return Zipf(float(s), int(n))
    except (ValueError, ArithmeticError) as e:
        raise ValueError(f"bad distribution spec {spec!r}: {e}") from None
    raise ValueError(f"unknown distribution kind {kind!r} in {spec!r}")


def binary_entropy(p):
    """h(p) in bits; works elementwise on numpy arrays."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(p * np.log2(p) + (1 - p) * np.log1p(-p) / math.log(2))
    return np.where((p == 0) | (p == 1), 0.0, h)


def _mp_binary_entropy(p):
    if p == 0 or p == 1:
        return mpmath.mpf(0)
    return -(p * mpmath.log(p, 2) + (1 - p) * mpmath.log(1 - p, 2))


# --- entropy -----------------------------------------------------------------

@singledispatch
def entropy(d, digits: int | None = None):
    """Shannon entropy in bits."""
    raise TypeError(f"not a distribution: {d!r}")


@entropy.register
def _(d: Explicit, digits=None):
    p = d.as_array()
    p = p[p > 0]
    return mpmath.mpf(-math.fsum(p * np.log2(p)))


@entropy.register
def _(d: SpikeUniform, digits=None):
    with mpmath.workdps((digits or precision_digits()) + 10):
        p1 = mpmath.mpf(str(d.p1))
        return +(_mp_binary_entropy(p1) + d.m * (1 - p1))


@entropy.register(Geometric)
@entropy.register(Zipf)
def _(d, digits=None):
    return entropy(d.explicit())


# --- lengths -----------------------------------------------------------------

def sum_len(code, lo: int, hi: int) -> int:
    """Exact ``sum_{a=lo}^{hi} L(a)`` by whole dyadic blocks."""
    code = CodeId.parse(code)
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    total = 0
    a = lo
    while a <= hi:
        t = floor_log2(a)
        end = min(hi, (1 << (t + 1)) - 1)
        ell = uniform_block_length(code, t)
        if ell is not None:
            total += (end - a + 1) * ell
        elif code is CodeId.ALPHA:
            total += (a + end) * (end - a + 1) // 2
        else:
            total += sum(code_length(code, b) for b in range(a, end + 1))
        a = end + 1
    return total


@lru_cache(maxsize=64)
def _length_table(code: CodeId, n: int) -> np.ndarray:
    arr = np.array([code_length(code, a) for a in range(1, n + 1)], dtype=float)
    arr.flags.writeable = False
    return arr


def lengths(code, n: int) -> np.ndarray:
    """Codeword lengths of symbols 1..n as a float array."""
    return _length_table(CodeId.parse(code), n)


@singledispatch
def avg_len(d, code, digits: int | None = None):
    """Average codeword length ``sum_a P(a) L(a)``."""
    raise TypeError(f"not a distribution: {d!r}")


@avg_len.register
def _(d: Explicit, code, digits=None):
    p = d.as_array()
    return mpmath.mpf(math.fsum(p * lengths(code, len(p))))


@avg_len.register
def _(d: SpikeUniform, code, digits=None):
    code = CodeId.parse(code)
    with mpmath.workdps((digits or precision_digits()) + 10):
        p1 = mpmath.mpf(str(d.p1))
        s = mpmath.mpf(sum_len(code, 2, (1 << d.m) + 1))
        return +(p1 * code_length(code, 1) + (1 - p1) * s / mpmath.mpf(2) ** d.m)


@avg_len.register(Geometric)
@avg_len.register(Zipf)
def _(d, code, digits=None):
    return avg_len(d.explicit(), code)


@dataclass
class RatioReport:
    code: CodeId
    avg_len: mpmath.mpf
    entropy: mpmath.mpf
    ratio: mpmath.mpf
    exact_len_sum: int | None = None

    def as_dict(self, digits: int = DEFAULT_DIGITS) -> dict:
        return {
            "code": self.code.label,
            "avg_len": mpmath.nstr(self.avg_len, digits),
            "entropy": mpmath.nstr(self.entropy, digits),
            "ratio": mpmath.nstr(self.ratio, digits),
            "exact_len_sum": None if self.exact_len_sum is None else str(self.exact_len_sum),
        }


def expansion_ratio(code, d, digits: int | None = None) -> RatioReport:
    """``avg_len / max(1, H)`` together with its ingredients."""
    code = CodeId.parse(code)
    digits = digits or precision_digits()
    with mpmath.workdps(digits + 10):
        a = avg_len(d, code, digits)
        h = entropy(d, digits)
        ratio = a / max(mpmath.mpf(1), h)
    exact = sum_len(code, 2, (1 << d.m) + 1) if isinstance(d, SpikeUniform) else None
    return RatioReport(code, a, h, ratio, exact)


def ratio_float(code, probs: np.ndarray) -> float:
    """Fast double-precision ratio for a decreasing probability vector."""
    p = np.asarray(probs, dtype=float)
    nz = p[p > 0]
    h = -math.fsum(nz * np.log2(nz))
    return math.fsum(p * lengths(code, len(p))) / max(1.0, h)


def pm_lower_bound(m):
    """``2 / (1 + h(1/m))``; accepts an int or an integer array."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 2):
        raise ValueError("m must be >= 2")
    out = 2.0 / (1.0 + binary_entropy(1.0 / m_arr))
    return float(out) if out.ndim == 0 else out


def random_decreasing(seed, support: int) -> Explicit:
    """Seeded random non-increasing distribution on ``1..support``.

    Mixes flat, peaked and spike-plus-tail shapes so that test sweeps reach
    both low- and high-entropy regimes.
    """
    if support < 1:
        raise ValueError("support must be >= 1")
    rng = np.random.default_rng(seed)
    if support == 1:
        return Explicit((1.0,))
    kind = rng.integers(3)
    if kind == 0:
        w = rng.dirichlet(np.full(support, 10 ** rng.uniform(-2, 1)))
    elif kind == 1:
        w = rng.exponential(size=support) ** rng.uniform(1, 8)
    else:
        tail = rng.dirichlet(np.full(support - 1, 10 ** rng.uniform(-1, 1)))
        p1 = rng.uniform(0.3, 0.9999)
        w = np.concatenate([[p1], (1 - p1) * tail])
    w = np.sort(w)[::-1]
    w = w / w.sum()
    return Explicit(tuple(w))


# Published spike-uniform witnesses and the ratio lower bounds they certify.
WITNESS_DD = SpikeUniform(Decimal("0.98678557"), 68)
WITNESS_NU = SpikeUniform(Decimal("0.992886244"), 132)
WITNESS_BOUNDS = {
    (CodeId.DELTA_DELTA, WITNESS_DD): Decimal("2.029899"),
    (CodeId.NU, WITNESS_NU): Decimal("2.023936"),
}
