"""Numerical checks of the length and probability inequalities behind the
expansion-factor bounds of the delta-delta and nu codes.

Everything here is sampled double-precision evaluation.  A passing check
means no grid point violated the stated inequality; it is not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import optimize

from .codes import CodeId, code_length, floor_log2
from .dist import random_decreasing

LN2 = math.log(2)
LOG2_3 = math.log2(3)


class DomainError(ValueError):
    pass


class BracketError(ValueError):
    pass


# --- basic functions ---------------------------------------------------------

def _neg_log2_one_minus(p1):
    """x = -log2(1 - p1), accurate for p1 near 1."""
    return -np.log1p(-np.asarray(p1, dtype=float)) / LN2


def _check_p1(p1):
    p = np.asarray(p1, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise DomainError("P(1) must lie strictly between 0 and 1")


def g(c1, c2, a, p1):
    """Length bound ``c1 / (c2 - log2(1-p1)) * (log2 a - log2(1-p1))``."""
    _check_p1(p1)
    x = _neg_log2_one_minus(p1)
    return c1 / (c2 + x) * (np.log2(np.asarray(a, dtype=float)) + x)


def h(c1, c2, t, x):
    return (c1 / (c2 + x) - 1) * t + c1 * x / (c2 + x) - 1


def c_n(n: int) -> float:
    return (1 + 1 / n) * (1 - 1 / n) ** (n - 1)


def log2_c_n(n):
    """log2 of C_n, evaluated through log1p; vectorised over ``n``."""
    n = np.asarray(n, dtype=float)
    return (np.log1p(1 / n) + (n - 1) * np.log1p(-1 / n)) / LN2


@lru_cache(maxsize=None)
def _r_const(L: int) -> float:
    """``sum_{n=2}^{L-1} log2 C_n - (L-1) log2 C_L``."""
    if L < 2:
        raise DomainError("L must be >= 2")
    return math.fsum(float(log2_c_n(n)) for n in range(2, L)) - (L - 1) * float(log2_c_n(L))


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log2(np.where(x > 0, x, 1.0)), 0.0)


def D(c1, c2, p1):
    return c1 / (c2 + _neg_log2_one_minus(p1))


def J(c1, c2, p1, L):
    lc = float(log2_c_n(L))
    d = D(c1, c2, p1)
    p1 = np.asarray(p1, dtype=float)
    return d * lc + p1 + d * (_xlog2x(p1) - p1 * lc)


def R(c1, c2, p1, L):
    d = D(c1, c2, p1)
    return 3 + d * (-_neg_log2_one_minus(p1) + _r_const(L))


def Q(c1, c2, p1, p2, L):
    p1a, p2a = np.asarray(p1, dtype=float), np.asarray(p2, dtype=float)
    if np.any(p2a < 0) or np.any(p2a > np.minimum(p1a, 1 - p1a) + 1e-15):
        raise DomainError("need 0 <= P(2) <= min(P(1), 1 - P(1))")
    return J(c1, c2, p1, L) + p2 * R(c1, c2, p1, L)


def _dD(c1, c2, p1):
    p1 = np.asarray(p1, dtype=float)
    return -c1 / (c2 + _neg_log2_one_minus(p1)) ** 2 / ((1 - p1) * LN2)


def dJD(c1, c2, p1, L):
    """Derivative in P(1) of ``J(P(1), L) + D(P(1))``."""
    lc = float(log2_c_n(L))
    p1 = np.asarray(p1, dtype=float)
    d, dd = D(c1, c2, p1), _dD(c1, c2, p1)
    lg = np.log2(p1)
    return dd * (lc + p1 * (lg - lc) + 1) + 1 + d * (lg - lc) + d / LN2


def find_zero(recipe, lo: float, hi: float, tol: float = 1e-9) -> float:
    """Root of ``recipe`` in ``[lo, hi]`` by bisection."""
    flo, fhi = recipe(lo), recipe(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return optimize.bisect(lambda x: float(recipe(x)), lo, hi, xtol=tol, maxiter=200)


def abel_sum(a, b) -> float:
    """Right-hand side of Abel's summation: sum (a_i - a_{i+1}) z_i + a_n z_n."""
    a = np.asarray(a, dtype=float)
    z = np.cumsum(np.asarray(b, dtype=float))
    return math.fsum((a[:-1] - a[1:]) * z[:-1]) + a[-1] * z[-1]


# --- interval endpoint expressions -----------------------------------------

@dataclass(frozen=True)
class Const:
    text: str

    def value(self, zeros=None) -> float:
        return float(Fraction(self.text))

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class OneMinus:
    """``1 - 3**e3 * 2**e2``."""

    e3: Fraction
    e2: Fraction

    def value(self, zeros=None) -> float:
        # stays accurate when the subtracted term is tiny
        return -math.expm1(float(self.e3) * math.log(3) + float(self.e2) * LN2)

    def __str__(self):
        parts = []
        if self.e3:
            parts.append(f"3^({self.e3})")
        parts.append(f"2^({self.e2})")
        return "1-" + "*".join(parts)


@dataclass(frozen=True)
class ZeroRef:
    name: str

    def value(self, zeros=None) -> float:
        if zeros is None:
            zeros = zero_points()
        return zeros[self.name]

    def __str__(self):
        return self.name


def _p2(exp) -> OneMinus:
    """``1 - 2**-exp``."""
    return OneMinus(Fraction(0), -Fraction(exp))


ZERO, HALF, ONE = Const("0"), Const("0.5"), Const("1")


# --- lemma clauses -----------------------------------------------------------

@dataclass(frozen=True)
class LemmaClause:
    code: CodeId
    index: int
    c1: float
    c2: float
    lo: object = None
    hi: object = None
    linear: tuple[Fraction, Fraction] | None = None  # (intercept, slope) in log2 a

    @property
    def c2_text(self) -> str:
        return "log2(3)" if self.c2 == LOG2_3 else f"{self.c2:g}"


def _clauses(code, rows, linear):
    out, lo = [], ZERO
    for i, (c1, c2, hi) in enumerate(rows, 1):
        out.append(LemmaClause(code, i, c1, c2, lo, hi))
        lo = hi
    out.append(LemmaClause(code, len(rows) + 1, 0.0, 0.0, linear=linear))
    return tuple(out)


LEMMA_CLAUSES = {
    CodeId.DELTA_DELTA: _clauses(CodeId.DELTA_DELTA, [
        (5, LOG2_3, OneMinus(Fraction(8, 3), Fraction(-5))),
        (8, 3, _p2(Fraction(7, 3))),
        (14, 7, _p2(Fraction(21, 5))),
        (24, 15, _p2(Fraction(19, 3))),
        (42, 31, _p2(Fraction(145, 17))),
    ], (Fraction(145, 16), Fraction(17, 16))),
    CodeId.NU: _clauses(CodeId.NU, [
        (5, LOG2_3, OneMinus(Fraction(6), Fraction(-10))),
        (6, 2, HALF),
        (8, 3, _p2(Fraction(19, 7))),
        (15, 8, _p2(Fraction(41, 8))),
        (23, 15, _p2(Fraction(65, 11))),
        (34, 25, _p2(Fraction(83, 13))),
        (47, 37, _p2(Fraction(103, 15))),
        (62, 51, _p2(Fraction(68, 9))),
        (98, 85, _p2(Fraction(94, 11))),
        (142, 127, _p2(Fraction(833, 65))),
    ], (Fraction(833, 64), Fraction(65, 64))),
}


@dataclass
class LengthCheckReport:
    clause: LemmaClause
    points: int = 0
    min_slack: float = math.inf
    worst: tuple | None = None  # (a, p1, lhs, rhs)
    failures: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_symbols():
    small = np.arange(3, (1 << 12) + 1)
    blocks = list(range(12, 257))
    syms = [int(a) for a in small] + [1 << t for t in blocks]
    log2a = np.concatenate([np.log2(small.astype(float)), np.array(blocks, dtype=float)])
    return syms, log2a


def lemma_length_check(code, clause: int, p_points: int = 25, tol: float = 1e-9) -> LengthCheckReport:
    """Check ``L(a) <= g(c1, c2, a, P(1))`` for one clause of the length lemma.

    Symbols: every a in [3, 2**12] and a = 2**t for t in [12, 256] (the
    smallest symbol of a block is the tightest, since g grows with a and L
    is constant on the block).  P(1) runs over ``p_points`` values spanning
    the clause's interval, starting 1e-9 inside the open left end.
    """
    code = CodeId.parse(code)
    cl = LEMMA_CLAUSES[code][clause - 1]
    syms, log2a = _check_symbols()
    lens = np.array([code_length(code, a) for a in syms], dtype=float)
    rep = LengthCheckReport(cl)
    if cl.linear is not None:
        k0, k1 = cl.linear
        grid = [(None, float(k0) + float(k1) * log2a)]
    else:
        lo, hi = cl.lo.value(), cl.hi.value()
        grid = []
        for p in np.linspace(lo + 1e-9, hi, p_points):
            x = float(_neg_log2_one_minus(p))
            grid.append((float(p), cl.c1 / (cl.c2 + x) * (log2a + x)))
    for p, rhs in grid:
        slack = rhs - lens
        rep.points += len(slack)
        i = int(np.argmin(slack))
        if slack[i] < rep.min_slack:
            rep.min_slack = float(slack[i])
            rep.worst = (syms[i], p, int(lens[i]), float(rhs[i]))
        for j in np.nonzero(slack < -tol)[0][:5]:
            rep.failures.append((syms[j], p, int(lens[j]), float(rhs[j])))
    return rep


# --- probability inequalities -----------------------------------------------

@dataclass
class ProbCheckReport:
    trials: int = 0
    lemma4_min_slack: float = math.inf
    lemma6_min_slack: dict = field(default_factory=dict)
    abel_max_rel_err: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


LEMMA6_LS = (2, 4, 8, 16)


def probability_sides(probs, Ls=LEMMA6_LS):
    """Both sides of the A_n inequality, of the entropy inequality for each
    L in ``Ls``, and both sides of Abel's formula, for one distribution.

    Terms with P(n) = 0 contribute nothing (0 log 0 = 0).
    """
    p = np.asarray(probs, dtype=float)
    p1 = p[0]
    if len(p) < 2 or p1 >= 1:
        raise DomainError("need at least two symbols with P(1) < 1")
    n = np.arange(1, len(p) + 1, dtype=float)
    lg1m = math.log2(1 - p1)
    pos = p > 0
    T = int(np.nonzero(pos)[0][-1]) + 1  # last symbol with positive mass
    lc = log2_c_n(np.arange(2, max(len(p), 3)))  # log2 C_n for n = 2..N-1

    a_n = np.zeros_like(p)
    with np.errstate(divide="ignore"):
        a_n[pos] = np.log2(p[pos]) - lg1m + np.log2(n[pos])
    tail = p[1:]
    lhs4 = math.fsum(tail * a_n[1:])
    rhs4 = p[1] + math.fsum(p[2:] * lc[: len(p) - 2])

    H = -math.fsum(_xlog2x(p))
    p2 = p[1]
    lhs6 = math.fsum(p[2:] * (np.log2(n[2:]) - lg1m))
    lemma6 = {}
    for L in Ls:
        lcl = float(log2_c_n(L))
        rhs6 = H + lcl + p1 * (math.log2(p1) - lcl) + p2 * (lg1m + _r_const(L))
        lemma6[L] = (lhs6, rhs6)

    a_seq, b_seq = p[1:T], a_n[1:T]
    abel = (math.fsum(a_seq * b_seq), abel_sum(a_seq, b_seq)) if T >= 2 else (0.0, 0.0)
    return (lhs4, rhs4), lemma6, abel


def lemma_prob_check(trials: int, support_max: int = 256, seed: int = 0, tol: float = 1e-10) -> ProbCheckReport:
    """Sample decreasing distributions and check the A_n inequality, the
    entropy inequality for L in {2, 4, 8, 16} and Abel's identity."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    rep = ProbCheckReport()
    rep.lemma6_min_slack = {L: math.inf for L in LEMMA6_LS}
    i = -1
    while rep.trials < trials:
        i += 1
        support = int(rng.integers(2, support_max + 1))
        p = random_decreasing([seed, i], support).as_array()
        if p[0] >= 1:
            # the tail underflowed; nothing to check, draw again
            continue
        (l4, r4), l6, (ab_l, ab_r) = probability_sides(p)
        rep.trials += 1
        rep.lemma4_min_slack = min(rep.lemma4_min_slack, r4 - l4)
        if l4 > r4 + tol:
            rep.failures.append(f"A_n inequality: trial {i} support {support}: {l4} > {r4}")
        for L, (lhs, rhs) in l6.items():
            rep.lemma6_min_slack[L] = min(rep.lemma6_min_slack[L], rhs - lhs)
            if lhs > rhs + tol:
                rep.failures.append(f"entropy inequality L={L}: trial {i}: {lhs} > {rhs}")
        err = abs(ab_l - ab_r) / max(1.0, abs(ab_l))
        rep.abel_max_rel_err = max(rep.abel_max_rel_err, err)
        if err > tol:
            rep.failures.append(f"Abel identity: trial {i}: {ab_l} vs {ab_r}")
    return rep


def c_n_decreasing(n_max: int = 10**6) -> bool:
    """Sampled check that C_2 > C_3 > ... > C_{n_max}, compared in log space."""
    lc = log2_c_n(np.arange(2, n_max + 1))
    return bool(np.all(np.diff(lc) < 0))


# --- case tables -------------------------------------------------------------

@dataclass(frozen=True)
class CaseSpec:
    """One P(1)-interval of the ratio bound.

    ``p2`` names the P(2) substitution that maximises Q on the interval:
    "p1" or "1-p1" when R >= 0 there, "0" when R <= 0.  ``linear`` cases use
    the closed form k(1 + log2 3/4) + x(1 + k log2 x - k log2 3/4) instead.
    """

    code: CodeId
    case: str
    lo: object
    hi: object
    c1: float
    c2: float
    L: int
    p2: str
    branch: str
    claimed_bound: float
    shape: str | None = None  # "inc", "dec", "dec_inc", "inc_dec"
    linear_k: Fraction | None = None


def _linear_f(k: Fraction):
    k = float(k)
    l34 = math.log2(0.75)

    def f(x):
        x = np.asarray(x, dtype=float)
        return k * (1 + l34) + x + k * _xlog2x(x) - k * l34 * x
    return f


def recipe(case: CaseSpec):
    """The bounding function f(P(1)) for a case."""
    if case.linear_k is not None:
        return _linear_f(case.linear_k)
    c1, c2, L = case.c1, case.c2, case.L
    if case.p2 == "p1":
        return lambda x: Q(c1, c2, x, x, L) + D(c1, c2, x)
    if case.p2 == "1-p1":
        return lambda x: Q(c1, c2, x, 1 - np.asarray(x, dtype=float), L) + D(c1, c2, x)
    return lambda x: J(c1, c2, x, L) + D(c1, c2, x)


def r_recipe(case: CaseSpec):
    """The coefficient of P(2) whose sign justifies the case's substitution."""
    if case.linear_k is not None:
        k = float(case.linear_k)
        return lambda x: 3 + k * (-_neg_log2_one_minus(x) - math.log2(0.75))
    return lambda x: R(case.c1, case.c2, x, case.L)


_DD = CodeId.DELTA_DELTA
_NU = CodeId.NU
_x = ZeroRef

# Transcribed row by row from the two case analyses; bounds are the printed
# constants.
CASES = {
    _DD: (
        CaseSpec(_DD, "1", ZERO, OneMinus(Fraction(8, 3), Fraction(-5)), 5, LOG2_3, 2, "p1", "f1", 1.8454, "dec_inc"),
        CaseSpec(_DD, "2", OneMinus(Fraction(8, 3), Fraction(-5)), HALF, 8, 3, 2, "p1", "f2", 2.0, "inc"),
        CaseSpec(_DD, "3", HALF, _p2(Fraction(7, 3)), 8, 3, 2, "1-p1", "f3", 2.0, "dec_inc"),
        CaseSpec(_DD, "4a", _p2(Fraction(7, 3)), _x("x1"), 14, 7, 4, "1-p1", "f4", 2.0217, "dec_inc"),
        CaseSpec(_DD, "4b", _x("x1"), _p2(Fraction(21, 5)), 14, 7, 4, "0", "f5", 2.0375, "inc"),
        CaseSpec(_DD, "5a", _p2(Fraction(21, 5)), _x("x2"), 24, 15, 7, "1-p1", "f6", 2.0797, "dec"),
        CaseSpec(_DD, "5b", _x("x2"), Const("0.9772"), 24, 15, 7, "0", "f7", 2.0819, "inc"),
        CaseSpec(_DD, "6", Const("0.9772"), _p2(Fraction(19, 3)), 24, 15, 8, "0", "f8", 2.0821, "inc_dec"),
        CaseSpec(_DD, "7", _p2(Fraction(19, 3)), _p2(Fraction(145, 17)), 42, 31, 8, "0", "f9", 2.0767, "inc_dec"),
        CaseSpec(_DD, "8", _p2(Fraction(145, 17)), ONE, 0, 0, 2, "linear", "f10", 2.0625, "inc",
                 linear_k=Fraction(17, 16)),
    ),
    _NU: (
        CaseSpec(_NU, "1", ZERO, OneMinus(Fraction(6), Fraction(-10)), 5, LOG2_3, 2, "p1", "f1", 1.8454, "dec_inc"),
        CaseSpec(_NU, "2", OneMinus(Fraction(6), Fraction(-10)), HALF, 6, 2, 2, "p1", "f11", 2.0, "inc"),
        CaseSpec(_NU, "3a", HALF, _x("x5"), 8, 3, 2, "1-p1", "f3", 2.0, "dec_inc"),
        CaseSpec(_NU, "3b", _x("x5"), _p2(Fraction(19, 7)), 8, 3, 2, "0", "f12", 1.8761, "inc"),
        CaseSpec(_NU, "4", _p2(Fraction(19, 7)), Const("0.92"), 15, 8, 4, "1-p1", "f13", 1.9999, "dec_inc"),
        CaseSpec(_NU, "5a", Const("0.92"), _x("x6"), 15, 8, 5, "1-p1", "f14", 2.0313, "dec"),
        CaseSpec(_NU, "5b", _x("x6"), _p2(Fraction(41, 8)), 15, 8, 5, "0", "f15", 2.0345, "inc_dec"),
        CaseSpec(_NU, "6", _p2(Fraction(41, 8)), _p2(Fraction(65, 11)), 23, 15, 6, "0", "f16", 2.0380, "inc_dec"),
        CaseSpec(_NU, "7", _p2(Fraction(65, 11)), _p2(Fraction(83, 13)), 34, 25, 8, "0", "f17", 2.0376, "inc_dec"),
        CaseSpec(_NU, "8a", _p2(Fraction(83, 13)), _x("x10"), 47, 37, 12, "1-p1", "f18", 2.0375, "dec"),
        CaseSpec(_NU, "8b", _x("x10"), _p2(Fraction(103, 15)), 47, 37, 12, "0", "f19", 2.0381, "inc_dec"),
        CaseSpec(_NU, "9a", _p2(Fraction(103, 15)), _x("x12"), 62, 51, 15, "1-p1", "f20", 2.0386, "dec"),
        CaseSpec(_NU, "9b", _x("x12"), Const("0.9927"), 62, 51, 15, "0", "f21", 2.0386, "inc"),
        CaseSpec(_NU, "10", Const("0.9927"), _p2(Fraction(68, 9)), 62, 51, 16, "0", "f22", 2.0386, "inc_dec"),
        CaseSpec(_NU, "11", _p2(Fraction(68, 9)), _p2(Fraction(94, 11)), 98, 85, 18, "0", "f23", 2.0386, "inc_dec"),
        CaseSpec(_NU, "12", _p2(Fraction(94, 11)), _p2(Fraction(833, 65)), 142, 127, 18, "0", "f24", 2.0372, "dec"),
        CaseSpec(_NU, "13", _p2(Fraction(833, 65)), ONE, 0, 0, 2, "linear", "f25", 2.015625, "inc",
                 linear_k=Fraction(65, 64)),
    ),
}

EXPANSION_FACTOR = {_DD: 2.0821, _NU: 2.0386}


def case(code, name: str) -> CaseSpec:
    code = CodeId.parse(code)
    for c in CASES[code]:
        if c.case == name:
            return c
    raise KeyError(name)


# --- zero points -------------------------------------------------------------

@dataclass(frozen=True)
class ZeroPoint:
    """A root of an R-coefficient ("root") or a maximiser of a p2=0 bound
    ("argmax", found as the root of its derivative)."""

    name: str
    kind: str
    code: CodeId
    case: str
    lo: object
    hi: object
    published: float

    def function(self):
        c = case(self.code, self.case)
        if self.kind == "root":
            return r_recipe(c)
        return lambda x: dJD(c.c1, c.c2, x, c.L)


ZERO_POINTS = (
    ZeroPoint("x1", "root", _DD, "4a", _p2(Fraction(7, 3)), _p2(Fraction(21, 5)), 0.93507),
    ZeroPoint("x2", "root", _DD, "5a", _p2(Fraction(21, 5)), Const("0.9765"), 0.97202),
    ZeroPoint("x3", "argmax", _DD, "6", Const("0.9772"), _p2(Fraction(19, 3)), 0.98085),
    ZeroPoint("x4", "argmax", _DD, "7", _p2(Fraction(19, 3)), _p2(Fraction(145, 17)), 0.98933),
    ZeroPoint("x5", "root", _NU, "3a", HALF, _p2(Fraction(19, 7)), 0.81876),
    ZeroPoint("x6", "root", _NU, "5a", Const("0.92"), _p2(Fraction(41, 8)), 0.95602),
    ZeroPoint("x7", "argmax", _NU, "5b", _x("x6"), _p2(Fraction(41, 8)), 0.96883),
    ZeroPoint("x8", "argmax", _NU, "6", _p2(Fraction(41, 8)), _p2(Fraction(65, 11)), 0.98053),
    ZeroPoint("x9", "argmax", _NU, "7", _p2(Fraction(65, 11)), _p2(Fraction(83, 13)), 0.98735),
    ZeroPoint("x10", "root", _NU, "8a", _p2(Fraction(83, 13)), _p2(Fraction(103, 15)), 0.98876),
    ZeroPoint("x11", "argmax", _NU, "8b", _x("x10"), _p2(Fraction(103, 15)), 0.99114),
    ZeroPoint("x12", "root", _NU, "9a", _p2(Fraction(103, 15)), Const("0.9927"), 0.99195),
    ZeroPoint("x13", "argmax", _NU, "10", Const("0.9927"), _p2(Fraction(68, 9)), 0.99339),
    ZeroPoint("x14", "argmax", _NU, "11", _p2(Fraction(68, 9)), _p2(Fraction(94, 11)), 0.99586),
)


@lru_cache(maxsize=1)
def _zero_values() -> tuple:
    values: dict[str, float] = {}
    for zp in ZERO_POINTS:
        lo, hi = zp.lo.value(values), zp.hi.value(values)
        values[zp.name] = find_zero(zp.function(), lo, hi, tol=1e-12)
    return tuple(values.items())


def zero_points() -> dict[str, float]:
    """Bisection values of x1..x14."""
    return dict(_zero_values())


# --- case verification -------------------------------------------------------

# (branch, point, relation, printed value, tolerance for "=")
CONSTANT_CHECKS = {
    _DD: (
        ("f1", ZERO, "<", 1.8454, None),
        ("f2", HALF, "=", 2.0, 1e-9),
        ("f3", HALF, "=", 2.0, 1e-9),
        ("f4", _x("x1"), "<", 2.0217, None),
        ("f5", _p2(Fraction(21, 5)), "<", 2.0375, None),
        ("f6", _p2(Fraction(21, 5)), "<", 2.0797, None),
        ("f7", Const("0.9772"), "<", 2.0819, None),
        ("f8", _x("x3"), "<", 2.0821, None),
        ("f9", _x("x4"), "<", 2.0767, None),
        ("f10", ONE, "=", 2.0625, 1e-9),
    ),
    _NU: (
        ("f1", ZERO, "<", 1.8454, None),
        ("f11", HALF, "=", 2.0, 1e-9),
        ("f3", HALF, "=", 2.0, 1e-9),
        ("f12", _p2(Fraction(19, 7)), "<", 1.8761, None),
        ("f13", Const("0.92"), "<", 1.9999, None),
        ("f14", Const("0.92"), "<", 2.0313, None),
        ("f15", _x("x7"), "<", 2.0345, None),
        ("f16", _x("x8"), "<", 2.0380, None),
        ("f17", _x("x9"), "<", 2.0376, None),
        ("f18", _p2(Fraction(83, 13)), "<", 2.0375, None),
        ("f19", _x("x11"), "<", 2.0381, None),
        ("f20", _p2(Fraction(103, 15)), "<", 2.0386, None),
        ("f21", Const("0.9927"), "<", 2.0386, None),
        ("f22", _x("x13"), "<", 2.0386, None),
        ("f23", _x("x14"), "<", 2.0386, None),
        ("f24", _p2(Fraction(94, 11)), "<", 2.0372, None),
        ("f25", ONE, "=", 2.015625, 1e-9),
    ),
}


@dataclass
class CaseResult:
    spec: CaseSpec
    lo: float
    hi: float
    max_value: float
    argmax: float
    within_bound: bool
    r_sign_ok: bool
    shape_ok: bool | None

    @property
    def ok(self) -> bool:
        return self.within_bound and self.r_sign_ok and self.shape_ok is not False


@dataclass
class ConstantResult:
    branch: str
    point: str
    x: float
    value: float
    relation: str
    printed: float
    ok: bool


@dataclass
class CasesReport:
    code: CodeId
    grid_step: float
    cases: list[CaseResult]
    constants: list[ConstantResult]
    global_max: float
    global_argmax: float
    factor: float
    table_ok: bool
    table_problems: list[str]

    @property
    def ok(self) -> bool:
        return (self.table_ok and all(c.ok for c in self.cases)
                and all(c.ok for c in self.constants)
                and self.global_max <= self.factor + 1e-6)


def check_case_table(code) -> list[str]:
    """Structural problems in a case table (empty when sound): cases must
    tile (0, 1) end to end and sit inside a lemma clause with the same
    constants."""
    code = CodeId.parse(code)
    cases = CASES[code]
    zeros = zero_points()
    problems = []
    if cases[0].lo != ZERO:
        problems.append(f"first case starts at {cases[0].lo}, not 0")
    if cases[-1].hi != ONE:
        problems.append(f"last case ends at {cases[-1].hi}, not 1")
    for a, b in zip(cases, cases[1:]):
        if a.hi != b.lo:
            problems.append(f"gap or overlap between case {a.case} (..{a.hi}] and ({b.lo}.. case {b.case}")
    for c in cases:
        lo, hi = c.lo.value(zeros), c.hi.value(zeros)
        if not lo < hi:
            problems.append(f"case {c.case} has empty interval ({lo}, {hi}]")
        if c.linear_k is not None:
            cl = LEMMA_CLAUSES[code][-1]
            if cl.linear[1] != c.linear_k:
                problems.append(f"case {c.case} slope {c.linear_k} does not match the linear clause")
            prev = LEMMA_CLAUSES[code][-2].hi.value()
            if lo < prev - 1e-12:
                problems.append(f"case {c.case} uses the linear clause below {prev}")
            continue
        match = [cl for cl in LEMMA_CLAUSES[code] if cl.linear is None
                 and cl.c1 == c.c1 and cl.c2 == c.c2
                 and cl.lo.value() - 1e-12 <= lo and hi <= cl.hi.value() + 1e-12]
        if not match:
            problems.append(f"case {c.case}: no lemma clause with ({c.c1}, {c.c2}) covers ({lo}, {hi}]")
    return problems


def _shape_ok(values: np.ndarray, shape: str | None, eps: float = 1e-12) -> bool | None:
    if shape is None or len(values) < 2:
        return None
    s = np.diff(values)
    if shape == "inc":
        return bool(np.all(s > -eps))
    if shape == "dec":
        return bool(np.all(s < eps))
    signs = np.sign(np.where(np.abs(s) <= eps, 0, s))
    signs = signs[signs != 0]
    first, second = (-1, 1) if shape == "dec_inc" else (1, -1)
    # allowed pattern: first* second*
    k = 0
    while k < len(signs) and signs[k] == first:
        k += 1
    return bool(np.all(signs[k:] == second))


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    return np.linspace(lo, hi, n)


def verify_cases(code, grid_step: float = 1e-4, tol: float = 1e-6) -> CasesReport:
    """Evaluate every case's bounding function on a P(1) grid.

    Each case must stay below its printed bound (+ ``tol``), the P(2)
    coefficient must have the sign the case relies on, sampled values must
    follow the claimed monotonicity pattern, and the printed per-case
    constants must hold at their stated points.
    """
    code = CodeId.parse(code)
    if grid_step > 1e-3:
        raise ValueError("grid_step must be <= 1e-3")
    zeros = zero_points()
    results = []
    gmax, garg = -math.inf, float("nan")
    for c in CASES[code]:
        lo, hi = c.lo.value(zeros), c.hi.value(zeros)
        xs = _grid(lo, hi, grid_step)
        fx = recipe(c)(xs)
        i = int(np.argmax(fx))
        # R vanishes at the zero points that bound its sign, so only the
        # interior is tested.
        rx = r_recipe(c)(xs[1:-1])
        if c.p2 == "0" or c.linear_k is not None:
            r_ok = bool(np.all(rx <= 1e-9))
        else:
            r_ok = bool(np.all(rx >= -1e-9))
        res = CaseResult(c, lo, hi, float(fx[i]), float(xs[i]),
                         bool(fx[i] <= c.claimed_bound + tol), r_ok, _shape_ok(fx, c.shape))
        results.append(res)
        if fx[i] > gmax:
            gmax, garg = float(fx[i]), float(xs[i])

    by_branch = {c.branch: c for c in CASES[code]}
    consts = []
    for branch, point, rel, printed, eq_tol in CONSTANT_CHECKS[code]:
        x = point.value(zeros)
        v = float(recipe(by_branch[branch])(x))
        ok = abs(v - printed) <= eq_tol if rel == "=" else v < printed
        consts.append(ConstantResult(branch, str(point), x, v, rel, printed, bool(ok)))

    problems = check_case_table(code)
    return CasesReport(code, grid_step, results, consts, gmax, garg,
                       EXPANSION_FACTOR[code], not problems, problems)


def h_identity_holds(c1, t, x) -> bool:
    """h(c1, t, t, x) == 2 floor(log2(1+t)) for the pivot rows of the
    length lemma, where the x-dependence cancels."""
    return math.isclose(h(c1, t, t, x), 2 * floor_log2(1 + t), rel_tol=0, abs_tol=1e-9)
