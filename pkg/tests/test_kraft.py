from fractions import Fraction

import pytest

from ucikit.codes import CodeId, code_length
from ucikit.kraft import (ONE, ZERO, Dyadic, delta_tail, delta_tail_majorant, kraft_block,
                          kraft_prefix_sum, kraft_through_block, nu_total_mass,
                          verify_nu_identity)


def brute(code, lo, hi):
    return sum(Fraction(1, 2 ** code_length(code, a)) for a in range(lo, hi + 1))


def test_dyadic_normalises():
    assert Dyadic(4, 3) == Dyadic(1, 1)
    assert str(Dyadic(6, 3)) == "3/4"
    assert str(Dyadic(5)) == "5"
    assert Dyadic(0, 9) == ZERO
    assert Dyadic.pow2(-3) + Dyadic.pow2(-3) == Dyadic.pow2(-2)
    assert Dyadic.pow2(2) == 4


def test_dyadic_order_and_sub():
    assert Dyadic(1, 2) < Dyadic(1, 1) < ONE
    assert ONE - Dyadic(1, 2) == Dyadic(3, 2)
    with pytest.raises(ValueError):
        Dyadic(1, 2) - ONE
    with pytest.raises(ValueError):
        Dyadic(-1)
    assert Dyadic(3, 2) == Fraction(3, 4)


@pytest.mark.parametrize("code", list(CodeId))
def test_block_formula_matches_per_symbol_sum(code):
    for t in range(13):
        assert kraft_block(code, t).to_fraction() == brute(code, 1 << t, (1 << (t + 1)) - 1)


def test_specific_blocks():
    assert kraft_block("nu", 7) == Dyadic.pow2(-6)
    assert kraft_block("dd", 1) == Dyadic(5, 5)
    assert kraft_block("delta", 0) == Dyadic(1, 1)


@pytest.mark.parametrize("code", ["delta", "dd"])
def test_first_seven_symbols_sum_to_three_quarters(code):
    assert kraft_prefix_sum(code, 7) == Dyadic(3, 2)


def test_prefix_sum_matches_brute_force():
    for code in ("gamma", "delta", "dd", "nu"):
        for a_max in (1, 5, 100, 1000, 4097):
            assert kraft_prefix_sum(code, a_max).to_fraction() == brute(code, 1, a_max)


def test_delta_tail_closes_partial_sums():
    for T in range(0, 200):
        partial = kraft_through_block("delta", T)
        assert partial < ONE
        assert partial + delta_tail(T) == ONE
        assert delta_tail(T) <= delta_tail_majorant(T)


def test_delta_and_delta_delta_share_partial_sums():
    for T in range(2, 31):
        assert kraft_through_block("dd", T) == kraft_through_block("delta", T)


def test_nu_identity():
    rep = verify_nu_identity()
    assert rep.ok, rep.failures
    assert rep.lhs == rep.rhs == Dyadic(1187, 12)
    assert rep.nu_total == ONE


def test_nu_stays_below_one_before_tail():
    assert kraft_through_block("nu", 86) < ONE
    assert nu_total_mass() == ONE
