import math

import numpy as np
import pytest

from ucikit import bounds
from ucikit.bounds import (CASES, LEMMA_CLAUSES, ZERO_POINTS, BracketError, CodeId, DomainError,
                           OneMinus, abel_sum, c_n, find_zero, g, h, log2_c_n, recipe,
                           zero_points)

DD, NU = CodeId.DELTA_DELTA, CodeId.NU


def test_c_n_values():
    assert c_n(2) == pytest.approx(0.75)
    assert c_n(3) == pytest.approx(4 / 3 * 4 / 9)
    assert float(log2_c_n(2)) == pytest.approx(math.log2(0.75))
    assert bounds.c_n_decreasing(10**4)


def test_g_matches_formula():
    p1 = 0.3
    x = -math.log2(1 - p1)
    assert float(g(8, 3, 100, p1)) == pytest.approx(8 / (3 + x) * (math.log2(100) + x))
    with pytest.raises(DomainError):
        g(8, 3, 100, 1.0)


def test_h_pivot_rows_are_constant():
    # with c2 = t, h collapses to c1 - t - 1
    for c1, t in ((8, 3), (14, 7), (24, 15), (42, 31)):
        for x in (0.1, 1.0, 5.0):
            assert h(c1, t, t, x) == pytest.approx(c1 - t - 1)
    assert bounds.h_identity_holds(8, 3, 0.4)


def test_q_domain():
    with pytest.raises(DomainError):
        bounds.Q(8, 3, 0.3, 0.5, 2)


def test_abel_sum():
    assert abel_sum([1, 2, 3], [4, 5, 6]) == 32


def test_find_zero():
    assert find_zero(lambda x: x * x - 2, 1, 2) == pytest.approx(math.sqrt(2), abs=1e-9)
    with pytest.raises(BracketError):
        find_zero(lambda x: x * x + 1, 0, 1)


def test_endpoint_expressions():
    e = OneMinus(0, -1)
    assert e.value() == 0.5
    tiny = bounds._p2(833 / 65)
    assert tiny.value() == pytest.approx(1 - 2 ** (-833 / 65), abs=1e-16)
    assert str(bounds._p2(bounds.Fraction(19, 7))) == "1-2^(-19/7)"


def test_zero_points_close_to_published():
    z = zero_points()
    assert len(z) == 14
    for zp in ZERO_POINTS:
        assert abs(z[zp.name] - zp.published) < 1e-4, zp.name


def test_argmax_derivative_matches_finite_difference():
    c = bounds.case(DD, "6")
    f = recipe(c)
    for x in (0.978, 0.981, 0.985):
        fd = (f(x + 1e-7) - f(x - 1e-7)) / 2e-7
        assert float(bounds.dJD(c.c1, c.c2, x, c.L)) == pytest.approx(float(fd), rel=1e-5)


def test_linear_cases_endpoint_values():
    assert float(recipe(bounds.case(DD, "8"))(1.0)) == pytest.approx(2.0625, abs=1e-12)
    assert float(recipe(bounds.case(NU, "13"))(1.0)) == pytest.approx(2.015625, abs=1e-12)


@pytest.mark.parametrize("code", [DD, NU])
def test_case_tables_tile_unit_interval(code):
    assert bounds.check_case_table(code) == []


def test_case_table_detects_gap():
    broken = list(CASES[DD])
    del broken[3]
    saved = CASES[DD]
    try:
        CASES[DD] = tuple(broken)
        assert any("gap" in p for p in bounds.check_case_table(DD))
    finally:
        CASES[DD] = saved


@pytest.mark.parametrize("code,limit", [(DD, 2.0821), (NU, 2.0386)])
def test_verify_cases(code, limit):
    rep = bounds.verify_cases(code, 1e-4)
    assert rep.ok
    assert rep.global_max <= limit + 1e-6
    assert all(c.ok for c in rep.constants)


def test_verify_cases_rejects_coarse_grid():
    with pytest.raises(ValueError):
        bounds.verify_cases(DD, 0.01)


@pytest.mark.parametrize("code", [DD, NU])
def test_length_lemma_clauses(code):
    for cl in LEMMA_CLAUSES[code]:
        rep = bounds.lemma_length_check(code, cl.index)
        assert rep.ok, (cl.index, rep.failures[:3])


def test_length_lemma_example_row():
    # L_nu(255) = 13 sits under the linear clause
    assert 13 < 833 / 64 + 65 / 64 * math.log2(255)


def test_probability_lemmas_small_run():
    rep = bounds.lemma_prob_check(300, 64, seed=1)
    assert rep.ok, rep.failures[:3]
    assert rep.trials > 250


def test_probability_sides_two_point_equality():
    (l4, r4), l6, _ = bounds.probability_sides(np.array([0.6, 0.4]))
    assert l4 == pytest.approx(r4)
