import math
import random
from decimal import Decimal
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from ucikit.codes import CodeId, code_length
from ucikit.dist import (WITNESS_DD, WITNESS_NU, Explicit, Geometric, SpikeUniform, Zipf,
                         avg_len, binary_entropy, entropy, expansion_ratio, parse_distribution,
                         pm_lower_bound, random_decreasing, ratio_float, sum_len)


def test_sum_len_small():
    assert sum_len("delta", 1, 16) == 102
    assert sum_len("gamma", 1, 1) == 1


def test_sum_len_matches_brute_force():
    rng = random.Random(11)
    for _ in range(1000):
        code = rng.choice([CodeId.ALPHA, CodeId.GAMMA, CodeId.DELTA, CodeId.DELTA_DELTA, CodeId.NU])
        hi = rng.randrange(1, 1 << 16)
        lo = rng.randrange(1, hi + 1)
        if hi - lo > 3000:
            lo = hi - rng.randrange(3000)
        assert sum_len(code, lo, hi) == sum(code_length(code, a) for a in range(lo, hi + 1))


def test_sum_len_witnesses():
    assert str(sum_len("dd", 2, 2**68 + 1)).startswith("232982377")
    assert len(str(sum_len("dd", 2, 2**68 + 1))) == 23
    assert str(sum_len("nu", 2, 2**132 + 1)).startswith("7891148088")
    assert len(str(sum_len("nu", 2, 2**132 + 1))) == 42


def test_spike_entropy_brute_force():
    # compare against the explicit distribution summed term by term
    for m in range(0, 13):
        for p1 in ("0.5", "0.9", "0.999"):
            d = SpikeUniform(Decimal(p1), m)
            q = (1 - float(p1)) / 2**m
            probs = [float(p1)] + [q] * 2**m
            h = -math.fsum(p * math.log2(p) for p in probs if p > 0)
            assert float(entropy(d)) == pytest.approx(h, abs=1e-12)
            L = math.fsum(p * code_length("nu", a) for a, p in enumerate(probs, 1))
            assert float(avg_len(d, "nu")) == pytest.approx(L, abs=1e-12)


def test_spike_values():
    assert entropy(SpikeUniform(Decimal("0.5"), 1)) == 1.5
    assert entropy(SpikeUniform.pm(2)) == 2
    assert avg_len(SpikeUniform(Decimal("0.5"), 1), "gamma") == 2


def test_spike_must_be_decreasing():
    with pytest.raises(ValueError):
        SpikeUniform(Decimal("0.1"), 1)


def test_explicit_validation():
    Explicit((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    with pytest.raises(ValueError):
        Explicit((Fraction(1, 4), Fraction(3, 4)))
    with pytest.raises(ValueError):
        Explicit((Fraction(1, 2), Fraction(1, 4)))
    with pytest.raises(ValueError):
        Explicit((0.5, 0.6))


def test_explicit_ratio():
    d = Explicit((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    r = expansion_ratio("gamma", d)
    assert float(r.avg_len) == 2.0 and float(r.entropy) == 1.5
    assert float(r.ratio) == pytest.approx(4 / 3)
    assert ratio_float("gamma", d.as_array()) == pytest.approx(4 / 3)


def test_witness_ratios():
    r1 = expansion_ratio("dd", WITNESS_DD)
    assert r1.ratio > mpmath.mpf("2.029899")
    assert r1.exact_len_sum == sum_len("dd", 2, 2**68 + 1)
    r2 = expansion_ratio("nu", WITNESS_NU)
    assert r2.ratio > mpmath.mpf("2.023936")
    assert mpmath.nstr(r2.ratio, 10).startswith("2.02393613")


def test_precision_env(monkeypatch):
    monkeypatch.setenv("UCI_PRECISION_DIGITS", "60")
    r = expansion_ratio("nu", WITNESS_NU)
    assert r.ratio > mpmath.mpf("2.023936")


def test_parse_distribution():
    assert parse_distribution("spike:0.992886244,132") == WITNESS_NU
    assert isinstance(parse_distribution("geom:0.5,10"), Geometric)
    assert isinstance(parse_distribution("zipf:2,10"), Zipf)
    d = parse_distribution("explicit:1/2,1/4,1/4")
    assert d.probs == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    for bad in ("spike:0.5", "foo:1", "geom:2,3"):
        with pytest.raises(ValueError):
            parse_distribution(bad)


def test_truncated_families_normalise():
    for d in (Geometric(0.7, 50), Zipf(1.3, 200)):
        e = d.explicit()
        assert math.fsum(e.probs) == pytest.approx(1.0, abs=1e-12)
        assert float(avg_len(d, "delta")) > 1


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert np.allclose(binary_entropy(np.array([0.25, 0.75])), 0.8112781244591328)


def test_pm_lower_bound():
    assert pm_lower_bound(2) == 1.0
    assert pm_lower_bound(2**14) > 1.99
    with pytest.raises(ValueError):
        pm_lower_bound(1)


def test_random_decreasing_is_seeded_and_decreasing():
    a = random_decreasing(5, 40).as_array()
    b = random_decreasing(5, 40).as_array()
    assert np.array_equal(a, b)
    assert np.all(np.diff(a) <= 0)
    assert math.fsum(a) == pytest.approx(1.0, abs=1e-12)


def test_degenerate_distribution():
    d = Explicit((1.0,))
    assert entropy(d) == 0
    assert avg_len(d, "delta") == 1
    assert expansion_ratio("nu", d).ratio == 1


def test_alpha_sum_closed_form():
    for n in (1, 2, 10, 1000, 2**40):
        assert sum_len("alpha", 1, n) == n * (n + 1) // 2


def test_witness_entropy_formula():
    h = float(binary_entropy(0.98678557)) + 68 * 0.01321443
    assert float(entropy(WITNESS_DD)) == pytest.approx(h, rel=1e-12)
