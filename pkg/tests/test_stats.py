import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nosig.counts import CountsTable
from nosig.stats import (DegenerateCountsError, StatsError, ZeroVarianceError, bonferroni, chsh,
                         correlators, delta_p, erfc, freq_correlation, marginals, nosig_report,
                         p_value, per_job, sigma_marginals, spearman)

from .conftest import TABLE_IV_49_66, TABLE_VII_MARGINALS

# test a rows of the kyoto results: |dP| in 1e-4 (sigma 1.3e-4 for all) and f_A - f_B in MHz
KYOTO_A = [
    ((103, 281, 104, -64.2), 0.77), ((70.8, 63.3, 85, 84.3), -4.2), ((-12.6, 6.32, -0.617, -20.3), -5.5),
    ((-50.1, -76, -63.7, -28.3), 6.8), ((-40.9, -12.7, -13.9, -47.1), 8.2), ((2, -2.78, -0.305, 3.11), -9.3),
    ((8.74, 6.7, 3.98, 3.28), 15), ((2.37, -6.63, -1.91, 8.89), 15), ((0.569, -0.013, -1.11, 0.904), 17),
    ((0.0717, -7.03, -8.67, -9.78), -17), ((1.8, -1.53, -1.67, 5.53), -20), ((2.92, -1.69, -0.678, 3.76), 21),
    ((0.352, 1.55, 4.17, 2.34), -26),
]


@pytest.mark.parametrize("x", [0, 1e-8, 0.3, 1, 2.49, 2.5, 3.5, 5 / math.sqrt(2), 6.49, 10, 20, 27])
def test_erfc_matches_mpmath(x):
    ref = float(mpmath.erfc(x))
    assert erfc(x) == pytest.approx(ref, rel=1e-12)
    assert erfc(-x) == pytest.approx(2 - ref, rel=1e-14)


def test_erfc_dense_sweep():
    xs = np.linspace(0, 27, 2701)
    worst = max(abs(erfc(x) / float(mpmath.erfc(x)) - 1) for x in xs)
    assert worst < 1e-12
    assert erfc(30) == 0.0 and math.isnan(erfc(math.nan))


def test_five_sigma_p_value():
    assert p_value(5.0, 1.0) == pytest.approx(5.733e-7, rel=1e-3)
    assert p_value(-5.0, 1.0) == p_value(5.0, 1.0)
    with pytest.raises(StatsError):
        p_value(1.0, 0.0)


def test_bonferroni():
    assert bonferroni(1e-6) == pytest.approx(1.016e-3)
    assert bonferroni(0.01) == 1.0
    assert bonferroni(0.2, m=1) == 0.2
    with pytest.raises(StatsError):
        bonferroni(0.1, m=0)


def test_table_vii_marginals(table_vii):
    pa, pb = marginals(table_vii)
    for (a, b), (ra, rb) in TABLE_VII_MARGINALS.items():
        assert pa[a, b] == pytest.approx(ra, abs=1e-5)
        assert pb[a, b] == pytest.approx(rb, abs=1e-5)


def test_table_vii_deltas_match_published_deltas(table_vii):
    d = delta_p(table_vii) / 1e-4
    # the printed probabilities carry five decimals, so agreement is to ~0.1e-4
    assert d == pytest.approx(TABLE_IV_49_66, abs=0.1)
    assert delta_p(table_vii, exact=True)[3] == Fraction(-59, 100000)


def test_delta_exactness():
    counts = np.array([[[1, 0, 0, 2], [0, 1, 1, 1]], [[2, 0, 0, 1], [1, 1, 0, 1]]])
    d = delta_p(CountsTable(counts), exact=True)
    assert d == [Fraction(1, 3) - Fraction(1, 3), Fraction(2, 3) - Fraction(2, 3),
                 Fraction(1, 3) - Fraction(2, 3), Fraction(1, 3) - Fraction(1, 3)]


def test_sigma_values():
    table = CountsTable(np.full((2, 2, 4), 30_000_000 // 4))
    assert sigma_marginals(table) == pytest.approx(np.full(4, math.sqrt(0.5 / 3e7)))
    # unequal N per setting: sum of P(1-P)/N
    counts = np.zeros((2, 2, 4), dtype=int)
    counts[0, 0] = [30, 10, 30, 30]  # N=100, P(+*)=0.4
    counts[0, 1] = [50, 50, 50, 50]  # N=200, P(+*)=0.5
    counts[1] = [[1, 1, 1, 1], [1, 1, 1, 1]]
    s = sigma_marginals(CountsTable(counts))
    assert s[0] == pytest.approx(math.sqrt(0.24 / 100 + 0.25 / 200))


def test_chsh_examples():
    def table_from_corr(e, n=1000):
        counts = np.zeros((2, 2, 4), dtype=int)
        for a in (0, 1):
            for b in (0, 1):
                same = round(n * (1 + e[a][b]) / 4)
                diff = n // 2 - same
                counts[a, b] = [same, diff, diff, same]
        return CountsTable(counts)

    s = 1 / math.sqrt(2)
    assert chsh(table_from_corr([[s, -s], [-s, -s]], 10**8)).value == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    assert chsh(table_from_corr([[0, 0], [0, 0]])).value == 0
    assert chsh(table_from_corr([[-1, 1], [1, -1]])).value == -2
    det = chsh(table_from_corr([[1, -1], [-1, -1]]))
    assert det.value == 4 and det.sigma is None and det.z is None
    rep = chsh(table_from_corr([[0.6, -0.6], [-0.6, -0.6]]))
    assert rep.sigma == pytest.approx(math.sqrt(4 * 0.64 / 1000))
    assert rep.z == pytest.approx((2.4 - 2) / rep.sigma)


def _random_counts(seed, n=1000):
    rng = np.random.default_rng(seed)
    return rng.integers(1, n, size=(2, 2, 4))


def test_relabeling_symmetry():
    c = _random_counts(1)
    d = delta_p(CountsTable(c))
    # swap A and B: (++, +-, -+, --) -> (++, -+, +-, --), settings transposed
    swapped = c.transpose(1, 0, 2)[..., [0, 2, 1, 3]]
    ds = delta_p(CountsTable(swapped))
    assert ds == pytest.approx([d[2], d[3], d[0], d[1]], abs=1e-15)
    # flip A's setting labels: dP_0* <-> dP_1*, dP_*b changes sign
    flipped = c[::-1]
    df = delta_p(CountsTable(flipped))
    assert df == pytest.approx([d[1], d[0], -d[2], -d[3]], abs=1e-15)
    # flip A's outcome labels: A's deltas change sign, B's stay
    out = c[..., [2, 3, 0, 1]]
    do = delta_p(CountsTable(out))
    assert do == pytest.approx([-d[0], -d[1], d[2], d[3]], abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 50))
def test_scaling_leaves_deltas_and_scales_sigma(seed, k):
    c = _random_counts(seed)
    t1, tk = CountsTable(c), CountsTable(k * c)
    assert delta_p(tk, exact=True) == delta_p(t1, exact=True)
    assert sigma_marginals(tk) == pytest.approx(sigma_marginals(t1) / math.sqrt(k), rel=1e-12)


def test_per_job_aggregate_is_pooled_counts():
    tables = [CountsTable(_random_counts(s), pair=(1, 3), test="a", job=s) for s in range(6)]
    series = per_job(tables)
    assert series.jobs == list(range(6))
    assert series.deltas.shape == (6, 4)
    pooled = delta_p(sum(tables[1:], tables[0]))
    assert np.array_equal(series.aggregate, pooled)
    # equal-N jobs: pooled delta is the plain mean of per-job deltas
    eq = [CountsTable(np.random.default_rng(s).multinomial(400, [0.25] * 4, size=(2, 2)), pair=(1, 3),
                      test="a", job=s) for s in range(5)]
    assert per_job(eq).aggregate == pytest.approx(per_job(eq).deltas.mean(axis=0), abs=1e-15)
    with pytest.raises(StatsError):
        per_job(tables + [CountsTable(_random_counts(9), pair=(2, 4), test="a")])
    with pytest.raises(StatsError):
        per_job([])


def test_z_scores_are_standard_normal_without_signal():
    rng = np.random.default_rng(2024)
    n = 5000
    zs = []
    probs = np.array([0.3, 0.2, 0.15, 0.35])
    for _ in range(1000):
        zs.append(nosig_report(CountsTable(rng.multinomial(n, probs, size=(2, 2)))).z)
    zs = np.array(zs)
    assert np.abs(zs.mean(axis=0)).max() < 0.12
    assert np.abs(zs.std(axis=0) - 1).max() < 0.08


def test_nosig_report_headline(table_vii):
    n = 120_000_000
    big = CountsTable(table_vii.counts * (n // 100_000))
    rep = nosig_report(big)
    # B's marginal sits near 0.547, so its sigma is a little below sqrt(0.5/N)
    assert rep.sigmas == pytest.approx(6.45e-5, abs=0.05e-5)
    assert int(np.argmax(np.abs(rep.z))) == 3
    assert rep.max_abs_z == pytest.approx(9.1, abs=0.15)
    assert 5.3e-18 < rep.p_corrected_max < 5.3e-16
    assert rep.significant.tolist() == [True, True, False, True]


def test_degenerate_tables():
    counts = np.ones((2, 2, 4), dtype=int)
    counts[1, 1] = 0
    with pytest.raises(DegenerateCountsError):
        delta_p(counts)
    fixed = np.zeros((2, 2, 4), dtype=int)
    fixed[..., 0] = 10
    with pytest.raises(ZeroVarianceError):
        sigma_marginals(fixed)
    assert correlators(fixed) == pytest.approx(np.ones((2, 2)))


def test_spearman():
    assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1)
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1)
    assert spearman([1, 1, 1], [1, 2, 3]) == 0.0
    # mid-ranks for ties
    assert spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(0.9486833, abs=1e-6)


def test_freq_correlation():
    assert freq_correlation([(9.0, 1.0), (5.0, 2.0), (3.0, -4.0)]) == pytest.approx(1)
    assert freq_correlation([(1.0, 1.0), (5.0, 2.0), (9.0, -4.0)]) == pytest.approx(-1)
    assert freq_correlation([(4.0, 1.0), (4.0, 2.0), (4.0, 3.0)]) == 0.0
    with pytest.raises(StatsError):
        freq_correlation([(1.0, 1.0), (2.0, None), (3.0, 2.0)])


def test_kyoto_violations_grow_with_small_detuning():
    reports = [(max(abs(d) for d in ds) / 1.3, df) for ds, df in KYOTO_A]
    assert freq_correlation(reports) == pytest.approx(0.777, abs=0.01)
