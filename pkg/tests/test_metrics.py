"""Evaluation metrics: L2 error, summary statistics, histograms."""

import numpy as np
import pytest

from deepokan.metrics import ErrorSummary, histogram, l2_error, summarize_errors


def test_l2_error_hand_values():
    assert l2_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert l2_error([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0, rel=1e-15)
    assert l2_error([1.0], [4.5]) == pytest.approx(3.5, rel=1e-15)


def test_l2_error_flattens_and_is_symmetric():
    a = np.arange(6.0).reshape(2, 3)
    b = a + 1.0
    assert l2_error(a, b) == pytest.approx(np.sqrt(6.0), rel=1e-15)
    assert l2_error(a, b) == l2_error(b, a)


def test_l2_error_rejects_mismatch():
    with pytest.raises(ValueError):
        l2_error([1.0, 2.0], [1.0])


def test_summarize_hand_case():
    s = summarize_errors([1.0, 2.0, 3.0, 4.0])
    assert s.mean == pytest.approx(2.5, rel=1e-15)
    assert s.median == pytest.approx(2.5, rel=1e-15)
    # population standard deviation: sqrt(mean of squared deviations)
    assert s.std_deviation == pytest.approx(np.sqrt(1.25), rel=1e-15)
    assert s.p25 == pytest.approx(1.75, rel=1e-15)  # linear interpolation
    assert s.p75 == pytest.approx(3.25, rel=1e-15)


def test_summarize_constant_sequence():
    s = summarize_errors([0.7] * 9)
    assert s.mean == 0.7
    assert s.std_deviation == 0.0
    assert s.median == s.p25 == s.p75 == 0.7


def test_summarize_permutation_invariant():
    rng = np.random.default_rng(0)
    values = rng.random(31)
    a = summarize_errors(values)
    b = summarize_errors(rng.permutation(values))
    # mean/std pick up summation-order rounding; quantiles sort first
    np.testing.assert_allclose(a.as_row(), b.as_row(), rtol=1e-13)
    assert a.median == b.median and a.p25 == b.p25 and a.p75 == b.p75


def test_summarize_matches_numpy():
    rng = np.random.default_rng(1)
    values = rng.normal(size=100)
    s = summarize_errors(values)
    assert s.mean == pytest.approx(np.mean(values), rel=1e-15)
    assert s.std_deviation == pytest.approx(np.std(values), rel=1e-15)
    assert s.median == pytest.approx(np.median(values), rel=1e-15)


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        summarize_errors([])


def test_summary_row_matches_fields():
    s = ErrorSummary(1.0, 2.0, 3.0, 4.0, 5.0)
    assert s.as_row() == [1.0, 2.0, 3.0, 4.0, 5.0]
    assert ErrorSummary.FIELDS == ("mean", "std_deviation", "median", "p25", "p75")


def test_histogram_hand_case():
    edges, counts = histogram([0.0, 0.5, 1.0], num_bins=2)
    np.testing.assert_allclose(edges, [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(counts, [1, 2])  # last bin is right-closed


def test_histogram_conserves_count():
    rng = np.random.default_rng(2)
    values = rng.normal(size=250)
    edges, counts = histogram(values, num_bins=20)
    assert edges.shape == (21,)
    assert counts.sum() == 250
    assert edges[0] == values.min() and edges[-1] == values.max()


def test_histogram_rejects_bad_input():
    with pytest.raises(ValueError):
        histogram([], num_bins=3)
    with pytest.raises(ValueError):
        histogram([1.0], num_bins=0)
