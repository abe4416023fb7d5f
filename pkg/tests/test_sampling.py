"""Distribution enumeration, seeded samplers, the correlation estimator, and
nearest-prediction classification."""

import numpy as np
import pytest

from multiport import (
    DimensionError,
    GramMatrix,
    NumericalConsistencyError,
    ParticleClass,
    ParticleClassError,
    SampleBatch,
    classify,
    correlation_dataset,
    enumerate_distribution,
    estimate_correlations,
    haar_random_unitary,
    moments,
    rmt_prediction,
    sample_distinguishable_direct,
    sample_exact,
    summary,
    summary_from_values,
)

B, F, D, T = (ParticleClass.BOSON, ParticleClass.FERMION,
              ParticleClass.DISTINGUISHABLE, ParticleClass.THERMAL)


def test_enumeration_mass_and_support():
    u = haar_random_unitary(5, seed=90)
    for pc in (B, F, D):
        dist = enumerate_distribution(u, [1, 2], pc)
        assert dist.total_mass == pytest.approx(1.0, abs=1e-9)
        occs = [occ for occ, _ in dist.entries]
        assert all(sum(occ) == 2 for occ in occs)
        if pc is F:
            assert all(max(occ) <= 1 for occ in occs)
        assert occs == sorted(occs)


def test_enumeration_rejects_thermal():
    u = haar_random_unitary(4, seed=91)
    with pytest.raises(ParticleClassError):
        enumerate_distribution(u, [1, 2], T)


def test_enumeration_partial_reports_mass():
    """With a Gram matrix only collision-free outputs are enumerated, so the
    bosonic mass falls below 1 (bunching moves probability off-support)."""
    u = haar_random_unitary(4, seed=92)
    g = GramMatrix.indistinguishable(2)
    dist = enumerate_distribution(u, [1, 2], B, gram=g)
    full = enumerate_distribution(u, [1, 2], B)
    collision_free_mass = sum(p for occ, p in full.entries if max(occ) <= 1)
    assert dist.total_mass == pytest.approx(collision_free_mass, abs=1e-12)
    assert dist.total_mass < 1.0


def test_sample_exact_reproducible_and_valid():
    u = haar_random_unitary(5, seed=93)
    dist = enumerate_distribution(u, [1, 3], B)
    b1 = sample_exact(dist, seed=11, count=500)
    b2 = sample_exact(dist, seed=11, count=500)
    b3 = sample_exact(dist, seed=12, count=500)
    assert np.array_equal(b1.samples, b2.samples)
    assert not np.array_equal(b1.samples, b3.samples)
    assert np.all(b1.samples.sum(axis=1) == 2)


def test_sample_exact_refuses_deficient_mass():
    u = haar_random_unitary(4, seed=94)
    dist = enumerate_distribution(u, [1, 2], B, gram=GramMatrix.indistinguishable(2))
    with pytest.raises(NumericalConsistencyError):
        sample_exact(dist, seed=0, count=10)


def test_sample_exact_frequencies_converge():
    u = haar_random_unitary(3, seed=95)
    dist = enumerate_distribution(u, [1, 2], B)
    count = 40_000
    batch = sample_exact(dist, seed=5, count=count)
    for occ, p in dist.entries:
        freq = np.mean(np.all(batch.samples == np.array(occ), axis=1))
        se = np.sqrt(max(p * (1 - p), 1e-12) / count)
        assert abs(freq - p) < 5 * se + 1e-3


def test_distinguishable_direct_matches_enumeration():
    u = haar_random_unitary(4, seed=96)
    inputs = [1, 3]
    dist = enumerate_distribution(u, inputs, D)
    count = 60_000
    batch = sample_distinguishable_direct(u, inputs, seed=21, count=count)
    for occ, p in dist.entries:
        freq = np.mean(np.all(batch.samples == np.array(occ), axis=1))
        se = np.sqrt(max(p * (1 - p), 1e-12) / count)
        assert abs(freq - p) < 5 * se + 1e-3


def test_sample_batch_validation_and_csv():
    batch = SampleBatch(m=3, n=2, seed=0,
                        samples=np.array([[1, 1, 0], [0, 2, 0]]))
    text = batch.to_csv()
    back = SampleBatch.from_csv(text, m=3, n=2)
    assert np.array_equal(back.samples, batch.samples)
    with pytest.raises(NumericalConsistencyError):
        SampleBatch(m=3, n=2, seed=0, samples=np.array([[1, 1, 1]]))
    with pytest.raises(DimensionError):
        SampleBatch(m=3, n=2, seed=0, samples=np.array([[1, 1]]))


def test_estimator_matches_exact_correlations():
    u = haar_random_unitary(9, seed=97)
    inputs = [1, 2, 3]
    batch = sample_distinguishable_direct(u, inputs, seed=3, count=100_000)
    est = estimate_correlations(batch)
    exact = correlation_dataset(u, inputs, D)
    scale = 1.0 / np.sqrt(batch.count)
    for key in exact.values:
        assert abs(est.values[key] - exact.values[key]) < 5 * scale


def test_estimator_needs_two_samples():
    with pytest.raises(DimensionError):
        estimate_correlations(SampleBatch(m=3, n=1, seed=0,
                                          samples=np.array([[1, 0, 0]])))


def test_estimator_error_scales_with_count():
    u = haar_random_unitary(6, seed=98)
    inputs = [1, 2]
    exact = correlation_dataset(u, inputs, D)

    def rms_error(count, seed):
        est = estimate_correlations(
            sample_distinguishable_direct(u, inputs, seed=seed, count=count))
        diffs = [est.values[k] - exact.values[k] for k in exact.values]
        return float(np.sqrt(np.mean(np.square(diffs))))

    small = np.mean([rms_error(2_000, s) for s in range(8)])
    large = np.mean([rms_error(32_000, s) for s in range(8)])
    ratio = small / large
    assert 2.0 < ratio < 8.0  # expect ~ sqrt(16) = 4


def test_classify_exact_summaries():
    u = haar_random_unitary(40, seed=99)
    inputs = list(range(1, 7))
    for pc in (B, F, D, T):
        stats = summary(correlation_dataset(u, inputs, pc))
        label, distances = classify(stats, 40, 6)
        assert label is pc
        assert distances[pc] == min(distances.values())


def test_classify_refuses_degenerate_cv():
    with pytest.raises(NumericalConsistencyError):
        classify(summary_from_values(10, 3, 0.0, 1.0), 10, 3)


def test_classify_prediction_points_self_classify():
    for pc in (B, F, D, T):
        pred = rmt_prediction(30, 5, pc)
        label, _ = classify(pred, 30, 5)
        assert label is pc
