"""Correlation datasets, moments, random-matrix predictions, and closed
forms: oracle equivalence against brute-force enumeration."""

from itertools import combinations, combinations_with_replacement

import numpy as np
import pytest

from multiport import (
    CorrelationDataset,
    GramMatrix,
    ParticleClass,
    WavePacketTrain,
    correlation_dataset,
    correlation_pair,
    correlation_pair_partial,
    exact_first_moment,
    fourier_moments,
    fourier_unitary,
    gram_from_wave_packets,
    haar_random_unitary,
    moments,
    rmt_first_moment,
    rmt_first_moment_partial,
    rmt_prediction,
    rmt_second_moment,
    rmt_second_moment_partial,
    summary,
    summary_from_values,
    transition_probability,
    visibility,
    weingarten_11,
    weingarten_2,
)

B, F, D, T = (ParticleClass.BOSON, ParticleClass.FERMION,
              ParticleClass.DISTINGUISHABLE, ParticleClass.THERMAL)


def brute_force_correlation(u, inputs, o1, o2, pc):
    """⟨n_{o1} n_{o2}⟩ − ⟨n_{o1}⟩⟨n_{o2}⟩ from the enumerated distribution."""
    m, n = u.m, len(inputs)
    gen = combinations(range(1, m + 1), n) if pc is F \
        else combinations_with_replacement(range(1, m + 1), n)
    e12 = e1 = e2 = 0.0
    for outputs in gen:
        p = transition_probability(u, inputs, list(outputs), pc)
        n1 = outputs.count(o1)
        n2 = outputs.count(o2)
        e12 += n1 * n2 * p
        e1 += n1 * p
        e2 += n2 * p
    return e12 - e1 * e2


@pytest.mark.parametrize("pc", [B, F, D])
def test_correlation_pair_matches_enumeration(pc):
    rng = np.random.default_rng(17)
    for trial in range(4):
        m = int(rng.integers(3, 6))
        n = int(rng.integers(2, min(m, 3) + 1))
        u = haar_random_unitary(m, seed=300 + trial)
        inputs = sorted(rng.choice(m, size=n, replace=False) + 1)
        for o1, o2 in combinations(range(1, m + 1), 2):
            got = correlation_pair(u, inputs, o1, o2, pc)
            want = brute_force_correlation(u, inputs, o1, o2, pc)
            assert got == pytest.approx(want, abs=1e-10)


def test_thermal_is_minus_fermion():
    u = haar_random_unitary(5, seed=40)
    dsf = correlation_dataset(u, [1, 2, 3], F)
    dst = correlation_dataset(u, [1, 2, 3], T)
    for key in dsf.values:
        assert dst.values[key] == pytest.approx(-dsf.values[key], abs=1e-14)


def test_partial_correlation_limits():
    u = haar_random_unitary(6, seed=41)
    inputs = [1, 2, 3]
    ones = GramMatrix.indistinguishable(3)
    eye = GramMatrix.distinguishable(3)
    for o1, o2 in [(1, 2), (2, 5), (4, 6)]:
        assert correlation_pair_partial(u, inputs, o1, o2, ones, B) == pytest.approx(
            correlation_pair(u, inputs, o1, o2, B), abs=1e-12)
        assert correlation_pair_partial(u, inputs, o1, o2, ones, F) == pytest.approx(
            correlation_pair(u, inputs, o1, o2, F), abs=1e-12)
        assert correlation_pair_partial(u, inputs, o1, o2, eye, B) == pytest.approx(
            correlation_pair(u, inputs, o1, o2, D), abs=1e-12)


def test_partial_correlation_interpolates_hom():
    """On the beamsplitter the partial-distinguishability pair correlation
    moves continuously between the bosonic and distinguishable values."""
    from multiport import balanced_beamsplitter

    bs = balanced_beamsplitter()
    train = WavePacketTrain((0.0, 0.8))
    g = gram_from_wave_packets(train)
    c = correlation_pair_partial(bs, [1, 2], 1, 2, g, B)
    cb = correlation_pair(bs, [1, 2], 1, 2, B)
    cd = correlation_pair(bs, [1, 2], 1, 2, D)
    lo, hi = sorted([cb, cd])
    assert lo - 1e-12 <= c <= hi + 1e-12


def test_moment_identities_on_haar_ensemble():
    for trial in range(10):
        u = haar_random_unitary(10, seed=500 + trial)
        inputs = [1, 2, 3, 4]
        m1 = {pc: moments(correlation_dataset(u, inputs, pc), 1) for pc in (B, F, D, T)}
        assert m1[B] == pytest.approx(m1[T] + 2 * m1[D], abs=1e-12)
        assert m1[F] == pytest.approx(-m1[T], abs=1e-12)
        bound = 4 / (10 * 9)
        # lower bound is -2n/(m(m-1)): m1^B = (-n - sum_sq + 2 quartic)/(m(m-1))
        # with 0 <= quartic <= sum_sq <= n since each row-subset norm is <= 1
        chain = [bound, m1[T], m1[F], m1[D], m1[B], -2 * bound]
        for hi, lo in zip(chain, chain[1:]):
            assert hi > lo - 1e-14


def test_exact_first_moment_matches_dataset():
    for trial in range(5):
        u = haar_random_unitary(7, seed=600 + trial)
        inputs = [2, 4, 7]
        for pc in (B, F, D, T):
            assert moments(correlation_dataset(u, inputs, pc), 1) == pytest.approx(
                exact_first_moment(u, inputs, pc), abs=1e-12)


def test_rmt_first_moment_closed_forms():
    m, n = 12, 5
    assert rmt_first_moment(m, n, B) == pytest.approx(-n * (m + n - 2) / (m * (m**2 - 1)))
    assert rmt_first_moment(m, n, T) == pytest.approx(n * (m - n) / (m * (m**2 - 1)))
    assert rmt_first_moment(m, n, D) == pytest.approx(-n / (m * (m + 1)))
    assert rmt_first_moment(m, n, F) == pytest.approx(-n * (m - n) / (m * (m**2 - 1)))
    # same identities as the per-interferometer moments
    assert rmt_first_moment(m, n, B) == pytest.approx(
        rmt_first_moment(m, n, T) + 2 * rmt_first_moment(m, n, D), abs=1e-15)
    assert rmt_first_moment(m, n, F) == pytest.approx(-rmt_first_moment(m, n, T), abs=1e-15)


def test_rmt_second_moment_fermion_equals_thermal():
    assert rmt_second_moment(20, 6, F) == pytest.approx(rmt_second_moment(20, 6, T))


def test_weingarten_reproduces_bosonic_first_moment():
    for m, n in [(6, 2), (10, 4), (50, 8)]:
        wb = n * (n - 1) * weingarten_2(m) - n * (weingarten_11(m) + weingarten_2(m))
        assert wb == pytest.approx(rmt_first_moment(m, n, B), abs=1e-15)


@pytest.mark.parametrize("pc", [B, F])
def test_partial_rmt_reduces_to_closed_forms(pc):
    m, n = 20, 6
    ones = GramMatrix.indistinguishable(n)
    eye = GramMatrix.distinguishable(n)
    assert rmt_first_moment_partial(m, n, ones, pc) == pytest.approx(
        rmt_first_moment(m, n, pc), abs=1e-12)
    assert rmt_second_moment_partial(m, n, ones, pc) == pytest.approx(
        rmt_second_moment(m, n, pc), abs=1e-12)
    assert rmt_first_moment_partial(m, n, eye, pc) == pytest.approx(
        rmt_first_moment(m, n, D), abs=1e-12)
    assert rmt_second_moment_partial(m, n, eye, pc) == pytest.approx(
        rmt_second_moment(m, n, D), abs=1e-12)


def test_fourier_moments_match_computed():
    for m in range(4, 9):
        for n in range(1, 5):
            if n > m:
                continue
            fm = fourier_moments(m, n)
            u = fourier_unitary(m)
            inputs = list(range(1, n + 1))
            for pc, key in ((B, "m1_boson"), (T, "m1_thermal"),
                            (F, "m1_fermion"), (D, "m1_dist")):
                got = moments(correlation_dataset(u, inputs, pc), 1)
                assert got == pytest.approx(fm[key], abs=1e-10)
            if m >= 2 * n - 1:
                got = moments(correlation_dataset(u, inputs, B), 2)
                assert got == pytest.approx(fm["m2_boson"], abs=1e-10)
            else:
                assert "m2_boson" not in fm


def test_summary_and_nm_cv():
    m, n = 8, 3
    u = haar_random_unitary(m, seed=70)
    ds = correlation_dataset(u, [1, 2, 3], B)
    s = summary(ds)
    m1 = moments(ds, 1)
    m2 = moments(ds, 2)
    assert s.m1 == pytest.approx(m1)
    assert s.nm == pytest.approx(m1 * m**2 / n)
    assert s.cv == pytest.approx(np.sqrt(m2 - m1**2) / m1)


def test_summary_degenerate_cv_is_none():
    s = summary_from_values(4, 2, 0.0, 1.0)
    assert s.cv is None


def test_csv_round_trip():
    u = haar_random_unitary(5, seed=80)
    ds = correlation_dataset(u, [1, 3], F)
    text = ds.to_csv()
    back = CorrelationDataset.from_csv(text, m=5, n=2, particle_class=F)
    assert back.values == ds.values
    # full float precision preserved
    assert "," in text.splitlines()[0]


def test_rmt_prediction_and_visibility():
    pred_b = rmt_prediction(50, 8, B)
    pred_d = rmt_prediction(50, 8, D)
    v = visibility(pred_b, pred_d)
    assert 0.0 <= v["V_NM"] <= 1.0
    assert v["V_CV"] is not None
