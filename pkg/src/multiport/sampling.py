"""Exact output-distribution enumeration, seeded samplers, finite-sample
correlation estimation, and nearest-prediction classification."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb

import numpy as np

from .correlations import CorrelationDataset, MomentSummary, rmt_prediction
from .errors import (
    DimensionError,
    NumericalConsistencyError,
    ParticleClassError,
    SizeLimitError,
)
from .interference import (
    GramMatrix,
    ParticleClass,
    transition_probability,
    transition_probability_partial,
)
from .unitaries import Unitary, check_ports

ENUMERATION_LIMIT = 10**7
MASS_TOL = 1e-9


@dataclass(frozen=True)
class OutputDistribution:
    m: int
    n: int
    particle_class: ParticleClass
    entries: list  # [(occupation tuple, probability)], lexicographic
    total_mass: float


@dataclass(frozen=True)
class SampleBatch:
    m: int
    n: int
    seed: int
    samples: np.ndarray  # (count, m) occupation counts

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=int)
        if samples.ndim != 2 or samples.shape[1] != self.m:
            raise DimensionError(f"expected samples of width {self.m}")
        if samples.size and not np.all(samples.sum(axis=1) == self.n):
            raise NumericalConsistencyError(f"sample rows must sum to n = {self.n}")
        object.__setattr__(self, "samples", samples)

    @property
    def count(self) -> int:
        return self.samples.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in row) for row in self.samples) + "\n"

    @classmethod
    def from_csv(cls, text: str, m: int, n: int, seed: int = 0) -> "SampleBatch":
        rows = [[int(c) for c in ln.split(",")]
                for ln in text.strip().splitlines() if ln.strip()]
        return cls(m=m, n=n, seed=seed, samples=np.array(rows, dtype=int))


def _ports_from_occupation(occ) -> list:
    ports = []
    for k, c in enumerate(occ, start=1):
        ports.extend([k] * c)
    return ports


def enumerate_distribution(u: Unitary, inputs, particle_class: ParticleClass,
                           gram: GramMatrix | None = None) -> OutputDistribution:
    """Exact output distribution over occupation vectors.

    Bosons/distinguishable run over all C(m+n-1, n) multisets, fermions over
    the C(m, n) collision-free sets.  With a Gram matrix, only collision-free
    outputs are enumerated and the (possibly < 1) total mass is reported.
    """
    check_ports(u.m, inputs, distinct=True, label="input port")
    m, n = u.m, len(inputs)
    if particle_class is ParticleClass.THERMAL:
        raise ParticleClassError("thermal states do not define a number-state distribution")
    collision_free = particle_class is ParticleClass.FERMION or gram is not None
    size = comb(m, n) if collision_free else comb(m + n - 1, n)
    if size > ENUMERATION_LIMIT:
        raise SizeLimitError(f"{size} output events exceed the limit {ENUMERATION_LIMIT}")
    gen = combinations(range(1, m + 1), n) if collision_free \
        else combinations_with_replacement(range(1, m + 1), n)
    entries = []
    for outputs in gen:
        if gram is None:
            p = transition_probability(u, inputs, list(outputs), particle_class)
        else:
            p = transition_probability_partial(u, inputs, list(outputs), gram, particle_class)
        occ = np.zeros(m, dtype=int)
        for o in outputs:
            occ[o - 1] += 1
        entries.append((tuple(occ), p))
    entries.sort(key=lambda e: e[0])
    mass = float(sum(p for _, p in entries))
    if gram is None and abs(mass - 1.0) > MASS_TOL:
        raise NumericalConsistencyError(f"total mass {mass!r} deviates from 1 beyond {MASS_TOL}")
    return OutputDistribution(m=m, n=n, particle_class=particle_class,
                              entries=entries, total_mass=mass)


def sample_exact(dist: OutputDistribution, seed: int, count: int) -> SampleBatch:
    """I.i.d. draws from an enumerated distribution by inverse-CDF lookup."""
    if abs(dist.total_mass - 1.0) > MASS_TOL:
        raise NumericalConsistencyError(
            f"cannot sample from a distribution with mass {dist.total_mass!r}")
    probs = np.array([p for _, p in dist.entries])
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    occs = np.array([occ for occ, _ in dist.entries], dtype=int)
    return SampleBatch(m=dist.m, n=dist.n, seed=seed, samples=occs[idx])


def sample_distinguishable_direct(u: Unitary, inputs, seed: int, count: int) -> SampleBatch:
    """Route each particle independently to port k with probability |U_{k i}|²;
    no enumeration, so it scales to large m and n."""
    check_ports(u.m, inputs, distinct=True, label="input port")
    m, n = u.m, len(inputs)
    probs = np.abs(u.matrix[:, np.asarray(inputs) - 1]) ** 2  # (m, n)
    probs = probs / probs.sum(axis=0, keepdims=True)
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = np.zeros((count, m), dtype=int)
    for j in range(n):
        ports = rng.choice(m, size=count, p=probs[:, j])
        np.add.at(samples, (np.arange(count), ports), 1)
    return SampleBatch(m=m, n=n, seed=seed, samples=samples)


def estimate_correlations(batch: SampleBatch) -> CorrelationDataset:
    """Plug-in estimator: mean(n_{o1} n_{o2}) - mean(n_{o1})·mean(n_{o2});
    biased at O(1/count)."""
    if batch.count < 2:
        raise DimensionError("need at least 2 samples to estimate correlations")
    x = batch.samples.astype(float)
    means = x.mean(axis=0)
    second = (x.T @ x) / batch.count
    c = second - np.outer(means, means)
    m = batch.m
    values = {(o1, o2): float(c[o1 - 1, o2 - 1])
              for o1 in range(1, m + 1) for o2 in range(o1 + 1, m + 1)}
    return CorrelationDataset(m=m, n=batch.n, particle_class=ParticleClass.DISTINGUISHABLE,
                              values=values)


CLASS_ORDER = (ParticleClass.BOSON, ParticleClass.THERMAL,
               ParticleClass.FERMION, ParticleClass.DISTINGUISHABLE)


def classify(stats: MomentSummary, m: int, n: int) -> tuple[ParticleClass, dict]:
    """Nearest random-matrix prediction in the (NM, CV) plane, Euclidean
    distance; ties broken by the fixed class order boson, thermal, fermion,
    distinguishable."""
    if stats.cv is None:
        raise NumericalConsistencyError("CV undefined (m1 = 0); classification refused")
    distances = {}
    for pc in CLASS_ORDER:
        pred = rmt_prediction(m, n, pc)
        distances[pc] = float(np.hypot(stats.nm - pred.nm, stats.cv - pred.cv))
    best = min(CLASS_ORDER, key=lambda pc: distances[pc])
    return best, distances
