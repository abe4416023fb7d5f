"""Truncated two-detector correlations (C-datasets), their moments and
normalised statistics, exact per-interferometer closed forms, and the
random-matrix predictions used for statistical validation.

For input columns M = U[:, inputs] the class-specific correlations reduce to
two m x m kernels: the common term T[o1, o2] = Σ_k |M[o1,k]|²|M[o2,k]|² and
the coherence |G|² with G = M·M†:

    C^B = |G|² - 2T,   C^F = -|G|²,   C^T = +|G|²,   C^D = -T.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    NumericalConsistencyError,
    ParticleClassError,
    PortError,
)
from .interference import GramMatrix, ParticleClass
from .unitaries import Unitary, check_ports

# Weingarten functions of the unitary group for the two 2nd-order cycle types;
# they reproduce the first-moment closed forms through n(n-1)V(2) - n(V(1,1)+V(2)).
def weingarten_11(m: int) -> float:
    return 1.0 / (m**2 - 1)


def weingarten_2(m: int) -> float:
    return -1.0 / (m * (m**2 - 1))


@dataclass(frozen=True)
class CorrelationDataset:
    """All m(m-1)/2 unordered-pair correlations for one interferometer,
    input configuration, and particle class."""

    m: int
    n: int
    particle_class: ParticleClass
    values: dict  # {(o1, o2): float} with o1 < o2, 1-based

    def __post_init__(self):
        expected = self.m * (self.m - 1) // 2
        if len(self.values) != expected:
            raise DimensionError(f"expected {expected} pairs, got {len(self.values)}")

    def as_array(self) -> np.ndarray:
        return np.array([self.values[k] for k in sorted(self.values)])

    def to_csv(self) -> str:
        lines = ["o1,o2,value"]
        for (o1, o2) in sorted(self.values):
            lines.append(f"{o1},{o2},{self.values[(o1, o2)]:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, m: int, n: int, particle_class: ParticleClass):
        values = {}
        lines = [ln for ln in text.strip().splitlines() if ln]
        if lines[0].strip() != "o1,o2,value":
            raise DimensionError("expected header 'o1,o2,value'")
        for ln in lines[1:]:
            o1, o2, v = ln.split(",")
            values[(int(o1), int(o2))] = float(v)
        return cls(m=m, n=n, particle_class=particle_class, values=values)


@dataclass(frozen=True)
class MomentSummary:
    m1: float
    m2: float
    nm: float
    cv: float | None  # None when m1 is numerically zero

    def to_json(self, m: int, n: int, particle_class: ParticleClass) -> str:
        return json.dumps({
            "m": m, "n": n, "class": particle_class.value,
            "m1": self.m1, "m2": self.m2, "NM": self.nm, "CV": self.cv,
        })


def _input_columns(u: Unitary, inputs) -> np.ndarray:
    check_ports(u.m, inputs, distinct=True, label="input port")
    return u.matrix[:, np.asarray(inputs) - 1]


def _pair_kernels(u: Unitary, inputs) -> tuple[np.ndarray, np.ndarray]:
    """(T, |G|²) kernels as full m x m matrices (diagonal meaningless)."""
    cols = _input_columns(u, inputs)
    absq = np.abs(cols) ** 2
    t = absq @ absq.T
    g = cols @ cols.conj().T
    return t, np.abs(g) ** 2


def _combine(t, gsq, particle_class: ParticleClass):
    if particle_class is ParticleClass.BOSON:
        return gsq - 2.0 * t
    if particle_class is ParticleClass.FERMION:
        return -gsq
    if particle_class is ParticleClass.THERMAL:
        return gsq
    return -t


def correlation_pair(u: Unitary, inputs, o1: int, o2: int,
                     particle_class: ParticleClass) -> float:
    """Truncated correlation C_{o1 o2} = <n_{o1} n_{o2}> - <n_{o1}><n_{o2}>
    from the class-specific closed form."""
    if o1 == o2:
        raise PortError("correlation requires two different output ports")
    check_ports(u.m, [o1, o2], label="output port")
    t, gsq = _pair_kernels(u, inputs)
    return float(_combine(t, gsq, particle_class)[o1 - 1, o2 - 1])


def _partial_interference(u: Unitary, inputs, gram: GramMatrix) -> np.ndarray:
    """Σ_{k≠l} |S_{kl}|² U_{o1 k}U_{o2 l}U*_{o1 l}U*_{o2 k} for all (o1, o2)."""
    cols = _input_columns(u, inputs)
    if gram.n != cols.shape[1]:
        raise DimensionError(f"Gram matrix is {gram.n}x{gram.n} but n = {cols.shape[1]}")
    w = np.abs(gram.entries) ** 2
    np.fill_diagonal(w, 0.0)
    term = np.einsum("ak,bl,al,bk,kl->ab", cols, cols, cols.conj(), cols.conj(), w,
                     optimize=True)
    if np.max(np.abs(term.imag)) > 1e-10:
        raise NumericalConsistencyError("partial interference term has imaginary residue")
    return term.real


def correlation_pair_partial(u: Unitary, inputs, o1: int, o2: int, gram: GramMatrix,
                             particle_class: ParticleClass) -> float:
    """Pair correlation with the interference term weighted by |S_{kl}|²;
    reduces to the indistinguishable forms at S = all-ones and to the
    distinguishable one at S = identity."""
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("partial distinguishability applies to bosons and fermions")
    if o1 == o2:
        raise PortError("correlation requires two different output ports")
    check_ports(u.m, [o1, o2], label="output port")
    t, _ = _pair_kernels(u, inputs)
    inter = _partial_interference(u, inputs, gram)
    sign = 1.0 if particle_class is ParticleClass.BOSON else -1.0
    return float((-t + sign * inter)[o1 - 1, o2 - 1])


def correlation_dataset(u: Unitary, inputs, particle_class: ParticleClass,
                        gram: GramMatrix | None = None) -> CorrelationDataset:
    """All unordered-pair correlations in one pass."""
    t, gsq = _pair_kernels(u, inputs)
    if gram is None:
        c = _combine(t, gsq, particle_class)
    else:
        if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
            raise ParticleClassError("partial distinguishability applies to bosons and fermions")
        sign = 1.0 if particle_class is ParticleClass.BOSON else -1.0
        c = -t + sign * _partial_interference(u, inputs, gram)
    m = u.m
    values = {(o1, o2): float(c[o1 - 1, o2 - 1])
              for o1 in range(1, m + 1) for o2 in range(o1 + 1, m + 1)}
    return CorrelationDataset(m=m, n=len(inputs), particle_class=particle_class, values=values)


def moments(dataset: CorrelationDataset, q: int) -> float:
    """q-th moment: the mean of per-pair q-th powers over all unordered pairs."""
    if q < 1:
        raise DimensionError(f"moment order must be >= 1, got {q}")
    arr = dataset.as_array()
    if arr.size == 0:
        raise DimensionError("empty dataset")
    return float(np.mean(arr**q))


CV_DEGENERATE_TOL = 1e-14


def summary(dataset: CorrelationDataset) -> MomentSummary:
    """Normalised mean NM = m1·m²/n and coefficient of variation
    CV = sqrt(m2 - m1²)/m1 (None when m1 vanishes)."""
    m1 = moments(dataset, 1)
    m2 = moments(dataset, 2)
    nm = m1 * dataset.m**2 / dataset.n
    if abs(m1) < CV_DEGENERATE_TOL:
        cv = None
    else:
        cv = float(np.sqrt(max(m2 - m1**2, 0.0)) / m1)
    return MomentSummary(m1=m1, m2=m2, nm=nm, cv=cv)


def summary_from_values(m: int, n: int, m1: float, m2: float) -> MomentSummary:
    nm = m1 * m**2 / n
    cv = None if abs(m1) < CV_DEGENERATE_TOL else float(np.sqrt(max(m2 - m1**2, 0.0)) / m1)
    return MomentSummary(m1=m1, m2=m2, nm=nm, cv=cv)


def _check_mn(m: int, n: int):
    if not (1 <= n <= m):
        raise DimensionError(f"require 1 <= n <= m, got n={n}, m={m}")


def rmt_first_moment(m: int, n: int, particle_class: ParticleClass) -> float:
    """Haar-ensemble average of C_{o1 o2}, from the Weingarten calculus."""
    _check_mn(m, n)
    if particle_class is ParticleClass.BOSON:
        return -n * (m + n - 2) / (m * (m**2 - 1))
    if particle_class is ParticleClass.THERMAL:
        return n * (m - n) / (m * (m**2 - 1))
    if particle_class is ParticleClass.FERMION:
        return -n * (m - n) / (m * (m**2 - 1))
    return -n / (m * (m + 1))


def rmt_second_moment(m: int, n: int, particle_class: ParticleClass) -> float:
    """Haar-ensemble average of C_{o1 o2}²; thermal equals fermionic."""
    _check_mn(m, n)
    denom = m**2 * (m + 2) * (m + 3) * (m**2 - 1)
    if particle_class is ParticleClass.BOSON:
        return 2 * n * (m**2 * n + m**2 + 9 * m * n - 11 * m + n**3 - 2 * n**2 + 5 * n - 4) / denom
    if particle_class in (ParticleClass.FERMION, ParticleClass.THERMAL):
        return 2 * n * (n + 1) * (m - n) * (m - n + 1) / denom
    return n * (m**2 * n + 3 * m**2 + m * n - 5 * m + 2 * n - 2) / denom


def rmt_prediction(m: int, n: int, particle_class: ParticleClass) -> MomentSummary:
    return summary_from_values(m, n,
                               rmt_first_moment(m, n, particle_class),
                               rmt_second_moment(m, n, particle_class))


def _overlap_sums(gram: GramMatrix) -> tuple[float, float, float, float]:
    """The four overlap sums entering the partial-distinguishability moments:
    A over four pairwise-distinct indices, B over three, C and D over pairs."""
    w = np.abs(gram.entries) ** 2
    np.fill_diagonal(w, 0.0)
    n = gram.n
    d = float(np.sum(w))
    c = float(np.sum(w**2))
    row = np.sum(w, axis=1)
    # B = Σ_{k≠l1≠l2} w[k,l1] w[k,l2] with l1 ≠ l2
    b = float(np.sum(row**2) - np.sum(w**2))
    # A = Σ w[k1,l1] w[k2,l2] over 4 pairwise-distinct indices; direct O(n^4)
    # loop, n is small at desk scale
    a = 0.0
    for k1 in range(n):
        for l1 in range(n):
            if k1 == l1:
                continue
            for k2 in range(n):
                if k2 in (k1, l1):
                    continue
                for l2 in range(n):
                    if l2 in (k1, l1, k2):
                        continue
                    a += w[k1, l1] * w[k2, l2]
    return a, b, c, d


def rmt_first_moment_partial(m: int, n: int, gram: GramMatrix,
                             particle_class: ParticleClass) -> float:
    """-n/(m(m+1)) ∓ Σ_{k≠l}|S_{kl}|²/(m(m²-1)); minus for bosons."""
    _check_mn(m, n)
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("partial RMT moments apply to bosons and fermions")
    if gram.n != n:
        raise DimensionError(f"Gram matrix is {gram.n}x{gram.n} but n = {n}")
    w = np.abs(gram.entries) ** 2
    np.fill_diagonal(w, 0.0)
    overlap_sum = float(np.sum(w))
    sign = -1.0 if particle_class is ParticleClass.BOSON else 1.0
    return -n / (m * (m + 1)) + sign * overlap_sum / (m * (m**2 - 1))


def rmt_second_moment_partial(m: int, n: int, gram: GramMatrix,
                              particle_class: ParticleClass) -> float:
    """Haar average of C² for partially distinguishable particles, via the
    four overlap sums; plus branch for bosons, minus for fermions."""
    _check_mn(m, n)
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("partial RMT moments apply to bosons and fermions")
    if gram.n != n:
        raise DimensionError(f"Gram matrix is {gram.n}x{gram.n} but n = {n}")
    a, b, c, d = _overlap_sums(gram)
    pm = 1.0 if particle_class is ParticleClass.BOSON else -1.0
    denom = (m - 1) * m**2 * (m + 1) * (m + 2) * (m + 3)
    num = (2 * a - 2 * b * (m - 5) + c * (10 + m + m**2)
           + pm * 2 * d * (2 + 6 * m - n + m * n))
    const = (m - 2) * (1 + 3 * m) * n + 2 * n**2 + m * n**2 + m**2 * n**2
    return (num + const) / denom


def exact_first_moment(u: Unitary, inputs, particle_class: ParticleClass) -> float:
    """Per-interferometer closed form for m1, in terms of the column-sum
    squares Σ_o (Σ_k |U_{o i_k}|²)² and the quartic sum Σ_k Σ_o |U_{o i_k}|⁴."""
    cols = _input_columns(u, inputs)
    m = u.m
    n = cols.shape[1]
    absq = np.abs(cols) ** 2
    sum_sq = float(np.sum(np.sum(absq, axis=1) ** 2))
    quartic = float(np.sum(absq**2))
    mm = m * (m - 1)
    if particle_class is ParticleClass.BOSON:
        return (-n - sum_sq + 2 * quartic) / mm
    if particle_class is ParticleClass.THERMAL:
        return (n - sum_sq) / mm
    if particle_class is ParticleClass.FERMION:
        return (-n + sum_sq) / mm
    return (-n + quartic) / mm


def fourier_moments(m: int, n: int) -> dict:
    """Closed-form moments for the Fourier interferometer with particles in
    the first n consecutive input ports: first moments for all classes, and
    the bosonic second moment where m >= 2n-1 (no modular wraparound in the
    zero-sum count)."""
    _check_mn(m, n)
    base = n / m**2
    corr = n * (n - 1) / (m**2 * (m - 1))
    out = {
        "m1_boson": -base - corr,
        "m1_thermal": base - corr,
        "m1_fermion": -base + corr,
        "m1_dist": -base,
    }
    if m >= 2 * n - 1:
        out["m2_boson"] = (
            n**2 / m**4
            + 2 * n**2 * (n - 1) / (m**4 * (m - 1))
            + (2 * n - 1) * (n - 1) * n / (3 * m**4)
            - (n - 1) * n * (n * (3 * n - 5) + 1) / (3 * m**4 * (m - 1))
        )
    return out


def visibility(ind: MomentSummary, dist: MomentSummary) -> dict:
    """Interferometric visibilities |x_ind - x_dist| / |x_ind + x_dist| for
    x in {NM, CV}; None when a denominator vanishes or CV is undefined."""
    out = {}
    for name, xi, xd in (("NM", ind.nm, dist.nm), ("CV", ind.cv, dist.cv)):
        if xi is None or xd is None or abs(xi + xd) < 1e-300:
            out[f"V_{name}"] = None
        else:
            out[f"V_{name}"] = abs(xi - xd) / abs(xi + xd)
    return out
