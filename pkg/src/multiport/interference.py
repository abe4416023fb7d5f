"""Transition probabilities for bosons, fermions, distinguishable particles,
and the partial-distinguishability regime controlled by internal-state
overlaps."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations as _perms

import numpy as np

from .errors import (
    DimensionError,
    NumericalConsistencyError,
    ParticleClassError,
    PortError,
    SizeLimitError,
)
from .permanents import (
    determinant,
    occupation_counts,
    occupation_normalization,
    permanent,
)
from .unitaries import Unitary, balanced_beamsplitter, check_ports, submatrix

PROBABILITY_SLACK = 1e-12
PARTIAL_SUM_MAX_N = 8


class ParticleClass(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"
    DISTINGUISHABLE = "dist"
    THERMAL = "thermal"

    @classmethod
    def parse(cls, name: str) -> "ParticleClass":
        for pc in cls:
            if pc.value == name or pc.name.lower() == name.lower():
                return pc
        raise ParticleClassError(f"unknown particle class {name!r}")


@dataclass(frozen=True)
class GramMatrix:
    """Hermitian PSD matrix of internal-state overlaps S_{kl} = <ψ_k|ψ_l>,
    with unit diagonal.  Validated at construction."""

    entries: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.entries, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise DimensionError(f"Gram matrix must be square, got shape {s.shape}")
        if np.max(np.abs(s - s.conj().T)) > 1e-12:
            raise NumericalConsistencyError("Gram matrix is not Hermitian within 1e-12")
        if np.max(np.abs(np.diagonal(s) - 1.0)) > 1e-12:
            raise NumericalConsistencyError("Gram matrix diagonal must be 1")
        # PSD check: Cholesky with diagonal slack, eigenvalue fallback
        n = s.shape[0]
        try:
            np.linalg.cholesky(s + 1e-10 * np.eye(n))
        except np.linalg.LinAlgError:
            if np.min(np.linalg.eigvalsh(s)) < -1e-10:
                raise NumericalConsistencyError("Gram matrix is not positive semi-definite")
        object.__setattr__(self, "entries", s)
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def indistinguishable(cls, n: int) -> "GramMatrix":
        return cls(np.ones((n, n)))

    @classmethod
    def distinguishable(cls, n: int) -> "GramMatrix":
        return cls(np.eye(n))


@dataclass(frozen=True)
class WavePacketTrain:
    """Gaussian wave packets with arrival times τ_j, shared central frequency
    ω₀ and bandwidth Δω."""

    arrival_times: tuple
    central_frequency: float = 0.0
    bandwidth: float = 1.0

    def __post_init__(self):
        times = tuple(float(t) for t in self.arrival_times)
        if len(times) < 1:
            raise DimensionError("need at least one wave packet")
        if self.bandwidth <= 0:
            raise DimensionError(f"bandwidth must be > 0, got {self.bandwidth}")
        object.__setattr__(self, "arrival_times", times)

    @classmethod
    def equidistant(cls, n: int, delay: float, central_frequency: float = 0.0,
                    bandwidth: float = 1.0) -> "WavePacketTrain":
        """τ_j = j·Δτ for j = 0..n-1."""
        return cls(tuple(j * delay for j in range(n)), central_frequency, bandwidth)


def gram_from_wave_packets(train: WavePacketTrain) -> GramMatrix:
    """Overlaps S_{jk} = exp(-½Δω²(τ_j-τ_k)²)·exp(iω₀(τ_j-τ_k))."""
    tau = np.asarray(train.arrival_times)
    dt = tau[:, None] - tau[None, :]
    s = np.exp(-0.5 * train.bandwidth**2 * dt**2) * np.exp(1j * train.central_frequency * dt)
    return GramMatrix(s)


def single_particle_prob(u: Unitary, input_port: int, output_port: int) -> float:
    """|U_{kj}|² for one particle injected in port j, detected in port k."""
    check_ports(u.m, [input_port], label="input port")
    check_ports(u.m, [output_port], label="output port")
    return float(abs(u.matrix[output_port - 1, input_port - 1]) ** 2)


def _clamp_probability(p: float, slack: float = PROBABILITY_SLACK) -> float:
    if p < -slack or p > 1.0 + slack:
        raise NumericalConsistencyError(f"probability {p!r} outside [0,1] beyond slack {slack}")
    return min(max(p, 0.0), 1.0)


def transition_probability(u: Unitary, inputs, outputs, particle_class: ParticleClass) -> float:
    """Probability that particles injected in ``inputs`` are jointly detected
    in ``outputs``.

    Bosons: |perm U_sub|² / perm I.  Fermions: |det U_sub|² (0 for repeated
    outputs, by exclusion).  Distinguishable: perm(|U_sub|²) / perm I.
    """
    if particle_class is ParticleClass.THERMAL:
        raise ParticleClassError("thermal states have no number-state transition probability")
    check_ports(u.m, inputs, distinct=True, label="input port")
    check_ports(u.m, outputs, label="output port")
    if len(inputs) != len(outputs):
        raise PortError(f"{len(inputs)} inputs vs {len(outputs)} outputs")
    if particle_class is ParticleClass.FERMION and len(set(outputs)) != len(outputs):
        return 0.0
    usub = submatrix(u, outputs, inputs)
    if particle_class is ParticleClass.FERMION:
        p = abs(determinant(usub)) ** 2
    else:
        norm = occupation_normalization(occupation_counts(u.m, outputs))
        if particle_class is ParticleClass.BOSON:
            p = abs(permanent(usub)) ** 2 / norm
        else:
            p = permanent(np.abs(usub) ** 2).real / norm
    return _clamp_probability(p)


def transition_probability_partial(u: Unitary, inputs, outputs, gram: GramMatrix,
                                   particle_class: ParticleClass) -> float:
    """Transition probability for partially distinguishable particles: the
    double sum over permutation pairs (σ, σ'), each interference term weighted
    by Π_k <ψ_{σ'(k)}|ψ_{σ(k)}>, with sign(σ)sign(σ') for fermions.

    Outputs must be distinct (the formula is derived for collision-free
    events); cost grows as (n!)²·n, hard-capped at n = 8.
    """
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("partial distinguishability applies to bosons and fermions only")
    check_ports(u.m, inputs, distinct=True, label="input port")
    check_ports(u.m, outputs, distinct=True, label="output port")
    n = len(inputs)
    if len(outputs) != n:
        raise PortError(f"{n} inputs vs {len(outputs)} outputs")
    if gram.n != n:
        raise DimensionError(f"Gram matrix is {gram.n}x{gram.n} but n = {n}")
    if n > PARTIAL_SUM_MAX_N:
        raise SizeLimitError(f"(n!)² sum capped at n <= {PARTIAL_SUM_MAX_N}, got {n}")

    usub = submatrix(u, outputs, inputs)  # usub[j, k] = U_{o_j i_k}
    fermionic = particle_class is ParticleClass.FERMION

    perms = np.array(list(_perms(range(n))), dtype=int)
    # amplitude product Π_k U_{o_σ(k) i_k} for every σ
    amp = np.prod(usub[perms, np.arange(n)], axis=1)
    if fermionic:
        signs = np.array([_perm_sign(tuple(p)) for p in perms], dtype=float)
        amp = amp * signs
    s = gram.entries
    total = 0.0 + 0.0j
    # outer loop over σ'; inner sum over σ vectorised
    for a, sigma_p in enumerate(perms):
        overlap = np.prod(s[sigma_p[None, :], perms], axis=1)
        total += amp[a].conjugate() * np.sum(overlap * amp)
    if abs(total.imag) > 1e-10:
        raise NumericalConsistencyError(f"imaginary residue {total.imag:.3e} in partial sum")
    return _clamp_probability(total.real)


def _perm_sign(p: tuple) -> int:
    """Parity of a permutation given as a tuple of images of 0..n-1."""
    n = len(p)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def hom_dip_curve(grid, particle_class: ParticleClass) -> list[float]:
    """Coincidence probability on the balanced beamsplitter as the delay-
    bandwidth product Δω·Δτ sweeps over ``grid``, evaluated through the full
    partial-distinguishability pipeline (the closed form ½(1 ∓ e^{-x²}) is
    reserved for testing)."""
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("the dip is defined for bosons and fermions")
    bs = balanced_beamsplitter()
    probs = []
    for x in grid:
        train = WavePacketTrain((0.0, float(x)), central_frequency=0.0, bandwidth=1.0)
        gram = gram_from_wave_packets(train)
        probs.append(transition_probability_partial(bs, [1, 2], [1, 2], gram, particle_class))
    return probs


def expected_number(u: Unitary, inputs, output_port: int) -> float:
    """Mean particle number Σ_k |U_{o i_k}|² at one detector; identical for
    all particle classes."""
    check_ports(u.m, inputs, distinct=True, label="input port")
    check_ports(u.m, [output_port], label="output port")
    cols = np.asarray(inputs) - 1
    return float(np.sum(np.abs(u.matrix[output_port - 1, cols]) ** 2))
