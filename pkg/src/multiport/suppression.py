"""Symmetry-based prediction of totally suppressed output events, and
brute-force certification against the exact transition probabilities.

The interferometer is always the eigenvector matrix A of a mode permutation,
built so that A·P_π = D·A with D diagonal in the port basis.  Row (and
eigenvalue) k of A belong to port k, so output events are judged by the
product of the eigenvalues attached to their output ports.

All laws here are one-sided: a "not suppressed" verdict means the event is
not flagged, never that its probability is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParticleClassError, PortError
from .interference import ParticleClass, transition_probability
from .unitaries import ModePermutation, Unitary, check_ports, permutation_unitary

SUPPRESSION_TOL = 1e-8


@dataclass(frozen=True)
class EigenSystem:
    """Unitary A with A·P_π = D·A; lambdas[k] is the root of unity attached
    to port k+1 (the diagonal of D)."""

    a: Unitary
    lambdas: np.ndarray


@dataclass(frozen=True)
class SuppressionVerdict:
    suppressed: bool
    law: str  # "bosonic" | "fermionic" | "extended-fermionic"
    witness: object  # eigenvalue product, or (Λ_sub, λ-list) for the extended law
    tolerance_used: float


def input_symmetry(p: ModePermutation, inputs) -> tuple[bool, int | None]:
    """Whether π maps the occupied input-port set onto itself, and the parity
    of the induced permutation on those ports (None if not symmetric)."""
    check_ports(p.m, inputs, distinct=True, label="input port")
    occupied = set(inputs)
    image = {p(i) for i in occupied}
    if image != occupied:
        return False, None
    ordered = sorted(occupied)
    pos = {port: idx for idx, port in enumerate(ordered)}
    induced = tuple(pos[p(port)] + 1 for port in ordered)
    return True, ModePermutation(induced).sign


def eigensystem(p: ModePermutation) -> EigenSystem:
    """Canonical eigen-decomposition of P_π.

    For each cycle (c_0 → … → c_{L-1}), anchored at its smallest element and
    taken cycle-major in increasing anchor order, the block row r carries
    A[row, c_s] = e^{-2πi·r·s/L}/√L with eigenvalue e^{-2πi·r/L}.  Ports are
    assigned to rows cycle-major, so lambdas[k] belongs to port k+1.
    """
    m = p.m
    a = np.zeros((m, m), dtype=complex)
    lambdas = np.zeros(m, dtype=complex)
    row = 0
    for cycle in p.cycles:
        length = len(cycle)
        for r in range(length):
            for s, port in enumerate(cycle):
                a[row, port - 1] = np.exp(-2j * np.pi * r * s / length) / np.sqrt(length)
            lambdas[row] = np.exp(-2j * np.pi * r / length)
            row += 1
    return EigenSystem(Unitary(a), lambdas)


def _eigenvalue_product(eig: EigenSystem, outputs) -> complex:
    return complex(np.prod(eig.lambdas[np.asarray(outputs) - 1]))


def _require_symmetric(p: ModePermutation, inputs) -> int:
    symmetric, sign = input_symmetry(p, inputs)
    if not symmetric:
        raise PortError(
            f"input ports {list(inputs)} are not invariant under the permutation; "
            "the suppression law does not apply"
        )
    return sign


def predict_suppressed(p: ModePermutation, inputs, outputs,
                       particle_class: ParticleClass,
                       tol: float = SUPPRESSION_TOL) -> SuppressionVerdict:
    """Bosonic law: suppressed iff Π_j λ_{o_j} ≠ 1.  Fermionic law:
    suppressed iff Π_j λ_{o_j} ≠ sign of the permutation induced on the
    occupied input ports (the eigenvalue of P_π on the fermionic input Fock
    state).  Requires a symmetric input state."""
    if particle_class not in (ParticleClass.BOSON, ParticleClass.FERMION):
        raise ParticleClassError("suppression laws apply to bosons and fermions")
    induced_sign = _require_symmetric(p, inputs)
    check_ports(p.m, outputs, distinct=True, label="output port")
    eig = eigensystem(p)
    product = _eigenvalue_product(eig, outputs)
    if particle_class is ParticleClass.BOSON:
        target, law = 1.0, "bosonic"
    else:
        target, law = float(induced_sign), "fermionic"
    return SuppressionVerdict(
        suppressed=abs(product - target) > tol,
        law=law,
        witness=product,
        tolerance_used=tol,
    )


def predict_suppressed_extended(p: ModePermutation, inputs, outputs,
                                tol: float = SUPPRESSION_TOL) -> SuppressionVerdict:
    """Extended fermionic law.

    Restricting A·P_π = D·A to output rows and input columns gives
    A_sub·(P_π)|_in = diag(λ_{o_1}, …, λ_{o_n})·A_sub, where (P_π)|_in is the
    permutation induced on the (π-invariant) input-port set.  If the
    eigenvalue multiset Λ_sub of (P_π)|_in differs from {λ_{o_j}}, A_sub
    cannot be invertible, so det A_sub = 0 and the event is suppressed."""
    _require_symmetric(p, inputs)
    check_ports(p.m, outputs, distinct=True, label="output port")
    eig = eigensystem(p)
    idx_in = np.asarray(inputs) - 1
    psub = permutation_unitary(p).matrix[np.ix_(idx_in, idx_in)]
    lam_sub = np.linalg.eigvals(psub)
    lam_ports = eig.lambdas[np.asarray(outputs) - 1]
    mismatch = not _multisets_match(lam_sub, lam_ports, tol)
    return SuppressionVerdict(
        suppressed=mismatch,
        law="extended-fermionic",
        witness=(tuple(lam_sub), tuple(lam_ports)),
        tolerance_used=tol,
    )


def _multisets_match(xs: np.ndarray, ys: np.ndarray, tol: float) -> bool:
    """Greedy minimal-distance pairing; adequate because permutation
    eigenvalues are exact roots of unity separated by O(1/m) >> tol."""
    remaining = list(ys)
    for x in xs:
        dists = [abs(x - y) for y in remaining]
        best = int(np.argmin(dists))
        if dists[best] > tol:
            return False
        remaining.pop(best)
    return True


def certify(p: ModePermutation, inputs, outputs, particle_class: ParticleClass,
            extended: bool = False, tol: float = SUPPRESSION_TOL) -> tuple[bool, float]:
    """Law verdict together with the exact transition probability through the
    eigenvector interferometer U = A.  Certification passes iff a flagged
    event has probability < 1e-10."""
    if extended:
        if particle_class is not ParticleClass.FERMION:
            raise ParticleClassError("the extended law is fermionic only")
        verdict = predict_suppressed_extended(p, inputs, outputs, tol)
    else:
        verdict = predict_suppressed(p, inputs, outputs, particle_class, tol)
    eig = eigensystem(p)
    prob = transition_probability(eig.a, inputs, outputs, particle_class)
    return verdict.suppressed, prob
