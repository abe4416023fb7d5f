"""Construction and validation of interferometer matrices.

All port indices on the public API are 1-based (port 1 .. port m); the
conversion to 0-based numpy indexing happens here and nowhere else.
Matrices are indexed U[output, input].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NumericalConsistencyError, PortError

UNITARITY_TOL = 1e-10


def unitarity_residual(matrix: np.ndarray) -> float:
    """Max-norm of U†U - 1."""
    m = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(m))))


@dataclass(frozen=True)
class Unitary:
    """An m x m unitary interferometer matrix, validated at construction.

    U[k, j] is the amplitude from input port j+1 to output port k+1.
    """

    matrix: np.ndarray
    tol: float = UNITARITY_TOL

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise DimensionError(f"expected a square matrix with m >= 1, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        res = unitarity_residual(mat)
        if res > self.tol:
            raise NumericalConsistencyError(
                f"matrix is not unitary: max-norm residual {res:.3e} > {self.tol:.1e}"
            )
        self.matrix.setflags(write=False)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def entry(self, output_port: int, input_port: int) -> complex:
        """U_{kj} with 1-based port indices."""
        check_ports(self.m, [output_port])
        check_ports(self.m, [input_port])
        return complex(self.matrix[output_port - 1, input_port - 1])

    def to_json(self) -> str:
        rows = [[[z.real, z.imag] for z in row] for row in self.matrix]
        return json.dumps({"m": self.m, "rows": rows})

    @classmethod
    def from_json(cls, text: str, tol: float = UNITARITY_TOL) -> "Unitary":
        data = json.loads(text)
        m = data["m"]
        mat = np.array(
            [[complex(re, im) for re, im in row] for row in data["rows"]], dtype=complex
        )
        if mat.shape != (m, m):
            raise DimensionError(f"declared m={m} but rows give shape {mat.shape}")
        return cls(mat, tol=tol)


def check_ports(m: int, ports, distinct: bool = False, label: str = "port"):
    """Validate 1-based port indices against mode count m."""
    for p in ports:
        if not (1 <= p <= m):
            raise PortError(f"{label} {p} out of range 1..{m}")
    if distinct and len(set(ports)) != len(ports):
        raise PortError(f"{label} list {list(ports)} contains duplicates")


def haar_random_unitary(m: int, seed: int) -> Unitary:
    """Haar-distributed m x m unitary, deterministic for a fixed seed.

    Ginibre matrix -> QR -> multiply each column of Q by the conjugate phase
    of the corresponding diagonal entry of R.  The phase fix makes the
    distribution exactly Haar rather than merely approximately uniform.
    Uses numpy's PCG64 so seeds reproduce across platforms.
    """
    if m < 1:
        raise DimensionError(f"mode count must be >= 1, got {m}")
    rng = np.random.Generator(np.random.PCG64(seed))
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d.conj() / np.abs(d))
    return Unitary(q)


def fourier_unitary(m: int) -> Unitary:
    """Discrete-Fourier-transform interferometer F_{oj} = e^{2πi(o-1)(j-1)/m}/√m."""
    if m < 1:
        raise DimensionError(f"mode count must be >= 1, got {m}")
    o, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    return Unitary(np.exp(2j * np.pi * o * j / m) / np.sqrt(m))


def balanced_beamsplitter() -> Unitary:
    """The balanced two-port mixer (1/√2)[[1, 1], [-1, 1]]."""
    return Unitary(np.array([[1, 1], [-1, 1]], dtype=complex) / np.sqrt(2.0))


@dataclass(frozen=True)
class ModePermutation:
    """A permutation of the m ports, with parity and cycle decomposition.

    ``image[k]`` is π(k+1), 1-based.  Cycles are listed in increasing order
    of their smallest element; each cycle starts at its smallest element.
    """

    image: tuple
    sign: int = field(init=False)
    cycles: tuple = field(init=False)

    def __post_init__(self):
        image = tuple(int(p) for p in self.image)
        m = len(image)
        if sorted(image) != list(range(1, m + 1)):
            raise PortError(f"image {image} is not a bijection of 1..{m}")
        object.__setattr__(self, "image", image)
        cycles = []
        seen = set()
        for start in range(1, m + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = image[start - 1]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = image[nxt - 1]
            cycles.append(tuple(cyc))
        object.__setattr__(self, "cycles", tuple(cycles))
        object.__setattr__(self, "sign", (-1) ** (m - len(cycles)))

    @property
    def m(self) -> int:
        return len(self.image)

    def __call__(self, port: int) -> int:
        check_ports(self.m, [port])
        return self.image[port - 1]

    def inverse(self) -> "ModePermutation":
        inv = [0] * self.m
        for k, p in enumerate(self.image, start=1):
            inv[p - 1] = k
        return ModePermutation(tuple(inv))

    @classmethod
    def identity(cls, m: int) -> "ModePermutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_cycles(cls, m: int, cycles) -> "ModePermutation":
        """Build from cycle notation, e.g. from_cycles(4, [(1, 2), (3, 4)])."""
        image = list(range(1, m + 1))
        for cyc in cycles:
            check_ports(m, cyc, distinct=True)
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                image[a - 1] = b
        return cls(tuple(image))


def permutation_unitary(p: ModePermutation) -> Unitary:
    """The 0/1 matrix with P e_k = e_{π(k)}."""
    mat = np.zeros((p.m, p.m), dtype=complex)
    for j in range(1, p.m + 1):
        mat[p(j) - 1, j - 1] = 1.0
    return Unitary(mat)


def submatrix(u: Unitary, outputs, inputs) -> np.ndarray:
    """The n x n matrix (U_sub)_{jk} = U_{o_j i_k}.

    Output ports may repeat (several particles in one detector); input ports
    must be distinct.
    """
    if len(outputs) != len(inputs):
        raise PortError(f"{len(outputs)} outputs vs {len(inputs)} inputs")
    check_ports(u.m, outputs, label="output port")
    check_ports(u.m, inputs, distinct=True, label="input port")
    rows = np.asarray(outputs) - 1
    cols = np.asarray(inputs) - 1
    return u.matrix[np.ix_(rows, cols)]
