"""Samplers and constructors for the five unitary families.

Families: Haar-random unitaries (cue), random Clifford circuits
(clifford), an integrable Floquet spin-1/2 chain built from R-matrices
(spinchain), Gaussian-random free-fermion circuits (freefermion), and
the discrete Fourier transform (qft).  All constructors return a
:class:`UnitarySample` whose matrix is checked unitary on construction.

Index conventions, used consistently across the package: qubit 0 is the
leftmost tensor factor; chain sites 1..L map to qubits 0..L-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._accel import quadratic_many_body
from .errors import BranchAmbiguityError, DegenerateInputError, ValidationError
from .numkit import expm_hermitian_i, logm_special_orthogonal, qr_phase_fixed
from .rng import Stream

ENSEMBLES = ("cue", "clifford", "spinchain", "freefermion", "qft")
MAX_L = 6

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
S_GATE = np.diag([1.0, 1.0j]).astype(complex)
#: Two-site swap operator, (I + sum_a sigma_a x sigma_a) / 2.
SWAP = 0.5 * (
    np.eye(4, dtype=complex)
    + np.kron(PAULI_X, PAULI_X)
    + np.kron(PAULI_Y, PAULI_Y)
    + np.kron(PAULI_Z, PAULI_Z)
)


def _check_L(L: int, minimum: int = 1) -> None:
    if not (minimum <= L <= MAX_L):
        raise ValidationError(f"L must be in [{minimum}, {MAX_L}], got {L}")


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinChainParams:
    """Coupling angle and layer count for the Floquet spin chain.

    `theta` sets the bond coupling delta = tan(theta) shared by every
    bond.  `layers` is the number of brickwork layers (defaults to L at
    build time).  `layer_thetas`, when given, overrides `theta` with one
    angle per layer.
    """

    theta: float
    layers: int | None = None
    layer_thetas: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi):
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta}")
        if self.layers is not None and self.layers < 1:
            raise ValidationError(f"layers must be >= 1, got {self.layers}")
        if self.layer_thetas is not None:
            object.__setattr__(self, "layer_thetas", tuple(float(t) for t in self.layer_thetas))
            for t in self.layer_thetas:
                if not (0.0 <= t <= np.pi):
                    raise ValidationError(f"each layer theta must lie in [0, pi], got {t}")


@dataclass(frozen=True)
class FreeFermionSpec:
    """Single-particle data of a quadratic fermion Hamiltonian."""

    h: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        delta = np.asarray(self.delta, dtype=complex)
        if h.shape != delta.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValidationError(
                f"h and delta must be equal square matrices, got {h.shape} and {delta.shape}"
            )
        if np.linalg.norm(h - h.conj().T) >= 1e-10:
            raise ValidationError("hopping matrix h must be Hermitian")
        if np.linalg.norm(delta + delta.T) >= 1e-10:
            raise ValidationError("pairing matrix delta must be antisymmetric")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "delta", delta)

    @property
    def L(self) -> int:
        return self.h.shape[0]


_CLIFFORD_GATE_NAMES = ("H", "S", "CNOT")


@dataclass(frozen=True)
class CliffordParams:
    """Depth and the ordered gate word of a random Clifford circuit."""

    depth: int
    gate_log: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.depth < 1:
            raise ValidationError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "gate_log", tuple(tuple(g) for g in self.gate_log))
        for gate in self.gate_log:
            if gate[0] not in _CLIFFORD_GATE_NAMES:
                raise ValidationError(f"unknown Clifford gate {gate!r}")
            if gate[0] == "CNOT":
                if len(gate) != 3 or gate[1] == gate[2]:
                    raise ValidationError(f"malformed CNOT gate {gate!r}")
            elif len(gate) != 2:
                raise ValidationError(f"malformed single-qubit gate {gate!r}")


@dataclass(frozen=True)
class UnitarySample:
    """A concrete unitary drawn from (or built for) one ensemble."""

    ensemble: str
    L: int
    matrix: np.ndarray
    seed: int
    params: Any = None

    def __post_init__(self):
        if self.ensemble not in ENSEMBLES:
            raise ValidationError(
                f"unknown ensemble {self.ensemble!r}; expected one of {ENSEMBLES}"
            )
        m = np.asarray(self.matrix, dtype=complex)
        d = 2 ** self.L
        if m.shape != (d, d):
            raise ValidationError(
                f"matrix shape {m.shape} does not match L={self.L} (expected {d}x{d})"
            )
        if np.linalg.norm(m.conj().T @ m - np.eye(d)) >= 1e-10:
            raise ValidationError(f"{self.ensemble} sample failed the unitarity check")
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return 2 ** self.L


# ---------------------------------------------------------------------------
# qubit embedding helpers
# ---------------------------------------------------------------------------

def embed_one_site(gate: np.ndarray, q: int, L: int) -> np.ndarray:
    """Single-qubit gate on qubit q of L, as a full 2^L matrix."""
    if not (0 <= q < L):
        raise ValidationError(f"qubit index {q} out of range for L={L}")
    left = np.eye(2 ** q, dtype=complex)
    right = np.eye(2 ** (L - q - 1), dtype=complex)
    return np.kron(np.kron(left, gate), right)


def embed_two_site(gate: np.ndarray, q1: int, q2: int, L: int) -> np.ndarray:
    """Two-qubit gate on (q1, q2) of L qubits, as a full 2^L matrix.

    The gate's first tensor factor acts on q1, the second on q2; the
    qubits need not be adjacent (periodic bonds wrap around).
    """
    if q1 == q2 or not (0 <= q1 < L) or not (0 <= q2 < L):
        raise ValidationError(f"invalid qubit pair ({q1}, {q2}) for L={L}")
    d = 2 ** L
    t = np.asarray(gate, dtype=complex).reshape(2, 2, 2, 2)
    full = np.eye(d, dtype=complex).reshape([2] * L + [d])
    out = np.tensordot(t, full, axes=[[2, 3], [q1, q2]])
    out = np.moveaxis(out, [0, 1], [q1, q2])
    return out.reshape(d, d)


def parity_operator(L: int) -> np.ndarray:
    """Tensor power of sigma_z over all L qubits."""
    out = np.array([[1.0]], dtype=complex)
    for _ in range(L):
        out = np.kron(out, PAULI_Z)
    return out


# ---------------------------------------------------------------------------
# cue
# ---------------------------------------------------------------------------

def sample_cue(L: int, rng: Stream) -> UnitarySample:
    """Haar-random unitary: phase-fixed QR of a standard complex Gaussian."""
    _check_L(L)
    d = 2 ** L
    last_error: DegenerateInputError | None = None
    for _ in range(3):
        try:
            g = rng.complex_normal((d, d))
            u = qr_phase_fixed(g)
            return UnitarySample("cue", L, u, rng.seed)
        except DegenerateInputError as exc:
            last_error = exc
    raise last_error  # pragma: no cover - probability ~0 for Gaussian input


# ---------------------------------------------------------------------------
# clifford
# ---------------------------------------------------------------------------

def clifford_gate_universe(L: int) -> list[tuple]:
    """All generator placements: H(q), S(q), CNOT(c, t) with c != t."""
    gates: list[tuple] = []
    for q in range(L):
        gates.append(("H", q))
    for q in range(L):
        gates.append(("S", q))
    for c in range(L):
        for t in range(L):
            if c != t:
                gates.append(("CNOT", c, t))
    return gates


def clifford_gate_matrix(gate: tuple, L: int) -> np.ndarray:
    """Full 2^L matrix of one generator gate."""
    name = gate[0]
    if name == "H":
        return embed_one_site(HADAMARD, gate[1], L)
    if name == "S":
        return embed_one_site(S_GATE, gate[1], L)
    if name == "CNOT":
        c, t = gate[1], gate[2]
        p0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        p1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
        return embed_one_site(p0, c, L) + embed_one_site(p1, c, L) @ embed_one_site(
            PAULI_X, t, L
        )
    raise ValidationError(f"unknown Clifford gate {gate!r}")


def default_clifford_depth(L: int) -> int:
    return 12 * L * L


def sample_clifford(L: int, rng: Stream, depth: int | None = None) -> UnitarySample:
    """Random Clifford word: `depth` gates uniform over the generator universe."""
    _check_L(L)
    if depth is None:
        depth = default_clifford_depth(L)
    if depth < 1:
        raise ValidationError(f"depth must be >= 1, got {depth}")
    universe = clifford_gate_universe(L)
    matrices = [clifford_gate_matrix(g, L) for g in universe]
    d = 2 ** L
    u = np.eye(d, dtype=complex)
    log = []
    for _ in range(depth):
        k = rng.integers(len(universe))
        log.append(universe[k])
        u = matrices[k] @ u
    params = CliffordParams(depth=depth, gate_log=tuple(log))
    return UnitarySample("clifford", L, u, rng.seed, params)


# ---------------------------------------------------------------------------
# spinchain
# ---------------------------------------------------------------------------

def r_matrix(delta: float) -> np.ndarray:
    """Two-site R-matrix (I + i*delta*SWAP) / (1 + i*delta); unitary for real delta."""
    return (np.eye(4, dtype=complex) + 1j * delta * SWAP) / (1.0 + 1j * delta)


def _brickwork_layer(L: int, delta: float) -> np.ndarray:
    """One layer: odd-start bonds (1,2),(3,4),... applied first, then
    even-start bonds (2,3),...,(L,1) wrapping periodically."""
    d = 2 ** L
    gate = r_matrix(delta)
    odd = np.eye(d, dtype=complex)
    for j in range(1, L, 2):  # sites (j, j+1) -> qubits (j-1, j)
        odd = embed_two_site(gate, j - 1, j, L) @ odd
    even = np.eye(d, dtype=complex)
    for j in range(2, L + 1, 2):  # sites (j, j+1 mod L) -> qubits (j-1, j mod L)
        even = embed_two_site(gate, j - 1, j % L, L) @ even
    return even @ odd


def build_spin_chain_floquet(L: int, params: SpinChainParams, seed: int = 0) -> UnitarySample:
    """Floquet circuit of brickwork R-matrix layers on a periodic chain."""
    _check_L(L, minimum=2)
    if L % 2 != 0:
        raise ValidationError(f"spin chain requires even L (periodic brickwork), got {L}")
    if params.layer_thetas is not None:
        thetas = params.layer_thetas
    else:
        layers = params.layers if params.layers is not None else L
        thetas = (params.theta,) * layers
    d = 2 ** L
    u = np.eye(d, dtype=complex)
    for theta in thetas:
        u = _brickwork_layer(L, np.tan(theta)) @ u
    return UnitarySample("spinchain", L, u, seed, params)


def sample_spin_chain(L: int, rng: Stream, layers: int | None = None) -> UnitarySample:
    """Draw theta uniformly on [0, pi] and build the Floquet circuit."""
    theta = rng.uniform() * np.pi
    params = SpinChainParams(theta=theta, layers=layers)
    return build_spin_chain_floquet(L, params, seed=rng.seed)


# ---------------------------------------------------------------------------
# freefermion
# ---------------------------------------------------------------------------

def _fermion_rotation(L: int) -> np.ndarray:
    """Basis change from Majorana to complex-fermion operators."""
    eye = np.eye(L)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2.0)


def sample_special_orthogonal(n: int, rng: Stream) -> np.ndarray:
    """Haar-ish sample of SO(n): phase-fixed QR of a real Gaussian, det fixed
    to +1 by negating the last column if needed."""
    g = rng.standard_normal(n * n).reshape(n, n)
    q = np.real(qr_phase_fixed(g))
    if np.linalg.det(q) < 0:
        q = q.copy()
        q[:, -1] = -q[:, -1]
    return q


def free_fermion_spec_from_orthogonal(u: np.ndarray) -> FreeFermionSpec:
    """Extract (h, delta) single-particle data from u in SO(2L)."""
    n = u.shape[0]
    if n % 2 != 0:
        raise ValidationError(f"orthogonal matrix must be even-dimensional, got {n}")
    L = n // 2
    h_majo = logm_special_orthogonal(u)
    v = _fermion_rotation(L)
    big_h = v.conj().T @ h_majo @ v
    h = big_h[:L, :L]
    delta = big_h[:L, L:]
    # The rotated generator must have the particle-hole block structure
    # [[h, delta], [-delta*, -h*]]; anything else means a convention bug.
    residual = max(
        np.abs(big_h[L:, :L] + delta.conj()).max(),
        np.abs(big_h[L:, L:] + h.conj()).max(),
    )
    if residual > 1e-8:
        raise ValidationError(
            f"rotated generator lost its particle-hole structure (residual {residual:.2e})"
        )
    h = (h + h.conj().T) / 2.0
    delta = (delta - delta.T) / 2.0
    return FreeFermionSpec(h=h, delta=delta)


def many_body_hamiltonian(spec: FreeFermionSpec) -> np.ndarray:
    """Dense 2^L x 2^L Hamiltonian of the quadratic model (string signs included)."""
    h = np.ascontiguousarray(spec.h, dtype=np.complex128)
    delta = np.ascontiguousarray(spec.delta, dtype=np.complex128)
    out = quadratic_many_body(h, delta)
    herm = np.abs(out - out.conj().T).max()
    if herm > 1e-10:
        raise ValidationError(f"many-body Hamiltonian lost Hermiticity ({herm:.2e})")
    return out


def nambu_matrix(spec: FreeFermionSpec) -> np.ndarray:
    """2L x 2L single-particle matrix [[h, delta], [-delta*, -h*]]."""
    return np.block(
        [[spec.h, spec.delta], [-spec.delta.conj(), -spec.h.conj()]]
    )


def sample_free_fermion(L: int, rng: Stream) -> UnitarySample:
    """Random free-fermion unitary: SO(2L) sample -> quadratic Hamiltonian -> exp."""
    _check_L(L, minimum=2)
    last_error: BranchAmbiguityError | None = None
    for _ in range(5):
        u_orth = sample_special_orthogonal(2 * L, rng)
        try:
            spec = free_fermion_spec_from_orthogonal(u_orth)
        except BranchAmbiguityError as exc:
            last_error = exc
            continue
        h_many = many_body_hamiltonian(spec)
        u = expm_hermitian_i(h_many)
        return UnitarySample("freefermion", L, u, rng.seed, spec)
    raise last_error  # pragma: no cover - five -1 eigenvalue hits in a row


# ---------------------------------------------------------------------------
# qft
# ---------------------------------------------------------------------------

def build_qft(L: int, seed: int = 0) -> UnitarySample:
    """Discrete Fourier transform on d = 2^L levels."""
    _check_L(L)
    d = 2 ** L
    j = np.arange(d)
    u = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    return UnitarySample("qft", L, u, seed)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def sample_unitary(
    ensemble: str,
    L: int,
    rng: Stream,
    depth: int | None = None,
    layers: int | None = None,
) -> UnitarySample:
    """Draw one unitary from the named ensemble using the given stream.

    The qft family is deterministic; the stream is accepted but unused so
    that callers can treat all ensembles uniformly.
    """
    if ensemble == "cue":
        return sample_cue(L, rng)
    if ensemble == "clifford":
        return sample_clifford(L, rng, depth=depth)
    if ensemble == "spinchain":
        return sample_spin_chain(L, rng, layers=layers)
    if ensemble == "freefermion":
        return sample_free_fermion(L, rng)
    if ensemble == "qft":
        return build_qft(L, seed=rng.seed)
    raise ValidationError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")
