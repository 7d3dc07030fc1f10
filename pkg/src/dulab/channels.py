"""Random Kraus sets and the diluted-unitary channel built from them.

The channel mixes a coherent unitary branch with a random rank-r
dissipative branch:

    Phi(rho) = (1 - kappa) U rho U^dag + kappa sum_j K_j rho K_j^dag

with 0 <= kappa <= 1 and sum_j K_j^dag K_j = I.  The d^2 x d^2
superoperator form of Phi acts on row-major vectorized density matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import UnitarySample
from .errors import ValidationError
from .numkit import qr_phase_fixed, unvec, vec
from .rng import Stream

#: Largest Hilbert-space dimension for which the superoperator is materialized.
SUPEROP_MAX_D = 64


@dataclass(frozen=True)
class KrausSet:
    """A completeness-checked set of r Kraus operators on a d-level system."""

    d: int
    r: int
    ops: tuple[np.ndarray, ...]
    seed: int

    def __post_init__(self):
        if not (1 <= self.r <= self.d * self.d - 1):
            raise ValidationError(
                f"Kraus rank must satisfy 1 <= r <= d^2 - 1, got r={self.r} at d={self.d}"
            )
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        if len(ops) != self.r:
            raise ValidationError(f"expected {self.r} Kraus operators, got {len(ops)}")
        for k in ops:
            if k.shape != (self.d, self.d):
                raise ValidationError(
                    f"every Kraus operator must be {self.d}x{self.d}, got {k.shape}"
                )
        total = sum(k.conj().T @ k for k in ops)
        if np.linalg.norm(total - np.eye(self.d)) >= 1e-10:
            raise ValidationError("Kraus set violates completeness sum K^dag K = I")
        object.__setattr__(self, "ops", ops)


@dataclass(frozen=True)
class DilutedMapSpec:
    """One concrete channel: a unitary, a Kraus set, and the mixing weight."""

    unitary: UnitarySample
    kraus: KrausSet
    kappa: float

    def __post_init__(self):
        if self.unitary.d != self.kraus.d:
            raise ValidationError(
                f"unitary dimension {self.unitary.d} does not match Kraus dimension {self.kraus.d}"
            )
        if not (0.0 <= self.kappa <= 1.0):
            raise ValidationError(f"kappa must lie in [0, 1], got {self.kappa}")

    @property
    def d(self) -> int:
        return self.kraus.d


def sample_kraus(d: int, r: int, rng: Stream, method: str = "block") -> KrausSet:
    """Draw a random completeness-satisfying Kraus set.

    method="block" (default): phase-fixed QR of an rd x d Gaussian; the r
    stacked d x d blocks of the resulting isometry are the operators.
    Completeness is automatic from Q^dag Q = I.

    method="chop": reference sampler that draws an rd x rd Haar unitary
    and chops its first block column.  Same distribution, much slower;
    kept for cross-checking the block sampler.
    """
    if not (1 <= r <= d * d - 1):
        raise ValidationError(f"Kraus rank must satisfy 1 <= r <= d^2 - 1, got r={r} at d={d}")
    if method == "block":
        g = rng.complex_normal((r * d, d))
        q = qr_phase_fixed(g)
    elif method == "chop":
        g = rng.complex_normal((r * d, r * d))
        w = qr_phase_fixed(g)
        q = w[:, :d]
    else:
        raise ValidationError(f"unknown Kraus sampling method {method!r}")
    ops = tuple(q[j * d : (j + 1) * d, :] for j in range(r))
    return KrausSet(d=d, r=r, ops=ops, seed=rng.seed)


def build_superoperator(spec: DilutedMapSpec) -> np.ndarray:
    """Dense d^2 x d^2 matrix of the channel on row-major vectorized states."""
    d = spec.d
    if d > SUPEROP_MAX_D:
        raise ValidationError(
            f"superoperator materialization is limited to d <= {SUPEROP_MAX_D}, got d={d}"
        )
    u = spec.unitary.matrix
    phi = (1.0 - spec.kappa) * np.kron(u, u.conj())
    if spec.kappa != 0.0:
        acc = np.zeros((d * d, d * d), dtype=complex)
        for k in spec.kraus.ops:
            acc += np.kron(k, k.conj())
        phi = phi + spec.kappa * acc
    return phi


def apply_channel(rho: np.ndarray, spec: DilutedMapSpec) -> np.ndarray:
    """Apply the channel directly to a density matrix (no superoperator).

    The input must be a valid state up to tolerance: Hermitian within
    1e-8 and unit trace within 1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    d = spec.d
    if rho.shape != (d, d):
        raise ValidationError(f"state must be {d}x{d}, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-8:
        raise ValidationError("state is not Hermitian within 1e-8")
    if abs(np.trace(rho) - 1.0) > 1e-8:
        raise ValidationError(f"state trace deviates from 1 by {abs(np.trace(rho) - 1.0):.2e}")
    u = spec.unitary.matrix
    out = (1.0 - spec.kappa) * (u @ rho @ u.conj().T)
    if spec.kappa != 0.0:
        for k in spec.kraus.ops:
            out += spec.kappa * (k @ rho @ k.conj().T)
    return out


def choi_matrix(phi: np.ndarray) -> np.ndarray:
    """Reshuffle a superoperator into its Choi matrix.

    For Phi = sum_j A_j (x) B_j*, the Choi matrix is sum_j vec(A_j)
    vec(B_j)^dag; complete positivity of the channel is positive
    semidefiniteness of this matrix.
    """
    n = phi.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise ValidationError(f"superoperator size {n} is not a perfect square")
    return phi.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(n, n)


__all__ = [
    "KrausSet",
    "DilutedMapSpec",
    "sample_kraus",
    "build_superoperator",
    "apply_channel",
    "choi_matrix",
    "SUPEROP_MAX_D",
    "vec",
    "unvec",
]
