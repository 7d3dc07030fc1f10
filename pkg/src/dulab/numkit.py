"""Dense linear-algebra helpers shared by the whole package.

Everything here is defensive: inputs are validated (finiteness, shape,
size cap) before work, and failure modes that callers can act on are
raised as typed exceptions from :mod:`dulab.errors` rather than leaking
backend errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import BranchAmbiguityError, DegenerateInputError, NumericalError, ValidationError

#: Hard cap on any dense matrix dimension handled by this package.
SIZE_CAP = 8192


def check_matrix(a: np.ndarray, name: str = "matrix", square: bool = True) -> np.ndarray:
    """Validate a dense matrix: 2-D, finite, within the size cap."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got ndim={a.ndim}")
    if square and a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if max(a.shape) > SIZE_CAP:
        raise ValidationError(
            f"{name} has shape {a.shape}, exceeding the {SIZE_CAP}x{SIZE_CAP} size cap"
        )
    if not np.all(np.isfinite(a.real)) or (np.iscomplexobj(a) and not np.all(np.isfinite(a.imag))):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the size cap enforced on the result."""
    a = check_matrix(a, "kron factor a", square=False)
    b = check_matrix(b, "kron factor b", square=False)
    if a.shape[0] * b.shape[0] > SIZE_CAP or a.shape[1] * b.shape[1] > SIZE_CAP:
        raise ValidationError(
            f"kron result would be {a.shape[0] * b.shape[0]}x{a.shape[1] * b.shape[1]}, "
            f"exceeding the {SIZE_CAP}x{SIZE_CAP} size cap"
        )
    return np.kron(a, b)


def qr_phase_fixed(a: np.ndarray) -> np.ndarray:
    """QR-derived unitary with the R diagonal rotated to the positive real axis.

    Multiplying Q by diag(R_kk / |R_kk|) removes the phase ambiguity of the
    raw QR factorization; on Gaussian input the result is Haar-distributed.
    """
    a = check_matrix(a, "qr input", square=False)
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    mags = np.abs(diag)
    if np.any(mags < 1e-300):
        raise DegenerateInputError(
            "qr input is numerically rank-deficient: "
            f"min |R_kk| = {mags.min():.3e}"
        )
    return q * (diag / mags)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (and optionally right eigenvectors) of a general matrix."""

    values: np.ndarray
    vectors: np.ndarray | None = None


def eig_general(a: np.ndarray, want_vectors: bool = False) -> EigenDecomposition:
    """Dense nonsymmetric eigendecomposition with typed failure."""
    a = check_matrix(a, "eig input")
    try:
        if want_vectors:
            values, vectors = np.linalg.eig(a)
            return EigenDecomposition(values=values, vectors=vectors)
        values = np.linalg.eigvals(a)
        return EigenDecomposition(values=values)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigendecomposition failed to converge for a {a.shape[0]}x{a.shape[1]} matrix: {exc}"
        ) from exc


def expm_hermitian_i(h: np.ndarray) -> np.ndarray:
    """exp(-iH) for Hermitian H, via the spectral decomposition."""
    h = check_matrix(h, "hermitian generator")
    scale = max(np.abs(h).max(), 1.0)
    if np.abs(h - h.conj().T).max() > 1e-10 * scale:
        raise ValidationError("expm_hermitian_i input is not Hermitian")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)) @ v.conj().T


def logm_special_orthogonal(o: np.ndarray) -> np.ndarray:
    """Hermitian H = i log(o) for a special orthogonal o (so o = exp(-iH)).

    The principal log of a real special orthogonal matrix is real
    antisymmetric, provided no eigenvalue sits on the branch cut at -1.
    Eigenvalues within 1e-8 of -1 are rejected as ambiguous; callers are
    expected to resample.
    """
    o = check_matrix(o, "orthogonal matrix")
    if np.iscomplexobj(o) and np.abs(o.imag).max() > 1e-12:
        raise ValidationError("logm_special_orthogonal expects a real matrix")
    o = np.real(o)
    if np.abs(o.T @ o - np.eye(o.shape[0])).max() > 1e-10:
        raise ValidationError("logm_special_orthogonal input is not orthogonal")
    det = np.linalg.det(o)
    if abs(det - 1.0) > 1e-8:
        raise ValidationError(f"logm_special_orthogonal needs det +1, got {det:.6f}")
    phases = np.angle(np.linalg.eigvals(o))
    if np.any(np.pi - np.abs(phases) < 1e-8):
        raise BranchAmbiguityError(
            "orthogonal matrix has an eigenvalue within 1e-8 of -1; "
            "the matrix log branch is ambiguous"
        )
    raw = scipy.linalg.logm(o)
    a = np.real(raw)
    a = (a - a.T) / 2.0
    return 1j * a


def vec(rho: np.ndarray) -> np.ndarray:
    """Row-major flattening of a matrix into a column vector."""
    rho = check_matrix(rho, "vec input")
    return rho.reshape(-1)


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`vec` for a d x d matrix."""
    v = np.asarray(v)
    if v.size != d * d:
        raise ValidationError(f"unvec input has {v.size} entries, expected {d * d}")
    return v.reshape(d, d)


def save_cmat(path: str | Path, a: np.ndarray) -> None:
    """Write a complex matrix as text: header line, then one `re im` pair per entry.

    Floats are printed with 17 significant digits, which round-trips IEEE
    doubles exactly.
    """
    a = check_matrix(np.asarray(a, dtype=np.complex128), "cmat matrix", square=False)
    rows, cols = a.shape
    lines = [f"cmat 1 {rows} {cols}"]
    flat = a.reshape(-1)
    lines.extend(f"{z.real:.17g} {z.imag:.17g}" for z in flat)
    Path(path).write_text("\n".join(lines) + "\n")


def load_cmat(path: str | Path) -> np.ndarray:
    """Read a matrix written by :func:`save_cmat`."""
    text = Path(path).read_text().strip().split("\n")
    header = text[0].split()
    if len(header) != 4 or header[0] != "cmat" or header[1] != "1":
        raise ValidationError(f"{path}: not a cmat v1 file (header {text[0]!r})")
    rows, cols = int(header[2]), int(header[3])
    body = text[1:]
    if len(body) != rows * cols:
        raise ValidationError(
            f"{path}: expected {rows * cols} entries, found {len(body)}"
        )
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"{path}: malformed entry on line {i + 2}: {line!r}")
        out[i] = float(parts[0]) + 1j * float(parts[1])
    return out.reshape(rows, cols)
