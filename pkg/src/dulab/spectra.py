"""Spectral diagnostics for diluted-unitary channels.

Covers: superoperator spectra, annulus radii against the closed-form
prediction R_pm = sqrt((1-kappa)^2 r pm kappa^2) / sqrt(r), cluster
counting on the unitary's eigenphase circle, the ring-to-disk and
cluster-to-ring threshold formulas, eigenvalue-trajectory matching,
angular velocities under a small kappa step, density grids, and an
empirical curve-overlap transition detector.
"""

from __future__ import annotations

import csv
from concurrent.futures import Executor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._accel import greedy_scan
from .channels import DilutedMapSpec, KrausSet, build_superoperator, sample_kraus
from .ensembles import UnitarySample, sample_unitary
from .errors import DegenerateInputError, NumericalError, ValidationError
from .numkit import eig_general
from .rng import Stream

#: Default circular-gap multiplier declaring a cluster boundary.
DEFAULT_GAP_FACTOR = 5.0
#: Default |Im| below which an eigenvalue counts as real and is discarded.
DEFAULT_REAL_TOL = 1e-6
#: Default kappa step for velocities, as a fraction of kappa.
DEFAULT_D_KAPPA_FRACTION = 1e-3


# ---------------------------------------------------------------------------
# spectrum extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumSource:
    """Provenance summary attached to a spectrum."""

    ensemble: str
    L: int
    r: int
    kappa: float
    seed: int


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one channel, with the stationary eigenvalue flagged."""

    eigenvalues: np.ndarray
    trivial_index: int
    source: SpectrumSource | None = None

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=complex)
        if vals.ndim != 1 or vals.size == 0:
            raise ValidationError("spectrum must be a nonempty 1-D array of eigenvalues")
        if not (0 <= self.trivial_index < vals.size):
            raise ValidationError(
                f"trivial_index {self.trivial_index} out of range for {vals.size} eigenvalues"
            )
        top = np.abs(vals).max()
        if top > 1.0 + 1e-8:
            raise NumericalError(
                f"spectral radius {top:.12f} exceeds 1 beyond tolerance; "
                "the map is not a valid channel"
            )
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def nontrivial(self) -> np.ndarray:
        """All eigenvalues except the stationary one."""
        mask = np.ones(self.eigenvalues.size, dtype=bool)
        mask[self.trivial_index] = False
        return self.eigenvalues[mask]


def compute_spectrum(spec: DilutedMapSpec) -> Spectrum:
    """Full eigenvalue set of the channel's superoperator."""
    phi = build_superoperator(spec)
    values = eig_general(phi).values
    trivial = int(np.argmin(np.abs(values - 1.0)))
    source = SpectrumSource(
        ensemble=spec.unitary.ensemble,
        L=spec.unitary.L,
        r=spec.kraus.r,
        kappa=spec.kappa,
        seed=spec.unitary.seed,
    )
    return Spectrum(eigenvalues=values, trivial_index=trivial, source=source)


# ---------------------------------------------------------------------------
# annulus radii
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadiiEstimate:
    """Measured vs predicted inner/outer radii of the nontrivial spectrum."""

    r_minus_measured: float
    r_plus_measured: float
    r_minus_pred: float
    r_plus_pred: float
    cluster_radius: float
    center_distance: float

    def __post_init__(self):
        for lo, hi, tag in (
            (self.r_minus_measured, self.r_plus_measured, "measured"),
            (self.r_minus_pred, self.r_plus_pred, "predicted"),
        ):
            if not (0.0 <= lo <= hi <= 1.0 + 1e-8):
                raise ValidationError(
                    f"{tag} radii must satisfy 0 <= R- <= R+ <= 1, got ({lo}, {hi})"
                )


def predicted_radii(r: int, kappa: float) -> tuple[float, float]:
    """Closed-form annulus radii; inner radius clamps to 0 past its zero."""
    if r < 1:
        raise ValidationError(f"rank must be >= 1, got {r}")
    if not (0.0 <= kappa <= 1.0):
        raise ValidationError(f"kappa must lie in [0, 1], got {kappa}")
    base = (1.0 - kappa) ** 2 * r
    plus = np.sqrt((base + kappa ** 2) / r)
    minus_sq = base - kappa ** 2
    minus = np.sqrt(max(minus_sq, 0.0) / r)
    return float(minus), float(plus)


def radii(spectrum: Spectrum, r: int, kappa: float) -> RadiiEstimate:
    """Measured radii (trivial eigenvalue excluded) against predictions."""
    moduli = np.abs(spectrum.nontrivial)
    if moduli.size == 0:
        raise ValidationError("spectrum has no nontrivial eigenvalues")
    minus_pred, plus_pred = predicted_radii(r, kappa)
    return RadiiEstimate(
        r_minus_measured=float(moduli.min()),
        r_plus_measured=float(moduli.max()),
        r_minus_pred=minus_pred,
        r_plus_pred=plus_pred,
        cluster_radius=(plus_pred - minus_pred) / 2.0,
        center_distance=(plus_pred + minus_pred) / 2.0,
    )


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

def kappa_rd(r: float) -> float:
    """Dissipation strength where the predicted inner radius reaches zero."""
    if r < 1:
        raise ValidationError(f"rank must be >= 1, got {r}")
    return 1.0 / (1.0 + 1.0 / np.sqrt(r))


def cluster_shape_factor(n: float) -> float:
    """f(n) = sqrt(2/n + n/8), the cluster-geometry factor."""
    if n < 1:
        raise ValidationError(f"cluster count must be >= 1, got {n}")
    return float(np.sqrt(2.0 / n + n / 8.0))


def kappa_cr(n: float, r: float) -> float:
    """Estimated dissipation strength where n clusters merge into a ring."""
    if r < 1:
        raise ValidationError(f"rank must be >= 1, got {r}")
    return 1.0 / (1.0 + cluster_shape_factor(n) / np.sqrt(r))


# ---------------------------------------------------------------------------
# cluster counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClusterReport:
    """Cluster count of a unitary's eigenphases and the boundaries found."""

    n: int
    boundaries: tuple[float, ...]
    gap_factor: float

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"cluster count must be >= 1, got {self.n}")
        if len(self.boundaries) != self.n:
            raise ValidationError(
                f"expected {self.n} boundaries, got {len(self.boundaries)}"
            )
        object.__setattr__(self, "boundaries", tuple(float(b) for b in self.boundaries))


def count_clusters(unitary: UnitarySample, gap_factor: float = DEFAULT_GAP_FACTOR) -> ClusterReport:
    """Count eigenphase clusters of a unitary on the circle.

    Clusters describe the channel spectrum the unitary generates, which
    lives in dimension d^2; its mean eigenphase spacing 2*pi/d^2 is the
    gap unit.  Phases of U are sorted and every circular gap wider than
    gap_factor times that unit opens a boundary (placed at the gap
    midpoint).  If no gap qualifies, the result is a single cluster
    whose boundary sits at the midpoint of the widest gap.
    """
    if gap_factor <= 0:
        raise ValidationError(f"gap_factor must be positive, got {gap_factor}")
    d = unitary.d
    phases = np.sort(np.angle(np.linalg.eigvals(unitary.matrix)))
    gaps = np.diff(phases)
    wrap = 2.0 * np.pi - (phases[-1] - phases[0])
    all_gaps = np.concatenate([gaps, [wrap]])
    midpoints = np.concatenate(
        [(phases[:-1] + phases[1:]) / 2.0, [phases[-1] + wrap / 2.0]]
    )
    threshold = gap_factor * (2.0 * np.pi / (d * d))
    wide = all_gaps > threshold
    if not np.any(wide):
        widest = int(np.argmax(all_gaps))
        boundaries = (float(midpoints[widest]),)
    else:
        boundaries = tuple(float(m) for m in np.sort(midpoints[wide]))
    return ClusterReport(n=len(boundaries), boundaries=boundaries, gap_factor=gap_factor)


# ---------------------------------------------------------------------------
# trajectory matching and angular velocity
# ---------------------------------------------------------------------------

def _spectrum_values(obj) -> np.ndarray:
    if isinstance(obj, Spectrum):
        return obj.eigenvalues
    return np.asarray(obj, dtype=complex)


def match_eigenvalues(a, b) -> list[tuple[int, int]]:
    """Pair each eigenvalue of `a` with a distinct one of `b`.

    Greedy global matching: repeatedly take the closest unmatched pair
    over all remaining (i, j), ties broken toward lower flat index.  This
    is robust where independent per-point nearest neighbors collide on
    near-degenerate spectra.
    """
    va = _spectrum_values(a)
    vb = _spectrum_values(b)
    if va.size != vb.size:
        raise ValidationError(
            f"cannot match spectra of different sizes ({va.size} vs {vb.size})"
        )
    n = va.size
    dist = np.abs(va[:, None] - vb[None, :])
    order = np.argsort(dist.reshape(-1), kind="stable")
    pairs = greedy_scan(order.astype(np.int64), n)
    return [(i, int(pairs[i])) for i in range(n)]


def _wrap_angle(x: np.ndarray) -> np.ndarray:
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - x, 2.0 * np.pi)


@dataclass(frozen=True)
class AngularVelocity:
    """Velocity statistics for one channel at one kappa."""

    kappa: float
    d_kappa: float
    mean: float
    per_eigenvalue: np.ndarray
    moduli: np.ndarray
    n_discarded: int


def angular_velocity(
    unitary: UnitarySample,
    kraus: KrausSet,
    kappa: float,
    d_kappa_fraction: float = DEFAULT_D_KAPPA_FRACTION,
    real_tol: float = DEFAULT_REAL_TOL,
) -> AngularVelocity:
    """Mean |d theta / d kappa| over matched eigenvalue pairs.

    The same unitary and Kraus set are evaluated at kappa and at
    kappa * (1 + d_kappa_fraction); eigenvalues are matched globally and
    pairs where either endpoint is (numerically) real are discarded —
    this also removes the stationary eigenvalue at 1.
    """
    if kappa <= 0.0:
        raise ValidationError(f"kappa must be positive for a velocity, got {kappa}")
    d_kappa = kappa * d_kappa_fraction
    if d_kappa <= 0.0:
        raise ValidationError(f"d_kappa_fraction must be positive, got {d_kappa_fraction}")
    kappa_b = kappa + d_kappa
    if kappa_b > 1.0:
        raise ValidationError(
            f"kappa + d_kappa = {kappa_b} exceeds 1; shrink kappa or the step"
        )
    spec_a = DilutedMapSpec(unitary=unitary, kraus=kraus, kappa=kappa)
    spec_b = DilutedMapSpec(unitary=unitary, kraus=kraus, kappa=kappa_b)
    va = eig_general(build_superoperator(spec_a)).values
    vb = eig_general(build_superoperator(spec_b)).values
    pairing = match_eigenvalues(va, vb)
    idx_a = np.array([i for i, _ in pairing])
    idx_b = np.array([j for _, j in pairing])
    keep = (np.abs(va[idx_a].imag) >= real_tol) & (np.abs(vb[idx_b].imag) >= real_tol)
    n_discarded = int((~keep).sum())
    if not np.any(keep):
        raise DegenerateInputError(
            f"all {len(pairing)} eigenvalue pairs are real at kappa={kappa}; "
            "no angular velocity is defined"
        )
    a_kept = va[idx_a[keep]]
    b_kept = vb[idx_b[keep]]
    dtheta = _wrap_angle(np.angle(b_kept) - np.angle(a_kept))
    velocities = np.abs(dtheta) / d_kappa
    return AngularVelocity(
        kappa=kappa,
        d_kappa=d_kappa,
        mean=float(velocities.mean()),
        per_eigenvalue=velocities,
        moduli=np.abs(a_kept),
        n_discarded=n_discarded,
    )


@dataclass(frozen=True)
class VelocityCurve:
    """Seed-averaged mean angular velocity over a kappa grid."""

    ensemble: str
    L: int
    r: int
    kappas: np.ndarray
    mean_velocity: np.ndarray
    discarded_counts: np.ndarray
    n_seeds: int
    d_kappa_rule: float = DEFAULT_D_KAPPA_FRACTION

    def __post_init__(self):
        kappas = np.asarray(self.kappas, dtype=float)
        mv = np.asarray(self.mean_velocity, dtype=float)
        dc = np.asarray(self.discarded_counts, dtype=int)
        if not (kappas.size == mv.size == dc.size):
            raise ValidationError("velocity curve arrays must share one length")
        if np.any(mv < 0):
            raise ValidationError("mean velocities cannot be negative")
        object.__setattr__(self, "kappas", kappas)
        object.__setattr__(self, "mean_velocity", mv)
        object.__setattr__(self, "discarded_counts", dc)


def velocity_curve(
    ensemble: str,
    L: int,
    r: int,
    kappa_grid: Sequence[float],
    seeds: Sequence[int],
    d_kappa_fraction: float = DEFAULT_D_KAPPA_FRACTION,
    real_tol: float = DEFAULT_REAL_TOL,
    depth: int | None = None,
    executor: Executor | None = None,
) -> VelocityCurve:
    """Velocity curve over a kappa grid, averaged over seeds.

    Each seed fixes one (unitary, Kraus set) pair reused across the whole
    grid, so a curve follows the same channel family as dissipation
    grows.  The Kraus stream is split off identically for every ensemble,
    which makes cross-ensemble comparisons at equal seeds paired.  Jobs
    over (seed, kappa) may run on an executor; the reduction is ordered,
    so results do not depend on scheduling.
    """
    grid = np.asarray(list(kappa_grid), dtype=float)
    if grid.size == 0:
        raise ValidationError("kappa grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("kappa grid must be strictly increasing")
    if grid[0] <= 0.0 or grid[-1] >= 1.0:
        raise ValidationError("kappa grid must lie strictly inside (0, 1)")
    if len(seeds) == 0:
        raise ValidationError("need at least one seed")
    pairs: list[tuple[UnitarySample, KrausSet]] = []
    for seed in seeds:
        root = Stream(seed)
        unitary = sample_unitary(ensemble, L, root.spawn(0), depth=depth)
        kraus = sample_kraus(unitary.d, r, root.spawn(1))
        pairs.append((unitary, kraus))
    jobs = [(si, ki) for si in range(len(pairs)) for ki in range(grid.size)]

    def run(job: tuple[int, int]) -> AngularVelocity:
        si, ki = job
        unitary, kraus = pairs[si]
        return angular_velocity(
            unitary, kraus, grid[ki], d_kappa_fraction=d_kappa_fraction, real_tol=real_tol
        )

    mapper = executor.map if executor is not None else map
    results = list(mapper(run, jobs))
    sums = np.zeros(grid.size)
    discards = np.zeros(grid.size, dtype=int)
    for (si, ki), res in zip(jobs, results):
        sums[ki] += res.mean
        discards[ki] += res.n_discarded
    return VelocityCurve(
        ensemble=ensemble,
        L=L,
        r=r,
        kappas=grid,
        mean_velocity=sums / len(pairs),
        discarded_counts=discards,
        n_seeds=len(pairs),
        d_kappa_rule=d_kappa_fraction,
    )


def detect_transition(
    model_curve: VelocityCurve, baseline_curve: VelocityCurve, epsilon: float
) -> float | None:
    """Smallest grid kappa from which the curves stay within epsilon.

    The criterion is a relative difference |v_model - v_base| / v_base
    below epsilon at the candidate kappa and at every larger grid point.
    Returns None when the curves never lock together.
    """
    if epsilon <= 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    km = model_curve.kappas
    kb = baseline_curve.kappas
    if km.size != kb.size or np.any(km != kb):
        raise ValidationError("velocity curves must share the same kappa grid")
    vm = model_curve.mean_velocity
    vb = baseline_curve.mean_velocity
    diff = np.abs(vm - vb)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(diff == 0.0, 0.0, diff / np.abs(vb))
    ok = rel < epsilon
    suffix_ok = np.logical_and.accumulate(ok[::-1])[::-1]
    hits = np.nonzero(suffix_ok)[0]
    if hits.size == 0:
        return None
    return float(km[hits[0]])


# ---------------------------------------------------------------------------
# density grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityGrid:
    """2-D histogram of eigenvalues over the square [-1, 1] x [-1, 1]."""

    counts: np.ndarray
    re_edges: np.ndarray
    im_edges: np.ndarray


def density_grid(spectra: Sequence[Spectrum], bins: int) -> DensityGrid:
    """Histogram of all nontrivial eigenvalues from a batch of spectra."""
    if bins < 2:
        raise ValidationError(f"bins must be >= 2, got {bins}")
    values = [s.nontrivial for s in spectra]
    flat = np.concatenate(values) if values else np.empty(0, dtype=complex)
    re = np.clip(flat.real, -1.0, 1.0)
    im = np.clip(flat.imag, -1.0, 1.0)
    counts, re_edges, im_edges = np.histogram2d(
        re, im, bins=bins, range=[[-1.0, 1.0], [-1.0, 1.0]]
    )
    return DensityGrid(counts=counts, re_edges=re_edges, im_edges=im_edges)


# ---------------------------------------------------------------------------
# CSV persistence
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


SPECTRUM_CSV_HEADER = ["seed", "ensemble", "L", "r", "kappa", "re", "im", "is_trivial"]
VELOCITY_CSV_HEADER = [
    "ensemble",
    "L",
    "r",
    "kappa",
    "mean_velocity",
    "n_discarded",
    "n_seeds",
]


def write_spectrum_csv(path: str | Path, spectra: Sequence[Spectrum]) -> None:
    """One row per eigenvalue; floats carry 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_CSV_HEADER)
        for spectrum in spectra:
            src = spectrum.source
            if src is None:
                raise ValidationError("cannot persist a spectrum without source metadata")
            for i, lam in enumerate(spectrum.eigenvalues):
                writer.writerow(
                    [
                        src.seed,
                        src.ensemble,
                        src.L,
                        src.r,
                        _fmt(src.kappa),
                        _fmt(lam.real),
                        _fmt(lam.imag),
                        1 if i == spectrum.trivial_index else 0,
                    ]
                )


def write_velocity_csv(path: str | Path, curve: VelocityCurve) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(VELOCITY_CSV_HEADER)
        for k, v, nd in zip(curve.kappas, curve.mean_velocity, curve.discarded_counts):
            writer.writerow(
                [curve.ensemble, curve.L, curve.r, _fmt(k), _fmt(v), int(nd), curve.n_seeds]
            )
