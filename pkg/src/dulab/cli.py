"""Command-line harness: seeded, parallel, file-emitting sweeps.

Subcommands
-----------
spectrum   eigenvalue CSVs over a kappa set, one file per (kappa, seed)
velocity   model-vs-baseline velocity curves, transition detection
clusters   postselect a unitary with a target cluster count
fidelity   Monte Carlo fidelity decay curves with analytic overlay
sample     persist one unitary (optionally Kraus set / superoperator)

Every run is pinned by a master seed; parallel jobs draw from seeds
derived per stable job index, so the parallelism degree never changes
any output byte.  Exit codes: 0 ok, 2 invalid configuration, 3 numerical
failure, 4 postselection failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .channels import DilutedMapSpec, sample_kraus, build_superoperator
from .ensembles import ENSEMBLES, sample_unitary
from .errors import (
    DulabError,
    NumericalError,
    PostselectionError,
    ValidationError,
)
from .fidelity import analytic_fidelity, simulate_fidelity, write_fidelity_csv
from .numkit import save_cmat
from .rng import Stream, derive_seed
from .spectra import (
    DEFAULT_D_KAPPA_FRACTION,
    DEFAULT_GAP_FACTOR,
    DEFAULT_REAL_TOL,
    compute_spectrum,
    count_clusters,
    detect_transition,
    kappa_cr,
    kappa_rd,
    predicted_radii,
    velocity_curve,
    write_spectrum_csv,
    write_velocity_csv,
)

#: Largest L allowed without --allow-large for full-superoperator commands.
DESK_SCALE_MAX_L = 5


def build_id() -> str:
    """Short digest of the installed package sources, for provenance stamps."""
    pkg_dir = Path(__file__).parent
    digest = hashlib.sha256()
    for path in sorted(pkg_dir.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:12]


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

def _parse_seeds(text) -> tuple[int, int]:
    """Accept 'master:count', a bare master, or {'master':..,'count':..}."""
    if isinstance(text, dict):
        return int(text["master"]), int(text.get("count", 1))
    if isinstance(text, int):
        return int(text), 1
    parts = str(text).split(":")
    if len(parts) == 1:
        return int(parts[0]), 1
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise ValidationError(f"seeds must look like 'master:count', got {text!r}")


def _parse_kappa_grid(text) -> np.ndarray:
    """Accept 'min:max:count' or {'min':..,'max':..,'count':..}."""
    if isinstance(text, dict):
        lo, hi, count = float(text["min"]), float(text["max"]), int(text["count"])
    else:
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ValidationError(f"kappa grid must look like 'min:max:count', got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValidationError(f"kappa grid count must be >= 1, got {count}")
    if count == 1:
        return np.array([lo])
    return np.linspace(lo, hi, count)


def _parse_kappa_list(value) -> list[float]:
    """Accept a float, a list of floats, or comma-joined strings."""
    if value is None:
        return []
    if isinstance(value, (int, float)):
        return [float(value)]
    out: list[float] = []
    items = value if isinstance(value, (list, tuple)) else [value]
    for item in items:
        if isinstance(item, str):
            out.extend(float(p) for p in item.split(",") if p.strip())
        else:
            out.append(float(item))
    return out


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"config file not found: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"config file {path} must hold a JSON object")
    return doc


def _resolve(args: argparse.Namespace, config: dict, key: str, default=None):
    """Flag value wins over config-file value wins over default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _default_jobs() -> int:
    env = os.environ.get("DULAB_JOBS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"DULAB_JOBS must be an integer, got {env!r}")
    return 1


def _check_common(ensemble: str, L: int, r: int | None) -> None:
    if ensemble not in ENSEMBLES:
        raise ValidationError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")
    if not (1 <= L <= 6):
        raise ValidationError(f"L must be in [1, 6], got {L}")
    if ensemble == "spinchain" and (L < 2 or L % 2 != 0):
        raise ValidationError(f"spinchain requires even L >= 2, got {L}")
    if ensemble == "freefermion" and L < 2:
        raise ValidationError(f"freefermion requires L >= 2, got {L}")
    if r is not None:
        d = 2 ** L
        if not (1 <= r <= d * d - 1):
            raise ValidationError(f"rank must satisfy 1 <= r <= d^2-1 = {d * d - 1}, got {r}")


def _require_desk_scale(L: int, allow_large: bool, what: str) -> None:
    if L > DESK_SCALE_MAX_L and not allow_large:
        raise ValidationError(
            f"{what} at L={L} diagonalizes a {4 ** L}x{4 ** L} matrix; "
            "pass --allow-large to confirm"
        )


def _out_dir(args, config) -> Path:
    out = Path(_resolve(args, config, "out", "."))
    return out


def _write_meta(path: Path, command: str, resolved: dict, outputs: list[str], t0: float,
                extra: dict | None = None) -> None:
    record = {
        "command": command,
        "version": __version__,
        "build_id": build_id(),
        "config": resolved,
        "outputs": outputs,
        "wall_time_s": time.perf_counter() - t0,
    }
    if extra:
        record.update(extra)
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


def _sample_pair(ensemble: str, L: int, r: int, child_seed: int, depth: int | None):
    """The (unitary, Kraus) pair attached to one child seed.

    Sub-stream 0 feeds the unitary and sub-stream 1 the Kraus set, for
    every ensemble, so runs differing only in the ensemble share their
    dissipative parts seed for seed.
    """
    root = Stream(child_seed)
    unitary = sample_unitary(ensemble, L, root.spawn(0), depth=depth)
    kraus = sample_kraus(unitary.d, r, root.spawn(1))
    return unitary, kraus


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    config = _load_config(args.config)
    ensemble = _resolve(args, config, "ensemble", "cue")
    L = int(_resolve(args, config, "L", 4))
    r = int(_resolve(args, config, "r", 5))
    depth = _resolve(args, config, "depth")
    depth = int(depth) if depth is not None else None
    allow_large = bool(_resolve(args, config, "allow_large", False))
    jobs = int(_resolve(args, config, "jobs", _default_jobs()))
    kappas = _parse_kappa_list(_resolve(args, config, "kappa"))
    grid_spec = _resolve(args, config, "kappa_grid")
    if grid_spec is not None:
        kappas = list(_parse_kappa_grid(grid_spec)) + kappas
    if not kappas:
        raise ValidationError("spectrum needs at least one kappa (--kappa or --kappa-grid)")
    master, n_seeds = _parse_seeds(_resolve(args, config, "seeds", "1:1"))

    _check_common(ensemble, L, r)
    _require_desk_scale(L, allow_large, "a spectrum sweep")
    for k in kappas:
        if not (0.0 <= k <= 1.0):
            raise ValidationError(f"kappa must lie in [0, 1], got {k}")
    if n_seeds < 1:
        raise ValidationError(f"seed count must be >= 1, got {n_seeds}")
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    child_seeds = [derive_seed(master, i) for i in range(n_seeds)]
    pairs = [_sample_pair(ensemble, L, r, s, depth) for s in child_seeds]
    job_list = [(si, ki) for si in range(n_seeds) for ki in range(len(kappas))]

    def run(job):
        si, ki = job
        unitary, kraus = pairs[si]
        return compute_spectrum(DilutedMapSpec(unitary=unitary, kraus=kraus, kappa=kappas[ki]))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            spectra = list(ex.map(run, job_list))
    else:
        spectra = list(map(run, job_list))

    outputs = []
    for (si, ki), spectrum in zip(job_list, spectra):
        name = f"spectrum_k{ki:02d}_s{si:02d}.csv"
        write_spectrum_csv(out / name, [spectrum])
        outputs.append(name)
    predictions = [
        {
            "kappa": float(k),
            "r_minus_pred": predicted_radii(r, k)[0],
            "r_plus_pred": predicted_radii(r, k)[1],
        }
        for k in kappas
    ]
    resolved = {
        "ensemble": ensemble,
        "L": L,
        "r": r,
        "kappa": [float(k) for k in kappas],
        "seeds": {"master": master, "count": n_seeds},
        "jobs": jobs,
        "depth": depth,
    }
    extra = {
        "child_seeds": child_seeds,
        "predicted_radii": predictions,
        "kappa_rd": kappa_rd(r),
    }
    _write_meta(out / "spectrum_meta.json", "spectrum", resolved, outputs, t0, extra)
    return 0


# ---------------------------------------------------------------------------
# velocity
# ---------------------------------------------------------------------------

def cmd_velocity(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    config = _load_config(args.config)
    ensemble = _resolve(args, config, "ensemble", "qft")
    baseline = _resolve(args, config, "baseline", "cue")
    L = int(_resolve(args, config, "L", 4))
    r = int(_resolve(args, config, "r", 5))
    depth = _resolve(args, config, "depth")
    depth = int(depth) if depth is not None else None
    epsilon = float(_resolve(args, config, "epsilon", 0.2))
    gap_factor = float(_resolve(args, config, "gap_factor", DEFAULT_GAP_FACTOR))
    d_kappa_fraction = float(
        _resolve(args, config, "d_kappa_fraction", DEFAULT_D_KAPPA_FRACTION)
    )
    real_tol = float(_resolve(args, config, "real_tol", DEFAULT_REAL_TOL))
    allow_large = bool(_resolve(args, config, "allow_large", False))
    jobs = int(_resolve(args, config, "jobs", _default_jobs()))
    grid_spec = _resolve(args, config, "kappa_grid")
    if grid_spec is None:
        raise ValidationError("velocity needs --kappa-grid min:max:count")
    grid = _parse_kappa_grid(grid_spec)
    master, n_seeds = _parse_seeds(_resolve(args, config, "seeds", "1:1"))

    _check_common(ensemble, L, r)
    _check_common(baseline, L, r)
    _require_desk_scale(L, allow_large, "a velocity sweep")
    if n_seeds < 1:
        raise ValidationError(f"seed count must be >= 1, got {n_seeds}")
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    child_seeds = [derive_seed(master, i) for i in range(n_seeds)]
    ex = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        model = velocity_curve(
            ensemble, L, r, grid, child_seeds,
            d_kappa_fraction=d_kappa_fraction, real_tol=real_tol,
            depth=depth, executor=ex,
        )
        base = velocity_curve(
            baseline, L, r, grid, child_seeds,
            d_kappa_fraction=d_kappa_fraction, real_tol=real_tol,
            depth=depth, executor=ex,
        )
    finally:
        if ex is not None:
            ex.shutdown()
    detected = detect_transition(model, base, epsilon)
    first_unitary = sample_unitary(ensemble, L, Stream(child_seeds[0]).spawn(0), depth=depth)
    n_clusters = count_clusters(first_unitary, gap_factor=gap_factor).n

    model_name = f"velocity_{ensemble}.csv"
    base_name = f"velocity_{baseline}.csv"
    write_velocity_csv(out / model_name, model)
    write_velocity_csv(out / base_name, base)
    resolved = {
        "ensemble": ensemble,
        "baseline": baseline,
        "L": L,
        "r": r,
        "kappa_grid": [float(k) for k in grid],
        "seeds": {"master": master, "count": n_seeds},
        "epsilon": epsilon,
        "gap_factor": gap_factor,
        "d_kappa_fraction": d_kappa_fraction,
        "real_tol": real_tol,
        "jobs": jobs,
        "depth": depth,
    }
    extra = {
        "child_seeds": child_seeds,
        "predicted_kappa_rd": kappa_rd(r),
        "cluster_count": n_clusters,
        "predicted_kappa_cr": kappa_cr(n_clusters, r),
        "detected_kappa": detected,
    }
    _write_meta(out / "velocity_meta.json", "velocity", resolved,
                [model_name, base_name], t0, extra)
    return 0


# ---------------------------------------------------------------------------
# clusters (postselection)
# ---------------------------------------------------------------------------

def postselect_clusters(
    sampler, target_n: int, max_attempts: int, gap_factor: float = DEFAULT_GAP_FACTOR
):
    """Draw unitaries until one shows exactly target_n clusters.

    `sampler` maps an attempt index to a UnitarySample.  Returns
    (sample, report, attempts_used, histogram).  Raises
    PostselectionError carrying the histogram when attempts run out.
    """
    if target_n < 1:
        raise ValidationError(f"target cluster count must be >= 1, got {target_n}")
    if max_attempts < 1:
        raise ValidationError(f"max attempts must be >= 1, got {max_attempts}")
    histogram: dict[int, int] = {}
    for attempt in range(max_attempts):
        candidate = sampler(attempt)
        report = count_clusters(candidate, gap_factor=gap_factor)
        histogram[report.n] = histogram.get(report.n, 0) + 1
        if report.n == target_n:
            return candidate, report, attempt + 1, histogram
    raise PostselectionError(
        f"no sample with {target_n} clusters in {max_attempts} attempts",
        histogram=histogram,
    )


def cmd_clusters(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    config = _load_config(args.config)
    ensemble = _resolve(args, config, "ensemble", "clifford")
    L = int(_resolve(args, config, "L", 4))
    depth = _resolve(args, config, "depth")
    depth = int(depth) if depth is not None else None
    target_n = _resolve(args, config, "target_n")
    if target_n is None:
        raise ValidationError("clusters needs --target-n")
    target_n = int(target_n)
    max_attempts = int(_resolve(args, config, "max_attempts", 500))
    gap_factor = float(_resolve(args, config, "gap_factor", DEFAULT_GAP_FACTOR))
    master, _ = _parse_seeds(_resolve(args, config, "seeds", "1:1"))

    _check_common(ensemble, L, None)
    if target_n < 1:
        raise ValidationError(f"target cluster count must be >= 1, got {target_n}")
    if max_attempts < 1:
        raise ValidationError(f"max attempts must be >= 1, got {max_attempts}")
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    def sampler(attempt: int):
        return sample_unitary(ensemble, L, Stream(derive_seed(master, attempt)), depth=depth)

    resolved = {
        "ensemble": ensemble,
        "L": L,
        "target_n": target_n,
        "max_attempts": max_attempts,
        "gap_factor": gap_factor,
        "seeds": {"master": master, "count": 1},
        "depth": depth,
    }
    try:
        sample, report, attempts, histogram = postselect_clusters(
            sampler, target_n, max_attempts, gap_factor=gap_factor
        )
    except PostselectionError as exc:
        record = {
            "accepted": False,
            "histogram": {str(k): v for k, v in sorted(exc.histogram.items())},
            "attempts": max_attempts,
        }
        _write_meta(out / "clusters_report.json", "clusters", resolved, [], t0, record)
        raise
    cmat_name = "accepted_unitary.cmat"
    save_cmat(out / cmat_name, sample.matrix)
    record = {
        "accepted": True,
        "attempts": attempts,
        "histogram": {str(k): v for k, v in sorted(histogram.items())},
        "cluster_count": report.n,
        "boundaries": list(report.boundaries),
        "accepted_seed": sample.seed,
    }
    _write_meta(out / "clusters_report.json", "clusters", resolved, [cmat_name], t0, record)
    return 0


# ---------------------------------------------------------------------------
# fidelity
# ---------------------------------------------------------------------------

def cmd_fidelity(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    config = _load_config(args.config)
    ensemble = _resolve(args, config, "ensemble", "cue")
    L = int(_resolve(args, config, "L", 4))
    r = int(_resolve(args, config, "r", 5))
    depth = _resolve(args, config, "depth")
    depth = int(depth) if depth is not None else None
    T = int(_resolve(args, config, "layers", 30))
    realizations = int(_resolve(args, config, "realizations", 500))
    jobs = int(_resolve(args, config, "jobs", _default_jobs()))
    kappas = _parse_kappa_list(_resolve(args, config, "kappa"))
    if not kappas:
        raise ValidationError("fidelity needs at least one kappa (--kappa)")
    master, _ = _parse_seeds(_resolve(args, config, "seeds", "1:1"))

    _check_common(ensemble, L, r)
    if T < 1:
        raise ValidationError(f"layer count must be >= 1, got {T}")
    if realizations < 1:
        raise ValidationError(f"realizations must be >= 1, got {realizations}")
    for k in kappas:
        if not (0.0 <= k <= 1.0):
            raise ValidationError(f"kappa must lie in [0, 1], got {k}")
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    ex = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    outputs = []
    analytic = []
    try:
        for ki, kappa in enumerate(kappas):
            run = simulate_fidelity(
                ensemble, L, r, kappa, T, realizations,
                Stream(derive_seed(master, ki)), depth=depth, executor=ex,
            )
            name = f"fidelity_k{ki:02d}.csv"
            write_fidelity_csv(out / name, run)
            outputs.append(name)
            analytic.append(
                {
                    "kappa": float(kappa),
                    "analytic": [analytic_fidelity(2 ** L, kappa, t) for t in range(1, T + 1)],
                }
            )
    finally:
        if ex is not None:
            ex.shutdown()
    resolved = {
        "ensemble": ensemble,
        "L": L,
        "r": r,
        "kappa": [float(k) for k in kappas],
        "layers": T,
        "realizations": realizations,
        "seeds": {"master": master, "count": realizations},
        "jobs": jobs,
        "depth": depth,
    }
    extra = {"d": 2 ** L, "analytic_curves": analytic}
    _write_meta(out / "fidelity_meta.json", "fidelity", resolved, outputs, t0, extra)
    return 0


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def cmd_sample(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    config = _load_config(args.config)
    ensemble = _resolve(args, config, "ensemble", "cue")
    L = int(_resolve(args, config, "L", 4))
    r = _resolve(args, config, "r")
    r = int(r) if r is not None else None
    depth = _resolve(args, config, "depth")
    depth = int(depth) if depth is not None else None
    kappa = _resolve(args, config, "kappa")
    kappas = _parse_kappa_list(kappa)
    if len(kappas) > 1:
        raise ValidationError("sample takes at most one kappa")
    kappa = kappas[0] if kappas else None
    master, _ = _parse_seeds(_resolve(args, config, "seeds", "1:1"))

    _check_common(ensemble, L, r)
    if kappa is not None:
        if r is None:
            raise ValidationError("--kappa requires --r to build the channel")
        if not (0.0 <= kappa <= 1.0):
            raise ValidationError(f"kappa must lie in [0, 1], got {kappa}")
        if 2 ** L > 64:
            raise ValidationError("superoperator persistence is limited to d <= 64")
    out = _out_dir(args, config)
    out.mkdir(parents=True, exist_ok=True)

    child = derive_seed(master, 0)
    root = Stream(child)
    unitary = sample_unitary(ensemble, L, root.spawn(0), depth=depth)
    outputs = ["unitary.cmat"]
    save_cmat(out / "unitary.cmat", unitary.matrix)
    extra: dict = {"child_seed": child, "d": unitary.d}
    if r is not None:
        kraus = sample_kraus(unitary.d, r, root.spawn(1))
        for j, op in enumerate(kraus.ops):
            name = f"kraus_{j:02d}.cmat"
            save_cmat(out / name, op)
            outputs.append(name)
        if kappa is not None:
            spec = DilutedMapSpec(unitary=unitary, kraus=kraus, kappa=kappa)
            save_cmat(out / "superoperator.cmat", build_superoperator(spec))
            outputs.append("superoperator.cmat")
    resolved = {
        "ensemble": ensemble,
        "L": L,
        "r": r,
        "kappa": kappa,
        "seeds": {"master": master, "count": 1},
        "depth": depth,
    }
    _write_meta(out / "sample_meta.json", "sample", resolved, outputs, t0, extra)
    return 0


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--ensemble", choices=ENSEMBLES)
    p.add_argument("--L", type=int, help="qubit count (d = 2^L)")
    p.add_argument("--r", type=int, help="Kraus rank")
    p.add_argument("--seeds", help="master[:count]")
    p.add_argument("--out", help="output directory (default: current)")
    p.add_argument("--jobs", type=int, help="worker threads (default: DULAB_JOBS or 1)")
    p.add_argument("--depth", type=int, help="Clifford circuit depth (default 12*L^2)")
    p.add_argument("--allow-large", action="store_true", dest="allow_large", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dulab",
        description="Numerical lab for diluted-unitary quantum maps",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalue spectra over kappa values")
    _add_common(p)
    p.add_argument("--kappa", action="append", help="kappa value(s), comma-separable")
    p.add_argument("--kappa-grid", dest="kappa_grid", help="min:max:count")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("velocity", help="angular-velocity curves vs a baseline")
    _add_common(p)
    p.add_argument("--kappa-grid", dest="kappa_grid", help="min:max:count")
    p.add_argument("--baseline", choices=ENSEMBLES, help="baseline ensemble (default cue)")
    p.add_argument("--epsilon", type=float, help="overlap threshold (default 0.2)")
    p.add_argument("--gap-factor", dest="gap_factor", type=float)
    p.set_defaults(func=cmd_velocity)

    p = sub.add_parser("clusters", help="postselect a unitary on its cluster count")
    _add_common(p)
    p.add_argument("--target-n", dest="target_n", type=int, help="required cluster count")
    p.add_argument("--max-attempts", dest="max_attempts", type=int)
    p.add_argument("--gap-factor", dest="gap_factor", type=float)
    p.set_defaults(func=cmd_clusters)

    p = sub.add_parser("fidelity", help="Monte Carlo fidelity decay")
    _add_common(p)
    p.add_argument("--kappa", action="append", help="kappa value(s), comma-separable")
    p.add_argument("--layers", type=int, help="circuit depth T (default 30)")
    p.add_argument("--realizations", type=int, help="Monte Carlo realizations (default 500)")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("sample", help="persist one unitary / Kraus set / superoperator")
    _add_common(p)
    p.add_argument("--kappa", action="append", help="also persist the superoperator")
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"dulab: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except PostselectionError as exc:
        print(f"dulab: postselection failed: {exc}", file=sys.stderr)
        if exc.histogram:
            print(f"dulab: observed cluster counts: {exc.histogram}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"dulab: numerical failure: {exc}", file=sys.stderr)
        return 3
    except DulabError as exc:  # pragma: no cover - catch-all for new subclasses
        print(f"dulab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
