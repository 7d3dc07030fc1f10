"""The five figure kinds, as pure functions of already-parsed tables.

Every function returns (figure, info) where info summarizes what was
drawn — measured values, overlay positions, point counts — so callers
and tests can assert on figure content without decoding pixels.

Analytic overlays are taken verbatim from the harness's metadata JSON;
nothing here rederives a prediction.
"""

from __future__ import annotations

import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm, Normalize  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402
from pathlib import Path  # noqa: E402

from .readers import FidelityTable, SchemaError, SpectrumTable, VelocityTable  # noqa: E402

# identical styling + pinned toolkit => identical bytes on rerun
plt.rcParams["svg.hashsalt"] = "figkit"

DEFAULT_DPI = 150


def save_figure(fig, out: str | Path, dpi: int = DEFAULT_DPI) -> list[str]:
    """Write the figure as both PNG and SVG next to the requested path."""
    out = Path(out)
    stem = out.with_suffix("")
    written = []
    for suffix in (".png", ".svg"):
        target = stem.with_suffix(suffix)
        fig.savefig(target, dpi=dpi, metadata={"Date": None} if suffix == ".svg" else None)
        written.append(str(target))
    plt.close(fig)
    return written


def _shared_kappa(tables: list[SpectrumTable]) -> float:
    kappas = {round(t.single_kappa, 15) for t in tables if t.values.size}
    if len(kappas) > 1:
        raise SchemaError(
            f"density inputs span {len(kappas)} kappa values; pass files from one kappa"
        )
    return kappas.pop() if kappas else float("nan")


def _lookup_radii(meta: dict | None, kappa: float):
    if meta is None or not np.isfinite(kappa):
        return None
    for entry in meta.get("predicted_radii", []):
        if abs(entry["kappa"] - kappa) < 1e-12:
            return float(entry["r_minus_pred"]), float(entry["r_plus_pred"])
    return None


def plot_density(
    tables: list[SpectrumTable],
    meta: dict | None = None,
    bins: int = 200,
    log: bool = True,
):
    """Eigenvalue density over the complex unit square, with dashed
    circles at the predicted annulus radii when metadata is present."""
    if not tables:
        raise SchemaError("density needs at least one spectrum file")
    kappa = _shared_kappa(tables)
    values = np.concatenate([t.nontrivial for t in tables]) if tables else np.empty(0)
    re = np.clip(values.real, -1.0, 1.0)
    im = np.clip(values.imag, -1.0, 1.0)
    counts, _, _ = np.histogram2d(re, im, bins=bins, range=[[-1, 1], [-1, 1]])

    fig, ax = plt.subplots(figsize=(5, 5))
    cmap = plt.get_cmap("magma").copy()
    cmap.set_under("white")
    if log:
        norm = LogNorm(vmin=1.0, vmax=max(counts.max(), 1.0))
    else:
        norm = Normalize(vmin=1.0, vmax=max(counts.max(), 1.0))
    image = ax.imshow(
        counts.T,
        origin="lower",
        extent=(-1, 1, -1, 1),
        cmap=cmap,
        norm=norm,
        interpolation="nearest",
    )
    fig.colorbar(image, ax=ax, shrink=0.8, label="eigenvalue count")
    overlay = _lookup_radii(meta, kappa)
    if overlay is not None:
        for radius in overlay:
            if radius > 0:
                ax.add_patch(
                    Circle((0, 0), radius, fill=False, ls="--", lw=1.2, color="white")
                )
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    title = "eigenvalue density"
    if np.isfinite(kappa):
        title += f" (kappa={kappa:g})"
    ax.set_title(title)
    info = {
        "n_values": int(values.size),
        "kappa": kappa,
        "r_minus": overlay[0] if overlay else None,
        "r_plus": overlay[1] if overlay else None,
        "circles_drawn": sum(1 for r in (overlay or ()) if r > 0),
        "log_scale": log,
    }
    return fig, info


def plot_velocity(
    model: VelocityTable,
    baseline: VelocityTable,
    meta: dict | None = None,
    log: bool = False,
):
    """Model vs baseline velocity curves with the threshold estimate
    (dashed vertical) and the detected transition (marker) from JSON."""
    if model.kappa.size != baseline.kappa.size or np.any(model.kappa != baseline.kappa):
        raise SchemaError(
            f"velocity curves disagree on the kappa grid "
            f"({model.path} vs {baseline.path})"
        )
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(model.kappa, model.mean_velocity, "o-", label=model.label)
    ax.plot(baseline.kappa, baseline.mean_velocity, "s-", label=baseline.label)
    if log:
        ax.set_yscale("log")

    kappa_cr = detected = None
    warned = False
    if meta is None:
        warnings.warn("no metadata JSON given; drawing curves without threshold overlays")
        warned = True
    else:
        kappa_cr = meta.get("predicted_kappa_cr")
        if kappa_cr is not None:
            ax.axvline(kappa_cr, ls="--", color="gray", label="predicted threshold")
        detected = meta.get("detected_kappa")
        if detected is not None:
            idx = int(np.argmin(np.abs(model.kappa - detected)))
            ax.plot(
                [detected],
                [model.mean_velocity[idx]],
                marker="*",
                ms=14,
                color="crimson",
                ls="none",
                label="detected transition",
            )
    ax.set_xlabel("kappa")
    ax.set_ylabel("mean |d theta / d kappa|")
    ax.legend()
    info = {
        "kappa_cr": kappa_cr,
        "detected": detected,
        "warned": warned,
        "n_points": int(model.kappa.size),
    }
    return fig, info


def _greedy_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pair values of a with distinct values of b, closest pairs first."""
    n = a.size
    dist = np.abs(a[:, None] - b[None, :])
    order = np.argsort(dist.reshape(-1), kind="stable")
    row_used = np.zeros(n, dtype=bool)
    col_used = np.zeros(n, dtype=bool)
    pairs = np.full(n, -1, dtype=np.int64)
    remaining = n
    for flat in order:
        i, j = divmod(int(flat), n)
        if row_used[i] or col_used[j]:
            continue
        row_used[i] = True
        col_used[j] = True
        pairs[i] = j
        remaining -= 1
        if remaining == 0:
            break
    return pairs


def plot_trajectories(tables: list[SpectrumTable]):
    """Eigenvalue paths as dissipation grows, colored by kappa.

    Files must come from one (unitary, Kraus) pair: equal seed and equal
    eigenvalue count per file.  Neighboring-kappa spectra are linked by
    closest-pair matching.  The figure margin reports mean |d theta| vs
    mean |d s| (angular vs radial motion) over all segments.
    """
    if len(tables) < 2:
        raise SchemaError("trajectories need spectra at >= 2 kappa values")
    tables = sorted(tables, key=lambda t: t.single_kappa)
    sizes = {t.values.size for t in tables}
    if len(sizes) != 1:
        raise SchemaError(
            f"trajectory inputs hold different eigenvalue counts: {sorted(sizes)}"
        )
    seeds = {int(np.unique(t.seed)[0]) for t in tables if t.seed.size}
    if len(seeds) > 1:
        raise SchemaError(f"trajectory inputs mix seeds {sorted(seeds)}")

    chains = [t.nontrivial for t in tables]
    n = chains[0].size
    if any(c.size != n for c in chains):
        raise SchemaError("trajectory inputs disagree on the trivial-eigenvalue count")

    kappas = np.array([t.single_kappa for t in tables])
    positions = np.empty((len(chains), n), dtype=complex)
    positions[0] = chains[0]
    for step in range(1, len(chains)):
        pairs = _greedy_pairs(positions[step - 1], chains[step])
        positions[step] = chains[step][pairs]

    a = positions[:-1]
    b = positions[1:]
    dtheta = np.abs(np.angle(b * np.conj(a)))
    ds = np.abs(np.abs(b) - np.abs(a))
    mean_dtheta = float(dtheta.mean())
    mean_ds = float(ds.mean())

    fig, ax = plt.subplots(figsize=(5.5, 5))
    cmap = plt.get_cmap("viridis")
    norm = Normalize(vmin=kappas.min(), vmax=kappas.max())
    for step in range(len(chains) - 1):
        color = cmap(norm((kappas[step] + kappas[step + 1]) / 2.0))
        segs_x = np.stack([positions[step].real, positions[step + 1].real])
        segs_y = np.stack([positions[step].imag, positions[step + 1].imag])
        ax.plot(segs_x, segs_y, color=color, lw=0.7, alpha=0.8)
    fig.colorbar(plt.cm.ScalarMappable(norm=norm, cmap=cmap), ax=ax, label="kappa")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("eigenvalue trajectories")
    fig.text(
        0.01,
        0.01,
        f"mean |d theta| = {mean_dtheta:.4f}   mean |d s| = {mean_ds:.4f}",
        fontsize=8,
    )
    info = {
        "n_trajectories": int(n),
        "n_kappas": len(tables),
        "mean_dtheta": mean_dtheta,
        "mean_ds": mean_ds,
        "final_mean_modulus": float(np.abs(positions[-1]).mean()),
    }
    return fig, info


def plot_radii(tables: list[SpectrumTable], meta: dict | None = None):
    """Measured annulus radii per kappa (points) against the predicted
    curves from metadata (lines)."""
    if not tables:
        raise SchemaError("radii need at least one spectrum file")
    by_kappa: dict[float, list[SpectrumTable]] = {}
    for t in tables:
        if t.values.size == 0:
            continue
        by_kappa.setdefault(round(t.single_kappa, 15), []).append(t)
    if not by_kappa:
        raise SchemaError("radii inputs hold no eigenvalues")
    kappas = np.array(sorted(by_kappa))
    minus = np.empty(kappas.size)
    plus = np.empty(kappas.size)
    for i, k in enumerate(kappas):
        moduli = [np.abs(t.nontrivial) for t in by_kappa[k]]
        minus[i] = float(np.mean([m.min() for m in moduli]))
        plus[i] = float(np.mean([m.max() for m in moduli]))

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(kappas, plus, "o", label="measured R+")
    ax.plot(kappas, minus, "s", label="measured R-")
    pred_points = 0
    warned = False
    if meta is None:
        warnings.warn("no metadata JSON given; plotting measured radii only")
        warned = True
    else:
        pred = sorted(meta.get("predicted_radii", []), key=lambda e: e["kappa"])
        if pred:
            pk = [e["kappa"] for e in pred]
            ax.plot(pk, [e["r_plus_pred"] for e in pred], "--", label="predicted R+")
            ax.plot(pk, [e["r_minus_pred"] for e in pred], ":", label="predicted R-")
            pred_points = len(pred)
    ax.set_xlabel("kappa")
    ax.set_ylabel("radius")
    ax.set_ylim(bottom=0)
    ax.legend()
    info = {
        "kappas": [float(k) for k in kappas],
        "measured_r_minus": [float(v) for v in minus],
        "measured_r_plus": [float(v) for v in plus],
        "pred_points": pred_points,
        "warned": warned,
    }
    return fig, info


def plot_fidelity(tables: list[FidelityTable], meta: dict | None = None):
    """Monte Carlo fidelity curves with error bars, dashed closed-form
    overlays from metadata."""
    if not tables:
        raise SchemaError("fidelity needs at least one curve file")
    fig, ax = plt.subplots(figsize=(6, 4))
    overlays = 0
    warned = False
    analytic = {}
    if meta is None:
        warnings.warn("no metadata JSON given; drawing Monte Carlo curves only")
        warned = True
    else:
        for entry in meta.get("analytic_curves", []):
            analytic[round(float(entry["kappa"]), 15)] = entry["analytic"]
    for table in tables:
        kappa = table.single_kappa
        ax.errorbar(
            table.t,
            table.mean_fidelity,
            yerr=table.stderr,
            fmt="o",
            ms=3,
            capsize=2,
            label=f"kappa={kappa:g}",
        )
        curve = analytic.get(round(kappa, 15))
        if curve is not None:
            ax.plot(range(1, len(curve) + 1), curve, "--", color="black", lw=1)
            overlays += 1
    ax.set_xlabel("layer")
    ax.set_ylabel("fidelity")
    ax.set_ylim(0, 1.05)
    ax.legend()
    info = {"n_curves": len(tables), "n_overlays": overlays, "warned": warned}
    return fig, info
