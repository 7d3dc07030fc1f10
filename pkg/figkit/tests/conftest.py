"""Hand-written fixture files matching the documented CSV schemas."""

from __future__ import annotations

import json

import numpy as np
import pytest

SPECTRUM_HEADER = "seed,ensemble,L,r,kappa,re,im,is_trivial"
VELOCITY_HEADER = "ensemble,L,r,kappa,mean_velocity,n_discarded,n_seeds"
FIDELITY_HEADER = "ensemble,L,r,kappa,t,mean_fidelity,stderr,n_realizations"


def spectrum_csv(path, kappa, values, trivial_index=0, seed=7, ensemble="cue", L=1, r=2):
    lines = [SPECTRUM_HEADER]
    for i, v in enumerate(values):
        lines.append(
            f"{seed},{ensemble},{L},{r},{kappa:.17g},{v.real:.17g},{v.imag:.17g},"
            f"{1 if i == trivial_index else 0}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def velocity_csv(path, kappas, velocities, ensemble="qft", L=2, r=3, n_seeds=4):
    lines = [VELOCITY_HEADER]
    for k, v in zip(kappas, velocities):
        lines.append(f"{ensemble},{L},{r},{k:.17g},{v:.17g},2,{n_seeds}")
    path.write_text("\n".join(lines) + "\n")
    return path


def fidelity_csv(path, kappa, means, stderrs=None, ensemble="cue", L=2, r=3, n=50):
    stderrs = [0.01] * len(means) if stderrs is None else stderrs
    lines = [FIDELITY_HEADER]
    for t, (m, s) in enumerate(zip(means, stderrs), start=1):
        lines.append(f"{ensemble},{L},{r},{kappa:.17g},{t},{m:.17g},{s:.17g},{n}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def ring_spectrum(tmp_path):
    """A kappa=0 style spectrum: the trivial 1 plus unimodular values."""
    phases = np.linspace(0.3, 5.9, 15)
    values = np.concatenate([[1.0 + 0j], np.exp(1j * phases)])
    return spectrum_csv(tmp_path / "ring.csv", 0.0, values)


@pytest.fixture
def annulus_meta(tmp_path):
    meta = {
        "command": "spectrum",
        "predicted_radii": [
            {"kappa": 0.0, "r_minus_pred": 1.0, "r_plus_pred": 1.0},
            {"kappa": 0.3, "r_minus_pred": 0.687, "r_plus_pred": 0.7127},
        ],
        "kappa_rd": 0.691,
    }
    path = tmp_path / "spectrum_meta.json"
    path.write_text(json.dumps(meta))
    return path
