"""Acceptance gate: one test per headline guarantee, each printing a
[PASS]/[FAIL] line with its measured margin and runtime.

These run the package at desk scale (L <= 5).  A single optional L=6
smoke test is gated behind DULAB_ACCEPT_LARGE=1.
"""

from __future__ import annotations

import itertools
import json
import os
import time
from pathlib import Path

import numpy as np
import pytest

from dulab.channels import (
    DilutedMapSpec,
    build_superoperator,
    choi_matrix,
    sample_kraus,
)
from dulab.cli import main
from dulab.ensembles import (
    PAULI_X,
    PAULI_Z,
    build_qft,
    build_spin_chain_floquet,
    embed_one_site,
    many_body_hamiltonian,
    nambu_matrix,
    parity_operator,
    r_matrix,
    sample_cue,
    sample_free_fermion,
    sample_unitary,
    SpinChainParams,
)
from dulab.fidelity import analytic_fidelity, simulate_fidelity
from dulab.numkit import unvec, vec
from dulab.rng import Stream, derive_seed
from dulab.spectra import (
    cluster_shape_factor,
    compute_spectrum,
    detect_transition,
    kappa_cr,
    kappa_rd,
    predicted_radii,
    velocity_curve,
)


def report(tag: str, ok: bool, detail: str) -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
    assert ok, f"{tag}: {detail}"


# ---------------------------------------------------------------------------
# 1. Kraus completeness
# ---------------------------------------------------------------------------

def test_a01_kraus_completeness():
    t0 = time.perf_counter()
    worst = 0.0
    cells = 0
    for d in (4, 16, 64):
        for r in (1, 5, 20):
            if r > d * d - 1:
                # the rank bound excludes this corner of the grid; the
                # sampler must refuse it rather than emit a bad set
                from dulab.errors import ValidationError

                with pytest.raises(ValidationError):
                    sample_kraus(d, r, Stream(0))
                continue
            cells += 1
            for s in range(100):
                k = sample_kraus(d, r, Stream(derive_seed(1, 10_000 * d + 100 * r + s)))
                total = sum(op.conj().T @ op for op in k.ops)
                worst = max(worst, float(np.linalg.norm(total - np.eye(d))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-10 and cells == 8 and dt < 10.0
    report(
        "completeness",
        ok,
        f"max residual {worst:.2e} (< 1e-10) over {100 * cells} draws, {dt:.1f}s (< 10s)",
    )


# ---------------------------------------------------------------------------
# 2. CPTP contract
# ---------------------------------------------------------------------------

def test_a02_cptp_contract():
    t0 = time.perf_counter()
    rng = Stream(2)
    worst_fixed = worst_choi = worst_apply = 0.0
    for i in range(50):
        L = 1 + int(rng.integers(4))
        d = 2 ** L
        r = 1 + int(rng.integers(min(8, d * d - 1)))
        kappa = float(rng.uniform())
        root = rng.spawn(i)
        u = sample_cue(L, root.spawn(0))
        k = sample_kraus(d, r, root.spawn(1))
        spec = DilutedMapSpec(unitary=u, kraus=k, kappa=kappa)
        phi = build_superoperator(spec)
        ivec = vec(np.eye(d, dtype=complex))
        worst_fixed = max(worst_fixed, float(np.abs(ivec.conj() @ phi - ivec.conj()).max()))
        worst_choi = min(worst_choi, float(np.linalg.eigvalsh(choi_matrix(phi)).min()))
        a = root.spawn(2).complex_normal((d, d))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        from dulab.channels import apply_channel

        direct = apply_channel(rho, spec)
        via_phi = unvec(phi @ vec(rho), d)
        worst_apply = max(worst_apply, float(np.abs(direct - via_phi).max()))
    dt = time.perf_counter() - t0
    ok = worst_fixed < 1e-10 and worst_choi >= -1e-8 and worst_apply < 1e-10 and dt < 30.0
    report(
        "cptp",
        ok,
        f"fixed-point {worst_fixed:.2e} (< 1e-10), choi min {worst_choi:.2e} (>= -1e-8), "
        f"apply-vs-superop {worst_apply:.2e} (< 1e-10), {dt:.1f}s (< 30s)",
    )


# ---------------------------------------------------------------------------
# 3. annulus radii at desk scale
# ---------------------------------------------------------------------------

def test_a03_annulus_radii():
    t0 = time.perf_counter()
    L, n_seeds = 5, 5
    worst = 0.0
    worst_at = None
    for r in (2, 5, 20):
        pairs = []
        for s in range(n_seeds):
            root = Stream(derive_seed(13, 100 * r + s))
            u = sample_cue(L, root.spawn(0))
            k = sample_kraus(u.d, r, root.spawn(1))
            pairs.append((u, k))
        for kappa in np.linspace(0.05, kappa_rd(r), 10):
            minus_m = plus_m = 0.0
            for u, k in pairs:
                s = compute_spectrum(DilutedMapSpec(unitary=u, kraus=k, kappa=float(kappa)))
                moduli = np.abs(s.nontrivial)
                minus_m += moduli.min() / n_seeds
                plus_m += moduli.max() / n_seeds
            minus_p, plus_p = predicted_radii(r, float(kappa))
            for dev, tag in ((abs(minus_m - minus_p), "R-"), (abs(plus_m - plus_p), "R+")):
                if dev > worst:
                    worst, worst_at = dev, (r, float(kappa), tag)
    dt = time.perf_counter() - t0
    ok = worst < 0.05 and dt < 900.0
    report(
        "radii",
        ok,
        f"max |measured - predicted| {worst:.4f} (< 0.05) at (r, kappa, side)={worst_at}, "
        f"{dt:.0f}s (< 900s)",
    )


# ---------------------------------------------------------------------------
# 4. ring-to-disk transition bracket
# ---------------------------------------------------------------------------

def test_a04_ring_disk_bracket():
    t0 = time.perf_counter()
    L, r, n_seeds = 5, 5, 3

    def mean_inner(kappa):
        acc = 0.0
        for s in range(n_seeds):
            root = Stream(derive_seed(4, s))
            u = sample_cue(L, root.spawn(0))
            k = sample_kraus(u.d, r, root.spawn(1))
            spec = compute_spectrum(DilutedMapSpec(unitary=u, kraus=k, kappa=kappa))
            acc += float(np.abs(spec.nontrivial).min())
        return acc / n_seeds

    above = mean_inner(0.74)
    below = mean_inner(0.64)
    dt = time.perf_counter() - t0
    ok = above < 0.03 and below > 0.08 and dt < 600.0
    report(
        "ring-disk",
        ok,
        f"inner radius {above:.4f} at kappa=0.74 (< 0.03), {below:.4f} at kappa=0.64 "
        f"(> 0.08), bracketing {kappa_rd(r):.4f}; {dt:.0f}s (< 600s)",
    )


# ---------------------------------------------------------------------------
# 5. threshold-formula consistency
# ---------------------------------------------------------------------------

def test_a05_threshold_consistency():
    t0 = time.perf_counter()
    bitwise = all(kappa_cr(4, r) == kappa_rd(r) for r in range(1, 65))
    curves_down = all(
        kappa_cr(n + 1, r) < kappa_cr(n, r)
        for r in (1, 5, 20)
        for n in range(4, 200)
    )
    asymptote = abs(cluster_shape_factor(1024) / np.sqrt(1024 / 8) - 1.0)
    dt = time.perf_counter() - t0
    ok = bitwise and curves_down and asymptote < 1e-3 and dt < 1.0
    report(
        "thresholds",
        ok,
        f"four-cluster threshold bitwise-equal to ring-disk for r<=64: {bitwise}; "
        f"strictly decreasing in n>=4: {curves_down}; large-n asymptote off by "
        f"{asymptote:.2e} (< 1e-3); {dt:.2f}s (< 1s)",
    )


# ---------------------------------------------------------------------------
# 6. angular-velocity separation
# ---------------------------------------------------------------------------

def test_a06_velocity_separation():
    t0 = time.perf_counter()
    L, r, n_seeds = 4, 5, 20
    grid = np.linspace(0.05, 0.95, 19)
    seeds = [derive_seed(1, i) for i in range(n_seeds)]
    model = velocity_curve("qft", L, r, grid, seeds)
    base = velocity_curve("cue", L, r, grid, seeds)
    # strict ordering of the means at the smallest kappa
    strict = model.mean_velocity[0] > base.mean_velocity[0]
    # per-seed ordering at the smallest kappa
    wins = 0
    for s in seeds:
        m1 = velocity_curve("qft", L, r, [0.05], [s]).mean_velocity[0]
        b1 = velocity_curve("cue", L, r, [0.05], [s]).mean_velocity[0]
        wins += int(m1 > b1)
    frac = wins / n_seeds
    # relative gap deep in the dissipative phase
    i9 = int(np.argmin(np.abs(grid - 0.9)))
    gap = abs(model.mean_velocity[i9] - base.mean_velocity[i9]) / base.mean_velocity[i9]
    detected = detect_transition(model, base, epsilon=0.2)
    target = kappa_cr(4, r)
    near = detected is not None and abs(detected - target) <= 0.1
    dt = time.perf_counter() - t0
    ok = strict and frac >= 0.9 and gap < 0.2 and near and dt < 1200.0
    report(
        "velocity-separation",
        ok,
        f"means ordered at kappa=0.05: {strict}; per-seed ordering {wins}/{n_seeds} "
        f"(>= 90%); relative gap {gap:.3f} at kappa=0.9 (< 0.2); detected transition "
        f"{detected} within 0.1 of {target:.4f}: {near}; {dt:.0f}s (< 1200s)",
    )


# ---------------------------------------------------------------------------
# 7. fidelity universality
# ---------------------------------------------------------------------------

def test_a07_fidelity_universality():
    t0 = time.perf_counter()
    L, T, n = 4, 30, 500
    d = 2 ** L
    runs = {}
    for idx, (tag, r, kappa) in enumerate(
        [(e, 5, k) for e in ("cue", "qft") for k in (0.05, 0.15)]
        + [("cue", 20, k) for k in (0.05, 0.15)]
    ):
        runs[(tag, r, kappa)] = simulate_fidelity(
            tag, L, r, kappa, T, n, Stream(derive_seed(7, idx))
        )
    worst_dev = 0.0
    for kappa in (0.05, 0.15):
        want = np.array([analytic_fidelity(d, kappa, t) for t in range(1, T + 1)])
        for tag in ("cue", "qft"):
            run = runs[(tag, 5, kappa)]
            worst_dev = max(worst_dev, float(np.abs(run.mean_fidelity - want).max()))
    ensembles_agree = True
    for kappa in (0.05, 0.15):
        a, b = runs[("cue", 5, kappa)], runs[("qft", 5, kappa)]
        band = 3.0 * np.sqrt(a.stderr**2 + b.stderr**2) + 1e-12
        ensembles_agree &= bool(np.all(np.abs(a.mean_fidelity - b.mean_fidelity) < band))
    ranks_agree = True
    for kappa in (0.05, 0.15):
        a, b = runs[("cue", 5, kappa)], runs[("cue", 20, kappa)]
        band = 3.0 * np.sqrt(a.stderr**2 + b.stderr**2) + 1e-12
        ranks_agree &= bool(np.all(np.abs(a.mean_fidelity - b.mean_fidelity) < band))
    dt = time.perf_counter() - t0
    ok = worst_dev < 0.02 and ensembles_agree and ranks_agree and dt < 600.0
    report(
        "fidelity-universality",
        ok,
        f"max deviation from closed form {worst_dev:.4f} (< 0.02); ensembles agree "
        f"within 3 SE: {ensembles_agree}; r=20 vs r=5 within 3 SE: {ranks_agree}; "
        f"{dt:.0f}s (< 600s)",
    )


# ---------------------------------------------------------------------------
# 8. free-fermion spectrum oracle
# ---------------------------------------------------------------------------

def test_a08_free_fermion_oracle():
    t0 = time.perf_counter()
    L = 3
    worst = 0.0
    for s in range(20):
        u = sample_free_fermion(L, Stream(derive_seed(8, s)))
        H = many_body_hamiltonian(u.params)
        got = np.sort(np.linalg.eigvalsh(H))
        eps = np.sort(np.linalg.eigvalsh(nambu_matrix(u.params)))[L:]
        want = np.sort(
            [
                sum(sign * e for sign, e in zip(signs, eps))
                for signs in itertools.product((1, -1), repeat=L)
            ]
        )
        worst = max(worst, float(np.abs(got - want).max()))
    dt = time.perf_counter() - t0
    ok = worst < 1e-8 and dt < 60.0
    report(
        "free-fermion-oracle",
        ok,
        f"max |many-body - sign-sum| {worst:.2e} (< 1e-8) over 20 seeds; {dt:.1f}s (< 60s)",
    )


# ---------------------------------------------------------------------------
# 9. ensemble invariants
# ---------------------------------------------------------------------------

def test_a09_ensemble_invariants():
    from test_ensembles import is_pauli_string_with_phase
    from dulab.ensembles import clifford_gate_matrix, clifford_gate_universe

    t0 = time.perf_counter()
    clifford_ok = True
    for L in (1, 2, 3):
        for gate in clifford_gate_universe(L):
            g = clifford_gate_matrix(gate, L)
            for q in range(L):
                for p1 in (PAULI_X, PAULI_Z):
                    p = embed_one_site(p1, q, L)
                    clifford_ok &= is_pauli_string_with_phase(g @ p @ g.conj().T, L)
    rng = np.random.default_rng(9)
    comp_worst = 0.0
    for _ in range(100):
        t1, t2 = rng.uniform(0.01, 0.7, size=2)
        lhs = r_matrix(np.tan(t1)) @ r_matrix(np.tan(t2))
        comp_worst = max(comp_worst, float(np.abs(lhs - r_matrix(np.tan(t1 + t2))).max()))
    qft_worst = 0.0
    targets = np.array([1.0, -1.0, 1j, -1j])
    for L in range(1, 6):
        u = build_qft(L).matrix
        qft_worst = max(
            qft_worst,
            float(np.linalg.norm(np.linalg.matrix_power(u, 4) - np.eye(2 ** L))),
        )
        vals = np.linalg.eigvals(u)
        qft_worst = max(
            qft_worst, float(np.abs(vals[:, None] - targets[None, :]).min(axis=1).max())
        )
    parity_worst = 0.0
    for s in range(5):
        u = sample_free_fermion(2, Stream(derive_seed(9, s)))
        pi = parity_operator(2)
        parity_worst = max(parity_worst, float(np.abs(u.matrix @ pi - pi @ u.matrix).max()))
    dt = time.perf_counter() - t0
    ok = (
        clifford_ok
        and comp_worst < 1e-12
        and qft_worst < 1e-10
        and parity_worst < 1e-10
        and dt < 60.0
    )
    report(
        "ensemble-invariants",
        ok,
        f"Clifford closure: {clifford_ok}; composition residual {comp_worst:.2e} "
        f"(< 1e-12); Fourier residual {qft_worst:.2e} (< 1e-10); parity residual "
        f"{parity_worst:.2e} (< 1e-10); {dt:.1f}s (< 60s)",
    )


# ---------------------------------------------------------------------------
# 10. byte-level determinism across parallelism
# ---------------------------------------------------------------------------

def test_a10_determinism(tmp_path):
    t0 = time.perf_counter()

    def run_all(out: Path, jobs: str):
        j = ["--jobs", jobs]
        assert main([
            "spectrum", "--ensemble", "qft", "--L", "2", "--r", "3",
            "--kappa", "0.2", "--kappa", "0.5", "--seeds", "11:3",
            "--out", str(out / "spectrum"), *j,
        ]) == 0
        assert main([
            "velocity", "--ensemble", "qft", "--baseline", "cue", "--L", "2",
            "--r", "3", "--kappa-grid", "0.3:0.6:3", "--seeds", "11:2",
            "--out", str(out / "velocity"), *j,
        ]) == 0
        assert main([
            "fidelity", "--ensemble", "cue", "--L", "2", "--r", "2",
            "--kappa", "0.3", "--layers", "5", "--realizations", "6",
            "--seeds", "11", "--out", str(out / "fidelity"), *j,
        ]) == 0

    def collect(out: Path):
        return {
            str(p.relative_to(out)): p.read_bytes()
            for p in sorted(out.rglob("*.csv"))
        }

    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    run_all(serial, "1")
    run_all(parallel, "8")
    a, b = collect(serial), collect(parallel)
    same = a == b and len(a) > 0
    dt = time.perf_counter() - t0
    ok = same and len(a) == 6 + 2 + 1
    report(
        "determinism",
        ok,
        f"{len(a)} CSVs byte-identical at 1 vs 8 workers: {same}; {dt:.1f}s",
    )


# ---------------------------------------------------------------------------
# optional large-scale smoke test
# ---------------------------------------------------------------------------

@pytest.mark.skipif(
    not os.environ.get("DULAB_ACCEPT_LARGE"),
    reason="set DULAB_ACCEPT_LARGE=1 to run the L=6 smoke test (~minutes)",
)
def test_a11_large_scale_smoke(tmp_path):
    t0 = time.perf_counter()
    rc = main([
        "spectrum", "--ensemble", "cue", "--L", "6", "--r", "5",
        "--kappa", "0.3", "--seeds", "1:1", "--allow-large",
        "--out", str(tmp_path),
    ])
    lines = (tmp_path / "spectrum_k00_s00.csv").read_text().strip().split("\n")
    dt = time.perf_counter() - t0
    ok = rc == 0 and len(lines) == 1 + 4096 and dt < 1800.0
    report("large-scale-smoke", ok, f"4096 eigenvalues at L=6 in {dt:.0f}s (< 1800s)")
