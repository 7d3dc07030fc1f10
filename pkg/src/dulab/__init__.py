"""dulab: a numerical lab for diluted-unitary quantum maps.

Builds channels of the form
Phi = (1 - kappa) U . U^dag + kappa sum_j K_j . K_j^dag
for several unitary ensembles, and studies their complex spectra,
dissipation thresholds, eigenvalue velocities, and fidelity decay.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .channels import DilutedMapSpec, KrausSet, apply_channel, build_superoperator, sample_kraus
from .ensembles import (
    CliffordParams,
    FreeFermionSpec,
    SpinChainParams,
    UnitarySample,
    build_qft,
    build_spin_chain_floquet,
    sample_clifford,
    sample_cue,
    sample_free_fermion,
    sample_spin_chain,
    sample_unitary,
)
from .errors import (
    BranchAmbiguityError,
    DegenerateInputError,
    DulabError,
    NumericalError,
    PostselectionError,
    ValidationError,
)
from .fidelity import FidelityRun, analytic_fidelity, simulate_fidelity
from .rng import Stream, derive_seed
from .spectra import (
    AngularVelocity,
    ClusterReport,
    RadiiEstimate,
    Spectrum,
    VelocityCurve,
    angular_velocity,
    compute_spectrum,
    count_clusters,
    density_grid,
    detect_transition,
    kappa_cr,
    kappa_rd,
    match_eigenvalues,
    predicted_radii,
    radii,
    velocity_curve,
)
