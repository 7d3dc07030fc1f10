"""figkit: turns dulab CSV/JSON outputs into static figures.

This package draws; it does not compute.  Every analytic overlay
(predicted radii, threshold lines, closed-form fidelity curves) is read
from the metadata JSON the sweep harness wrote next to its CSVs, so a
figure can never disagree with the run that produced its data.
"""

from .readers import (
    FidelityTable,
    SchemaError,
    SpectrumTable,
    VelocityTable,
    read_fidelity_csv,
    read_meta_json,
    read_spectrum_csv,
    read_velocity_csv,
)
from .plots import (
    plot_density,
    plot_fidelity,
    plot_radii,
    plot_trajectories,
    plot_velocity,
    save_figure,
)

__version__ = "0.1.0"

__all__ = [
    "FidelityTable",
    "SchemaError",
    "SpectrumTable",
    "VelocityTable",
    "read_fidelity_csv",
    "read_meta_json",
    "read_spectrum_csv",
    "read_velocity_csv",
    "plot_density",
    "plot_fidelity",
    "plot_radii",
    "plot_trajectories",
    "plot_velocity",
    "save_figure",
    "__version__",
]
