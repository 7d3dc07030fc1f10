"""Strict readers for the sweep harness's CSV and JSON outputs.

Each reader checks the header against the documented schema and reports
the first offending column by name, with a line number for value-level
failures.  Empty tables (header only) are legal everywhere.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """An input file does not match the documented schema."""


SPECTRUM_COLUMNS = ("seed", "ensemble", "L", "r", "kappa", "re", "im", "is_trivial")
VELOCITY_COLUMNS = (
    "ensemble",
    "L",
    "r",
    "kappa",
    "mean_velocity",
    "n_discarded",
    "n_seeds",
)
FIDELITY_COLUMNS = (
    "ensemble",
    "L",
    "r",
    "kappa",
    "t",
    "mean_fidelity",
    "stderr",
    "n_realizations",
)


def _read_rows(path: str | Path, columns: tuple[str, ...]) -> list[dict[str, str]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected a header row")
        if tuple(header) != columns:
            for i, want in enumerate(columns):
                got = header[i] if i < len(header) else "<missing>"
                if got != want:
                    raise SchemaError(
                        f"{path}: header column {i + 1} is {got!r}, expected {want!r}"
                    )
            raise SchemaError(
                f"{path}: header has {len(header)} columns, expected {len(columns)}"
            )
        rows = []
        for lineno, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != len(columns):
                raise SchemaError(
                    f"{path}: line {lineno} has {len(fields)} fields, "
                    f"expected {len(columns)}"
                )
            rows.append(dict(zip(columns, fields)))
        return rows


def _floats(path, rows, column) -> np.ndarray:
    out = np.empty(len(rows))
    for i, row in enumerate(rows):
        try:
            out[i] = float(row[column])
        except ValueError:
            raise SchemaError(
                f"{path}: column {column!r} holds non-numeric value "
                f"{row[column]!r} at data row {i + 1}"
            )
    return out


def _ints(path, rows, column, dtype=np.int64) -> np.ndarray:
    out = np.empty(len(rows), dtype=dtype)
    for i, row in enumerate(rows):
        try:
            out[i] = int(row[column])
        except (ValueError, OverflowError):
            raise SchemaError(
                f"{path}: column {column!r} holds non-integer value "
                f"{row[column]!r} at data row {i + 1}"
            )
    return out


@dataclass(frozen=True)
class SpectrumTable:
    """Rows of one spectrum CSV: one eigenvalue per row."""

    path: str
    seed: np.ndarray
    ensemble: tuple[str, ...]
    L: np.ndarray
    r: np.ndarray
    kappa: np.ndarray
    values: np.ndarray
    is_trivial: np.ndarray

    @property
    def nontrivial(self) -> np.ndarray:
        return self.values[self.is_trivial == 0]

    @property
    def single_kappa(self) -> float:
        uniq = np.unique(self.kappa)
        if uniq.size > 1:
            raise SchemaError(f"{self.path}: expected one kappa per file, found {uniq.size}")
        return float(uniq[0]) if uniq.size else float("nan")


def read_spectrum_csv(path: str | Path) -> SpectrumTable:
    rows = _read_rows(path, SPECTRUM_COLUMNS)
    return SpectrumTable(
        path=str(path),
        seed=_ints(path, rows, "seed", dtype=np.uint64),
        ensemble=tuple(row["ensemble"] for row in rows),
        L=_ints(path, rows, "L"),
        r=_ints(path, rows, "r"),
        kappa=_floats(path, rows, "kappa"),
        values=_floats(path, rows, "re") + 1j * _floats(path, rows, "im"),
        is_trivial=_ints(path, rows, "is_trivial"),
    )


@dataclass(frozen=True)
class VelocityTable:
    """One velocity curve: seed-averaged mean velocity per kappa."""

    path: str
    ensemble: tuple[str, ...]
    L: np.ndarray
    r: np.ndarray
    kappa: np.ndarray
    mean_velocity: np.ndarray
    n_discarded: np.ndarray
    n_seeds: np.ndarray

    @property
    def label(self) -> str:
        return self.ensemble[0] if self.ensemble else "velocity"


def read_velocity_csv(path: str | Path) -> VelocityTable:
    rows = _read_rows(path, VELOCITY_COLUMNS)
    return VelocityTable(
        path=str(path),
        ensemble=tuple(row["ensemble"] for row in rows),
        L=_ints(path, rows, "L"),
        r=_ints(path, rows, "r"),
        kappa=_floats(path, rows, "kappa"),
        mean_velocity=_floats(path, rows, "mean_velocity"),
        n_discarded=_ints(path, rows, "n_discarded"),
        n_seeds=_ints(path, rows, "n_seeds"),
    )


@dataclass(frozen=True)
class FidelityTable:
    """One fidelity curve: layer index, Monte Carlo mean, standard error."""

    path: str
    ensemble: tuple[str, ...]
    L: np.ndarray
    r: np.ndarray
    kappa: np.ndarray
    t: np.ndarray
    mean_fidelity: np.ndarray
    stderr: np.ndarray
    n_realizations: np.ndarray

    @property
    def single_kappa(self) -> float:
        uniq = np.unique(self.kappa)
        if uniq.size > 1:
            raise SchemaError(f"{self.path}: expected one kappa per file, found {uniq.size}")
        return float(uniq[0]) if uniq.size else float("nan")


def read_fidelity_csv(path: str | Path) -> FidelityTable:
    rows = _read_rows(path, FIDELITY_COLUMNS)
    return FidelityTable(
        path=str(path),
        ensemble=tuple(row["ensemble"] for row in rows),
        L=_ints(path, rows, "L"),
        r=_ints(path, rows, "r"),
        kappa=_floats(path, rows, "kappa"),
        t=_ints(path, rows, "t"),
        mean_fidelity=_floats(path, rows, "mean_fidelity"),
        stderr=_floats(path, rows, "stderr"),
        n_realizations=_ints(path, rows, "n_realizations"),
    )


def read_meta_json(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"metadata file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return doc
