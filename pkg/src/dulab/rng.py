"""Deterministic random streams on a splitmix64 core.

Every stochastic routine in the package draws from a :class:`Stream` so
that a run is fully pinned by a single 64-bit master seed.  Child seeds
for parallel jobs come from :func:`derive_seed`, which is a pure function
of (master seed, job index) — the schedule of workers can never change
the numbers a job sees.
"""

from __future__ import annotations

import numpy as np

from ._accel import GOLDEN, MASK64, MIX1, MIX2, normals, u64_block_numpy


def splitmix64_next(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (output, new_state)."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = (z ^ (z >> 30)) * MIX1 & MASK64
    z = (z ^ (z >> 27)) * MIX2 & MASK64
    return (z ^ (z >> 31)) & MASK64, state


def derive_seed(master: int, index: int) -> int:
    """Child seed for job `index`: one splitmix64 output from a salted state.

    The salt is (index + 1) * GOLDEN so that index 0 does not collapse to
    the master stream itself.
    """
    salted = (master ^ ((index + 1) * GOLDEN & MASK64)) & MASK64
    out, _ = splitmix64_next(salted)
    return out


class Stream:
    """Stateful deterministic generator; all draws advance a splitmix64 state."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self._state = self.seed

    def __repr__(self) -> str:
        return f"Stream(seed=0x{self.seed:016x})"

    def u64(self, n: int | None = None):
        """Raw 64-bit outputs: a python int when n is None, else a uint64 array."""
        if n is None:
            out, self._state = splitmix64_next(self._state)
            return out
        out, self._state = u64_block_numpy(self._state, int(n))
        return out

    def uniform(self, n: int | None = None):
        """Uniform doubles in [0, 1) with 53-bit resolution."""
        if n is None:
            return (self.u64() >> 11) * 2.0 ** -53
        raw = self.u64(n)
        return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def standard_normal(self, n: int | None = None):
        """Standard normals via Box-Muller over stream uniforms."""
        count = 1 if n is None else int(n)
        out, self._state = normals(self._state, count)
        if n is None:
            return float(out[0])
        return out

    def complex_normal(self, shape) -> np.ndarray:
        """Standard complex normals, E|z|^2 = 1: (x + iy) / sqrt(2)."""
        if np.isscalar(shape):
            shape = (int(shape),)
        count = int(np.prod(shape)) if len(shape) else 1
        flat = self.standard_normal(2 * count)
        z = (flat[0::2] + 1j * flat[1::2]) / np.sqrt(2.0)
        return z.reshape(shape)

    def integers(self, upper: int, n: int | None = None):
        """Uniform ints in [0, upper) by the high-multiply (Lemire) reduction."""
        if upper <= 0:
            raise ValueError(f"upper must be positive, got {upper}")
        if n is None:
            return (self.u64() * upper) >> 64
        raw = self.u64(n)
        out = np.empty(len(raw), dtype=np.int64)
        for i, r in enumerate(raw):
            out[i] = (int(r) * upper) >> 64
        return out

    def spawn(self, index: int) -> "Stream":
        """Independent child stream; pure function of (self.seed, index)."""
        return Stream(derive_seed(self.seed, index))
