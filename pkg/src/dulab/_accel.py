"""Hot numeric kernels: numba-compiled by default, pure numpy on request.

Set ``DULAB_NO_NUMBA=1`` to force the numpy fallback path (also used
automatically when numba fails to import).  Both paths implement the same
splitmix64 integer stream bit-for-bit; transcendental steps (Box-Muller)
may differ between paths at the last ulp, which is why determinism is
promised per build, not across builds.

``benchmarks/bench_kernels.py`` compares the two paths head to head.
"""

from __future__ import annotations

import math
import os

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_INV53 = 2.0 ** -53

_env = os.environ.get("DULAB_NO_NUMBA", "").strip().lower()
FORCE_NUMPY = _env in ("1", "true", "yes", "on")

if not FORCE_NUMPY:
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USING_NUMBA = False
else:
    USING_NUMBA = False


# ---------------------------------------------------------------------------
# splitmix64 stream -> standard normals (Box-Muller), numpy path
# ---------------------------------------------------------------------------

def _mix_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def u64_block_numpy(state: int, n: int) -> tuple[np.ndarray, int]:
    """n splitmix64 outputs starting from `state`; returns (outputs, new_state)."""
    with np.errstate(over="ignore"):
        idx = np.arange(1, n + 1, dtype=np.uint64)
        s = np.uint64(state) + idx * np.uint64(GOLDEN)
        out = _mix_np(s)
    return out, (state + n * GOLDEN) & MASK64


def normals_numpy(state: int, n: int) -> tuple[np.ndarray, int]:
    """n standard normals from the splitmix64 stream via Box-Muller."""
    pairs = (n + 1) // 2
    raw, new_state = u64_block_numpy(state, 2 * pairs)
    u1 = ((raw[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV53
    u2 = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _INV53
    r = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(ang)
    out[1::2] = r * np.sin(ang)
    return out[:n], new_state


# ---------------------------------------------------------------------------
# greedy global closest-pair matching, numpy path
# ---------------------------------------------------------------------------

def greedy_scan_numpy(order: np.ndarray, n: int) -> np.ndarray:
    """Walk flat distance ranks; pair (row, col) when both still free.

    `order` is argsort of the flattened n x n distance matrix (stable sort,
    so ties resolve to the lower flat index).  Returns pairs[k] = column
    matched to row k.
    """
    row_used = np.zeros(n, dtype=np.bool_)
    col_used = np.zeros(n, dtype=np.bool_)
    pairs = np.full(n, -1, dtype=np.int64)
    remaining = n
    for flat in order:
        i = flat // n
        j = flat - i * n
        if row_used[i] or col_used[j]:
            continue
        row_used[i] = True
        col_used[j] = True
        pairs[i] = j
        remaining -= 1
        if remaining == 0:
            break
    return pairs


# ---------------------------------------------------------------------------
# free-fermion many-body matrix elements, numpy path
# ---------------------------------------------------------------------------

def quadratic_many_body_numpy(h: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Dense 2^L x 2^L matrix of the quadratic fermion Hamiltonian.

    Basis: bit (L - k) of the state index holds the occupation of site k
    (k = 1..L), i.e. site 1 is the leftmost tensor factor.  Jordan-Wigner
    string signs count occupied sites strictly between the two endpoints.
    The trace-of-h constant is dropped, so the spectrum is exactly the
    sign-sum of the single-particle energies.
    """
    L = h.shape[0]
    dim = 1 << L
    out = np.zeros((dim, dim), dtype=np.complex128)
    for s in range(dim):
        diag = 0.0
        for k in range(1, L + 1):
            occ = (s >> (L - k)) & 1
            diag += h[k - 1, k - 1].real * (1.0 if occ else -1.0)
        out[s, s] += diag
        for k in range(1, L + 1):
            bk = (s >> (L - k)) & 1
            for l in range(k + 1, L + 1):
                bl = (s >> (L - l)) & 1
                p = 0
                for m in range(k + 1, l):
                    p += (s >> (L - m)) & 1
                sign = -1.0 if (p & 1) else 1.0
                t = s ^ (1 << (L - k)) ^ (1 << (L - l))
                if bk == 0 and bl == 1:
                    out[t, s] += 2.0 * sign * h[k - 1, l - 1]
                elif bk == 1 and bl == 0:
                    out[t, s] += 2.0 * sign * np.conj(h[k - 1, l - 1])
                elif bk == 0 and bl == 0:
                    out[t, s] += 2.0 * sign * delta[k - 1, l - 1]
                else:
                    out[t, s] += 2.0 * sign * np.conj(delta[k - 1, l - 1])
    return out


# ---------------------------------------------------------------------------
# numba-compiled versions
# ---------------------------------------------------------------------------

if USING_NUMBA:

    @njit(cache=True)
    def _normals_nb(state, n):  # pragma: no cover - exercised via wrapper
        pairs = (n + 1) // 2
        out = np.empty(2 * pairs)
        s = np.uint64(state)
        g = np.uint64(GOLDEN)
        for p in range(pairs):
            s = s + g
            z = s
            z = z ^ (z >> np.uint64(30))
            z = z * np.uint64(MIX1)
            z = z ^ (z >> np.uint64(27))
            z = z * np.uint64(MIX2)
            z = z ^ (z >> np.uint64(31))
            u1 = (np.float64(z >> np.uint64(11)) + 1.0) * _INV53
            s = s + g
            z = s
            z = z ^ (z >> np.uint64(30))
            z = z * np.uint64(MIX1)
            z = z ^ (z >> np.uint64(27))
            z = z * np.uint64(MIX2)
            z = z ^ (z >> np.uint64(31))
            u2 = np.float64(z >> np.uint64(11)) * _INV53
            r = math.sqrt(-2.0 * math.log(u1))
            ang = 2.0 * math.pi * u2
            out[2 * p] = r * math.cos(ang)
            out[2 * p + 1] = r * math.sin(ang)
        return out, s

    def normals_numba(state: int, n: int) -> tuple[np.ndarray, int]:
        out, s = _normals_nb(np.uint64(state), n)
        return out[:n], int(s)

    @njit(cache=True)
    def greedy_scan_numba(order, n):  # pragma: no cover - exercised via alias
        row_used = np.zeros(n, dtype=np.bool_)
        col_used = np.zeros(n, dtype=np.bool_)
        pairs = np.full(n, -1, dtype=np.int64)
        remaining = n
        for idx in range(order.shape[0]):
            flat = order[idx]
            i = flat // n
            j = flat - i * n
            if row_used[i] or col_used[j]:
                continue
            row_used[i] = True
            col_used[j] = True
            pairs[i] = j
            remaining -= 1
            if remaining == 0:
                break
        return pairs

    @njit(cache=True)
    def quadratic_many_body_numba(h, delta):  # pragma: no cover - via alias
        L = h.shape[0]
        dim = 1 << L
        out = np.zeros((dim, dim), dtype=np.complex128)
        for s in range(dim):
            diag = 0.0
            for k in range(1, L + 1):
                occ = (s >> (L - k)) & 1
                diag += h[k - 1, k - 1].real * (1.0 if occ else -1.0)
            out[s, s] += diag
            for k in range(1, L + 1):
                bk = (s >> (L - k)) & 1
                for l in range(k + 1, L + 1):
                    bl = (s >> (L - l)) & 1
                    p = 0
                    for m in range(k + 1, l):
                        p += (s >> (L - m)) & 1
                    sign = -1.0 if (p & 1) else 1.0
                    t = s ^ (1 << (L - k)) ^ (1 << (L - l))
                    if bk == 0 and bl == 1:
                        out[t, s] += 2.0 * sign * h[k - 1, l - 1]
                    elif bk == 1 and bl == 0:
                        out[t, s] += 2.0 * sign * np.conj(h[k - 1, l - 1])
                    elif bk == 0 and bl == 0:
                        out[t, s] += 2.0 * sign * delta[k - 1, l - 1]
                    else:
                        out[t, s] += 2.0 * sign * np.conj(delta[k - 1, l - 1])
        return out

    normals = normals_numba
    greedy_scan = greedy_scan_numba
    quadratic_many_body = quadratic_many_body_numba
else:
    normals = normals_numpy
    greedy_scan = greedy_scan_numpy
    quadratic_many_body = quadratic_many_body_numpy
