"""Dev-time oracle: pin the free-fermion many-body convention at L=2,3.

Brute force: build c_m, c_m^dag as dense matrices via Jordan-Wigner
(|0> = spin up = empty, |1> = spin down = occupied, c_m^dag = prod_{k<m} sz_k . sm_m),
form  H_full = sum 2h c^dag c + sum (D c^dag c^dag - D* c c).

Matrix-element route (the closed-form construction used by the package, with
the conjugate on the pair-annihilation term): expected to equal
H_full - tr(h) * I.

Sign-sum route: eigenvalues of the 2L x 2L Nambu matrix [[h, D], [-D*, -h*]]
come in +-eps pairs; many-body spectrum should be {sum_k s_k eps_k}.
"""
import itertools
import numpy as np

SZ = np.diag([1.0, -1.0]).astype(complex)
SP = np.array([[0, 1], [0, 0]], dtype=complex)   # annihilates: |1> -> |0>
SM = np.array([[0, 0], [1, 0]], dtype=complex)   # creates:    |0> -> |1>
I2 = np.eye(2, dtype=complex)


def kron_all(ops):
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def annihilator(m, L):  # site m in 1..L -> qubit m-1
    ops = [SZ] * (m - 1) + [SP] + [I2] * (L - m)
    return kron_all(ops)


def brute_quadratic(h, delta, L):
    c = [annihilator(m, L) for m in range(1, L + 1)]
    cd = [op.conj().T for op in c]
    H = np.zeros((2 ** L, 2 ** L), dtype=complex)
    for j in range(L):
        for k in range(L):
            H += 2 * h[j, k] * cd[j] @ c[k]
            H += delta[j, k] * cd[j] @ cd[k]
            H -= np.conj(delta[j, k]) * c[j] @ c[k]
    return H


def matrix_element_route(h, delta, L):
    d = 2 ** L
    H = np.zeros((d, d), dtype=complex)
    # bit m of state index = occupation of site m+1; bit 0 = leftmost tensor factor
    def bit(state, site):  # site in 1..L
        return (state >> (L - site)) & 1
    for s in range(d):
        diag = 0.0
        for k in range(1, L + 1):
            diag += h[k - 1, k - 1].real * (1 if bit(s, k) else -1)
        H[s, s] += diag
        for k in range(1, L + 1):
            for l in range(k + 1, L + 1):
                p = sum(bit(s, m) for m in range(k + 1, l))  # occupied between
                sign = (-1) ** p
                bk, bl = bit(s, k), bit(s, l)
                flip = s ^ (1 << (L - k)) ^ (1 << (L - l))
                if bk == 0 and bl == 1:      # hop l -> k : (+,-) -> (-,+)
                    H[flip, s] += 2 * sign * h[k - 1, l - 1]
                elif bk == 1 and bl == 0:    # reverse hop
                    H[flip, s] += 2 * sign * np.conj(h[k - 1, l - 1])
                elif bk == 0 and bl == 0:    # pair creation: (+,+) -> (-,-)
                    H[flip, s] += 2 * sign * delta[k - 1, l - 1]
                else:                        # pair annihilation: (-,-) -> (+,+)
                    H[flip, s] += 2 * sign * np.conj(delta[k - 1, l - 1])
    return H


def sign_sum_spectrum(h, delta, L):
    nambu = np.block([[h, delta], [-delta.conj(), -h.conj()]])
    w = np.linalg.eigvalsh(nambu)
    eps = np.sort(w)[L:]  # nonnegative half
    out = []
    for signs in itertools.product((1, -1), repeat=L):
        out.append(sum(s * e for s, e in zip(signs, eps)))
    return np.sort(np.array(out))


rng = np.random.default_rng(42)
for L in (2, 3):
    for trial in range(5):
        a = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
        h = (a + a.conj().T) / 2
        b = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
        delta = (b - b.T) / 2
        Hb = brute_quadratic(h, delta, L)
        Hm = matrix_element_route(h, delta, L)
        shift = np.trace(h).real
        print(f"L={L} trial={trial}",
              "| H_me == H_brute - tr(h):", np.linalg.norm(Hm - (Hb - shift * np.eye(2 ** L))) < 1e-10,
              "| hermitian:", np.linalg.norm(Hm - Hm.conj().T) < 1e-10,
              "| sign-sum:", np.allclose(np.sort(np.linalg.eigvalsh(Hm)), sign_sum_spectrum(h, delta, L), atol=1e-8))
