"""Linear-algebra helpers: contracts, failure modes, file round trips."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from dulab.errors import BranchAmbiguityError, DegenerateInputError, ValidationError
from dulab.numkit import (
    SIZE_CAP,
    check_matrix,
    eig_general,
    expm_hermitian_i,
    kron,
    load_cmat,
    logm_special_orthogonal,
    qr_phase_fixed,
    save_cmat,
    unvec,
    vec,
)


def haar_like(rng, d):
    return qr_phase_fixed(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


class TestCheckMatrix:
    def test_rejects_non_2d(self):
        with pytest.raises(ValidationError):
            check_matrix(np.zeros(3))

    def test_rejects_non_square_when_required(self):
        with pytest.raises(ValidationError):
            check_matrix(np.zeros((2, 3)))
        check_matrix(np.zeros((2, 3)), square=False)

    def test_rejects_nan_and_inf(self):
        for bad in (np.nan, np.inf):
            m = np.eye(2)
            m[0, 0] = bad
            with pytest.raises(ValidationError):
                check_matrix(m)
        m = np.eye(2, dtype=complex)
        m[0, 1] = 1j * np.inf
        with pytest.raises(ValidationError):
            check_matrix(m)

    def test_rejects_oversize(self):
        class FakeShape:
            pass

        with pytest.raises(ValidationError):
            # building a real oversized array would waste memory; a thin
            # strided view is enough to trip the shape check
            big = np.broadcast_to(np.zeros(1), (SIZE_CAP + 1, SIZE_CAP + 1))
            check_matrix(big)


def test_kron_caps_result_size():
    a = np.zeros((100, 100))
    b = np.zeros((100, 100))
    with pytest.raises(ValidationError):
        kron(a, b)
    out = kron(np.eye(2), np.eye(3))
    assert out.shape == (6, 6)


class TestQrPhaseFixed:
    def test_unitary_output(self):
        rng = np.random.default_rng(0)
        u = haar_like(rng, 16)
        assert np.linalg.norm(u.conj().T @ u - np.eye(16)) < 1e-12

    def test_deterministic(self):
        g = np.random.default_rng(1).standard_normal((8, 8))
        np.testing.assert_array_equal(qr_phase_fixed(g), qr_phase_fixed(g))

    def test_phase_fix_makes_r_diagonal_positive(self):
        rng = np.random.default_rng(2)
        g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        u = qr_phase_fixed(g)
        # with Q's phases absorbed, R' = U^dag G has a positive real diagonal
        r = u.conj().T @ g
        assert np.all(np.diagonal(r).real > 0)
        assert np.abs(np.diagonal(r).imag).max() < 1e-12

    def test_rank_deficient_raises(self):
        with pytest.raises(DegenerateInputError):
            qr_phase_fixed(np.zeros((4, 4)))

    def test_tall_input_gives_isometry(self):
        rng = np.random.default_rng(3)
        g = rng.standard_normal((12, 4)) + 1j * rng.standard_normal((12, 4))
        q = qr_phase_fixed(g)
        assert q.shape == (12, 4)
        assert np.linalg.norm(q.conj().T @ q - np.eye(4)) < 1e-12


class TestEigGeneral:
    def test_known_nilpotent(self):
        dec = eig_general(np.array([[0.0, 1.0], [0.0, 0.0]]))
        np.testing.assert_allclose(np.sort(np.abs(dec.values)), [0.0, 0.0], atol=1e-12)

    def test_vectors_satisfy_definition(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        dec = eig_general(a, want_vectors=True)
        res = a @ dec.vectors - dec.vectors * dec.values
        assert np.abs(res).max() < 1e-10


class TestExpmHermitianI:
    def test_matches_scipy(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        h = (a + a.conj().T) / 2
        want = scipy.linalg.expm(-1j * h)
        np.testing.assert_allclose(expm_hermitian_i(h), want, atol=1e-11)

    def test_output_unitary(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
        h = (a + a.conj().T) / 2
        u = expm_hermitian_i(h)
        assert np.linalg.norm(u.conj().T @ u - np.eye(10)) < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            expm_hermitian_i(np.array([[0.0, 1.0], [0.0, 0.0]]))


def random_special_orthogonal(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    a = a - a.T
    return scipy.linalg.expm(a), a


class TestLogmSpecialOrthogonal:
    def test_round_trip(self):
        rng = np.random.default_rng(7)
        o, a = random_special_orthogonal(rng, 6, scale=0.3)
        h = logm_special_orthogonal(o)
        # h = i*a when o's eigenphases stay inside the principal branch
        np.testing.assert_allclose(h, 1j * a, atol=1e-9)
        assert np.linalg.norm(h - h.conj().T) < 1e-12

    def test_exponential_inverse(self):
        rng = np.random.default_rng(8)
        o, _ = random_special_orthogonal(rng, 8, scale=0.5)
        h = logm_special_orthogonal(o)
        np.testing.assert_allclose(expm_hermitian_i(h), o, atol=1e-9)

    def test_branch_cut_rejected(self):
        # rotation by pi has eigenvalue -1 exactly on the cut
        o = np.array([[-1.0, 0.0], [0.0, -1.0]])
        with pytest.raises((BranchAmbiguityError, ValidationError)):
            logm_special_orthogonal(o)
        theta = np.pi - 1e-10
        rot = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        with pytest.raises(BranchAmbiguityError):
            logm_special_orthogonal(rot)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValidationError):
            logm_special_orthogonal(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_negative_determinant(self):
        o = np.diag([1.0, -1.0])
        with pytest.raises(ValidationError):
            logm_special_orthogonal(o)


class TestVec:
    def test_round_trip(self):
        rng = np.random.default_rng(9)
        rho = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        np.testing.assert_array_equal(unvec(vec(rho), 5), rho)

    def test_kron_action_identity(self):
        # the defining identity of the vectorization convention:
        # (A kron B*) vec(rho) = vec(A rho B^dag)
        rng = np.random.default_rng(10)
        d = 4
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        left = np.kron(a, b.conj()) @ vec(rho)
        right = vec(a @ rho @ b.conj().T)
        np.testing.assert_allclose(left, right, atol=1e-12)

    def test_unvec_size_check(self):
        with pytest.raises(ValidationError):
            unvec(np.zeros(5), 2)


class TestCmatFiles:
    def test_bit_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
        a[0, 0] = 1.0 / 3.0 + 1j * 1e-300
        a[1, 1] = -0.1 + 0.7j
        a[2, 2] = 0.0
        path = tmp_path / "m.cmat"
        save_cmat(path, a)
        back = load_cmat(path)
        np.testing.assert_array_equal(back, a.astype(complex))
        assert back.dtype == np.complex128

    def test_header_format(self, tmp_path):
        path = tmp_path / "m.cmat"
        save_cmat(path, np.eye(2))
        first = path.read_text().splitlines()[0]
        assert first == "cmat 1 2 2"

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.cmat"
        path.write_text("nope 1 2 2\n0 0\n0 0\n0 0\n0 0\n")
        with pytest.raises(ValidationError):
            load_cmat(path)

    def test_rejects_truncated_body(self, tmp_path):
        path = tmp_path / "short.cmat"
        path.write_text("cmat 1 2 2\n0 0\n0 0\n")
        with pytest.raises(ValidationError):
            load_cmat(path)
