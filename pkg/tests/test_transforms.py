import math
from fractions import Fraction

import numpy as np
import pytest

from zitterkit import spin_algebra as sa
from zitterkit.operator_core import DimensionError, max_abs
from zitterkit.representations import (
    EnergyBranch,
    RepresentationError,
    RepSpec,
    branch_projectors,
    energy,
    fw_beta,
    hamiltonian,
    transversality_projector,
)
from zitterkit.transforms import (
    BranchMixError,
    apply_inverse_similarity,
    apply_similarity,
    even_part,
    fw_hamiltonian_residual,
    fw_massless_dirac,
    fw_photon,
    fw_wavefunction,
    gfv_pseudo_adjoint_inverse,
    gfv_to_fw,
    odd_part,
    photon_gfv_coefficients,
    photon_gfv_wavefunction,
    transform_for,
    transformed_velocity,
)

from conftest import random_momentum


def test_identity_at_n_equal_eps():
    t = gfv_to_fw(1.0, None, [0.6, 0.0, 0.8], Fraction(1, 2))
    assert max_abs(t.matrix - np.eye(4)) < 1e-15


def test_reference_value_n4():
    # m = 0, |p| = 1, N = 4: (eps+N)/(2 sqrt(eps N)) = 5/4, (eps-N)/(...) = -3/4
    t = gfv_to_fw(0.0, 4.0, [0, 0, 1.0], 0)
    expected = np.array([[5, -3], [-3, 5]]) / 4
    assert max_abs(t.matrix - expected) < 1e-15
    assert max_abs(t.inverse - np.array([[5, 3], [3, 5]]) / 4) < 1e-15


def test_printed_inverse_is_pseudo_adjoint(rng):
    for s in (0, Fraction(1, 2), 1):
        t = gfv_to_fw(0.7, 2.3, random_momentum(rng), s)
        assert max_abs(gfv_pseudo_adjoint_inverse(t) - t.inverse) < 1e-15
        assert t.numeric_inverse_residual() < 1e-14


@pytest.mark.parametrize("N", [0.3, 1.0, 10.0])
@pytest.mark.parametrize("s", [0, Fraction(1, 2), 1, Fraction(3, 2)])
def test_gfv_block_diagonalizes(rng, N, s):
    for m in (0.0, 1.0):
        t = gfv_to_fw(m, N, random_momentum(rng), s)
        off, dev = fw_hamiltonian_residual(t)
        assert off < 1e-10 and dev < 1e-10
        assert t.pseudo_unitarity_residual() < 1e-12


def test_gfv_needs_positive_n():
    with pytest.raises(RepresentationError):
        gfv_to_fw(0.0, -1.0, [0, 0, 1.0])
    with pytest.raises(RepresentationError):
        gfv_to_fw(0.0, 0.0, [0, 0, 1.0])


def test_massless_dirac_transform(rng):
    p = random_momentum(rng)
    t = fw_massless_dirac(p)
    assert t.pseudo_unitarity_residual() < 1e-14
    off, dev = fw_hamiltonian_residual(t)
    assert off < 1e-13 and dev < 1e-13


def test_photon_transform_transversal_only(rng):
    p = random_momentum(rng)
    t = fw_photon(p)
    assert t.pseudo_unitarity_residual() < 1e-14
    u = t.matrix
    # not unitary on the full six-dimensional space
    assert max_abs(u.conj().T @ u - np.eye(6)) > 0.1
    off, dev = fw_hamiltonian_residual(t)
    assert off < 1e-13 and dev < 1e-13


def test_transform_for_dispatch():
    p = [0.3, 0.4, 1.2]
    assert transform_for(RepSpec.fv(1.0), p).source.N == 1.0
    with pytest.raises(RepresentationError):
        transform_for(RepSpec.dirac(1.0), p)
    with pytest.raises(RepresentationError):
        transform_for(RepSpec.fw(1.0), p)


def test_similarity_round_trip(rng):
    t = gfv_to_fw(0.5, 3.0, random_momentum(rng), 1)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert max_abs(apply_inverse_similarity(t, apply_similarity(t, a)) - a) < 1e-13
    with pytest.raises(DimensionError):
        apply_similarity(t, np.eye(2))


def test_even_odd_split():
    a = np.arange(16, dtype=complex).reshape(4, 4)
    assert np.array_equal(even_part(a) + odd_part(a), a)
    assert np.all(even_part(a)[:2, 2:] == 0)


@pytest.mark.parametrize("N", [0.3, 1.0, 10.0])
def test_velocity_image_independent_of_n(rng, N):
    p = random_momentum(rng)
    eps = math.sqrt(1 + p @ p)
    ref = transformed_velocity(gfv_to_fw(1.0, None, p, 1))
    img = transformed_velocity(gfv_to_fw(1.0, N, p, 1))
    nil = np.kron(sa.pauli(3) + 1j * sa.pauli(2), np.eye(3))
    for i in range(3):
        assert max_abs(img[i] - ref[i]) < 1e-12
        assert max_abs(img[i] - nil * p[i] / eps) < 1e-12
        assert max_abs(even_part(img[i]) - fw_beta(6) * p[i] / eps) < 1e-12


def test_fw_wavefunction_printed_factor(rng):
    p = random_momentum(rng)
    rep = RepSpec.gfv(0.5, Fraction(1, 2), 2.0)
    plus, minus = branch_projectors(rep, p)
    xi = np.array([1.0, 0.3j, -0.2, 0.5])
    for branch, proj in ((EnergyBranch.POSITIVE, plus), (EnergyBranch.NEGATIVE, minus)):
        psi = proj @ xi
        out = fw_wavefunction(rep, p, branch, psi)
        eps, N = energy(rep, p), 2.0
        keep = slice(0, 2) if branch is EnergyBranch.POSITIVE else slice(2, 4)
        assert max_abs(out[keep] - 2 * math.sqrt(eps * N) / (eps + N) * psi[keep]) < 1e-14
    with pytest.raises(BranchMixError):
        fw_wavefunction(rep, p, EnergyBranch.POSITIVE, xi)


def test_photon_gfv_coefficients():
    p = np.array([0.0, 0.0, 2.0])
    N = 0.5
    cp, cm = photon_gfv_coefficients(p, N, EnergyBranch.POSITIVE)
    assert cp == pytest.approx(2.5 / 2.0, abs=1e-15)
    assert cm == pytest.approx(-1.5 / 2.0, abs=1e-15)
    field = transversality_projector(p) @ np.array([1.0, 0.5j, 0.0])
    for branch in EnergyBranch:
        psi = photon_gfv_wavefunction(field, p, N, branch)
        c_phi, c_chi = photon_gfv_coefficients(p, N, branch)
        f = field if branch is EnergyBranch.POSITIVE else 1j * field
        assert max_abs(psi - np.concatenate([c_phi * f, c_chi * f])) < 1e-12
        # it is an eigenvector of the spin-1 GFV Hamiltonian with energy +-|p|
        h = hamiltonian(RepSpec.gfv(0.0, 1, N), p)
        assert max_abs(h @ psi - int(branch) * 2.0 * psi) < 1e-12
