"""Exact Foldy-Wouthuysen transformations for free particles.

Three closed forms are provided: the massless Dirac operator, its 6x6
photon analogue, and the GFV -> FW operator for arbitrary mass and spin
together with its printed pseudounitary inverse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spin_algebra as sa
from .operator_core import (
    DEFAULT_TOL,
    DimensionError,
    as_matrix,
    kron,
    max_abs,
    pseudo_adjoint,
    pseudo_unitarity_residual,
)
from .representations import (
    EnergyBranch,
    Kind,
    RepresentationError,
    RepSpec,
    as_momentum,
    energy,
    fw_beta,
    hamiltonian,
    physical_projector,
    velocity_operator,
)


class BranchMixError(RepresentationError):
    pass


@dataclass(frozen=True)
class TransformOp:
    """A transformation U from ``source`` to ``target`` at momentum ``p``.

    ``inverse`` holds the closed-form inverse (g U^dag g); ``domain`` is the
    projector on which the contracts hold (identity except for the photon).
    """

    matrix: np.ndarray
    inverse: np.ndarray
    metric: np.ndarray
    source: RepSpec
    target: RepSpec
    p: np.ndarray
    domain: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def pseudo_unitarity_residual(self) -> float:
        """max |d(g U^dag g U - 1)d| over the transform's domain d."""
        u, g, d = self.matrix, self.metric, self.domain
        return max_abs(d @ (g @ u.conj().T @ g @ u - np.eye(self.dim)) @ d)

    def numeric_inverse_residual(self) -> float:
        """Cross-check of the closed-form inverse against U^-1 from LU."""
        d = self.domain
        if np.allclose(d, np.eye(self.dim)):
            return max_abs(np.linalg.inv(self.matrix) - self.inverse)
        return max_abs(d @ (self.inverse @ self.matrix - np.eye(self.dim)) @ d)


def fw_massless_dirac(p) -> TransformOp:
    """U = (|p| + gamma.p) / (sqrt(2) |p|)."""
    rep = RepSpec.dirac(0.0)
    p = as_momentum(p, rep)
    pn = float(np.linalg.norm(p))
    gp = sum(pi * sa.dirac_gamma(i + 1) for i, pi in enumerate(p))
    u = (pn * np.eye(4) + gp) / (math.sqrt(2) * pn)
    return TransformOp(
        matrix=u,
        inverse=u.conj().T,
        metric=np.eye(4, dtype=complex),
        source=rep,
        target=RepSpec.fw(0.0, rep.spin),
        p=p,
        domain=np.eye(4, dtype=complex),
    )


def fw_photon(p) -> TransformOp:
    """U = (|p| + beta alpha.p) / (sqrt(2) |p|), unitary on transversal states."""
    rep = RepSpec.photon()
    p = as_momentum(p, rep)
    pn = float(np.linalg.norm(p))
    ap = sum(pi * sa.photon_alpha(i + 1) for i, pi in enumerate(p))
    u = (pn * np.eye(6) + sa.photon_beta() @ ap) / (math.sqrt(2) * pn)
    return TransformOp(
        matrix=u,
        inverse=u.conj().T,
        metric=np.eye(6, dtype=complex),
        source=rep,
        target=RepSpec.fw(0.0, 1),
        p=p,
        domain=physical_projector(rep, p),
    )


def _gfv_coeffs(m: float, N: float, p) -> tuple[float, float, float]:
    if N is None or N == 0:
        raise RepresentationError("N must be nonzero")
    if N < 0:
        raise RepresentationError("the GFV -> FW operator needs N > 0 to be pseudounitary")
    eps = math.sqrt(m * m + float(p @ p))
    if not eps > 0:
        raise RepresentationError("massless particle at zero momentum is not allowed")
    c = 2 * math.sqrt(eps * N)
    return eps, (eps + N) / c, (eps - N) / c


def gfv_to_fw(m: float, N: float | None, p, s=0) -> TransformOp:
    """U = (eps + N + rho_1 (eps - N)) / (2 sqrt(eps N)), extended by I_(2s+1).

    ``N=None`` selects N = eps, for which U is the identity.
    """
    p = np.asarray(p, dtype=float)
    if N is None:
        N = math.sqrt(m * m + float(p @ p))
    src = RepSpec.gfv(m, s, N)
    p = as_momentum(p, src)
    _, a, b = _gfv_coeffs(m, float(N), p)
    d = src.spin_dim
    one = np.eye(2 * d, dtype=complex)
    rho1 = kron(sa.pauli(1), np.eye(d))
    u = a * one + b * rho1
    # printed inverse U_{FW->GFV}; equals rho_3 U^dag rho_3
    uinv = a * one - b * rho1
    g = kron(sa.pauli(3), np.eye(d))
    return TransformOp(
        matrix=u,
        inverse=uinv,
        metric=g,
        source=src,
        target=RepSpec.fw(m, src.spin),
        p=p,
        domain=np.eye(2 * d, dtype=complex),
    )


def transform_for(rep: RepSpec, p) -> TransformOp:
    """The exact FW transform available for ``rep``."""
    if rep.kind is Kind.GFV:
        return gfv_to_fw(rep.mass, rep.gfv_n(p), p, rep.spin)
    if rep.kind is Kind.FV:
        return gfv_to_fw(rep.mass, rep.mass, p, 0)
    if rep.kind is Kind.PHOTON:
        return fw_photon(p)
    if rep.kind is Kind.DIRAC:
        if rep.mass != 0:
            raise RepresentationError("the closed-form Dirac FW operator here is the massless one (m = 0)")
        return fw_massless_dirac(p)
    raise RepresentationError("already in the FW representation")


def apply_similarity(t: TransformOp, a) -> np.ndarray:
    """U a U^-1 with the closed-form inverse."""
    a = as_matrix(a)
    if a.shape != t.matrix.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {t.matrix.shape}")
    return t.matrix @ a @ t.inverse


def apply_inverse_similarity(t: TransformOp, a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape != t.matrix.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {t.matrix.shape}")
    return t.inverse @ a @ t.matrix


def even_part(a) -> np.ndarray:
    """Block-diagonal part with respect to beta (x) I."""
    a = as_matrix(a)
    h = a.shape[0] // 2
    out = np.zeros_like(a)
    out[:h, :h] = a[:h, :h]
    out[h:, h:] = a[h:, h:]
    return out


def odd_part(a) -> np.ndarray:
    a = as_matrix(a)
    return a - even_part(a)


def transformed_hamiltonian(t: TransformOp) -> np.ndarray:
    d = t.domain
    return apply_similarity(t, hamiltonian(t.source, t.p)) @ d


def fw_hamiltonian_residual(t: TransformOp) -> tuple[float, float]:
    """(off-block residual, deviation from beta eps) of U H U^-1 on the domain."""
    h = transformed_hamiltonian(t)
    eps = energy(t.source, t.p)
    target = t.domain @ fw_beta(t.dim) * eps
    return max_abs(odd_part(h)), max_abs(h - target)


def transformed_velocity(t: TransformOp):
    """Images U v_i U^-1 of the source-representation velocity components."""
    d = t.domain
    return tuple(d @ apply_similarity(t, v) @ d for v in velocity_operator(t.source, t.p))


def fw_wavefunction(rep: RepSpec, p, branch: EnergyBranch, source, tol: float = 1e-10) -> np.ndarray:
    """FW image of a pure-branch state given in ``rep``.

    For GFV/FV sources the printed form is used, factor
    2 sqrt(eps N)/(eps + N) times the upper (H > 0) or lower (H < 0)
    block; the result is cross-checked against U psi. Dirac (massless)
    and photon sources use U psi directly. A state whose image has weight
    in the other block raises :class:`BranchMixError`.
    """
    branch = EnergyBranch(branch)
    t = transform_for(rep, p)
    psi = np.asarray(source, dtype=complex)
    if psi.shape != (t.dim,):
        raise DimensionError(f"state must have {t.dim} components, got shape {psi.shape}")
    image = t.matrix @ psi
    h = t.dim // 2
    keep = slice(0, h) if branch is EnergyBranch.POSITIVE else slice(h, None)
    drop = slice(h, None) if branch is EnergyBranch.POSITIVE else slice(0, h)
    scale = max(1.0, float(np.max(np.abs(psi))))
    if np.max(np.abs(image[drop])) > tol * scale:
        raise BranchMixError(f"state is not a pure {branch.name.lower()}-energy state")
    if rep.kind in (Kind.GFV, Kind.FV):
        eps = energy(rep, t.p)
        N = rep.gfv_n(t.p)
        out = np.zeros_like(psi)
        out[keep] = 2 * math.sqrt(eps * N) / (eps + N) * psi[keep]
        if np.max(np.abs(out - image)) > tol * scale:
            raise BranchMixError("printed FW wave function disagrees with U psi")
        return out
    out = np.zeros_like(psi)
    out[keep] = image[keep]
    return out


def photon_gfv_wavefunction(field, p, N: float, branch: EnergyBranch) -> np.ndarray:
    """U_{FW->GFV} applied to the photon FW states (E, 0) or (0, iB).

    ``field`` is E for the positive branch and B for the negative one; the
    result is the 6-component (phi, chi) GFV spinor.
    """
    branch = EnergyBranch(branch)
    field = np.asarray(field, dtype=complex)
    t = gfv_to_fw(0.0, N, p, 1)
    fw = np.zeros(6, dtype=complex)
    if branch is EnergyBranch.POSITIVE:
        fw[:3] = field
    else:
        fw[3:] = 1j * field
    return t.inverse @ fw


def photon_gfv_coefficients(p, N: float, branch: EnergyBranch) -> tuple[float, float]:
    """Printed (phi, chi) weights: (N+p, N-p)/(2 sqrt(pN)) or (N-p, N+p)/(2 sqrt(pN))."""
    pn = float(np.linalg.norm(np.asarray(p, dtype=float)))
    c = 2 * math.sqrt(pn * N)
    if EnergyBranch(branch) is EnergyBranch.POSITIVE:
        return (N + pn) / c, (N - pn) / c
    return (N - pn) / c, (N + pn) / c


def gfv_pseudo_adjoint_inverse(t: TransformOp) -> np.ndarray:
    """rho_3 U^dag rho_3, which must equal the printed inverse."""
    return pseudo_adjoint(t.matrix, t.metric)


__all__ = [
    "BranchMixError",
    "TransformOp",
    "apply_inverse_similarity",
    "apply_similarity",
    "even_part",
    "fw_hamiltonian_residual",
    "fw_massless_dirac",
    "fw_photon",
    "fw_wavefunction",
    "gfv_pseudo_adjoint_inverse",
    "gfv_to_fw",
    "odd_part",
    "photon_gfv_coefficients",
    "photon_gfv_wavefunction",
    "pseudo_unitarity_residual",
    "transform_for",
    "transformed_hamiltonian",
    "transformed_velocity",
]
