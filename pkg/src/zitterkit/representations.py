"""Free-particle Hamiltonians, velocities and metrics at fixed momentum.

All operators are evaluated at a momentum eigenvalue ``p`` (a real
3-vector, hbar = c = 1), where they reduce to small dense matrices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import spin_algebra as sa
from .operator_core import (
    DEFAULT_TOL,
    NumericalError,
    ZitterError,
    commutator,
    eig_decompose,
    kron,
    max_abs,
)


class RepresentationError(ZitterError, ValueError):
    pass


class Kind(str, enum.Enum):
    DIRAC = "dirac"
    FV = "fv"
    GFV = "gfv"
    PHOTON = "photon"
    FW = "fw"


class EnergyBranch(enum.IntEnum):
    POSITIVE = 1
    NEGATIVE = -1


_ALIASES = {
    "dirac": Kind.DIRAC,
    "fv": Kind.FV,
    "feshbachvillars": Kind.FV,
    "feshbach-villars": Kind.FV,
    "gfv": Kind.GFV,
    "generalizedfv": Kind.GFV,
    "photon": Kind.PHOTON,
    "diraclikephoton": Kind.PHOTON,
    "fw": Kind.FW,
    "foldywouthuysen": Kind.FW,
    "foldy-wouthuysen": Kind.FW,
}


def parse_kind(name) -> Kind:
    if isinstance(name, Kind):
        return name
    key = str(name).strip().lower().replace("_", "")
    try:
        return _ALIASES[key]
    except KeyError:
        raise RepresentationError(
            f"unknown representation {name!r}; choose one of dirac, fv, gfv, photon, fw"
        ) from None


@dataclass(frozen=True)
class RepSpec:
    """A representation instance.

    ``N`` only matters for GFV; ``None`` there means the diagonalizing
    choice N = sqrt(m^2 + p^2), evaluated at each momentum.
    """

    kind: Kind
    mass: float = 0.0
    spin: Fraction = Fraction(1, 2)
    N: float | None = None

    def __post_init__(self):
        kind = parse_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        spin = sa.SpinRep(self.spin).s
        mass = float(self.mass)
        if not math.isfinite(mass) or mass < 0:
            raise RepresentationError(f"mass must be finite and >= 0, got {self.mass}")
        if kind is Kind.DIRAC and spin != Fraction(1, 2):
            raise RepresentationError("the Dirac representation has spin 1/2")
        if kind is Kind.FV:
            if spin != 0:
                raise RepresentationError("the FV representation has spin 0")
            if mass <= 0:
                raise RepresentationError("FV requires m > 0 (use gfv for massless particles)")
        if kind is Kind.PHOTON:
            if mass != 0 or spin != 1:
                raise RepresentationError("the Dirac-like photon representation has m = 0, s = 1")
        if self.N is not None:
            n = float(self.N)
            if kind is Kind.GFV and (n == 0 or not math.isfinite(n)):
                raise RepresentationError("N must be nonzero (and finite)")
            object.__setattr__(self, "N", n)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "spin", spin)

    @classmethod
    def dirac(cls, mass=0.0):
        return cls(Kind.DIRAC, mass, Fraction(1, 2))

    @classmethod
    def fv(cls, mass=1.0):
        return cls(Kind.FV, mass, Fraction(0))

    @classmethod
    def gfv(cls, mass=0.0, spin=0, N=None):
        return cls(Kind.GFV, mass, spin, N)

    @classmethod
    def photon(cls):
        return cls(Kind.PHOTON, 0.0, Fraction(1))

    @classmethod
    def fw(cls, mass=0.0, spin=Fraction(1, 2)):
        return cls(Kind.FW, mass, spin)

    @property
    def spin_dim(self) -> int:
        return int(2 * self.spin + 1)

    @property
    def dim(self) -> int:
        if self.kind is Kind.DIRAC:
            return 4
        if self.kind is Kind.FV:
            return 2
        if self.kind is Kind.PHOTON:
            return 6
        return 2 * self.spin_dim

    @property
    def has_metric(self) -> bool:
        return self.kind in (Kind.FV, Kind.GFV)

    def gfv_n(self, p) -> float:
        """Resolved GFV parameter at momentum ``p``."""
        if self.kind is Kind.FV:
            return self.mass
        if self.N is None:
            return energy(self, p)
        return self.N

    def with_N(self, N):
        return replace(self, N=N)


def as_momentum(p, rep: RepSpec | None = None) -> np.ndarray:
    """Validate a momentum eigenvalue; massless reps reject p = 0."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise RepresentationError(f"momentum must be a 3-vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise RepresentationError("momentum must be finite")
    if rep is not None and rep.mass == 0 and not np.any(p):
        raise RepresentationError("massless particle at zero momentum is not allowed")
    return p


def energy(rep: RepSpec, p) -> float:
    """epsilon = sqrt(m^2 + p^2)."""
    p = np.asarray(p, dtype=float)
    return float(np.sqrt(rep.mass**2 + p @ p))


def branch_energy(rep: RepSpec, p, branch: EnergyBranch) -> float:
    return int(EnergyBranch(branch)) * energy(rep, p)


def _rho(i: int, spin_dim: int) -> np.ndarray:
    return kron(sa.pauli(i), np.eye(spin_dim))


def _fv_nilpotent(spin_dim: int) -> np.ndarray:
    # rho_3 + i rho_2, squares to zero
    return _rho(3, spin_dim) + 1j * _rho(2, spin_dim)


def fw_beta(dim: int) -> np.ndarray:
    half = dim // 2
    return np.diag([1.0] * half + [-1.0] * half).astype(complex)


def hamiltonian(rep: RepSpec, p) -> np.ndarray:
    p = as_momentum(p, rep)
    p2 = float(p @ p)
    m = rep.mass
    k = rep.kind
    if k is Kind.DIRAC:
        return m * sa.dirac_beta() + sum(pi * sa.dirac_alpha(i + 1) for i, pi in enumerate(p))
    if k is Kind.FV:
        return m * sa.pauli(3) + _fv_nilpotent(1) * p2 / (2 * m)
    if k is Kind.GFV:
        n = rep.gfv_n(p)
        d = rep.spin_dim
        e2 = p2 + m * m
        return _rho(3, d) * (e2 + n * n) / (2 * n) + 1j * _rho(2, d) * (e2 - n * n) / (2 * n)
    if k is Kind.PHOTON:
        return sum(pi * sa.photon_alpha(i + 1) for i, pi in enumerate(p))
    return fw_beta(rep.dim) * energy(rep, p)


def velocity_operator(rep: RepSpec, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Velocity components dH/dp_i in the printed closed forms.

    For GFV with the default N = epsilon(p) the parameter is held fixed
    at its value at ``p``; the velocity is the one of that fixed-N
    representation.
    """
    p = as_momentum(p, rep)
    k = rep.kind
    if k is Kind.DIRAC:
        return tuple(sa.dirac_alpha(i) for i in (1, 2, 3))
    if k is Kind.FV:
        kmat = _fv_nilpotent(1)
        return tuple(kmat * pi / rep.mass for pi in p)
    if k is Kind.GFV:
        kmat = _fv_nilpotent(rep.spin_dim)
        n = rep.gfv_n(p)
        return tuple(kmat * pi / n for pi in p)
    if k is Kind.PHOTON:
        return tuple(sa.photon_alpha(i) for i in (1, 2, 3))
    beta = fw_beta(rep.dim)
    eps = energy(rep, p)
    return tuple(beta * (pi / eps) for pi in p)


def metric(rep: RepSpec) -> np.ndarray:
    if rep.has_metric:
        return _rho(3, rep.spin_dim)
    return np.eye(rep.dim, dtype=complex)


def transversality_projector(p, blocks: int = 1) -> np.ndarray:
    """I - p_hat p_hat^T on each 3-block (``blocks=2`` gives the 6x6 variant)."""
    p = np.asarray(p, dtype=float)
    norm = np.linalg.norm(p)
    if not norm > 0:
        raise RepresentationError("transversality projector needs nonzero momentum")
    n = p / norm
    proj = np.eye(3) - np.outer(n, n)
    return np.kron(np.eye(blocks), proj).astype(complex)


def physical_projector(rep: RepSpec, p) -> np.ndarray:
    """Projector onto the physical subspace (transversal for the photon)."""
    if rep.kind is Kind.PHOTON:
        return transversality_projector(p, blocks=2)
    return np.eye(rep.dim, dtype=complex)


def acceleration_operator(rep: RepSpec, p, tol: float = 1e-12):
    """Acceleration components i[H, v_i].

    The identity i[H, v_i] = 2i(p_i - v_i H) is checked on the physical
    subspace; a violation raises :class:`NumericalError`.
    """
    p = as_momentum(p, rep)
    h = hamiltonian(rep, p)
    vs = velocity_operator(rep, p)
    proj = physical_projector(rep, p)
    eye = np.eye(rep.dim)
    out = []
    for pi, v in zip(p, vs):
        acc = 1j * commutator(h, v)
        expected = 2j * (pi * eye - v @ h)
        scale = max(1.0, max_abs(h))
        if max_abs(proj @ (acc - expected) @ proj) > tol * scale:
            raise NumericalError("acceleration identity 2i(p - vH) violated")
        out.append(acc)
    return tuple(out)


def physical_spectrum(rep: RepSpec, p) -> np.ndarray:
    """Eigenvalues of H on the physical subspace, descending."""
    p = as_momentum(p, rep)
    h = hamiltonian(rep, p)
    vals, vecs = eig_decompose(h)
    if rep.kind is Kind.PHOTON:
        proj = physical_projector(rep, p)
        keep = [k for k in range(len(vals)) if np.linalg.norm(proj @ vecs[:, k]) > 0.5]
        vals = vals[keep]
    return vals


def branch_projectors(rep: RepSpec, p, tol: float = DEFAULT_TOL):
    """Spectral projectors (P+, P-) onto the positive/negative-energy subspaces.

    Each projector is ``V (V^dag g V)^-1 V^dag g`` over the eigenvectors of
    that branch, which is the oblique spectral projector when the metric
    ``g`` makes H pseudo-Hermitian. The photon's longitudinal zero modes
    belong to neither branch.
    """
    p = as_momentum(p, rep)
    h = hamiltonian(rep, p)
    g = metric(rep)
    vals, vecs = eig_decompose(h)
    eps = energy(rep, p)
    cut = max(tol, 1e-8 * eps)
    out = []
    for sign in (1, -1):
        cols = vecs[:, sign * vals.real > cut]
        gram = cols.conj().T @ g @ cols
        out.append(cols @ np.linalg.solve(gram, cols.conj().T @ g))
    return tuple(out)


def inverse_on_physical(rep: RepSpec, p) -> np.ndarray:
    """H^-1 on the physical subspace: sum over branches of P_+/eps - P_-/eps."""
    p = as_momentum(p, rep)
    eps = energy(rep, p)
    if not eps > 0:
        raise NumericalError("H is singular (massless particle at zero momentum)")
    if rep.kind is Kind.FW:
        h = hamiltonian(rep, p)
        return np.diag(1.0 / np.diag(h))
    plus, minus = branch_projectors(rep, p)
    return (plus - minus) / eps


__all__ = [
    "EnergyBranch",
    "Kind",
    "RepSpec",
    "RepresentationError",
    "acceleration_operator",
    "as_momentum",
    "branch_energy",
    "branch_projectors",
    "energy",
    "fw_beta",
    "hamiltonian",
    "inverse_on_physical",
    "metric",
    "parse_kind",
    "physical_projector",
    "physical_spectrum",
    "transversality_projector",
    "velocity_operator",
]
