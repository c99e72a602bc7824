"""Fixed matrix conventions: Pauli, Dirac, spin-1 and the 6x6 photon set."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .operator_core import DEFAULT_TOL, anticommutator, as_matrix, commutator, max_abs

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# (S_i)_{jk} = -i e_{ijk}
_SPIN1 = (
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
    np.array([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]], dtype=complex),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
)


def _axis(i: int) -> int:
    if i not in (1, 2, 3):
        raise IndexError(f"axis index must be 1, 2 or 3, got {i!r}")
    return i - 1


def levi_civita(i: int, j: int, k: int) -> int:
    """Permutation symbol for 0-based indices."""
    return (i - j) * (j - k) * (k - i) // 2


def pauli(i: int) -> np.ndarray:
    return _PAULI[_axis(i)].copy()


def spin1(i: int) -> np.ndarray:
    return _SPIN1[_axis(i)].copy()


def _block(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]])


def dirac_matrices():
    """Dirac representation: ``(alpha_1, alpha_2, alpha_3, beta, gamma_1, gamma_2, gamma_3)``."""
    z = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    beta = _block(one, z, z, -one)
    alphas = [_block(z, s, s, z) for s in _PAULI]
    gammas = [beta @ a for a in alphas]
    return (*alphas, beta, *gammas)


def dirac_alpha(i: int) -> np.ndarray:
    return dirac_matrices()[_axis(i)]


def dirac_beta() -> np.ndarray:
    return dirac_matrices()[3]


def dirac_gamma(i: int) -> np.ndarray:
    return dirac_matrices()[4 + _axis(i)]


def dirac_sigma(i: int) -> np.ndarray:
    """Four-component spin operator diag(sigma_i, sigma_i)."""
    s = _PAULI[_axis(i)]
    z = np.zeros((2, 2), dtype=complex)
    return _block(s, z, z, s)


def photon_alpha(i: int) -> np.ndarray:
    s = _SPIN1[_axis(i)]
    z = np.zeros((3, 3), dtype=complex)
    return _block(z, s, s, z)


def photon_beta() -> np.ndarray:
    return np.diag([1, 1, 1, -1, -1, -1]).astype(complex)


def photon_sigma(i: int) -> np.ndarray:
    s = _SPIN1[_axis(i)]
    z = np.zeros((3, 3), dtype=complex)
    return _block(s, z, z, s)


@dataclass(frozen=True)
class SpinRep:
    s: Fraction

    def __post_init__(self):
        s = Fraction(self.s)
        if s < 0 or (2 * s).denominator != 1:
            raise ValueError(f"spin must be a non-negative half-integer, got {self.s}")
        object.__setattr__(self, "s", s)

    @property
    def dim(self) -> int:
        return int(2 * self.s + 1)


def spin_matrices(s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-s matrices (dimension 2s+1).

    Spin 1/2 gives sigma/2 and spin 1 gives the Cartesian triple used for
    the photon. Any other spin uses the ladder construction in the
    ``|s, m>`` basis ordered from m = s down to m = -s.
    """
    rep = SpinRep(s)
    if rep.s == Fraction(1, 2):
        return tuple(p / 2 for p in _PAULI)
    if rep.s == 1:
        return tuple(m.copy() for m in _SPIN1)
    sv = float(rep.s)
    m = sv - np.arange(rep.dim)
    # <m+1|S+|m> = sqrt(s(s+1) - m(m+1))
    up = np.sqrt(sv * (sv + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(up, 1).astype(complex)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


@dataclass
class SpinPropertyReport:
    commutation: float
    triple_product: float
    casimir: float
    tol: float

    @property
    def residuals(self) -> dict[str, float]:
        return {
            "commutation": self.commutation,
            "triple_product": self.triple_product,
            "casimir": self.casimir,
        }

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v <= self.tol]

    @property
    def passed(self) -> bool:
        return not self.failed


def check_spin_properties(S, tol: float = 1e-12) -> SpinPropertyReport:
    """Residuals of the three spin-1 identities.

    ``[S_i, S_j] = i e_ijk S_k``, ``S_i S_j S_k + S_k S_j S_i = d_ij S_k + d_jk S_i``
    and ``S^2 = 2 I``.
    """
    S = [as_matrix(x) for x in S]
    if len(S) != 3 or len({x.shape for x in S}) != 1:
        raise ValueError("expected three same-dimension matrices")
    n = S[0].shape[0]
    eye = np.eye(n)
    comm = 0.0
    triple = 0.0
    for i, j in product(range(3), repeat=2):
        rhs = sum(1j * levi_civita(i, j, k) * S[k] for k in range(3))
        comm = max(comm, max_abs(commutator(S[i], S[j]) - rhs))
        for k in range(3):
            lhs = S[i] @ S[j] @ S[k] + S[k] @ S[j] @ S[i]
            rhs3 = (i == j) * S[k] + (j == k) * S[i]
            triple = max(triple, max_abs(lhs - rhs3))
    casimir = max_abs(sum(x @ x for x in S) - 2 * eye)
    return SpinPropertyReport(comm, triple, casimir, tol)


def clifford_residual() -> float:
    """Max residual of {a_i, a_j} = 2 d_ij, {a_i, b} = 0, b^2 = 1 for the Dirac set."""
    mats = dirac_matrices()
    alphas, beta = mats[:3], mats[3]
    eye = np.eye(4)
    res = max_abs(beta @ beta - eye)
    for i, j in product(range(3), repeat=2):
        res = max(res, max_abs(anticommutator(alphas[i], alphas[j]) - 2 * (i == j) * eye))
    for a in alphas:
        res = max(res, max_abs(anticommutator(a, beta)))
    return res


def helicity_matrix(S, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    norm = np.linalg.norm(p)
    if not norm > 0:
        raise ValueError("helicity is undefined at zero momentum")
    return sum(pi * as_matrix(si) for pi, si in zip(p, S)) / norm


def dirac_spin():
    """s = Sigma/2 for four-component spinors."""
    return tuple(dirac_sigma(i) / 2 for i in (1, 2, 3))


def photon_spin():
    return tuple(photon_sigma(i) for i in (1, 2, 3))


__all__ = [
    "DEFAULT_TOL",
    "SpinPropertyReport",
    "SpinRep",
    "check_spin_properties",
    "clifford_residual",
    "dirac_alpha",
    "dirac_beta",
    "dirac_gamma",
    "dirac_matrices",
    "dirac_sigma",
    "dirac_spin",
    "helicity_matrix",
    "levi_civita",
    "pauli",
    "photon_alpha",
    "photon_beta",
    "photon_sigma",
    "photon_spin",
    "spin1",
    "spin_matrices",
]
