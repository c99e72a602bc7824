"""Small dense complex matrix algebra with indefinite-metric support.

Every operator in the package is a square ``numpy`` complex array. Metrics
are diagonal matrices with entries +1/-1 (identity for Hermitian reps,
``rho_3 (x) I`` for the Feshbach-Villars family).
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10
COND_LIMIT = 1e6


class ZitterError(Exception):
    """Base class for errors raised by zitterkit."""


class DimensionError(ZitterError, ValueError):
    pass


class NumericalError(ZitterError, ArithmeticError):
    """Numerical failure; ``condition`` holds the offending condition estimate."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class DefectiveMatrixError(NumericalError):
    pass


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    return a


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def max_abs(a) -> float:
    """Max-entry absolute norm, the tolerance norm used throughout."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def allclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    return max_abs(np.asarray(a) - np.asarray(b)) <= tol


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b + b @ a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def metric(diagonal) -> np.ndarray:
    """Build a metric matrix from a vector of +1/-1 entries."""
    d = np.asarray(diagonal, dtype=float)
    if d.ndim != 1 or d.size == 0 or not np.all(np.abs(d) == 1.0):
        raise ValueError("metric diagonal must be a non-empty vector of +1/-1")
    return np.diag(d).astype(complex)


def pseudo_adjoint(a, g) -> np.ndarray:
    """Return ``g a^dagger g``."""
    a, g = as_matrix(a), as_matrix(g)
    _same_dim(a, g)
    return g @ a.conj().T @ g


def is_pseudo_unitary(u, g, tol: float = DEFAULT_TOL) -> bool:
    u, g = as_matrix(u), as_matrix(g)
    _same_dim(u, g)
    if tol <= 0:
        raise ValueError("tol must be positive")
    return pseudo_unitarity_residual(u, g) <= tol


def pseudo_unitarity_residual(u, g) -> float:
    u, g = as_matrix(u), as_matrix(g)
    _same_dim(u, g)
    return max_abs(g @ u.conj().T @ g @ u - np.eye(u.shape[0]))


def _cluster_tol(values: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    return 1e-8 * scale


def _pivoted_basis(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(vectors).

    The orthogonal projector onto the span is basis independent; Gram-Schmidt
    over its columns, always taking the largest remaining column (lowest index
    on ties), makes the result independent of what LAPACK returned.
    """
    q, _ = np.linalg.qr(vectors)
    proj = q @ q.conj().T
    k = vectors.shape[1]
    basis = []
    cols = proj.copy()
    for _ in range(k):
        norms = np.linalg.norm(cols, axis=0)
        j = int(np.argmax(np.round(norms, 12)))
        b = cols[:, j] / norms[j]
        basis.append(b)
        cols = cols - np.outer(b, b.conj() @ cols)
    return np.column_stack(basis)


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude component (first on ties) is real positive."""
    mags = np.round(np.abs(vec), 12)
    j = int(np.argmax(mags))
    if mags[j] == 0:
        return vec
    return vec * (abs(vec[j]) / vec[j])


def eig_decompose(a, cond_limit: float = COND_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and right eigenvectors, sorted by descending real part.

    Ties are broken by descending imaginary part. Inside a degenerate cluster
    the eigenvectors are re-orthonormalized deterministically, so projectors
    built from them are reproducible.

    Raises
    ------
    DefectiveMatrixError
        If the eigenvector matrix is too ill-conditioned to trust.
    """
    a = as_matrix(a)
    w, v = np.linalg.eig(a)
    order = np.lexsort((-np.round(w.imag, 9), -np.round(w.real, 9)))
    w, v = w[order], v[:, order]

    raw_cond = np.linalg.cond(v / np.linalg.norm(v, axis=0))
    if not np.isfinite(raw_cond) or raw_cond > cond_limit:
        raise DefectiveMatrixError(
            f"eigenvector matrix is ill-conditioned (cond={raw_cond:.3e})", condition=float(raw_cond)
        )

    tol = _cluster_tol(w)
    vals = np.empty_like(w)
    vecs = np.empty_like(v)
    i = 0
    n = len(w)
    while i < n:
        j = i + 1
        while j < n and abs(w[j] - w[i]) <= tol:
            j += 1
        vals[i:j] = w[i:j].mean()
        if j - i > 1:
            vecs[:, i:j] = _pivoted_basis(v[:, i:j])
        else:
            vecs[:, i] = v[:, i] / np.linalg.norm(v[:, i])
        for k in range(i, j):
            vecs[:, k] = fix_phase(vecs[:, k])
        i = j

    if max_abs(a @ vecs - vecs * vals) > 1e-10 * max(1.0, max_abs(a)):
        raise NumericalError("eigendecomposition residual too large")
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > cond_limit:
        raise DefectiveMatrixError(
            f"eigenvector matrix is ill-conditioned (cond={cond:.3e})", condition=float(cond)
        )
    return vals, vecs


class ExpFactory:
    """Callable ``s -> exp(s * a)`` reusing one eigendecomposition of ``a``.

    Falls back to Pade scaling-and-squaring (``scipy.linalg.expm``) when the
    eigenvector matrix is ill-conditioned.
    """

    def __init__(self, a):
        a = as_matrix(a)
        self.a = a
        self.dim = a.shape[0]
        self.zero = not np.any(a)
        w, v = np.linalg.eig(a)
        self.condition = float(np.linalg.cond(v))
        self.diagonal = np.isfinite(self.condition) and self.condition < COND_LIMIT
        if self.diagonal:
            # balancing can return a well-conditioned but wrong basis
            scale = max(1.0, max_abs(a))
            self.diagonal = max_abs(a @ v - v * w) <= 1e-12 * scale
        if self.diagonal:
            self._w = w
            self._v = v
            self._vinv = np.linalg.inv(v)

    def __call__(self, scale: complex = 1.0) -> np.ndarray:
        scale = complex(scale)
        if self.zero or scale == 0:
            return np.eye(self.dim, dtype=complex)
        if self.diagonal:
            return (self._v * np.exp(scale * self._w)) @ self._vinv
        try:
            out = scipy.linalg.expm(scale * self.a)
        except Exception as exc:  # pragma: no cover - scipy failure is exotic
            raise NumericalError(f"matrix exponential failed: {exc}", condition=self.condition) from exc
        if not np.all(np.isfinite(out)):
            raise NumericalError("matrix exponential overflowed", condition=self.condition)
        return out


def mat_exp(a, scale: complex = 1.0) -> np.ndarray:
    """``exp(scale * a)`` by eigendecomposition, Pade scaling-and-squaring fallback."""
    return ExpFactory(a)(scale)
