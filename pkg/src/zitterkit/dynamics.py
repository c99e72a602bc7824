"""Heisenberg-picture evolution of the velocity and displacement operators.

The closed forms right-multiply every H-dependent factor onto the bracket
``v(0) - p H^-1``::

    v(t)  = p H^-1 + (v(0) - p H^-1) exp(-2iHt)
    dr(t) = p H^-1 t + (v(0) - p H^-1) (i/2) H^-1 (exp(-2iHt) - 1)

which solves dv/dt = 2i(p - vH) with H a matrix. The brute-force oracle is
exp(iHt) v(0) exp(-iHt). For the photon all results are projected onto
the transversal subspace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operator_core import ExpFactory, NumericalError, mat_exp
from .representations import (
    Kind,
    RepSpec,
    as_momentum,
    energy,
    hamiltonian,
    inverse_on_physical,
    physical_projector,
    velocity_operator,
)


def _axis(axis: int) -> int:
    if axis not in (1, 2, 3):
        raise IndexError(f"axis must be 1, 2 or 3, got {axis!r}")
    return axis - 1


def _project(proj: np.ndarray | None, a: np.ndarray) -> np.ndarray:
    if proj is None:
        return a
    return proj @ a @ proj


class ClosedForm:
    """Closed-form v(t) and dr(t) for one (rep, p, axis).

    H^-1, the bracket and the eigendecomposition behind exp(-2iHt) are
    computed once; evaluation at many times is cheap.
    """

    def __init__(self, rep: RepSpec, p, axis: int):
        p = as_momentum(p, rep)
        i = _axis(axis)
        if not energy(rep, p) > 0:
            raise NumericalError("H is singular (massless particle at zero momentum)")
        self.rep = rep
        self.p = p
        self.axis = axis
        self.h = hamiltonian(rep, p)
        self.v0 = velocity_operator(rep, p)[i]
        self.hinv = inverse_on_physical(rep, p)
        self.bracket = self.v0 - p[i] * self.hinv
        self._drift = p[i] * self.hinv
        self._osc = self.bracket @ (0.5j * self.hinv)
        self._exp = ExpFactory(self.h)
        self._eye = np.eye(rep.dim)
        self.proj = physical_projector(rep, p) if rep.kind is Kind.PHOTON else None

    def velocity(self, t: float) -> np.ndarray:
        out = self.v0 + self.bracket @ (self._exp(-2j * t) - self._eye)
        return _project(self.proj, out)

    def displacement(self, t: float) -> np.ndarray:
        out = self._drift * t + self._osc @ (self._exp(-2j * t) - self._eye)
        return _project(self.proj, out)

    def amplitude(self) -> np.ndarray:
        return _project(self.proj, self._osc)


def zitter_bracket(rep: RepSpec, p, axis: int) -> np.ndarray:
    """v(0) - p_axis H^-1, the operator multiplying the oscillating factor."""
    cf = ClosedForm(rep, p, axis)
    return _project(cf.proj, cf.bracket)


def evolve_velocity_closed(rep: RepSpec, p, axis: int, t: float) -> np.ndarray:
    return ClosedForm(rep, p, axis).velocity(t)


def evolve_velocity_numeric(rep: RepSpec, p, axis: int, t: float) -> np.ndarray:
    p = as_momentum(p, rep)
    h = hamiltonian(rep, p)
    v0 = velocity_operator(rep, p)[_axis(axis)]
    out = mat_exp(h, 1j * t) @ v0 @ mat_exp(h, -1j * t)
    if rep.kind is Kind.PHOTON:
        out = _project(physical_projector(rep, p), out)
    return out


def evolve_displacement_closed(rep: RepSpec, p, axis: int, t: float) -> np.ndarray:
    return ClosedForm(rep, p, axis).displacement(t)


def zitter_frequency(rep: RepSpec, p) -> float:
    """Angular frequency 2 sqrt(m^2 + p^2) of the trembling term."""
    return 2.0 * energy(rep, as_momentum(p, rep))


def zitter_amplitude(rep: RepSpec, p, axis: int) -> np.ndarray:
    """(v(0) - p H^-1) (i/2) H^-1; identically zero in the FW representation."""
    return ClosedForm(rep, p, axis).amplitude()


class HeisenbergPropagator:
    """exp(iHt) v exp(-iHt) with H diagonalized once, for dense time sampling.

    Independent of the closed forms; used as the integrand of the
    quadrature oracle.
    """

    def __init__(self, rep: RepSpec, p, axis: int):
        p = as_momentum(p, rep)
        h = hamiltonian(rep, p)
        self.v0 = velocity_operator(rep, p)[_axis(axis)]
        self.proj = physical_projector(rep, p) if rep.kind is Kind.PHOTON else None
        w, vecs = np.linalg.eig(h)
        self._w = w
        self._vecs = vecs
        self._vinv = np.linalg.inv(vecs)
        self._core = self._vinv @ self.v0 @ vecs

    def velocity(self, t: float) -> np.ndarray:
        phase = np.exp(1j * self._w * t)
        core = phase[:, None] * self._core * phase.conj()[None, :]
        return _project(self.proj, self._vecs @ core @ self._vinv)


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-11, max_depth: int = 50):
    """Adaptive Simpson quadrature of an array-valued function.

    The error test uses the max-entry norm; accepted panels get the
    Richardson correction (S2 - S1)/15.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    total = np.zeros_like(whole)
    # explicit stack, left panel processed first for a fixed summation order
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a_, b_, fa_, fm_, fb_, s, eps, depth = stack.pop()
        m_ = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m_), 0.5 * (m_ + b_)
        flm, frm = f(lm), f(rm)
        left = (m_ - a_) / 6.0 * (fa_ + 4 * flm + fm_)
        right = (b_ - m_) / 6.0 * (fm_ + 4 * frm + fb_)
        delta = left + right - s
        if depth >= max_depth:
            raise NumericalError("adaptive Simpson did not converge")
        if np.max(np.abs(delta)) <= 15 * eps:
            total = total + left + right + delta / 15.0
        else:
            stack.append((m_, b_, fm_, frm, fb_, right, eps / 2, depth + 1))
            stack.append((a_, m_, fa_, flm, fm_, left, eps / 2, depth + 1))
    return total


def displacement_by_quadrature(rep: RepSpec, p, axis: int, t: float, tol: float = 1e-11) -> np.ndarray:
    """Oracle for dr(t): integral of the Heisenberg velocity from 0 to t."""
    prop = HeisenbergPropagator(rep, p, axis)
    if t == 0:
        return np.zeros((rep.dim, rep.dim), dtype=complex)
    # split into panels of about a quarter trembling period to seed the recursion
    omega = zitter_frequency(rep, p)
    n = max(1, int(math.ceil(abs(t) * omega / (math.pi / 2))))
    edges = np.linspace(0.0, t, n + 1)
    total = np.zeros((rep.dim, rep.dim), dtype=complex)
    for a, b in zip(edges[:-1], edges[1:]):
        total = total + adaptive_simpson(prop.velocity, a, b, tol / n)
    return total


def default_times(rep: RepSpec, p, n_steps: int = 512, periods: float = 4.0) -> np.ndarray:
    """Uniform grid over ``periods`` trembling periods, starting at 0."""
    omega = zitter_frequency(rep, p)
    t_max = periods * 2 * math.pi / omega
    return np.linspace(0.0, t_max, n_steps)


@dataclass
class OperatorTrajectory:
    rep: RepSpec
    p: np.ndarray
    axis: int
    times: np.ndarray
    v_samples: list
    dr_samples: list


def operator_trajectory(rep: RepSpec, p, axis: int, times=None) -> OperatorTrajectory:
    p = as_momentum(p, rep)
    times = default_times(rep, p) if times is None else np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing and start at 0")
    cf = ClosedForm(rep, p, axis)
    vs = [cf.velocity(t) for t in times]
    drs = [cf.displacement(t) for t in times]
    return OperatorTrajectory(rep, p, axis, times, vs, drs)


def dominant_frequency(times, signal) -> float:
    """Angular frequency of the largest non-DC FFT peak of a uniformly sampled signal."""
    times = np.asarray(times, dtype=float)
    x = np.asarray(signal) - np.mean(signal)
    power = np.abs(np.fft.rfft(x))
    freqs = 2 * math.pi * np.fft.rfftfreq(len(x), d=times[1] - times[0])
    k = 1 + int(np.argmax(power[1:]))
    return float(freqs[k])


def frequency_bin(times) -> float:
    """Angular width of one FFT bin for the given grid."""
    times = np.asarray(times, dtype=float)
    return 2 * math.pi / (len(times) * (times[1] - times[0]))


__all__ = [
    "ClosedForm",
    "HeisenbergPropagator",
    "OperatorTrajectory",
    "adaptive_simpson",
    "default_times",
    "displacement_by_quadrature",
    "dominant_frequency",
    "evolve_displacement_closed",
    "evolve_velocity_closed",
    "evolve_velocity_numeric",
    "frequency_bin",
    "operator_trajectory",
    "zitter_amplitude",
    "zitter_bracket",
    "zitter_frequency",
]
