"""Gaussian momentum-space packets and metric-weighted expectation values."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import (
    ClosedForm,
    _axis,
    dominant_frequency,
    evolve_displacement_closed,
    evolve_velocity_closed,
)
from .operator_core import ExpFactory, NumericalError, fix_phase, max_abs
from .representations import (
    Kind,
    RepresentationError,
    RepSpec,
    as_momentum,
    branch_projectors,
    hamiltonian,
    metric,
    transversality_projector,
    velocity_operator,
)

INDEFINITE_NORM = 1e-12


class IndefiniteNormError(NumericalError):
    pass


@dataclass
class MomentumGrid:
    momenta: np.ndarray  # (n, 3)
    weights: np.ndarray  # (n,), sums to 1

    def __post_init__(self):
        self.momenta = np.atleast_2d(np.asarray(self.momenta, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if self.momenta.shape != (len(self.weights), 3):
            raise ValueError("momenta must be (n, 3) with one weight per sample")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")

    def __len__(self):
        return len(self.weights)


@dataclass
class PacketState:
    rep: RepSpec
    grid: MomentumGrid
    amplitudes: np.ndarray  # (n, dim)
    branch_mix: tuple[complex, complex]

    @property
    def metric(self) -> np.ndarray:
        return metric(self.rep)

    def signed_norm(self) -> float:
        g = self.metric
        total = 0.0
        for w, psi in zip(self.grid.weights, self.amplitudes):
            total += w * (psi.conj() @ g @ psi).real
        return float(total)

    def longitudinal_residual(self) -> float:
        """max |p_hat . phi|, |p_hat . chi| over samples (six-component states only)."""
        if self.rep.dim != 6 or self.rep.kind is Kind.DIRAC:
            return 0.0
        res = 0.0
        for p, psi in zip(self.grid.momenta, self.amplitudes):
            n = p / np.linalg.norm(p)
            res = max(res, abs(n @ psi[:3]), abs(n @ psi[3:]))
        return float(res)


def reference_spinor(dim: int) -> np.ndarray:
    """Fixed generic spinor whose branch projections define u+ and u-."""
    k = np.arange(dim)
    xi = (1.0 + 0.5 * k) + 1j * (0.3 - 0.2 * k) * (-1.0) ** k
    return xi / np.linalg.norm(xi)


def branch_spinors(rep: RepSpec, p, reference=None, transverse: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """u+ and u- at momentum p, normalized to |psi^dag g psi| = 1.

    Each is the branch projection of a fixed reference spinor, so it varies
    smoothly with p. Phase: largest-magnitude component real positive.
    ``transverse`` removes the longitudinal part of each 3-component block
    first (photon described in a spin-1 GFV or FW representation).
    """
    plus, minus = branch_projectors(rep, p)
    xi = reference_spinor(rep.dim) if reference is None else np.asarray(reference, dtype=complex)
    if transverse:
        if rep.dim != 6:
            raise RepresentationError("transverse states need a six-component spin-1 representation")
        xi = transversality_projector(p, blocks=2) @ xi
    g = metric(rep)
    out = []
    for proj in (plus, minus):
        u = proj @ xi
        n = abs((u.conj() @ g @ u).real)
        if n < 1e-14:
            raise RepresentationError("reference spinor has no component in this branch")
        out.append(fix_phase(u / np.sqrt(n)))
    return out[0], out[1]


def gaussian_grid(center, sigma: float, n_samples: int, direction=None, span: float = 4.0) -> MomentumGrid:
    """Gauss-weighted 1D grid through ``center`` along ``direction``.

    Default direction is the center's own direction (z if center is 0);
    samples cover +-span*sigma.
    """
    center = np.asarray(center, dtype=float)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if direction is None:
        norm = np.linalg.norm(center)
        direction = center / norm if norm > 0 else np.array([0.0, 0.0, 1.0])
    elif isinstance(direction, (int, np.integer)):
        d = np.zeros(3)
        d[_axis(int(direction))] = 1.0
        direction = d
    else:
        direction = np.asarray(direction, dtype=float)
        direction = direction / np.linalg.norm(direction)
    if n_samples == 1:
        return MomentumGrid(center[None, :], np.array([1.0]))
    offsets = np.linspace(-span * sigma, span * sigma, n_samples)
    w = np.exp(-0.5 * (offsets / sigma) ** 2)
    w = w / w.sum()
    return MomentumGrid(center[None, :] + offsets[:, None] * direction[None, :], w)


def make_gaussian_packet(
    rep: RepSpec,
    center,
    sigma: float,
    branch_mix=(1.0, 0.0),
    n_samples: int = 33,
    direction=None,
    reference=None,
    transverse: bool = False,
) -> PacketState:
    """Packet with per-sample spinors lam+ u+(p) + lam- u-(p).

    Amplitudes are scaled so the signed metric norm is +-1; a packet whose
    signed norm vanishes keeps unit Euclidean norm and is rejected later by
    :func:`expectation`.
    """
    center = as_momentum(center)
    lam_p, lam_m = (complex(x) for x in branch_mix)
    if lam_p == 0 and lam_m == 0:
        raise ValueError("branch mix (0, 0) describes no state")
    if rep.mass == 0 and not np.linalg.norm(center) > 4 * sigma:
        raise RepresentationError("massless packet needs |center| > 4 sigma to avoid p = 0")
    grid = gaussian_grid(center, sigma, n_samples, direction)
    amps = []
    for p in grid.momenta:
        up, um = branch_spinors(rep, p, reference, transverse or rep.kind is Kind.PHOTON)
        amps.append(lam_p * up + lam_m * um)
    amps = np.array(amps)
    g = metric(rep)
    signed = float(sum(w * (a.conj() @ g @ a).real for w, a in zip(grid.weights, amps)))
    if abs(signed) >= INDEFINITE_NORM:
        amps = amps / np.sqrt(abs(signed))
    else:
        eucl = float(sum(w * (a.conj() @ a).real for w, a in zip(grid.weights, amps)))
        amps = amps / np.sqrt(eucl)
    state = PacketState(rep, grid, amps, (lam_p, lam_m))
    if (transverse or rep.kind is Kind.PHOTON) and state.longitudinal_residual() > 1e-10:
        raise NumericalError("transverse packet has longitudinal content")
    return state


OperatorFamily = Callable[[np.ndarray, float], np.ndarray]


def expectation(state: PacketState, op_family: OperatorFamily, t: float = 0.0) -> complex:
    """Signed Rayleigh quotient sum_k w_k psi^dag g A_k(t) psi / sum_k w_k psi^dag g psi.

    ``op_family(p, t)`` returns the operator at sample momentum ``p``.
    Samples are summed in grid order.
    """
    g = state.metric
    num = 0j
    den = 0.0
    for w, p, psi in zip(state.grid.weights, state.grid.momenta, state.amplitudes):
        gpsi = g @ psi
        num += w * (gpsi.conj() @ op_family(p, t) @ psi)
        den += w * (gpsi.conj() @ psi).real
    if abs(den) < INDEFINITE_NORM:
        raise IndefiniteNormError("signed norm vanishes: indefinite-norm state")
    return num / den


def velocity_family(rep: RepSpec, axis: int) -> OperatorFamily:
    return lambda p, t: evolve_velocity_closed(rep, p, axis, t)


def displacement_family(rep: RepSpec, axis: int) -> OperatorFamily:
    return lambda p, t: evolve_displacement_closed(rep, p, axis, t)


@dataclass
class PacketTrajectory:
    times: np.ndarray
    velocity: np.ndarray  # complex <v>(t)
    displacement: np.ndarray  # complex <dr>(t)
    signed_norm: np.ndarray

    def oscillation_amplitude(self) -> float:
        v = self.velocity.real
        return float(0.5 * (v.max() - v.min()))

    def drift_velocity(self) -> float:
        """Least-squares slope of <dr>(t)."""
        return float(np.polyfit(self.times, self.displacement.real, 1)[0])

    def linear_fit_residual(self) -> float:
        coef = np.polyfit(self.times, self.displacement.real, 1)
        return float(np.max(np.abs(np.polyval(coef, self.times) - self.displacement.real)))

    def frequency(self) -> float:
        return dominant_frequency(self.times, self.velocity.real)


def packet_trajectory(state: PacketState, axis: int, times: Sequence[float]) -> PacketTrajectory:
    """<v>(t), <dr>(t) and the signed norm on a time grid.

    Samples are summed in grid order, so results are bitwise reproducible.
    The norm column is psi(t)^dag g psi(t) with psi(t) = exp(-iHt) psi.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    rep = state.rep
    g = state.metric
    forms = [ClosedForm(rep, p, axis) for p in state.grid.momenta]
    props = [ExpFactory(f.h) for f in forms]
    vel = np.zeros(len(times), dtype=complex)
    disp = np.zeros(len(times), dtype=complex)
    norm = np.zeros(len(times))
    for k, t in enumerate(times):
        num_v = 0j
        num_r = 0j
        den = 0.0
        for w, psi, cf, prop in zip(state.grid.weights, state.amplitudes, forms, props):
            gpsi = g @ psi
            num_v += w * (gpsi.conj() @ cf.velocity(t) @ psi)
            num_r += w * (gpsi.conj() @ cf.displacement(t) @ psi)
            psit = prop(-1j * t) @ psi
            den += w * ((g @ psit).conj() @ psit).real
        if abs(den) < INDEFINITE_NORM:
            raise IndefiniteNormError("signed norm vanishes: indefinite-norm state")
        vel[k] = num_v / den
        disp[k] = num_r / den
        norm[k] = den
    return PacketTrajectory(times, vel, disp, norm)


def group_velocity_check(rep: RepSpec, p, h: float) -> float:
    """Max over axes of |(H(p+h e) - H(p-h e))/2h - v_i|."""
    p = as_momentum(p, rep)
    if rep.kind is Kind.GFV and rep.N is None:
        rep = rep.with_N(rep.gfv_n(p))
    if not h > 0:
        raise ValueError("step must be positive")
    scale = max(1.0, float(np.max(np.abs(p))))
    if h < 1e-8 * scale:
        raise NumericalError(f"finite-difference step {h:g} underflows at |p| ~ {scale:g}")
    vs = velocity_operator(rep, p)
    res = 0.0
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        fd = (hamiltonian(rep, p + e) - hamiltonian(rep, p - e)) / (2 * h)
        res = max(res, max_abs(fd - vs[i]))
    return res


__all__ = [
    "IndefiniteNormError",
    "MomentumGrid",
    "PacketState",
    "PacketTrajectory",
    "branch_spinors",
    "displacement_family",
    "expectation",
    "gaussian_grid",
    "group_velocity_check",
    "make_gaussian_packet",
    "packet_trajectory",
    "reference_spinor",
    "velocity_family",
]
