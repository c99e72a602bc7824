"""``zitterkit`` command-line front end.

Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import spin_algebra as sa
from .config import ConfigError, RunConfig, load_config
from .dynamics import (
    ClosedForm,
    HeisenbergPropagator,
    adaptive_simpson,
    dominant_frequency,
    frequency_bin,
    zitter_frequency,
)
from .operator_core import NumericalError, ZitterError, anticommutator, max_abs, pseudo_adjoint
from .representations import (
    EnergyBranch,
    Kind,
    RepresentationError,
    RepSpec,
    energy,
    hamiltonian,
    metric,
    physical_spectrum,
    transversality_projector,
)
from .transforms import (
    fw_hamiltonian_residual,
    fw_massless_dirac,
    fw_photon,
    gfv_to_fw,
    photon_gfv_coefficients,
    photon_gfv_wavefunction,
    transform_for,
    transformed_hamiltonian,
    transformed_velocity,
)
from .wavepacket import IndefiniteNormError, make_gaussian_packet, packet_trajectory

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.16e}"
    return str(x)


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


class Output:
    """Ordered single-writer table emission (CSV with '#' header, or JSON)."""

    def __init__(self, command: str, cfg: RunConfig, columns: list[str]):
        self.command = command
        self.cfg = cfg
        self.columns = columns
        self.rows: list[list] = []
        self.summary: dict = {}

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(list(values))

    def meta(self) -> dict:
        return {
            "tool": "zitterkit",
            "version": __version__,
            "command": self.command,
            "seed": seed(),
            "config": self.cfg.resolved(),
        }

    def render(self) -> str:
        if self.cfg.format == "json":
            doc = {
                "meta": self.meta(),
                "rows": [{c: _jsonable(v) for c, v in zip(self.columns, r)} for r in self.rows],
            }
            if self.summary:
                doc["summary"] = {k: _jsonable(v) for k, v in self.summary.items()}
            return json.dumps(doc, indent=2, sort_keys=False) + "\n"
        buf = io.StringIO()
        buf.write(f"# zitterkit {__version__}\n")
        buf.write(f"# command: {self.command}\n")
        buf.write(f"# seed: {seed()}\n")
        buf.write(f"# config: {json.dumps(self.cfg.resolved(), sort_keys=True)}\n")
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(fmt(v) for v in r) + "\n")
        for k, v in self.summary.items():
            buf.write(f"# summary: {k}={fmt(v)}\n")
        return buf.getvalue()

    def emit(self) -> None:
        text = self.render()
        if self.cfg.out:
            with open(self.cfg.out, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def seed() -> int:
    raw = os.environ.get("ZITTERKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"ZITTERKIT_SEED must be an integer, got {raw!r}") from None


def _check_rows(cfg: RunConfig):
    """(name, residual) pairs of the identity suite."""
    rng = np.random.default_rng(seed())
    n = int(cfg.random_momenta)
    momenta = rng.normal(size=(n, 3))
    masses = rng.choice([0.0, 0.5, 1.0, 2.0], size=n)
    ns = rng.uniform(0.3, 3.0, size=n)
    spins = rng.choice([0, 1, 2, 3], size=n)

    triple = [sa.spin1(i) for i in (1, 2, 3)]
    if cfg.inject_fault == "spin":
        triple[0] = triple[0].copy()
        triple[0][1, 2] *= 1.01
    report = sa.check_spin_properties(triple, cfg.check_tol)
    rows = [
        ("spin1_commutation", report.commutation),
        ("spin1_triple_product", report.triple_product),
        ("spin1_casimir", report.casimir),
        ("dirac_clifford", sa.clifford_residual()),
    ]
    beta6 = sa.photon_beta()
    rows.append(
        ("photon_alpha_beta_anticommutator", max(max_abs(anticommutator(sa.photon_alpha(i), beta6)) for i in (1, 2, 3)))
    )

    helicity = constraint = herm = punit = disp = offblock = 0.0
    s_dirac = sa.dirac_spin()
    for p, m, N, s2 in zip(momenta, masses, ns, spins):
        p2 = float(p @ p)
        sp = sum(pi * si for pi, si in zip(p, s_dirac))
        helicity = max(helicity, max_abs(sp @ sp - p2 / 4 * np.eye(4)))
        pt = transversality_projector(p, blocks=2)
        ap = sum(pi * sa.photon_alpha(i + 1) for i, pi in enumerate(p))
        sig = sum(pi * sa.photon_sigma(i + 1) for i, pi in enumerate(p))
        constraint = max(
            constraint,
            max_abs((p2 * np.eye(6) - ap @ ap) @ pt),
            max_abs((p2 * np.eye(6) - sig @ sig) @ pt),
        )
        spin = Fraction(int(s2), 2)
        gfv = RepSpec.gfv(m, spin, N)
        h = hamiltonian(gfv, p)
        herm = max(herm, max_abs(pseudo_adjoint(h, metric(gfv)) - h))
        for t in (gfv_to_fw(m, N, p, spin), fw_photon(p), fw_massless_dirac(p)):
            punit = max(punit, t.pseudo_unitarity_residual())
            offblock = max(offblock, fw_hamiltonian_residual(t)[0])
        reps = [RepSpec.dirac(m), gfv, RepSpec.fw(m, spin)]
        if m > 0:
            reps.append(RepSpec.fv(m))
        if m == 0:
            reps.append(RepSpec.photon())
        for rep in reps:
            eps = energy(rep, p)
            vals = physical_spectrum(rep, p)
            half = len(vals) // 2
            target = np.array([eps] * half + [-eps] * half)
            disp = max(disp, max_abs(vals - target))
    rows += [
        ("dirac_helicity_square", helicity),
        ("photon_squared_constraint", constraint),
        ("gfv_pseudo_hermiticity", herm),
        ("transform_pseudo_unitarity", punit),
        ("transform_off_block", offblock),
        ("dispersion", disp),
    ]
    return rows


def cmd_check_algebra(cfg: RunConfig) -> int:
    out = Output("check-algebra", cfg, ["check", "residual", "tol", "status"])
    failed = []
    for name, res in _check_rows(cfg):
        ok = bool(res <= cfg.check_tol)
        if not ok:
            failed.append(name)
        out.add(name, float(res), float(cfg.check_tol), "pass" if ok else "FAIL")
    out.emit()
    if failed:
        print(f"zitterkit: failed identities: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _direction(cfg: RunConfig) -> np.ndarray:
    p = np.array(cfg.p, dtype=float)
    n = np.linalg.norm(p)
    return p / n if n > 0 else np.array([0.0, 0.0, 1.0])


def cmd_spectrum(cfg: RunConfig) -> int:
    rep = cfg.rep_spec()
    unit = _direction(cfg)
    npts = int(cfg.sweep_points)
    start = 0.0 if rep.mass > 0 else cfg.sweep_pmax / (npts - 1)
    grid = np.linspace(start, cfg.sweep_pmax, npts)
    cols = ["p_abs"] + [f"lambda_{k + 1}" for k in range(rep.dim)]
    out = Output("spectrum", cfg, cols)
    from .operator_core import eig_decompose

    for pa in grid:
        vals, _ = eig_decompose(hamiltonian(rep, pa * unit))
        out.add(float(pa), *[float(v.real) for v in vals])
    out.emit()
    return EXIT_OK


def _times(cfg: RunConfig, rep: RepSpec, p) -> np.ndarray:
    t_max = cfg.tmax if cfg.tmax is not None else 4 * 2 * math.pi / zitter_frequency(rep, p)
    return np.linspace(0.0, t_max, int(cfg.steps))


def cmd_evolve_operator(cfg: RunConfig) -> int:
    rep = cfg.rep_spec()
    p = np.array(cfg.p, dtype=float)
    if energy(rep, p) == 0:
        raise NumericalError("H is singular: massless particle at p = 0 has no inverse Hamiltonian")
    row, col = (int(x) % rep.dim for x in cfg.entry)
    cf = ClosedForm(rep, p, cfg.axis)
    oracle = HeisenbergPropagator(rep, p, cfg.axis)
    times = _times(cfg, rep, p)
    cols = [
        "t",
        "v_closed_re", "v_closed_im", "v_numeric_re", "v_numeric_im",
        "dr_closed_re", "dr_closed_im", "dr_quad_re", "dr_quad_im",
        "residual", "dr_residual",
    ]
    out = Output("evolve-operator", cfg, cols)
    dr_quad = np.zeros((rep.dim, rep.dim), dtype=complex)
    prev = 0.0
    for t in times:
        if t > prev:
            dr_quad = dr_quad + adaptive_simpson(oracle.velocity, prev, t, 1e-12)
        prev = t
        vc, vn = cf.velocity(t), oracle.velocity(t)
        dc = cf.displacement(t)
        out.add(
            float(t),
            vc[row, col].real, vc[row, col].imag, vn[row, col].real, vn[row, col].imag,
            dc[row, col].real, dc[row, col].imag, dr_quad[row, col].real, dr_quad[row, col].imag,
            max_abs(vc - vn), max_abs(dc - dr_quad),
        )
    out.emit()
    return EXIT_OK


def cmd_evolve_packet(cfg: RunConfig) -> int:
    rep = cfg.rep_spec()
    p = np.array(cfg.p, dtype=float)
    try:
        state = make_gaussian_packet(rep, p, cfg.sigma, tuple(cfg.mix), int(cfg.samples))
    except RepresentationError as exc:
        raise ConfigError(str(exc)) from None
    times = _times(cfg, rep, p)
    traj = packet_trajectory(state, cfg.axis, times)
    out = Output("evolve-packet", cfg, ["t", "v_re", "dr_re", "signed_norm"])
    for t, v, r, n in zip(traj.times, traj.velocity, traj.displacement, traj.signed_norm):
        out.add(float(t), float(v.real), float(r.real), float(n))
    amp = traj.oscillation_amplitude()
    # below the noise floor the FFT peak is meaningless; report no oscillation
    freq = dominant_frequency(times, traj.velocity.real) if amp > 1e-12 else 0.0
    out.summary = {
        "frequency": freq,
        "expected_frequency": zitter_frequency(rep, p),
        "frequency_bin": frequency_bin(times),
        "amplitude": amp,
        "drift_velocity": traj.drift_velocity(),
        "signed_norm": float(traj.signed_norm[0]),
    }
    out.emit()
    return EXIT_OK


def cmd_transform(cfg: RunConfig) -> int:
    rep = cfg.rep_spec()
    p = np.array(cfg.p, dtype=float)
    try:
        if rep.kind is Kind.PHOTON:
            t = fw_photon(p)
        else:
            t = transform_for(rep, p)
    except RepresentationError as exc:
        raise ConfigError(str(exc)) from None
    out = Output("transform", cfg, ["quantity", "row", "col", "re", "im"])

    def matrix(name, a):
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                out.add(name, i, j, float(a[i, j].real), float(a[i, j].imag))

    def scalar(name, x):
        out.add(name, 0, 0, float(x), 0.0)

    matrix("U", t.matrix)
    matrix("U_inv", t.inverse)
    matrix("H_fw", transformed_hamiltonian(t))
    matrix("v_fw", transformed_velocity(t)[cfg.axis - 1])
    off, dev = fw_hamiltonian_residual(t)
    scalar("pseudo_unitarity_residual", t.pseudo_unitarity_residual())
    scalar("off_block_residual", off)
    scalar("beta_eps_residual", dev)
    scalar("numeric_inverse_residual", t.numeric_inverse_residual())
    if rep.kind is Kind.PHOTON:
        N = cfg.gfv_n if cfg.gfv_n is not None else float(np.linalg.norm(p))
        if not N > 0:
            raise ConfigError("photon GFV wave functions need N > 0")
        field = transversality_projector(p) @ np.array([1.0, 0.5j, 0.25])
        for branch, label in ((EnergyBranch.POSITIVE, "plus"), (EnergyBranch.NEGATIVE, "minus")):
            psi = photon_gfv_wavefunction(field, p, N, branch)
            c_phi, c_chi = photon_gfv_coefficients(p, N, branch)
            f = field if branch is EnergyBranch.POSITIVE else 1j * field
            res = max_abs(psi - np.concatenate([c_phi * f, c_chi * f]))
            scalar(f"gfv_{label}_phi_coefficient", c_phi)
            scalar(f"gfv_{label}_chi_coefficient", c_chi)
            scalar(f"gfv_{label}_residual", res)
    out.emit()
    return EXIT_OK


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "spectrum": cmd_spectrum,
    "evolve-operator": cmd_evolve_operator,
    "evolve-packet": cmd_evolve_packet,
    "transform": cmd_transform,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zitterkit", description="Zitterbewegung of free relativistic particles")
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--rep", help="dirac | fv | gfv | photon | fw")
    ap.add_argument("--mass", type=float)
    ap.add_argument("--spin", help="0, 1/2, 1, 3/2, ...")
    ap.add_argument("--gfv-n", dest="gfv_n", type=float, help="GFV parameter N (default sqrt(m^2+p^2))")
    ap.add_argument("--p", help="momentum 'px,py,pz' (packet center)")
    ap.add_argument("--sigma", type=float, help="packet width in momentum")
    ap.add_argument("--samples", type=int, help="momentum samples per packet")
    ap.add_argument("--axis", type=int, choices=(1, 2, 3))
    ap.add_argument("--mix", help="branch mix 'lambda_plus,lambda_minus'")
    ap.add_argument("--tmax", type=float)
    ap.add_argument("--steps", type=int)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--inject-fault", dest="inject_fault", help=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"zitterkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, IndefiniteNormError) as exc:
        print(f"zitterkit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RepresentationError as exc:
        print(f"zitterkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ZitterError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"zitterkit: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
