import math

import numpy as np
import pytest

from zitterkit.dynamics import (
    ClosedForm,
    HeisenbergPropagator,
    adaptive_simpson,
    default_times,
    displacement_by_quadrature,
    dominant_frequency,
    evolve_displacement_closed,
    evolve_velocity_closed,
    evolve_velocity_numeric,
    frequency_bin,
    operator_trajectory,
    zitter_amplitude,
    zitter_bracket,
    zitter_frequency,
)
from zitterkit.operator_core import NumericalError, max_abs
from zitterkit.representations import RepresentationError, RepSpec, branch_projectors

from conftest import all_reps, random_momentum

P0 = np.array([0.6, 0.0, 0.8])


def test_frozen_dirac_entries():
    rep = RepSpec.dirac(1.0)
    v = evolve_velocity_closed(rep, P0, 1, 0.7)
    dr = evolve_displacement_closed(rep, P0, 1, 0.7)
    assert v[0, 3] == pytest.approx(-0.14618468309449595 + 0.6487550153825744j, abs=1e-14)
    assert dr[0, 3] == pytest.approx(0.3919895563068556 + 0.3494465497239316j, abs=1e-14)


def test_frozen_gfv_and_fv_entries():
    v = evolve_velocity_closed(RepSpec.gfv(0.0, 0.5, 2.0), P0, 3, 1.3)
    assert v[0, 0] == pytest.approx(1.5141332520213688, abs=1e-13)
    v = evolve_velocity_closed(RepSpec.fv(1.0), P0, 3, 1.3)
    assert v[0, 0] == pytest.approx(0.42798326000257164, abs=1e-13)


def test_dirac_rest_frame_analytic():
    # p = 0: v(t) = alpha exp(-2i beta m t)
    rep = RepSpec.dirac(1.5)
    t = 0.9
    v = evolve_velocity_closed(rep, np.zeros(3), 1, t)
    from zitterkit.spin_algebra import dirac_alpha

    beta = np.diag([1, 1, -1, -1])
    expected = dirac_alpha(1) @ np.diag(np.exp(-2j * 1.5 * t * np.diag(beta)))
    assert max_abs(v - expected) < 1e-14


@pytest.mark.parametrize("mass", [0.0, 1.0])
def test_closed_form_vs_heisenberg(rng, mass):
    for rep in all_reps(mass):
        for _ in range(3):
            p = random_momentum(rng)
            t = rng.uniform(0, 20)
            axis = int(rng.integers(1, 4))
            assert max_abs(evolve_velocity_closed(rep, p, axis, t) - evolve_velocity_numeric(rep, p, axis, t)) < 1e-10


@pytest.mark.parametrize("rep", [RepSpec.dirac(0.5), RepSpec.gfv(0.0, 1, 0.4), RepSpec.photon(), RepSpec.fv(2.0)])
def test_displacement_vs_quadrature(rng, rep):
    p = random_momentum(rng)
    t = 3.7
    dr = evolve_displacement_closed(rep, p, 2, t)
    assert max_abs(dr - displacement_by_quadrature(rep, p, 2, t)) < 1e-9


def test_displacement_is_integral_of_velocity(rng):
    rep = RepSpec.gfv(1.0, 0.5, 3.0)
    p = random_momentum(rng)
    cf = ClosedForm(rep, p, 1)
    t, h = 1.1, 1e-5
    fd = (cf.displacement(t + h) - cf.displacement(t - h)) / (2 * h)
    assert max_abs(fd - cf.velocity(t)) < 1e-8
    assert max_abs(cf.displacement(0.0)) == 0


def test_fw_no_trembling(rng):
    for s in (0.5, 1):
        rep = RepSpec.fw(1.0, s)
        p = random_momentum(rng)
        assert max_abs(zitter_amplitude(rep, p, 1)) <= 1e-14
        assert max_abs(zitter_bracket(rep, p, 1)) <= 1e-14
        v0 = evolve_velocity_closed(rep, p, 1, 0.0)
        assert max_abs(evolve_velocity_closed(rep, p, 1, 5.0) - v0) == 0


def test_branch_projected_velocity_constant(rng):
    rep = RepSpec.gfv(0.5, 1, 0.8)
    p = random_momentum(rng)
    plus, minus = branch_projectors(rep, p)
    base = plus @ evolve_velocity_closed(rep, p, 3, 0.0) @ plus
    for t in (0.3, 4.0, 17.0):
        assert max_abs(plus @ evolve_velocity_closed(rep, p, 3, t) @ plus - base) < 1e-10


def test_photon_dirac_like_has_no_trembling(rng):
    # on transversal states the bracket v - p H^-1 vanishes
    p = random_momentum(rng)
    assert max_abs(zitter_bracket(RepSpec.photon(), p, 1)) < 1e-14


def test_singular_h():
    with pytest.raises(RepresentationError):
        ClosedForm(RepSpec.photon(), np.zeros(3), 1)


def test_bad_axis():
    with pytest.raises(IndexError):
        ClosedForm(RepSpec.dirac(1.0), P0, 4)


def test_frequency():
    assert zitter_frequency(RepSpec.dirac(0.0), [3, 0, 4]) == 10.0
    assert zitter_frequency(RepSpec.fv(1.0), [0, 0, 0]) == 2.0


def test_adaptive_simpson_polynomial_and_trig():
    val = adaptive_simpson(lambda x: np.array([[x**3, math.sin(x)]]), 0.0, math.pi, 1e-12)
    assert max_abs(val - np.array([[math.pi**4 / 4, 2.0]])) < 1e-11


def test_adaptive_simpson_depth_guard():
    with pytest.raises(NumericalError):
        adaptive_simpson(lambda x: np.array([abs(x) ** 0.5 * math.sin(1 / max(abs(x), 1e-300))]), -1, 1, 1e-15, 6)


def test_fft_frequency_recovery():
    t = np.linspace(0, 40, 1024)
    sig = np.cos(3.0 * t) + 0.2
    assert abs(dominant_frequency(t, sig) - 3.0) <= frequency_bin(t)


def test_default_times_and_trajectory():
    rep = RepSpec.dirac(1.0)
    times = default_times(rep, P0)
    assert len(times) == 512 and times[0] == 0
    assert times[-1] == pytest.approx(4 * math.pi / math.sqrt(2))
    traj = operator_trajectory(rep, P0, 1, times[:10])
    assert len(traj.v_samples) == 10
    with pytest.raises(ValueError):
        operator_trajectory(rep, P0, 1, [0.5, 1.0])


def test_heisenberg_propagator_at_zero():
    rep = RepSpec.gfv(0.0, 0, 0.5)
    prop = HeisenbergPropagator(rep, P0, 1)
    assert max_abs(prop.velocity(0.0) - prop.v0) < 1e-14
