import sys
from fractions import Fraction

import numpy as np
import pytest

from zitterkit.representations import RepSpec


def all_reps(mass=1.0):
    """One instance of every representation at the given mass."""
    reps = [
        RepSpec.dirac(mass),
        RepSpec.gfv(mass, 0, 0.7),
        RepSpec.gfv(mass, Fraction(1, 2), 2.5),
        RepSpec.gfv(mass, 1, None),
        RepSpec.gfv(mass, Fraction(3, 2), 1.3),
        RepSpec.fw(mass, Fraction(1, 2)),
        RepSpec.fw(mass, 1),
    ]
    if mass > 0:
        reps.append(RepSpec.fv(mass))
    else:
        reps.append(RepSpec.photon())
    return reps


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_momentum(rng, scale=2.0):
    while True:
        p = rng.normal(scale=scale, size=3)
        if np.linalg.norm(p) > 0.05:
            return p


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
