import numpy as np
import pytest

from kirchhoff_groundstate import (
    Nonlinearity,
    Potential,
    ProblemSpec,
    RadialFunction,
    in_lambda_set,
    make_grid,
)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(12.0, 401)


@pytest.fixture(scope="session")
def ps_const():
    """Constant-potential reference problem (a, b, p) = (1, 1/4, 4)."""
    return ProblemSpec(1.0, 0.25, Potential.constant(1.0), Nonlinearity.pure_power(4.0))


def gaussian(grid, amp=3.0, width=2.0, center=0.0):
    vals = amp * np.exp(-(((grid.nodes - center) / width) ** 2))
    vals[-1] = 0.0
    return RadialFunction(grid, vals)


def admissible_gaussian(grid, ps, lam=1.0, amp=3.0, width=2.0):
    u = gaussian(grid, amp=amp, width=width)
    assert in_lambda_set(u, ps, lam=lam), "test profile must lie in the admissible cone"
    return u


def random_mixture(grid, rng, ps=None, lam=1.0, require_admissible=False, tries=200):
    """Random Gaussian-mixture profile, optionally resampled into the cone."""
    for _ in range(tries):
        k = int(rng.integers(1, 4))
        vals = np.zeros(grid.n)
        for _ in range(k):
            amp = float(rng.uniform(0.5, 4.0))
            width = float(rng.uniform(1.0, grid.r_max / 4.0))
            center = float(rng.uniform(0.0, grid.r_max / 4.0))
            vals += amp * np.exp(-(((grid.nodes - center) / width) ** 2))
        vals[-1] = 0.0
        u = RadialFunction(grid, vals)
        if not require_admissible or in_lambda_set(u, ps, lam=lam):
            return u
    raise RuntimeError("failed to sample an admissible random profile")
