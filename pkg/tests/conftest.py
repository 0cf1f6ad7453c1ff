import numpy as np
import pytest

from equirig.models import RadialProfile


def make_bump_profile(center: float, width: float, points: int = 4001) -> RadialProfile:
    """Normalized narrow Gaussian bump at r = center, std = width."""
    r = np.linspace(center - 8 * width, center + 8 * width, points)
    f0 = np.exp(-((r - center) ** 2) / (2.0 * width**2))
    return RadialProfile.from_samples(r, f0)


def make_const_shell(a: float = 1.0, b: float = 3.0, points: int = 401) -> RadialProfile:
    """Normalized constant shell on [a, b]."""
    r = np.linspace(a, b, points)
    return RadialProfile.from_samples(r, np.ones_like(r))


@pytest.fixture
def bump_profile():
    return make_bump_profile


@pytest.fixture
def const_shell():
    return make_const_shell
