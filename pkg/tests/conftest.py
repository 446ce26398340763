"""
Shared fixtures: the reference models and their (expensive) mode sets are
built once per session.
"""
import pytest

from viscorod.constitutive import Elastic, FractionalZener, HilferFluid, PowerLaw
from viscorod.kernels import KernelKind, KernelSpec
from viscorod.modes import build_mode_set


@pytest.fixture(scope="session")
def elastic():
    return Elastic()


@pytest.fixture(scope="session")
def zener():
    """The reference fractional Zener solid."""
    return FractionalZener(alpha=0.5, a=0.2, b=0.6)


@pytest.fixture(scope="session")
def powerlaw():
    return PowerLaw(a=0.5, b=2.0)


@pytest.fixture(scope="session")
def hilfer():
    return HilferFluid(a=0.5, alpha=0.3, b0=1.0, b1=0.5, b2=0.2, beta0=0.4, beta1=0.6, beta2=0.9)


@pytest.fixture(scope="session")
def zener_modes(zener):
    return build_mode_set(zener, 1.0, 64)


@pytest.fixture(scope="session")
def elastic_modes(elastic):
    return build_mode_set(elastic, 1.0, 10_000)


@pytest.fixture(scope="session")
def zener_specs(zener_modes):
    return (
        KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, zener_modes),
        KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, zener_modes),
    )


@pytest.fixture(scope="session")
def elastic_specs(elastic_modes):
    return (
        KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, elastic_modes),
        KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, elastic_modes),
    )
