import numpy as np
import pytest

from coevo import EcoParams, EvoConfig, TraitModel
from coevo.cli import build_evo
from coevo.recipes import recipes


@pytest.fixture(scope="session")
def eco_ref() -> EcoParams:
    """Bistable reference set: facultative parasite, two interior states."""
    return EcoParams(r1=1.0, r2=0.25, K1=1.0, K2=1.0, a=5.0, h=4.0,
                     e=0.9, d=0.185)


def gaussian_cfg(sigma_a: float, **kw) -> EvoConfig:
    tm = TraitModel(family="gaussian", K01=1.0, K02=1.0, a0=5.0,
                    sigma_K1=1.0, sigma_K2=1.0, sigma_a=sigma_a)
    base = dict(r1=1.0, r2=0.25, h=4.0, e=0.9, d=0.185)
    base.update(kw)
    return EvoConfig(traits=tm, **base)


@pytest.fixture(scope="session")
def gauss_05() -> EvoConfig:
    return gaussian_cfg(0.5)


@pytest.fixture(scope="session")
def quartic_parasite_cfg() -> EvoConfig:
    return build_evo(recipes()["sec411_parasite_only"]["model"])


@pytest.fixture(scope="session")
def quartic_host_cfg() -> EvoConfig:
    return build_evo(recipes()["sec411_host_only"]["model"])


@pytest.fixture(scope="session")
def quartic_traitd_cfg() -> EvoConfig:
    return build_evo(recipes()["sec412_cs_not_ess"]["model"])


def draw_eco(rng: np.random.Generator, facultative=None,
             h_min: float = 0.0) -> EcoParams:
    """Random but biologically sane parameter draw."""
    while True:
        p = EcoParams(
            r1=rng.uniform(0.1, 2.0), r2=rng.uniform(0.05, 2.0),
            K1=rng.uniform(0.2, 3.0), K2=rng.uniform(0.2, 3.0),
            a=rng.uniform(0.1, 8.0), h=rng.uniform(h_min, 5.0),
            e=rng.uniform(0.05, 1.0), d=rng.uniform(0.0, 2.0))
        if facultative is None or p.facultative == facultative:
            return p
