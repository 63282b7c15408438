"""Shared fixtures: the reference trimer and prepared engines."""

import numpy as np
import pytest

from qraman.engine import RamanEngine
from qraman.excitons import (
    ExcitonModel,
    build_site_hamiltonian,
    diagonalize,
    lindblad_generator,
    propagate,
    site_localized_state,
)
from qraman.photons import PhotonSourceSpec

TRIMER_RATES = {(2, 1): 1 / 200, (1, 0): 1 / 500, (2, 0): 1 / 1000}


def make_trimer(pure_dephasing=0.003, rates=True):
    return ExcitonModel(
        site_energies=(2.25, 2.10, 2.10),
        hopping=0.03,
        downhill_rates=dict(TRIMER_RATES) if rates else {},
        pure_dephasing=pure_dephasing,
    )


def make_engine(
    kind="entangled",
    pure_dephasing=0.003,
    rates=True,
    horizon=800.0,
    dt=1.0,
    rho0=None,
    tau0=25.0,
    sigma0=1e-3,
    **engine_kwargs,
):
    model = make_trimer(pure_dephasing, rates)
    eig = diagonalize(build_site_hamiltonian(model))
    gen = lindblad_generator(eig, model)
    if rho0 is None:
        rho0 = site_localized_state(eig, 0)
    timeline = propagate(gen, rho0, horizon=horizon, dt=dt)
    spec = PhotonSourceSpec(kind=kind, tau0=tau0, sigma0=sigma0)
    return RamanEngine(eig, model, timeline, spec, **engine_kwargs)


@pytest.fixture(scope="session")
def trimer_model():
    return make_trimer()


@pytest.fixture(scope="session")
def trimer_eig(trimer_model):
    return diagonalize(build_site_hamiltonian(trimer_model))


@pytest.fixture(scope="session")
def trimer_timeline(trimer_model, trimer_eig):
    gen = lindblad_generator(trimer_eig, trimer_model)
    rho0 = site_localized_state(trimer_eig, 0)
    return propagate(gen, rho0, horizon=800.0, dt=1.0)


@pytest.fixture(scope="session")
def entangled_engine(trimer_model, trimer_eig, trimer_timeline):
    return RamanEngine(
        trimer_eig, trimer_model, trimer_timeline, PhotonSourceSpec(kind="entangled")
    )


@pytest.fixture(scope="session")
def classical_engine(trimer_model, trimer_eig, trimer_timeline):
    return RamanEngine(
        trimer_eig, trimer_model, trimer_timeline, PhotonSourceSpec(kind="classical")
    )
