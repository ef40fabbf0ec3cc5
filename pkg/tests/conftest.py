import pytest

from qshape.potentials import make_model

# Reference set used across the suite. Scarf uses V0 = 9 (four bound levels)
# so the algebra batch has a basis of at least four states.
CATALOG = {
    "ho": ("HarmonicOscillator", {"omega": 1.0}),
    "morse": ("Morse", {"V0": 50.0, "lambda": 1.0, "b": 1.0}),
    "scarf": ("Scarf", {"V0": 9.0, "lambda": 1.0}),
    "coulomb": ("Coulomb", {"Z": 1.0, "L": 0}),
}


def catalog_model(key):
    kind, params = CATALOG[key]
    return make_model(kind, params)


@pytest.fixture(params=sorted(CATALOG))
def model(request):
    return catalog_model(request.param)


@pytest.fixture
def ho():
    return catalog_model("ho")


@pytest.fixture
def morse():
    return catalog_model("morse")


@pytest.fixture
def coulomb():
    return catalog_model("coulomb")
