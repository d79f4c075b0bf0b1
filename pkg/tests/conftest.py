import pathlib

import pytest

from lmoment.hecke import load_hecke_data, mock_hecke_system
from lmoment.weights import default_bump

DATA_PATH = pathlib.Path(__file__).resolve().parent.parent / "data" / \
    "maass_even_13p77.txt"


@pytest.fixture(scope="session")
def real_f():
    return load_hecke_data(str(DATA_PATH))


@pytest.fixture(scope="session")
def mock_f():
    return mock_hecke_system(7, P_max=16000)


@pytest.fixture(scope="session")
def bump():
    return default_bump()
