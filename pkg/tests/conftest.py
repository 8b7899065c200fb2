import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


def dataset_path(name: str) -> pathlib.Path:
    p = DATA_DIR / name
    if not p.exists():
        pytest.skip(f"dataset file {p} not present")
    return p


@pytest.fixture
def boston_path():
    return dataset_path("boston_housing.csv")


@pytest.fixture
def wine_path():
    return dataset_path("wine_quality.csv")
