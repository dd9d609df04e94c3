"""Shared group fixtures; lattices are cached on the Group objects, so keep them session-wide."""

import pytest

from burnside_induction.groups import Group, group_from_spec


@pytest.fixture(scope="session")
def c2() -> Group:
    return group_from_spec("C2")


@pytest.fixture(scope="session")
def c6() -> Group:
    return group_from_spec("C6")


@pytest.fixture(scope="session")
def s3() -> Group:
    return group_from_spec("S3")


@pytest.fixture(scope="session")
def d4() -> Group:
    return group_from_spec("D4")


@pytest.fixture(scope="session")
def a4() -> Group:
    return group_from_spec("A4")


@pytest.fixture(scope="session")
def s4() -> Group:
    return group_from_spec("S4")


@pytest.fixture(scope="session")
def a5() -> Group:
    return group_from_spec("A5")


CATALOG = [
    "C2", "C3", "C4", "C5", "C6", "C12",
    "E2^2", "E2^3", "E3^2",
    "D3", "D4", "D5", "D6", "Q8",
    "S3", "A4",
    pytest.param("S4", marks=pytest.mark.slow),
    pytest.param("A5", marks=pytest.mark.slow),
]


@pytest.fixture(scope="session", params=CATALOG)
def catalog_group(request) -> Group:
    """Catalog groups up to order 60."""
    return group_from_spec(request.param)
