from __future__ import annotations

import pytest

from maltcat.generators import (
    affine_cyclic,
    cyclic_group,
    klein_four,
    standard_algebras,
    standard_double_groupoids,
    standard_graph_fixtures,
    standard_groupoids,
    symmetric_group_3,
    trivial_algebra,
)


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2)


@pytest.fixture(scope="session")
def z4():
    return cyclic_group(4)


@pytest.fixture(scope="session")
def klein():
    return klein_four()


@pytest.fixture(scope="session")
def s3():
    return symmetric_group_3()


@pytest.fixture(scope="session")
def point():
    return trivial_algebra("abelian")


@pytest.fixture(scope="session")
def algebras():
    return standard_algebras()


@pytest.fixture(scope="session")
def groupoids():
    return standard_groupoids()


@pytest.fixture(scope="session")
def graphs():
    return standard_graph_fixtures()


@pytest.fixture(scope="session")
def doubles():
    return standard_double_groupoids()


@pytest.fixture(scope="session")
def affine_z4():
    return affine_cyclic(4)
