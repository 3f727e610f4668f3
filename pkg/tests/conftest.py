import pytest

from spinsum.algebra import BUILTIN_NAMES, builtin_by_name

ALL_BUILTINS = list(BUILTIN_NAMES)


@pytest.fixture(scope="session")
def algebras():
    return {name: builtin_by_name(name) for name in ALL_BUILTINS}


@pytest.fixture(scope="session")
def clifford(algebras):
    return algebras["clifford"]


@pytest.fixture(scope="session")
def m3(algebras):
    return algebras["twisted-matrix-3-f3"]
