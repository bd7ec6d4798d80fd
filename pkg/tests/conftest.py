import pytest

from gridhom.io_cli import load_corpus


@pytest.fixture(scope="session")
def unknot_2x2():
    return load_corpus("unknot_2x2")


@pytest.fixture(scope="session")
def unknot_3x3_symmetric():
    return load_corpus("unknot_3x3_symmetric")


@pytest.fixture(scope="session")
def trefoil_5x5():
    return load_corpus("trefoil_31plus_5x5")


@pytest.fixture(scope="session")
def singular_trefoil_5x5():
    return load_corpus("singular_trefoil_5x5")


@pytest.fixture(scope="session")
def hopf_6x6():
    return load_corpus("hopf_gminus_6x6")


@pytest.fixture(scope="session")
def unknot_6x6():
    return load_corpus("unknot_gzero_6x6")


@pytest.fixture(scope="session")
def figure8_7x7():
    return load_corpus("figure8_7x7_symmetric")


@pytest.fixture(scope="session")
def trefoil_7x7_minus():
    return load_corpus("trefoil_31minus_7x7_symmetric")
