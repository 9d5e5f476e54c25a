import pytest

from bnscore import AlphaSpec, alpha_table, builtin_examples, counts


@pytest.fixture(scope="session")
def examples():
    return builtin_examples()


@pytest.fixture(scope="session")
def d1(examples):
    return examples[0][0]


@pytest.fixture(scope="session")
def d2(examples):
    return examples[1][0]


@pytest.fixture(scope="session")
def g_minus(examples):
    return examples[0][1]


@pytest.fixture(scope="session")
def g_plus(examples):
    return examples[0][2]


@pytest.fixture(scope="session")
def c1_minus(d1, g_minus):
    return counts(d1, 0, g_minus.parents(0))


@pytest.fixture(scope="session")
def c1_plus(d1, g_plus):
    return counts(d1, 0, g_plus.parents(0))


@pytest.fixture(scope="session")
def c2_minus(d2, g_minus):
    return counts(d2, 0, g_minus.parents(0))


@pytest.fixture(scope="session")
def c2_plus(d2, g_plus):
    return counts(d2, 0, g_plus.parents(0))


@pytest.fixture(scope="session")
def bdeu1():
    return AlphaSpec.bdeu(1.0)


@pytest.fixture(scope="session")
def bds1():
    return AlphaSpec.bds(1.0)


@pytest.fixture(scope="session")
def bdeu_tables(c1_minus, c1_plus, c2_minus, c2_plus, bdeu1):
    return {
        "c1_minus": alpha_table(bdeu1, c1_minus),
        "c1_plus": alpha_table(bdeu1, c1_plus),
        "c2_minus": alpha_table(bdeu1, c2_minus),
        "c2_plus": alpha_table(bdeu1, c2_plus),
    }
