import pytest

from cartankit import abelian, heisenberg3, sl2, su2
from cartankit.linalg import FLOAT
from cartankit.reps import chain_rep, cochain_rep, trivial_lie_rep


@pytest.fixture(scope="session")
def algebras():
    return {"abelian3": abelian(3), "heisenberg3": heisenberg3(),
            "sl2": sl2(), "su2": su2()}


@pytest.fixture(scope="session")
def sl2_chain_float():
    g = sl2()
    return chain_rep(g, trivial_lie_rep(g, mode=FLOAT))


@pytest.fixture(scope="session")
def sl2_cochain_float():
    g = sl2()
    return cochain_rep(g, trivial_lie_rep(g, mode=FLOAT))


@pytest.fixture(scope="session")
def h3_chain_exact():
    g = heisenberg3()
    return chain_rep(g, trivial_lie_rep(g))


@pytest.fixture(scope="session")
def sl2_basis_float():
    g = sl2()
    return [g.basis_vector(i, FLOAT) for i in range(3)]
