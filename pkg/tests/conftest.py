import pytest

from vassiliev.diagrams import DiagramVector, build_graph, empty_diagram, wheel
from vassiliev.liealg import builtin


@pytest.fixture(scope="session")
def sl2():
    return builtin("sl2")


@pytest.fixture(scope="session")
def gl3():
    return builtin("gl(3)")


@pytest.fixture(scope="session")
def gl11():
    return builtin("gl(1|1)")


@pytest.fixture(scope="session")
def abelian3():
    return builtin("abelian(3)")


@pytest.fixture
def strut():
    return build_graph("B", [], [("a", "b")])


@pytest.fixture
def strut_vec(strut):
    return DiagramVector.from_graph(strut)


@pytest.fixture
def one_chord():
    return build_graph("A", [], [("a", "b")], loop=["a", "b"])


@pytest.fixture
def one_chord_vec(one_chord):
    return DiagramVector.from_graph(one_chord)


@pytest.fixture
def w2_vec():
    return DiagramVector.from_graph(wheel(2))


@pytest.fixture
def bare_loop_vec():
    return DiagramVector.from_graph(empty_diagram("A"))
