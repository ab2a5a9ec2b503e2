import numpy as np
import pytest

from flatfront import GridDomain, build_front, curvature_spheres, default_potential

# lines printed at the end of the run by the acceptance module
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def phi():
    return default_potential()


@pytest.fixture(scope="session")
def dom33():
    return GridDomain(nu=33, nv=33)


@pytest.fixture(scope="session")
def dom65():
    return GridDomain()


@pytest.fixture(scope="session")
def front33(phi, dom33):
    return build_front(phi, dom33)


@pytest.fixture(scope="session")
def front65(phi, dom65):
    return build_front(phi, dom65)


@pytest.fixture(scope="session")
def sc33(front33, phi):
    return curvature_spheres(front33, phi)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture(scope="session")
def exact33(phi, dom33):
    """Front from a re-orthonormalized frame: relations hold to roundoff."""
    from flatfront import front_from_frame, integrate_frame
    return front_from_frame(integrate_frame(phi, dom33, project=True))


@pytest.fixture(scope="session")
def exact_sc33(exact33, phi):
    return curvature_spheres(exact33, phi)
