import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from metacode import groups as gr


def suite_groups():
    """The (G, q) matrix exercised by the acceptance idempotent suite."""
    return [
        (gr.dihedral(16), 3),
        (gr.dihedral(16), 5),
        (gr.dihedral(16), 7),
        (gr.quaternion(16), 3),
        (gr.semidihedral(16), 3),
        (gr.semidihedral(16), 5),
        (gr.ordinary_metacyclic(2, 4), 3),
        (gr.ordinary_metacyclic(3, 3), 2),
        (gr.ordinary_metacyclic(3, 3), 5),
        (gr.dihedral(14), 3),
        (gr.dihedral(14), 5),
        (gr.MetacyclicGroup(13, 3, 9, name="G39"), 2),
        (gr.MetacyclicGroup(13, 3, 9, name="G39"), 5),
        (gr.MetacyclicGroup(19, 3, 7, name="G57"), 2),
        (gr.MetacyclicGroup(5, 4, 2, name="G20"), 3),
        (gr.dihedral(12), 5),
        (gr.c2_x_q8(), 3),
    ]


@pytest.fixture(scope="session")
def matrix():
    return suite_groups()


@pytest.fixture(scope="session")
def code_registry():
    """Measured codes shared across acceptance criteria (built once)."""
    return {}
