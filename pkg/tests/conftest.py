import pytest

from lefschetz_quartic.pencil import PencilConfig
from lefschetz_quartic.pipeline import MonodromyModel

# published colliding pair (delta(i), epsilon(i)) for i = 1..36
COLLISIONS = [
    (3, 6), (1, 4), (2, 5), (1, 7), (2, 8), (3, 9), (2, 11), (3, 12), (1, 10),
    (6, 9), (4, 7), (5, 8), (4, 10), (5, 11), (6, 12), (2, 5), (3, 6), (1, 4),
    (9, 12), (7, 10), (8, 11), (1, 7), (2, 8), (3, 9), (5, 8), (6, 9), (4, 7),
    (3, 12), (1, 10), (2, 11), (4, 10), (5, 11), (6, 12), (8, 11), (9, 12), (7, 10),
]

# chi(l_j) for j = 1..12, as printed
CHI = ["(1 2)", "(1 3)", "(1 4)", "(2 3)", "(2 4)", "(1 2)",
       "(3 4)", "(1 3)", "(2 3)", "(1 4)", "(2 4)", "(3 4)"]

PRINTED_V = [0.600851 + 0.315483j, 0.963952 + 0.064039j, 0.999689 + 0.470655j,
             1.059535 + 0.794167j, 1.145495 + 1.145495j]
PRINTED_A = [0.709187 + 0.642143j, 0.692307 + 0.692307j, 0.642143 + 0.709187j]


@pytest.fixture(scope="session")
def cfg():
    return PencilConfig()


@pytest.fixture(scope="session")
def model(cfg):
    m = MonodromyModel(cfg)
    m.classes  # tracks all 36 paths once for the session
    return m
