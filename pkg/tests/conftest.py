import json
import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from dneq.weyl import DNMatrix

FIXTURES = Path(__file__).parent / "fixtures"
D3_KEYS = [(0, 0), (1, 1), (0, 1), (1, 2), (0, 2), (0, 3)]

entry = st.builds(Fraction, st.integers(-1000, 1000), st.integers(1, 1000))
dn3_matrices = st.lists(entry, min_size=6, max_size=6).map(
    lambda xs: DNMatrix(3, dict(zip(D3_KEYS, xs)))
)


def random_dn3(rng: random.Random) -> DNMatrix:
    return DNMatrix(3, {k: Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for k in D3_KEYS})


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())
