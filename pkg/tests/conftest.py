from pathlib import Path

import pytest
from hypothesis import strategies as st

from soapyunion.core import Instance

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@st.composite
def instances(draw, max_labels=4, lo=-6, hi=10, max_size=4):
    k = draw(st.integers(1, max_labels))
    family = []
    for i in range(k):
        xs = draw(st.sets(st.integers(lo, hi), min_size=1, max_size=max_size))
        family.append((f"x{i}", xs))
    return Instance.from_sets(family)


@st.composite
def instance_and_shifts(draw, max_labels=4, bound=30):
    inst = draw(instances(max_labels=max_labels))
    shifts = {a: draw(st.integers(-bound, bound)) for a in inst.labels}
    return inst, shifts
