from __future__ import annotations

import itertools

import pytest
from hypothesis import settings

from seidelcomb.affine import perturbation_for
from seidelcomb.rootdata import build_root_datum

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_SERIES = ["A1", "A2", "A3", "B2", "C2", "G2", "A1xA1"]

_DATA: dict = {}


def ball(rank: int, r: int = 3):
    return [tuple(c) for c in itertools.product(range(-r, r + 1), repeat=rank)]


def datum(name: str, kind: str = "sc"):
    key = (name, kind)
    if key not in _DATA:
        _DATA[key] = build_root_datum(name, kind)
    return _DATA[key]


def ball_perturbation(name: str, kind: str = "sc", r: int = 3):
    """A perturbation point valid for every q in the radius-r box."""
    key = (name, kind, "a", r)
    if key not in _DATA:
        R = datum(name, kind)
        _DATA[key] = perturbation_for(R, ball(R.rank, r))
    return _DATA[key]


@pytest.fixture
def A2():
    return datum("A2")
