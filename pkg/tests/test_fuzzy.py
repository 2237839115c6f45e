import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from talmopso.fuzzy import best_compromise, fuzzy_membership, normalized_membership


FRONT = [(2, 10), (4, 4), (10, 2)]


def test_membership_hand_example():
    mu = fuzzy_membership(FRONT)
    assert mu[:, 0] == pytest.approx([1, 0.75, 0])
    assert mu[:, 1] == pytest.approx([0, 0.75, 1])


def test_compromise_hand_example():
    assert normalized_membership(FRONT) == pytest.approx(np.array([1, 1.5, 1]) / 3.5)
    assert best_compromise(FRONT) == 1


def test_single_point():
    assert fuzzy_membership([(3, 7)]).tolist() == [[1.0, 1.0]]
    assert best_compromise([(3, 7)]) == 0


def test_empty_front():
    with pytest.raises(ValueError):
        fuzzy_membership([])


def test_tie_goes_to_lowest_index():
    assert best_compromise([(0, 1), (1, 0)]) == 0


@settings(max_examples=60)
@given(pts=st.lists(st.tuples(st.floats(0, 1e6), st.floats(0, 1e6)), min_size=1, max_size=12),
       scale=st.floats(1e-3, 1e3))
def test_membership_bounds_and_scale_invariance(pts, scale):
    mu = fuzzy_membership(pts)
    assert ((mu >= 0) & (mu <= 1)).all()
    scaled = [(a * scale, b * scale) for a, b in pts]
    assert normalized_membership(scaled) == pytest.approx(normalized_membership(pts), abs=1e-9)
