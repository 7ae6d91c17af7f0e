"""Tests for sub-state splitting."""

import numpy as np
import pytest

from tied_plda.errors import UsageError
from tied_plda.models.params import ModelFamily
from tied_plda.training.mixup import SPLIT_PERTURBATION, mixup

from tests.helpers import small_model


@pytest.fixture
def single():
    return small_model(substates=1)


def test_split_moves_children_apart_and_halves_weight(single):
    grown = mixup(single, 4, occupancy=[[10.0], [30.0], [20.0]])
    assert grown.substate_counts == [1, 2, 1]
    parent = single.states[1].z[0]
    children = grown.states[1].z
    np.testing.assert_allclose(children[0] + children[1], 2.0 * parent)
    assert np.linalg.norm(children[0] - parent) == pytest.approx(SPLIT_PERTURBATION)
    np.testing.assert_allclose(grown.states[1].c, [0.5, 0.5])
    np.testing.assert_array_equal(grown.states[1].pi, single.states[1].pi)


def test_children_inherit_half_the_occupancy(single):
    # 30 splits into 15 + 15, so the next split goes to the state with 20
    grown = mixup(single, 5, occupancy=[[10.0], [30.0], [20.0]])
    assert grown.substate_counts == [1, 2, 2]
    grown = mixup(single, 6, occupancy=[[10.0], [30.0], [20.0]])
    assert grown.substate_counts == [1, 3, 2]


def test_ties_go_to_lowest_index(single):
    grown = mixup(single, 4, occupancy=[[5.0], [5.0], [5.0]])
    assert grown.substate_counts == [2, 1, 1]


def test_total_matches_target(model):
    grown = mixup(model, 12, seed=1)
    assert grown.total_substates == 12
    for state in grown.states:
        assert state.c.sum() == pytest.approx(1.0)


def test_same_target_is_a_no_op(model):
    assert mixup(model, model.total_substates) is model


def test_seed_is_reproducible(single):
    assert mixup(single, 6, seed=2).equals(mixup(single, 6, seed=2))


def test_mismatched_occupancy_falls_back_to_weights(model):
    grown = mixup(model, 7, occupancy=[[1.0], [2.0], [3.0]])
    expected = max(range(3), key=lambda j: (max(model.states[j].c), -j))
    assert grown.substate_counts[expected] == 3


def test_target_below_current(model):
    with pytest.raises(UsageError, match="below"):
        mixup(model, 5)


def test_mixture_refused():
    with pytest.raises(UsageError, match="tied"):
        mixup(small_model(family=ModelFamily.MIXTURE), 20)
