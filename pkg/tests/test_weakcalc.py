import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pytest import approx

from threebox.railspace import (
    generalized_states,
    inner,
    make_state,
    swapped_states,
    three_box_states,
)
from threebox.weakcalc import (
    FIFTY_FIFTY,
    BeamsplitterSpec,
    PostSelectionImpossibleError,
    ZeroOverlapError,
    abl_probability,
    balance_pre_state,
    balanced_bs_settings,
    joint_weak_probability,
    post_state_from_bs,
    pre_state_from_bs,
    weak_probabilities,
    weak_value,
)

from conftest import random_state, state_pairs, states


def rail_projector(dim, rail):
    proj = np.zeros((dim, dim))
    proj[rail, rail] = 1.0
    return proj


def abl_brute_force(pre, post, rail, complement=False):
    """Two-step projective calculation: strong {P, 1-P} measurement, then post-selection."""
    psi = pre.vector()
    f = post.vector()
    proj = rail_projector(pre.dim, rail)
    if complement:
        proj = np.eye(pre.dim) - proj
    joint = []
    for P in (proj, np.eye(pre.dim) - proj):
        collapsed = P @ psi
        p_outcome = np.vdot(collapsed, collapsed).real
        if p_outcome == 0:
            joint.append(0.0)
            continue
        collapsed = collapsed / np.sqrt(p_outcome)
        joint.append(p_outcome * abs(np.vdot(f, collapsed)) ** 2)
    return joint[0] / sum(joint)


@pytest.mark.parametrize("rail,expected", [("A", 1), ("B", 1), ("C", -1)])
def test_weak_value_original(rail, expected):
    pre, post = three_box_states()
    res = weak_value(pre, post, rail)
    assert res.value == approx(expected, abs=1e-12)
    assert res.overlap == approx(1 / 3)


def test_weak_value_reduces_to_expectation():
    pre, _ = three_box_states()
    assert weak_value(pre, pre, "A").value == approx(1 / 3, abs=1e-12)


def test_weak_value_zero_overlap():
    with pytest.raises(ZeroOverlapError, match="zero overlap"):
        weak_value(make_state([1, 0, 0]), make_state([0, 1, 0]), "A")


@pytest.mark.parametrize("states_fn,expected", [
    (three_box_states, [1, 1, -1]),
    (generalized_states, [1, 1, -1]),
    (swapped_states, [-1, 1, 1]),
])
def test_weak_probabilities_presets(states_fn, expected):
    pre, post = states_fn()
    assert np.allclose(weak_probabilities(pre, post), expected, atol=1e-12)


def test_abl_generalized_rail_c():
    pre, post = generalized_states()
    assert abl_probability(pre, post, "C") == approx(0.2, abs=1e-12)


def test_abl_original_rail_a_matches_brute_force():
    pre, post = three_box_states()
    assert abl_brute_force(pre, post, 0) == approx(1.0, abs=1e-12)
    assert abl_probability(pre, post, "A") == approx(1.0, abs=1e-12)


def test_abl_certainty():
    a = make_state([1, 0, 0])
    assert abl_probability(a, a, "A") == 1.0


def test_abl_impossible_postselection():
    with pytest.raises(PostSelectionImpossibleError):
        abl_probability(make_state([1, 0, 0]), make_state([0, 1, 0]), "A")


def test_abl_matches_brute_force_random(rng):
    for _ in range(200):
        n = rng.integers(2, 6)
        pre, post = random_state(rng, n), random_state(rng, n)
        for r in range(n):
            assert abl_probability(pre, post, r) == approx(abl_brute_force(pre, post, r), abs=1e-12)


def test_joint_weak_probability():
    pre, post = three_box_states()
    assert joint_weak_probability(pre, post, "A", "B") == 0
    assert joint_weak_probability(pre, post, "A", "A") == approx(1.0, abs=1e-12)


@given(state_pairs(dim=3, min_overlap=1e-6))
def test_joint_weak_probability_random(pair):
    pre, post = pair
    assert joint_weak_probability(pre, post, "B", "C") == 0
    assert joint_weak_probability(pre, post, "C", "C") == approx(weak_value(pre, post, "C").value)


def test_pre_state_from_bs_unequal_weights():
    r1 = np.sqrt(2 / 5)
    t1 = np.sqrt(3 / 5)
    bs1 = BeamsplitterSpec(r1, t1)
    r2 = np.sqrt(2 / 5) / t1
    bs2 = BeamsplitterSpec(r2, np.sqrt(1 - r2**2))
    s = pre_state_from_bs(bs1, bs2)
    assert np.allclose(s.vector(), [np.sqrt(2 / 5), np.sqrt(2 / 5), np.sqrt(1 / 5)], atol=1e-12)


def test_pre_state_all_reflected():
    s = pre_state_from_bs(BeamsplitterSpec(1.0, 0.0), FIFTY_FIFTY)
    assert np.allclose(s.vector(), [1, 0, 0])
    assert abs(inner(pre_state_from_bs(FIFTY_FIFTY, FIFTY_FIFTY),
                     pre_state_from_bs(FIFTY_FIFTY, FIFTY_FIFTY)) - 1) < 1e-12


def test_post_state_from_bs():
    s = post_state_from_bs(FIFTY_FIFTY, FIFTY_FIFTY)
    assert np.allclose(s.vector(), [0.5, 0.5, -2**-0.5], atol=1e-12)
    s = post_state_from_bs(FIFTY_FIFTY, BeamsplitterSpec(0.0, 1.0))
    assert np.allclose(s.vector(), [0, 0, -1])


def test_beamsplitter_validation():
    with pytest.raises(ValueError):
        BeamsplitterSpec(0.5, 0.5)
    with pytest.raises(ValueError):
        BeamsplitterSpec(1.2, 0.0)


def test_balance_pre_state():
    _, post = generalized_states()
    s = balance_pre_state(post)
    assert np.allclose(s.vector(), [np.sqrt(2 / 5), np.sqrt(2 / 5), np.sqrt(1 / 5)], atol=1e-12)
    pre, post = three_box_states()
    assert np.allclose(balance_pre_state(post).vector(), pre.vector(), atol=1e-12)
    with pytest.raises(ValueError, match="unbalanceable"):
        balance_pre_state(make_state([1, 0, -1]))


def test_balance_composed_with_fifty_fifty():
    pre, _ = generalized_states()
    balanced = balance_pre_state(post_state_from_bs(FIFTY_FIFTY, FIFTY_FIFTY))
    assert np.max(np.abs(balanced.vector() - pre.vector())) <= 1e-12


reflectivity = st.floats(0.05, 0.95)


@given(reflectivity, reflectivity)
def test_balanced_network_gives_three_box_weak_values(r3, r4):
    bs3, bs4 = BeamsplitterSpec.from_reflectivity(r3), BeamsplitterSpec.from_reflectivity(r4)
    post = post_state_from_bs(bs3, bs4)
    pre = balance_pre_state(post)
    assert np.allclose(weak_probabilities(pre, post), [1, 1, -1], atol=1e-12)
    bs1, bs2 = balanced_bs_settings(bs3, bs4)
    assert np.allclose(pre_state_from_bs(bs1, bs2).vector(), pre.vector(), atol=1e-12)


@given(state_pairs(min_overlap=1e-6))
def test_sum_rule(pair):
    pre, post = pair
    assert abs(sum(weak_probabilities(pre, post)) - 1) <= 1e-10


@given(states())
def test_reduction_to_populations(s):
    for r in range(s.dim):
        assert abs(weak_value(s, s, r).value - abs(s.amplitudes[r]) ** 2) <= 1e-12


@given(state_pairs())
def test_abl_complement_sums_to_one(pair):
    pre, post = pair
    for r in range(pre.dim):
        try:
            p = abl_probability(pre, post, r)
        except PostSelectionImpossibleError:
            continue
        assert 0.0 <= p <= 1.0
        assert p + abl_brute_force(pre, post, r, complement=True) == approx(1.0, abs=1e-12)


@given(state_pairs(dim=3, min_overlap=1e-3), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_global_phase_invariance(pair, chi_pre, chi_post):
    pre, post = pair
    pre2, post2 = pre.scaled(np.exp(1j * chi_pre)), post.scaled(np.exp(1j * chi_post))
    assert np.allclose(weak_probabilities(pre, post), weak_probabilities(pre2, post2), atol=1e-12)
    for r, (x, y) in itertools.product(range(3), itertools.product("ABC", repeat=2)):
        assert abl_probability(pre, post, r) == approx(abl_probability(pre2, post2, r), abs=1e-12)
        assert joint_weak_probability(pre, post, x, y) == approx(
            joint_weak_probability(pre2, post2, x, y), abs=1e-12)
