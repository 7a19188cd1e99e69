"""Bell layer: behaviors, local polytope membership, CHSH."""

import numpy as np
import pytest

from lhvcert.bell import (Behavior, BellError, build_behavior, chsh_behavior,
                          chsh_settings, chsh_value, deterministic_behaviors,
                          is_local)
from lhvcert.quantum import noisy_povm, schmidt_state


def random_direction(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def test_deterministic_behaviors_are_valid_and_complete():
    verts = deterministic_behaviors(2, 3)
    assert verts.shape == (2 ** 2 * 2 ** 3, 2 * 3 * 4)
    for row in verts:
        Behavior(probabilities=row.reshape(2, 3, 2, 2))  # validates
    assert len({tuple(r) for r in verts}) == len(verts)  # all distinct


def test_behavior_validation():
    with pytest.raises(BellError):
        Behavior(probabilities=np.zeros((2, 2, 2, 2)))  # not normalized
    p = np.full((2, 2, 2, 2), 0.25)
    p[0, 0] = [[0.5, -0.25], [0.5, 0.25]]
    with pytest.raises(BellError):
        Behavior(probabilities=p)


def test_chsh_value_matches_visibility_scaling():
    for eta in np.linspace(0.0, 1.0, 11):
        s = chsh_value(chsh_behavior(eta))
        assert s == pytest.approx(2.0 * np.sqrt(2.0) * eta, abs=1e-8)


def test_locality_flips_at_inverse_sqrt2():
    crit = 1.0 / np.sqrt(2.0)
    assert is_local(chsh_behavior(crit - 1e-4)).local
    assert not is_local(chsh_behavior(crit + 1e-4)).local


def test_local_certificate_reconstructs_behavior():
    beh = chsh_behavior(0.5)
    report = is_local(beh)
    assert report.local
    verts = deterministic_behaviors(2, 2)
    recon = verts.T @ report.membership.weights
    assert np.abs(recon - beh.flat()).max() < 1e-9


def test_nonlocal_certificate_is_a_bell_inequality():
    beh = chsh_behavior(1.0)
    report = is_local(beh)
    assert not report.local
    verts = deterministic_behaviors(2, 2)
    f = report.bell_functional
    assert (verts @ f).max() == pytest.approx(report.local_bound)
    assert f @ beh.flat() > report.local_bound
    assert report.violation > 0


def test_product_state_behaviors_are_local():
    rng = np.random.default_rng(51)
    state = schmidt_state(0.0)  # product state
    for _ in range(5):
        alice = [noisy_povm(random_direction(rng), rng.uniform(0, 1))
                 for _ in range(3)]
        bob = [noisy_povm(random_direction(rng), 1.0) for _ in range(3)]
        assert is_local(build_behavior(state, alice, bob)).local


def test_zero_visibility_behaviors_are_local():
    rng = np.random.default_rng(53)
    state = schmidt_state(np.pi / 4)
    alice = [noisy_povm(random_direction(rng), 0.0) for _ in range(2)]
    bob = [noisy_povm(random_direction(rng), 1.0) for _ in range(2)]
    assert is_local(build_behavior(state, alice, bob)).local


def test_chsh_settings_are_the_optimal_frame():
    alice_dirs, bob_dirs = chsh_settings()
    assert np.allclose(alice_dirs[0] @ alice_dirs[1], 0.0)
    assert np.allclose(bob_dirs[0] @ bob_dirs[1], 0.0)
    # Bob's settings bisect Alice's
    assert np.allclose(alice_dirs[0] @ bob_dirs[0], 1 / np.sqrt(2))


def test_scenario_guards():
    with pytest.raises(BellError):
        deterministic_behaviors(0, 2)
    with pytest.raises(BellError):
        deterministic_behaviors(7, 2)
    beh3 = build_behavior(schmidt_state(0.0),
                          [noisy_povm((0.0, 0.0, 1.0), 1.0)] * 1,
                          [noisy_povm((1.0, 0.0, 0.0), 1.0)] * 1)
    with pytest.raises(BellError):
        chsh_value(beh3)  # CHSH needs 2x2 settings
