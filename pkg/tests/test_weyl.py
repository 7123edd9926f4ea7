"""Characteristic-function values and the shared trace machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abfringe import (
    TruncationPolicy,
    WeylValue,
    alpha,
    expectation_two,
    make_product,
    make_rho_ent,
    make_rho_sep,
    tensor,
    weyl_single,
    weyl_two,
)
from conftest import random_density

VACUUM = np.diag([1.0, 0.0]).astype(complex)


def test_polar_decomposition():
    w = WeylValue(0.3 - 0.4j)
    assert w.magnitude == pytest.approx(0.5)
    assert w.phase == pytest.approx(math.atan2(-0.4, 0.3))


def test_phase_branch():
    # branch is (-pi, pi]: the negative real axis maps to +pi, while a value
    # just below it maps near -pi
    assert WeylValue(-1.0 + 0.0j).phase == pytest.approx(math.pi)
    assert WeylValue(0.0).phase == 0.0
    assert WeylValue(-1.0 - 1e-6j).phase < 0.0


def test_single_at_zero_is_trace(rng):
    rho = random_density(rng, 5)
    assert weyl_single(rho, 0.0).value == pytest.approx(1.0, abs=1e-14)


def test_vacuum_value_matches_exp_route():
    # Tr[|0><0| D(0.3i)] = exp(-0.045)
    direct = weyl_single(VACUUM, 0.3j)
    via_exp = weyl_single(VACUUM, 0.3j, use_exp=True)
    assert direct.value == pytest.approx(0.9559974818331, abs=1e-12)
    assert abs(direct.value - via_exp.value) < 1e-12


def test_sep_marginal_gives_visibility():
    marg = make_rho_sep().marginal("a")
    for q in (0.2, 0.5, 1.0, 1.5):
        w = weyl_single(marg, 1j * q)
        assert w.value.imag == pytest.approx(0.0, abs=1e-14)
        assert w.value.real == pytest.approx(alpha(q), abs=1e-13)


def test_two_mode_at_zero():
    assert weyl_two(make_rho_ent(), 0.0, 0.0).value == pytest.approx(1.0, abs=1e-14)


def test_two_mode_factorizes(rng):
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 3)
    product = make_product(rho_a, rho_b)
    for _ in range(5):
        lam_a = complex(rng.normal(), rng.normal()) * 0.4
        lam_b = complex(rng.normal(), rng.normal()) * 0.4
        joint = weyl_two(product, lam_a, lam_b).value
        split = weyl_single(rho_a, lam_a).value * weyl_single(rho_b, lam_b).value
        assert abs(joint - split) < 1e-12


def test_ent_cross_term_in_two_mode_value():
    """The off-diagonal pair of the shared-photon state shifts the two-mode
    characteristic value by -q^2 e^{-q^2} cos((w1-w2) t) relative to the
    mixture, for lam_x = i q e^{i w_x t}."""
    q, w1, w2 = 0.5, 1.2e-4, 1.0e-4
    for t in (0.0, 7853.98, 31415.9, 100000.0):
        lam_a = 1j * q * np.exp(1j * w1 * t)
        lam_b = 1j * q * np.exp(1j * w2 * t)
        cross = (weyl_two(make_rho_ent(), lam_a, lam_b).value
                 - weyl_two(make_rho_sep(), lam_a, lam_b).value)
        expected = -q * q * math.exp(-q * q) * math.cos((w1 - w2) * t)
        assert cross.real == pytest.approx(expected, abs=1e-13)
        assert cross.imag == pytest.approx(0.0, abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(
    re=st.floats(min_value=-1.4, max_value=1.4),
    im=st.floats(min_value=-1.4, max_value=1.4),
)
def test_magnitude_bounded_and_conjugation(re, im):
    lam = complex(re, im)
    marg = make_rho_sep().marginal("a")
    w_plus = weyl_single(marg, lam)
    w_minus = weyl_single(marg, -lam)
    assert w_plus.magnitude <= 1.0 + 1e-10
    assert abs(w_minus.value - w_plus.value.conjugate()) < 1e-12


def test_truncation_doubling_invariance():
    """Raising the starting cutoff must not move accepted values."""
    marg = make_rho_sep().marginal("a")
    ent = make_rho_ent()
    lam = 1j * 0.5 * np.exp(0.3j)
    for use_exp in (False, True):
        coarse = TruncationPolicy(initial_dim=16, max_dim=512)
        fine = TruncationPolicy(initial_dim=64, max_dim=512)
        single_c = weyl_single(marg, lam, policy=coarse, use_exp=use_exp).value
        single_f = weyl_single(marg, lam, policy=fine, use_exp=use_exp).value
        assert abs(single_c - single_f) < 1e-12
        joint_c = weyl_two(ent, lam, -lam, policy=coarse, use_exp=use_exp).value
        joint_f = weyl_two(ent, lam, -lam, policy=fine, use_exp=use_exp).value
        assert abs(joint_c - joint_f) < 1e-12


def test_expectation_two_dense_agrees(rng):
    state = make_rho_ent()
    for _ in range(4):
        op_a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        op_b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        fast = expectation_two(state, op_a, op_b)
        slow = expectation_two(state, op_a, op_b, dense=True)
        assert abs(fast - slow) < 1e-13


def test_expectation_two_matches_plain_kron_trace(rng):
    state = make_rho_sep()
    op_a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    op_b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    padded = np.zeros((16, 16), dtype=complex)
    blocks = state.matrix.reshape(2, 2, 2, 2)
    wide = np.zeros((4, 4, 4, 4), dtype=complex)
    wide[:2, :2, :2, :2] = blocks
    padded = wide.reshape(16, 16)
    oracle = np.trace(padded @ tensor(op_a, op_b))
    assert abs(expectation_two(state, op_a, op_b) - oracle) < 1e-13
