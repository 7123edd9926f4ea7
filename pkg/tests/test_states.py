"""Two-mode state constructors, validation, classification, and loading."""

import json

import numpy as np
import pytest

from abfringe import (
    CorrelationClass,
    DimensionError,
    StateFormatError,
    StateValidationError,
    TwoModeState,
    classify,
    load_state,
    make_product,
    make_rho_ent,
    make_rho_sep,
    ppt_min_eigenvalue,
)
from conftest import loop_partial_trace, random_density


def test_sep_trace_and_purity():
    sep = make_rho_sep()
    assert np.trace(sep.matrix) == pytest.approx(1.0, abs=1e-15)
    assert np.trace(sep.matrix @ sep.matrix).real == pytest.approx(0.5, abs=1e-15)


def test_sep_marginals_half_half():
    sep = make_rho_sep()
    expected = np.diag([0.5, 0.5])
    for keep in ("a", "b"):
        marg = sep.marginal(keep)
        oracle = loop_partial_trace(sep.matrix, 2, 2, keep)
        assert np.abs(marg - oracle).max() < 1e-15
        assert np.abs(marg - expected).max() < 1e-15


def test_ent_is_pure_projector():
    ent = make_rho_ent()
    sq = ent.matrix @ ent.matrix
    assert np.trace(sq).real == pytest.approx(1.0, abs=1e-12)
    assert np.abs(sq - ent.matrix).max() < 1e-12


def test_ent_minus_sep_two_entries():
    diff = make_rho_ent().matrix - make_rho_sep().matrix
    nonzero = np.argwhere(np.abs(diff) > 0)
    assert sorted(map(tuple, nonzero)) == [(1, 2), (2, 1)]
    assert diff[1, 2] == diff[2, 1] == 0.5


def test_ent_and_sep_share_marginals():
    sep, ent = make_rho_sep(), make_rho_ent()
    for keep in ("a", "b"):
        assert np.abs(sep.marginal(keep) - ent.marginal(keep)).max() < 1e-14


def test_embedding_in_larger_space():
    sep = make_rho_sep(dim=5)
    assert sep.matrix.shape == (25, 25)
    assert sep.matrix[1, 1] == sep.matrix[5, 5] == 0.5
    assert np.trace(sep.matrix) == pytest.approx(1.0)


@pytest.mark.parametrize("factory", [make_rho_sep, make_rho_ent])
def test_constructors_reject_dim_one(factory):
    with pytest.raises(DimensionError):
        factory(dim=1)


def test_product_vacuum():
    vac = np.zeros((2, 2), complex)
    vac[0, 0] = 1.0
    state = make_product(vac, vac)
    assert state.matrix[0, 0] == 1.0
    assert np.trace(state.matrix @ state.matrix).real == pytest.approx(1.0)


def test_product_purity_multiplies(rng):
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 3)
    state = make_product(rho_a, rho_b)
    pa = np.trace(rho_a @ rho_a).real
    pb = np.trace(rho_b @ rho_b).real
    assert np.trace(state.matrix @ state.matrix).real == pytest.approx(pa * pb)


def test_product_rejects_invalid_factor():
    junk = np.eye(2, dtype=complex)  # trace 2
    good = np.diag([0.5, 0.5]).astype(complex)
    with pytest.raises(StateValidationError):
        make_product(junk, good)


class TestValidation:
    def test_rejects_nonhermitian(self):
        m = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(StateValidationError, match="hermiticity"):
            TwoModeState(m, 2, 2)

    def test_rejects_wrong_trace(self):
        m = np.diag([0.5, 0.4, 0.0, 0.0]).astype(complex)
        with pytest.raises(StateValidationError, match="trace"):
            TwoModeState(m, 2, 2)

    def test_rejects_negative_eigenvalue(self):
        m = np.diag([0.65, 0.65, 0.0, -0.3]).astype(complex)
        with pytest.raises(StateValidationError, match="positivity"):
            TwoModeState(m, 2, 2)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DimensionError):
            TwoModeState(np.eye(4, dtype=complex) / 4, 2, 3)

    def test_accepts_tiny_negative_jitter(self):
        m = np.diag([0.5 + 2.5e-11, 0.5 + 2.5e-11, -2.5e-11, -2.5e-11]).astype(complex)
        TwoModeState(m, 2, 2)  # must not raise


class TestPPT:
    def test_sep_nonnegative(self):
        assert ppt_min_eigenvalue(make_rho_sep()) >= -1e-10

    def test_ent_minus_half(self):
        assert ppt_min_eigenvalue(make_rho_ent()) == pytest.approx(-0.5, abs=1e-10)

    def test_ent_minus_half_embedded(self):
        assert ppt_min_eigenvalue(make_rho_ent(dim=6)) == pytest.approx(-0.5, abs=1e-10)

    def test_products_nonnegative(self, rng):
        for _ in range(5):
            state = make_product(random_density(rng, 2), random_density(rng, 3))
            assert ppt_min_eigenvalue(state) >= -1e-10


class TestClassify:
    def test_entangled(self):
        assert classify(make_rho_ent()) is CorrelationClass.ENTANGLED_BY_PPT_WITNESS

    def test_separable_mixture(self):
        assert classify(make_rho_sep()) is CorrelationClass.SEPARABLE

    def test_factorizable(self, rng):
        state = make_product(random_density(rng, 2), random_density(rng, 2))
        assert classify(state) is CorrelationClass.FACTORIZABLE

    def test_undetermined_for_coherent_mixture(self):
        # separable (mixture of two products) but neither factorizable nor
        # diagonal, so the classifier must not guess
        plus = 0.5 * np.ones((2, 2), dtype=complex)
        vac = np.diag([1.0, 0.0]).astype(complex)
        one = np.diag([0.0, 1.0]).astype(complex)
        mixed = 0.5 * np.kron(plus, vac) + 0.5 * np.kron(vac, one)
        state = TwoModeState(mixed, 2, 2)
        assert ppt_min_eigenvalue(state) >= -1e-10
        assert classify(state) is CorrelationClass.UNDETERMINED


class TestLoadState:
    def test_loads_sep_equivalent(self):
        doc = {
            "dims": [2, 2],
            "entries": [
                {"bra": [0, 1], "ket": [0, 1], "re": 0.5},
                {"bra": [1, 0], "ket": [1, 0], "re": 0.5},
            ],
        }
        state = load_state(json.dumps(doc))
        assert np.abs(state.matrix - make_rho_sep().matrix).max() < 1e-15

    def test_conjugate_autofill(self):
        doc = {
            "dims": [2, 2],
            "entries": [
                {"bra": [0, 1], "ket": [0, 1], "re": 0.5},
                {"bra": [1, 0], "ket": [1, 0], "re": 0.5},
                {"bra": [0, 1], "ket": [1, 0], "re": 0.3, "im": 0.2},
            ],
        }
        state = load_state(json.dumps(doc))
        assert state.matrix[1, 2] == pytest.approx(0.3 + 0.2j)
        assert state.matrix[2, 1] == pytest.approx(0.3 - 0.2j)

    def test_trace_error_names_invariant(self):
        doc = {"dims": [2, 2], "entries": [{"bra": [0, 0], "ket": [0, 0], "re": 0.9}]}
        with pytest.raises(StateValidationError, match="trace"):
            load_state(json.dumps(doc))

    def test_negative_eigenvalue_names_invariant(self):
        doc = {
            "dims": [2, 2],
            "entries": [
                {"bra": [0, 0], "ket": [0, 0], "re": 0.65},
                {"bra": [0, 1], "ket": [0, 1], "re": 0.65},
                {"bra": [1, 1], "ket": [1, 1], "re": -0.3},
            ],
        }
        with pytest.raises(StateValidationError, match="positivity"):
            load_state(json.dumps(doc))

    def test_hermiticity_contradiction_rejected(self):
        doc = {
            "dims": [2, 2],
            "entries": [
                {"bra": [0, 1], "ket": [0, 1], "re": 0.5},
                {"bra": [1, 0], "ket": [1, 0], "re": 0.5},
                {"bra": [0, 1], "ket": [1, 0], "re": 0.3},
                {"bra": [1, 0], "ket": [0, 1], "re": -0.3},
            ],
        }
        with pytest.raises(StateFormatError, match="[Hh]ermiticity"):
            load_state(json.dumps(doc))

    def test_bad_json(self):
        with pytest.raises(StateFormatError):
            load_state("{not json")

    def test_bad_dims(self):
        with pytest.raises(StateFormatError):
            load_state(json.dumps({"dims": [2], "entries": []}))

    def test_index_out_of_range(self):
        doc = {"dims": [2, 2], "entries": [{"bra": [0, 5], "ket": [0, 0], "re": 1.0}]}
        with pytest.raises(StateFormatError, match="outside dims"):
            load_state(json.dumps(doc))
