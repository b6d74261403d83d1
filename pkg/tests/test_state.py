import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartree import (
    DimProfile,
    HartreeError,
    SeparableState,
    ShapeError,
    StateTensor,
    bell_state,
    frobenius_norm,
    ghz_state,
    normalize,
    overlap,
    random_separable,
    random_state,
    separable_to_tensor,
)

KET0 = np.array([1, 0])
KET1 = np.array([0, 1])
PLUS = np.array([1, 1]) / np.sqrt(2)

small_dims = st.lists(st.integers(1, 4), min_size=2, max_size=4)
seeds = st.integers(0, 2**31 - 1)


def test_dim_profile_validation():
    with pytest.raises(HartreeError):
        DimProfile([2])
    with pytest.raises(HartreeError):
        DimProfile([2, 0])
    d = DimProfile([4, 2, 3])
    assert d.size == 24 and d.reduced_size == 6 and d.n == 3


class TestFrobenius:
    def test_zero(self):
        assert frobenius_norm(StateTensor((2, 2), np.zeros(4))) == 0

    def test_bell(self):
        assert frobenius_norm(bell_state()) == pytest.approx(1, abs=1e-15)

    def test_single_amplitude(self):
        t = StateTensor((1, 1), [3 + 4j])
        assert frobenius_norm(t) == pytest.approx(5)


class TestNormalize:
    def test_scales(self):
        t = normalize(StateTensor((2, 2), [2, 0, 0, 0]))
        np.testing.assert_array_equal(t.amplitudes, [1, 0, 0, 0])

    def test_complex_entries(self):
        t = normalize(StateTensor((2, 2), [1 + 1j, 0, 0, 1 - 1j]))
        np.testing.assert_allclose(t.amplitudes, np.array([1 + 1j, 0, 0, 1 - 1j]) / 2)
        assert frobenius_norm(t) == pytest.approx(1, abs=1e-12)

    def test_one_mode_rejected(self):
        with pytest.raises(HartreeError):
            StateTensor((2,), [1, 1])

    def test_zero_rejected(self):
        with pytest.raises(HartreeError, match="cannot normalize zero state"):
            normalize(StateTensor((2, 2), np.zeros(4)))

    @settings(max_examples=100, deadline=None)
    @given(dims=small_dims, seed=seeds, scale=st.floats(1e-3, 1e3))
    def test_unit_norm(self, dims, seed, scale):
        rng = np.random.default_rng(seed)
        size = int(np.prod(dims))
        z = scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
        assert abs(frobenius_norm(normalize(StateTensor(dims, z))) - 1) <= 1e-12


def test_wrong_amplitude_count():
    with pytest.raises(ShapeError):
        StateTensor((2, 3), np.zeros(5))


def test_layout_last_mode_fastest():
    t = StateTensor((2, 3), np.arange(6))
    assert t.tensor[1, 2] == t.amplitudes[5]
    assert t.tensor[0, 1] == t.amplitudes[1]


def test_values_are_immutable():
    t = random_state((2, 2), 0)
    with pytest.raises(ValueError):
        t.amplitudes[0] = 0
    s = random_separable((2, 2), 0)
    with pytest.raises(ValueError):
        s.factors[0][0] = 0


def test_hypermatrix_is_conjugate():
    t = random_state((2, 3), 5)
    np.testing.assert_array_equal(t.hypermatrix, np.conj(t.tensor))


class TestOverlap:
    def test_matched_product(self):
        t = StateTensor((2, 2), [1, 0, 0, 0])
        assert overlap(t, SeparableState([KET0, KET0])) == pytest.approx(1)

    def test_bell_single_term(self):
        assert overlap(bell_state(), SeparableState([KET0, KET0])) == pytest.approx(
            1 / np.sqrt(2)
        )

    def test_ghz_plus_states(self):
        assert overlap(ghz_state(3), SeparableState([PLUS] * 3)) == pytest.approx(0.5)

    def test_conjugates_the_state(self):
        t = StateTensor((1, 1), [1j])
        s = SeparableState([[1], [1]])
        assert overlap(t, s) == pytest.approx(-1j)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            overlap(bell_state(), SeparableState([KET0, [1, 0, 0]]))

    @settings(max_examples=50, deadline=None)
    @given(dims=small_dims, seed=seeds)
    def test_cauchy_schwarz(self, dims, seed):
        t = random_state(dims, seed)
        s = random_separable(dims, seed + 1)
        assert abs(overlap(t, s)) <= 1 + 1e-12


class TestSeparableToTensor:
    def test_basis(self):
        t = separable_to_tensor(SeparableState([KET0, KET1]))
        np.testing.assert_array_equal(t.tensor, [[0, 1], [0, 0]])

    def test_plus_zero(self):
        t = separable_to_tensor(SeparableState([PLUS, KET0]))
        np.testing.assert_allclose(t.amplitudes, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])

    @pytest.mark.parametrize("seed", range(100))
    def test_round_trip(self, seed):
        dims = [(2, 2), (2, 3, 4), (3, 1, 2)][seed % 3]
        s = random_separable(dims, seed)
        t = separable_to_tensor(s)
        assert abs(frobenius_norm(t) - 1) <= 1e-12
        assert abs(overlap(t, s) - 1) <= 1e-10


class TestRandom:
    def test_deterministic(self):
        assert random_state((2, 3), 7) == random_state((2, 3), 7)
        assert random_separable((2, 3), 7) == random_separable((2, 3), 7)
        assert random_state((2, 3), 7) != random_state((2, 3), 8)

    @settings(max_examples=30, deadline=None)
    @given(dims=small_dims, seed=seeds)
    def test_unit_norms(self, dims, seed):
        assert abs(frobenius_norm(random_state(dims, seed)) - 1) <= 1e-12
        for f in random_separable(dims, seed).factors:
            assert abs(np.linalg.norm(f) - 1) <= 1e-12

    def test_sphere_mean(self):
        # symmetry of the uniform sphere measure: E|a_i|^2 = 1/prod(dims)
        mean = np.mean([abs(random_state((2, 2), s).amplitudes[0]) ** 2 for s in range(10_000)])
        assert mean == pytest.approx(0.25, abs=0.02)

    def test_separable_overlap_bounded(self):
        t = random_state((2, 3, 2), 11)
        for seed in range(20):
            assert abs(overlap(t, random_separable((2, 3, 2), seed))) <= 1


def test_degenerate_modes():
    t = random_state((1, 3, 1), 2)
    s = SeparableState([[1], t.tensor[0, :, 0] / np.linalg.norm(t.tensor[0, :, 0]), [1]])
    assert abs(overlap(t, s)) == pytest.approx(1)
