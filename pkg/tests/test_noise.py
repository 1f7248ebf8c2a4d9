import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonbound.errors import ContractError, DecompositionError, ParameterError
from bosonbound.linalg import haar_random_unitary, is_unitary, operator_distance, unitarity_defect
from bosonbound.noise import (
    NoiseSpec,
    gaussian_opnorm_stat,
    gaussian_perturb,
    mix_seed,
    nearest_unitary,
    perturb_unitary,
)


@pytest.mark.parametrize("eps", [1e-3, 0.1, 0.5])
def test_rotation_hits_distance_exactly(eps):
    U = haar_random_unitary(5, 0)
    for s in range(100):
        Ut = perturb_unitary(U, eps, s)
        assert abs(operator_distance(Ut, U) - eps) <= 1e-11
        assert unitarity_defect(Ut) <= 1e-11


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_rotation_one_mode_closed_form(alpha):
    eps = 2 * math.sin(alpha / 2)
    z = perturb_unitary(np.eye(1), eps, 4)[0, 0]
    assert abs(abs(np.angle(z)) - alpha) <= 1e-12


def test_rotation_endpoints():
    U = haar_random_unitary(4, 1)
    np.testing.assert_array_equal(perturb_unitary(U, 0.0, 9), U)
    assert abs(operator_distance(perturb_unitary(U, 2.0, 9), U) - 2.0) <= 1e-11
    with pytest.raises(ParameterError):
        perturb_unitary(U, 2.01, 0)
    with pytest.raises(ContractError):
        perturb_unitary(2 * U, 0.1, 0)


def test_rotation_deterministic():
    U = haar_random_unitary(4, 1)
    np.testing.assert_array_equal(perturb_unitary(U, 0.1, 5), perturb_unitary(U, 0.1, 5))
    assert not np.array_equal(perturb_unitary(U, 0.1, 5), perturb_unitary(U, 0.1, 6))


def test_gaussian_endpoints():
    U = haar_random_unitary(6, 2)
    np.testing.assert_array_equal(gaussian_perturb(U, 0.0, 3), U)
    a = gaussian_perturb(U, 1.0, 3)
    b = gaussian_perturb(haar_random_unitary(6, 99), 1.0, 3)
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ParameterError):
        gaussian_perturb(U, 1.5, 0)


def test_gaussian_breaks_unitarity():
    Ut = gaussian_perturb(haar_random_unitary(6, 2), 0.1, 3)
    assert not is_unitary(Ut, 1e-6)


def test_gaussian_entry_variance():
    Ut = gaussian_perturb(np.zeros((200, 200)), 1.0, 0)
    # entries of G / sqrt(m) have E|.|^2 = 1/m
    assert abs(np.mean(np.abs(Ut) ** 2) * 200 - 1.0) < 0.02


def test_gaussian_sqrt_eps_scaling():
    U = haar_random_unitary(64, 0)
    ratios = [operator_distance(gaussian_perturb(U, 0.01, s), U) / 0.1 for s in range(50)]
    assert 1.5 <= np.median(ratios) <= 2.5


def test_nearest_unitary_examples():
    U = haar_random_unitary(5, 3)
    np.testing.assert_allclose(nearest_unitary(U), U, atol=1e-12)
    np.testing.assert_allclose(nearest_unitary(2 * np.eye(3)), np.eye(3), atol=1e-15)
    with pytest.raises(DecompositionError):
        nearest_unitary(np.diag([1.0, 0.0]))


def test_nearest_unitary_of_gaussian_noise():
    M = gaussian_perturb(haar_random_unitary(8, 4), 0.05, 7)
    W = nearest_unitary(M)
    assert unitarity_defect(W) <= 1e-11
    defect = np.linalg.norm(M.conj().T @ M - np.eye(8), 2)
    assert operator_distance(W, M) < defect
    np.testing.assert_allclose(nearest_unitary(W), W, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 6))
def test_nearest_unitary_beats_random_unitaries(seed, m):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    W = nearest_unitary(M)
    best = operator_distance(W, M)
    for k in range(5):
        assert best <= operator_distance(haar_random_unitary(m, seed + k), M) + 1e-12


def test_opnorm_stat_edge():
    assert 1.8 <= gaussian_opnorm_stat(128, 50, 0) <= 2.2


def test_opnorm_stat_m_independent():
    small, large = gaussian_opnorm_stat(8, 50, 1), gaussian_opnorm_stat(128, 50, 1)
    assert abs(small - large) / large <= 0.25


def test_opnorm_stat_homogeneous():
    base = gaussian_opnorm_stat(16, 20, 2)
    assert abs(gaussian_opnorm_stat(16, 20, 2, scale=3.0) - 3 * base) <= 1e-12


def test_opnorm_stat_preconditions():
    with pytest.raises(ParameterError):
        gaussian_opnorm_stat(4, 50, 0)
    with pytest.raises(ParameterError):
        gaussian_opnorm_stat(16, 5, 0)


def test_mix_seed():
    assert mix_seed(1, 2, 3) == mix_seed(1, 2, 3)
    assert mix_seed(1, 2, 3) != mix_seed(3, 2, 1)
    assert 0 <= mix_seed(-1) < 2**64
    assert len({mix_seed(0, t) for t in range(1000)}) == 1000


def test_noise_spec_json():
    spec = NoiseSpec("rotation", 0.25, 11)
    assert NoiseSpec.from_json(spec.to_json()) == spec
    assert '"model": "rotation"' in spec.to_json()


@pytest.mark.parametrize("args", [("bogus", 0.1, 0), ("rotation", 2.5, 0), ("gaussian", -0.1, 0)])
def test_noise_spec_rejects(args):
    with pytest.raises(ParameterError):
        NoiseSpec(*args)
