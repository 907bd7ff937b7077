import numpy as np
import pytest

from gedyn.qmatrix import InvalidStateError
from gedyn.states import basis_state, density_from_pure, ghz_state, w_state


@pytest.mark.parametrize("n", [2, 3, 5, 12])
def test_ghz_support(n):
    psi = ghz_state(n)
    assert np.flatnonzero(psi).tolist() == [0, 2**n - 1]
    assert np.isclose(np.linalg.norm(psi), 1, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5, 12])
def test_w_support_is_single_excitations(n):
    psi = w_state(n)
    support = np.flatnonzero(psi)
    assert all(bin(i).count("1") == 1 for i in support)
    assert len(support) == n
    assert np.allclose(psi[support], 1 / np.sqrt(n))


def test_w3_by_hand():
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 1 / np.sqrt(3)
    assert np.allclose(w_state(3), expected)


def test_basis_state_msb_first():
    assert np.flatnonzero(basis_state("100")).tolist() == [4]
    assert np.flatnonzero(basis_state("001")).tolist() == [1]


@pytest.mark.parametrize("n", [1, 13])
def test_qubit_count_limits(n):
    with pytest.raises(ValueError):
        ghz_state(n)
    with pytest.raises(ValueError):
        w_state(n)


def test_density_from_pure_is_projector():
    rho = density_from_pure(w_state(4))
    assert np.allclose(rho @ rho, rho)
    assert np.isclose(np.trace(rho), 1)


def test_density_from_pure_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        density_from_pure(np.array([1.0, 1.0]))
