import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gedyn.channels import apply_uniform_channel, kraus_for
from gedyn.closed_form import (
    GhzDiagonalCoefficients,
    ghz_density,
    ghz_ge_dephasing_closed,
    t_sep_noisy_w,
    w_ge_closed,
    w_pair_density,
)
from gedyn.measures import concurrence_2q, ge_w_tangle_route, n_concurrence
from gedyn.qmatrix import check_density, partial_trace
from gedyn.states import density_from_pure, ghz_state, w_state

KINDS = ["dissipative", "dephasing", "noisy"]


def x_state_n_concurrence(rho):
    """GHZ-type X state: 2 max(0, |rho_{0,~0}| - sum over other pairs of sqrt(rho_uu rho_~u~u))."""
    d = rho.shape[0]
    diag = rho.diagonal().real
    pairs = sum(math.sqrt(max(diag[u], 0) * max(diag[d - 1 - u], 0)) for u in range(1, d // 2))
    return 2 * max(0.0, abs(rho[0, -1]) - pairs)


class TestWPair:
    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    @pytest.mark.parametrize("p", [0.0, 0.3, 0.9, 1.0])
    def test_matches_kraus_reduction(self, kind, n, p):
        full = apply_uniform_channel(density_from_pure(w_state(n)), kraus_for(kind, p))
        for pair in ([0, 1], [n - 2, n - 1]):
            assert np.allclose(w_pair_density(kind, n, p), partial_trace(full, pair), atol=1e-14)

    @pytest.mark.parametrize("kind", KINDS)
    def test_is_valid_state(self, kind):
        for n in (2, 10, 40):
            for p in np.linspace(0, 1, 11):
                check_density(w_pair_density(kind, n, p))

    @pytest.mark.parametrize("kind", ["dissipative", "dephasing"])
    @pytest.mark.parametrize("n", [2, 4, 9, 30])
    def test_exponential_law_matches_concurrence(self, kind, n):
        for gt in (0.0, 0.4, 1.5, 3.0):
            rho = w_pair_density(kind, n, math.exp(-gt))
            assert w_ge_closed(kind, n, gt) == pytest.approx(ge_w_tangle_route(rho, n), abs=1e-14)
            assert w_ge_closed(kind, n, gt) == pytest.approx(4 * (n - 1) / n**2 * math.exp(-2 * gt))

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(2, 40), gt=st.floats(0, 4))
    def test_noisy_formula_matches_concurrence(self, n, gt):
        rho = w_pair_density("noisy", n, math.exp(-gt))
        assert w_ge_closed("noisy", n, gt) == pytest.approx(ge_w_tangle_route(rho, n), abs=1e-12)

    def test_noisy_starts_at_pure_value(self):
        for n in (2, 5, 12):
            assert w_ge_closed("noisy", n, 0.0) == pytest.approx(4 * (n - 1) / n**2, abs=1e-14)

    def test_noisy_two_qubits_by_hand(self):
        # n = 2 is a Werner-like state with C = max(0, (3p^2 - 1)/2).
        for p in (0.3, 0.6, 0.9):
            gt = -math.log(p)
            assert w_ge_closed("noisy", 2, gt) == pytest.approx(max(0, (3 * p * p - 1) / 2) ** 2, abs=1e-14)
            assert concurrence_2q(w_pair_density("noisy", 2, p)) == pytest.approx(max(0, (3 * p * p - 1) / 2))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            w_pair_density("noisy", 1, 0.5)
        with pytest.raises(ValueError):
            w_ge_closed("dephasing", 4, -0.1)


class TestGhz:
    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    @pytest.mark.parametrize("p", [0.0, 0.45, 1.0])
    def test_density_matches_kraus(self, kind, n, p):
        expected = apply_uniform_channel(density_from_pure(ghz_state(n)), kraus_for(kind, p))
        assert np.allclose(ghz_density(kind, n, p), expected, atol=1e-14)

    @pytest.mark.parametrize("kind", ["dissipative", "noisy"])
    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 30), p=st.floats(0, 1))
    def test_weights_sum_to_two(self, kind, n, p):
        assert GhzDiagonalCoefficients.compute(kind, n, p).total() == pytest.approx(2.0, abs=1e-12)

    def test_dephasing_has_no_weights(self):
        with pytest.raises(ValueError):
            GhzDiagonalCoefficients.compute("dephasing", 4, 0.5)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_dissipative_concurrence_by_hand(self, n):
        for p in np.linspace(0, 1, 21):
            hand = max(0.0, p ** (n / 2) * (1 - (2 ** (n - 1) - 1) * (1 - p) ** (n / 2)))
            rho = ghz_density("dissipative", n, p)
            assert n_concurrence(rho) == pytest.approx(hand, abs=1e-12)
            assert x_state_n_concurrence(rho) == pytest.approx(hand, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_noisy_concurrence_by_hand(self, n):
        for p in np.linspace(0, 1, 21):
            a = ((1 - p) ** n + (1 + p) ** n) / 2 ** (n + 1)
            hand = max(0.0, p**n + 2 * a - 1)
            rho = ghz_density("noisy", n, p)
            assert n_concurrence(rho) == pytest.approx(hand, abs=1e-12)
            assert x_state_n_concurrence(rho) == pytest.approx(hand, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_dephasing_closed_matches_concurrence(self, n):
        for gt in (0.0, 0.2, 1.0, 2.5):
            rho = ghz_density("dephasing", n, math.exp(-gt))
            assert ghz_ge_dephasing_closed(n, gt) == pytest.approx(n_concurrence(rho) ** 2, abs=1e-14)

    def test_dephasing_closed_odd_n(self):
        assert ghz_ge_dephasing_closed(3, 0.5) == pytest.approx(math.exp(-1.5))


class TestSuddenDeath:
    @pytest.mark.parametrize("n", [2, 3, 4, 6, 10, 14])
    def test_bracket_sign_change(self, n):
        gt = t_sep_noisy_w(n, 1.0)
        assert w_ge_closed("noisy", n, gt) == 0.0
        assert w_ge_closed("noisy", n, gt - 1e-8) > 0.0

    def test_two_qubit_value_by_hand(self):
        # (3p^2 - 1)/2 = 0 at p = 1/sqrt(3).
        assert t_sep_noisy_w(2, 1.0) == pytest.approx(0.5 * math.log(3), abs=1e-8)

    def test_scales_with_inverse_gamma(self):
        assert t_sep_noisy_w(5, 4.0) == pytest.approx(t_sep_noisy_w(5, 1.0) / 4, abs=1e-9)

    def test_decreases_with_n(self):
        # Larger W states die sooner under depolarizing noise.
        values = [t_sep_noisy_w(n, 1.0) for n in range(2, 15, 2)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_bad_gamma(self):
        with pytest.raises(ValueError):
            t_sep_noisy_w(4, 0.0)
