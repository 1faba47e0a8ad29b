"""State builders, the loss channel, and the JSON schema."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from lxebkit import states


class TestFockMode:
    def test_vacuum_projector(self):
        mode = states.fock_mode(0, 4)
        expected = np.zeros((5, 5))
        expected[0, 0] = 1
        assert np.allclose(mode.elements, expected)

    def test_single_photon(self):
        mode = states.fock_mode(1, 4)
        assert mode.elements[1, 1] == 1
        assert mode.trace() == pytest.approx(1.0)

    def test_exact_diagonal(self):
        mode = states.fock_mode(2, 3)
        assert mode.exact_diagonal == (0, 0, 1, 0)

    def test_cutoff_error(self):
        with pytest.raises(ValueError):
            states.fock_mode(5, 4)


class TestSqueezedMode:
    def test_zero_squeezing_is_vacuum(self):
        mode = states.squeezed_mode(0.0, 4)
        assert np.allclose(mode.elements, states.fock_mode(0, 4).elements)

    def test_odd_sectors_absent(self):
        mode = states.squeezed_mode(0.7, 5)
        for odd in (1, 3, 5):
            assert mode.elements[odd, odd] == 0

    def test_two_particle_restriction_pure(self):
        # one even basis state at n = 2: the normalized restriction is |2><2|
        mode = states.squeezed_mode(0.9, 4)
        assert abs(mode.elements[2, 2]) > 0

    def test_amplitudes(self):
        r = 0.6
        mode = states.squeezed_mode(r, 6)
        t, c = math.tanh(r), 1 / math.cosh(r)
        for k in range(0, 4):
            expected = c * t ** k * math.sqrt(math.factorial(2 * k)) / (
                2**k * math.factorial(k)
            ) * t ** k * math.sqrt(math.factorial(2 * k)) / (2**k * math.factorial(k))
            assert mode.elements[2 * k, 2 * k].real == pytest.approx(expected, rel=1e-12)

    def test_mean_photon_number(self):
        # <n> = sinh^2 r; r = arcsinh(1) gives 1 (up to cutoff truncation)
        r = math.asinh(1.0)
        mode = states.squeezed_mode(r, 60)
        mean = sum(k * mode.elements[k, k].real for k in range(61))
        assert mean == pytest.approx(1.0, abs=1e-4)


class TestCoherentMode:
    def test_zero_amplitude(self):
        mode = states.coherent_mode(0, 3)
        assert np.allclose(mode.elements, states.fock_mode(0, 3).elements)

    def test_truncation_tail(self):
        alpha = 1.3
        nc = 7
        mode = states.coherent_mode(alpha, nc)
        tail = math.exp(-abs(alpha) ** 2) * abs(alpha) ** (2 * (nc + 1)) / math.factorial(nc + 1)
        assert 1 - mode.trace() <= tail * math.e  # geometric tail bound slack

    def test_poisson_weight(self):
        mode = states.coherent_mode(1.0, 5)
        assert mode.elements[1, 1].real == pytest.approx(math.exp(-1.0), rel=1e-12)


class TestLossChannel:
    def test_identity_at_full_transmission(self):
        mode = states.coherent_mode(0.8 + 0.1j, 5)
        lossy = states.apply_uniform_loss(mode, 1.0)
        assert np.allclose(lossy.elements, mode.elements, atol=1e-14)

    def test_vacuum_at_zero_transmission(self):
        mode = states.fock_mode(3, 5)
        lossy = states.apply_uniform_loss(mode, 0.0)
        assert np.allclose(lossy.elements, states.fock_mode(0, 5).elements, atol=1e-14)

    def test_binomial_survival(self):
        lossy = states.apply_uniform_loss(states.fock_mode(1, 1), 0.6)
        assert np.allclose(np.diagonal(lossy.elements).real, [0.4, 0.6], atol=1e-14)

    def test_trace_preserving_inside_cutoff(self):
        mode = states.fock_mode(2, 4)
        lossy = states.apply_uniform_loss(mode, 0.37)
        assert lossy.trace() == pytest.approx(1.0, abs=1e-12)

    def test_exact_propagation(self):
        lossy = states.apply_uniform_loss(states.fock_mode(1, 2), Fraction(3, 5))
        assert lossy.exact_diagonal == (Fraction(2, 5), Fraction(3, 5), 0)

    def test_float_eta_drops_exactness(self):
        lossy = states.apply_uniform_loss(states.fock_mode(1, 2), 0.6)
        assert lossy.exact_diagonal is None

    def test_eta_range(self):
        with pytest.raises(ValueError):
            states.apply_uniform_loss(states.fock_mode(0, 2), 1.5)

    def test_restriction_eta_independent(self):
        # normalized ell-sector of a lossy collision-free state is eta-free
        for ell in (1, 2, 3):
            sectors = []
            for eta in (0.3, 0.9):
                modes = tuple(
                    states.apply_uniform_loss(states.fock_mode(1, 3), eta) for _ in range(3)
                )
                rho = states.ProductState(modes)
                sectors.append(states.restrict_to_sector(rho, ell))
            assert np.max(np.abs(sectors[0] - sectors[1])) < 1e-12


class TestProductState:
    def test_cutoff_mismatch(self):
        with pytest.raises(ValueError):
            states.ProductState((states.fock_mode(0, 2), states.fock_mode(0, 3)))

    def test_exactness_flag(self):
        exact = states.ProductState((states.fock_mode(1, 2), states.fock_mode(0, 2)))
        assert exact.is_exact
        mixed = states.ProductState((states.fock_mode(1, 2), states.squeezed_mode(0.5, 2)))
        assert not mixed.is_exact

    def test_restriction_normalized(self):
        rho = states.ProductState((states.fock_mode(1, 2), states.fock_mode(1, 2)))
        mat = states.restrict_to_sector(rho, 2)
        assert mat.trace().real == pytest.approx(1.0)


class TestHermiticity:
    def test_non_hermitian_rejected(self):
        bad = np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            states.matrix_mode(bad)


class TestParseStateSpec:
    def test_fock_vacuum_pair(self):
        doc = '{"cutoff": 2, "modes": [{"kind": "fock", "n": 1}, {"kind": "vacuum"}]}'
        rho = states.parse_state_spec(doc)
        assert rho.m == 2 and rho.cutoff == 2
        assert rho.modes[0].elements[1, 1] == 1

    def test_gbs_input(self):
        doc = json.dumps(
            {"cutoff": 40, "modes": [{"kind": "squeezed", "r": 0.8814}] * 2}
        )
        rho = states.parse_state_spec(doc)
        assert rho.m == 2
        # r = arcsinh(1): mean photon number per mode is sinh^2 r = 1
        mean = sum(k * rho.modes[0].elements[k, k].real for k in range(41))
        assert mean == pytest.approx(math.sinh(0.8814) ** 2, abs=0.01)

    def test_default_cutoff(self):
        doc = '{"modes": [{"kind": "vacuum"}]}'
        rho = states.parse_state_spec(doc, default_cutoff=3)
        assert rho.cutoff == 3

    def test_matrix_kind_and_loss(self):
        doc = json.dumps(
            {
                "cutoff": 1,
                "modes": [
                    {
                        "kind": "matrix",
                        "elements": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]],
                        "loss_eta": 0.5,
                    }
                ],
            }
        )
        rho = states.parse_state_spec(doc)
        diag = np.diagonal(rho.modes[0].elements).real
        assert diag[0] == pytest.approx(0.75)
        assert diag[1] == pytest.approx(0.25)

    def test_non_hermitian_matrix_rejected(self):
        doc = json.dumps(
            {
                "cutoff": 1,
                "modes": [
                    {"kind": "matrix", "elements": [[[0.5, 0.0], [0.3, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
                ],
            }
        )
        with pytest.raises(states.StateSpecError, match=r"\$\.modes\[0\]\.elements"):
            states.parse_state_spec(doc)

    def test_bad_kind_path(self):
        doc = '{"cutoff": 2, "modes": [{"kind": "thermal"}]}'
        with pytest.raises(states.StateSpecError, match=r"\$\.modes\[0\]\.kind"):
            states.parse_state_spec(doc)

    def test_bad_complex_entry(self):
        doc = '{"cutoff": 0, "modes": [{"kind": "matrix", "elements": [[1.0]]}]}'
        with pytest.raises(states.StateSpecError, match="re, im"):
            states.parse_state_spec(doc)

    def test_invalid_json(self):
        with pytest.raises(states.StateSpecError, match="invalid JSON"):
            states.parse_state_spec("{not json")

    def test_unknown_top_key(self):
        with pytest.raises(states.StateSpecError, match="unknown keys"):
            states.parse_state_spec('{"cutoff": 1, "modes": [{"kind": "vacuum"}], "x": 1}')
