import unittest

import numpy as np

from entrobound.errors import ValidationError
from entrobound.linalg import DensityMatrix, PureState, fidelity_pure, is_ppt, partial_trace, vn_entropy
from entrobound.states import (WernerParams, basis_ket, ghz, ghz_werner, maximally_mixed, product, rho_insep,
                               state_from_name, w3, w_werner, werner)


class TestNamedStates(unittest.TestCase):
    """Unit tests for the built-in state constructors."""

    def test_ghz_amplitudes(self):
        """Should put 1/sqrt(2) on |000> and |111>."""
        state = ghz(3, 2)
        expected = np.zeros(8)
        expected[[0, 7]] = 1 / np.sqrt(2)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)

    def test_ghz_phases(self):
        """Should attach the phases to the terms k >= 1."""
        state = ghz(2, 3, phases=[0.5, 1.0])
        self.assertAlmostEqual(np.angle(state.amplitudes[4]), 0.5)
        self.assertAlmostEqual(np.angle(state.amplitudes[8]), 1.0)

    def test_ghz_wrong_phase_count(self):
        """Should reject a phase list of the wrong length."""
        with self.assertRaises(ValidationError):
            ghz(3, 2, phases=[0.1, 0.2])

    def test_w3(self):
        """Should have equal weight on the single-excitation kets."""
        np.testing.assert_allclose(np.abs(w3().amplitudes[[1, 2, 4]]) ** 2, [1 / 3] * 3)

    def test_basis_ket(self):
        """Should place the amplitude at the raveled index."""
        self.assertEqual(basis_ket([2, 3], [1, 2]).amplitudes[5], 1.0)

    def test_maximally_mixed(self):
        """Should be I/dim."""
        np.testing.assert_allclose(maximally_mixed([2, 2]).elements, np.eye(4) / 4)


class TestWerner(unittest.TestCase):
    """Unit tests for Werner mixtures."""

    def test_endpoints(self):
        """Should give the pure projector at p=1 and the maximally mixed state at p=0."""
        np.testing.assert_allclose(ghz_werner(1.0).elements, ghz(3, 2).projector().elements, atol=1e-15)
        np.testing.assert_allclose(w_werner(0.0).elements, np.eye(8) / 8, atol=1e-15)

    def test_invalid_fraction(self):
        """Should reject p outside [0, 1]."""
        with self.assertRaises(ValidationError):
            WernerParams(1.2)
        with self.assertRaises(ValidationError):
            werner(ghz(3, 2), -0.1)

    def test_is_valid_state(self):
        """Should build a valid density matrix for every p."""
        for p in np.linspace(0.0, 1.0, 11):
            self.assertIsInstance(ghz_werner(p), DensityMatrix)

    def test_affine_in_p(self):
        """Should satisfy ρ(p) = p ρ(1) + (1 - p) ρ(0) elementwise."""
        for build in (ghz_werner, w_werner):
            one, zero = build(1.0).elements, build(0.0).elements
            for p in np.linspace(0.0, 1.0, 101):
                np.testing.assert_allclose(build(p).elements, p * one + (1 - p) * zero, rtol=0, atol=1e-15)

    def test_ghz_werner_fidelity_and_entropy(self):
        """Should give fidelity p + (1 - p)/8, the 000 population p/2 + (1 - p)/8 and S = 2.2169 at p = 0.5."""
        for p in np.linspace(0.0, 1.0, 21):
            rho = ghz_werner(p)
            self.assertAlmostEqual(fidelity_pure(rho, ghz(3, 2)), p + (1 - p) / 8, places=12)
            self.assertAlmostEqual(rho.elements[0, 0].real, p / 2 + (1 - p) / 8, places=15)
        self.assertAlmostEqual(vn_entropy(ghz_werner(0.5)), 2.2169, delta=5e-5)


class TestInsep(unittest.TestCase):
    """Unit tests for the biseparably derived mixture."""

    def test_unit_trace_and_mixed(self):
        """Should be a mixed three-qubit state."""
        rho = rho_insep()
        self.assertEqual(rho.signature.dims, (2, 2, 2))
        self.assertGreater(vn_entropy(rho), 0.1)

    def test_symmetric_single_party_marginals(self):
        """Should have the same marginal on every party."""
        rho = rho_insep()
        a = partial_trace(rho, [0]).elements
        for party in (1, 2):
            np.testing.assert_allclose(partial_trace(rho, [party]).elements, a, atol=1e-14)

    def test_not_ppt(self):
        """Should be entangled across some cut although every term is biseparable."""
        self.assertFalse(is_ppt(rho_insep()))

    def test_two_party_reductions_ppt(self):
        """Should leave every two-party reduction PPT, hence separable."""
        for keep in ([0, 1], [0, 2], [1, 2]):
            self.assertTrue(is_ppt(partial_trace(rho_insep(), keep)))


class TestStateFromName(unittest.TestCase):
    """Unit tests for the state name parser."""

    def test_names(self):
        """Should build the state each name refers to."""
        self.assertIsInstance(state_from_name("ghz3"), PureState)
        self.assertEqual(state_from_name("ghz(4,3)").signature.dims, (3, 3, 3, 3))
        self.assertEqual(state_from_name("ghz", n=5).signature.parties, 5)
        self.assertEqual(state_from_name("mm(4)").signature.dims, (2, 2, 2, 2))
        self.assertIsInstance(state_from_name(" GW(0.5) "), DensityMatrix)
        np.testing.assert_allclose(state_from_name("ww(0.25)").elements, w_werner(0.25).elements)

    def test_unknown(self):
        """Should reject unknown names and bad arguments."""
        for name in ("foo", "gw", "gw(a)", "ghz(3)", "w3(2)"):
            with self.assertRaises(ValidationError):
                state_from_name(name)

    def test_product(self):
        """Should multiply several states."""
        self.assertEqual(product(ghz(2, 2), ghz(2, 2), w3()).signature.dims, (2, 2, 2, 2, 2, 2, 2))


if __name__ == "__main__":
    unittest.main()
