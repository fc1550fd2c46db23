import os
import tempfile
import unittest

import numpy as np

from entrobound.errors import ValidationError
from entrobound.linalg import vn_entropy
from entrobound.states import ghz, ghz_werner, maximally_mixed, rho_insep, w3, w_werner
from entrobound.sweep import find_threshold
from entrobound.witness import (JointDistribution, MeasurementPair, Method, ObservableBasis, computational_basis,
                                fourier_basis, measured_neg_cond_bound, measured_witness_v,
                                measurement_distribution, omega, pauli_basis, pure_e3f, pure_min_bound,
                                quantum_witness_v, read_counts_csv, shannon_conditional, shannon_entropy)

from randomstates import local_unitary, random_biseparable, random_mixed, random_unitary


def h2(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


class TestBases(unittest.TestCase):
    """Unit tests for observable bases and their incompatibility."""

    def test_pauli_pair_is_maximally_incompatible(self):
        """Should give Ω = 2 for Z and X."""
        self.assertAlmostEqual(omega(MeasurementPair.from_names("z", "x")), 2.0, places=12)

    def test_same_basis(self):
        """Should give Ω = 1 for identical bases."""
        self.assertAlmostEqual(omega(MeasurementPair.from_names("z", "z")), 1.0, places=12)

    def test_fourier_is_mutually_unbiased(self):
        """Should give Ω = d for the Fourier and computational bases."""
        for d in (2, 3, 4, 5):
            self.assertAlmostEqual(omega(MeasurementPair(computational_basis(d), fourier_basis(d))), d, places=10)

    def test_omega_stays_within_dimension(self):
        """Should keep 1 <= Ω <= d even when rounding pushes 1/max|<q|r>|² past d."""
        self.assertEqual(omega(MeasurementPair.from_names("z", "x")), 2.0)
        for d in (2, 3, 4, 5, 7):
            self.assertLessEqual(omega(MeasurementPair(computational_basis(d), fourier_basis(d))), d)
        rng = np.random.default_rng(5)
        for _ in range(50):
            pair = MeasurementPair(ObservableBasis(random_unitary(3, rng)), ObservableBasis(random_unitary(3, rng)))
            self.assertGreaterEqual(omega(pair), 1.0)
            self.assertLessEqual(omega(pair), 3.0)

    def test_rejects_non_orthonormal(self):
        """Should refuse vectors that are not orthonormal."""
        with self.assertRaises(ValidationError):
            ObservableBasis([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_unknown_pauli(self):
        """Should refuse an unknown Pauli name."""
        with self.assertRaises(ValidationError):
            pauli_basis("w")

    def test_pair_dimension_mismatch(self):
        """Should refuse bases of different dimension."""
        with self.assertRaises(ValidationError):
            MeasurementPair(computational_basis(2), fourier_basis(3))


class TestShannon(unittest.TestCase):
    """Unit tests for joint distributions and Shannon entropies."""

    def test_uniform(self):
        """Should give log2 of the support size."""
        dist = JointDistribution(np.full((2, 2, 2), 1 / 8))
        self.assertAlmostEqual(shannon_entropy(dist), 3.0)
        self.assertAlmostEqual(shannon_conditional(dist, 0, [1, 2]), 1.0)

    def test_perfect_correlation(self):
        """Should give zero conditional entropy for copies."""
        probs = np.zeros((2, 2))
        probs[0, 0] = probs[1, 1] = 0.5
        dist = JointDistribution(probs)
        self.assertAlmostEqual(shannon_conditional(dist, 0, 1), 0.0)
        self.assertAlmostEqual(shannon_entropy(dist, [0]), 1.0)

    def test_rejects_unnormalized(self):
        """Should refuse probabilities that do not sum to 1."""
        with self.assertRaises(ValidationError):
            JointDistribution([0.5, 0.6])

    def test_rejects_non_finite(self):
        """Should refuse NaN and infinite probabilities."""
        for probs in ([0.5, np.nan, 0.5], [np.inf, 0.0], [np.nan, np.nan]):
            with self.assertRaises(ValidationError):
                JointDistribution(probs)

    def test_overlap(self):
        """Should refuse a target that is also conditioned on."""
        dist = JointDistribution(np.full((2, 2), 0.25))
        with self.assertRaises(ValidationError):
            shannon_conditional(dist, 0, [0, 1])

    def test_measurement_distribution_ghz_z(self):
        """Should give 1/2 on 000 and 111 when GHZ3 is measured in Z."""
        dist = measurement_distribution(ghz(3, 2), pauli_basis("z"))
        self.assertAlmostEqual(dist.probs[0, 0, 0], 0.5)
        self.assertAlmostEqual(dist.probs[1, 1, 1], 0.5)


class TestExactWitness(unittest.TestCase):
    """Unit tests for the exact quantum witness."""

    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def test_ghz3(self):
        """Should give V = 1 and E3F >= 1 for GHZ3."""
        report = quantum_witness_v(ghz(3, 2))
        self.assertEqual(report.method, Method.EXACT_QUANTUM)
        self.assertAlmostEqual(report.v_bound, 1.0, places=9)
        self.assertAlmostEqual(report.e3f_lower, 1.0, places=9)
        self.assertEqual(sorted(report.terms), ["A|BC", "B|AC", "C|AB"])

    def test_w3(self):
        """Should give V = 3 h2(1/3) - 2 for W3."""
        self.assertAlmostEqual(quantum_witness_v(w3()).v_bound, 3 * h2(1 / 3) - 2, places=9)
        self.assertAlmostEqual(quantum_witness_v(w3()).v_bound, 0.7549, delta=1e-4)

    def test_maximally_mixed(self):
        """Should give V = -5 and a zero bound for the maximally mixed qubit state."""
        report = quantum_witness_v(maximally_mixed([2, 2, 2]))
        self.assertAlmostEqual(report.v_bound, -5.0, places=9)
        self.assertEqual(report.e3f_lower, 0.0)

    def test_insep_not_witnessed(self):
        """Should never witness the biseparably derived mixture."""
        self.assertLessEqual(quantum_witness_v(rho_insep()).v_bound, 1e-9)

    def test_biseparable_never_violates(self):
        """Should give V <= 0 for random biseparable mixtures."""
        for _ in range(500):
            self.assertLessEqual(quantum_witness_v(random_biseparable(self.rng)).v_bound, 1e-9)

    def test_local_unitary_invariance(self):
        """Should not change under local unitaries."""
        for _ in range(5):
            rho = random_mixed([2, 2, 2], self.rng, rank=2)
            self.assertAlmostEqual(quantum_witness_v(local_unitary(rho, self.rng)).v_bound,
                                   quantum_witness_v(rho).v_bound, places=8)

    def test_ghz_werner_nondecreasing(self):
        """Should give an exact V that never decreases along p for GHZ-Werner."""
        values = [quantum_witness_v(ghz_werner(p)).v_bound for p in np.linspace(0.0, 1.0, 1001)]
        self.assertTrue(np.all(np.diff(values) >= -1e-12))

    def test_requires_three_parties(self):
        """Should refuse a four-party state."""
        with self.assertRaises(ValidationError):
            quantum_witness_v(ghz(4, 2))


class TestMeasuredWitness(unittest.TestCase):
    """Unit tests for the measured witness."""

    def setUp(self):
        self.pair = MeasurementPair.from_names("z", "x")
        self.rng = np.random.default_rng(99)

    def distributions(self, rho):
        return measurement_distribution(rho, self.pair.q), measurement_distribution(rho, self.pair.r)

    def test_ghz3(self):
        """Should reach V = 1 with Z and X on GHZ3 without exceeding it."""
        dist_q, dist_r = self.distributions(ghz(3, 2))
        report = measured_witness_v(dist_q, dist_r, self.pair)
        self.assertAlmostEqual(report.v_bound, 1.0, places=9)
        self.assertLessEqual(report.v_bound, 1.0)
        self.assertEqual(sorted(report.omega), ["A", "B", "C"])
        for value in report.omega.values():
            self.assertAlmostEqual(value, 2.0, places=12)

    def test_measured_below_exact(self):
        """Should never exceed the exact violation."""
        for rho in [ghz_werner(p) for p in np.linspace(0, 1, 21)] + \
                [random_mixed([2, 2, 2], self.rng, rank=int(self.rng.integers(1, 9))) for _ in range(500)]:
            dist_q, dist_r = self.distributions(rho)
            measured = measured_witness_v(dist_q, dist_r, self.pair, rho.signature)
            self.assertLessEqual(measured.v_bound, quantum_witness_v(rho).v_bound + 1e-9)

    def test_term_is_bound_on_conditional(self):
        """Should bound -S(A|BC) from below."""
        rho = random_mixed([2, 2, 2], self.rng, rank=2)
        dist_q, dist_r = self.distributions(rho)
        exact = quantum_witness_v(rho).terms["A|BC"]
        self.assertLessEqual(measured_neg_cond_bound(dist_q, dist_r, self.pair, 0), exact + 1e-9)

    def test_ghz_werner_threshold(self):
        """Should stop witnessing GHZ-Werner below p ≈ 0.9406."""
        def v(p):
            dist_q, dist_r = self.distributions(ghz_werner(p))
            return measured_witness_v(dist_q, dist_r, self.pair).v_bound
        self.assertAlmostEqual(find_threshold(v, 0.5, 1.0, xtol=1e-8), 0.9406, delta=5e-4)

    def test_closed_form_terms(self):
        """Should match the closed-form conditional entropies of GHZ-Werner."""
        p = 0.8
        dist_q, dist_r = self.distributions(ghz_werner(p))
        h_z = (p + 1) / 2 * h2((1 - p) / (2 * (p + 1))) + (1 - p) / 2
        h_x = h2((1 - p) / 2)
        self.assertAlmostEqual(shannon_conditional(dist_q, 0, [1, 2]), h_z, places=10)
        self.assertAlmostEqual(shannon_conditional(dist_r, 0, [1, 2]), h_x, places=10)

    def test_w_werner_never_witnessed(self):
        """Should give no measured violation for W-Werner anywhere on the p grid."""
        for p in np.linspace(0.0, 1.0, 200):
            dist_q, dist_r = self.distributions(w_werner(p))
            self.assertLessEqual(measured_witness_v(dist_q, dist_r, self.pair).v_bound, 0.0)

    def test_uncertainty_relation(self):
        """Should satisfy H(Q) + H(R) >= log2 Ω + S for 500 single qubits and qutrits."""
        for d in (2, 3):
            for _ in range(250):
                rho = random_mixed([d], self.rng)
                pair = MeasurementPair(ObservableBasis(random_unitary(d, self.rng)),
                                       ObservableBasis(random_unitary(d, self.rng)))
                lhs = shannon_entropy(measurement_distribution(rho, pair.q)) + \
                    shannon_entropy(measurement_distribution(rho, pair.r))
                self.assertGreaterEqual(lhs, np.log2(omega(pair)) + vn_entropy(rho) - 1e-9)

    def test_signature_mismatch(self):
        """Should refuse a signature that disagrees with the outcomes."""
        dist_q, dist_r = self.distributions(ghz(3, 2))
        with self.assertRaises(ValidationError):
            measured_witness_v(dist_q, dist_r, self.pair, ghz(3, 3).signature)


class TestPureStateBounds(unittest.TestCase):
    """Unit tests for the pure-state shortcuts."""

    def test_pure_e3f(self):
        """Should give 1 for GHZ3 and h2(1/3) for W3."""
        self.assertAlmostEqual(pure_e3f(ghz(3, 2)), 1.0, places=10)
        self.assertAlmostEqual(pure_e3f(w3()), h2(1 / 3), places=10)

    def test_pure_e3f_requires_pure(self):
        """Should refuse a density matrix."""
        with self.assertRaises(ValidationError):
            pure_e3f(ghz_werner(0.5))

    def test_pure_min_applicable(self):
        """Should be applicable for GHZ3 with a bound of 1."""
        pair = MeasurementPair.from_names()
        report = pure_min_bound(measurement_distribution(ghz(3, 2), pair.q),
                                measurement_distribution(ghz(3, 2), pair.r), pair)
        self.assertTrue(report.applicable)
        self.assertAlmostEqual(report.e3f_lower, 1.0, places=9)

    def test_pure_min_not_applicable(self):
        """Should report a zero bound when a term is not positive."""
        pair = MeasurementPair.from_names()
        rho = maximally_mixed([2, 2, 2])
        report = pure_min_bound(measurement_distribution(rho, pair.q), measurement_distribution(rho, pair.r), pair)
        self.assertFalse(report.applicable)
        self.assertEqual(report.e3f_lower, 0.0)


class TestCountsCsv(unittest.TestCase):
    """Unit tests for reading measured counts."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, text):
        path = os.path.join(self.tmp.name, "counts.csv")
        with open(path, "w") as fp:
            fp.write(text)
        return path

    def ghz_counts(self, total=1000):
        lines = ["setting,outcome_A,outcome_B,outcome_C,count",
                 "Q,0,0,0,%d" % (total // 2), "Q,1,1,1,%d" % (total // 2)]
        for a in (0, 1):
            for b in (0, 1):
                lines.append("R,%d,%d,%d,%d" % (a, b, (a + b) % 2, total // 4))
        return "\n".join(lines) + "\n"

    def test_ghz_counts(self):
        """Should normalize the counts and witness GHZ3."""
        data = read_counts_csv(self.write(self.ghz_counts()), min_total=1000)
        self.assertFalse(data.low_counts)
        pair = MeasurementPair.from_names()
        self.assertAlmostEqual(measured_witness_v(data.dist_q, data.dist_r, pair).v_bound, 1.0, places=9)

    def test_low_counts_flag(self):
        """Should flag and log totals below the threshold."""
        with self.assertLogs("entrobound.witness", level="WARNING"):
            data = read_counts_csv(self.write(self.ghz_counts(100)), min_total=1000)
        self.assertTrue(data.low_counts)

    def test_bad_header(self):
        """Should refuse an unexpected header."""
        with self.assertRaisesRegex(ValidationError, "header"):
            read_counts_csv(self.write("basis,a,b,c,n\nQ,0,0,0,1\n"))

    def test_missing_setting(self):
        """Should require both settings."""
        with self.assertRaisesRegex(ValidationError, "settings"):
            read_counts_csv(self.write("setting,outcome_A,outcome_B,outcome_C,count\nQ,0,0,0,5\n"))

    def test_non_integer_outcome(self):
        """Should refuse non-integer outcomes."""
        text = "setting,outcome_A,outcome_B,outcome_C,count\nQ,0.5,0,0,5\nR,0,0,0,5\n"
        with self.assertRaisesRegex(ValidationError, "integer"):
            read_counts_csv(self.write(text))

    def test_blank_count(self):
        """Should refuse a row whose count cell is empty instead of dropping it."""
        text = self.ghz_counts().replace("Q,1,1,1,500", "Q,1,1,1,")
        with self.assertRaisesRegex(ValidationError, "count"):
            read_counts_csv(self.write(text))

    def test_non_finite_count(self):
        """Should refuse NaN and infinite counts."""
        for bad in ("nan", "inf"):
            text = self.ghz_counts().replace("Q,1,1,1,500", "Q,1,1,1,%s" % bad)
            with self.assertRaises(ValidationError):
                read_counts_csv(self.write(text))

    def test_outcome_beyond_dimension(self):
        """Should refuse an outcome index that does not fit the basis dimension."""
        text = "setting,outcome_A,outcome_B,outcome_C,count\nQ,2,0,0,5\nR,0,0,0,5\n"
        with self.assertRaises(ValidationError):
            read_counts_csv(self.write(text), dim=2)


if __name__ == "__main__":
    unittest.main()
