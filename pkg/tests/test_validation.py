import unittest
from dataclasses import replace
from fractions import Fraction

from donaldson_gluing import config
from donaldson_gluing.gluing import GluedEntry, GluedSeries, Sector, SplitClass, glue
from donaldson_gluing.series import DonaldsonSeries
from donaldson_gluing.validation import SuiteStatus, VerificationError, check_catalog_round_trip, \
    check_characteristic, check_coefficient_match, check_d_zero_congruence, check_entry_adjunction, \
    check_finite_type, check_involution, check_parity, check_relation_polynomial, check_rshift_invariance, \
    interpret_results, random_rationals, validate_exp_polynomial_descriptor, validate_glued_descriptor, \
    validate_lattice_descriptor
from tests.utils import get_entry, get_spec, get_valid_lattice_descriptor


class TestValidation(unittest.TestCase):

    def test_lattice_descriptor(self):
        descriptor = get_valid_lattice_descriptor()

        # This descriptor should be valid.
        validate_lattice_descriptor(descriptor)

        with self.assertRaisesRegex(ValueError, "Received unexpected parameters"):
            descriptor["unexpected"] = "jup"
            validate_lattice_descriptor(descriptor)

        with self.assertRaisesRegex(ValueError, "cannot be empty"):
            validate_lattice_descriptor({})

    def test_glued_descriptor(self):
        descriptor = glue(get_spec("bg:3", "bg:3", 3)).to_json()
        validate_glued_descriptor(descriptor)

        descriptor["g"] = "3"
        with self.assertRaisesRegex(ValueError, "invalid type"):
            validate_glued_descriptor(descriptor)

        descriptor["g"] = 3
        descriptor["pairs"] = [[0, 0, "+"]]
        with self.assertRaisesRegex(ValueError, "Glued pair must be"):
            validate_glued_descriptor(descriptor)

    def test_exp_polynomial_descriptor(self):
        validate_exp_polynomial_descriptor({"marker": "", "terms": []})

        with self.assertRaisesRegex(ValueError, "missing mandatory parameters"):
            validate_exp_polynomial_descriptor({"square": "0"})

    def test_standard_catalog_passes(self):
        for recipe in config.STANDARD_CATALOG:
            entry = get_entry(recipe)

            check_characteristic(entry.series)
            check_involution(entry.series)
            check_entry_adjunction(entry)
            check_finite_type(entry)
            check_parity(entry)
            check_catalog_round_trip(entry)

    def test_relation_polynomial(self):
        for recipe in ("bg:2", "bg:3", "bg:4", "dia2:2:3", "cg:3"):
            check_relation_polynomial(get_entry(recipe))

    def test_involution_failure(self):
        lattice = get_entry("bg:2").lattice
        canonical = lattice.cls("K_Bg")

        with self.assertRaisesRegex(VerificationError, "involution symmetry"):
            check_involution(DonaldsonSeries(lattice, ((canonical, 1), (-canonical, 2))))

    def test_adjunction_failure(self):
        entry = get_entry("bg:2")
        lattice = entry.lattice
        offending = lattice.cls("F") * 2 + lattice.cls("E1") + lattice.cls("E2")
        series = DonaldsonSeries(lattice, ((offending, 1), (-offending, 1)))

        with self.assertRaisesRegex(VerificationError, "adjunction inequality"):
            check_entry_adjunction(replace(entry, series=series))

    def test_round_trip_failure(self):
        entry = get_entry("bg:2")
        canonical = entry.lattice.cls("K_Bg")
        series = DonaldsonSeries(entry.lattice, ((canonical, 1), (-canonical, 1)))

        with self.assertRaisesRegex(VerificationError, "differs from its recipe"):
            check_catalog_round_trip(replace(entry, series=series))

    def test_d_zero_congruence(self):
        for g in range(2, 5):
            check_d_zero_congruence(get_spec("bg:%d" % g, "bg:%d" % g, g))
        check_d_zero_congruence(get_spec("K3", "K3", 1))

    def test_random_rationals(self):
        samples = random_rationals()

        self.assertEqual(len(samples), config.N_RSHIFT_SAMPLES)
        self.assertEqual(samples, random_rationals())
        self.assertNotEqual(random_rationals(10, seed=1), random_rationals(10, seed=2))
        self.assertTrue(all(isinstance(r, Fraction) for r in samples))
        self.assertTrue(all(abs(r) <= config.RSHIFT_NUMERATOR_RANGE[1] for r in samples))

    def test_rshift_failure(self):
        spec = get_spec("bg:2", "bg:2", 2)
        lattice = spec.left.lattice
        e1, e2 = lattice.cls("E1"), lattice.cls("E2")
        classes = spec.left.series.classes()

        # A PLUS entry pairing K.Sigma = 2 against L.Sigma = 0 is not shift invariant.
        j, k = classes.index(e1 + e2), classes.index(e1 - e2)
        broken = GluedSeries(spec, (GluedEntry(j, k, Sector.PLUS, Fraction(1)),))
        fibre = lattice.cls("T1")

        with self.assertRaisesRegex(VerificationError, "rshift invariance"):
            check_rshift_invariance(broken, SplitClass.for_spec(spec, fibre, fibre, 1), [Fraction(1, 2)])

    def test_coefficient_match_failure(self):
        glued = glue(get_spec("bg:3", "bg:3", 3))
        check_coefficient_match(glued)

        first = glued.entries[0]
        tampered = replace(glued, entries=(replace(first, coefficient=first.coefficient * 2),) + glued.entries[1:])

        with self.assertRaisesRegex(VerificationError, "coefficient matching"):
            check_coefficient_match(tampered)

    def test_interpret_results(self):
        passed = (SuiteStatus.PASSED, "")
        failed = (SuiteStatus.FAILED, "boom")
        error = (SuiteStatus.ERROR, "bad input")

        self.assertEqual(interpret_results({"a": passed, "b": passed}), SuiteStatus.PASSED)
        self.assertEqual(interpret_results({"a": passed, "b": error}), SuiteStatus.ERROR)
        self.assertEqual(interpret_results({"a": error, "b": failed}), SuiteStatus.FAILED)
        self.assertEqual(interpret_results({}), SuiteStatus.SKIPPED)
