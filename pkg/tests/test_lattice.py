import unittest
from fractions import Fraction

from sympy import Matrix, Rational

from donaldson_gluing.lattice import HClass, Lattice, LatticeModel, MarkedSurface, d_zero, \
    d_zero_of_square, is_allowable, is_characteristic, signature_counts
from tests.utils import get_entry, get_valid_lattice_descriptor


class TestLattice(unittest.TestCase):

    def test_signature(self):
        self.assertEqual(signature_counts([[0, 1], [1, 0]]), (1, 1, 0))
        self.assertEqual(signature_counts([[1, 0, 0], [0, -1, 0], [0, 0, -1]]), (1, 2, 0))
        self.assertEqual(signature_counts([[0, 0], [0, 0]]), (0, 0, 2))
        self.assertEqual(signature_counts([[0, 1], [1, -3]]), (1, 1, 0))
        self.assertEqual(signature_counts([[1, 1], [1, 1]]), (1, 0, 1))
        self.assertEqual(signature_counts([]), (0, 0, 0))

        hyperbolic_plus_three = [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, -1, 0, 0], [0, 0, 0, -1, 0],
                                 [0, 0, 0, 0, -1]]
        self.assertEqual(signature_counts(hyperbolic_plus_three), (1, 4, 0))

    def test_pairing_uses_the_form(self):
        lattice = Lattice("hyperbolic", ((0, 1), (1, 0)), 1, 0, model=LatticeModel.FULL)
        u = lattice.vector((2, Fraction(1, 3)))
        v = lattice.vector((-1, 5))

        self.assertEqual(lattice.form, Matrix([[0, 1], [1, 0]]))
        self.assertEqual(u.dot(v), Fraction(29, 3))
        self.assertEqual((Matrix([[2, Rational(1, 3)]]) * lattice.form * Matrix([-1, 5]))[0, 0], Rational(29, 3))
        self.assertEqual(u.square(), Fraction(4, 3))

    def test_lattice_validation(self):
        Lattice("hyperbolic", ((0, 1), (1, 0)), 1, 0, model=LatticeModel.FULL)

        with self.assertRaisesRegex(ValueError, "not symmetric"):
            Lattice("bad", ((0, 1), (2, 0)), 1)

        with self.assertRaisesRegex(ValueError, "not square"):
            Lattice("bad", ((0, 1), (1,)), 1)

        with self.assertRaisesRegex(ValueError, "positive directions"):
            Lattice("bad", ((0, 1), (1, 0)), 3, 0, model=LatticeModel.FULL)

        with self.assertRaisesRegex(ValueError, "more than declared"):
            Lattice("bad", ((1, 0), (0, 1)), 1)

        with self.assertRaisesRegex(ValueError, "b_plus - b_one"):
            Lattice("bad", ((0, 1), (1, 0)), 2)

        # Even b_plus - b_one is fine when no series lives on the lattice.
        Lattice("plane", ((0, 1), (1, 0)), 2, carries_series=False)

    def test_pairing_on_Bg(self):
        lattice = get_entry("bg:2").lattice
        self.assertEqual(lattice.zero().dot(lattice.cls("sigma")), 0)
        self.assertEqual(lattice.cls("F").dot(lattice.cls("sigma")), 1)
        self.assertEqual(lattice.cls("sigma").square(), -2)
        self.assertEqual(lattice.cls("E1").square(), -1)

        for g in range(2, 7):
            sigma_g = get_entry("bg:%d" % g).lattice.cls("Sigma_g")
            self.assertEqual(sigma_g.square(), 0)

    def test_class_arithmetic(self):
        lattice = Lattice.from_descriptor(get_valid_lattice_descriptor())
        s, t = lattice.cls("S"), lattice.cls("T")

        self.assertEqual(s + t, lattice.vector([1, 1]))
        self.assertEqual(2 * t - s, lattice.vector([-1, 2]))
        self.assertEqual(-(s * Fraction(1, 2)), lattice.vector([Fraction(-1, 2), 0]))
        self.assertFalse((s * Fraction(1, 2)).is_integral)
        self.assertEqual(s.dot(t), 1)
        self.assertEqual((s + t).square(), 0)

        other = Lattice("other", ((0, 1), (1, 0)), 1)
        with self.assertRaisesRegex(ValueError, "different lattices"):
            s.dot(HClass(other, (1, 0)))

        with self.assertRaisesRegex(ValueError, "rank"):
            lattice.vector([1, 2, 3])

    def test_embed(self):
        k3 = get_entry("K3")
        blown_up = get_entry("bg:2")

        embedded = k3.lattice.cls("F").embed(blown_up.lattice)
        self.assertEqual(embedded.coords, (1, 0, 0, 0))
        self.assertEqual(embedded.square(), 0)

        with self.assertRaisesRegex(ValueError, "Cannot embed"):
            blown_up.lattice.cls("E1").embed(k3.lattice)

    def test_is_characteristic(self):
        k3 = Lattice.from_descriptor(get_valid_lattice_descriptor())
        self.assertTrue(is_characteristic(k3.zero()))
        self.assertFalse(is_characteristic(k3.cls("S")))

        blow_up_block = Lattice("CP2bar", ((-1,),), 3, 0, (("E", (1,)),))
        self.assertTrue(is_characteristic(blow_up_block.cls("E")))
        self.assertFalse(is_characteristic(blow_up_block.zero()))

        b2 = get_entry("bg:2").lattice
        self.assertFalse(is_characteristic(b2.cls("F")))

        with self.assertRaisesRegex(ValueError, "integral"):
            is_characteristic(k3.cls("S") * Fraction(1, 2))

    def test_is_allowable(self):
        for g in range(2, 5):
            entry = get_entry("bg:%d" % g)
            surface = entry.surface("Sigma_g")
            lattice = entry.lattice

            self.assertTrue(is_allowable(lattice.cls("T1"), surface))
            self.assertFalse(is_allowable(lattice.zero(), surface))
            self.assertFalse(is_allowable(surface.cls, surface))

    def test_marked_surface(self):
        lattice = get_entry("elliptic:3").lattice

        surface = MarkedSurface(lattice.cls("F"), 1, "F")
        self.assertEqual(surface.lattice, lattice)

        with self.assertRaisesRegex(ValueError, "not odd"):
            MarkedSurface(lattice.cls("F") * 2, 1)

        with self.assertRaisesRegex(ValueError, "self-intersection"):
            MarkedSurface(lattice.cls("sigma"), 1)

        with self.assertRaisesRegex(ValueError, "genus"):
            MarkedSurface(lattice.cls("F"), 0)

        with self.assertRaisesRegex(ValueError, "integral"):
            MarkedSurface(lattice.cls("F") * Fraction(1, 3), 1)

    def test_d_zero(self):
        self.assertEqual(d_zero_of_square(0, 0, 3), -6)
        self.assertEqual(d_zero_of_square(-2, 0, 3), -4)

        with self.assertRaisesRegex(ValueError, "not an integer"):
            d_zero_of_square(0, 0, 2)

        k3 = Lattice.from_descriptor(get_valid_lattice_descriptor())
        self.assertEqual(d_zero(k3.cls("S"), 0, 3), -4)
        self.assertEqual(d_zero(k3.cls("T"), 0, 3), -6)

    def test_descriptor(self):
        descriptor = get_valid_lattice_descriptor()
        lattice = Lattice.from_descriptor(descriptor)

        self.assertEqual(lattice.to_descriptor(), descriptor)
        self.assertEqual(lattice.rank, 2)
        self.assertEqual(lattice.labels(), ["S", "T"])

        descriptor["unexpected"] = "yes"
        with self.assertRaisesRegex(ValueError, "Received unexpected parameters"):
            Lattice.from_descriptor(descriptor)

        descriptor = get_valid_lattice_descriptor()
        del descriptor["gram"]
        with self.assertRaisesRegex(ValueError, "missing mandatory parameters"):
            Lattice.from_descriptor(descriptor)

        descriptor = get_valid_lattice_descriptor()
        descriptor["rank"] = "2"
        with self.assertRaisesRegex(ValueError, "invalid type"):
            Lattice.from_descriptor(descriptor)

        descriptor = get_valid_lattice_descriptor()
        descriptor["rank"] = 3
        with self.assertRaisesRegex(ValueError, "declares rank"):
            Lattice.from_descriptor(descriptor)

    def test_with_classes(self):
        lattice = Lattice.from_descriptor(get_valid_lattice_descriptor())
        extended = lattice.with_classes([("Sigma", lattice.cls("S") + lattice.cls("T"))])

        self.assertEqual(extended.labels(), ["S", "T", "Sigma"])
        self.assertEqual(extended.cls("Sigma").square(), 0)

        with self.assertRaisesRegex(ValueError, "no class named"):
            lattice.cls("Sigma")
