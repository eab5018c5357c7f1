from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from logging import getLogger

from sympy import ImmutableMatrix, Matrix

from donaldson_gluing.arithmetic import format_rational, parse_rational

_logger = getLogger(__name__)


class LatticeModel(Enum):
    FULL = "full"
    PARTIAL = "partial"


def _as_key(gram):
    return tuple(tuple(row) for row in gram)


@lru_cache(maxsize=None)
def gram_form(gram):
    """The intersection form of a (hashable) Gram tuple as a sympy Matrix."""
    return ImmutableMatrix([list(row) for row in gram])


def _sign_changes(coefficients):
    signs = [c > 0 for c in coefficients if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@lru_cache(maxsize=None)
def _signature(gram):
    if not gram:
        return 0, 0, 0

    # Real-rooted characteristic polynomial: Descartes' sign rule counts roots exactly.
    coefficients = gram_form(gram).charpoly().all_coeffs()
    degree = len(coefficients) - 1
    null = len(coefficients) - 1 - max(i for i, c in enumerate(coefficients) if c != 0)

    positive = _sign_changes(coefficients)
    negative = _sign_changes([c * (-1) ** (degree - i) for i, c in enumerate(coefficients)])
    return positive, negative, null


def signature_counts(gram):
    """(positive, negative, null) directions of a symmetric integral form."""
    return _signature(_as_key(gram))


@dataclass(frozen=True)
class Lattice:
    """Working model of H^2(X; Z): intersection form plus b+/b1 metadata."""

    name: str
    gram: tuple
    b_plus: int
    b_one: int = 0
    classes: tuple = ()
    model: LatticeModel = LatticeModel.PARTIAL
    carries_series: bool = True

    def __post_init__(self):
        object.__setattr__(self, "gram", tuple(tuple(int(x) for x in row) for row in self.gram))
        object.__setattr__(self, "classes", tuple((label, tuple(Fraction(c) for c in coords))
                                                  for label, coords in self.classes))
        validate_lattice(self)

    @property
    def rank(self):
        return len(self.gram)

    @property
    def form(self):
        return gram_form(self.gram)

    def labels(self):
        return [label for label, _ in self.classes]

    def cls(self, label):
        for name, coords in self.classes:
            if name == label:
                return HClass(self, coords)

        raise ValueError("Lattice '%s' has no class named '%s'. Available: %s" % (self.name, label, self.labels()))

    def named_classes(self):
        return [(label, HClass(self, coords)) for label, coords in self.classes]

    def zero(self):
        return HClass(self, (Fraction(0),) * self.rank)

    def vector(self, coords):
        return HClass(self, coords)

    def with_classes(self, extra_classes):
        known = dict(self.classes)
        for label, cls in extra_classes:
            known[label] = cls.coords if isinstance(cls, HClass) else cls
        return Lattice(self.name, self.gram, self.b_plus, self.b_one, tuple(known.items()),
                       self.model, self.carries_series)

    def signature(self):
        return signature_counts(self.gram)

    def to_descriptor(self):
        return {"name": self.name,
                "rank": self.rank,
                "gram": [list(row) for row in self.gram],
                "b_plus": self.b_plus,
                "b_one": self.b_one,
                "classes": {label: [_format_coordinate(c) for c in coords] for label, coords in self.classes},
                "model": self.model.value}

    @staticmethod
    def from_descriptor(descriptor):
        from donaldson_gluing.validation import validate_lattice_descriptor
        validate_lattice_descriptor(descriptor)

        classes = tuple((label, tuple(parse_rational(c) for c in coords))
                        for label, coords in descriptor["classes"].items())

        return Lattice(descriptor["name"], descriptor["gram"], descriptor["b_plus"], descriptor["b_one"],
                       classes, LatticeModel(descriptor["model"]))


def _format_coordinate(value):
    return int(value) if value.denominator == 1 else format_rational(value)


def validate_lattice(lattice):
    n = lattice.rank

    if any(len(row) != n for row in lattice.gram):
        raise ValueError("Gram matrix of '%s' is not square." % lattice.name)

    if not lattice.form.is_symmetric():
        raise ValueError("Gram matrix of '%s' is not symmetric." % lattice.name)

    if lattice.b_plus < 0 or lattice.b_one < 0:
        raise ValueError("Lattice '%s' has negative Betti numbers b_plus=%d b_one=%d." %
                         (lattice.name, lattice.b_plus, lattice.b_one))

    for label, coords in lattice.classes:
        if len(coords) != n:
            raise ValueError("Class '%s' of lattice '%s' has %d coordinates, expected %d." %
                             (label, lattice.name, len(coords), n))

    positive, _, _ = signature_counts(lattice.gram)
    if lattice.model == LatticeModel.FULL and positive != lattice.b_plus:
        raise ValueError("Full-rank lattice '%s' declares b_plus=%d but its form has %d positive directions." %
                         (lattice.name, lattice.b_plus, positive))

    if lattice.model == LatticeModel.PARTIAL and positive > lattice.b_plus:
        raise ValueError("Modeled block of '%s' has %d positive directions, more than declared b_plus=%d." %
                         (lattice.name, positive, lattice.b_plus))

    if lattice.carries_series and (lattice.b_plus - lattice.b_one) % 2 == 0:
        raise ValueError("Lattice '%s' carries a Donaldson series but b_plus - b_one = %d is even." %
                         (lattice.name, lattice.b_plus - lattice.b_one))


@dataclass(frozen=True)
class HClass:
    """A (co)homology class in lattice coordinates; rational coordinates allowed."""

    lattice: Lattice = field(repr=False)
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise ValueError("Class has %d coordinates but lattice '%s' has rank %d." %
                             (len(coords), self.lattice.name, self.lattice.rank))
        object.__setattr__(self, "coords", coords)

    @property
    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def _check_same_lattice(self, other):
        if self.lattice.name != other.lattice.name or self.lattice.gram != other.lattice.gram:
            raise ValueError("Classes live on different lattices '%s' and '%s'." %
                             (self.lattice.name, other.lattice.name))

    def __add__(self, other):
        self._check_same_lattice(other)
        return HClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check_same_lattice(other)
        return HClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return HClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return HClass(self.lattice, tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HClass):
            return NotImplemented
        return self.lattice.name == other.lattice.name and self.coords == other.coords

    def __hash__(self):
        return hash((self.lattice.name, self.coords))

    def dot(self, other):
        return pairing(self, other)

    def square(self):
        return pairing(self, self)

    def is_odd(self):
        return self.is_integral and any(c.numerator % 2 for c in self.coords)

    def embed(self, lattice):
        """Same coordinates on a lattice extending this one, padded with zeros."""
        if lattice.rank < self.lattice.rank:
            raise ValueError("Cannot embed a rank-%d class into rank-%d lattice '%s'." %
                             (self.lattice.rank, lattice.rank, lattice.name))
        return HClass(lattice, self.coords + (Fraction(0),) * (lattice.rank - self.lattice.rank))

    def to_list(self):
        return [_format_coordinate(c) for c in self.coords]

    def sort_key(self):
        return self.coords

    def __str__(self):
        return "(%s)" % ", ".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class MarkedSurface:
    """An embedded surface: integral odd class of square zero and its genus."""

    cls: HClass
    genus: int
    label: str = "Sigma"

    def __post_init__(self):
        if not self.cls.is_integral:
            raise ValueError("Surface '%s' must represent an integral class." % self.label)

        if self.genus < 1:
            raise ValueError("Surface '%s' has genus %d; genus must be at least 1." % (self.label, self.genus))

        if self.cls.square() != 0:
            raise ValueError("Surface '%s' has self-intersection %s, expected 0." % (self.label, self.cls.square()))

        if not self.cls.is_odd():
            raise ValueError("Surface '%s' is not odd: its class reduces to zero modulo 2." % self.label)

    @property
    def lattice(self):
        return self.cls.lattice

    def embed(self, lattice):
        return MarkedSurface(self.cls.embed(lattice), self.genus, self.label)


@lru_cache(maxsize=None)
def _pair(gram, u, v):
    value = (Matrix([list(u)]) * gram_form(gram) * Matrix(list(v)))[0, 0]
    return Fraction(int(value.p), int(value.q))


def pairing(u, v):
    u._check_same_lattice(v)
    return _pair(u.lattice.gram, u.coords, v.coords)


@lru_cache(maxsize=None)
def _characteristic(gram, coords):
    form = gram_form(gram)
    products = form * Matrix(list(coords))
    return all((int(products[i]) - int(form[i, i])) % 2 == 0 for i in range(len(gram)))


def is_characteristic(k):
    """k.v = v.v (mod 2) for every basis vector of the modeled lattice."""
    if not k.is_integral:
        raise ValueError("Characteristic test needs an integral class, got %s." % k)

    return _characteristic(k.lattice.gram, k.coords)


def is_allowable(w, surface):
    if not w.is_integral:
        raise ValueError("w must be integral, got %s." % w)

    sigma = surface.cls
    return pairing(w, sigma) % 2 == 1 and pairing(sigma, sigma) == 0


def d_zero_of_square(w_square, b_one, b_plus):
    total = 1 - b_one + b_plus
    if total % 2 != 0:
        raise ValueError("d0 is not an integer: 1 - b_one + b_plus = %d is odd (b_one=%d, b_plus=%d)." %
                         (total, b_one, b_plus))

    w_square = Fraction(w_square)
    if w_square.denominator != 1:
        raise ValueError("w^2 = %s is not an integer." % w_square)

    return -int(w_square) - 3 * total // 2


def d_zero(w, b_one, b_plus):
    """d0 = -w^2 - 3/2 (1 - b1 + b+)."""
    return d_zero_of_square(w.square(), b_one, b_plus)
