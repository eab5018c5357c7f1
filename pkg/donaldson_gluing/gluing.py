"""Invariants of fibre sums X = X1 #_Sigma X2 evaluated on classes that split along the gluing region."""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from logging import getLogger

from donaldson_gluing.arithmetic import format_rational, parse_rational, real_part
from donaldson_gluing.exp_polynomial import ExpPolynomial, QuadMarker
from donaldson_gluing.lattice import HClass, d_zero_of_square
from donaldson_gluing.series import twist

_logger = getLogger(__name__)


class Sector(Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"


_SECTOR_SIGN = {Sector.PLUS: 1, Sector.MINUS: -1, Sector.ZERO: 0}


@dataclass(frozen=True)
class GluingSide:
    entry: object
    surface: object
    w: HClass

    @property
    def series(self):
        return self.entry.series

    @property
    def lattice(self):
        return self.entry.lattice

    @property
    def w_square(self):
        return int(self.w.square())

    def twisted_entries(self):
        return twist(self.series, self.w)

    def d_zero(self):
        return d_zero_of_square(self.w.square(), self.series.b_one, self.series.b_plus)

    @staticmethod
    def from_entry(entry, surface_label=None, w=None):
        surface = entry.surface(surface_label)
        return GluingSide(entry, surface, w if w is not None else entry.w_for(surface.label))


@dataclass(frozen=True)
class GluingSpec:
    """Two sides glued along genus-g surfaces; ``w_square`` None means w^2 = w1^2 + w2^2."""

    left: GluingSide
    right: GluingSide
    genus: int
    w_square: int = None

    def __post_init__(self):
        if self.w_square is None:
            object.__setattr__(self, "w_square", self.left.w_square + self.right.w_square)

        from donaldson_gluing.validation import validate_gluing_spec
        validate_gluing_spec(self)

    @property
    def delta(self):
        return (self.w_square - self.left.w_square - self.right.w_square) // 2

    @property
    def epsilon(self):
        return -1 if ((self.genus - 1) * self.delta) % 2 else 1

    @property
    def b_plus(self):
        return self.left.series.b_plus + self.right.series.b_plus + 2 * self.genus - 1

    @property
    def b_one(self):
        return 0

    @property
    def w_sigma(self):
        return self.left.w.dot(self.left.surface.cls)

    def d_zero(self):
        return d_zero_of_square(self.w_square, self.b_one, self.b_plus)

    def d_zero_congruence_holds(self):
        return (self.d_zero() - self.left.d_zero() - self.right.d_zero() - (self.genus - 1)) % 2 == 0

    def swapped(self):
        return GluingSpec(self.right, self.left, self.genus, self.w_square)

    def with_w_square(self, w_square):
        return GluingSpec(self.left, self.right, self.genus, w_square)


@dataclass(frozen=True)
class SplitClass:
    """A class D on the glued manifold given by D1, D2 with D1.Sigma1 = D2.Sigma2 = Sigma.D."""

    d1: HClass
    d2: HClass
    sigma_pairing: Fraction
    sigma1: HClass
    sigma2: HClass

    def __post_init__(self):
        object.__setattr__(self, "sigma_pairing", Fraction(self.sigma_pairing))

        if self.d1.dot(self.sigma1) != self.sigma_pairing or self.d2.dot(self.sigma2) != self.sigma_pairing:
            raise ValueError("Split class parts must both pair to Sigma.D = %s with Sigma; got D1.Sigma1 = %s, "
                             "D2.Sigma2 = %s." % (self.sigma_pairing, self.d1.dot(self.sigma1),
                                                  self.d2.dot(self.sigma2)))

    @property
    def square(self):
        return self.d1.square() + self.d2.square()

    @staticmethod
    def for_spec(spec, d1, d2, sigma_pairing=None):
        if sigma_pairing is None:
            sigma_pairing = d1.dot(spec.left.surface.cls)
        return SplitClass(d1, d2, sigma_pairing, spec.left.surface.cls, spec.right.surface.cls)


def rshift(d, r):
    """Another admissible splitting of the same class: (D1 + r Sigma, D2 - r Sigma)."""
    r = Fraction(r)
    return SplitClass(d.d1 + d.sigma1 * r, d.d2 - d.sigma2 * r, d.sigma_pairing, d.sigma1, d.sigma2)


@dataclass(frozen=True)
class GluedEntry:
    j: int
    k: int
    sector: Sector
    coefficient: Fraction


@dataclass(frozen=True)
class GluedSeries:
    spec: GluingSpec
    entries: tuple = ()
    simple_type: bool = True
    # Exponents carry the +-2 Sigma.D shift of the proven formula.
    sigma_shift: bool = True
    experimental: bool = False

    def is_empty(self):
        return not self.entries

    def left_class(self, entry):
        return self.spec.left.series.entries[entry.j][0]

    def right_class(self, entry):
        return self.spec.right.series.entries[entry.k][0]

    def to_json(self):
        spec = self.spec
        return {"left": spec.left.entry.recipe,
                "right": spec.right.entry.recipe,
                "left_surface": spec.left.surface.label,
                "right_surface": spec.right.surface.label,
                "w1": spec.left.w.to_list(),
                "w2": spec.right.w.to_list(),
                "g": spec.genus,
                "w1_sq": spec.left.w_square,
                "w2_sq": spec.right.w_square,
                "w_sq": spec.w_square,
                "sigma_shift": self.sigma_shift,
                "experimental": self.experimental,
                "pairs": [[e.j, e.k, e.sector.value, format_rational(e.coefficient)] for e in self.entries]}

    @staticmethod
    def from_json(data, resolve):
        """Rebuild from JSON; ``resolve`` maps an entry reference to a CatalogEntry."""
        from donaldson_gluing.validation import validate_glued_descriptor
        validate_glued_descriptor(data)

        sides = []
        for entry_key, surface_key, w_key in (("left", "left_surface", "w1"), ("right", "right_surface", "w2")):
            entry = resolve(data[entry_key])
            w = entry.lattice.vector([parse_rational(c) for c in data[w_key]])
            sides.append(GluingSide.from_entry(entry, data[surface_key], w))

        spec = GluingSpec(sides[0], sides[1], data["g"], data["w_sq"])
        entries = tuple(GluedEntry(j, k, Sector(sector), parse_rational(c)) for j, k, sector, c in data["pairs"])

        return GluedSeries(spec, entries, True, data["sigma_shift"], data["experimental"])


def _pairings(side):
    sigma = side.surface.cls
    return [(index, k, a, k.dot(sigma)) for index, (k, a) in enumerate(side.twisted_entries())]


def _attaining(pairings, value):
    return [(index, a) for index, _, a, k_sigma in pairings if k_sigma == value]


def _glue_attaining(spec, plus_factor, minus_factor):
    top = 2 * spec.genus - 2
    left, right = _pairings(spec.left), _pairings(spec.right)
    entries = []

    for sector, value, factor in ((Sector.PLUS, top, plus_factor), (Sector.MINUS, -top, minus_factor)):
        right_attaining = _attaining(right, value)
        for j, a in _attaining(left, value):
            entries.extend(GluedEntry(j, k, sector, spec.epsilon * factor * a * b) for k, b in right_attaining)

    entries.sort(key=lambda e: (e.j, e.k))
    return tuple(entries)


def glue(spec):
    g = spec.genus
    if g == 1:
        raise ValueError("Genus-1 gluing has its own three-sector formula; use glue_torus.")
    if g < 1:
        raise ValueError("Gluing needs genus >= 2, got %d." % g)

    factor = Fraction(2) ** (7 * g - 9)
    entries = _glue_attaining(spec, -factor, (-1) ** g * factor)

    _logger.debug("Glued '%s' and '%s' along genus %d: %d entries (epsilon=%d).",
                  spec.left.entry.name, spec.right.entry.name, g, len(entries), spec.epsilon)

    return GluedSeries(spec, entries)


def glue_torus(spec):
    if spec.genus != 1:
        raise ValueError("glue_torus needs a genus-1 gluing, got genus %d." % spec.genus)

    left = _pairings(spec.left)
    right = _pairings(spec.right)

    for side, pairings in (("left", left), ("right", right)):
        for _, k, _, pairing in pairings:
            if pairing != 0:
                raise ValueError("Torus gluing needs K.Sigma = 0 for every basic class; %s class %s pairs to %s." %
                                 (side, k, pairing))

    entries = []
    for j, _, a, _ in left:
        for k, _, b, _ in right:
            product = a * b
            entries.append(GluedEntry(j, k, Sector.PLUS, Fraction(-1, 4) * product))
            entries.append(GluedEntry(j, k, Sector.MINUS, Fraction(-1, 4) * product))
            entries.append(GluedEntry(j, k, Sector.ZERO, Fraction(-1, 2) * product))

    return GluedSeries(spec, tuple(entries))


def glue_conjectural(spec):
    """Experimental: gluing from the series of the stabilized sides X_i #_Sigma B_g."""
    g = spec.genus
    if g < 2:
        raise ValueError("Conjectural gluing needs genus >= 2, got %d." % g)

    factor = Fraction(2) ** (5 - 3 * g)
    entries = _glue_attaining(spec, -factor, (-1) ** g * factor)

    _logger.warning("Conjectural gluing formula used for '%s' and '%s'; result is experimental.",
                    spec.left.entry.name, spec.right.entry.name)

    return GluedSeries(spec, entries, True, sigma_shift=False, experimental=True)


def eval_glued(glued, d):
    """e^{Q(tD)/2} sum c e^{(K_j.D1 + L_k.D2 +- 2 Sigma.D) t}."""
    spec = glued.spec
    if d.d1.lattice.name != spec.left.lattice.name or d.d2.lattice.name != spec.right.lattice.name:
        raise ValueError("Split class lives on ('%s', '%s'), gluing on ('%s', '%s')." %
                         (d.d1.lattice.name, d.d2.lattice.name, spec.left.lattice.name, spec.right.lattice.name))

    terms = []
    for entry in glued.entries:
        exponent = glued.left_class(entry).dot(d.d1) + glued.right_class(entry).dot(d.d2)
        if glued.sigma_shift:
            exponent += 2 * _SECTOR_SIGN[entry.sector] * d.sigma_pairing
        terms.append((exponent, entry.coefficient))

    return ExpPolynomial(tuple(terms), QuadMarker.PLUS, d.square)


def glued_pairings_with_surface(glued):
    """Values kappa.Sigma of the glued classes, read off at D = (Sigma1, 0)."""
    spec = glued.spec
    d = SplitClass.for_spec(spec, spec.left.surface.cls, spec.right.lattice.zero(), 0)
    return sorted({int(real_part(e)) for e in eval_glued(glued, d).exponents()})


def _untwist_sign(exponent):
    exponent = Fraction(exponent)
    if exponent.denominator != 1 or exponent.numerator % 2:
        raise ValueError("Twist exponent %s is not even." % exponent)
    return -1 if (exponent.numerator // 2) % 2 else 1


def coefficient_match(glued, left_class, right_class):
    """Grouped untwisted glued coefficient for (K, L) and the product predicted from the parents."""
    spec = glued.spec
    g = spec.genus
    if g < 2:
        raise ValueError("Coefficient matching needs genus >= 2, got %d." % g)
    if spec.delta % 2:
        raise ValueError("Coefficient matching needs w^2 = w1^2 + w2^2 (mod 4); got w^2=%d, w1^2=%d, w2^2=%d." %
                         (spec.w_square, spec.left.w_square, spec.right.w_square))

    top = 2 * g - 2
    left_pairing = left_class.dot(spec.left.surface.cls)
    right_pairing = right_class.dot(spec.right.surface.cls)

    if left_pairing == right_pairing == top:
        sector = Sector.PLUS
    elif left_pairing == right_pairing == -top:
        sector = Sector.MINUS
    else:
        return Fraction(0), Fraction(0)

    sign = _SECTOR_SIGN[sector]
    w1, w2 = spec.left.w, spec.right.w

    grouped = Fraction(0)
    for entry in glued.entries:
        if entry.sector != sector:
            continue
        if glued.left_class(entry) != left_class or glued.right_class(entry) != right_class:
            continue

        kappa_w = left_class.dot(w1) + right_class.dot(w2) + 2 * sign * spec.w_sigma
        grouped += entry.coefficient * _untwist_sign(kappa_w + spec.w_square)

    a = spec.left.series.untwisted().coefficient(left_class)
    b = spec.right.series.untwisted().coefficient(right_class)
    predicted = Fraction(sign) ** (g - 1) * Fraction(2) ** (7 * g - 9) * a * b

    return grouped, predicted


def coefficient_match_all(glued):
    """coefficient_match over every pair of parent basic classes."""
    results = []
    for left_class in glued.spec.left.series.classes():
        for right_class in glued.spec.right.series.classes():
            grouped, predicted = coefficient_match(glued, left_class, right_class)
            results.append((left_class, right_class, grouped, predicted))
    return results
