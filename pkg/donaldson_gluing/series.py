"""Donaldson series of simple-type manifolds and the (w, Sigma) split calculus."""
from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger

from sympy import Poly, Rational, expand, symbols
from sympy.polys.domains import QQ

from donaldson_gluing import config
from donaldson_gluing.arithmetic import GAUSSIAN_ZERO, format_rational, gaussian, i_power, parse_rational, to_fraction
from donaldson_gluing.exp_polynomial import ExpPolynomial, QuadMarker
from donaldson_gluing.lattice import HClass, d_zero_of_square, is_allowable, is_characteristic

_logger = getLogger(__name__)

SIGMA, X = symbols("Sigma x")


def _class_key(entry):
    return entry[0].sort_key()


@dataclass(frozen=True)
class DonaldsonSeries:
    """e^{Q/2} * sum a_j e^{K_j}, stored as (K_j, a_j) pairs.

    ``w`` is the class the stored coefficients are twisted by (None for the
    untwisted a_j). ``exceptional_class`` is the sum of the blow-up classes
    folded in with a sinh E factor; it shifts the parity bookkeeping like a
    twist would.
    """

    lattice: object
    entries: tuple = ()
    w: HClass = None
    exceptional_class: HClass = None
    simple_type: bool = True

    def __post_init__(self):
        entries = tuple(sorted(((k, to_fraction(a)) for k, a in self.entries if a != 0), key=_class_key))
        object.__setattr__(self, "entries", entries)

        if self.exceptional_class is None:
            object.__setattr__(self, "exceptional_class", self.lattice.zero())

        validate_series(self)

    @property
    def b_plus(self):
        return self.lattice.b_plus

    @property
    def b_one(self):
        return self.lattice.b_one

    def is_zero(self):
        return not self.entries

    def classes(self):
        return [k for k, _ in self.entries]

    def coefficient(self, k):
        for cls, a in self.entries:
            if cls == k:
                return a
        return Fraction(0)

    def reference_twist(self):
        return self.w if self.w is not None else self.lattice.zero()

    def effective_d_zero(self, w=None):
        """d0 governing parity of the series twisted by w (the stored twist when w is None)."""
        w = self.reference_twist() if w is None else w
        return d_zero_of_square((w + self.exceptional_class).square(), self.b_one, self.b_plus)

    def with_entries(self, entries, w=None):
        return DonaldsonSeries(self.lattice, tuple(entries), w, self.exceptional_class, self.simple_type)

    def untwisted(self):
        if self.w is None:
            return self
        return self.with_entries(twist(self, self.lattice.zero()), None)

    def twisted(self, w):
        return self.with_entries(twist(self, w), w)

    def to_json(self):
        return {"lattice": self.lattice.name,
                "entries": [{"k": k.to_list(), "a": format_rational(a)} for k, a in self.entries],
                "w": self.w.to_list() if self.w is not None else None,
                "exceptional_class": self.exceptional_class.to_list(),
                "simple_type": self.simple_type}

    @staticmethod
    def from_json(data, lattice):
        from donaldson_gluing.validation import validate_series_descriptor
        validate_series_descriptor(data, lattice)

        entries = tuple((lattice.vector([parse_rational(c) for c in entry["k"]]), parse_rational(entry["a"]))
                        for entry in data["entries"])
        w = lattice.vector([parse_rational(c) for c in data["w"]]) if data.get("w") is not None else None
        exceptional = data.get("exceptional_class")
        exceptional = lattice.vector([parse_rational(c) for c in exceptional]) if exceptional is not None else None

        return DonaldsonSeries(lattice, entries, w, exceptional, data.get("simple_type", True))


def validate_series(series):
    seen = set()
    for k, _ in series.entries:
        if k.lattice.name != series.lattice.name:
            raise ValueError("Basic class %s does not live on lattice '%s'." % (k, series.lattice.name))

        if not k.is_integral:
            raise ValueError("Basic class %s is not integral." % k)

        if k in seen:
            raise ValueError("Basic class %s appears more than once." % k)
        seen.add(k)

        if not is_characteristic(k):
            raise ValueError("Basic class %s is not characteristic on lattice '%s'." % (k, series.lattice.name))

    if series.entries and (series.b_plus - series.b_one) % 2 == 0:
        raise ValueError("Series on '%s' needs b_plus - b_one odd, got b_plus=%d b_one=%d." %
                         (series.lattice.name, series.b_plus, series.b_one))


def _twist_sign(k, w):
    exponent = k.dot(w) + w.square()
    if exponent.denominator != 1 or exponent.numerator % 2 != 0:
        raise ValueError("K.w + w^2 = %s is odd for K=%s, w=%s: the class is not characteristic." % (exponent, k, w))
    return -1 if (exponent.numerator // 2) % 2 else 1


def twist(series, w):
    """Coefficients a_{j,w} = (-1)^{(K_j.w + w^2)/2} a_j, relative to the stored twist."""
    w = w if w is not None else series.lattice.zero()
    stored = series.reference_twist()

    return [(k, a * _twist_sign(k, stored) * _twist_sign(k, w)) for k, a in series.entries]


@dataclass(frozen=True)
class SplitSeries:
    """D^{(w,Sigma)}: P sector (K.Sigma = 2 mod 4, +Q/2) and N sector (K.Sigma = 0 mod 4, -Q/2)."""

    p_entries: tuple
    n_entries: tuple
    w: HClass
    surface: object
    d_zero: int
    source: DonaldsonSeries

    def sector(self, k):
        residue = int(k.dot(self.surface.cls)) % 4
        if residue == 2:
            return QuadMarker.PLUS
        if residue == 0:
            return QuadMarker.MINUS

        raise ValueError("K.Sigma = %s is odd for K=%s." % (k.dot(self.surface.cls), k))


def _check_split_preconditions(series, w, surface):
    if not is_allowable(w, surface):
        raise ValueError("(w, %s) is not allowable: w.Sigma = %s must be odd and Sigma^2 = 0." %
                         (surface.label, w.dot(surface.cls)))

    if not series.simple_type:
        raise ValueError("Split form needs a simple-type series.")

    if series.b_one != 0 or series.b_plus <= 1 or series.b_plus % 2 == 0:
        raise ValueError("Split form needs b_one = 0 and b_plus > 1 odd, got b_one=%d b_plus=%d." %
                         (series.b_one, series.b_plus))


def split_wS(series, w, surface):
    _check_split_preconditions(series, w, surface)

    d0 = series.effective_d_zero(w)
    phase = i_power(-d0)

    p_entries = []
    n_entries = []
    for k, a in twist(series, w):
        pairing = k.dot(surface.cls)
        if pairing.denominator != 1 or pairing.numerator % 2 != 0:
            raise ValueError("K.Sigma = %s is odd for K=%s; basic classes must pair evenly with Sigma." %
                             (pairing, k))

        if pairing.numerator % 4 == 2:
            p_entries.append((k, gaussian(a)))
        else:
            n_entries.append((k, gaussian(a) * phase))

    return SplitSeries(tuple(p_entries), tuple(n_entries), w, surface, d0, series)


def unsplit(split):
    """Inverse of split_wS: a series whose stored coefficients are a_{j,w}."""
    phase = i_power(split.d_zero)
    entries = []

    for sector, items, factor in ((QuadMarker.PLUS, split.p_entries, i_power(0)),
                                  (QuadMarker.MINUS, split.n_entries, phase)):
        for k, c in items:
            if split.sector(k) != sector:
                raise ValueError("Class %s is filed under the wrong sector." % k)

            value = c * factor
            if value.y:
                raise ValueError("Split coefficient %s of class %s does not come from a rational series." %
                                 (c, k))
            entries.append((k, to_fraction(value.x)))

    return split.source.with_entries(entries, split.w)


def _insert(split, d, monomials):
    """Insertion of sum coefficient * Sigma^b x^a, the monomials given as (a, b, coefficient)."""
    sigma = split.surface.cls
    d_sigma = d.dot(sigma)

    plus_terms = []
    for k, c in split.p_entries:
        base = d_sigma + k.dot(sigma)
        factor = sum((coefficient * Fraction(2) ** a * base ** b for a, b, coefficient in monomials), Fraction(0))
        plus_terms.append((gaussian(k.dot(d)), c * gaussian(factor)))

    minus_terms = []
    for k, c in split.n_entries:
        base = gaussian(-d_sigma, k.dot(sigma))
        factor = GAUSSIAN_ZERO
        for a, b, coefficient in monomials:
            factor += gaussian(coefficient * Fraction(-2) ** a) * base ** b
        minus_terms.append((gaussian(0, k.dot(d)), c * factor))

    square = d.square()
    return (ExpPolynomial(tuple(plus_terms), QuadMarker.PLUS, square),
            ExpPolynomial(tuple(minus_terms), QuadMarker.MINUS, square))


def eval_insert(series, w, surface, d, a=0, b=0):
    """D^{(w,Sigma)}(Sigma^b x^a e^{tD}) as a (+Q/2 part, -Q/2 part) pair."""
    return _insert(split_wS(series, w, surface), d, [(a, b, Fraction(1))])


@dataclass(frozen=True)
class RelationPoly:
    """Element of Q[Sigma, x] acting on series by insertion."""

    poly: Poly

    @staticmethod
    def from_expr(expression):
        return RelationPoly(Poly(expand(expression), SIGMA, X, domain=QQ))

    def terms(self):
        return [(sigma_power, x_power, Fraction(int(c.p), int(c.q)))
                for (sigma_power, x_power), c in self.poly.terms()]

    def degree_in_sigma(self):
        return self.poly.degree(SIGMA)

    def __str__(self):
        return str(self.poly.as_expr())


def relation_poly(g):
    if g < 2:
        raise ValueError("Relation polynomial needs genus g >= 2, got %d." % g)

    if g % 2 == 0:
        expression = (1 - X / 2) * (SIGMA + 1)
        for m in range(1, (g - 2) // 2 + 1):
            expression *= (SIGMA + 1) ** 2 + (4 * m) ** 2
    else:
        expression = 1 + X / 2
        for j in range(g - 1):
            expression *= SIGMA - Rational((-1) ** (j + 1) * (2 * j + 1))

    return RelationPoly.from_expr(expression)


def apply_relation(series, w, surface, z, d):
    if d.dot(surface.cls) != 1:
        _logger.warning("Applying a relation with D.Sigma = %s; vanishing is only guaranteed for D.Sigma = 1.",
                        d.dot(surface.cls))

    monomials = [(x_power, sigma_power, coefficient) for sigma_power, x_power, coefficient in z.terms()]
    return _insert(split_wS(series, w, surface), d, monomials)


def default_probes(series, surface):
    """Named classes D with D.Sigma = 1 and their Sigma-shifts."""
    sigma = surface.cls
    probes = []
    for _, cls in series.lattice.named_classes():
        if cls.dot(sigma) == 1:
            for candidate in (cls, cls + sigma, cls - sigma):
                if candidate not in probes:
                    probes.append(candidate)
    return probes


def finite_type_order(series, w, surface, probes=None):
    if series.is_zero():
        return 0

    probes = probes if probes is not None else default_probes(series, surface)
    if not probes:
        raise ValueError("No probe classes with D.Sigma = 1 on lattice '%s'." % series.lattice.name)

    for n in range(config.MAX_FINITE_TYPE_ORDER + 1):
        z = RelationPoly.from_expr((X ** 2 - 4) ** n)
        vanishes = all(not plus and not minus
                       for plus, minus in (apply_relation(series, w, surface, z, d) for d in probes))
        if vanishes:
            _logger.debug("Series on '%s' is of finite type of order %d.", series.lattice.name, n)
            return n

    raise ValueError("Series on '%s' is not annihilated by (x^2-4)^n for n <= %d." %
                     (series.lattice.name, config.MAX_FINITE_TYPE_ORDER))


def check_adjunction(series, surface):
    """2g - 2 >= Sigma^2 + |K.Sigma| for every basic class; returns (holds, violators)."""
    bound = 2 * surface.genus - 2 - surface.cls.square()
    violators = [(k, a) for k, a in series.entries if abs(k.dot(surface.cls)) > bound]
    return not violators, violators
