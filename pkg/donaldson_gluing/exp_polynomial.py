"""Exponential polynomials  e^{+-Q t^2/2} * sum c e^{lambda t}  with Gaussian-rational data."""
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from logging import getLogger

from donaldson_gluing.arithmetic import GAUSSIAN_ONE, GAUSSIAN_ZERO, exponent_key, format_gaussian, \
    format_rational, gaussian, imag_part, inverse_factorial, parse_gaussian, parse_rational, real_part

_logger = getLogger(__name__)


class QuadMarker(Enum):
    PLUS = "+Q/2"
    MINUS = "-Q/2"
    NONE = "none"


def _combine_markers(left, right, operation):
    if left == QuadMarker.NONE:
        return right
    if right == QuadMarker.NONE or left == right:
        return left

    raise ValueError("Cannot %s exponential polynomials with markers '%s' and '%s'." %
                     (operation, left.value, right.value))


@dataclass(frozen=True, eq=False)
class ExpPolynomial:
    terms: tuple = ()
    marker: QuadMarker = QuadMarker.NONE
    square: Fraction = Fraction(0)

    def __post_init__(self):
        collected = defaultdict(lambda: GAUSSIAN_ZERO)
        for exponent, coefficient in self.terms:
            exponent = _as_gaussian(exponent)
            collected[exponent] = collected[exponent] + _as_gaussian(coefficient)

        terms = tuple(sorted(((e, c) for e, c in collected.items() if c), key=lambda term: exponent_key(term[0])))
        square = Fraction(self.square) if self.marker != QuadMarker.NONE else Fraction(0)

        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "square", square)

    @staticmethod
    def zero(marker=QuadMarker.NONE, square=0):
        return ExpPolynomial((), marker, square)

    @staticmethod
    def exponential(exponent, coefficient=1, marker=QuadMarker.NONE, square=0):
        return ExpPolynomial(((exponent, coefficient),), marker, square)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def coefficient(self, exponent):
        exponent = _as_gaussian(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return GAUSSIAN_ZERO

    def exponents(self):
        return [e for e, _ in self.terms]

    def __eq__(self, other):
        if not isinstance(other, ExpPolynomial):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.terms == other.terms and self.marker == other.marker and self.square == other.square

    def __hash__(self):
        if self.is_zero():
            return hash(())
        return hash((self.terms, self.marker, self.square))

    def _check_addable(self, other):
        if self.is_zero() or other.is_zero():
            return
        if self.marker != other.marker or self.square != other.square:
            raise ValueError("Cannot add exponential polynomials with prefactors %s and %s." %
                             (self.prefactor(), other.prefactor()))

    def _carrier(self, other):
        return other if self.is_zero() else self

    def __add__(self, other):
        self._check_addable(other)
        carrier = self._carrier(other)
        return ExpPolynomial(self.terms + other.terms, carrier.marker, carrier.square)

    def __neg__(self):
        return ExpPolynomial(tuple((e, -c) for e, c in self.terms), self.marker, self.square)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = _as_gaussian(scalar)
        return ExpPolynomial(tuple((e, c * scalar) for e, c in self.terms), self.marker, self.square)

    def __mul__(self, other):
        if not isinstance(other, ExpPolynomial):
            return self.scale(other)

        if self.is_zero() or other.is_zero():
            return ExpPolynomial.zero()

        marker = _combine_markers(self.marker, other.marker, "multiply")
        terms = tuple((e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms)
        return ExpPolynomial(terms, marker, self.square + other.square)

    __rmul__ = __mul__

    def leading_term(self):
        return self.terms[-1]

    def __truediv__(self, divisor):
        """Exact division; raises ValueError when the quotient is not an exponential polynomial."""
        if not isinstance(divisor, ExpPolynomial):
            return self.scale(GAUSSIAN_ONE / _as_gaussian(divisor))

        if divisor.is_zero():
            raise ZeroDivisionError("Division by the zero exponential polynomial.")

        if self.is_zero():
            return ExpPolynomial.zero()

        marker, square = _divide_prefactors(self, divisor)

        lead_exponent, lead_coefficient = divisor.leading_term()
        real_box, imag_box = _quotient_box(self, divisor)

        remainder = ExpPolynomial(self.terms)
        bare_divisor = ExpPolynomial(divisor.terms)
        quotient_terms = []

        while not remainder.is_zero():
            exponent, coefficient = remainder.leading_term()
            candidate = exponent - lead_exponent

            if not (real_box[0] <= real_part(candidate) <= real_box[1] and
                    imag_box[0] <= imag_part(candidate) <= imag_box[1]):
                raise ValueError("Exponential polynomial %s is not divisible by %s." % (self, divisor))

            factor = coefficient / lead_coefficient
            quotient_terms.append((candidate, factor))
            remainder = remainder - ExpPolynomial.exponential(candidate, factor) * bare_divisor

        return ExpPolynomial(tuple(quotient_terms), marker, square)

    def scale_argument(self, factor):
        """p(t) -> p(factor * t)."""
        factor = Fraction(factor)
        return ExpPolynomial(tuple((e * gaussian(factor), c) for e, c in self.terms), self.marker,
                             self.square * factor * factor)

    def reflect(self):
        return self.scale_argument(-1)

    def is_even(self):
        return self.reflect() == self

    def is_odd(self):
        return self.reflect() == -self

    def has_parity(self, parity):
        return self.is_even() if parity % 2 == 0 else self.is_odd()

    def prefactor(self):
        if self.marker == QuadMarker.NONE:
            return "1"
        sign = "" if self.marker == QuadMarker.PLUS else "-"
        return "exp(%s%s t^2/2)" % (sign, self.square)

    def expand(self, order):
        """Exact Taylor coefficients of the full series (prefactor included) up to t^order."""
        if order < 0:
            raise ValueError("Expansion order must be non-negative, got %d." % order)

        exponential_part = []
        for k in range(order + 1):
            total = GAUSSIAN_ZERO
            for e, c in self.terms:
                total = total + c * e ** k
            exponential_part.append(total * gaussian(inverse_factorial(k)))

        half_square = self.square / 2 if self.marker == QuadMarker.PLUS else -self.square / 2
        quadratic_part = [GAUSSIAN_ZERO] * (order + 1)
        for m in range(order // 2 + 1):
            quadratic_part[2 * m] = gaussian(half_square ** m * inverse_factorial(m))

        coefficients = []
        for n in range(order + 1):
            total = GAUSSIAN_ZERO
            for k in range(n + 1):
                total = total + quadratic_part[n - k] * exponential_part[k]
            coefficients.append(total)

        return coefficients

    def to_json(self):
        return {"marker": self.marker.value,
                "square": format_rational(self.square),
                "terms": [{"lambda": format_gaussian(e), "c": format_gaussian(c)} for e, c in self.terms]}

    @staticmethod
    def from_json(data):
        from donaldson_gluing.validation import validate_exp_polynomial_descriptor
        validate_exp_polynomial_descriptor(data)

        terms = tuple((parse_gaussian(term["lambda"]), parse_gaussian(term["c"])) for term in data["terms"])
        return ExpPolynomial(terms, QuadMarker(data["marker"]), parse_rational(data.get("square", "0")))

    def __str__(self):
        if self.is_zero():
            return "0"
        body = " + ".join("(%s)e^{(%s)t}" % (format_gaussian(c), format_gaussian(e)) for e, c in self.terms)
        return body if self.marker == QuadMarker.NONE else "%s * [%s]" % (self.prefactor(), body)

    __repr__ = __str__


def _as_gaussian(value):
    if isinstance(value, (int, Fraction)):
        return gaussian(value)
    return value


def _divide_prefactors(dividend, divisor):
    if divisor.marker == QuadMarker.NONE:
        return dividend.marker, dividend.square

    if dividend.marker != divisor.marker:
        raise ValueError("Cannot divide an exponential polynomial with marker '%s' by one with marker '%s'." %
                         (dividend.marker.value, divisor.marker.value))

    square = dividend.square - divisor.square
    if square == 0:
        return QuadMarker.NONE, Fraction(0)
    return dividend.marker, square


def _quotient_box(dividend, divisor):
    """Range of quotient exponents allowed by the per-coordinate exponent spans."""
    def span(poly, coordinate):
        values = [coordinate(e) for e, _ in poly.terms]
        return min(values), max(values)

    boxes = []
    for coordinate in (real_part, imag_part):
        low_a, high_a = span(dividend, coordinate)
        low_b, high_b = span(divisor, coordinate)
        boxes.append((low_a - low_b, high_a - high_b))

    return boxes
