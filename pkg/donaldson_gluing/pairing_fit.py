"""Fit of the diagonal pairing M_aa(t) between the p-indexed coordinates of two glued sides."""
from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger

from donaldson_gluing.arithmetic import gaussian, i_power
from donaldson_gluing.exp_polynomial import ExpPolynomial, QuadMarker
from donaldson_gluing.gluing import GluedSeries, eval_glued
from donaldson_gluing.series import check_adjunction, twist

_logger = getLogger(__name__)


def alpha_order(genus):
    """p values for alpha = 1..2g-1: g-1, -(g-1), g-2, -(g-2), ..., 0."""
    order = []
    for p in range(genus - 1, 0, -1):
        order.extend([p, -p])
    order.append(0)
    return order


@dataclass(frozen=True)
class BasisCoordinates:
    genus: int
    coordinates: tuple
    d_zero: int
    normalized_form: bool = False

    def __post_init__(self):
        if len(self.coordinates) != 2 * self.genus - 1:
            raise ValueError("Genus %d needs %d coordinates, got %d." %
                             (self.genus, 2 * self.genus - 1, len(self.coordinates)))

        if self.normalized_form:
            return

        for p, coordinate in zip(self.p_values(), self.coordinates):
            if coordinate.is_zero():
                continue
            expected = QuadMarker.PLUS if p % 2 else QuadMarker.MINUS
            if coordinate.marker != expected:
                raise ValueError("Coordinate p=%d carries marker '%s', expected '%s'." %
                                 (p, coordinate.marker.value, expected.value))
            if p % 2 == 0 and any(e.x for e in coordinate.exponents()):
                raise ValueError("Coordinate p=%d must have purely imaginary exponents." % p)

    def p_values(self):
        return alpha_order(self.genus)

    def coordinate(self, alpha):
        if not 1 <= alpha <= len(self.coordinates):
            raise ValueError("alpha must lie in 1..%d, got %d." % (len(self.coordinates), alpha))
        return self.coordinates[alpha - 1]

    def items(self):
        return list(enumerate(self.coordinates, start=1))

    def normalized(self):
        """i^{d0} removed and exponents rotated back to real, all with the +Q/2 marker."""
        if self.normalized_form:
            return self

        phase = i_power(self.d_zero)
        rotation = gaussian(0, -1)
        coordinates = []
        for p, coordinate in zip(self.p_values(), self.coordinates):
            if p % 2 == 0:
                coordinate = ExpPolynomial(tuple((e * rotation, c * phase) for e, c in coordinate.terms),
                                           QuadMarker.PLUS, coordinate.square)
            coordinates.append(coordinate)

        return BasisCoordinates(self.genus, tuple(coordinates), self.d_zero, True)

    def to_json(self):
        return [{"alpha": alpha, "p": p, "c": c.to_json()}
                for (alpha, c), p in zip(self.items(), self.p_values())]


def basis_coordinates(series, w, surface, d):
    if d.dot(surface.cls) != 1:
        raise ValueError("Basis coordinates need D.Sigma = 1, got %s." % d.dot(surface.cls))

    holds, violators = check_adjunction(series, surface)
    if not holds:
        raise ValueError("Adjunction fails against '%s' for %s." % (surface.label, [str(k) for k, _ in violators]))

    genus = surface.genus
    d0 = series.effective_d_zero(w)
    phase = i_power(-d0)
    square = d.square()
    twisted = twist(series, w)

    coordinates = []
    for p in alpha_order(genus):
        chosen = [(k, a) for k, a in twisted if k.dot(surface.cls) == 2 * p]
        if p % 2:
            coordinates.append(ExpPolynomial(tuple((k.dot(d), a) for k, a in chosen), QuadMarker.PLUS, square))
        else:
            coordinates.append(ExpPolynomial(tuple((gaussian(0, k.dot(d)), gaussian(a) * phase) for k, a in chosen),
                                             QuadMarker.MINUS, square))

    return BasisCoordinates(genus, tuple(coordinates), d0)


def glued_coordinates(glued, d):
    """p-grouped pieces of eval_glued, in normalized form; p is read off the left class."""
    spec = glued.spec
    sigma = spec.left.surface.cls
    coordinates = []
    for p in alpha_order(spec.genus):
        entries = tuple(e for e in glued.entries if glued.left_class(e).dot(sigma) == 2 * p)
        part = GluedSeries(spec, entries, glued.simple_type, glued.sigma_shift, glued.experimental)
        coordinates.append(eval_glued(part, d))

    return BasisCoordinates(spec.genus, tuple(coordinates), spec.d_zero(), True)


def series_coordinates(series, w, surface, d):
    """Normalized coordinates of a glued manifold whose series is known in closed form."""
    if d.dot(surface.cls) != 1:
        raise ValueError("Closed-form coordinates need D.Sigma = 1, got %s." % d.dot(surface.cls))

    square = d.square()
    twisted = twist(series, w)
    coordinates = [ExpPolynomial(tuple((k.dot(d), a) for k, a in twisted if k.dot(surface.cls) == 2 * p),
                                 QuadMarker.PLUS, square)
                   for p in alpha_order(surface.genus)]

    return BasisCoordinates(surface.genus, tuple(coordinates), series.effective_d_zero(w), True)


def fit_diagonal(triples, alphas=None):
    """M_aa = c_{X,a} / (c_{X1,a} c_{X2,a}) from (left, right, glued) coordinate triples."""
    fitted = {}

    for index, (left, right, glued) in enumerate(triples):
        if not left.genus == right.genus == glued.genus:
            raise ValueError("Reference %d mixes genera %d, %d, %d." % (index, left.genus, right.genus, glued.genus))

        left, right, glued = left.normalized(), right.normalized(), glued.normalized()

        for alpha in range(1, 2 * left.genus):
            product = left.coordinate(alpha) * right.coordinate(alpha)
            target = glued.coordinate(alpha)

            if product.is_zero():
                if not target.is_zero():
                    raise ValueError("Reference %d is not diagonal: alpha=%d has a glued contribution but "
                                     "a vanishing side product." % (index, alpha))
                continue

            candidate = target / product
            if candidate * product != target:
                raise ValueError("Reference %d: quotient for alpha=%d does not multiply back." % (index, alpha))

            if alpha in fitted and fitted[alpha] != candidate:
                raise ValueError("Inconsistent references for alpha=%d: %s versus %s." %
                                 (alpha, fitted[alpha], candidate))

            _logger.debug("Reference %d fixes M_%d%d = %s.", index, alpha, alpha, candidate)
            fitted[alpha] = candidate

    wanted = alphas if alphas is not None else sorted(fitted)
    missing = [alpha for alpha in wanted if alpha not in fitted]
    if missing or not fitted:
        raise ValueError("Insufficient reference data: no triple has a nonvanishing side product for alpha %s." %
                         (missing or "any"))

    return {alpha: fitted[alpha] for alpha in wanted}


def predict_glued(left, right, fitted, sigma_pairing=1):
    """sum_a c_{X1,a}(t) M_aa(t Sigma.D) c_{X2,a}(t)."""
    if left.genus != right.genus:
        raise ValueError("Coordinate vectors have genera %d and %d." % (left.genus, right.genus))

    for alpha in fitted:
        if not 1 <= alpha <= 2 * left.genus - 1:
            raise ValueError("Fitted index alpha=%d is outside 1..%d." % (alpha, 2 * left.genus - 1))

    left, right = left.normalized(), right.normalized()
    sigma_pairing = Fraction(sigma_pairing)

    total = ExpPolynomial.zero()
    for alpha, m in sorted(fitted.items()):
        total = total + left.coordinate(alpha) * m.scale_argument(sigma_pairing) * right.coordinate(alpha)

    return total
