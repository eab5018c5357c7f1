import random
from enum import Enum
from fractions import Fraction
from logging import getLogger

from donaldson_gluing import config
from donaldson_gluing.lattice import is_allowable, is_characteristic
from donaldson_gluing.series import apply_relation, check_adjunction, default_probes, eval_insert, \
    finite_type_order, relation_poly

_logger = getLogger(__name__)


class VerificationError(ValueError):
    """A stated identity failed on concrete data."""


MANDATORY_LATTICE_PARAMETERS = ["name", "rank", "gram", "b_plus", "b_one", "classes", "model"]
MANDATORY_SERIES_PARAMETERS = ["lattice", "entries", "simple_type"]
OPTIONAL_SERIES_PARAMETERS = ["w", "exceptional_class"]
MANDATORY_ENTRY_PARAMETERS = ["name", "recipe", "lattice", "series", "surfaces", "w_choices"]
OPTIONAL_ENTRY_PARAMETERS = ["provenance"]
MANDATORY_GLUED_PARAMETERS = ["left", "right", "left_surface", "right_surface", "w1", "w2", "g",
                              "w1_sq", "w2_sq", "w_sq", "sigma_shift", "experimental", "pairs"]
MANDATORY_EXP_POLYNOMIAL_PARAMETERS = ["marker", "terms"]
OPTIONAL_EXP_POLYNOMIAL_PARAMETERS = ["square"]

LATTICE_PARAMETER_TYPES = {
    "name": str,
    "rank": int,
    "gram": list,
    "b_plus": int,
    "b_one": int,
    "classes": dict,
    "model": str
}

GLUED_PARAMETER_TYPES = {
    "g": int,
    "w1_sq": int,
    "w2_sq": int,
    "w_sq": int,
    "pairs": list
}


def _validate_parameters(kind, configuration, mandatory, optional=(), parameter_types=None):
    if not configuration:
        raise ValueError("%s descriptor cannot be empty." % kind)

    if not all(x in configuration for x in mandatory):
        missing_parameters = [x for x in mandatory if x not in configuration]
        raise ValueError("%s descriptor missing mandatory parameters: %s" % (kind, missing_parameters))

    unexpected_parameters = [x for x in configuration.keys() if x not in mandatory and x not in optional]
    if unexpected_parameters:
        raise ValueError("Received unexpected parameters for %s: %s" % (kind.lower(), unexpected_parameters))

    wrong_parameter_types = ""
    for parameter_name, parameter_type in (parameter_types or {}).items():
        value = configuration[parameter_name]
        if not isinstance(value, parameter_type) or isinstance(value, bool) and parameter_type is int:
            wrong_parameter_types += "\t%s parameter '%s' expected of type '%s', but received of type '%s'.\n" % \
                                     (kind, parameter_name, parameter_type, type(value))

    if wrong_parameter_types:
        raise ValueError("Received parameters of invalid type:\n%s" % wrong_parameter_types)


def validate_lattice_descriptor(descriptor):
    _validate_parameters("Lattice", descriptor, MANDATORY_LATTICE_PARAMETERS,
                         parameter_types=LATTICE_PARAMETER_TYPES)

    rank = descriptor["rank"]
    if len(descriptor["gram"]) != rank:
        raise ValueError("Lattice '%s' declares rank %d but the gram matrix has %d rows." %
                         (descriptor["name"], rank, len(descriptor["gram"])))

    if descriptor["model"] not in ("full", "partial"):
        raise ValueError("Lattice model must be 'full' or 'partial', got '%s'." % descriptor["model"])


def validate_series_descriptor(descriptor, lattice):
    _validate_parameters("Series", descriptor, MANDATORY_SERIES_PARAMETERS, OPTIONAL_SERIES_PARAMETERS)

    if descriptor["lattice"] != lattice.name:
        raise ValueError("Series refers to lattice '%s' but was loaded against '%s'." %
                         (descriptor["lattice"], lattice.name))

    for entry in descriptor["entries"]:
        if set(entry) != {"k", "a"}:
            raise ValueError("Series entry must have exactly the keys 'k' and 'a', got %s." % sorted(entry))


def validate_entry_descriptor(descriptor):
    _validate_parameters("Catalog entry", descriptor, MANDATORY_ENTRY_PARAMETERS, OPTIONAL_ENTRY_PARAMETERS)


def validate_glued_descriptor(descriptor):
    _validate_parameters("Glued series", descriptor, MANDATORY_GLUED_PARAMETERS,
                         parameter_types=GLUED_PARAMETER_TYPES)

    for pair in descriptor["pairs"]:
        if len(pair) != 4:
            raise ValueError("Glued pair must be [j, k, sector, coefficient], got %s." % pair)


def validate_exp_polynomial_descriptor(descriptor):
    _validate_parameters("Exponential polynomial", descriptor, MANDATORY_EXP_POLYNOMIAL_PARAMETERS,
                         OPTIONAL_EXP_POLYNOMIAL_PARAMETERS)


def validate_gluing_spec(spec):
    sides = (("left", spec.left), ("right", spec.right))

    if spec.genus < 1:
        raise ValueError("Gluing genus must be positive, got %d." % spec.genus)

    for name, side in sides:
        if side.surface.genus != spec.genus:
            raise ValueError("Genus mismatch: %s surface '%s' has genus %d, gluing genus is %d." %
                             (name, side.surface.label, side.surface.genus, spec.genus))

        if not is_allowable(side.w, side.surface):
            raise ValueError("(w, %s) on the %s side is not allowable." % (side.surface.label, name))

        series = side.series
        if not series.simple_type:
            raise ValueError("The %s side '%s' is not of simple type." % (name, side.entry.name))

        if series.b_one != 0 or series.b_plus <= 1 or series.b_plus % 2 == 0:
            raise ValueError("The %s side '%s' needs b_one = 0 and b_plus > 1 odd, got b_one=%d b_plus=%d." %
                             (name, side.entry.name, series.b_one, series.b_plus))

    if spec.left.w.dot(spec.left.surface.cls) != spec.right.w.dot(spec.right.surface.cls):
        raise ValueError("w1.Sigma1 = %s and w2.Sigma2 = %s must agree for a compatible glued w." %
                         (spec.left.w.dot(spec.left.surface.cls), spec.right.w.dot(spec.right.surface.cls)))

    if (spec.w_square - spec.left.w_square - spec.right.w_square) % 2:
        raise ValueError("w^2 = %d must agree with w1^2 + w2^2 = %d modulo 2." %
                         (spec.w_square, spec.left.w_square + spec.right.w_square))


def check_characteristic(series):
    offenders = [str(k) for k in series.classes() if not is_characteristic(k)]
    if offenders:
        raise VerificationError("characteristic classes: %s are not characteristic on '%s'." %
                                (offenders, series.lattice.name))


def check_involution(series):
    """The coefficient of -K is (-1)^{d0} times the coefficient of K."""
    sign = -1 if series.effective_d_zero() % 2 else 1
    for k, a in series.entries:
        mirrored = series.coefficient(-k)
        if mirrored != sign * a:
            raise VerificationError("involution symmetry: coefficient of -K for K=%s is %s, expected %s." %
                                    (k, mirrored, sign * a))


def check_entry_adjunction(entry):
    for surface in entry.surfaces:
        holds, violators = check_adjunction(entry.series, surface)
        if not holds:
            raise VerificationError("adjunction inequality: %s fails against '%s' (genus %d): %s" %
                                    (entry.name, surface.label, surface.genus, [str(k) for k, _ in violators]))


def _allowable_pairs(entry):
    for surface in entry.surfaces:
        for label, w in entry.w_choices:
            if label == surface.label:
                yield surface, w


def check_finite_type(entry):
    expected = 0 if entry.series.is_zero() else 1
    for surface, w in _allowable_pairs(entry):
        order = finite_type_order(entry.series, w, surface)
        if order != expected:
            raise VerificationError("simple type: (x^2-4)^n annihilates '%s' along '%s' first at n=%d, expected %d." %
                                    (entry.name, surface.label, order, expected))


def check_relation_polynomial(entry):
    for surface, w in _allowable_pairs(entry):
        if surface.genus < 2:
            continue

        z = relation_poly(surface.genus)
        for twist_class in (w, w + surface.cls):
            for d in default_probes(entry.series, surface):
                plus, minus = apply_relation(entry.series, twist_class, surface, z, d)
                if plus or minus:
                    raise VerificationError("relation polynomial vanishing: '%s' along '%s' with D=%s gives %s, %s." %
                                            (entry.name, surface.label, d, plus, minus))


def check_parity(entry):
    for surface, w in _allowable_pairs(entry):
        d0 = entry.series.effective_d_zero(w)
        for d in default_probes(entry.series, surface):
            for part in eval_insert(entry.series, w, surface, d):
                if not part.has_parity(d0):
                    raise VerificationError("series parity: '%s' along '%s' at D=%s is not %s." %
                                            (entry.name, surface.label, d, "even" if d0 % 2 == 0 else "odd"))


def check_catalog_round_trip(entry):
    from donaldson_gluing.catalog.store import build_from_recipe, dumps_canonical, entry_from_json, entry_to_json

    text = dumps_canonical(entry_to_json(entry))
    if dumps_canonical(entry_to_json(entry_from_json(entry_to_json(entry)))) != text:
        raise VerificationError("catalog round trip: '%s' changes when reloaded from JSON." % entry.name)

    if dumps_canonical(entry_to_json(build_from_recipe(entry.recipe))) != text:
        raise VerificationError("catalog round trip: '%s' differs from its recipe '%s'." % (entry.name, entry.recipe))


def check_d_zero_congruence(spec):
    if not spec.d_zero_congruence_holds():
        raise VerificationError("d0 congruence: d0(X)=%d, d0(X1)=%d, d0(X2)=%d, g=%d." %
                                (spec.d_zero(), spec.left.d_zero(), spec.right.d_zero(), spec.genus))


def random_rationals(n_samples=None, seed=None):
    n_samples = n_samples if n_samples is not None else config.N_RSHIFT_SAMPLES
    generator = random.Random(config.RSHIFT_SEED if seed is None else seed)
    return [Fraction(generator.randint(*config.RSHIFT_NUMERATOR_RANGE),
                     generator.randint(*config.RSHIFT_DENOMINATOR_RANGE)) for _ in range(n_samples)]


def check_rshift_invariance(glued, d, shifts=None):
    from donaldson_gluing.gluing import eval_glued, rshift

    reference = eval_glued(glued, d)
    for r in shifts if shifts is not None else random_rationals():
        shifted = eval_glued(glued, rshift(d, r))
        if shifted != reference:
            raise VerificationError("rshift invariance: r=%s changes %s into %s." % (r, reference, shifted))


def check_coefficient_match(glued):
    from donaldson_gluing.gluing import coefficient_match_all

    for left_class, right_class, grouped, predicted in coefficient_match_all(glued):
        if grouped != predicted:
            raise VerificationError("coefficient matching: (K, L) = (%s, %s) groups to %s, product side is %s." %
                                    (left_class, right_class, grouped, predicted))


ENTRY_SUITES = {
    "characteristic": lambda entry: check_characteristic(entry.series),
    "involution": lambda entry: check_involution(entry.series),
    "adjunction": check_entry_adjunction,
    "finite_type": check_finite_type,
    "relation_polynomial": check_relation_polynomial,
    "parity": check_parity,
    "catalog_round_trip": check_catalog_round_trip
}


class SuiteStatus(Enum):
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"
    SKIPPED = "skipped"


def interpret_results(statuses):
    """Overall status of a suite run: any failure wins over errors, errors over passes."""
    values = set(status for status, _ in statuses.values())

    if SuiteStatus.FAILED in values:
        resulting_status = SuiteStatus.FAILED
    elif SuiteStatus.ERROR in values:
        resulting_status = SuiteStatus.ERROR
    elif SuiteStatus.PASSED in values:
        resulting_status = SuiteStatus.PASSED
    else:
        resulting_status = SuiteStatus.SKIPPED

    if resulting_status in (SuiteStatus.FAILED, SuiteStatus.ERROR):
        _logger.debug("Bad overall status: %s (interpreted from %s)", resulting_status, statuses)

    return resulting_status
