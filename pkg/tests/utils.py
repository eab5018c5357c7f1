import json
import os
from functools import lru_cache

from sympy import I, Integer, Rational, exp, expand, series, symbols

from donaldson_gluing.arithmetic import imag_part, parse_gaussian, real_part
from donaldson_gluing.catalog.store import build_from_recipe
from donaldson_gluing.exp_polynomial import QuadMarker
from donaldson_gluing.gluing import GluingSide, GluingSpec


def get_valid_lattice_descriptor():

    filename = os.path.join(os.path.dirname(os.path.realpath(__file__)), "lattice_descriptor.json")
    with open(filename) as input_file:
        descriptor = json.load(input_file)

    return descriptor


@lru_cache(maxsize=None)
def get_entry(recipe):
    return build_from_recipe(recipe)


def get_side(recipe, surface_label=None, w=None):
    return GluingSide.from_entry(get_entry(recipe), surface_label, w)


def get_spec(left, right, genus, w_square=None, left_surface=None, right_surface=None):
    return GluingSpec(get_side(left, left_surface), get_side(right, right_surface), genus, w_square)


def to_sympy(text):
    z = parse_gaussian(text)
    re_part, im_part = real_part(z), imag_part(z)
    return Rational(re_part.numerator, re_part.denominator) + I * Rational(im_part.numerator, im_part.denominator)


def taylor_coefficients(descriptor, order):
    """Taylor coefficients at t = 0 of an exponential polynomial JSON descriptor, via sympy series."""
    t = symbols("t")
    square = Rational(str(descriptor["square"]))
    half_square = square / 2 if descriptor["marker"] == QuadMarker.PLUS.value else -square / 2

    body = sum((to_sympy(term["c"]) * exp(to_sympy(term["lambda"]) * t) for term in descriptor["terms"]), Integer(0))
    taylor = series(exp(half_square * t ** 2) * body, t, 0, order + 1).removeO()

    return [expand(taylor.coeff(t, n)) for n in range(order + 1)]
