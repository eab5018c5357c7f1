"""Exact scalar helpers shared by every module.

Rationals are ``fractions.Fraction``; Gaussian rationals are elements of
sympy's ``QQ_I`` domain. Both are serialized as strings so no consumer ever
sees a float.
"""
import re
from fractions import Fraction
from math import factorial

from sympy.polys.domains import QQ, QQ_I

GAUSSIAN_ZERO = QQ_I.zero
GAUSSIAN_ONE = QQ_I.one

_GAUSSIAN_PATTERN = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*i\s*$")


def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    # QQ elements (python or gmpy flavour) expose numerator/denominator.
    return Fraction(int(value.numerator), int(value.denominator))


def gaussian(real, imag=0):
    real = to_fraction(real)
    imag = to_fraction(imag)
    return QQ_I(QQ(real.numerator, real.denominator), QQ(imag.numerator, imag.denominator))


def real_part(z):
    return to_fraction(z.x)


def imag_part(z):
    return to_fraction(z.y)


def i_power(n):
    # QQ_I.units is (1, i, -1, -i).
    return QQ_I.units[n % 4]


def exponent_key(z):
    """Lexicographic order on (real, imaginary) used for leading terms."""
    return real_part(z), imag_part(z)


def format_rational(value):
    return str(to_fraction(value))


def parse_rational(text):
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError("Cannot parse rational number '%s'." % text)


def format_gaussian(z):
    re_part = real_part(z)
    im_part = imag_part(z)
    sign = "-" if im_part < 0 else "+"
    return "%s%s%si" % (re_part, sign, abs(im_part))


def parse_gaussian(text):
    text = str(text)
    match = _GAUSSIAN_PATTERN.match(text)
    if match:
        re_part, sign, im_part = match.groups()
        im_value = Fraction(im_part)
        return gaussian(Fraction(re_part), -im_value if sign == "-" else im_value)

    return gaussian(parse_rational(text))


def gaussian_to_complex(z):
    return complex(float(real_part(z)), float(imag_part(z)))


def inverse_factorial(n):
    return Fraction(1, factorial(n))
