"""High-precision complex scalars: the coefficient field for every matrix here.

Wraps gmpy2's mpfr/mpc types.  All parameters enter as exact rationals (or
Gaussian rationals) and are widened once to the working precision, so the
only rounding error in the pipeline comes from arithmetic itself.  Equality
is always tolerance-based; the tolerance travels with a Precision value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr


@dataclass(frozen=True)
class Precision:
    """Working precision (significand bits) plus comparison tolerance."""

    bits: int = 256
    epsilon: float = 2.0 ** -128

    def __post_init__(self) -> None:
        if self.bits < 24:
            raise ValueError(f"need at least 24 significand bits, got {self.bits}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        # tolerance below working precision would compare pure rounding noise
        if self.epsilon < 2.0 ** (-self.bits + 8):
            raise ValueError(
                f"epsilon {self.epsilon} is finer than 2^({-self.bits}+8) allows"
            )

    def activate(self) -> None:
        """Point the thread-local gmpy2 context at this precision."""
        ctx = gmpy2.get_context()
        ctx.precision = self.bits
        ctx.allow_complex = True

    @property
    def decimal_digits(self) -> int:
        """Digits needed so a decimal round-trip reproduces the mpfr exactly."""
        return math.ceil(self.bits * math.log10(2)) + 3


DEFAULT_PRECISION = Precision()


def to_scalar(value, prec: Precision = DEFAULT_PRECISION):
    """Widen an exact or numeric value to an mpc at the given precision."""
    prec.activate()
    if isinstance(value, mpc):
        return value
    if isinstance(value, Fraction):
        # via mpq: one correct rounding, not numerator/denominator separately
        return mpc(mpfr(gmpy2.mpq(value)))
    if isinstance(value, str):
        return parse_scalar(value, prec)
    if isinstance(value, complex):
        return mpc(mpfr(value.real), mpfr(value.imag))
    # int, float, mpfr
    return mpc(mpfr(value))


def sqrt_principal(s, prec: Precision = DEFAULT_PRECISION):
    """Principal square root: Re > 0, or Re = 0 with Im >= 0.

    The fixed branch everything downstream relies on; picking the other
    root of x^2 = s is always done explicitly by negating this one.
    """
    prec.activate()
    r = gmpy2.sqrt(mpc(s))
    # gmpy2 follows the sign of a -0.0 imaginary part across the cut;
    # normalise so the contract holds verbatim
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def approx_eq(a, b, prec: Precision = DEFAULT_PRECISION) -> bool:
    """|a - b| <= eps * (1 + max(|a|, |b|))."""
    prec.activate()
    a = mpc(a)
    b = mpc(b)
    scale = max(abs(a), abs(b))
    return abs(a - b) <= prec.epsilon * (1 + scale)


def is_small(x, prec: Precision = DEFAULT_PRECISION) -> bool:
    """Absolute smallness test against the precision's tolerance."""
    prec.activate()
    return abs(mpc(x)) <= prec.epsilon


_TERM_RE = re.compile(
    r"""^ (?P<sign>[+-]?)
        (?P<body>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)?
        (?P<imag>[ij]?) $""",
    re.VERBOSE,
)


def _parse_term(term: str):
    """One signed term -> (Fraction value, is_imaginary). Exact."""
    m = _TERM_RE.match(term)
    if not m or (not m.group("body") and not m.group("imag")):
        raise ValueError(f"malformed scalar term {term!r}")
    body = m.group("body")
    if body is None:
        value = Fraction(1)  # bare "i"
    else:
        value = Fraction(body)
    if m.group("sign") == "-":
        value = -value
    return value, bool(m.group("imag"))


def parse_scalar(text: str, prec: Precision = DEFAULT_PRECISION):
    """Parse "p/q", decimals, and "a+bi" combinations into an mpc.

    Rational and decimal literals are read exactly (via Fraction) before
    widening, so "3/2" and "1.5" land on the same representable value.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty scalar string")
    # split into at most two signed terms; +/- inside an exponent is not a split
    cuts = [0]
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "eE+-":
            cuts.append(k)
    if len(cuts) > 2:
        raise ValueError(f"malformed scalar {text!r}")
    terms = [s[a:b] for a, b in zip(cuts, cuts[1:] + [len(s)])]
    re_part = Fraction(0)
    im_part = Fraction(0)
    seen_imag = seen_real = False
    for t in terms:
        value, is_imag = _parse_term(t)
        if is_imag:
            if seen_imag:
                raise ValueError(f"two imaginary terms in {text!r}")
            im_part, seen_imag = value, True
        else:
            if seen_real:
                raise ValueError(f"two real terms in {text!r}")
            re_part, seen_real = value, True
    prec.activate()
    return mpc(mpfr(gmpy2.mpq(re_part)), mpfr(gmpy2.mpq(im_part)))


def format_real(x, prec: Precision = DEFAULT_PRECISION) -> str:
    """Decimal string with enough digits to round-trip at this precision."""
    digs, exp, _ = gmpy2.digits(mpfr(x), 10, prec.decimal_digits)
    sign = ""
    if digs.startswith("-"):
        sign, digs = "-", digs[1:]
    if not digs.strip("0"):
        return "0"
    return f"{sign}0.{digs}e{exp}"


def format_scalar(s, prec: Precision = DEFAULT_PRECISION) -> str:
    """Human-facing "a+bi" form; round-trips through parse_scalar."""
    z = mpc(s)
    re_s = format_real(z.real, prec)
    im_s = format_real(z.imag, prec)
    if im_s.startswith("-"):
        return f"{re_s}{im_s}i"
    return f"{re_s}+{im_s}i"
