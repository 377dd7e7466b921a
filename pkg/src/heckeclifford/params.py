"""Parameter bookkeeping for both algebra variants.

Holds the deformation parameter q (quantum case only), the cyclotomic
parameters Q, the per-box residues, the q-value map that controls all
eigenvalue bookkeeping, and the separability machinery: the direct
tableau-level separateness test and the closed-form product polynomial,
each computed independently so they can cross-check one another.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from .scalars import (
    DEFAULT_PRECISION,
    Precision,
    approx_eq,
    format_scalar,
    is_small,
    parse_scalar,
    sqrt_principal,
    to_scalar,
)
from .shapes import (
    Box,
    Multipartition,
    StandardTableau,
    enumerate_multipartitions,
    enumerate_standard_tableaux,
)

VARIANTS = ("nondeg", "deg")


@dataclass(frozen=True)
class ParameterSet:
    variant: str
    flavor: str
    q: object = None  # mpc once normalised; unused in the degenerate variant
    Q: tuple = ()
    precision: Precision = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.flavor not in ("zero", "s", "ss"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.variant == "deg" and self.flavor == "ss":
            raise ValueError("the degenerate variant has no ss flavor")
        # keep exact forms around: rational inputs admit exact arithmetic
        # downstream even though the working values are normalised
        object.__setattr__(
            self, "q_exact",
            Fraction(self.q) if isinstance(self.q, (int, Fraction)) else None)
        object.__setattr__(
            self, "Q_exact",
            tuple(Fraction(v) if isinstance(v, (int, Fraction)) else None
                  for v in self.Q))
        object.__setattr__(
            self, "Q", tuple(to_scalar(v, self.precision) for v in self.Q)
        )
        if self.variant == "nondeg":
            if self.q is None:
                raise ValueError("nondeg variant needs q")
            qq = to_scalar(self.q, self.precision)
            object.__setattr__(self, "q", qq)
            for bad in (0, 1, -1):
                if approx_eq(qq, to_scalar(bad), self.precision):
                    raise ValueError(f"q may not be {bad}")
            for v in self.Q:
                if is_small(v, self.precision):
                    raise ValueError("cyclotomic parameters must be nonzero")
        elif self.q is not None:
            raise ValueError("degenerate variant takes no q")

    @property
    def m(self) -> int:
        return len(self.Q)

    @property
    def epsilon_hecke(self):
        return self.q - 1 / self.q

    @property
    def r(self) -> int:
        """Degree of the cyclotomic polynomial; PBW exponent bound."""
        base = {"zero": 0, "s": 1, "ss": 2}[self.flavor]
        return 2 * self.m + base

    def Q_of_label(self, label: str):
        """Component label -> cyclotomic parameter, with the fixed
        values for the strict-component labels."""
        if label == "0":
            return to_scalar(0 if self.variant == "deg" else 1, self.precision)
        if label == "0-":
            return to_scalar(-1, self.precision)
        if label == "0+":
            return to_scalar(1, self.precision)
        return self.Q[int(label) - 1]

    def with_precision(self, precision: Precision) -> "ParameterSet":
        return replace(self, precision=precision)

    def to_json(self) -> dict:
        out = {
            "variant": self.variant,
            "flavor": self.flavor,
            "Q": [format_scalar(v, self.precision) for v in self.Q],
            "prec_bits": self.precision.bits,
            "epsilon": self.precision.epsilon,
        }
        if self.variant == "nondeg":
            out["q"] = format_scalar(self.q, self.precision)
        return out

    @staticmethod
    def from_json(obj: dict) -> "ParameterSet":
        precision = Precision(
            bits=obj.get("prec_bits", DEFAULT_PRECISION.bits),
            epsilon=obj.get("epsilon", DEFAULT_PRECISION.epsilon),
        )
        q = obj.get("q")
        return ParameterSet(
            obj["variant"],
            obj["flavor"],
            parse_scalar(q, precision) if q is not None else None,
            tuple(parse_scalar(v, precision) for v in obj.get("Q", [])),
            precision,
        )


@dataclass(frozen=True)
class ResidueSequence:
    values: tuple
    qvalues: tuple


def qval(x, p: ParameterSet):
    """The spectral invariant: 2(qx + 1/(qx))/(q + 1/q), or x(x+1)."""
    x = to_scalar(x, p.precision)
    if p.variant == "deg":
        return x * (x + 1)
    if is_small(x, p.precision):
        raise ZeroDivisionError("qval needs a nonzero argument")
    denom = p.q + 1 / p.q
    if is_small(denom, p.precision):
        raise ZeroDivisionError("q + 1/q vanishes")
    qx = p.q * x
    return 2 * (qx + 1 / qx) / denom


def b_plus(x, p: ParameterSet):
    """The eigenvalue branch with b + 1/b = qval(x)."""
    if p.variant != "nondeg":
        raise ValueError("b_plus is a nondegenerate-variant notion")
    qv = qval(x, p)
    half = qv / 2
    return half + sqrt_principal(half * half - 1, p.precision)


def residue(box: Box, p: ParameterSet):
    base = p.Q_of_label(box.comp)
    shift = box.col - box.row
    if p.variant == "deg":
        return base + shift
    return base * p.q ** (2 * shift)


def residue_sequence(t: StandardTableau, p: ParameterSet) -> ResidueSequence:
    boxes = t.shape.boxes()
    by_entry = sorted(zip(t.values, boxes))
    values = tuple(residue(b, p) for _, b in by_entry)
    return ResidueSequence(values, tuple(qval(v, p) for v in values))


def is_separate(shape: Multipartition, p: ParameterSet) -> bool:
    """Consecutive q-values differ in every standard tableau of the shape."""
    for t in enumerate_standard_tableaux(shape):
        qv = residue_sequence(t, p).qvalues
        for k in range(len(qv) - 1):
            if approx_eq(qv[k], qv[k + 1], p.precision):
                return False
    return True


def _factor_pairs(p: ParameterSet, n: int, exact: bool = False):
    """The separability product, factor by factor, as (lhs, rhs) pairs.

    Each factor of the product is lhs - rhs; vanishing is decided by
    relative comparison of the two sides so tiny factors are caught no
    matter how the magnitudes spread.  With exact=True the pairs are
    Fractions (ValueError when the parameters are not rational).
    """
    if exact:
        if any(v is None for v in p.Q_exact) or (
                p.variant == "nondeg" and p.q_exact is None):
            raise ValueError("exact factors need rational parameters")
        one = Fraction(1)
        q, Q = p.q_exact, p.Q_exact

        def lift(k):
            return Fraction(k)
    else:
        one = to_scalar(1, p.precision)
        q, Q = p.q, p.Q

        def lift(k):
            return to_scalar(k, p.precision)
    if p.variant == "nondeg":
        q2 = q * q
        for t in range(1, n + 1):
            yield q2**t, one
            if p.flavor in ("s", "ss"):
                yield q2**t, -one
        for i in range(p.m):
            Qi = Q[i]
            for t in range(3 - n, n):
                yield Qi * Qi, q2 ** (-t)
            for t in range(1 - n, n + 1):
                yield Qi * Qi, q2 ** (-2 * t)
        for i in range(p.m):
            for j in range(i + 1, p.m):
                Qi, Qj = Q[i], Q[j]
                for t in range(1 - n, n):
                    yield Qi, Qj * q2 ** (-t)
                    yield Qi * Qj, q2 ** (-(t + 1))
    else:
        yield lift(factorial(n)), lift(0)
        for i in range(p.m):
            Qi = Q[i]
            for t in range(3 - n, n):
                yield 2 * Qi, lift(-t)
            for t in range(1 - n, n + 1):
                yield Qi, lift(-t)
        for i in range(p.m):
            for j in range(i + 1, p.m):
                Qi, Qj = Q[i], Q[j]
                for t in range(1 - n, n):
                    yield Qi + t, Qj
                    yield Qi + Qj, lift(-(t + 1))


def separability_polynomial(p: ParameterSet, n: int):
    """Value of the closed-form product controlling separateness."""
    if n < 1:
        raise ValueError("separability polynomial needs n >= 1")
    out = to_scalar(1, p.precision)
    for lhs, rhs in _factor_pairs(p, n):
        out = out * (lhs - rhs)
    return out


def separability_vanishes(p: ParameterSet, n: int) -> bool:
    """Factor-wise zero test of the separability product."""
    return any(approx_eq(a, b, p.precision) for a, b in _factor_pairs(p, n))


def separability_exact(p: ParameterSet, n: int):
    """The separating product over exact rationals; None when the
    parameters are not rational."""
    if n < 1:
        raise ValueError("separability polynomial needs n >= 1")
    try:
        pairs = list(_factor_pairs(p, n, exact=True))
    except ValueError:
        return None
    out = Fraction(1)
    for lhs, rhs in pairs:
        out *= lhs - rhs
    return out


def verify_separate_equivalence(p: ParameterSet, n: int) -> bool:
    """Cross-check: product nonzero iff every size-(n+1) shape is separate."""
    poly_side = not separability_vanishes(p, n)
    shapes = enumerate_multipartitions(p.flavor, p.m, n + 1)
    tableau_side = all(is_separate(shape, p) for shape in shapes)
    return poly_side == tableau_side


def same_class(x, y, p: ParameterSet) -> bool:
    """Whether x and y share a q-value."""
    x = to_scalar(x, p.precision)
    y = to_scalar(y, p.precision)
    if approx_eq(x, y, p.precision):
        return True
    if p.variant == "deg":
        return approx_eq(x + y, to_scalar(-1, p.precision), p.precision)
    return approx_eq(x * y * p.q * p.q, to_scalar(1, p.precision), p.precision)


def forbidden_pair(u, v, p: ParameterSet) -> bool:
    """Residue pairs on which the crossing coefficient squared vanishes."""
    u = to_scalar(u, p.precision)
    v = to_scalar(v, p.precision)
    eq = lambda a, b: approx_eq(a, b, p.precision)
    if p.variant == "deg":
        return (
            eq(u - v, to_scalar(1))
            or eq(u - v, to_scalar(-1))
            or eq(u + v, to_scalar(0))
            or eq(u + v, to_scalar(-2))
        )
    q2 = p.q * p.q
    return (
        eq(v, q2 * u)
        or eq(v, u / q2)
        or eq(v, 1 / u)
        or eq(v, 1 / (u * q2 * q2))
    )
