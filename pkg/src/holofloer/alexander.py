"""Classical Alexander polynomials, cables, and their coloured limits."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd

from .algebra import ONE, Q, LaurentPoly, TruncatedSeries, series_from_rational, substitute_power
from .errors import DomainError, FormatError

__all__ = [
    "AlexanderPoly",
    "DEFAULT_ORDER",
    "symmetrize",
    "positive_form",
    "torus_knot_alexander",
    "cable_alexander",
    "colored_unreduced",
    "colored_reduced",
    "convergence_defect",
]

DEFAULT_ORDER = 64


@dataclass(frozen=True)
class AlexanderPoly:
    """Symmetrized Alexander polynomial: palindromic, positive lowest term."""

    sym: LaurentPoly

    def __post_init__(self):
        p = self.sym
        if p.is_zero():
            raise FormatError("the zero polynomial is not an Alexander polynomial")
        for e, c in p.items():
            if p.coeff(-e) != c:
                raise FormatError(f"{p} is not symmetric: q^{e} has {c}, q^{-e} has {p.coeff(-e)}")
        if p.coeff(p.min_exp) < 0:
            raise FormatError(f"{p} has a negative lowest coefficient")
        if abs(p.evaluate(1)) != 1:
            warnings.warn(f"Alexander polynomial {p} has |value at 1| = {abs(p.evaluate(1))}, not 1", stacklevel=3)

    @property
    def deg(self) -> int:
        return self.sym.max_exp

    def __str__(self) -> str:
        return str(self.sym)

    def to_json(self) -> dict:
        return {"coeffs": self.sym.to_json()}

    @classmethod
    def from_json(cls, data) -> "AlexanderPoly":
        if not isinstance(data, dict) or "coeffs" not in data:
            raise FormatError("alexander: expected an object with a 'coeffs' list")
        return symmetrize(LaurentPoly.from_json(data["coeffs"]))


def symmetrize(p: LaurentPoly) -> AlexanderPoly:
    """The unique representative of ``±q^k p`` that is symmetric with positive lowest term."""
    p = LaurentPoly.coerce(p)
    if p.is_zero():
        raise FormatError("cannot symmetrize the zero polynomial")
    span = p.min_exp + p.max_exp
    if span % 2:
        raise FormatError(f"{p} spans q^{p.min_exp}..q^{p.max_exp}, an odd width; no q^k shift is symmetric")
    centred = p.shift(-span // 2)
    for e, c in centred.items():
        if centred.coeff(-e) != c:
            raise FormatError(
                f"{p} is not palindromic: after centring, q^{e} has {c} but q^{-e} has {centred.coeff(-e)}"
            )
    if centred.coeff(centred.min_exp) < 0:
        centred = -centred
    return AlexanderPoly(centred)


def positive_form(a: AlexanderPoly) -> LaurentPoly:
    """``q^deg * sym``, whose lowest exponent is 0."""
    return a.sym.shift(a.deg)


def _check_coprime(r: int, s: int) -> None:
    if not (isinstance(r, int) and isinstance(s, int)) or r < 1 or s < 1:
        raise DomainError(f"cable parameters must be positive integers, got ({r!r}, {s!r})")
    if gcd(r, s) != 1:
        raise DomainError(f"gcd({r}, {s}) = {gcd(r, s)}: T({r},{s}) is a link, not a knot")


def torus_knot_alexander(r: int, s: int) -> AlexanderPoly:
    _check_coprime(r, s)
    num = (LaurentPoly.monomial(r * s) - 1) * (Q - 1)
    den = (LaurentPoly.monomial(r) - 1) * (LaurentPoly.monomial(s) - 1)
    return symmetrize(num.exact_divide(den))


def cable_alexander(a: AlexanderPoly, r: int, s: int) -> AlexanderPoly:
    torus = torus_knot_alexander(r, s)
    return symmetrize(substitute_power(a.sym, r) * torus.sym)


def colored_unreduced(a: AlexanderPoly, r: int, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The r-coloured series ``Δ¹(q^r) (1-q)/(1-q^r)`` below ``q^order``."""
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"colour must be a positive integer, got {r!r}")
    return series_from_rational(substitute_power(positive_form(a), r) * (ONE - Q), [r], order)


def colored_reduced(a: AlexanderPoly, r: int) -> LaurentPoly:
    return substitute_power(positive_form(a), r)


def convergence_defect(a: AlexanderPoly, r: int, n: int, order: int = DEFAULT_ORDER) -> int:
    """First exponent where the (r, rn+1)-cable's positive form leaves the coloured limit.

    Returns ``order`` when the two agree below ``q^order``.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"twist count n must be a positive integer, got {n!r}")
    cable = positive_form(cable_alexander(a, r, r * n + 1))
    limit = colored_unreduced(a, r, order)
    diff = TruncatedSeries(cable, order).first_difference(limit)
    return order if diff is None else diff
