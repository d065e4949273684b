"""Exact arithmetic: Laurent polynomials, truncated q-series and bidegrees.

Everything here is immutable and uses Python integers, so results never
overflow.  ``TruncatedSeries`` carries its own truncation order and narrows
to the weaker order under mixed arithmetic instead of raising.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import DomainError, FormatError

__all__ = [
    "LaurentPoly",
    "TruncatedSeries",
    "Bidegree",
    "AffineBidegree",
    "laurent_product",
    "substitute_power",
    "series_from_rational",
    "gauss_binomial",
    "format_monomial",
    "Q",
    "ONE",
]


def format_monomial(var: str, exp: int) -> str:
    if exp == 0:
        return ""
    if exp == 1:
        return var
    return f"{var}^{exp}"


def _format_terms(items: Iterable[Tuple[int, int]], var: str = "q") -> str:
    parts = []
    for e, c in items:
        mono = format_monomial(var, e)
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


class LaurentPoly:
    """Sparse integer Laurent polynomial in ``q``.

    Stored as an exponent -> coefficient map with no zero coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for e, c in items:
            if not isinstance(e, int) or not isinstance(c, int):
                raise TypeError(f"exponents and coefficients must be int, got {e!r}: {c!r}")
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e]}
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------
    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial")

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Mapping[int, int]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise DomainError("the zero polynomial has no lowest exponent")
        return next(iter(self._terms))

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise DomainError("the zero polynomial has no highest exponent")
        return next(reversed(self._terms))

    def exponents(self) -> Tuple[int, ...]:
        return tuple(self._terms)

    def evaluate(self, x: Union[int, Fraction]) -> Union[int, Fraction]:
        """Exact value at ``q = x`` (negative powers need ``x`` invertible)."""
        total: Union[int, Fraction] = 0
        for e, c in self._terms.items():
            total += c * (Fraction(x) ** e if e < 0 else x ** e)
        return total

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise DomainError("only non-negative integer powers are supported")
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c ** n})
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q^k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, r: int) -> "LaurentPoly":
        return substitute_power(self, r)

    def exact_divide(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient in Z[q, q^-1]; raises ``DomainError`` if not exact."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        shift = self.min_exp - other.min_exp
        num = dict(self.shift(-self.min_exp)._terms)
        den = other.shift(-other.min_exp)
        dtop, dlead = den.max_exp, den.coeff(den.max_exp)
        quotient: dict = {}
        while num:
            top = max(num)
            if top < dtop:
                break
            c = num[top]
            if c % dlead:
                break
            qc, qe = c // dlead, top - dtop
            quotient[qe] = qc
            for e, dc in den._terms.items():
                v = num.get(e + qe, 0) - qc * dc
                if v:
                    num[e + qe] = v
                else:
                    num.pop(e + qe, None)
        if num:
            raise DomainError(f"{self} is not divisible by {other}")
        return LaurentPoly(quotient).shift(shift)

    # -- comparison, hashing, output ----------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        return _format_terms(self._terms.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def to_json(self) -> list:
        return [[e, c] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        try:
            return cls((int(e), int(c)) for e, c in data)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"expected a list of [exponent, coefficient] pairs: {exc}") from None


Q = LaurentPoly.monomial(1)
ONE = LaurentPoly.constant(1)


def laurent_product(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def substitute_power(p: LaurentPoly, r: int) -> LaurentPoly:
    """Replace ``q`` by ``q^r``."""
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"substitution power must be a positive integer, got {r!r}")
    return LaurentPoly({e * r: c for e, c in p.items()})


class TruncatedSeries:
    """A q-series known exactly below ``order``.

    Exponents are bounded below, so this models elements of Z[q^-1][[q]].
    Equality compares coefficients below the smaller of the two orders.
    """

    __slots__ = ("_poly", "order")

    def __init__(self, coeffs: Union[LaurentPoly, Mapping[int, int], Iterable[Tuple[int, int]]], order: int):
        poly = coeffs if isinstance(coeffs, LaurentPoly) else LaurentPoly(coeffs)
        if any(e >= order for e in poly.exponents()):
            poly = LaurentPoly({e: c for e, c in poly.items() if e < order})
        self._poly = poly
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(LaurentPoly(), order)

    @property
    def poly(self) -> LaurentPoly:
        """The known part as a Laurent polynomial."""
        return self._poly

    @property
    def coeffs(self) -> Mapping[int, int]:
        return self._poly.terms

    @property
    def min_exp(self) -> int:
        """Lower bound on the exponents of the full series."""
        return self._poly.min_exp if self._poly else self.order

    def coeff(self, exp: int) -> int:
        if exp >= self.order:
            raise DomainError(f"coefficient of q^{exp} is beyond the truncation order {self.order}")
        return self._poly.coeff(exp)

    def valuation(self) -> Optional[int]:
        return self._poly.min_exp if self._poly else None

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._poly, min(order, self.order))

    def shift(self, k: int) -> "TruncatedSeries":
        return TruncatedSeries(self._poly.shift(k), self.order + k)

    @staticmethod
    def _lift(other, order: int) -> Optional["TruncatedSeries"]:
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, LaurentPoly)):
            p = LaurentPoly.coerce(other)
            return TruncatedSeries(p, order)
        return None

    def __add__(self, other) -> "TruncatedSeries":
        o = self._lift(other, self.order)
        if o is None:
            return NotImplemented
        order = min(self.order, o.order)
        return TruncatedSeries(self._poly + o._poly, order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self._poly, self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        o = self._lift(other, self.order)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, int):
            return TruncatedSeries(self._poly * other, self.order)
        if isinstance(other, LaurentPoly):
            if other.is_zero():
                return TruncatedSeries.zero(self.order)
            return TruncatedSeries(self._poly * other, self.order + other.min_exp)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        acc: dict = {}
        for e1, c1 in self._poly.items():
            if e1 + other.min_exp >= order:
                break
            for e2, c2 in other._poly.items():
                e = e1 + e2
                if e >= order:
                    break
                acc[e] = acc.get(e, 0) + c1 * c2
        return TruncatedSeries(acc, order)

    __rmul__ = __mul__

    def first_difference(self, other) -> Optional[int]:
        """Smallest exponent below the common order where the series differ."""
        o = self._lift(other, self.order)
        if o is None:
            raise TypeError(f"cannot compare a series with {other!r}")
        order = min(self.order, o.order)
        diff = (self._poly - o._poly)
        for e, _ in diff.items():
            if e < order:
                return e
            break
        return None

    def __eq__(self, other) -> bool:
        if self._lift(other, self.order) is None:
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None  # equality is congruence mod q^order, not an identity

    def __str__(self) -> str:
        return str(self._poly)

    def __repr__(self) -> str:
        body = str(self._poly)
        return f"TruncatedSeries({body} + O(q^{self.order}))"

    def to_json(self) -> dict:
        return {"coeffs": self._poly.to_json(), "order": self.order}

    @classmethod
    def from_json(cls, data) -> "TruncatedSeries":
        try:
            return cls(LaurentPoly.from_json(data["coeffs"]), int(data["order"]))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed series: {exc}") from None


def series_from_rational(numerator: LaurentPoly, denominators: Sequence[int], order: int) -> TruncatedSeries:
    """Expand ``numerator / prod_k (1 - q^d_k)`` below ``q^order``."""
    numerator = LaurentPoly.coerce(numerator)
    for d in denominators:
        if not isinstance(d, int) or d < 1:
            raise DomainError(f"denominator exponents must be >= 1, got {d!r}")
    series = TruncatedSeries(numerator, order)
    for d in denominators:
        known = dict(series.coeffs)
        if not known:
            continue
        acc: dict = {}
        for e in range(min(known), order):
            v = known.get(e, 0) + acc.get(e - d, 0)
            if v:
                acc[e] = v
        series = TruncatedSeries(acc, order)
    return series


@lru_cache(maxsize=None)
def gauss_binomial(n: int, d: int) -> LaurentPoly:
    """Gaussian binomial in ``q^2`` via G(n,d) = q^{2(n-d)} G(n-1,d-1) + G(n-1,d)."""
    if not (isinstance(n, int) and isinstance(d, int)) or n < 0 or d < 0 or d > n:
        raise DomainError(f"gauss_binomial needs 0 <= d <= n, got n={n!r}, d={d!r}")
    if d == 0 or d == n:
        return ONE
    return gauss_binomial(n - 1, d - 1).shift(2 * (n - d)) + gauss_binomial(n - 1, d)


@dataclass(frozen=True, order=True)
class Bidegree:
    """The monomial ``t^t q^q`` written additively."""

    t: int = 0
    q: int = 0

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.t + other.t, self.q + other.q)

    def __sub__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.t - other.t, self.q - other.q)

    def __neg__(self) -> "Bidegree":
        return Bidegree(-self.t, -self.q)

    def __str__(self) -> str:
        s = " ".join(p for p in (format_monomial("t", self.t), format_monomial("q", self.q)) if p)
        return s or "1"


def _affine_text(slope: int, const: int) -> str:
    if slope == 0:
        return str(const)
    head = "r" if slope == 1 else ("-r" if slope == -1 else f"{slope}r")
    if const == 0:
        return head
    return f"{head}{'+' if const > 0 else '-'}{abs(const)}"


@dataclass(frozen=True, order=True)
class AffineBidegree:
    """Bidegree whose exponents are affine in the colour ``r``:
    ``t^(t_slope*r + t_const) q^(q_slope*r + q_const)``."""

    t_slope: int = 0
    t_const: int = 0
    q_slope: int = 0
    q_const: int = 0

    @classmethod
    def constant(cls, t: int = 0, q: int = 0) -> "AffineBidegree":
        return cls(0, t, 0, q)

    @classmethod
    def of(cls, bd: Bidegree) -> "AffineBidegree":
        return cls(0, bd.t, 0, bd.q)

    def at(self, r: int) -> Bidegree:
        return Bidegree(self.t_slope * r + self.t_const, self.q_slope * r + self.q_const)

    def substitute(self, k: int = 1) -> "AffineBidegree":
        """The degree after ``r -> r + k``."""
        return AffineBidegree(
            self.t_slope, self.t_const + k * self.t_slope, self.q_slope, self.q_const + k * self.q_slope
        )

    def instantiate(self, r: int) -> "AffineBidegree":
        return AffineBidegree.of(self.at(r))

    @property
    def slope(self) -> Bidegree:
        return Bidegree(self.t_slope, self.q_slope)

    @property
    def const(self) -> Bidegree:
        return Bidegree(self.t_const, self.q_const)

    def is_constant(self) -> bool:
        return self.t_slope == 0 and self.q_slope == 0

    def __add__(self, other: "AffineBidegree") -> "AffineBidegree":
        return AffineBidegree(
            self.t_slope + other.t_slope,
            self.t_const + other.t_const,
            self.q_slope + other.q_slope,
            self.q_const + other.q_const,
        )

    def __neg__(self) -> "AffineBidegree":
        return AffineBidegree(-self.t_slope, -self.t_const, -self.q_slope, -self.q_const)

    def __sub__(self, other: "AffineBidegree") -> "AffineBidegree":
        return self + (-other)

    def scale(self, k: int) -> "AffineBidegree":
        return AffineBidegree(k * self.t_slope, k * self.t_const, k * self.q_slope, k * self.q_const)

    def __str__(self) -> str:
        parts = []
        for var, s, c in (("t", self.t_slope, self.t_const), ("q", self.q_slope, self.q_const)):
            if s == 0 and c == 0:
                continue
            text = _affine_text(s, c)
            parts.append(var if text == "1" else (f"{var}^{text}" if s == 0 or text == "r" else f"{var}^({text})"))
        return " ".join(parts) or "1"

    def to_json(self) -> dict:
        return {"t": [self.t_slope, self.t_const], "q": [self.q_slope, self.q_const]}

    @classmethod
    def from_json(cls, data) -> "AffineBidegree":
        try:
            ts, tc = data["t"]
            qs, qc = data["q"]
            return cls(int(ts), int(tc), int(qs), int(qc))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"affine bidegree must look like {{'t': [s, c], 'q': [s, c]}}: {exc!r}") from None
