"""The q-Weyl algebra, its action on sequences of q-series, and annihilators.

Elements are kept in normal form ``sum c_{a,b}(q) M^a L^b`` subject to
``q L M = M L``, i.e. ``L M = q^-1 M L``.  A product ``A B`` acts on a
sequence by applying ``A`` first and then ``B``; with that reading
``(L f)(n) = f(n+1)`` and ``(M f)(n) = q^n f(n)`` satisfy the defining
relation exactly, and a normal-form monomial acts by

    (f . c M^a L^b)(r) = c q^(a(r+b)) f(r+b).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .algebra import ONE, LaurentPoly, TruncatedSeries, format_monomial
from .alexander import DEFAULT_ORDER, AlexanderPoly, colored_reduced, colored_unreduced, positive_form
from .errors import DomainError, FormatError, IndexRangeError

__all__ = [
    "WeylElement",
    "M",
    "L",
    "SeriesSequence",
    "AnnihilationReport",
    "weyl_multiply",
    "apply_weyl",
    "d_operator",
    "knot_annihilator",
    "unreduced_annihilator",
    "verify_annihilation",
    "format_d_product",
    "reduced_sequence",
    "unreduced_sequence",
]

Scalar = Union[int, LaurentPoly]


class WeylElement:
    """Finite sum ``c_{a,b}(q) M^a L^b`` in normal form (M left of L)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Tuple[int, int], Scalar] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Tuple[int, int], LaurentPoly] = {}
        for key, c in items:
            a, b = key
            if not (isinstance(a, int) and isinstance(b, int)) or a < 0 or b < 0:
                raise DomainError(f"M and L powers must be non-negative integers, got {key!r}")
            acc[(a, b)] = acc.get((a, b), LaurentPoly()) + LaurentPoly.coerce(c)
        self._terms = {k: acc[k] for k in sorted(acc, key=lambda k: (k[1], k[0])) if acc[k]}
        self._hash: Optional[int] = None

    @classmethod
    def monomial(cls, m_power: int = 0, l_power: int = 0, coeff: Scalar = 1) -> "WeylElement":
        return cls({(m_power, l_power): coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> "WeylElement":
        return cls({(0, 0): c})

    @property
    def terms(self) -> Mapping[Tuple[int, int], LaurentPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def l_degree(self) -> int:
        return max((b for _, b in self._terms), default=0)

    @property
    def m_degree(self) -> int:
        return max((a for a, _ in self._terms), default=0)

    def coeff(self, m_power: int, l_power: int) -> LaurentPoly:
        return self._terms.get((m_power, l_power), LaurentPoly())

    def __add__(self, other) -> "WeylElement":
        other = _coerce_weyl(other)
        if other is None:
            return NotImplemented
        return WeylElement(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "WeylElement":
        return WeylElement({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "WeylElement":
        other = _coerce_weyl(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "WeylElement":
        return (-self) + other

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, (int, LaurentPoly)):
            return WeylElement({k: c * LaurentPoly.coerce(other) for k, c in self._terms.items()})
        if isinstance(other, WeylElement):
            return weyl_multiply(self, other)
        return NotImplemented

    def __rmul__(self, other) -> "WeylElement":
        if isinstance(other, (int, LaurentPoly)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "WeylElement":
        if not isinstance(n, int) or n < 0:
            raise DomainError("only non-negative integer powers are supported")
        result = WeylElement.scalar(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _coerce_weyl(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for (a, b), c in self._terms.items():
            ops = "·".join(p for p in (format_monomial("M", a), format_monomial("L", b)) if p)
            negative = False
            if len(c) == 1:
                (e, k), = c.items()
                negative = k < 0
                scalar = str(c.shift(0) * (-1 if negative else 1))
                if ops and scalar == "1":
                    body = ops
                else:
                    body = f"{scalar}·{ops}" if ops else scalar
            else:
                body = f"({c})·{ops}" if ops else f"({c})"
            if not out:
                out.append(("-" if negative else "") + body)
            else:
                out.append((" - " if negative else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"WeylElement({self})"

    def to_json(self) -> list:
        return [[a, b, c.to_json()] for (a, b), c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> "WeylElement":
        try:
            return cls({(int(a), int(b)): LaurentPoly.from_json(c) for a, b, c in data})
        except (TypeError, ValueError) as exc:
            raise FormatError(f"Weyl element must be a list of [a, b, coeffs]: {exc}") from None


def _coerce_weyl(x) -> Optional[WeylElement]:
    if isinstance(x, WeylElement):
        return x
    if isinstance(x, (int, LaurentPoly)):
        return WeylElement.scalar(x)
    return None


M = WeylElement.monomial(1, 0)
L = WeylElement.monomial(0, 1)


def weyl_multiply(x: WeylElement, y: WeylElement) -> WeylElement:
    """Normal-form product; ``L^b M^a = q^(-ab) M^a L^b``."""
    acc: Dict[Tuple[int, int], LaurentPoly] = {}
    for (a1, b1), c1 in x._terms.items():
        for (a2, b2), c2 in y._terms.items():
            key = (a1 + a2, b1 + b2)
            acc[key] = acc.get(key, LaurentPoly()) + (c1 * c2).shift(-b1 * a2)
    return WeylElement(acc)


class SeriesSequence:
    """A sequence ``r -> TruncatedSeries`` for ``r >= start_index``.

    Values are memoised behind a lock so one instance can be read from
    several threads.  When ``order_aware`` is set the generator is called as
    ``generator(r, order)`` and :meth:`widen` can recompute at a higher order.
    """

    def __init__(
        self,
        generator: Callable[..., Union[TruncatedSeries, LaurentPoly, int]],
        start_index: int = 1,
        order: int = DEFAULT_ORDER,
        name: str = "",
        order_aware: bool = False,
    ):
        self._generator = generator
        self.start_index = start_index
        self.order = order
        self.name = name
        self.order_aware = order_aware
        self._cache: Dict[int, TruncatedSeries] = {}
        self._lock = threading.Lock()

    def __call__(self, r: int) -> TruncatedSeries:
        if r < self.start_index:
            raise IndexRangeError(f"index {r} is below the start index {self.start_index} of {self.name or 'sequence'}")
        with self._lock:
            hit = self._cache.get(r)
            if hit is None:
                value = self._generator(r, self.order) if self.order_aware else self._generator(r)
                if not isinstance(value, TruncatedSeries):
                    value = TruncatedSeries(LaurentPoly.coerce(value), self.order)
                hit = self._cache[r] = value.truncate(self.order)
            return hit

    def widen(self, order: int) -> "SeriesSequence":
        """The same sequence known to at least ``order`` when regenerable."""
        if order <= self.order or not self.order_aware:
            return self
        return SeriesSequence(self._generator, self.start_index, order, self.name, True)

    def _combine(self, other, op, label) -> "SeriesSequence":
        if isinstance(other, SeriesSequence):
            start = max(self.start_index, other.start_index)
            order = min(self.order, other.order)
            return SeriesSequence(lambda r: op(self(r), other(r)), start, order, label)
        return SeriesSequence(lambda r: op(self(r), other), self.start_index, self.order, label)

    def __add__(self, other) -> "SeriesSequence":
        return self._combine(other, lambda x, y: x + y, "sum")

    def __mul__(self, other) -> "SeriesSequence":
        return self._combine(other, lambda x, y: x * y, "product")

    __rmul__ = __mul__

    def act(self, op: WeylElement) -> "SeriesSequence":
        return SeriesSequence(lambda r: apply_weyl(op, self, r), self.start_index, self.order, f"{op}({self.name})")


def apply_weyl(op: WeylElement, f: SeriesSequence, r: int) -> TruncatedSeries:
    """Value at ``r`` of ``f`` acted on by ``op``."""
    if r < f.start_index:
        raise IndexRangeError(f"index {r} is below the start index {f.start_index}")
    total = TruncatedSeries.zero(f.order)
    for (a, b), c in op._terms.items():
        total = total + f(r + b) * c.shift(a * (r + b))
    return total


def d_operator(x: Scalar) -> WeylElement:
    """``D_X = 1 - X L``."""
    return WeylElement.scalar(1) - WeylElement.monomial(0, 1, x)


def _annihilator_exponents(delta1: LaurentPoly) -> Tuple[int, ...]:
    delta1 = LaurentPoly.coerce(delta1)
    if delta1.is_zero():
        raise DomainError("the zero polynomial has no annihilator of this form")
    if delta1.min_exp != 0:
        raise DomainError(f"{delta1} is not a positive form (lowest exponent {delta1.min_exp})")
    return delta1.exponents()


def knot_annihilator(delta1: LaurentPoly) -> WeylElement:
    """Product of ``D_{q^-n}`` over the exponents ``n`` of a positive form, ascending."""
    result = WeylElement.scalar(1)
    for n in _annihilator_exponents(delta1):
        result = result * d_operator(LaurentPoly.monomial(-n))
    return result


def unreduced_annihilator(delta1: LaurentPoly) -> WeylElement:
    return weyl_multiply(M - 1, knot_annihilator(delta1))


def format_d_product(delta1: LaurentPoly, unreduced: bool = False) -> str:
    """Factored form such as ``D_1·D_{q^-1}·D_{q^-2}``."""
    factors = ["D_1" if n == 0 else f"D_{{q^-{n}}}" for n in _annihilator_exponents(delta1)]
    if unreduced:
        factors.insert(0, "(M - 1)")
    return "·".join(factors)


@dataclass(frozen=True)
class AnnihilationReport:
    """Outcome of applying an operator over a range of indices.

    ``residual_exponent`` is the lowest nonzero exponent of the first
    residual found (``None`` when every residual vanishes below ``order``).
    """

    r_min: int
    r_max: int
    order: int
    residual_index: Optional[int] = None
    residual_exponent: Optional[int] = None
    residual_coeff: Optional[int] = None

    @property
    def clean(self) -> bool:
        return self.residual_exponent is None

    def to_json(self) -> dict:
        residual = None
        if not self.clean:
            residual = {"r": self.residual_index, "exponent": self.residual_exponent, "coeff": self.residual_coeff}
        return {"r_min": self.r_min, "r_max": self.r_max, "order": self.order, "residual": residual}

    def __str__(self) -> str:
        if self.clean:
            return f"verified clean for r in [{self.r_min}, {self.r_max}] mod q^{self.order}"
        return (
            f"nonzero residual at r={self.residual_index}: "
            f"coefficient {self.residual_coeff} of q^{self.residual_exponent}"
        )


def verify_annihilation(
    op: WeylElement, f: SeriesSequence, r_range: Iterable[int], order: int = DEFAULT_ORDER
) -> AnnihilationReport:
    rs = list(r_range)
    if not rs:
        raise DomainError("empty verification range")
    # negative q-powers in the coefficients eat into the known range
    pad = max([0] + [-c.min_exp for c in op._terms.values()])
    g = f.widen(order + pad)
    effective = order
    for r in rs:
        residual = apply_weyl(op, g, r).truncate(order)
        effective = min(effective, residual.order)
        v = residual.valuation()
        if v is not None:
            return AnnihilationReport(min(rs), max(rs), effective, r, v, residual.coeff(v))
    return AnnihilationReport(min(rs), max(rs), effective)


def reduced_sequence(a: AlexanderPoly, order: int = DEFAULT_ORDER) -> SeriesSequence:
    return SeriesSequence(
        lambda r, n: TruncatedSeries(colored_reduced(a, r), n), 1, order, "reduced", order_aware=True
    )


def unreduced_sequence(a: AlexanderPoly, order: int = DEFAULT_ORDER) -> SeriesSequence:
    return SeriesSequence(lambda r, n: colored_unreduced(a, r, n), 1, order, "unreduced", order_aware=True)
