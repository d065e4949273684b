"""Bigraded F2 complexes in split normal form and their structured cones.

A split complex is a direct sum of two-generator pairs ``Λ`` (with
``d x = 1``), free cycles, and at most one tail: a shifted copy of
``F2[u] ⊗ Λ(ξ)`` with ``d ξ = 1`` and ``d u = 0``.  Degrees are
:class:`AffineBidegree` values so one object can describe a whole
r-indexed family; concrete complexes simply have zero slopes.

Maps between split complexes are :class:`SplitMap` values: a list of
degree-zero isomorphisms between matched summands and zero elsewhere.  The
cone of such a map is computed by Gaussian elimination of the matched
components, which keeps everything exact and symbolic.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import AffineBidegree, Bidegree, LaurentPoly, TruncatedSeries, format_monomial
from .errors import DomainError, FormatError, StructuralError

__all__ = [
    "U_DEGREE",
    "XI_DEGREE",
    "T_SHIFT",
    "PairSummand",
    "FreeSummand",
    "TailSummand",
    "SplitComplex",
    "SplitMap",
    "BigradedSeries",
    "shift_complex",
    "subdivide",
    "cone",
    "poincare",
    "euler",
    "normal_form",
    "is_contractible",
    "is_equivalent",
]

# |u| = t^(2r-2) q^r and |ξ| = t q
U_DEGREE = AffineBidegree(2, -2, 1, 0)
XI_DEGREE = AffineBidegree(0, 1, 0, 1)
T_SHIFT = AffineBidegree.constant(1, 0)

Shift = Union[AffineBidegree, Bidegree]


def _affine(s: Shift) -> AffineBidegree:
    return AffineBidegree.of(s) if isinstance(s, Bidegree) else s


@dataclass(frozen=True)
class PairSummand:
    """``Λ = F2<1, x>`` with ``d x = 1``; ``base`` is the degree of ``1``."""

    label: str
    base: AffineBidegree
    q_len: int = 1
    t_len: int = 1

    def __post_init__(self):
        if not isinstance(self.q_len, int) or self.q_len < 1:
            raise StructuralError(f"pair {self.label!r}: q_len must be a positive integer, got {self.q_len!r}")
        if not isinstance(self.t_len, int):
            raise StructuralError(f"pair {self.label!r}: t_len must be an integer")

    @property
    def partner(self) -> AffineBidegree:
        return self.base + AffineBidegree.constant(self.t_len, self.q_len)

    def shape(self) -> tuple:
        return ("pair", self.q_len, self.t_len)

    def key(self) -> tuple:
        return (0, _deg_key(self.base), self.q_len, self.t_len)

    def _map_degrees(self, fn) -> "PairSummand":
        return replace(self, base=fn(self.base))

    def to_json(self) -> dict:
        return {"label": self.label, "base": self.base.to_json(), "q_len": self.q_len, "t_len": self.t_len}


@dataclass(frozen=True)
class FreeSummand:
    """A single cycle."""

    label: str
    degree: AffineBidegree

    def shape(self) -> tuple:
        return ("free",)

    def key(self) -> tuple:
        return (1, _deg_key(self.degree))

    def _map_degrees(self, fn) -> "FreeSummand":
        return replace(self, degree=fn(self.degree))

    def to_json(self) -> dict:
        return {"label": self.label, "degree": self.degree.to_json()}


@dataclass(frozen=True)
class TailSummand:
    """``theta · F2[u] ⊗ Λ(ξ)``: generators ``u^n ξ^k`` at ``theta + n u_deg + k xi_deg``."""

    theta: AffineBidegree
    u_deg: AffineBidegree = U_DEGREE
    xi_deg: AffineBidegree = XI_DEGREE
    label: str = "tail"

    def shape(self) -> tuple:
        return ("tail", self.u_deg, self.xi_deg)

    def key(self) -> tuple:
        return (2, _deg_key(self.theta), _deg_key(self.u_deg), _deg_key(self.xi_deg))

    def _map_degrees(self, fn) -> "TailSummand":
        return replace(self, theta=fn(self.theta))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "theta": self.theta.to_json(),
            "u_deg": self.u_deg.to_json(),
            "xi_deg": self.xi_deg.to_json(),
        }


Summand = Union[PairSummand, FreeSummand, TailSummand]


def _deg_key(d: AffineBidegree) -> tuple:
    return (d.t_slope, d.q_slope, d.t_const, d.q_const)


@dataclass(frozen=True)
class SplitComplex:
    pairs: Tuple[PairSummand, ...] = ()
    frees: Tuple[FreeSummand, ...] = ()
    tail: Optional[TailSummand] = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "frees", tuple(self.frees))
        seen = set()
        for s in self.summands():
            if s.label in seen:
                raise StructuralError(f"duplicate summand label {s.label!r}")
            seen.add(s.label)

    def summands(self) -> Iterator[Summand]:
        yield from self.pairs
        yield from self.frees
        if self.tail is not None:
            yield self.tail

    def summand(self, label: str) -> Summand:
        for s in self.summands():
            if s.label == label:
                return s
        raise StructuralError(f"no summand labelled {label!r}")

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(s.label for s in self.summands())

    def is_zero(self) -> bool:
        return not self.pairs and not self.frees and self.tail is None

    @property
    def head(self) -> "SplitComplex":
        return SplitComplex(self.pairs, self.frees, None)

    def is_concrete(self) -> bool:
        return all(
            d.is_constant()
            for s in self.summands()
            for d in ((s.base,) if isinstance(s, PairSummand) else (s.degree,) if isinstance(s, FreeSummand)
                      else (s.theta, s.u_deg, s.xi_deg))
        )

    def map_degrees(self, fn, tail_all: bool = False) -> "SplitComplex":
        """Apply ``fn`` to every base degree (and to tail u/ξ degrees if ``tail_all``)."""
        tail = self.tail
        if tail is not None:
            tail = replace(tail, theta=fn(tail.theta))
            if tail_all:
                tail = replace(tail, u_deg=fn(tail.u_deg), xi_deg=fn(tail.xi_deg))
        return SplitComplex(
            tuple(p._map_degrees(fn) for p in self.pairs), tuple(f._map_degrees(fn) for f in self.frees), tail
        )

    def relabel(self, suffix: str = "", prefix: str = "") -> "SplitComplex":
        return SplitComplex(
            tuple(replace(p, label=prefix + p.label + suffix) for p in self.pairs),
            tuple(replace(f, label=prefix + f.label + suffix) for f in self.frees),
            None if self.tail is None else replace(self.tail, label=prefix + self.tail.label + suffix),
        )

    def without(self, labels: Iterable[str]) -> "SplitComplex":
        drop = set(labels)
        return SplitComplex(
            tuple(p for p in self.pairs if p.label not in drop),
            tuple(f for f in self.frees if f.label not in drop),
            None if self.tail is None or self.tail.label in drop else self.tail,
        )

    def __add__(self, other: "SplitComplex") -> "SplitComplex":
        """Direct sum; labels must stay distinct."""
        if not isinstance(other, SplitComplex):
            return NotImplemented
        if self.tail is not None and other.tail is not None:
            raise StructuralError("a split complex holds at most one tail")
        return SplitComplex(self.pairs + other.pairs, self.frees + other.frees, self.tail or other.tail)

    def substitute(self, k: int = 1) -> "SplitComplex":
        """Replace ``r`` by ``r + k`` in every degree."""
        return self.map_degrees(lambda d: d.substitute(k), tail_all=True)

    def instantiate(self, r: int) -> "SplitComplex":
        return self.map_degrees(lambda d: d.instantiate(r), tail_all=True)

    def generator_count(self) -> Optional[int]:
        """Number of generators, or ``None`` when a tail makes it infinite."""
        if self.tail is not None:
            return None
        return 2 * len(self.pairs) + len(self.frees)

    def __str__(self) -> str:
        parts = [f"{_shift_text(p.base)}Λ[{p.label}]" + ("" if (p.q_len, p.t_len) == (1, 1) else f"(q^{p.q_len}, t^{p.t_len})")
                 for p in self.pairs]
        parts += [f"{_shift_text(f.degree)}F2[{f.label}]" for f in self.frees]
        if self.tail is not None:
            parts.append(f"{_shift_text(self.tail.theta)}F2[u]⊗Λ(ξ)")
        return " ⊕ ".join(parts) or "0"

    def to_json(self) -> dict:
        return {
            "pairs": [p.to_json() for p in self.pairs],
            "frees": [f.to_json() for f in self.frees],
            "tail": None if self.tail is None else self.tail.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "SplitComplex":
        try:
            pairs = tuple(
                PairSummand(str(p["label"]), AffineBidegree.from_json(p["base"]), int(p["q_len"]), int(p.get("t_len", 1)))
                for p in data.get("pairs", ())
            )
            frees = tuple(FreeSummand(str(f["label"]), AffineBidegree.from_json(f["degree"])) for f in data.get("frees", ()))
            t = data.get("tail")
            tail = None
            if t is not None:
                tail = TailSummand(
                    AffineBidegree.from_json(t["theta"]),
                    AffineBidegree.from_json(t["u_deg"]) if "u_deg" in t else U_DEGREE,
                    AffineBidegree.from_json(t["xi_deg"]) if "xi_deg" in t else XI_DEGREE,
                    str(t.get("label", "tail")),
                )
        except (KeyError, TypeError, AttributeError) as exc:
            raise FormatError(f"malformed split complex: {exc!r}") from None
        return cls(pairs, frees, tail)


def _shift_text(d: AffineBidegree) -> str:
    s = str(d)
    return "" if s == "1" else f"{s}·"


@dataclass(frozen=True)
class SplitMap:
    """Degree-zero isomorphisms between the listed (source, target) summands; zero elsewhere."""

    matches: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "matches", tuple((str(a), str(b)) for a, b in self.matches))

    @classmethod
    def identity(cls, c: SplitComplex) -> "SplitMap":
        return cls(tuple((l, l) for l in c.labels))


def shift_complex(c: SplitComplex, s: Shift) -> SplitComplex:
    s = _affine(s)
    return c.map_degrees(lambda d: d + s)


def subdivide(c: SplitComplex, step: Shift = U_DEGREE) -> SplitComplex:
    """Split every pair of q-length n into n pairs of q-length 1 spaced by ``step``."""
    if c.tail is not None:
        raise DomainError("subdivision applies to finite complexes; split off the tail first")
    step = _affine(step)
    pairs: List[PairSummand] = []
    for p in c.pairs:
        if p.q_len == 1:
            pairs.append(p)
            continue
        for j in range(p.q_len):
            pairs.append(PairSummand(f"{p.label}:{j + 1}", p.base + step.scale(j), 1, p.t_len))
    return SplitComplex(tuple(pairs), c.frees, None)


def _check_match(src: Summand, tgt: Summand) -> None:
    if type(src) is not type(tgt):
        raise StructuralError(f"cannot match {type(src).__name__} {src.label!r} with {type(tgt).__name__} {tgt.label!r}")
    if isinstance(src, PairSummand):
        if src.shape() != tgt.shape():
            raise StructuralError(f"pairs {src.label!r} and {tgt.label!r} have different lengths")
        if src.base != tgt.base:
            raise StructuralError(f"pairs {src.label!r} ({src.base}) and {tgt.label!r} ({tgt.base}) differ in degree")
    elif isinstance(src, FreeSummand):
        if src.degree != tgt.degree:
            raise StructuralError(f"cycles {src.label!r} and {tgt.label!r} differ in degree")
    else:
        if src.u_deg != tgt.u_deg or src.xi_deg != tgt.xi_deg:
            raise StructuralError("tails with different u or ξ degrees cannot be matched")


def cone(f: SplitMap, source: SplitComplex, target: SplitComplex) -> SplitComplex:
    """Mapping cone with every matched isomorphism component cancelled.

    Unmatched target summands keep their degrees (label suffix ``.1``);
    unmatched source summands are shifted by ``t`` (suffix ``.0``).  A
    tail matched to a tail cancels outright when the thetas agree.  When
    they differ by ``u`` the map is ``u^n ξ^k -> u^(n∓1) ξ^k`` and the
    one uncancelled ``Λ(ξ)`` survives as a pair.
    """
    src_used: Dict[str, str] = {}
    tgt_used: Dict[str, str] = {}
    for a, b in f.matches:
        if a in src_used:
            raise StructuralError(f"source summand {a!r} is matched twice")
        if b in tgt_used:
            raise StructuralError(f"target summand {b!r} is matched twice")
        _check_match(source.summand(a), target.summand(b))
        src_used[a] = b
        tgt_used[b] = a

    pairs: List[PairSummand] = []
    frees: List[FreeSummand] = []
    tail: Optional[TailSummand] = None
    for p in target.pairs:
        if p.label not in tgt_used:
            pairs.append(replace(p, label=p.label + ".1"))
    for fr in target.frees:
        if fr.label not in tgt_used:
            frees.append(replace(fr, label=fr.label + ".1"))
    for p in source.pairs:
        if p.label not in src_used:
            pairs.append(replace(p, label=p.label + ".0", base=p.base + T_SHIFT))
    for fr in source.frees:
        if fr.label not in src_used:
            frees.append(replace(fr, label=fr.label + ".0", degree=fr.degree + T_SHIFT))

    st, tt = source.tail, target.tail
    if st is not None and st.label in src_used:
        if not st.xi_deg.is_constant() or st.xi_deg.q_const < 1:
            raise StructuralError("tail cancellation needs a constant ξ degree with positive q-part")
        if tt.theta == st.theta:
            pass
        elif tt.theta == st.theta + st.u_deg:
            # onto, kernel is the u^0 part of the source
            pairs.append(PairSummand(st.label + ".0", st.theta + T_SHIFT, st.xi_deg.q_const, st.xi_deg.t_const))
        elif st.theta == tt.theta + tt.u_deg:
            # into, cokernel is the u^0 part of the target
            pairs.append(PairSummand(tt.label + ".1", tt.theta, tt.xi_deg.q_const, tt.xi_deg.t_const))
        else:
            raise StructuralError(f"tails at {st.theta} and {tt.theta} admit no structured map")
    else:
        if st is not None and tt is not None:
            raise StructuralError("two unmatched tails cannot coexist in a split complex")
        if tt is not None:
            tail = replace(tt, label=tt.label + ".1")
        elif st is not None:
            tail = replace(st, label=st.label + ".0", theta=st.theta + T_SHIFT)
    return SplitComplex(tuple(pairs), tuple(frees), tail)


class BigradedSeries:
    """Generating function ``sum n_{a,b} t^a q^b`` known for ``q``-degrees below ``order``."""

    __slots__ = ("_terms", "order")

    def __init__(self, terms: Mapping[Bidegree, int], order: int):
        self._terms = {d: terms[d] for d in sorted(terms, key=lambda d: (d.q, d.t)) if terms[d] and d.q < order}
        self.order = order

    @property
    def terms(self) -> Dict[Bidegree, int]:
        return dict(self._terms)

    def coeff(self, t: int, q: int) -> int:
        return self._terms.get(Bidegree(t, q), 0)

    def at_t(self, t: int) -> TruncatedSeries:
        """Specialise ``t`` to ``1`` or ``-1``."""
        if t not in (1, -1):
            raise DomainError("t can only be specialised to 1 or -1")
        acc: Dict[int, int] = {}
        for d, n in self._terms.items():
            acc[d.q] = acc.get(d.q, 0) + n * t ** (d.t % 2)
        return TruncatedSeries(LaurentPoly(acc), self.order)

    def total(self) -> int:
        return sum(self._terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        a = {d: n for d, n in self._terms.items() if d.q < order}
        b = {d: n for d, n in other._terms.items() if d.q < order}
        return a == b

    __hash__ = None

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for d, n in self._terms.items():
            mono = " ".join(p for p in (format_monomial("t", d.t), format_monomial("q", d.q)) if p)
            body = str(n) if not mono else (mono if n == 1 else f"{n}{mono}")
            out.append(body)
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"BigradedSeries({self} + O(q^{self.order}))"

    def to_json(self) -> dict:
        return {"terms": [[d.t, d.q, n] for d, n in self._terms.items()], "order": self.order}


def _generators(c: SplitComplex, r: int, order: int) -> Iterator[Bidegree]:
    for p in c.pairs:
        yield p.base.at(r)
        yield p.partner.at(r)
    for f in c.frees:
        yield f.degree.at(r)
    if c.tail is not None:
        tail = c.tail
        theta, u, xi = tail.theta.at(r), tail.u_deg.at(r), tail.xi_deg.at(r)
        if u.q < 1:
            raise DomainError(f"tail u-degree {u} at r={r} has no positive q-part; its series does not converge")
        d = theta
        while d.q < order or d.q + xi.q < order:
            yield d
            yield d + xi
            d = d + u


def poincare(c: SplitComplex, r: int, order: int) -> BigradedSeries:
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"colour must be a positive integer, got {r!r}")
    acc: Dict[Bidegree, int] = {}
    for d in _generators(c, r, order):
        if d.q < order:
            acc[d] = acc.get(d, 0) + 1
    return BigradedSeries(acc, order)


def euler(c: SplitComplex, r: int, order: int) -> TruncatedSeries:
    """Signed generator count ``sum (-1)^t q^a``."""
    return poincare(c, r, order).at_t(-1)


def normal_form(c: SplitComplex) -> SplitComplex:
    """Canonical labels and ordering; no pair is ever cancelled internally."""
    pairs = sorted(c.pairs, key=PairSummand.key)
    frees = sorted(c.frees, key=FreeSummand.key)
    return SplitComplex(
        tuple(replace(p, label=f"p{i}") for i, p in enumerate(pairs)),
        tuple(replace(f, label=f"f{i}") for i, f in enumerate(frees)),
        None if c.tail is None else replace(c.tail, label="tail"),
    )


def is_contractible(c: SplitComplex) -> bool:
    return normal_form(c).is_zero()


def is_equivalent(a: SplitComplex, b: SplitComplex) -> bool:
    return normal_form(a) == normal_form(b)
