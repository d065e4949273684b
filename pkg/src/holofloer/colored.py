"""Knot data and the stable r-coloured complexes built from it.

For r >= 2 the coloured complex splits as a finite head and a shifted
unknot tail.  Each vertical arrow ``x -> y`` of length ``n`` in a
vertically simplified CFK basis becomes ``n`` length-one pairs; the first
cycle sits at

    t^((2r-2)h + m) q^(r h),   h = A(y) + g,   m = M(y) - M(b),

where ``b`` is the bottom generator, and consecutive cycles differ by
``|u| = t^(2r-2) q^r``.  The tail is anchored the same way at the
distinguished generator with ``h = tau + g``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import AffineBidegree, LaurentPoly, TruncatedSeries
from .alexander import DEFAULT_ORDER, AlexanderPoly, colored_unreduced, symmetrize
from .complexes import (
    U_DEGREE,
    FreeSummand,
    PairSummand,
    SplitComplex,
    TailSummand,
    euler,
    subdivide,
)
from .errors import DomainError, FormatError

__all__ = [
    "CfkGenerator",
    "CfkBasis",
    "HeadSpec",
    "KnotData",
    "EulerReport",
    "knot_from_cfk",
    "colored_body",
    "build_colored_complex",
    "colored_euler_check",
    "BUILTIN_KNOTS",
    "builtin_knot",
    "knot_to_json",
    "knot_from_json",
    "validate_knot",
    "load_knot_file",
]


@dataclass(frozen=True)
class CfkGenerator:
    label: str
    maslov: int
    alexander: int


@dataclass(frozen=True)
class CfkBasis:
    """A vertically simplified basis: arrows ``x -> y`` with ``d x = y``."""

    generators: Tuple[CfkGenerator, ...]
    vertical_arrows: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "vertical_arrows", tuple((str(a), str(b)) for a, b in self.vertical_arrows))
        if not self.generators:
            raise FormatError("cfk: a basis needs at least one generator")
        by_label: Dict[str, CfkGenerator] = {}
        for g in self.generators:
            if g.label in by_label:
                raise FormatError(f"cfk.generators: duplicate label {g.label!r}")
            by_label[g.label] = g
        touched = set()
        for i, (a, b) in enumerate(self.vertical_arrows):
            for end in (a, b):
                if end not in by_label:
                    raise FormatError(f"cfk.vertical_arrows[{i}]: unknown generator {end!r}")
                if end in touched:
                    raise FormatError(f"cfk.vertical_arrows[{i}]: generator {end!r} lies on two arrows")
                touched.add(end)
            x, y = by_label[a], by_label[b]
            if x.alexander <= y.alexander:
                raise FormatError(
                    f"cfk.vertical_arrows[{i}]: {a}->{b} must lower the Alexander grading "
                    f"({x.alexander} -> {y.alexander})"
                )
            if x.maslov - y.maslov != 1:
                raise FormatError(
                    f"cfk.vertical_arrows[{i}]: {a}->{b} must lower the Maslov grading by 1 "
                    f"({x.maslov} -> {y.maslov})"
                )
        free = [g for g in self.generators if g.label not in touched]
        if len(free) != 1:
            raise FormatError(f"cfk: expected exactly one generator off the arrows, found {len(free)}")

    def generator(self, label: str) -> CfkGenerator:
        for g in self.generators:
            if g.label == label:
                return g
        raise FormatError(f"cfk: unknown generator {label!r}")

    @property
    def chi0(self) -> CfkGenerator:
        touched = {end for arrow in self.vertical_arrows for end in arrow}
        return next(g for g in self.generators if g.label not in touched)

    @property
    def bottom(self) -> CfkGenerator:
        """Least Maslov grading among generators of minimal Alexander grading."""
        low = min(g.alexander for g in self.generators)
        return min((g for g in self.generators if g.alexander == low), key=lambda g: (g.maslov, g.label))

    def alexander_polynomial(self) -> AlexanderPoly:
        return symmetrize(LaurentPoly([(g.alexander, (-1) ** (g.maslov % 2)) for g in self.generators]))

    def to_json(self) -> dict:
        return {
            "generators": [{"label": g.label, "maslov": g.maslov, "alexander": g.alexander} for g in self.generators],
            "vertical_arrows": [[a, b] for a, b in self.vertical_arrows],
        }

    @classmethod
    def from_json(cls, data) -> "CfkBasis":
        try:
            gens = []
            for i, g in enumerate(data["generators"]):
                try:
                    gens.append(CfkGenerator(str(g["label"]), _int(g["maslov"]), _int(g["alexander"])))
                except (KeyError, TypeError, ValueError) as exc:
                    raise FormatError(f"cfk.generators[{i}]: {exc!r}") from None
            arrows = []
            for i, pair in enumerate(data.get("vertical_arrows", [])):
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise FormatError(f"cfk.vertical_arrows[{i}]: expected [source, target]")
                arrows.append((pair[0], pair[1]))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"cfk: {exc!r}") from None
        return cls(tuple(gens), tuple(arrows))


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"expected an integer, got {x!r}")
    return x


@dataclass(frozen=True)
class HeadSpec:
    """One head chain: ``length`` pairs whose first cycle sits at ``base``."""

    base: AffineBidegree
    length: int = 1
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise FormatError(f"head_spec: length must be a positive integer, got {self.length!r}")

    def to_json(self) -> dict:
        out = {"base": self.base.to_json(), "length": self.length}
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class KnotData:
    name: str
    alexander: AlexanderPoly
    genus: int
    tau: int
    head_spec: Tuple[HeadSpec, ...] = ()
    theta: AffineBidegree = AffineBidegree()
    cfk: Optional[CfkBasis] = None

    def __post_init__(self):
        object.__setattr__(self, "head_spec", tuple(self.head_spec))


def _anchor(h: int, m: int) -> AffineBidegree:
    """``t^((2r-2)h + m) q^(r h)``."""
    return AffineBidegree(2 * h, m - 2 * h, h, 0)


def knot_from_cfk(
    basis: CfkBasis, genus: int, tau: int, name: str = "", alexander: Optional[AlexanderPoly] = None
) -> KnotData:
    if genus != max(abs(g.alexander) for g in basis.generators):
        raise FormatError(f"genus {genus} differs from the largest |Alexander grading| of the basis")
    if basis.chi0.alexander != tau:
        raise FormatError(f"tau {tau} differs from the Alexander grading {basis.chi0.alexander} of the free generator")
    derived = basis.alexander_polynomial()
    if alexander is not None and alexander != derived:
        raise FormatError(f"alexander {alexander} disagrees with the basis, which gives {derived}")
    b = basis.bottom
    head = []
    for src, tgt in basis.vertical_arrows:
        x, y = basis.generator(src), basis.generator(tgt)
        head.append(HeadSpec(_anchor(y.alexander + genus, y.maslov - b.maslov), x.alexander - y.alexander, tgt))
    theta = _anchor(tau + genus, basis.chi0.maslov - b.maslov)
    return KnotData(name, derived, genus, tau, tuple(head), theta, basis)


def colored_body(k: KnotData) -> SplitComplex:
    """The coloured complex as one object with degrees affine in ``r``."""
    pairs = tuple(
        PairSummand(spec.label or f"h{i}", spec.base, spec.length, 1) for i, spec in enumerate(k.head_spec)
    )
    head = subdivide(SplitComplex(pairs), U_DEGREE)
    return SplitComplex(head.pairs, (), TailSummand(k.theta))


def _cfk_complex(k: KnotData) -> SplitComplex:
    if k.cfk is None:
        raise DomainError(f"{k.name or 'knot'}: the 1-coloured complex needs CFK basis data")
    basis = k.cfk
    b = basis.bottom
    pairs = []
    for src, tgt in basis.vertical_arrows:
        x, y = basis.generator(src), basis.generator(tgt)
        base = AffineBidegree.constant(y.maslov - b.maslov, y.alexander + k.genus)
        pairs.append(PairSummand(tgt, base, x.alexander - y.alexander, 1))
    chi = basis.chi0
    free = FreeSummand(chi.label, AffineBidegree.constant(chi.maslov - b.maslov, chi.alexander + k.genus))
    return SplitComplex(tuple(pairs), (free,), None)


def build_colored_complex(k: KnotData, r: int) -> SplitComplex:
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"colour must be a positive integer, got {r!r}")
    if r == 1:
        return _cfk_complex(k)
    return colored_body(k).instantiate(r)


@dataclass(frozen=True)
class EulerReport:
    """Comparison of ``euler`` with ``sign · q^normalization · colored_unreduced``."""

    r: int
    order: int
    match: bool
    normalization: int = 0
    sign: int = 1
    first_mismatch: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "order": self.order,
            "match": self.match,
            "normalization": self.normalization,
            "sign": self.sign,
            "first_mismatch": self.first_mismatch,
        }

    def __str__(self) -> str:
        mono = ("-" if self.sign < 0 else "") + f"q^{self.normalization}"
        if self.match:
            return f"r={self.r}: match mod q^{self.order}, normalization {mono}"
        return f"r={self.r}: mismatch at q^{self.first_mismatch} (normalization {mono})"


def colored_euler_check(k: KnotData, r: int, order: int = DEFAULT_ORDER) -> EulerReport:
    e = euler(build_colored_complex(k, r), r, order)
    ref = colored_unreduced(k.alexander, r, order)
    ve, vr = e.valuation(), ref.valuation()
    if ve is None or vr is None:
        diff = e.first_difference(ref)
        return EulerReport(r, order, diff is None, 0, 1, diff)
    c = ve - vr
    sign = 1 if e.coeff(ve) * ref.coeff(vr) > 0 else -1
    scaled = ref.shift(c) * sign
    diff = e.first_difference(scaled)
    return EulerReport(r, min(e.order, scaled.order), diff is None, c, sign, diff)


def validate_knot(k: KnotData, rs: Sequence[int] = (2, 3), order: int = DEFAULT_ORDER, strict: bool = True) -> List[EulerReport]:
    """Euler consistency at each colour; raises (or warns if not ``strict``) on mismatch."""
    reports = [colored_euler_check(k, r, order) for r in rs]
    for rep in reports:
        if not rep.match:
            msg = f"{k.name or 'knot'}: Euler characteristic disagrees with the coloured series, {rep}"
            if strict:
                raise FormatError(msg)
            warnings.warn(msg, stacklevel=2)
    return reports


def _gens(spec: str) -> Tuple[CfkGenerator, ...]:
    out = []
    for item in spec.split():
        label, m, a = item.split(":")
        out.append(CfkGenerator(label, int(m), int(a)))
    return tuple(out)


def _torus_2(n: int) -> CfkBasis:
    g = (n - 1) // 2
    gens = tuple(CfkGenerator(f"x{i}", -i, g - i) for i in range(n))
    arrows = tuple((f"x{i}", f"x{i + 1}") for i in range(1, n, 2))
    return CfkBasis(gens, arrows)


BUILTIN_KNOTS: Dict[str, KnotData] = {
    "unknot": knot_from_cfk(CfkBasis(_gens("x:0:0")), 0, 0, "unknot"),
    "3_1": knot_from_cfk(CfkBasis(_gens("a:0:1 b:-1:0 c:-2:-1"), (("b", "c"),)), 1, 1, "3_1"),
    "4_1": knot_from_cfk(CfkBasis(_gens("a:1:1 b:0:0 c:0:0 d:-1:-1 e:0:0"), (("a", "b"), ("c", "d"))), 1, 0, "4_1"),
    "T(2,5)": knot_from_cfk(_torus_2(5), 2, 2, "T(2,5)"),
    "T(2,7)": knot_from_cfk(_torus_2(7), 3, 3, "T(2,7)"),
}


def builtin_knot(name: str) -> KnotData:
    try:
        return BUILTIN_KNOTS[name]
    except KeyError:
        raise FormatError(f"unknown knot {name!r}; built-ins are {', '.join(BUILTIN_KNOTS)}") from None


def knot_to_json(k: KnotData) -> dict:
    out: dict = {"name": k.name, "alexander": k.alexander.to_json(), "genus": k.genus, "tau": k.tau}
    if k.cfk is not None:
        out["cfk"] = k.cfk.to_json()
    out["head_spec"] = [h.to_json() for h in k.head_spec]
    out["theta"] = k.theta.to_json()
    return out


def knot_from_json(data, validate: bool = True, strict: bool = True) -> KnotData:
    """Parse the knot file format; with ``validate`` the Euler check runs at r = 2, 3."""
    if not isinstance(data, dict):
        raise FormatError("knot file: top level must be an object")
    for key in ("name", "alexander", "genus", "tau"):
        if key not in data:
            raise FormatError(f"knot file: missing field {key!r}")
    try:
        name = str(data["name"])
        genus, tau = _int(data["genus"]), _int(data["tau"])
    except ValueError as exc:
        raise FormatError(f"knot file: genus/tau: {exc}") from None
    if genus < 0:
        raise FormatError("genus: must be non-negative")
    alexander = AlexanderPoly.from_json(data["alexander"])
    head: Optional[Tuple[HeadSpec, ...]] = None
    if "head_spec" in data:
        specs = []
        for i, h in enumerate(data["head_spec"]):
            try:
                specs.append(HeadSpec(AffineBidegree.from_json(h["base"]), _int(h.get("length", 1)), str(h.get("label", ""))))
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"head_spec[{i}]: {exc}") from None
        head = tuple(specs)
    theta = AffineBidegree.from_json(data["theta"]) if "theta" in data else None
    if "cfk" in data:
        k = knot_from_cfk(CfkBasis.from_json(data["cfk"]), genus, tau, name, alexander)
        k = KnotData(name, alexander, genus, tau, k.head_spec if head is None else head,
                     k.theta if theta is None else theta, k.cfk)
    else:
        if head is None or theta is None:
            raise FormatError("knot file: without 'cfk' both 'head_spec' and 'theta' are required")
        k = KnotData(name, alexander, genus, tau, head, theta, None)
    if validate:
        validate_knot(k, strict=strict)
    return k


def load_knot_file(path: Union[str, Path], validate: bool = True, strict: bool = True) -> KnotData:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read knot file {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return knot_from_json(data, validate, strict)
