"""Symbolic sequences of complexes and homological holonomicity certificates.

A :class:`SymbolicSequence` is one split complex with affine degrees,
standing for ``r -> body.instantiate(r)``.  The Weyl functors act on it by
``M: shift by |u| = t^(2r-2) q^r`` and ``L: r -> r+1``.

Certification is a cone tower.  First the tail is collapsed by the cone of
``u^n ξ^k -> u^(n-1) ξ^k`` from ``S`` to ``|u| S``.  Then each congruence
class (pairs whose degrees grow at the same slope) is removed by the cone
of ``S -> σ L S``, where ``σ = -slope`` makes the class map a degree-zero
isomorphism.  The last object is zero.  At ``t = -1`` each cone with
target shift ``σ`` and functor ``F`` multiplies the Euler characteristic by
``-(1 - σ F)``, so the product of the factors annihilates the coloured
series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AffineBidegree, Bidegree, LaurentPoly
from .alexander import DEFAULT_ORDER
from .colored import KnotData, colored_body
from .complexes import (
    U_DEGREE,
    FreeSummand,
    PairSummand,
    SplitComplex,
    SplitMap,
    cone,
    is_contractible,
    is_equivalent,
    shift_complex,
)
from .errors import DomainError, InvariantViolation, StructuralError
from .weyl import AnnihilationReport, WeylElement, unreduced_sequence, verify_annihilation

__all__ = [
    "SymbolicSequence",
    "CongruenceClass",
    "Classification",
    "CertificateStep",
    "HolonomyCertificate",
    "Decategorification",
    "TAIL_COLLAPSE",
    "CLASS_CONE",
    "FINAL_ISO",
    "functor_M",
    "functor_L",
    "classify",
    "tail_collapse",
    "reduce_step",
    "certify",
    "decategorify",
    "step_factor",
    "check_step_coherence",
    "constant_sequence",
    "summing_complex",
    "summing_inclusion",
]

TAIL_COLLAPSE = "tail_collapse"
CLASS_CONE = "class_cone"
FINAL_ISO = "final_iso"


@dataclass(frozen=True)
class SymbolicSequence:
    body: SplitComplex
    start_index: Optional[int] = None

    def __post_init__(self):
        if self.start_index is None:
            object.__setattr__(self, "start_index", 2 if self.body.tail is not None else 1)

    def instantiate(self, r: int) -> SplitComplex:
        if r < self.start_index:
            raise DomainError(f"index {r} is below the start index {self.start_index}")
        return self.body.instantiate(r)

    def to_json(self) -> dict:
        return {"start_index": self.start_index, "body": self.body.to_json()}


def functor_M(s: SymbolicSequence) -> SymbolicSequence:
    return SymbolicSequence(shift_complex(s.body, U_DEGREE), s.start_index)


def functor_L(s: SymbolicSequence) -> SymbolicSequence:
    return SymbolicSequence(s.body.substitute(1), s.start_index)


@dataclass(frozen=True)
class CongruenceClass:
    ratio: Bidegree
    members: Tuple[str, ...]

    def to_json(self) -> dict:
        return {"ratio": {"t": self.ratio.t, "q": self.ratio.q}, "members": list(self.members)}


@dataclass(frozen=True)
class Classification:
    reduced: bool
    regular: bool
    classes: Tuple[CongruenceClass, ...]


def _degree(summand) -> AffineBidegree:
    return summand.base if isinstance(summand, PairSummand) else summand.degree


def classify(s: SymbolicSequence) -> Classification:
    body = s.body
    if body.tail is not None:
        raise DomainError("classification needs a tail-free sequence; run tail_collapse first")
    groups: Dict[Bidegree, List[str]] = {}
    for summand in list(body.pairs) + list(body.frees):
        groups.setdefault(_degree(summand).slope, []).append(summand.label)
    classes = tuple(CongruenceClass(k, tuple(groups[k])) for k in sorted(groups, key=lambda b: (b.t, b.q)))
    reduced = not body.frees and all(p.q_len == 1 for p in body.pairs)
    # regular: each member's degree ratio between consecutive indices is its class slope
    regular = True
    for summand in list(body.pairs) + list(body.frees):
        d = _degree(summand)
        for r in range(s.start_index, s.start_index + 3):
            if d.at(r + 1) - d.at(r) != d.slope:
                regular = False
    if len({c.ratio for c in classes}) != len(classes):
        regular = False
    return Classification(reduced, regular, classes)


@dataclass(frozen=True)
class CertificateStep:
    kind: str
    shift: AffineBidegree
    classes_before: int
    matched: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "shift": self.shift.to_json(), "classes_before": self.classes_before}


def _tail_map(s: SymbolicSequence) -> Tuple[SplitComplex, SplitComplex, SplitMap]:
    tail = s.body.tail.label
    return s.body, shift_complex(s.body, s.body.tail.u_deg), SplitMap(((tail, tail),))


def tail_collapse(s: SymbolicSequence) -> Tuple[SymbolicSequence, CertificateStep]:
    """Cone of ``S -> |u| S``; leaves ``t Head ⊕ |u| Head ⊕ t θ Λ(ξ)``."""
    if s.body.tail is None:
        raise DomainError("tail_collapse needs a sequence with a tail")
    source, target, f = _tail_map(s)
    result = SymbolicSequence(cone(f, source, target), s.start_index)
    head_classes = len({_degree(x).slope for x in list(s.body.pairs) + list(s.body.frees)})
    step = CertificateStep(TAIL_COLLAPSE, s.body.tail.u_deg, head_classes, (s.body.tail.label,))
    return result, step


def _class_shift(c: CongruenceClass) -> AffineBidegree:
    return AffineBidegree.constant(-c.ratio.t, -c.ratio.q)


def reduce_step(s: SymbolicSequence, class_choice: CongruenceClass) -> Tuple[SymbolicSequence, CertificateStep]:
    """Cone of ``S -> σ L S`` (identity on the class) with ``σ`` the inverse class slope."""
    info = classify(s)
    if class_choice not in info.classes:
        raise DomainError(f"class with slope {class_choice.ratio} is not a congruence class of this sequence")
    if not (info.reduced and info.regular):
        raise DomainError("reduce_step needs a reduced, regular sequence")
    sigma = _class_shift(class_choice)
    target = shift_complex(s.body.substitute(1), sigma)
    f = SplitMap(tuple((m, m) for m in class_choice.members))
    result = SymbolicSequence(cone(f, s.body, target), s.start_index)
    return result, CertificateStep(CLASS_CONE, sigma, len(info.classes), class_choice.members)


@dataclass(frozen=True)
class HolonomyCertificate:
    knot: str
    steps: Tuple[CertificateStep, ...]
    stages: Tuple[SymbolicSequence, ...]
    final: SplitComplex
    decategorified: WeylElement

    @property
    def start_index(self) -> int:
        return self.stages[0].start_index

    def class_cone_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == CLASS_CONE)

    def to_json(self) -> dict:
        return {
            "knot": self.knot,
            "start_index": self.start_index,
            "steps": [s.to_json() for s in self.steps],
            "final_contractible": is_contractible(self.final),
            "decategorified": self.decategorified.to_json(),
            "operator": str(self.decategorified),
        }


def step_factor(step: CertificateStep) -> WeylElement:
    """The t = -1 shadow ``1 - σF`` of one cone step (``F`` is M, L or nothing)."""
    s = step.shift
    if step.kind == FINAL_ISO:
        return WeylElement.scalar(1)
    if s.t_slope % 2:
        raise InvariantViolation(f"shift {s} has an odd t-slope; its sign depends on r")
    sign = -1 if s.t_const % 2 else 1
    if s.q_slope < 0:
        raise InvariantViolation(f"shift {s} has a negative q-slope")
    coeff = LaurentPoly.monomial(s.q_const, sign)
    if step.kind == TAIL_COLLAPSE:
        return WeylElement.scalar(1) - WeylElement.monomial(s.q_slope, 0, coeff)
    if step.kind == CLASS_CONE:
        # σ L acts as L then multiplication by q^(q_slope r)
        return WeylElement.scalar(1) - WeylElement.monomial(0, 1, coeff) * WeylElement.monomial(s.q_slope, 0)
    raise InvariantViolation(f"unknown step kind {step.kind!r}")


def certify(k: KnotData) -> HolonomyCertificate:
    s = SymbolicSequence(colored_body(k))
    stages = [s]
    steps: List[CertificateStep] = []
    if s.body.tail is not None:
        s, step = tail_collapse(s)
        if s.body.is_zero():
            raise InvariantViolation("tail collapse produced the zero object; the tower would be trivial")
        steps.append(step)
        stages.append(s)
    while True:
        info = classify(s)
        if not info.classes:
            break
        s, step = reduce_step(s, info.classes[0])
        after = len(classify(s).classes)
        if after != step.classes_before - 1:
            raise InvariantViolation(f"class count went from {step.classes_before} to {after}")
        steps.append(step)
        stages.append(s)
    steps.append(CertificateStep(FINAL_ISO, AffineBidegree(), 0))
    if not is_contractible(s.body):
        raise InvariantViolation(f"final object {s.body} is not contractible")
    operator = WeylElement.scalar(1)
    for step in steps:
        operator = operator * step_factor(step)
    return HolonomyCertificate(k.name, tuple(steps), tuple(stages), s.body, operator)


@dataclass(frozen=True)
class Decategorification:
    operator: WeylElement
    report: AnnihilationReport

    @property
    def verified(self) -> bool:
        return self.report.clean

    def to_json(self) -> dict:
        residual = self.report.to_json()["residual"]
        return {"r_max": self.report.r_max, "order": self.report.order, "residual": residual}


def decategorify(cert: HolonomyCertificate, k: KnotData, order: int = DEFAULT_ORDER, r_max: int = 12) -> Decategorification:
    seq = unreduced_sequence(k.alexander, order)
    report = verify_annihilation(cert.decategorified, seq, range(cert.start_index, r_max + 1), order)
    return Decategorification(cert.decategorified, report)


def _concrete_step(stage: SymbolicSequence, step: CertificateStep, r: int) -> SplitComplex:
    """The cone of the instantiated step map at colour ``r``."""
    source = stage.instantiate(r)
    if step.kind == TAIL_COLLAPSE:
        target = shift_complex(source, step.shift.at(r))
    elif step.kind == CLASS_CONE:
        target = shift_complex(stage.instantiate(r + 1), step.shift.at(r))
    else:
        raise DomainError(f"step kind {step.kind!r} has no map")
    return cone(SplitMap(tuple((m, m) for m in step.matched)), source, target)


def check_step_coherence(cert: HolonomyCertificate, rs: Sequence[int] = (2, 3, 4)) -> List[Tuple[int, int, bool]]:
    """For each cone step and colour, compare the concrete cone with the symbolic result."""
    out = []
    for i, step in enumerate(cert.steps):
        if step.kind == FINAL_ISO:
            continue
        before, after = cert.stages[i], cert.stages[i + 1]
        for r in rs:
            out.append((i, r, is_equivalent(_concrete_step(before, step, r), after.instantiate(r))))
    return out


def constant_sequence(c: SplitComplex) -> SymbolicSequence:
    """``r -> c`` for a concrete tail-free ``c``."""
    if not c.is_concrete():
        raise DomainError("a constant sequence needs r-independent degrees")
    return SymbolicSequence(c, 1)


def summing_complex(c: SplitComplex, n: int) -> SplitComplex:
    """``c^⊕ at n``: ``n + 1`` labelled copies of ``c``."""
    if n < 0:
        raise DomainError("summing index must be non-negative")
    out = SplitComplex()
    for i in range(n + 1):
        out = out + c.relabel(suffix=f"#{i}")
    return out


def summing_inclusion(c: SplitComplex, n: int) -> SplitMap:
    """Inclusion of the first ``n + 1`` copies into ``c^⊕`` at ``n + 1``."""
    return SplitMap(tuple((f"{l}#{i}", f"{l}#{i}") for i in range(n + 1) for l in c.labels))
