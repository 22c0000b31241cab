"""Knowledge-base containers: class axioms, role axioms, assertions, labels.

Loading rewrites the derived axiom forms into the uniform core so later
stages only see ``SubClassOf``/``EquivalentClasses``:

* ``Domain(r, C)``        becomes ``SubClassOf(Exists(r, Top), C)``
* ``Range(r, C)``         becomes ``SubClassOf(Top, ForAll(r, C))``
* ``DisjointClasses(A,B)`` becomes ``SubClassOf(A, Not(B))``
* symmetric role ``r``    becomes the sub-role pair ``r <-> inverse(r)``
* functional role ``r``   becomes the global constraint ``Top <= AtMost(1, r)``
  (exposed through :meth:`KnowledgeBase.cardinality_axioms`)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable

from .concepts import (
    And,
    AtMost,
    Atomic,
    ConceptExpr,
    Exists,
    ForAll,
    Not,
    RoleExpr,
    TOP,
    concept_names_in,
    data_property_names_in,
    disj,
    individual_names_in,
    role_names_in,
)
from .errors import KbError, NoExistentialFillers


# --- class-level axioms -----------------------------------------------------


@dataclass(frozen=True)
class SubClassOf:
    sub: ConceptExpr
    sup: ConceptExpr


@dataclass(frozen=True)
class EquivalentClasses:
    a: ConceptExpr
    b: ConceptExpr


@dataclass(frozen=True)
class DisjointClasses:
    a: ConceptExpr
    b: ConceptExpr


@dataclass(frozen=True)
class DomainAxiom:
    role: RoleExpr
    concept: ConceptExpr


@dataclass(frozen=True)
class RangeAxiom:
    role: RoleExpr
    concept: ConceptExpr


TBoxAxiom = object  # union of the five dataclasses above


# --- assertions --------------------------------------------------------------


@dataclass(frozen=True)
class ClassAssertion:
    concept: ConceptExpr
    individual: str


@dataclass(frozen=True)
class RoleAssertion:
    role: RoleExpr
    subject: str
    object: str


@dataclass(frozen=True)
class DataAssertion:
    property: str
    individual: str
    value: Decimal


@dataclass(frozen=True)
class SameAs:
    a: str
    b: str


@dataclass(frozen=True)
class DifferentFrom:
    a: str
    b: str


ABoxAssertion = object


# --- role box -----------------------------------------------------------------


@dataclass
class RBox:
    sub_role_axioms: list[tuple[RoleExpr, RoleExpr]] = field(default_factory=list)
    inverse_pairs: list[tuple[str, str]] = field(default_factory=list)
    transitive_roles: set[str] = field(default_factory=set)
    functional_roles: set[str] = field(default_factory=set)
    inverse_functional_roles: set[str] = field(default_factory=set)
    symmetric_roles: set[str] = field(default_factory=set)
    equivalent_roles: list[tuple[str, str]] = field(default_factory=list)

    def copy(self) -> "RBox":
        return RBox(
            list(self.sub_role_axioms),
            list(self.inverse_pairs),
            set(self.transitive_roles),
            set(self.functional_roles),
            set(self.inverse_functional_roles),
            set(self.symmetric_roles),
            list(self.equivalent_roles),
        )

    def role_names(self) -> set[str]:
        names: set[str] = set()
        for sub, sup in self.sub_role_axioms:
            names.add(sub.name)
            names.add(sup.name)
        for a, b in self.inverse_pairs:
            names.update((a, b))
        for a, b in self.equivalent_roles:
            names.update((a, b))
        names |= self.transitive_roles
        names |= self.functional_roles
        names |= self.inverse_functional_roles
        names |= self.symmetric_roles
        return names


def _closure_of_super_roles(pairs: set[tuple[RoleExpr, RoleExpr]]) -> dict[RoleExpr, frozenset[RoleExpr]]:
    """Reflexive-transitive closure of the sub-role relation, closed under inversion."""
    edges: dict[RoleExpr, set[RoleExpr]] = {}
    for sub, sup in pairs:
        edges.setdefault(sub, set()).add(sup)
        edges.setdefault(sub.inverse(), set()).add(sup.inverse())
    closure: dict[RoleExpr, frozenset[RoleExpr]] = {}

    def supers_of(r: RoleExpr) -> frozenset[RoleExpr]:
        if r in closure:
            return closure[r]
        seen = {r}
        stack = [r]
        while stack:
            cur = stack.pop()
            for nxt in edges.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closure[r] = frozenset(seen)
        return closure[r]

    for r in list(edges):
        supers_of(r)
    return closure


class KnowledgeBase:
    """TBox + RBox + ABox + multilingual labels with the declared signature.

    Mutate only while loading; call :meth:`finalize` when done. After that the
    instance should be treated as an immutable snapshot (safe to share across
    concurrent readers); derive changed versions with :meth:`extended_with`.
    """

    def __init__(self) -> None:
        self.tbox: list = []
        self.rbox = RBox()
        self.abox: list = []
        self.labels: dict[tuple[str, str], str] = {}
        self.concept_names: set[str] = set()
        self.role_names: set[str] = set()
        self.individual_names: set[str] = set()
        self.data_property_names: set[str] = set()
        self._super_roles: dict[RoleExpr, frozenset[RoleExpr]] = {}
        self._finalized = False

    # -- construction ---------------------------------------------------------

    def add_axiom(self, axiom) -> None:
        self.tbox.append(axiom)

    def add_assertion(self, assertion) -> None:
        if isinstance(assertion, DifferentFrom) and assertion.a == assertion.b:
            raise KbError(f"DifferentFrom({assertion.a}, {assertion.a}) is contradictory")
        self.abox.append(assertion)

    def set_label(self, entity: str, lang: str, text: str) -> None:
        self.labels[(entity, lang)] = text

    def copy(self) -> "KnowledgeBase":
        out = KnowledgeBase()
        out.tbox = list(self.tbox)
        out.rbox = self.rbox.copy()
        out.abox = list(self.abox)
        out.labels = dict(self.labels)
        out.concept_names = set(self.concept_names)
        out.role_names = set(self.role_names)
        out.individual_names = set(self.individual_names)
        out.data_property_names = set(self.data_property_names)
        return out

    def extended_with(self, axioms: Iterable = (), assertions: Iterable = ()) -> "KnowledgeBase":
        out = self.copy()
        for ax in axioms:
            out.add_axiom(ax)
        for a in assertions:
            out.add_assertion(a)
        out.finalize()
        return out

    # -- load-time rewriting ----------------------------------------------------

    def finalize(self) -> "KnowledgeBase":
        """Rewrite derived axiom forms, auto-declare names, build role closures."""
        rewritten = []
        for ax in self.tbox:
            if isinstance(ax, DomainAxiom):
                rewritten.append(SubClassOf(Exists(ax.role, TOP), ax.concept))
            elif isinstance(ax, RangeAxiom):
                rewritten.append(SubClassOf(TOP, ForAll(ax.role, ax.concept)))
            elif isinstance(ax, DisjointClasses):
                rewritten.append(SubClassOf(ax.a, Not(ax.b)))
            elif isinstance(ax, (SubClassOf, EquivalentClasses)):
                rewritten.append(ax)
            else:
                raise KbError(f"unknown TBox axiom: {ax!r}")
        self.tbox = rewritten

        for ax in self.tbox:
            sides = (ax.sub, ax.sup) if isinstance(ax, SubClassOf) else (ax.a, ax.b)
            for side in sides:
                self._declare_from_concept(side)
        for a in self.abox:
            if isinstance(a, ClassAssertion):
                self._declare_from_concept(a.concept)
                self.individual_names.add(a.individual)
            elif isinstance(a, RoleAssertion):
                self.role_names.add(a.role.name)
                self.individual_names.update((a.subject, a.object))
            elif isinstance(a, DataAssertion):
                self.data_property_names.add(a.property)
                self.individual_names.add(a.individual)
            elif isinstance(a, (SameAs, DifferentFrom)):
                self.individual_names.update((a.a, a.b))
            else:
                raise KbError(f"unknown ABox assertion: {a!r}")
        self.role_names |= self.rbox.role_names() - self.data_property_names

        pairs: set[tuple[RoleExpr, RoleExpr]] = set()
        for sub, sup in self.rbox.sub_role_axioms:
            pairs.add((sub, sup))
        for a, b in self.rbox.equivalent_roles:
            pairs.add((RoleExpr(a), RoleExpr(b)))
            pairs.add((RoleExpr(b), RoleExpr(a)))
        for a, b in self.rbox.inverse_pairs:
            # a and inverse(b) are the same relation
            pairs.add((RoleExpr(a), RoleExpr(b, True)))
            pairs.add((RoleExpr(b, True), RoleExpr(a)))
        for r in self.rbox.symmetric_roles:
            pairs.add((RoleExpr(r), RoleExpr(r, True)))
            pairs.add((RoleExpr(r, True), RoleExpr(r)))
        self._super_roles = _closure_of_super_roles(pairs)
        self._finalized = True
        return self

    def _declare_from_concept(self, c: ConceptExpr) -> None:
        self.concept_names |= concept_names_in(c)
        self.role_names |= role_names_in(c)
        self.individual_names |= individual_names_in(c)
        self.data_property_names |= data_property_names_in(c)

    # -- role queries -------------------------------------------------------------

    def super_roles(self, r: RoleExpr) -> frozenset[RoleExpr]:
        """All super-roles of ``r`` (reflexive, inversion-closed)."""
        return self._super_roles.get(r, frozenset((r,)))

    def is_sub_role(self, sub: RoleExpr, sup: RoleExpr) -> bool:
        return sup in self.super_roles(sub)

    def is_transitive(self, r: RoleExpr) -> bool:
        # The inverse of a transitive role is transitive, hence the name check;
        # a role equivalent (mutually sub) to a transitive one is transitive too.
        if r.name in self.rbox.transitive_roles:
            return True
        for s in self.super_roles(r):
            if s.name in self.rbox.transitive_roles and r in self.super_roles(s):
                return True
        return False

    def functional_data_properties(self) -> set[str]:
        return self.rbox.functional_roles & self.data_property_names

    def cardinality_axioms(self) -> list[SubClassOf]:
        """Global at-most-one constraints derived from functional declarations."""
        out = []
        for r in sorted(self.rbox.functional_roles - self.data_property_names):
            out.append(SubClassOf(TOP, AtMost(1, RoleExpr(r))))
        for r in sorted(self.rbox.inverse_functional_roles - self.data_property_names):
            out.append(SubClassOf(TOP, AtMost(1, RoleExpr(r, True))))
        return out

    # -- labels ---------------------------------------------------------------------

    def label(self, entity: str, lang: str = "en") -> str:
        """Display label with fallback: requested language, then "en", then the name."""
        if (entity, lang) in self.labels:
            return self.labels[(entity, lang)]
        if (entity, "en") in self.labels:
            return self.labels[(entity, "en")]
        return entity


# --- operations over a loaded KB -------------------------------------------------


def build_closure_axiom(cls: str, role_expr: RoleExpr, kb: KnowledgeBase) -> SubClassOf:
    """Closing axiom for ``cls`` over ``role_expr``: a universal restriction whose
    filler is the union of every existential filler asserted for that role.

    Fillers are collected from ``SubClassOf(cls, Exists(role, F))`` axioms (also
    from existentials listed directly inside an ``And`` on the right-hand side),
    in axiom order, each distinct filler once.
    """
    target = Atomic(cls)
    fillers: list[ConceptExpr] = []
    seen: set[ConceptExpr] = set()

    def collect(expr: ConceptExpr) -> None:
        if isinstance(expr, Exists) and expr.role == role_expr:
            if expr.filler not in seen:
                seen.add(expr.filler)
                fillers.append(expr.filler)
        elif isinstance(expr, And):
            for op in expr.operands:
                collect(op)

    for ax in kb.tbox:
        if isinstance(ax, SubClassOf) and ax.sub == target:
            collect(ax.sup)
    if not fillers:
        raise NoExistentialFillers(
            f"{cls} has no existential restriction over {role_expr}"
        )
    return SubClassOf(target, ForAll(role_expr, disj(fillers)))


def is_defined_class(cls: str, kb: KnowledgeBase) -> bool:
    """True when ``cls`` is one side of an equivalence (has necessary-and-sufficient
    conditions); classes with only subclass axioms are primitive."""
    target = Atomic(cls)
    return any(
        isinstance(ax, EquivalentClasses) and (ax.a == target or ax.b == target)
        for ax in kb.tbox
    )


def told_subsumers(cls: str, kb: KnowledgeBase) -> set[str]:
    """Named classes syntactically reachable upward from ``cls``; includes ``cls``.

    Follows SubClassOf/EquivalentClasses axioms whose relevant side is atomic,
    extracting atomic right-hand sides and atomic operands of right-hand
    intersections. Terminates on cycles.
    """
    result = {cls}
    queue = [cls]

    def atoms_of(expr: ConceptExpr) -> list[str]:
        if isinstance(expr, Atomic):
            return [expr.name]
        if isinstance(expr, And):
            return [op.name for op in expr.operands if isinstance(op, Atomic)]
        return []

    while queue:
        cur = Atomic(queue.pop())
        for ax in kb.tbox:
            if isinstance(ax, SubClassOf) and ax.sub == cur:
                found = atoms_of(ax.sup)
            elif isinstance(ax, EquivalentClasses) and ax.a == cur:
                found = atoms_of(ax.b)
            elif isinstance(ax, EquivalentClasses) and ax.b == cur:
                found = atoms_of(ax.a)
            else:
                continue
            for name in found:
                if name not in result:
                    result.add(name)
                    queue.append(name)
    return result
