"""Classification, realization, and DL queries over the inferred hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .concepts import Atomic, ConceptExpr, TOP
from .errors import InconsistentKB
from .kb import KnowledgeBase, told_subsumers
from .tableau import Reasoner

TOP_NAME = "Thing"
BOTTOM_NAME = "Nothing"


@dataclass
class Taxonomy:
    """The subsumption hierarchy: equivalence groups linked by direct edges.

    ``children``/``parents`` hold the transitive reduction; every declared class
    name sits in exactly one group, unsatisfiable names in the Bottom group.
    """

    groups: dict[int, frozenset[str]]
    group_of: dict[str, int]
    children: dict[int, set[int]]
    parents: dict[int, set[int]]
    top_id: int
    bottom_id: int

    def equivalents(self, name: str) -> frozenset[str]:
        return self.groups[self.group_of[name]]

    def direct_subclasses(self, name: str) -> set[str]:
        out: set[str] = set()
        for gid in self.children[self.group_of[name]]:
            out |= self.groups[gid]
        return out - {TOP_NAME, BOTTOM_NAME}

    def direct_superclasses(self, name: str) -> set[str]:
        out: set[str] = set()
        for gid in self.parents[self.group_of[name]]:
            out |= self.groups[gid]
        return out - {TOP_NAME, BOTTOM_NAME}

    def descendants(self, name: str) -> set[str]:
        """All strict named subclasses, Bottom group excluded."""
        start = self.group_of[name]
        seen: set[int] = set()
        stack = [start]
        while stack:
            gid = stack.pop()
            for child in self.children[gid]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        out: set[str] = set()
        for gid in seen - {self.bottom_id}:
            out |= self.groups[gid]
        return out - {TOP_NAME, BOTTOM_NAME}

    def ancestors(self, name: str) -> set[str]:
        start = self.group_of[name]
        seen: set[int] = set()
        stack = [start]
        while stack:
            gid = stack.pop()
            for parent in self.parents[gid]:
                if parent not in seen:
                    seen.add(parent)
                    stack.append(parent)
        out: set[str] = set()
        for gid in seen - {self.top_id}:
            out |= self.groups[gid]
        return out - {TOP_NAME, BOTTOM_NAME}

    def is_under(self, sub: str, sup: str) -> bool:
        return sub in self.equivalents(sup) or sub in self.descendants(sup)

    def unsatisfiable_names(self) -> frozenset[str]:
        return self.groups[self.bottom_id] - {BOTTOM_NAME}

    def iter_groups_topdown(self):
        """(group names, depth) pairs in DFS preorder from Top, for rendering.

        Groups with several parents appear once under each of them, the way
        ontology editors render a DAG as a tree. The Bottom group is shown only
        when it contains unsatisfiable named classes.
        """

        def walk(gid: int, depth: int):
            yield self.groups[gid], depth
            for child in sorted(self.children[gid], key=lambda g: sorted(self.groups[g])):
                if child == self.bottom_id:
                    continue
                yield from walk(child, depth + 1)

        yield from walk(self.top_id, 0)
        if self.unsatisfiable_names():
            yield self.groups[self.bottom_id], 1


class _Classifier:
    def __init__(self, reasoner: Reasoner):
        self.r = reasoner
        self.kb = reasoner.kb
        self.cache: dict[tuple[str, str], bool] = {}
        self.told: dict[str, set[str]] = {}

    def subsumes(self, sup: str, sub: str) -> bool:
        """Does named class ``sup`` subsume named class ``sub``?"""
        if sup == sub or sup == TOP_NAME or sub == BOTTOM_NAME:
            return True
        if sup == BOTTOM_NAME:
            return False  # callers handle unsatisfiable names up front
        if sub == TOP_NAME:
            return self.r.subsumes(Atomic(sup), TOP)
        key = (sup, sub)
        if key not in self.cache:
            if sup in self.told.get(sub, ()):
                self.cache[key] = True
            else:
                self.cache[key] = self.r.subsumes(Atomic(sup), Atomic(sub))
        return self.cache[key]

    def run(self) -> Taxonomy:
        if not self.r.is_consistent():
            raise InconsistentKB("cannot classify an inconsistent knowledge base")
        names = sorted(self.kb.concept_names)
        for name in names:
            self.told[name] = told_subsumers(name, self.kb)

        tax = Taxonomy(
            groups={0: frozenset({TOP_NAME}), 1: frozenset({BOTTOM_NAME})},
            group_of={TOP_NAME: 0, BOTTOM_NAME: 1},
            children={0: {1}, 1: set()},
            parents={0: set(), 1: {0}},
            top_id=0,
            bottom_id=1,
        )
        next_gid = 2

        # seed with told subsumers so parents tend to be classified first
        order = self._told_topological(names)
        for name in order:
            if not self.r.is_satisfiable(Atomic(name)):
                self._join_group(tax, name, tax.bottom_id)
                continue
            if self.subsumes(name, TOP_NAME):
                self._join_group(tax, name, tax.top_id)
                continue
            supers = self._top_search(tax, name)
            subs = self._bottom_search(tax, name)
            equal = supers & subs
            if equal:
                self._join_group(tax, name, equal.pop())
                continue
            gid = next_gid
            next_gid += 1
            tax.groups[gid] = frozenset({name})
            tax.group_of[name] = gid
            tax.children[gid] = set()
            tax.parents[gid] = set()
            for p in supers:
                for c in subs & tax.children[p]:
                    tax.children[p].discard(c)
                    tax.parents[c].discard(p)
                tax.children[p].add(gid)
                tax.parents[gid].add(p)
            for c in subs:
                tax.children[gid].add(c)
                tax.parents[c].add(gid)
        return tax

    def _told_topological(self, names: list[str]) -> list[str]:
        order: list[str] = []
        seen: set[str] = set()

        def visit(name: str) -> None:
            if name in seen:
                return
            seen.add(name)
            for parent in sorted(self.told.get(name, ())):
                if parent != name and parent in self.told:
                    visit(parent)
            order.append(name)

        for name in names:
            visit(name)
        return order

    def _repr(self, tax: Taxonomy, gid: int) -> str:
        return sorted(tax.groups[gid])[0]

    def _join_group(self, tax: Taxonomy, name: str, gid: int) -> None:
        tax.groups[gid] = tax.groups[gid] | {name}
        tax.group_of[name] = gid

    def _top_search(self, tax: Taxonomy, name: str) -> set[int]:
        """Deepest groups subsuming ``name`` (direct parents), BFS from Top."""
        positive: dict[int, bool] = {tax.top_id: True}

        def is_positive(gid: int) -> bool:
            if gid not in positive:
                positive[gid] = self.subsumes(self._repr(tax, gid), name)
            return positive[gid]

        result: set[int] = set()
        stack = [tax.top_id]
        visited: set[int] = set()
        while stack:
            gid = stack.pop()
            if gid in visited:
                continue
            visited.add(gid)
            deeper = [c for c in tax.children[gid] if c != tax.bottom_id and is_positive(c)]
            if deeper:
                stack.extend(deeper)
            else:
                result.add(gid)
        # drop any collected group that has a positive descendant also collected
        return {g for g in result if not any(o != g and self._group_under(tax, o, g) for o in result)}

    def _bottom_search(self, tax: Taxonomy, name: str) -> set[int]:
        """Highest groups subsumed by ``name`` (direct children), from Bottom up."""
        positive: dict[int, bool] = {tax.bottom_id: True}

        def is_positive(gid: int) -> bool:
            if gid not in positive:
                positive[gid] = self.subsumes(name, self._repr(tax, gid))
            return positive[gid]

        result: set[int] = set()
        stack = [tax.bottom_id]
        visited: set[int] = set()
        while stack:
            gid = stack.pop()
            if gid in visited:
                continue
            visited.add(gid)
            higher = [p for p in tax.parents[gid] if p != tax.top_id and is_positive(p)]
            if higher:
                stack.extend(higher)
            else:
                result.add(gid)
        return {g for g in result if not any(o != g and self._group_under(tax, g, o) for o in result)}

    def _group_under(self, tax: Taxonomy, sub_gid: int, sup_gid: int) -> bool:
        stack = [sup_gid]
        seen = set()
        while stack:
            gid = stack.pop()
            if gid == sub_gid:
                return gid != sup_gid
            for child in tax.children[gid]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return False


def classify(kb: KnowledgeBase, reasoner: Optional[Reasoner] = None) -> Taxonomy:
    """Compute the inferred class hierarchy. Raises InconsistentKB when the ABox
    contradicts the TBox."""
    return _Classifier(reasoner or Reasoner(kb)).run()


def realize(
    kb: KnowledgeBase,
    reasoner: Optional[Reasoner] = None,
    taxonomy: Optional[Taxonomy] = None,
) -> dict[str, set[str]]:
    """Most specific named classes per individual.

    Walks the taxonomy top-down so a failed instance check prunes the whole
    subtree under it.
    """
    r = reasoner or Reasoner(kb)
    if not r.is_consistent():
        raise InconsistentKB("cannot realize an inconsistent knowledge base")
    tax = taxonomy or classify(kb, r)
    out: dict[str, set[str]] = {}
    for individual in sorted(kb.individual_names):
        membership: dict[int, bool] = {}

        def is_member(gid: int) -> bool:
            if gid == tax.top_id:
                return True
            if gid == tax.bottom_id:
                return False
            if gid not in membership:
                name = sorted(tax.groups[gid])[0]
                membership[gid] = r.is_instance(individual, Atomic(name))
            return membership[gid]

        most_specific: set[int] = set()
        stack = [tax.top_id]
        visited: set[int] = set()
        while stack:
            gid = stack.pop()
            if gid in visited:
                continue
            visited.add(gid)
            deeper = [c for c in tax.children[gid] if is_member(c)]
            if deeper:
                stack.extend(deeper)
            elif gid != tax.top_id:
                most_specific.add(gid)
        names: set[str] = set()
        for gid in most_specific:
            names |= tax.groups[gid]
        out[individual] = names - {TOP_NAME, BOTTOM_NAME}
    return out


@dataclass
class QueryAnswer:
    """Answer to a DL query against the named signature."""

    equivalents: set[str] = field(default_factory=set)
    direct_subclasses: set[str] = field(default_factory=set)
    all_subclasses: set[str] = field(default_factory=set)
    direct_superclasses: set[str] = field(default_factory=set)
    instances: set[str] = field(default_factory=set)


def dl_query(
    c: ConceptExpr,
    kb: KnowledgeBase,
    reasoner: Optional[Reasoner] = None,
    taxonomy: Optional[Taxonomy] = None,
) -> QueryAnswer:
    """Equivalents, sub/superclasses, and instances of an arbitrary concept."""
    r = reasoner or Reasoner(kb)
    if not r.is_consistent():
        raise InconsistentKB("cannot query an inconsistent knowledge base")
    tax = taxonomy or classify(kb, r)

    candidates = set(kb.concept_names)
    if isinstance(c, Atomic):
        candidates.add(c.name)

    c_satisfiable = r.is_satisfiable(c)
    unsat_names = tax.unsatisfiable_names() | ({c.name} if isinstance(c, Atomic) and not c_satisfiable else set())

    answer = QueryAnswer()
    below: set[str] = set()
    above: set[str] = set()
    for name in sorted(candidates):
        atom = Atomic(name)
        name_unsat = name in unsat_names
        sub_of_c = True if name_unsat else r.subsumes(c, atom)
        sup_of_c = (not c_satisfiable) or (not name_unsat and r.subsumes(atom, c))
        if sub_of_c and sup_of_c:
            answer.equivalents.add(name)
        elif sub_of_c:
            below.add(name)
        elif sup_of_c:
            above.add(name)

    if c_satisfiable:
        below -= tax.unsatisfiable_names()
    answer.all_subclasses = below
    # direct = maximal below / minimal above with respect to the taxonomy
    answer.direct_subclasses = {
        n for n in below
        if not any(o != n and o not in tax.equivalents(n) and tax.is_under(n, o) for o in below)
    }
    answer.direct_superclasses = {
        n for n in above
        if not any(o != n and o not in tax.equivalents(n) and tax.is_under(o, n) for o in above)
    }
    answer.instances = r.instances_of(c)
    return answer
