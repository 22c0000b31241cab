"""Tableau decision procedures over a completion graph.

Supported fragment: ALCHI plus transitive roles, unqualified number
restrictions, nominals restricted to hasValue/oneOf over declared individuals,
and numeric facets on data properties. Axioms with an atomic left side are
lazily unfolded (definitions both ways when unique and acyclic); every other
general inclusion is internalized into concepts added to each node. Inverse
roles make subset blocking unsound, so blocking is pairwise and dynamic.

Nondeterminism is explored depth-first over cloned graph states in a fixed
order (disjuncts left to right, at-most merges newest first) so failures
reproduce run to run. Node allocation across one query is capped by a budget;
exceeding it raises ResourceLimit rather than guessing.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional

from .concepts import (
    And,
    AtLeast,
    AtMost,
    Atomic,
    BOTTOM,
    Bottom,
    ConceptExpr,
    DataSome,
    Exists,
    ForAll,
    HasValue,
    Not,
    NumericRange,
    OneOf,
    Or,
    RoleExpr,
    Top,
    concept_names_in,
    individual_names_in,
    neg,
    nnf,
)
from .errors import InconsistentKB, ResourceLimit, UnsupportedConstruct
from .kb import (
    ClassAssertion,
    DataAssertion,
    DifferentFrom,
    EquivalentClasses,
    KnowledgeBase,
    RoleAssertion,
    SameAs,
    SubClassOf,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

DEFAULT_NODE_BUDGET = 100_000


def check_numeric_range(r: NumericRange, value: Decimal) -> bool:
    """Facet check: does ``value`` satisfy every bound of ``r``?"""
    return r.contains(value)


def ranges_intersect(a: NumericRange, b: NumericRange) -> bool:
    """Exact emptiness test for the intersection of two facet ranges."""
    return a.intersects(b)


# --- interval sets for data-property clash detection ---------------------------


_FULL = (None, False, None, False)  # (lo, lo_strict, hi, hi_strict)


def _range_interval(r: NumericRange):
    lo, lo_s = r.lower()
    hi, hi_s = r.upper()
    return (lo, lo_s, hi, hi_s)


def _interval_nonempty(iv) -> bool:
    lo, lo_s, hi, hi_s = iv
    if lo is None or hi is None:
        return True
    if lo > hi:
        return False
    return lo < hi or not (lo_s or hi_s)


def _interval_intersect(a, b):
    alo, alos, ahi, ahis = a
    blo, blos, bhi, bhis = b
    if alo is None or (blo is not None and (blo > alo or (blo == alo and blos))):
        lo, lo_s = blo, blos
    else:
        lo, lo_s = alo, alos
    if ahi is None or (bhi is not None and (bhi < ahi or (bhi == ahi and bhis))):
        hi, hi_s = bhi, bhis
    else:
        hi, hi_s = ahi, ahis
    return (lo, lo_s, hi, hi_s)


def _interval_subtract(iv, cut) -> list:
    """Pieces of ``iv`` not covered by ``cut``."""
    lo, lo_s, hi, hi_s = iv
    clo, clo_s, chi, chi_s = cut
    pieces = []
    if clo is not None:
        left = _interval_intersect((lo, lo_s, hi, hi_s), (None, False, clo, not clo_s))
        if _interval_nonempty(left):
            pieces.append(left)
    if chi is not None:
        right = _interval_intersect((lo, lo_s, hi, hi_s), (chi, not chi_s, None, False))
        if _interval_nonempty(right):
            pieces.append(right)
    return pieces


def _feasible_values(
    positives: list[NumericRange], negatives: list[NumericRange]
) -> bool:
    """Is there a decimal inside every positive range and outside every negative?"""
    pieces = [_FULL]
    for r in positives:
        cut = _range_interval(r)
        pieces = [p for p in (_interval_intersect(p, cut) for p in pieces) if _interval_nonempty(p)]
    for r in negatives:
        cut = _range_interval(r)
        pieces = [out for p in pieces for out in _interval_subtract(p, cut)]
    return bool(pieces)


def _value_in(v: Decimal, iv) -> bool:
    return _interval_nonempty(_interval_intersect(iv, (v, False, v, False)))


# --- completion graph ------------------------------------------------------------


@dataclass
class _Budget:
    remaining: int

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise ResourceLimit("node budget exceeded")


class _Node:
    __slots__ = ("id", "is_root", "named", "parent", "label", "data_values", "pruned")

    def __init__(self, node_id: int, is_root: bool, named: bool, parent: Optional[int]):
        self.id = node_id
        self.is_root = is_root  # never blocked
        self.named = named  # corresponds to a declared individual
        self.parent = parent  # tree predecessor, None for roots
        self.label: dict[ConceptExpr, None] = {}
        self.data_values: dict[str, list[Decimal]] = {}
        self.pruned = False

    def clone(self) -> "_Node":
        out = _Node(self.id, self.is_root, self.named, self.parent)
        out.label = dict(self.label)
        out.data_values = {k: list(v) for k, v in self.data_values.items()}
        out.pruned = self.pruned
        return out


class _Graph:
    def __init__(self, budget: _Budget):
        self.nodes: dict[int, _Node] = {}
        self.edges: dict[tuple[int, int], dict[RoleExpr, None]] = {}
        self.unequal: set[frozenset[int]] = set()
        self.individual_node: dict[str, int] = {}
        self.next_id = 0
        self.budget = budget

    def clone(self) -> "_Graph":
        out = _Graph(self.budget)
        out.nodes = {i: n.clone() for i, n in self.nodes.items()}
        out.edges = {k: dict(v) for k, v in self.edges.items()}
        out.unequal = set(self.unequal)
        out.individual_node = dict(self.individual_node)
        out.next_id = self.next_id
        return out

    def new_node(self, is_root: bool, named: bool, parent: Optional[int]) -> _Node:
        self.budget.spend()
        node = _Node(self.next_id, is_root, named, parent)
        self.next_id += 1
        self.nodes[node.id] = node
        return node

    def live_nodes(self) -> list[_Node]:
        return [n for n in self.nodes.values() if not n.pruned]

    def add_edge(self, a: int, b: int, role_expr: RoleExpr) -> None:
        if role_expr.inverted:
            a, b, role_expr = b, a, role_expr.inverse()
        self.edges.setdefault((a, b), {})[role_expr] = None

    def distinct(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.unequal

    def set_distinct(self, a: int, b: int) -> None:
        self.unequal.add(frozenset((a, b)))


# --- reasoner ----------------------------------------------------------------------


class Reasoner:
    """Decision procedures bound to one finalized, immutable knowledge base.

    Queries build their own completion graphs, so any number of them may run
    concurrently on a shared instance; the axiom index built here is read-only.
    """

    def __init__(self, kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET):
        self.kb = kb
        self.node_budget = node_budget
        self.unfold_pos: dict[str, list[ConceptExpr]] = {}
        self.unfold_neg: dict[str, list[ConceptExpr]] = {}
        self.globals: list[ConceptExpr] = []
        self._consistent: Optional[bool] = None  # memo; KB snapshot is immutable
        self._preprocess()

    # -- axiom indexing -------------------------------------------------------

    def _preprocess(self) -> None:
        definitions: dict[str, ConceptExpr] = {}
        leftover_equiv: list[EquivalentClasses] = []
        for ax in self.kb.tbox:
            if not isinstance(ax, EquivalentClasses):
                continue
            if isinstance(ax.a, Atomic) and ax.a.name not in definitions:
                definitions[ax.a.name] = ax.b
            elif isinstance(ax.b, Atomic) and ax.b.name not in definitions:
                definitions[ax.b.name] = ax.a
            else:
                leftover_equiv.append(ax)

        cyclic = self._names_on_definition_cycles(definitions)
        for name in cyclic:
            body = definitions.pop(name)
            leftover_equiv.append(EquivalentClasses(Atomic(name), body))

        for name, body in definitions.items():
            self.unfold_pos.setdefault(name, []).append(nnf(body))
            self.unfold_neg.setdefault(name, []).append(neg(body))

        def internalize(sub: ConceptExpr, sup: ConceptExpr) -> None:
            self.globals.append(nnf(Or((Not(sub), sup))))

        for ax in list(self.kb.tbox) + self.kb.cardinality_axioms():
            if isinstance(ax, SubClassOf):
                if isinstance(ax.sub, Bottom):
                    continue
                if isinstance(ax.sub, Top):
                    self.globals.append(nnf(ax.sup))
                elif isinstance(ax.sub, Atomic) and ax.sub.name not in definitions:
                    self.unfold_pos.setdefault(ax.sub.name, []).append(nnf(ax.sup))
                elif isinstance(ax.sub, Atomic):
                    # the name is equivalence-defined: absorbing would hide this
                    # constraint from elements carrying the definition only
                    internalize(ax.sub, ax.sup)
                else:
                    internalize(ax.sub, ax.sup)
            elif isinstance(ax, EquivalentClasses):
                if isinstance(ax.a, Atomic) and definitions.get(ax.a.name) is ax.b:
                    continue  # handled by unfolding
                if isinstance(ax.b, Atomic) and definitions.get(ax.b.name) is ax.a:
                    continue
                if ax in leftover_equiv:
                    # absorb one direction when possible, internalize the other
                    if isinstance(ax.a, Atomic) and ax.a.name not in definitions:
                        self.unfold_pos.setdefault(ax.a.name, []).append(nnf(ax.b))
                    else:
                        internalize(ax.a, ax.b)
                    internalize(ax.b, ax.a)

    def _names_on_definition_cycles(self, definitions: dict[str, ConceptExpr]) -> set[str]:
        graph = {
            name: concept_names_in(body) & definitions.keys()
            for name, body in definitions.items()
        }
        cyclic: set[str] = set()
        state: dict[str, int] = {}  # 1 = on stack, 2 = done

        def visit(name: str, stack: list[str]) -> None:
            state[name] = 1
            stack.append(name)
            for dep in graph[name]:
                if state.get(dep) == 1:
                    cyclic.update(stack[stack.index(dep):])
                elif dep not in state:
                    visit(dep, stack)
            stack.pop()
            state[name] = 2

        for name in graph:
            if name not in state:
                visit(name, [])
        return cyclic

    # -- public queries ------------------------------------------------------------

    def is_satisfiable(self, c: ConceptExpr) -> bool:
        """Satisfiability of ``c`` with respect to the whole knowledge base."""
        self._check_nominals(c)
        graph, ok = self._init_graph()
        if not ok:
            return False
        node = graph.new_node(is_root=True, named=False, parent=None)
        self._add_concept(graph, node, nnf(c))
        self._add_globals(graph, node)
        return _Search(self, graph).run()

    def is_consistent(self) -> bool:
        if self._consistent is None:
            graph, ok = self._init_graph()
            self._consistent = ok and _Search(self, graph).run()
        return self._consistent

    def subsumes(self, superc: ConceptExpr, subc: ConceptExpr) -> bool:
        """``subc`` is subsumed by ``superc`` iff their difference is unsatisfiable."""
        return not self.is_satisfiable(And((subc, Not(superc))))

    def instances_of(self, c: ConceptExpr) -> set[str]:
        """Named individuals provably in ``c`` (by refutation, one per individual)."""
        if not self.is_consistent():
            raise InconsistentKB("knowledge base is inconsistent")
        self._check_nominals(c)
        complement = neg(c)
        out = set()
        for name in sorted(self.kb.individual_names):
            if not self._consistent_with_assertion(complement, name):
                out.add(name)
        return out

    def is_instance(self, name: str, c: ConceptExpr) -> bool:
        return not self._consistent_with_assertion(neg(c), name)

    def _consistent_with_assertion(self, c: ConceptExpr, individual: str) -> bool:
        graph, ok = self._init_graph()
        if not ok:
            return False
        node = graph.nodes[graph.individual_node[individual]]
        self._add_concept(graph, node, c)
        return _Search(self, graph).run()

    def _check_nominals(self, c: ConceptExpr) -> None:
        undeclared = individual_names_in(c) - self.kb.individual_names
        if undeclared:
            raise UnsupportedConstruct(
                "nominals must name declared individuals; unknown: "
                + ", ".join(sorted(undeclared))
            )

    # -- graph construction -------------------------------------------------------

    def _init_graph(self) -> tuple[_Graph, bool]:
        """ABox-initialized graph; ``ok`` False when same/different clash at load."""
        graph = _Graph(_Budget(self.node_budget))
        rep: dict[str, str] = {name: name for name in self.kb.individual_names}

        def find(x: str) -> str:
            while rep[x] != x:
                rep[x] = rep[rep[x]]
                x = rep[x]
            return x

        for a in self.kb.abox:
            if isinstance(a, SameAs):
                ra, rb = find(a.a), find(a.b)
                if ra != rb:
                    ra, rb = sorted((ra, rb))
                    rep[rb] = ra
        for name in sorted(self.kb.individual_names):
            canonical = find(name)
            if canonical == name:
                node = graph.new_node(is_root=True, named=True, parent=None)
                graph.individual_node[name] = node.id
        for name in sorted(self.kb.individual_names):
            graph.individual_node[name] = graph.individual_node[find(name)]

        ok = True
        for a in self.kb.abox:
            if isinstance(a, ClassAssertion):
                node = graph.nodes[graph.individual_node[a.individual]]
                self._add_concept(graph, node, nnf(a.concept))
            elif isinstance(a, RoleAssertion):
                graph.add_edge(
                    graph.individual_node[a.subject],
                    graph.individual_node[a.object],
                    a.role,
                )
            elif isinstance(a, DataAssertion):
                node = graph.nodes[graph.individual_node[a.individual]]
                node.data_values.setdefault(a.property, []).append(a.value)
            elif isinstance(a, DifferentFrom):
                na, nb = graph.individual_node[a.a], graph.individual_node[a.b]
                if na == nb:
                    ok = False
                graph.set_distinct(na, nb)
        for node in graph.live_nodes():
            self._add_globals(graph, node)
        return graph, ok

    def _add_concept(self, graph: _Graph, node: _Node, c: ConceptExpr) -> None:
        node.label.setdefault(c, None)

    def _add_globals(self, graph: _Graph, node: _Node) -> None:
        for g in self.globals:
            node.label.setdefault(g, None)


# --- the expansion search -------------------------------------------------------


@dataclass
class _Choice:
    """A nondeterministic expansion point: apply exactly one alternative."""

    alternatives: list  # callables mutating a graph


class _Search:
    def __init__(self, reasoner: Reasoner, graph: _Graph):
        self.r = reasoner
        self.kb = reasoner.kb
        self.graph = graph

    def run(self) -> bool:
        return self._expand(self.graph)

    # -- neighbour helpers ------------------------------------------------------

    def _neighbours(self, graph: _Graph, x: int, r: RoleExpr) -> list[int]:
        out: dict[int, None] = {}
        for (a, b), labels in graph.edges.items():
            if graph.nodes[a].pruned or graph.nodes[b].pruned:
                continue
            if a == x:
                for s in labels:
                    if r in self.kb.super_roles(s):
                        out[b] = None
                        break
            if b == x:
                for s in labels:
                    if r in self.kb.super_roles(s.inverse()):
                        out[a] = None
                        break
        return sorted(out)

    def _adjacent_role_pairs(self, graph: _Graph, x: int) -> list[tuple[RoleExpr, int]]:
        """(asserted role, neighbour) pairs as seen from ``x``."""
        out = []
        for (a, b), labels in graph.edges.items():
            if graph.nodes[a].pruned or graph.nodes[b].pruned:
                continue
            if a == x:
                out.extend((s, b) for s in labels)
            if b == x:
                out.extend((s.inverse(), a) for s in labels)
        return out

    def _is_neighbour(self, graph: _Graph, x: int, r: RoleExpr, y: int) -> bool:
        return y in self._neighbours(graph, x, r)

    # -- blocking -----------------------------------------------------------------

    def _tree_edge_label(self, graph: _Graph, child: _Node) -> frozenset:
        labels = graph.edges.get((child.parent, child.id), {})
        return frozenset(labels)

    def _directly_blocked(self, graph: _Graph, x: _Node) -> bool:
        if x.is_root or x.parent is None:
            return False
        parent = graph.nodes[x.parent]
        lx = frozenset(x.label)
        lpx = frozenset(parent.label)
        ex = self._tree_edge_label(graph, x)
        y = parent
        while y.parent is not None:
            yp = graph.nodes[y.parent]
            if (
                not y.is_root
                and frozenset(y.label) == lx
                and frozenset(yp.label) == lpx
                and self._tree_edge_label(graph, y) == ex
            ):
                return True
            y = yp
        return False

    def _blocked(self, graph: _Graph, x: _Node) -> bool:
        node = x
        while node is not None:
            if self._directly_blocked(graph, node):
                return True
            node = graph.nodes[node.parent] if node.parent is not None else None
        return False

    # -- clash detection ---------------------------------------------------------

    def _has_clash(self, graph: _Graph) -> bool:
        for node in graph.live_nodes():
            for c in node.label:
                if isinstance(c, Bottom):
                    return True
                if isinstance(c, Not) and c.operand in node.label:
                    return True
                if isinstance(c, Not) and isinstance(c.operand, HasValue):
                    hv = c.operand
                    target = graph.individual_node.get(hv.individual)
                    if target is not None and self._is_neighbour(
                        graph, node.id, hv.role, target
                    ):
                        return True
                if isinstance(c, Not) and isinstance(c.operand, OneOf):
                    for name in c.operand.individuals:
                        if graph.individual_node.get(name) == node.id:
                            return True
                if isinstance(c, AtMost):
                    neighbours = self._neighbours(graph, node.id, c.role)
                    if len(neighbours) > c.n and self._exists_distinct_subset(
                        graph, neighbours, c.n + 1
                    ):
                        return True
            if self._data_clash(graph, node):
                return True
        return False

    def _exists_distinct_subset(self, graph: _Graph, nodes: list[int], k: int) -> bool:
        if k <= 1:
            return len(nodes) >= k
        if len(nodes) < k:
            return False
        for combo in itertools.combinations(nodes, k):
            if all(graph.distinct(a, b) for a, b in itertools.combinations(combo, 2)):
                return True
        return False

    def _data_clash(self, graph: _Graph, node: _Node) -> bool:
        positives: dict[str, list[NumericRange]] = {}
        negatives: dict[str, list[NumericRange]] = {}
        for c in node.label:
            if isinstance(c, DataSome):
                positives.setdefault(c.property, []).append(c.range)
            elif isinstance(c, Not) and isinstance(c.operand, DataSome):
                negatives.setdefault(c.operand.property, []).append(c.operand.range)
        functional = self.kb.functional_data_properties()
        properties = set(positives) | set(negatives) | set(node.data_values)
        for prop in properties:
            pos = positives.get(prop, [])
            values = node.data_values.get(prop, [])
            neg_ranges = negatives.get(prop, [])
            if prop in functional:
                if len(set(values)) > 1:
                    return True
                if values:
                    v = values[0]
                    if any(not r.contains(v) for r in pos):
                        return True
                    if any(r.contains(v) for r in neg_ranges):
                        return True
                elif not _feasible_values(pos, neg_ranges):
                    return True
            else:
                # each existential needs its own witness value; asserted values
                # clash only against negated ranges they fall into
                for r in pos:
                    if not _feasible_values([r], neg_ranges):
                        return True
                for v in values:
                    if any(r.contains(v) for r in neg_ranges):
                        return True
        return False

    # -- the search -----------------------------------------------------------------

    def _expand(self, graph: _Graph) -> bool:
        while True:
            if self._has_clash(graph):
                return False
            if self._apply_deterministic(graph):
                continue
            choice = self._find_choice(graph)
            if choice is None:
                return True
            for alternative in choice.alternatives:
                branch = graph.clone()
                if alternative(branch):
                    if self._expand(branch):
                        return True
            return False

    def _apply_deterministic(self, graph: _Graph) -> bool:
        changed = False
        for node in sorted(graph.live_nodes(), key=lambda n: n.id):
            if node.pruned:
                continue
            for c in list(node.label):
                if isinstance(c, And):
                    for op in c.operands:
                        if op not in node.label:
                            node.label[op] = None
                            changed = True
                elif isinstance(c, Atomic):
                    for add in self.r.unfold_pos.get(c.name, ()):
                        if add not in node.label:
                            node.label[add] = None
                            changed = True
                elif isinstance(c, Not) and isinstance(c.operand, Atomic):
                    for add in self.r.unfold_neg.get(c.operand.name, ()):
                        if add not in node.label:
                            node.label[add] = None
                            changed = True
                elif isinstance(c, ForAll):
                    for y in self._neighbours(graph, node.id, c.role):
                        target = graph.nodes[y]
                        if c.filler not in target.label:
                            target.label[c.filler] = None
                            changed = True
                    # transitive propagation through sub-roles of the restriction
                    for s, y in self._adjacent_role_pairs(graph, node.id):
                        for t in self.kb.super_roles(s):
                            if c.role in self.kb.super_roles(t) and self.kb.is_transitive(t):
                                push = ForAll(t, c.filler)
                                target = graph.nodes[y]
                                if push not in target.label:
                                    target.label[push] = None
                                    changed = True
                elif isinstance(c, HasValue):
                    target = graph.individual_node[c.individual]
                    if not self._is_neighbour(graph, node.id, c.role, target):
                        graph.add_edge(node.id, target, c.role)
                        changed = True
                elif isinstance(c, OneOf) and len(c.individuals) == 1:
                    target = graph.individual_node[c.individuals[0]]
                    if target != node.id:
                        if not self._merge(graph, node.id, target):
                            # contradiction with an inequality: surface as clash
                            node.label[BOTTOM] = None
                        changed = True
            if changed:
                return True
        return changed

    def _find_choice(self, graph: _Graph) -> Optional[_Choice]:
        # disjunctions first, then oneOf branching, then at-most merging,
        # and node generation only when nothing else applies
        for node in sorted(graph.live_nodes(), key=lambda n: n.id):
            for c in node.label:
                if isinstance(c, Or) and not any(op in node.label for op in c.operands):
                    return _Choice(
                        [self._add_label_action(node.id, op) for op in c.operands]
                    )
        for node in sorted(graph.live_nodes(), key=lambda n: n.id):
            for c in node.label:
                if isinstance(c, OneOf) and len(c.individuals) > 1:
                    targets = [graph.individual_node[n] for n in c.individuals]
                    if node.id in targets:
                        continue
                    return _Choice(
                        [self._merge_action(node.id, t) for t in targets]
                    )
        for node in sorted(graph.live_nodes(), key=lambda n: n.id):
            for c in node.label:
                if isinstance(c, AtMost):
                    neighbours = self._neighbours(graph, node.id, c.role)
                    if len(neighbours) <= c.n:
                        continue
                    pairs = [
                        (y, z)
                        for y, z in itertools.combinations(
                            sorted(neighbours, reverse=True), 2
                        )
                        if not graph.distinct(y, z)
                    ]
                    if pairs:
                        return _Choice(
                            [self._le_merge_action(x=node.id, a=y, b=z) for y, z in pairs]
                        )
        for node in sorted(graph.live_nodes(), key=lambda n: n.id):
            generator = self._generating_action(graph, node)
            if generator is not None:
                return _Choice([generator])
        return None

    def _generating_action(self, graph: _Graph, node: _Node):
        pending = []
        for c in node.label:
            if isinstance(c, Exists):
                if not any(
                    c.filler in graph.nodes[y].label
                    for y in self._neighbours(graph, node.id, c.role)
                ):
                    pending.append(c)
            elif isinstance(c, AtLeast) and c.n >= 1:
                neighbours = self._neighbours(graph, node.id, c.role)
                if not self._exists_distinct_subset(graph, neighbours, c.n):
                    pending.append(c)
        if not pending:
            return None
        if self._blocked(graph, node):
            return None
        first = pending[0]
        node_id = node.id

        def apply(branch: _Graph) -> bool:
            source = branch.nodes[node_id]
            if isinstance(first, Exists):
                child = branch.new_node(is_root=False, named=False, parent=node_id)
                branch.add_edge(node_id, child.id, first.role)
                child.label[first.filler] = None
                self.r._add_globals(branch, child)
            else:
                created = []
                for _ in range(first.n):
                    child = branch.new_node(is_root=False, named=False, parent=node_id)
                    branch.add_edge(node_id, child.id, first.role)
                    self.r._add_globals(branch, child)
                    created.append(child.id)
                for a, b in itertools.combinations(created, 2):
                    branch.set_distinct(a, b)
            return True

        return apply

    def _add_label_action(self, node_id: int, concept: ConceptExpr):
        def apply(branch: _Graph) -> bool:
            branch.nodes[node_id].label[concept] = None
            return True

        return apply

    def _merge_action(self, source_id: int, target_id: int):
        def apply(branch: _Graph) -> bool:
            return self._merge(branch, source_id, target_id)

        return apply

    def _le_merge_action(self, x: int, a: int, b: int):
        """Merge two at-most neighbours; named individuals absorb other nodes."""

        def apply(branch: _Graph) -> bool:
            na, nb = branch.nodes[a], branch.nodes[b]
            if na.named and nb.named:
                # full nominal merging is outside the supported fragment; an
                # explicit error beats a silently incomplete answer
                raise UnsupportedConstruct(
                    "an at-most restriction would merge two distinct named individuals"
                )
            if na.named:
                source, target = b, a
            elif nb.named:
                source, target = a, b
            else:
                source, target = (a, b) if a > b else (b, a)  # newer into older
            return self._merge(branch, source, target)

        return apply

    # -- merging ----------------------------------------------------------------------

    def _prune_subtree(self, graph: _Graph, node_id: int) -> None:
        graph.nodes[node_id].pruned = True
        for other in graph.live_nodes():
            if other.parent == node_id:
                self._prune_subtree(graph, other.id)

    def _merge(self, graph: _Graph, source_id: int, target_id: int) -> bool:
        """Merge ``source`` into ``target``; False when an inequality forbids it."""
        if source_id == target_id:
            return True
        if graph.distinct(source_id, target_id):
            return False
        source = graph.nodes[source_id]
        target = graph.nodes[target_id]
        for c in source.label:
            target.label.setdefault(c, None)
        for prop, values in source.data_values.items():
            target.data_values.setdefault(prop, []).extend(values)
        for (a, b), labels in list(graph.edges.items()):
            if graph.nodes[a].pruned or graph.nodes[b].pruned:
                continue
            if a == source_id and b == source_id:
                for s in labels:
                    graph.add_edge(target_id, target_id, s)
                del graph.edges[(a, b)]
            elif a == source_id and graph.nodes[b].parent == source_id:
                continue  # tree children are pruned below
            elif a == source_id:
                for s in labels:
                    graph.add_edge(target_id, b, s)
                del graph.edges[(a, b)]
            elif b == source_id:
                for s in labels:
                    graph.add_edge(a, target_id, s)
                del graph.edges[(a, b)]
        for pair in list(graph.unequal):
            if source_id in pair:
                other = next(iter(pair - {source_id}), source_id)
                graph.unequal.discard(pair)
                if other == target_id:
                    return False
                graph.set_distinct(target_id, other)
        for name, node_id in graph.individual_node.items():
            if node_id == source_id:
                graph.individual_node[name] = target_id
        self._prune_subtree(graph, source_id)
        return True


# --- module-level conveniences ---------------------------------------------------


def is_satisfiable(c: ConceptExpr, kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return Reasoner(kb, node_budget).is_satisfiable(c)


def is_consistent(kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return Reasoner(kb, node_budget).is_consistent()


def subsumes(superc: ConceptExpr, subc: ConceptExpr, kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    return Reasoner(kb, node_budget).subsumes(superc, subc)


def instances_of(c: ConceptExpr, kb: KnowledgeBase, node_budget: int = DEFAULT_NODE_BUDGET) -> set[str]:
    return Reasoner(kb, node_budget).instances_of(c)
