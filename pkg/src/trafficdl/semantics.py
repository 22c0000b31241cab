"""Finite interpretations and brute-force model search.

This module is the independent cross-check for the tableau: concepts are
evaluated literally against explicit finite structures, and satisfiability
(without a TBox) is decided by exhaustive search over Hintikka types rather
than by tableau expansion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Optional

from .concepts import (
    And,
    AtLeast,
    AtMost,
    Atomic,
    Bottom,
    ConceptExpr,
    DataSome,
    Exists,
    ForAll,
    HasValue,
    Not,
    OneOf,
    Or,
    RoleExpr,
    Top,
    nnf,
    subexpressions,
)
from .errors import KbError, UnmappedName

Element = Hashable


@dataclass
class FiniteInterpretation:
    """An explicit interpretation: a finite domain plus extension maps."""

    domain: frozenset
    concept_ext: dict[str, frozenset] = field(default_factory=dict)
    role_ext: dict[str, frozenset] = field(default_factory=dict)
    individual_map: dict[str, Element] = field(default_factory=dict)
    data_values: dict[str, frozenset] = field(default_factory=dict)  # name -> {(elem, Decimal)}

    def __post_init__(self) -> None:
        if not self.domain:
            raise KbError("interpretation domain must be nonempty")
        for name, ext in self.concept_ext.items():
            if not ext <= self.domain:
                raise KbError(f"extension of {name} leaves the domain")
        for name, pairs in self.role_ext.items():
            for a, b in pairs:
                if a not in self.domain or b not in self.domain:
                    raise KbError(f"extension of {name} leaves the domain")
        for name, elem in self.individual_map.items():
            if elem not in self.domain:
                raise KbError(f"individual {name} mapped outside the domain")

    def role_pairs(self, r: RoleExpr) -> frozenset:
        if r.name not in self.role_ext:
            raise UnmappedName(f"role {r.name} has no extension")
        pairs = self.role_ext[r.name]
        if r.inverted:
            return frozenset((b, a) for a, b in pairs)
        return pairs


def evaluate(c: ConceptExpr, i: FiniteInterpretation) -> frozenset:
    """Extension of ``c`` in ``i``, computed directly from the semantics."""
    if isinstance(c, Top):
        return i.domain
    if isinstance(c, Bottom):
        return frozenset()
    if isinstance(c, Atomic):
        if c.name not in i.concept_ext:
            raise UnmappedName(f"concept {c.name} has no extension")
        return i.concept_ext[c.name]
    if isinstance(c, Not):
        return i.domain - evaluate(c.operand, i)
    if isinstance(c, And):
        out = i.domain
        for op in c.operands:
            out = out & evaluate(op, i)
        return out
    if isinstance(c, Or):
        out = frozenset()
        for op in c.operands:
            out = out | evaluate(op, i)
        return out
    if isinstance(c, Exists):
        filler = evaluate(c.filler, i)
        pairs = i.role_pairs(c.role)
        return frozenset(a for a in i.domain if any(b in filler for x, b in pairs if x == a))
    if isinstance(c, ForAll):
        filler = evaluate(c.filler, i)
        pairs = i.role_pairs(c.role)
        return frozenset(a for a in i.domain if all(b in filler for x, b in pairs if x == a))
    if isinstance(c, AtLeast):
        pairs = i.role_pairs(c.role)
        return frozenset(a for a in i.domain if _successor_count(a, pairs) >= c.n)
    if isinstance(c, AtMost):
        pairs = i.role_pairs(c.role)
        return frozenset(a for a in i.domain if _successor_count(a, pairs) <= c.n)
    if isinstance(c, HasValue):
        if c.individual not in i.individual_map:
            raise UnmappedName(f"individual {c.individual} is not mapped")
        target = i.individual_map[c.individual]
        pairs = i.role_pairs(c.role)
        return frozenset(a for a in i.domain if (a, target) in pairs)
    if isinstance(c, OneOf):
        out = set()
        for name in c.individuals:
            if name not in i.individual_map:
                raise UnmappedName(f"individual {name} is not mapped")
            out.add(i.individual_map[name])
        return frozenset(out)
    if isinstance(c, DataSome):
        # Empty unless a data valuation was supplied with the interpretation.
        entries = i.data_values.get(c.property, frozenset())
        return frozenset(a for a, v in entries if c.range.contains(v))
    raise KbError(f"unknown concept expression: {c!r}")


def _successor_count(a: Element, pairs: frozenset) -> int:
    return len({b for x, b in pairs if x == a})


# --- satisfiability by exhaustive type search ---------------------------------


_ALC_ONLY = (Top, Bottom, Atomic, Not, And, Or, Exists, ForAll)


def _modal_atoms(c: ConceptExpr) -> list[ConceptExpr]:
    seen: list[ConceptExpr] = []
    for sub in subexpressions(c):
        if isinstance(sub, (Exists, ForAll)) and sub not in seen:
            seen.append(sub)
    return seen


def _atom_names(c: ConceptExpr) -> list[str]:
    seen: list[str] = []
    for sub in subexpressions(c):
        if isinstance(sub, Atomic) and sub.name not in seen:
            seen.append(sub.name)
    return seen


def _truth(c: ConceptExpr, sigma: dict) -> bool:
    """Boolean value of ``c`` under an assignment to atoms and modal subterms."""
    if isinstance(c, Top):
        return True
    if isinstance(c, Bottom):
        return False
    if isinstance(c, Atomic):
        return sigma[c.name]
    if isinstance(c, Not):
        return not _truth(c.operand, sigma)
    if isinstance(c, And):
        return all(_truth(op, sigma) for op in c.operands)
    if isinstance(c, Or):
        return any(_truth(op, sigma) for op in c.operands)
    if isinstance(c, (Exists, ForAll)):
        return sigma[c]
    raise KbError(f"not an ALC expression: {c!r}")


def existential_subterm_count(c: ConceptExpr) -> int:
    """Number of existential subterm occurrences in the NNF of ``c``."""
    return sum(1 for sub in subexpressions(nnf(c)) if isinstance(sub, Exists))


class TypeSearch:
    """Exhaustive satisfiability search over Hintikka types for plain ALC.

    A type is a truth assignment to the concept's atoms and modal subterms.
    Types are iteratively eliminated when a required successor (a true
    existential, or a falsified universal) has no surviving witness compatible
    with every constraint the type imposes on that role's successors. The
    concept is satisfiable iff a surviving type makes it true.
    """

    def __init__(self, c: ConceptExpr):
        for sub in subexpressions(c):
            if not isinstance(sub, _ALC_ONLY):
                raise KbError(f"type search supports plain ALC only, got {sub!r}")
        self.concept = c
        self.atoms = _atom_names(c)
        self.modals = _modal_atoms(c)
        self.roles = sorted({m.role.name for m in self.modals}) or ["r"]
        if len(self.atoms) + len(self.modals) > 20:
            raise KbError("concept too large for exhaustive type search")
        self.types = self._all_types()
        self.surviving = self._eliminate()
        # obligation-light types first, so witness models stay small: a true
        # existential or a falsified universal each demand a successor
        self.surviving.sort(key=self._obligation_count)

    def _obligation_count(self, sigma: dict) -> int:
        return sum(
            1
            for m in self.modals
            if (isinstance(m, Exists) and sigma[m]) or (isinstance(m, ForAll) and not sigma[m])
        )

    def _all_types(self) -> list[dict]:
        coords: list = list(self.atoms) + list(self.modals)
        out = []
        for bits in itertools.product((False, True), repeat=len(coords)):
            out.append(dict(zip(coords, bits)))
        return out

    def _needs_and_constraints(self, sigma: dict, role_name: str):
        """Successor obligations and blanket constraints of ``sigma`` for a role."""
        needs: list[ConceptExpr] = []
        constraints: list[ConceptExpr] = []
        for m in self.modals:
            if m.role.name != role_name:
                continue
            if isinstance(m, Exists):
                if sigma[m]:
                    needs.append(m.filler)
                else:
                    constraints.append(Not(m.filler))
            else:
                if sigma[m]:
                    constraints.append(m.filler)
                else:
                    needs.append(Not(m.filler))
        return needs, constraints

    def _eliminate(self) -> list[dict]:
        alive = list(self.types)
        changed = True
        while changed:
            changed = False
            still = []
            for sigma in alive:
                ok = True
                for role_name in self.roles:
                    needs, constraints = self._needs_and_constraints(sigma, role_name)
                    for body in needs:
                        if not any(
                            _truth(body, tau) and all(_truth(k, tau) for k in constraints)
                            for tau in alive
                        ):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    still.append(sigma)
                else:
                    changed = True
            alive = still
        return alive

    def satisfiable(self) -> bool:
        return any(_truth(self.concept, sigma) for sigma in self.surviving)

    def build_model(self, size_limit: Optional[int] = None) -> Optional[FiniteInterpretation]:
        """Construct a smallest witnessing interpretation from surviving types.

        Any model quotients onto the set of types its elements realize, so the
        minimum model size equals the smallest "closed" collection of surviving
        types: one member makes the concept true, and every successor
        obligation inside the collection is witnessed inside it. That
        collection is found by iterative-deepening DFS and turned into a model
        with one element per type and every constraint-compatible edge.
        """
        starts = [s for s in self.surviving if _truth(self.concept, s)]
        if not starts:
            return None

        def compatible(tau: dict, body, constraints) -> bool:
            return _truth(body, tau) and all(_truth(k, tau) for k in constraints)

        def unresolved(chosen: list[dict]):
            for sigma in chosen:
                for role_name in self.roles:
                    needs, constraints = self._needs_and_constraints(sigma, role_name)
                    for body in needs:
                        if not any(compatible(t, body, constraints) for t in chosen):
                            return body, constraints
            return None

        self._steps = 0

        def extend(chosen: list[dict], limit: int) -> Optional[list[dict]]:
            self._steps += 1
            if self._steps > 200_000:
                raise KbError("model search exceeded its step limit")
            missing = unresolved(chosen)
            if missing is None:
                return chosen
            if len(chosen) >= limit:
                return None
            body, constraints = missing
            for tau in self.surviving:
                if tau in chosen or not compatible(tau, body, constraints):
                    continue
                result = extend(chosen + [tau], limit)
                if result is not None:
                    return result
            return None

        ceiling = size_limit or len(self.surviving)
        solution = None
        for limit in range(1, ceiling + 1):
            for start in starts:
                solution = extend([start], limit)
                if solution is not None:
                    break
            if solution is not None:
                break
        if solution is None:
            raise KbError(
                f"no witness for {self.concept} within {ceiling} elements"
            )

        elements = solution
        index = {id(t): i for i, t in enumerate(elements)}
        edges: dict[str, set[tuple[int, int]]] = {r: set() for r in self.roles}
        for sigma in elements:
            for role_name in self.roles:
                constraints = self._needs_and_constraints(sigma, role_name)[1]
                for tau in elements:
                    if all(_truth(k, tau) for k in constraints):
                        edges[role_name].add((index[id(sigma)], index[id(tau)]))
        domain = frozenset(range(len(elements)))
        concept_ext = {
            a: frozenset(i for i, t in enumerate(elements) if t[a]) for a in self.atoms
        }
        role_ext = {r: frozenset(pairs) for r, pairs in edges.items()}
        model = FiniteInterpretation(domain, concept_ext, role_ext)
        # Edges connect exactly the constraint-compatible pairs, so the truth
        # lemma should carry type truth over to model truth; verify it did.
        if 0 not in evaluate(self.concept, model):
            raise KbError("internal error: constructed model fails verification")
        return model


def exists_finite_model(c: ConceptExpr, size_bound: Optional[int] = None) -> Optional[FiniteInterpretation]:
    """Search for a finite model of ``c`` (no TBox); None when provably none exists.

    When ``size_bound`` is given the returned witness is required to fit it.
    """
    search = TypeSearch(c)
    if not search.satisfiable():
        return None
    model = search.build_model()
    assert model is not None
    if size_bound is not None and len(model.domain) > size_bound:
        raise KbError(
            f"witness for {c} needs {len(model.domain)} elements, bound is {size_bound}"
        )
    return model
