"""Concept descriptions: the abstract syntax of the supported DL dialect.

Expressions are immutable values with structural, order-sensitive equality.
``And``/``Or`` keep their operands exactly as written; semantic equivalence
is the reasoner's job. Use :func:`conj` / :func:`disj` to build intersections
and unions from arbitrary operand lists (singletons collapse).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Iterator, Optional

from .errors import KbError


@dataclass(frozen=True)
class RoleExpr:
    """A role name, possibly inverted. ``inverse`` of an inverse is the base role."""

    name: str
    inverted: bool = False

    def inverse(self) -> "RoleExpr":
        return RoleExpr(self.name, not self.inverted)

    def __str__(self) -> str:
        return f"inverse({self.name})" if self.inverted else self.name


def role(name: str) -> RoleExpr:
    return RoleExpr(name)


class ConceptExpr:
    """Marker base class for concept descriptions."""

    __slots__ = ()

    def __str__(self) -> str:  # pragma: no cover - subclasses override
        return repr(self)


@dataclass(frozen=True)
class Top(ConceptExpr):
    def __str__(self) -> str:
        return "Thing"


@dataclass(frozen=True)
class Bottom(ConceptExpr):
    def __str__(self) -> str:
        return "Nothing"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Atomic(ConceptExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Not(ConceptExpr):
    operand: ConceptExpr

    def __str__(self) -> str:
        return f"not ({self.operand})"


@dataclass(frozen=True)
class And(ConceptExpr):
    operands: tuple[ConceptExpr, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands; use conj()")

    def __str__(self) -> str:
        return " and ".join(f"({op})" for op in self.operands)


@dataclass(frozen=True)
class Or(ConceptExpr):
    operands: tuple[ConceptExpr, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("Or needs at least two operands; use disj()")

    def __str__(self) -> str:
        return " or ".join(f"({op})" for op in self.operands)


@dataclass(frozen=True)
class Exists(ConceptExpr):
    role: RoleExpr
    filler: ConceptExpr

    def __str__(self) -> str:
        return f"{self.role} some ({self.filler})"


@dataclass(frozen=True)
class ForAll(ConceptExpr):
    role: RoleExpr
    filler: ConceptExpr

    def __str__(self) -> str:
        return f"{self.role} only ({self.filler})"


@dataclass(frozen=True)
class AtLeast(ConceptExpr):
    n: int
    role: RoleExpr

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"{self.role} min {self.n}"


@dataclass(frozen=True)
class AtMost(ConceptExpr):
    n: int
    role: RoleExpr

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"{self.role} max {self.n}"


@dataclass(frozen=True)
class HasValue(ConceptExpr):
    role: RoleExpr
    individual: str

    def __str__(self) -> str:
        return f"{self.role} value {self.individual}"


@dataclass(frozen=True)
class OneOf(ConceptExpr):
    individuals: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.individuals:
            raise ValueError("OneOf needs at least one individual")

    def __str__(self) -> str:
        return "{" + ", ".join(self.individuals) + "}"


@dataclass(frozen=True)
class NumericRange:
    """Interval facets over decimals. At most one lower and one upper facet."""

    min_inclusive: Optional[Decimal] = None
    min_exclusive: Optional[Decimal] = None
    max_inclusive: Optional[Decimal] = None
    max_exclusive: Optional[Decimal] = None

    def __post_init__(self) -> None:
        if self.min_inclusive is not None and self.min_exclusive is not None:
            raise ValueError("at most one lower facet")
        if self.max_inclusive is not None and self.max_exclusive is not None:
            raise ValueError("at most one upper facet")

    def lower(self) -> tuple[Optional[Decimal], bool]:
        """Lower bound as (value, strict); value None means unbounded."""
        if self.min_exclusive is not None:
            return self.min_exclusive, True
        return self.min_inclusive, False

    def upper(self) -> tuple[Optional[Decimal], bool]:
        if self.max_exclusive is not None:
            return self.max_exclusive, True
        return self.max_inclusive, False

    def contains(self, value: Decimal) -> bool:
        lo, lo_strict = self.lower()
        if lo is not None and (value < lo or (lo_strict and value == lo)):
            return False
        hi, hi_strict = self.upper()
        if hi is not None and (value > hi or (hi_strict and value == hi)):
            return False
        return True

    def is_empty(self) -> bool:
        lo, lo_strict = self.lower()
        hi, hi_strict = self.upper()
        if lo is None or hi is None:
            return False
        if lo > hi:
            return True
        # Decimals are dense: an open interval with lo < hi is never empty.
        return lo == hi and (lo_strict or hi_strict)

    def intersect(self, other: "NumericRange") -> "NumericRange":
        lo, lo_strict = _tighter_lower(self.lower(), other.lower())
        hi, hi_strict = _tighter_upper(self.upper(), other.upper())
        return NumericRange(
            min_inclusive=lo if lo is not None and not lo_strict else None,
            min_exclusive=lo if lo is not None and lo_strict else None,
            max_inclusive=hi if hi is not None and not hi_strict else None,
            max_exclusive=hi if hi is not None and hi_strict else None,
        )

    def intersects(self, other: "NumericRange") -> bool:
        return not self.intersect(other).is_empty()

    def __str__(self) -> str:
        parts = []
        if self.min_inclusive is not None:
            parts.append(f">= {self.min_inclusive}")
        if self.min_exclusive is not None:
            parts.append(f"> {self.min_exclusive}")
        if self.max_inclusive is not None:
            parts.append(f"<= {self.max_inclusive}")
        if self.max_exclusive is not None:
            parts.append(f"< {self.max_exclusive}")
        return "range[" + ", ".join(parts) + "]"


def _tighter_lower(a, b):
    (av, astrict), (bv, bstrict) = a, b
    if av is None:
        return bv, bstrict
    if bv is None:
        return av, astrict
    if av > bv:
        return av, astrict
    if bv > av:
        return bv, bstrict
    return av, astrict or bstrict


def _tighter_upper(a, b):
    (av, astrict), (bv, bstrict) = a, b
    if av is None:
        return bv, bstrict
    if bv is None:
        return av, astrict
    if av < bv:
        return av, astrict
    if bv < av:
        return bv, bstrict
    return av, astrict or bstrict


@dataclass(frozen=True)
class DataSome(ConceptExpr):
    """Existential restriction over a data property with a numeric facet range."""

    property: str
    range: NumericRange

    def __str__(self) -> str:
        return f"{self.property} some {self.range}"


def conj(operands: Iterable[ConceptExpr]) -> ConceptExpr:
    ops = tuple(operands)
    if not ops:
        raise KbError("empty intersection")
    if len(ops) == 1:
        return ops[0]
    return And(ops)


def disj(operands: Iterable[ConceptExpr]) -> ConceptExpr:
    ops = tuple(operands)
    if not ops:
        raise KbError("empty union")
    if len(ops) == 1:
        return ops[0]
    return Or(ops)


def nnf(c: ConceptExpr) -> ConceptExpr:
    """Negation normal form: push negation down to atoms.

    The result is semantically equivalent to the input, contains ``Not`` only
    directly above Atomic/HasValue/OneOf/DataSome, and is a fixpoint of this
    function. Counting duality maps ``not AtLeast(n)`` to ``AtMost(n-1)``
    (Bottom for n = 0) and ``not AtMost(n)`` to ``AtLeast(n+1)``.
    """
    if isinstance(c, (Top, Bottom, Atomic, HasValue, OneOf, DataSome)):
        return c
    if isinstance(c, And):
        return And(tuple(nnf(op) for op in c.operands))
    if isinstance(c, Or):
        return Or(tuple(nnf(op) for op in c.operands))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler))
    if isinstance(c, ForAll):
        return ForAll(c.role, nnf(c.filler))
    if isinstance(c, (AtLeast, AtMost)):
        return c
    if isinstance(c, Not):
        inner = c.operand
        if isinstance(inner, Top):
            return BOTTOM
        if isinstance(inner, Bottom):
            return TOP
        if isinstance(inner, (Atomic, HasValue, OneOf, DataSome)):
            return c
        if isinstance(inner, Not):
            return nnf(inner.operand)
        if isinstance(inner, And):
            return Or(tuple(nnf(Not(op)) for op in inner.operands))
        if isinstance(inner, Or):
            return And(tuple(nnf(Not(op)) for op in inner.operands))
        if isinstance(inner, Exists):
            return ForAll(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, ForAll):
            return Exists(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, AtLeast):
            if inner.n == 0:
                return BOTTOM
            return AtMost(inner.n - 1, inner.role)
        if isinstance(inner, AtMost):
            return AtLeast(inner.n + 1, inner.role)
    raise KbError(f"unknown concept expression: {c!r}")


def neg(c: ConceptExpr) -> ConceptExpr:
    """NNF of the complement of ``c``."""
    return nnf(Not(c))


def subexpressions(c: ConceptExpr) -> Iterator[ConceptExpr]:
    """Yield every subexpression of ``c``, including ``c`` itself (preorder)."""
    yield c
    if isinstance(c, Not):
        yield from subexpressions(c.operand)
    elif isinstance(c, (And, Or)):
        for op in c.operands:
            yield from subexpressions(op)
    elif isinstance(c, (Exists, ForAll)):
        yield from subexpressions(c.filler)


def concept_names_in(c: ConceptExpr) -> set[str]:
    return {sub.name for sub in subexpressions(c) if isinstance(sub, Atomic)}


def role_names_in(c: ConceptExpr) -> set[str]:
    names = set()
    for sub in subexpressions(c):
        if isinstance(sub, (Exists, ForAll, AtLeast, AtMost, HasValue)):
            names.add(sub.role.name)
    return names


def individual_names_in(c: ConceptExpr) -> set[str]:
    names: set[str] = set()
    for sub in subexpressions(c):
        if isinstance(sub, HasValue):
            names.add(sub.individual)
        elif isinstance(sub, OneOf):
            names.update(sub.individuals)
    return names


def data_property_names_in(c: ConceptExpr) -> set[str]:
    return {sub.property for sub in subexpressions(c) if isinstance(sub, DataSome)}
