"""Native textual knowledge-base format (Manchester-flavored frames).

This is the canonical storage format. A document is a sequence of frames::

    Class: Name            ObjectProperty: Name      Individual: Name
        Annotations: ...       SubPropertyOf: ...        Types: ...
        SubClassOf: ...        InverseOf: ...            Facts: ...
        EquivalentTo: ...      Characteristics: ...      SameAs: ...
        DisjointWith: ...      Domain: ... Range: ...    DifferentFrom: ...

plus ``DataProperty:`` frames for numeric properties and a fallback
``Axiom: <expr> SubClassOf <expr>`` frame for axioms whose left side is not a
named class. Expressions use ``and``/``or``/``not``, ``R some E``, ``R only E``,
``R value i``, ``R min n``, ``R max n``, ``P some range[...]``, ``inverse(R)``,
``{i1, i2}`` and parentheses; ``Thing``/``Nothing`` are the top and bottom
concepts. Comments run from ``#`` to end of line. Names may be quoted to allow
arbitrary characters (``"30-020"``). Labels: ``label "text"@lang``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
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
    TOP,
    Top,
    conj,
    disj,
)
from .errors import ParseError, SourceLocation
from .kb import (
    ClassAssertion,
    DataAssertion,
    DifferentFrom,
    DisjointClasses,
    DomainAxiom,
    EquivalentClasses,
    KnowledgeBase,
    RangeAxiom,
    RoleAssertion,
    SameAs,
    SubClassOf,
)

FRAME_SECTIONS = {"Class", "ObjectProperty", "DataProperty", "Individual", "Axiom"}
SECTIONS = FRAME_SECTIONS | {
    "Annotations",
    "SubClassOf",
    "EquivalentTo",
    "DisjointWith",
    "SubPropertyOf",
    "InverseOf",
    "Characteristics",
    "Domain",
    "Range",
    "Types",
    "Facts",
    "SameAs",
    "DifferentFrom",
}
CHARACTERISTICS = {"Transitive", "Functional", "Symmetric", "InverseFunctional"}
RESERVED = {
    "and", "or", "not", "some", "only", "value", "min", "max",
    "inverse", "range", "label", "Thing", "Nothing",
} | CHARACTERISTICS

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_NUMBER_RE = re.compile(r"-?\d+(\.\d+)?")


@dataclass
class Token:
    kind: str  # SECTION NAME STRING NUMBER SYMBOL EOF
    text: str
    location: SourceLocation


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        loc = SourceLocation(line, col)
        if ch == '"':
            j = i + 1
            out = []
            while j < n and source[j] != '"':
                if source[j] == "\\" and j + 1 < n:
                    out.append(source[j + 1])
                    j += 2
                elif source[j] == "\n":
                    raise ParseError(loc, "UnexpectedToken", "unterminated string")
                else:
                    out.append(source[j])
                    j += 1
            if j >= n:
                raise ParseError(loc, "UnexpectedToken", "unterminated string")
            tokens.append(Token("STRING", "".join(out), loc))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NAME_RE.match(source, i)
        if m:
            text = m.group()
            j = m.end()
            if j < n and source[j] == ":" and text in SECTIONS:
                tokens.append(Token("SECTION", text, loc))
                j += 1
            else:
                tokens.append(Token("NAME", text, loc))
            col += j - i
            i = j
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            text = m.group()
            j = m.end()
            if j < n and (source[j].isalnum() or source[j] == "."):
                bad = text + source[j]
                raise ParseError(loc, "MalformedNumber", f"malformed number '{bad}'")
            tokens.append(Token("NUMBER", text, loc))
            col += j - i
            i = j
            continue
        for sym in (">=", "<=", ">", "<", "(", ")", "{", "}", "[", "]", ",", "@"):
            if source.startswith(sym, i):
                tokens.append(Token("SYMBOL", sym, loc))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(loc, "UnexpectedToken", f"unexpected character '{ch}'")
    tokens.append(Token("EOF", "", SourceLocation(line, col)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.kb = KnowledgeBase()
        self.declared_kinds: dict[str, tuple[str, SourceLocation]] = {}
        self.nominal_refs: list[tuple[str, SourceLocation]] = []
        # individuals introduced by frames or assertions; nominals may only
        # point at these, never conjure fresh anonymous ones
        self.declared_individuals: set[str] = set()

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, tok: Token, kind: str, message: str):
        raise ParseError(tok.location, kind, message)

    def expect_symbol(self, sym: str) -> Token:
        tok = self.next()
        if tok.kind != "SYMBOL" or tok.text != sym:
            self.error(tok, "UnexpectedToken", f"expected '{sym}', found '{tok.text or 'end of input'}'")
        return tok

    def parse_name(self, what: str = "name") -> tuple[str, Token]:
        tok = self.next()
        if tok.kind in ("NAME", "STRING"):
            return tok.text, tok
        self.error(tok, "UnexpectedToken", f"expected {what}, found '{tok.text or 'end of input'}'")

    def at_section_or_eof(self) -> bool:
        return self.peek().kind in ("SECTION", "EOF")

    # -- document ------------------------------------------------------------

    def parse_document(self) -> KnowledgeBase:
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                break
            if tok.kind != "SECTION" or tok.text not in FRAME_SECTIONS:
                self.error(tok, "UnexpectedToken", f"expected a frame, found '{tok.text}'")
            self.next()
            if tok.text == "Class":
                self.parse_class_frame()
            elif tok.text == "ObjectProperty":
                self.parse_property_frame()
            elif tok.text == "DataProperty":
                self.parse_data_property_frame()
            elif tok.text == "Individual":
                self.parse_individual_frame()
            else:
                self.parse_axiom_frame()
        self.validate_nominals(self.declared_individuals)
        self.kb.finalize()
        return self.kb

    def validate_nominals(self, declared: set[str]) -> None:
        for name, loc in self.nominal_refs:
            if name not in declared:
                raise ParseError(
                    loc, "UndeclaredEntity",
                    f"individual '{name}' used as a nominal is never declared",
                )

    def declare(self, name: str, kind: str, tok: Token) -> None:
        prev = self.declared_kinds.get(name)
        if prev is not None and prev[0] != kind:
            self.error(tok, "DuplicateDeclaration",
                       f"'{name}' already declared as {prev[0]}")
        self.declared_kinds[name] = (kind, tok.location)

    # -- frames ---------------------------------------------------------------

    def parse_class_frame(self) -> None:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text in ("Thing", "Nothing"):
            self.next()
            subject: ConceptExpr = TOP if tok.text == "Thing" else BOTTOM
            name = tok.text
        else:
            name, tok = self.parse_name("class name")
            self.declare(name, "class", tok)
            self.kb.concept_names.add(name)
            subject = Atomic(name)
        while self.peek().kind == "SECTION" and self.peek().text not in FRAME_SECTIONS:
            section = self.next()
            if section.text == "Annotations":
                self.parse_annotations(name)
            elif section.text == "SubClassOf":
                for expr in self.parse_expr_list():
                    self.kb.add_axiom(SubClassOf(subject, expr))
            elif section.text == "EquivalentTo":
                for expr in self.parse_expr_list():
                    self.kb.add_axiom(EquivalentClasses(subject, expr))
            elif section.text == "DisjointWith":
                for expr in self.parse_expr_list():
                    self.kb.add_axiom(DisjointClasses(subject, expr))
            else:
                self.error(section, "UnknownKeyword",
                           f"'{section.text}:' is not valid in a Class frame")

    def parse_property_frame(self) -> None:
        name, tok = self.parse_name("property name")
        self.declare(name, "object property", tok)
        self.kb.role_names.add(name)
        base = RoleExpr(name)
        while self.peek().kind == "SECTION" and self.peek().text not in FRAME_SECTIONS:
            section = self.next()
            if section.text == "Annotations":
                self.parse_annotations(name)
            elif section.text == "SubPropertyOf":
                for sup in self.parse_role_ref_list():
                    self.kb.rbox.sub_role_axioms.append((base, sup))
            elif section.text == "InverseOf":
                other, _ = self.parse_name("property name")
                self.kb.rbox.inverse_pairs.append((name, other))
            elif section.text == "Characteristics":
                self.parse_characteristics(name, data_property=False)
            elif section.text == "Domain":
                self.kb.add_axiom(DomainAxiom(base, self.parse_expr()))
            elif section.text == "Range":
                self.kb.add_axiom(RangeAxiom(base, self.parse_expr()))
            else:
                self.error(section, "UnknownKeyword",
                           f"'{section.text}:' is not valid in an ObjectProperty frame")

    def parse_data_property_frame(self) -> None:
        name, tok = self.parse_name("property name")
        self.declare(name, "data property", tok)
        self.kb.data_property_names.add(name)
        while self.peek().kind == "SECTION" and self.peek().text not in FRAME_SECTIONS:
            section = self.next()
            if section.text == "Annotations":
                self.parse_annotations(name)
            elif section.text == "Characteristics":
                self.parse_characteristics(name, data_property=True)
            else:
                self.error(section, "UnknownKeyword",
                           f"'{section.text}:' is not valid in a DataProperty frame")

    def parse_characteristics(self, name: str, data_property: bool) -> None:
        saw_any = False
        while self.peek().kind == "NAME":
            tok = self.next()
            if tok.text not in CHARACTERISTICS:
                self.error(tok, "UnknownKeyword", f"unknown characteristic '{tok.text}'")
            if data_property and tok.text != "Functional":
                self.error(tok, "UnsupportedConstruct",
                           f"data properties cannot be {tok.text}")
            saw_any = True
            if tok.text == "Transitive":
                self.kb.rbox.transitive_roles.add(name)
            elif tok.text == "Functional":
                self.kb.rbox.functional_roles.add(name)
            elif tok.text == "Symmetric":
                self.kb.rbox.symmetric_roles.add(name)
            else:
                self.kb.rbox.inverse_functional_roles.add(name)
        if not saw_any:
            self.error(self.peek(), "UnexpectedToken", "expected a characteristic")

    def parse_individual_frame(self) -> None:
        name, tok = self.parse_name("individual name")
        self.declare(name, "individual", tok)
        self.kb.individual_names.add(name)
        self.declared_individuals.add(name)
        while self.peek().kind == "SECTION" and self.peek().text not in FRAME_SECTIONS:
            section = self.next()
            if section.text == "Annotations":
                self.parse_annotations(name)
            elif section.text == "Types":
                for expr in self.parse_expr_list():
                    self.kb.add_assertion(ClassAssertion(expr, name))
            elif section.text == "Facts":
                self.parse_facts(name)
            elif section.text == "SameAs":
                for other in self.parse_name_list():
                    self.declared_individuals.add(other)
                    self.kb.add_assertion(SameAs(name, other))
            elif section.text == "DifferentFrom":
                for other in self.parse_name_list():
                    tok2 = self.peek()
                    if other == name:
                        self.error(tok2, "UnexpectedToken",
                                   f"'{name}' cannot differ from itself")
                    self.declared_individuals.add(other)
                    self.kb.add_assertion(DifferentFrom(name, other))
            else:
                self.error(section, "UnknownKeyword",
                           f"'{section.text}:' is not valid in an Individual frame")

    def parse_facts(self, subject: str) -> None:
        while True:
            prop = self.parse_role_ref()
            tok = self.peek()
            if tok.kind == "NUMBER":
                self.next()
                if prop.inverted:
                    self.error(tok, "UnexpectedToken",
                               "data facts cannot use an inverse property")
                self.kb.add_assertion(
                    DataAssertion(prop.name, subject, _decimal(tok, self))
                )
            elif tok.kind in ("NAME", "STRING"):
                obj, _ = self.parse_name("individual name")
                self.declared_individuals.add(obj)
                self.kb.add_assertion(RoleAssertion(prop, subject, obj))
            else:
                self.error(tok, "UnexpectedToken",
                           f"expected a fact value, found '{tok.text or 'end of input'}'")
            if self.peek().kind == "SYMBOL" and self.peek().text == ",":
                self.next()
                continue
            break

    def parse_axiom_frame(self) -> None:
        lhs = self.parse_expr()
        tok = self.next()
        if tok.kind == "NAME" and tok.text == "SubClassOf":
            self.kb.add_axiom(SubClassOf(lhs, self.parse_expr()))
        elif tok.kind == "NAME" and tok.text == "EquivalentTo":
            self.kb.add_axiom(EquivalentClasses(lhs, self.parse_expr()))
        else:
            self.error(tok, "UnexpectedToken",
                       f"expected 'SubClassOf' or 'EquivalentTo', found '{tok.text or 'end of input'}'")

    def parse_annotations(self, entity: str) -> None:
        saw_any = False
        while self.peek().kind == "NAME" and self.peek().text == "label":
            self.next()
            text_tok = self.next()
            if text_tok.kind != "STRING":
                self.error(text_tok, "UnexpectedToken", "expected a quoted label")
            self.expect_symbol("@")
            lang, lang_tok = self.parse_name("language tag")
            key = (entity, lang)
            if key in self.kb.labels and self.kb.labels[key] != text_tok.text:
                self.error(lang_tok, "DuplicateDeclaration",
                           f"conflicting {lang} label for '{entity}'")
            self.kb.set_label(entity, lang, text_tok.text)
            saw_any = True
        if not saw_any:
            self.error(self.peek(), "UnexpectedToken", "expected 'label'")

    # -- lists -------------------------------------------------------------------

    def parse_expr_list(self) -> list[ConceptExpr]:
        out = [self.parse_expr()]
        while self.peek().kind == "SYMBOL" and self.peek().text == ",":
            self.next()
            out.append(self.parse_expr())
        return out

    def parse_name_list(self) -> list[str]:
        out = [self.parse_name()[0]]
        while self.peek().kind == "SYMBOL" and self.peek().text == ",":
            self.next()
            out.append(self.parse_name()[0])
        return out

    def parse_role_ref_list(self) -> list[RoleExpr]:
        out = [self.parse_role_ref()]
        while self.peek().kind == "SYMBOL" and self.peek().text == ",":
            self.next()
            out.append(self.parse_role_ref())
        return out

    def parse_role_ref(self) -> RoleExpr:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "inverse":
            self.next()
            self.expect_symbol("(")
            name, _ = self.parse_name("property name")
            self.expect_symbol(")")
            return RoleExpr(name, True)
        name, _ = self.parse_name("property name")
        return RoleExpr(name)

    # -- expressions ----------------------------------------------------------------

    def parse_expr(self) -> ConceptExpr:
        operands = [self.parse_and()]
        while self.peek().kind == "NAME" and self.peek().text == "or":
            self.next()
            operands.append(self.parse_and())
        return disj(operands)

    def parse_and(self) -> ConceptExpr:
        operands = [self.parse_unary()]
        while self.peek().kind == "NAME" and self.peek().text == "and":
            self.next()
            operands.append(self.parse_unary())
        return conj(operands)

    def parse_unary(self) -> ConceptExpr:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "not":
            self.next()
            return Not(self.parse_unary())
        if tok.kind == "NAME" and tok.text == "inverse":
            role_ref = self.parse_role_ref()
            return self.parse_restriction(role_ref, tok)
        if tok.kind in ("NAME", "STRING"):
            nxt = self.peek(1)
            if nxt.kind == "NAME" and nxt.text in ("some", "only", "value", "min", "max"):
                self.next()
                return self.parse_restriction(RoleExpr(tok.text), tok)
        return self.parse_primary()

    def parse_restriction(self, role_ref: RoleExpr, role_tok: Token) -> ConceptExpr:
        op = self.next()
        if op.kind != "NAME" or op.text not in ("some", "only", "value", "min", "max"):
            self.error(op, "UnexpectedToken",
                       f"expected a restriction keyword after '{role_ref}', found '{op.text}'")
        if op.text in ("some", "only"):
            nxt = self.peek()
            if (
                op.text == "some"
                and nxt.kind == "NAME"
                and nxt.text == "range"
                and self.peek(1).kind == "SYMBOL"
                and self.peek(1).text == "["
            ):
                if role_ref.inverted:
                    self.error(nxt, "UnexpectedToken",
                               "data restrictions cannot use an inverse property")
                return DataSome(role_ref.name, self.parse_numeric_range())
            if self.at_section_or_eof():
                self.error(op, "UnexpectedToken",
                           f"'{op.text}' is missing its filler expression")
            filler = self.parse_unary()
            return Exists(role_ref, filler) if op.text == "some" else ForAll(role_ref, filler)
        if op.text == "value":
            name, tok = self.parse_name("individual name")
            self.nominal_refs.append((name, tok.location))
            return HasValue(role_ref, name)
        num = self.next()
        if num.kind != "NUMBER" or not num.text.isdigit():
            self.error(num, "MalformedNumber",
                       f"cardinality must be a non-negative integer, found '{num.text}'")
        n = int(num.text)
        return AtLeast(n, role_ref) if op.text == "min" else AtMost(n, role_ref)

    def parse_numeric_range(self) -> NumericRange:
        self.next()  # 'range'
        self.expect_symbol("[")
        fields: dict[str, Decimal] = {}
        keys = {">=": "min_inclusive", ">": "min_exclusive",
                "<=": "max_inclusive", "<": "max_exclusive"}
        while True:
            op = self.next()
            if op.kind != "SYMBOL" or op.text not in keys:
                self.error(op, "UnexpectedToken",
                           f"expected a facet comparison, found '{op.text}'")
            num = self.next()
            if num.kind != "NUMBER":
                self.error(num, "MalformedNumber", f"expected a number, found '{num.text}'")
            key = keys[op.text]
            lower = key.startswith("min")
            for existing in fields:
                if existing.startswith("min") == lower:
                    self.error(op, "UnsupportedConstruct",
                               "at most one lower and one upper facet allowed")
            fields[key] = _decimal(num, self)
            if self.peek().kind == "SYMBOL" and self.peek().text == ",":
                self.next()
                continue
            break
        self.expect_symbol("]")
        return NumericRange(**fields)

    def parse_primary(self) -> ConceptExpr:
        tok = self.next()
        if tok.kind == "NAME" and tok.text == "Thing":
            return TOP
        if tok.kind == "NAME" and tok.text == "Nothing":
            return BOTTOM
        if tok.kind == "SYMBOL" and tok.text == "(":
            inner = self.parse_expr()
            self.expect_symbol(")")
            return inner
        if tok.kind == "SYMBOL" and tok.text == "{":
            names = []
            while True:
                name, ntok = self.parse_name("individual name")
                self.nominal_refs.append((name, ntok.location))
                names.append(name)
                nxt = self.next()
                if nxt.kind == "SYMBOL" and nxt.text == ",":
                    continue
                if nxt.kind == "SYMBOL" and nxt.text == "}":
                    break
                self.error(nxt, "UnexpectedToken",
                           f"expected ',' or '}}', found '{nxt.text or 'end of input'}'")
            return OneOf(tuple(names))
        if tok.kind in ("NAME", "STRING"):
            if tok.kind == "NAME" and tok.text in RESERVED:
                self.error(tok, "UnexpectedToken",
                           f"'{tok.text}' cannot be used as a class name here")
            return Atomic(tok.text)
        self.error(tok, "UnexpectedToken",
                   f"expected an expression, found '{tok.text or 'end of input'}'")


def _decimal(tok: Token, parser: _Parser) -> Decimal:
    try:
        return Decimal(tok.text)
    except InvalidOperation:
        parser.error(tok, "MalformedNumber", f"malformed number '{tok.text}'")


def parse_text(source: str) -> KnowledgeBase:
    """Parse a native-format document into a loaded knowledge base."""
    return _Parser(source).parse_document()


def parse_concept(source: str, kb: Optional[KnowledgeBase] = None) -> ConceptExpr:
    """Parse a standalone concept expression (the grammar's expr sublanguage).

    Nominals are validated against ``kb``'s declared individuals when given.
    """
    parser = _Parser(source)
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "EOF":
        parser.error(tok, "UnexpectedToken", f"unexpected trailing '{tok.text}'")
    if kb is not None:
        parser.validate_nominals(kb.individual_names)
    return expr


# --- serialization ------------------------------------------------------------


def _quote_name(name: str) -> str:
    if _NAME_RE.fullmatch(name) and name not in RESERVED and name not in SECTIONS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _role_str(r: RoleExpr) -> str:
    return f"inverse({_quote_name(r.name)})" if r.inverted else _quote_name(r.name)


def _prec(c: ConceptExpr) -> int:
    if isinstance(c, Or):
        return 1
    if isinstance(c, And):
        return 2
    if isinstance(c, (Not, Exists, ForAll, AtLeast, AtMost, HasValue, DataSome)):
        return 3
    return 4


def expr_to_text(c: ConceptExpr, min_prec: int = 0) -> str:
    if _prec(c) < min_prec:
        return "(" + expr_to_text(c) + ")"
    if isinstance(c, Top):
        return "Thing"
    if isinstance(c, Bottom):
        return "Nothing"
    if isinstance(c, Atomic):
        return _quote_name(c.name)
    if isinstance(c, Or):
        return " or ".join(expr_to_text(op, 2) for op in c.operands)
    if isinstance(c, And):
        return " and ".join(expr_to_text(op, 3) for op in c.operands)
    if isinstance(c, Not):
        return "not " + expr_to_text(c.operand, 3)
    if isinstance(c, Exists):
        return f"{_role_str(c.role)} some " + expr_to_text(c.filler, 3)
    if isinstance(c, ForAll):
        return f"{_role_str(c.role)} only " + expr_to_text(c.filler, 3)
    if isinstance(c, AtLeast):
        return f"{_role_str(c.role)} min {c.n}"
    if isinstance(c, AtMost):
        return f"{_role_str(c.role)} max {c.n}"
    if isinstance(c, HasValue):
        return f"{_role_str(c.role)} value {_quote_name(c.individual)}"
    if isinstance(c, OneOf):
        return "{" + ", ".join(_quote_name(i) for i in c.individuals) + "}"
    if isinstance(c, DataSome):
        facets = []
        if c.range.min_inclusive is not None:
            facets.append(f">= {c.range.min_inclusive}")
        if c.range.min_exclusive is not None:
            facets.append(f"> {c.range.min_exclusive}")
        if c.range.max_inclusive is not None:
            facets.append(f"<= {c.range.max_inclusive}")
        if c.range.max_exclusive is not None:
            facets.append(f"< {c.range.max_exclusive}")
        return f"{_quote_name(c.property)} some range[" + ", ".join(facets) + "]"
    raise ValueError(f"cannot serialize {c!r}")


def _label_lines(kb: KnowledgeBase, entity: str) -> list[str]:
    langs = sorted(lang for (name, lang) in kb.labels if name == entity)
    if not langs:
        return []
    lines = ["    Annotations:"]
    for lang in langs:
        text = kb.labels[(entity, lang)].replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'        label "{text}"@{lang}')
    return lines


def serialize_text(kb: KnowledgeBase) -> str:
    """Deterministic native-format rendering: entities sorted by name, axioms in
    insertion order. ``parse_text(serialize_text(kb))`` loads back to the same
    axiom multiset."""
    out: list[str] = ["# knowledge base"]

    domain_axioms: dict[str, list] = {}
    range_axioms: dict[str, list] = {}
    class_sub: dict[str, list] = {}
    class_equiv: dict[str, list] = {}
    top_sub: list = []
    top_equiv: list = []
    loose: list[tuple[str, ConceptExpr, ConceptExpr]] = []

    for ax in kb.tbox:
        if isinstance(ax, SubClassOf):
            if (
                isinstance(ax.sub, Exists)
                and not ax.sub.role.inverted
                and isinstance(ax.sub.filler, Top)
            ):
                domain_axioms.setdefault(ax.sub.role.name, []).append(ax.sup)
            elif (
                isinstance(ax.sub, Top)
                and isinstance(ax.sup, ForAll)
                and not ax.sup.role.inverted
            ):
                range_axioms.setdefault(ax.sup.role.name, []).append(ax.sup.filler)
            elif isinstance(ax.sub, Atomic):
                class_sub.setdefault(ax.sub.name, []).append(ax.sup)
            elif isinstance(ax.sub, Top):
                top_sub.append(ax.sup)
            else:
                loose.append(("SubClassOf", ax.sub, ax.sup))
        else:
            if isinstance(ax.a, Atomic):
                class_equiv.setdefault(ax.a.name, []).append(ax.b)
            elif isinstance(ax.a, Top):
                top_equiv.append(ax.b)
            else:
                loose.append(("EquivalentTo", ax.a, ax.b))

    for name in sorted(kb.role_names):
        out.append("")
        out.append(f"ObjectProperty: {_quote_name(name)}")
        out.extend(_label_lines(kb, name))
        base = RoleExpr(name)
        for sub, sup in kb.rbox.sub_role_axioms:
            if sub == base:
                out.append(f"    SubPropertyOf: {_role_str(sup)}")
            elif sub == base.inverse():
                out.append(f"    SubPropertyOf: {_role_str(sup.inverse())}")
        for a, b in kb.rbox.inverse_pairs:
            if a == name:
                out.append(f"    InverseOf: {_quote_name(b)}")
        chars = []
        if name in kb.rbox.transitive_roles:
            chars.append("Transitive")
        if name in kb.rbox.functional_roles:
            chars.append("Functional")
        if name in kb.rbox.symmetric_roles:
            chars.append("Symmetric")
        if name in kb.rbox.inverse_functional_roles:
            chars.append("InverseFunctional")
        if chars:
            out.append("    Characteristics: " + " ".join(chars))
        for concept in domain_axioms.get(name, ()):
            out.append(f"    Domain: {expr_to_text(concept)}")
        for concept in range_axioms.get(name, ()):
            out.append(f"    Range: {expr_to_text(concept)}")

    for name in sorted(kb.data_property_names):
        out.append("")
        out.append(f"DataProperty: {_quote_name(name)}")
        out.extend(_label_lines(kb, name))
        if name in kb.rbox.functional_roles:
            out.append("    Characteristics: Functional")

    class_names = kb.concept_names | set(class_sub) | set(class_equiv)
    for name in sorted(class_names):
        out.append("")
        out.append(f"Class: {_quote_name(name)}")
        out.extend(_label_lines(kb, name))
        for sup in class_sub.get(name, ()):
            out.append(f"    SubClassOf: {expr_to_text(sup)}")
        for other in class_equiv.get(name, ()):
            out.append(f"    EquivalentTo: {expr_to_text(other)}")

    if top_sub or top_equiv:
        out.append("")
        out.append("Class: Thing")
        for sup in top_sub:
            out.append(f"    SubClassOf: {expr_to_text(sup)}")
        for other in top_equiv:
            out.append(f"    EquivalentTo: {expr_to_text(other)}")

    by_individual: dict[str, list[str]] = {}
    for a in kb.abox:
        if isinstance(a, ClassAssertion):
            by_individual.setdefault(a.individual, []).append(
                f"    Types: {expr_to_text(a.concept)}"
            )
        elif isinstance(a, RoleAssertion):
            by_individual.setdefault(a.subject, []).append(
                f"    Facts: {_role_str(a.role)} {_quote_name(a.object)}"
            )
        elif isinstance(a, DataAssertion):
            by_individual.setdefault(a.individual, []).append(
                f"    Facts: {_quote_name(a.property)} {a.value}"
            )
        elif isinstance(a, SameAs):
            by_individual.setdefault(a.a, []).append(
                f"    SameAs: {_quote_name(a.b)}"
            )
        elif isinstance(a, DifferentFrom):
            by_individual.setdefault(a.a, []).append(
                f"    DifferentFrom: {_quote_name(a.b)}"
            )

    for name in sorted(kb.individual_names):
        out.append("")
        out.append(f"Individual: {_quote_name(name)}")
        out.extend(_label_lines(kb, name))
        out.extend(by_individual.get(name, ()))

    for kind, lhs, rhs in loose:
        out.append("")
        out.append(f"Axiom: {expr_to_text(lhs)} {kind} {expr_to_text(rhs)}")

    return "\n".join(out) + "\n"
