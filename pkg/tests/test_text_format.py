from collections import Counter
from decimal import Decimal

import pytest

from trafficdl.concepts import (
    And,
    AtLeast,
    AtMost,
    Atomic,
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
)
from trafficdl.errors import ParseError
from trafficdl.kb import (
    ClassAssertion,
    DataAssertion,
    DifferentFrom,
    EquivalentClasses,
    KnowledgeBase,
    RoleAssertion,
    SameAs,
    SubClassOf,
)
from trafficdl.text_format import parse_concept, parse_text, serialize_text

A, B, C = Atomic("A"), Atomic("B"), Atomic("C")
r = RoleExpr("r")


def tbox_multiset(kb):
    return Counter(kb.tbox)


def abox_multiset(kb):
    return Counter(kb.abox)


# --- parsing ---------------------------------------------------------------------


def test_parse_postal_code_example():
    kb = parse_text(
        "Class: PostalCodeLocation\n"
        "Individual: c30-020\n"
        "    Types: PostalCodeLocation\n"
        "    Facts: hasLocation s-Szpitalna\n"
    )
    assert kb.concept_names == {"PostalCodeLocation"}
    assert kb.abox == [
        ClassAssertion(Atomic("PostalCodeLocation"), "c30-020"),
        RoleAssertion(RoleExpr("hasLocation"), "c30-020", "s-Szpitalna"),
    ]
    assert {"c30-020", "s-Szpitalna"} <= kb.individual_names


def test_parse_empty_input():
    kb = parse_text("")
    assert kb.tbox == [] and kb.abox == []
    assert parse_text("# only a comment\n").tbox == []


def test_parse_error_on_dangling_some():
    with pytest.raises(ParseError) as exc_info:
        parse_text("Class: A SubClassOf: r some")
    err = exc_info.value
    assert err.kind == "UnexpectedToken"
    assert "some" in err.message
    assert err.location.line == 1
    assert 1 <= err.location.column <= len("Class: A SubClassOf: r some") + 1


def test_parse_error_locations_inside_input():
    source = "Class: A\n    SubClassOf: B and\n"
    with pytest.raises(ParseError) as exc_info:
        parse_text(source)
    loc = exc_info.value.location
    lines = source.splitlines()
    assert 1 <= loc.line <= len(lines) + 1


def test_unknown_keyword_in_frame():
    with pytest.raises(ParseError) as exc_info:
        parse_text("ObjectProperty: r\n    Types: A\n")
    assert exc_info.value.kind == "UnknownKeyword"


def test_unknown_characteristic():
    with pytest.raises(ParseError) as exc_info:
        parse_text("ObjectProperty: r\n    Characteristics: Reflexive\n")
    assert exc_info.value.kind == "UnknownKeyword"
    assert "Reflexive" in exc_info.value.message


def test_malformed_number():
    with pytest.raises(ParseError) as exc_info:
        parse_text("Class: A SubClassOf: r min 2x")
    assert exc_info.value.kind == "MalformedNumber"


def test_cardinality_must_be_integer():
    with pytest.raises(ParseError) as exc_info:
        parse_text("Class: A SubClassOf: r min 2.5")
    assert exc_info.value.kind == "MalformedNumber"


def test_duplicate_declaration_between_kinds():
    with pytest.raises(ParseError) as exc_info:
        parse_text("Class: A\nIndividual: A\n")
    assert exc_info.value.kind == "DuplicateDeclaration"


def test_undeclared_nominal_rejected():
    with pytest.raises(ParseError) as exc_info:
        parse_text("Class: A SubClassOf: r value ghost\n")
    assert exc_info.value.kind == "UndeclaredEntity"
    assert "ghost" in exc_info.value.message


def test_nominal_declared_via_fact_is_fine():
    kb = parse_text(
        "Class: A SubClassOf: r value other\n"
        "Individual: x Facts: r other\n"
    )
    assert "other" in kb.individual_names


def test_quoted_names():
    kb = parse_text('Individual: "30-020"\n    Types: A\n')
    assert "30-020" in kb.individual_names
    assert kb.abox == [ClassAssertion(A, "30-020")]


def test_expression_precedence():
    c = parse_concept("A and B or C")
    assert c == Or((And((A, B)), C))
    c = parse_concept("A or B and C")
    assert c == Or((A, And((B, C))))
    c = parse_concept("not A and B")
    assert c == And((Not(A), B))


def test_restriction_filler_binds_tightly():
    c = parse_concept("r some A and B")
    assert c == And((Exists(r, A), B))
    c = parse_concept("r some (A and B)")
    assert c == Exists(r, And((A, B)))
    c = parse_concept("r only r some A")
    assert c == ForAll(r, Exists(r, A))


def test_inverse_and_braces_and_cardinalities():
    assert parse_concept("inverse(r) some Thing") == Exists(r.inverse(), TOP)
    assert parse_concept("{a, b}", None) == OneOf(("a", "b"))
    assert parse_concept("r min 0") == AtLeast(0, r)
    assert parse_concept("r max 2") == AtMost(2, r)
    assert parse_concept("r value x", None) == HasValue(r, "x")


def test_data_range_expression():
    c = parse_concept("hasCore some range[>= 4]")
    assert c == DataSome("hasCore", NumericRange(min_inclusive=Decimal(4)))
    c = parse_concept("p some range[> 0, <= 10]")
    assert c == DataSome(
        "p", NumericRange(min_exclusive=Decimal(0), max_inclusive=Decimal(10))
    )


def test_data_range_duplicate_facet_side():
    with pytest.raises(ParseError) as exc_info:
        parse_concept("p some range[>= 1, > 2]")
    assert exc_info.value.kind == "UnsupportedConstruct"


def test_parse_concept_rejects_trailing_tokens():
    with pytest.raises(ParseError):
        parse_concept("A B")


def test_parse_concept_validates_against_kb():
    kb = parse_text("Individual: x\n")
    assert parse_concept("r value x", kb) == HasValue(r, "x")
    with pytest.raises(ParseError) as exc_info:
        parse_concept("r value y", kb)
    assert exc_info.value.kind == "UndeclaredEntity"


def test_thing_frame_and_axiom_frame():
    kb = parse_text(
        "Class: Thing\n    SubClassOf: A\n"
        "Axiom: A and B SubClassOf C\n"
        "Axiom: r some A EquivalentTo B\n"
    )
    assert kb.tbox == [
        SubClassOf(TOP, A),
        SubClassOf(And((A, B)), C),
        EquivalentClasses(Exists(r, A), B),
    ]


def test_domain_range_sections():
    kb = parse_text("ObjectProperty: r\n    Domain: A\n    Range: B\n")
    assert kb.tbox == [
        SubClassOf(Exists(r, TOP), A),
        SubClassOf(TOP, ForAll(r, B)),
    ]


def test_same_as_and_different_from():
    kb = parse_text("Individual: a\n    SameAs: b\n    DifferentFrom: c\n")
    assert SameAs("a", "b") in kb.abox
    assert DifferentFrom("a", "c") in kb.abox


def test_self_difference_rejected():
    with pytest.raises(ParseError):
        parse_text("Individual: a\n    DifferentFrom: a\n")


def test_data_facts():
    kb = parse_text("Individual: x\n    Facts: hasCore 12, temp -5.5\n")
    assert DataAssertion("hasCore", "x", Decimal(12)) in kb.abox
    assert DataAssertion("temp", "x", Decimal("-5.5")) in kb.abox
    assert {"hasCore", "temp"} <= kb.data_property_names


# --- serialization ----------------------------------------------------------------


def test_empty_kb_serializes_to_header_only():
    kb = KnowledgeBase()
    kb.finalize()
    text = serialize_text(kb)
    assert text.startswith("#")
    assert parse_text(text).tbox == []


def test_bundled_ontology_is_serialize_fixpoint(core_text, core_kb):
    once = serialize_text(core_kb)
    twice = serialize_text(parse_text(once))
    assert once == twice


def test_polish_labels_roundtrip():
    source = 'Class: LowFrictionDanger\n    Annotations:\n        label "ŚliskaNawierzchnia"@pl\n'
    kb = parse_text(source)
    assert kb.labels[("LowFrictionDanger", "pl")] == "ŚliskaNawierzchnia"
    out = serialize_text(kb)
    assert 'label "ŚliskaNawierzchnia"@pl' in out
    assert parse_text(out).labels == kb.labels


def test_roundtrip_preserves_axiom_multiset(synced_kb):
    reparsed = parse_text(serialize_text(synced_kb))
    assert tbox_multiset(reparsed) == tbox_multiset(synced_kb)
    assert abox_multiset(reparsed) == abox_multiset(synced_kb)
    assert reparsed.concept_names == synced_kb.concept_names
    assert reparsed.individual_names == synced_kb.individual_names
    assert reparsed.labels == synced_kb.labels


def test_roundtrip_assorted_constructs():
    kb = KnowledgeBase()
    kb.add_axiom(SubClassOf(A, Or((Not(B), Exists(r, And((B, C)))))))
    kb.add_axiom(SubClassOf(And((A, B)), C))  # needs the axiom-frame fallback
    kb.add_axiom(EquivalentClasses(A, AtLeast(2, r)))
    kb.add_axiom(SubClassOf(B, HasValue(r, "x")))
    kb.add_axiom(SubClassOf(C, OneOf(("x", "y"))))
    kb.add_axiom(SubClassOf(B, DataSome("p", NumericRange(max_exclusive=Decimal("2.5")))))
    kb.add_assertion(ClassAssertion(Not(A), "x"))
    kb.add_assertion(RoleAssertion(r.inverse(), "x", "y"))
    kb.add_assertion(DataAssertion("p", "y", Decimal("7")))
    kb.add_assertion(SameAs("x", "y"))
    kb.rbox.sub_role_axioms.append((RoleExpr("s"), r))
    kb.rbox.transitive_roles.add("r")
    kb.rbox.functional_roles.add("s")
    kb.set_label("A", "en", 'with "quotes" and \\backslash')
    kb.finalize()
    reparsed = parse_text(serialize_text(kb))
    assert tbox_multiset(reparsed) == tbox_multiset(kb)
    assert abox_multiset(reparsed) == abox_multiset(kb)
    assert reparsed.labels == kb.labels
    assert reparsed.rbox.transitive_roles == kb.rbox.transitive_roles
    assert reparsed.rbox.functional_roles == kb.rbox.functional_roles
    assert set(reparsed.rbox.sub_role_axioms) == set(kb.rbox.sub_role_axioms)


def test_parse_serialize_parse_idempotent(core_text):
    kb1 = parse_text(core_text)
    text1 = serialize_text(kb1)
    kb2 = parse_text(text1)
    assert tbox_multiset(kb1) == tbox_multiset(kb2)
    assert serialize_text(kb2) == text1


def test_reserved_words_are_quoted_when_used_as_names():
    kb = KnowledgeBase()
    kb.add_axiom(SubClassOf(Atomic("value"), Atomic("some thing")))
    kb.finalize()
    reparsed = parse_text(serialize_text(kb))
    assert tbox_multiset(reparsed) == tbox_multiset(kb)
