import itertools

import pytest

from trafficdl.concepts import (
    And,
    Atomic,
    BOTTOM,
    Exists,
    Not,
    OneOf,
    Or,
    RoleExpr,
    TOP,
)
from trafficdl.errors import InconsistentKB
from trafficdl.kb import (
    ClassAssertion,
    EquivalentClasses,
    KnowledgeBase,
    SubClassOf,
)
from trafficdl.tableau import Reasoner
from trafficdl.taxonomy import classify, dl_query, realize

A, B, C, D = Atomic("A"), Atomic("B"), Atomic("C"), Atomic("D")
r = RoleExpr("r")


def make_kb(axioms=(), assertions=(), names=()):
    kb = KnowledgeBase()
    for ax in axioms:
        kb.add_axiom(ax)
    for a in assertions:
        kb.add_assertion(a)
    kb.concept_names.update(names)
    kb.finalize()
    return kb


def test_single_class_sits_between_top_and_bottom():
    kb = make_kb(names=["A"])
    tax = classify(kb)
    assert tax.direct_subclasses("Thing") == {"A"}
    assert tax.direct_superclasses("A") == set()
    assert tax.descendants("A") == set()
    assert tax.equivalents("A") == frozenset({"A"})


def test_equivalent_names_share_group():
    kb = make_kb(axioms=[EquivalentClasses(A, B)])
    tax = classify(kb)
    assert tax.equivalents("A") == frozenset({"A", "B"})


def test_unsatisfiable_class_in_bottom_group():
    kb = make_kb(axioms=[SubClassOf(A, B), SubClassOf(A, Not(B))])
    tax = classify(kb)
    assert tax.unsatisfiable_names() == frozenset({"A"})
    assert "A" not in tax.descendants("B")


def test_classify_requires_consistency():
    kb = make_kb(assertions=[ClassAssertion(A, "x"), ClassAssertion(Not(A), "x")])
    with pytest.raises(InconsistentKB):
        classify(kb)


def test_bundled_hierarchy(core_kb):
    tax = classify(core_kb)
    assert tax.direct_subclasses("LowFrictionDanger") == {
        "WetSurfaceDanger",
        "FreezingSurfaceDanger",
        "MeltingAsphaltDanger",
    }
    assert tax.is_under("LowFrictionDanger", "WeatherDanger")
    assert tax.is_under("LowFrictionDanger", "TrafficDanger")
    assert "LowFrictionDanger" in tax.direct_subclasses("WeatherDanger")
    assert not tax.is_under("TrafficCongestionDanger", "WeatherDanger")
    assert tax.unsatisfiable_names() == frozenset()


def test_taxonomy_edges_match_pairwise_subsumption(core_kb):
    """Transitive closure of the direct edges equals the subsumes relation."""
    reasoner = Reasoner(core_kb)
    tax = classify(core_kb, reasoner)
    names = sorted(core_kb.concept_names)
    for sub, sup in itertools.product(names, names):
        if sub == sup or sup in tax.equivalents(sub):
            expected = reasoner.subsumes(Atomic(sup), Atomic(sub))
            assert expected, f"{sup} should subsume its equivalent {sub}"
            continue
        assert tax.is_under(sub, sup) == reasoner.subsumes(
            Atomic(sup), Atomic(sub)
        ), f"taxonomy and tableau disagree on {sub} <= {sup}"


def test_taxonomy_edges_match_pairwise_small_synthetic():
    kb = make_kb(
        axioms=[
            SubClassOf(B, A),
            SubClassOf(C, A),
            EquivalentClasses(D, And((B, C))),
            SubClassOf(Atomic("E"), D),
            EquivalentClasses(Atomic("F"), Or((B, C))),
            SubClassOf(Atomic("Dead"), Not(A)),
            SubClassOf(Atomic("Dead"), A),
        ],
        names=["G"],
    )
    reasoner = Reasoner(kb)
    tax = classify(kb, reasoner)
    names = sorted(kb.concept_names)
    for sub, sup in itertools.product(names, names):
        lhs = sub in tax.equivalents(sup) or tax.is_under(sub, sup)
        # Bottom-group names are "under" everything semantically
        if sub in tax.unsatisfiable_names():
            lhs = True
        assert lhs == reasoner.subsumes(Atomic(sup), Atomic(sub)), (sub, sup)


def test_realize_empty_abox():
    kb = make_kb(names=["A"])
    assert realize(kb) == {}


def test_realize_most_specific_property(synced_kb, synced_reasoner):
    result = realize(synced_kb, synced_reasoner)
    for individual, classes in result.items():
        for name in classes:
            assert individual in synced_reasoner.instances_of(Atomic(name))
        for a, b in itertools.permutations(sorted(classes), 2):
            assert not synced_reasoner.subsumes(Atomic(a), Atomic(b)) or (
                synced_reasoner.subsumes(Atomic(b), Atomic(a))
            ), f"{a} strictly subsumes {b}; {b} is not most specific"


def test_realize_synchronized_locations(synced_kb, synced_reasoner):
    result = realize(synced_kb, synced_reasoner)
    assert result["c30-020"] == {"PostalCodeLocation"}
    assert result["Szpitalna"] == {"StreetLocation"}
    assert result["StareMiasto"] == {"DistrictLocation"}


def test_instances_of_bottom_empty(synced_reasoner):
    assert synced_reasoner.instances_of(BOTTOM) == set()


def test_instances_of_is_location_of(synced_reasoner):
    result = synced_reasoner.instances_of(Exists(RoleExpr("isLocationOf"), TOP))
    assert "ArmiiKrajowej" in result
    assert "Szpitalna" in result


def test_instances_of_street_location_tutorial(core_kb):
    from trafficdl.store import (
        ConditionRecord,
        LocationRow,
        PostalCodeRow,
        Store,
        synchronize,
    )

    store = Store(
        streets=(LocationRow(1, "Szpitalna"),),
        districts=(LocationRow(1, "StareMiasto"),),
        postal_codes=(PostalCodeRow(1, "30-020"),),
        street_2_district=((1, 1),),
        street_2_postal_code=((1, 1),),
        traffic_conditions=(ConditionRecord(1, None, "HighCongestionCondition", ""),),
        traffic_condition_2_postal_code=((1, 1),),
    )
    kb = synchronize(core_kb, store)
    reasoner = Reasoner(kb)
    assert reasoner.instances_of(Atomic("StreetLocation")) == {"Szpitalna"}


def test_dl_query_star_miasto(synced_kb, synced_reasoner):
    query = And(
        (
            Atomic("TrafficDanger"),
            Exists(
                RoleExpr("hasCondition"),
                Exists(RoleExpr("hasLocation"), OneOf(("StareMiasto",))),
            ),
        )
    )
    answer = dl_query(query, synced_kb, synced_reasoner)
    assert answer.all_subclasses == {"TrafficCongestionDanger"}
    assert answer.equivalents == set()
    assert answer.direct_subclasses == {"TrafficCongestionDanger"}


def test_dl_query_top(synced_kb, synced_reasoner):
    answer = dl_query(TOP, synced_kb, synced_reasoner)
    assert answer.all_subclasses == synced_kb.concept_names  # all satisfiable here
    assert answer.instances == synced_kb.individual_names


def test_dl_query_fresh_atomic(synced_kb, synced_reasoner):
    answer = dl_query(Atomic("NeverDeclared"), synced_kb, synced_reasoner)
    assert answer.equivalents == {"NeverDeclared"}
    assert answer.all_subclasses == set()
    assert answer.direct_superclasses == set()
    assert answer.instances == set()


def test_dl_query_unsatisfiable_concept(core_kb):
    answer = dl_query(And((A, Not(A))), core_kb)
    assert answer.all_subclasses == set()
    assert answer.instances == set()


def test_tree_rendering_shows_multi_parent_groups(core_kb):
    tax = classify(core_kb)
    lines = [(tuple(sorted(names)), depth) for names, depth in tax.iter_groups_topdown()]
    wet = [entry for entry in lines if entry[0] == ("WetSurfaceDanger",)]
    assert len(wet) == 2  # under NamedTrafficDanger and under LowFrictionDanger
