import json
from collections import Counter

import pytest

from trafficdl.concepts import Atomic, HasValue, RoleExpr
from trafficdl.errors import MissingCoreEntity, StoreError
from trafficdl.kb import ClassAssertion, RoleAssertion, SubClassOf
from trafficdl.store import (
    ConditionRecord,
    Credential,
    LocationRow,
    PostalCodeRow,
    Store,
    hash_password,
    load_store,
    postal_code_individual,
    save_store,
    synchronize,
    update_assignments,
    verify_credentials,
)
SA_DIGEST = "c8ab51895da8a2a3ea04f31bd7e317af88596327"


def small_store() -> Store:
    return Store(
        streets=(LocationRow(1, "Szpitalna"),),
        districts=(LocationRow(1, "StareMiasto"),),
        postal_codes=(PostalCodeRow(1, "30-020"),),
        street_2_district=((1, 1),),
        street_2_postal_code=((1, 1),),
        traffic_conditions=(ConditionRecord(1, None, "HighCongestionCondition", "jam"),),
        traffic_condition_2_postal_code=((1, 1),),
        access=(Credential(1, "sa", SA_DIGEST),),
    )


# --- persistence ------------------------------------------------------------------


def test_save_load_roundtrip(tmp_path):
    store = small_store()
    path = tmp_path / "store.json"
    save_store(store, path)
    assert load_store(path) == store


def test_empty_store_roundtrip(tmp_path):
    path = tmp_path / "store.json"
    save_store(Store(), path)
    assert load_store(path) == Store()


def test_sample_store_contents(sample_store):
    assert {d.name for d in sample_store.districts} == {"StareMiasto"}
    assert {s.name for s in sample_store.streets} == {"ArmiiKrajowej", "Szpitalna"}
    assert {p.value for p in sample_store.postal_codes} == {"30-147", "30-020"}
    assert any(c.username == "sa" for c in sample_store.access)


def test_dangling_reference_names_table_and_row(tmp_path):
    store = small_store()
    broken = json.loads(open_store_json(store))
    broken["street_2_district"].append({"street_id": 99, "district_id": 1})
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken), encoding="utf-8")
    with pytest.raises(StoreError) as exc_info:
        load_store(path)
    message = str(exc_info.value)
    assert "street_2_district" in message and "99" in message


def open_store_json(store) -> str:
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "store.json"
        save_store(store, path)
        return path.read_text(encoding="utf-8")


def test_schema_version_mismatch(tmp_path):
    doc = json.loads(open_store_json(small_store()))
    doc["schema_version"] = 2
    path = tmp_path / "v2.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(StoreError) as exc_info:
        load_store(path)
    assert "schema_version" in str(exc_info.value)


def test_condition_cycle_detected(tmp_path):
    doc = json.loads(open_store_json(small_store()))
    doc["traffic_conditions"] = [
        {"id": 1, "parent_id": 2, "name": "A", "description": ""},
        {"id": 2, "parent_id": 1, "name": "B", "description": ""},
    ]
    doc["traffic_condition_2_postal_code"] = []
    path = tmp_path / "cycle.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(StoreError) as exc_info:
        load_store(path)
    assert "cycle" in str(exc_info.value)


def test_bad_digest_rejected():
    with pytest.raises(StoreError):
        Credential(1, "sa", "not-a-digest")
    with pytest.raises(StoreError):
        Credential(1, "sa", "C8AB51895DA8A2A3EA04F31BD7E317AF88596327")  # uppercase


# --- credentials --------------------------------------------------------------------


def test_verify_credentials(sample_store):
    assert verify_credentials(sample_store, "sa", "traffic")
    assert not verify_credentials(sample_store, "sa", "wrong")
    assert not verify_credentials(sample_store, "ghost", "traffic")


def test_hash_password_matches_known_vector():
    # SHA-1("abc") from the published test vectors
    assert hash_password("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d"
    assert hash_password("traffic") == SA_DIGEST


# --- synchronization -----------------------------------------------------------------


def test_synchronize_reproduces_tutorial(core_kb):
    synced = synchronize(core_kb, small_store())
    assert ClassAssertion(Atomic("PostalCodeLocation"), "c30-020") in synced.abox
    assert ClassAssertion(Atomic("StreetLocation"), "Szpitalna") in synced.abox
    assert ClassAssertion(Atomic("DistrictLocation"), "StareMiasto") in synced.abox
    has_location = RoleExpr("hasLocation")
    assert RoleAssertion(has_location, "c30-020", "Szpitalna") in synced.abox
    assert RoleAssertion(has_location, "Szpitalna", "StareMiasto") in synced.abox
    assert (
        SubClassOf(Atomic("HighCongestionCondition"), HasValue(has_location, "c30-020"))
        in synced.tbox
    )


def test_synchronize_axiom_counts(core_kb, sample_store):
    synced = synchronize(core_kb, sample_store)
    store = sample_store
    added_assertions = (
        len(store.postal_codes) + len(store.streets) + len(store.districts)
        + len(store.street_2_postal_code) + len(store.street_2_district)
    )
    assert len(synced.abox) == len(core_kb.abox) + added_assertions
    assert len(synced.tbox) == len(core_kb.tbox) + len(store.traffic_condition_2_postal_code)


def test_synchronize_is_pure_and_deterministic(core_kb, sample_store):
    first = synchronize(core_kb, sample_store)
    second = synchronize(core_kb, sample_store)
    assert first.tbox == second.tbox
    assert first.abox == second.abox
    assert first.individual_names == second.individual_names
    assert core_kb.abox == []  # core untouched


def test_synchronize_empty_store_is_core(core_kb):
    synced = synchronize(core_kb, Store())
    assert Counter(synced.tbox) == Counter(core_kb.tbox)
    assert synced.abox == []


def test_synchronize_missing_core_class():
    from trafficdl.text_format import parse_text

    bare = parse_text("Class: PostalCodeLocation\n")
    with pytest.raises(MissingCoreEntity) as exc_info:
        synchronize(bare, Store())
    assert "StreetLocation" in str(exc_info.value)


def test_synchronize_unresolved_condition_name(core_kb):
    store = Store(
        traffic_conditions=(ConditionRecord(1, None, "NoSuchCondition", ""),),
    )
    with pytest.raises(MissingCoreEntity) as exc_info:
        synchronize(core_kb, store)
    assert "NoSuchCondition" in str(exc_info.value)


def test_synchronize_name_collision(core_kb):
    store = Store(
        streets=(LocationRow(1, "Same"),),
        districts=(LocationRow(1, "Same"),),
    )
    with pytest.raises(StoreError) as exc_info:
        synchronize(core_kb, store)
    assert "Same" in str(exc_info.value)


def test_synchronized_consistency_and_query(core_kb, sample_store, synced_reasoner):
    assert synced_reasoner.is_consistent()


# --- assignment updates -----------------------------------------------------------------


def test_update_assignments_replaces_wholesale():
    store = small_store()
    updated = update_assignments(store, 1, [1])
    assert updated.traffic_condition_2_postal_code == ((1, 1),)
    emptied = update_assignments(store, 1, [])
    assert emptied.traffic_condition_2_postal_code == ()


def test_update_assignments_leaves_other_codes(core_kb, sample_store):
    # 30-147 (id 1) gets a condition; 30-020 (id 2) keeps its assignment
    updated = update_assignments(sample_store, 1, [14])
    assert (14, 1) in updated.traffic_condition_2_postal_code
    assert (14, 2) in updated.traffic_condition_2_postal_code


def test_update_assignments_unknown_ids():
    store = small_store()
    with pytest.raises(StoreError):
        update_assignments(store, 99, [])
    with pytest.raises(StoreError):
        update_assignments(store, 1, [99])
    # the original store object is untouched either way
    assert store == small_store()


def test_update_then_synchronize_reflects_new_set(core_kb, sample_store):
    cleared = update_assignments(sample_store, 2, [])
    synced = synchronize(core_kb, cleared)
    has_location = RoleExpr("hasLocation")
    assert (
        SubClassOf(Atomic("HighCongestionCondition"), HasValue(has_location, "c30-020"))
        not in synced.tbox
    )


def test_postal_code_individual_prefix():
    assert postal_code_individual("30-020") == "c30-020"
