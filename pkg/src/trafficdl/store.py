"""Location/condition/credential store and ontology synchronization.

The store is a single JSON document with one array per relational table
(streets, districts, postal codes, the two location join tables, the traffic
condition forest, condition-to-postal-code assignments, and trusted-user
credentials). Synchronization folds the current store into a copy of the core
ontology: location individuals with class assertions, hasLocation links, and
one subclass axiom per condition assignment.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional

from .concepts import Atomic, HasValue, RoleExpr
from .errors import MissingCoreEntity, StoreError
from .kb import ClassAssertion, KnowledgeBase, RoleAssertion, SubClassOf

SCHEMA_VERSION = 1
POSTAL_CODE_PREFIX = "c"  # postal code values start with digits; prefix keeps
                          # the generated individual names identifier-safe

HAS_LOCATION = "hasLocation"
LOCATION_CLASSES = {
    "postal_code": "PostalCodeLocation",
    "street": "StreetLocation",
    "district": "DistrictLocation",
}


@dataclass(frozen=True)
class LocationRow:
    id: int
    name: str


@dataclass(frozen=True)
class PostalCodeRow:
    id: int
    value: str


@dataclass(frozen=True)
class ConditionRecord:
    id: int
    parent_id: Optional[int]
    name: str
    description: str


@dataclass(frozen=True)
class Credential:
    id: int
    username: str
    password_digest: str

    def __post_init__(self) -> None:
        digest = self.password_digest
        if len(digest) != 40 or any(ch not in "0123456789abcdef" for ch in digest):
            raise StoreError(
                f"access row {self.id}: password digest must be 40 lowercase hex characters"
            )


@dataclass(frozen=True)
class Store:
    streets: tuple[LocationRow, ...] = ()
    districts: tuple[LocationRow, ...] = ()
    postal_codes: tuple[PostalCodeRow, ...] = ()
    street_2_district: tuple[tuple[int, int], ...] = ()
    street_2_postal_code: tuple[tuple[int, int], ...] = ()
    traffic_conditions: tuple[ConditionRecord, ...] = ()
    traffic_condition_2_postal_code: tuple[tuple[int, int], ...] = ()
    access: tuple[Credential, ...] = ()

    def street_by_id(self) -> dict[int, LocationRow]:
        return {row.id: row for row in self.streets}

    def district_by_id(self) -> dict[int, LocationRow]:
        return {row.id: row for row in self.districts}

    def postal_code_by_id(self) -> dict[int, PostalCodeRow]:
        return {row.id: row for row in self.postal_codes}

    def condition_by_id(self) -> dict[int, ConditionRecord]:
        return {row.id: row for row in self.traffic_conditions}

    def validate(self) -> "Store":
        for table, rows in (
            ("streets", self.streets),
            ("districts", self.districts),
            ("postal_codes", self.postal_codes),
            ("traffic_conditions", self.traffic_conditions),
            ("access", self.access),
        ):
            seen: set[int] = set()
            for row in rows:
                if row.id in seen:
                    raise StoreError(f"{table}: duplicate id {row.id}")
                seen.add(row.id)
        values = [p.value for p in self.postal_codes]
        if len(values) != len(set(values)):
            raise StoreError("postal_codes: values must be unique")
        names = [c.name for c in self.traffic_conditions]
        if len(names) != len(set(names)):
            raise StoreError("traffic_conditions: names must be unique")
        usernames = [c.username for c in self.access]
        if len(usernames) != len(set(usernames)):
            raise StoreError("access: usernames must be unique")

        streets = self.street_by_id()
        districts = self.district_by_id()
        codes = self.postal_code_by_id()
        conditions = self.condition_by_id()
        for i, (street_id, district_id) in enumerate(self.street_2_district):
            if street_id not in streets:
                raise StoreError(f"street_2_district row {i}: unknown street_id {street_id}")
            if district_id not in districts:
                raise StoreError(f"street_2_district row {i}: unknown district_id {district_id}")
        for i, (street_id, code_id) in enumerate(self.street_2_postal_code):
            if street_id not in streets:
                raise StoreError(f"street_2_postal_code row {i}: unknown street_id {street_id}")
            if code_id not in codes:
                raise StoreError(f"street_2_postal_code row {i}: unknown postal_code_id {code_id}")
        for i, (condition_id, code_id) in enumerate(self.traffic_condition_2_postal_code):
            if condition_id not in conditions:
                raise StoreError(
                    f"traffic_condition_2_postal_code row {i}: unknown traffic_condition_id {condition_id}"
                )
            if code_id not in codes:
                raise StoreError(
                    f"traffic_condition_2_postal_code row {i}: unknown postal_code_id {code_id}"
                )
        for i, pair in enumerate(self.street_2_district):
            if self.street_2_district.index(pair) != i:
                raise StoreError(f"street_2_district row {i}: duplicate pair {pair}")
        for i, pair in enumerate(self.street_2_postal_code):
            if self.street_2_postal_code.index(pair) != i:
                raise StoreError(f"street_2_postal_code row {i}: duplicate pair {pair}")
        for i, pair in enumerate(self.traffic_condition_2_postal_code):
            if self.traffic_condition_2_postal_code.index(pair) != i:
                raise StoreError(
                    f"traffic_condition_2_postal_code row {i}: duplicate pair {pair}"
                )

        for record in self.traffic_conditions:
            seen_ids = {record.id}
            cursor = record
            while cursor.parent_id is not None:
                if cursor.parent_id not in conditions:
                    raise StoreError(
                        f"traffic_conditions id {cursor.id}: unknown parent_id {cursor.parent_id}"
                    )
                cursor = conditions[cursor.parent_id]
                if cursor.id in seen_ids:
                    raise StoreError(
                        f"traffic_conditions id {record.id}: parent links form a cycle"
                    )
                seen_ids.add(cursor.id)
        return self


def load_store(path: str | Path) -> Store:
    """Load and validate a store file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StoreError(f"cannot read store: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreError(f"store is not valid JSON: {exc}") from exc
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise StoreError(
            f"unsupported schema_version {raw.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )

    def rows(key: str) -> list[dict]:
        value = raw.get(key, [])
        if not isinstance(value, list):
            raise StoreError(f"{key} must be an array")
        return value

    try:
        store = Store(
            streets=tuple(LocationRow(r["id"], r["name"]) for r in rows("streets")),
            districts=tuple(LocationRow(r["id"], r["name"]) for r in rows("districts")),
            postal_codes=tuple(
                PostalCodeRow(r["id"], r["value"]) for r in rows("postal_codes")
            ),
            street_2_district=tuple(
                (r["street_id"], r["district_id"]) for r in rows("street_2_district")
            ),
            street_2_postal_code=tuple(
                (r["street_id"], r["postal_code_id"]) for r in rows("street_2_postal_code")
            ),
            traffic_conditions=tuple(
                ConditionRecord(r["id"], r.get("parent_id"), r["name"], r.get("description", ""))
                for r in rows("traffic_conditions")
            ),
            traffic_condition_2_postal_code=tuple(
                (r["traffic_condition_id"], r["postal_code_id"])
                for r in rows("traffic_condition_2_postal_code")
            ),
            access=tuple(
                Credential(r["id"], r["username"], r["password"]) for r in rows("access")
            ),
        )
    except KeyError as exc:
        raise StoreError(f"store row is missing field {exc}") from exc
    return store.validate()


def save_store(store: Store, path: str | Path) -> None:
    """Validate and persist atomically (write-then-rename), so concurrent
    readers never observe a torn file."""
    store.validate()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "streets": [{"id": r.id, "name": r.name} for r in store.streets],
        "districts": [{"id": r.id, "name": r.name} for r in store.districts],
        "postal_codes": [{"id": r.id, "value": r.value} for r in store.postal_codes],
        "street_2_district": [
            {"street_id": a, "district_id": b} for a, b in store.street_2_district
        ],
        "street_2_postal_code": [
            {"street_id": a, "postal_code_id": b} for a, b in store.street_2_postal_code
        ],
        "traffic_conditions": [
            {"id": r.id, "parent_id": r.parent_id, "name": r.name, "description": r.description}
            for r in store.traffic_conditions
        ],
        "traffic_condition_2_postal_code": [
            {"traffic_condition_id": a, "postal_code_id": b}
            for a, b in store.traffic_condition_2_postal_code
        ],
        "access": [
            {"id": r.id, "username": r.username, "password": r.password_digest}
            for r in store.access
        ],
    }
    target = Path(path)
    scratch = target.with_name(target.name + ".tmp")
    scratch.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    os.replace(scratch, target)


def hash_password(password: str) -> str:
    return hashlib.sha1(password.encode("utf-8")).hexdigest()


def verify_credentials(store: Store, username: str, password: str) -> bool:
    """True iff the username exists and the SHA-1 hex digest of the password
    matches the stored one. Unknown users simply fail."""
    for credential in store.access:
        if credential.username == username:
            return credential.password_digest == hash_password(password)
    return False


def postal_code_individual(value: str) -> str:
    return POSTAL_CODE_PREFIX + value


def synchronize(core: KnowledgeBase, store: Store) -> KnowledgeBase:
    """Fold the store into a copy of the core ontology.

    Adds one typed individual per location row, a hasLocation link per join row
    (postal code to street, street to district), and per condition assignment
    the axiom ``Condition SubClassOf hasLocation value <postalCode>``. The core
    is never mutated; equal inputs produce structurally equal outputs.
    """
    for cls in LOCATION_CLASSES.values():
        if cls not in core.concept_names:
            raise MissingCoreEntity(f"core ontology does not declare class {cls}")
    if HAS_LOCATION not in core.role_names:
        raise MissingCoreEntity(f"core ontology does not declare role {HAS_LOCATION}")
    for record in store.traffic_conditions:
        if record.name not in core.concept_names:
            raise MissingCoreEntity(
                f"condition name {record.name} does not resolve to a core class"
            )

    out = core.copy()
    names_seen: dict[str, str] = {}

    def individual(name: str, origin: str) -> str:
        if name in names_seen and names_seen[name] != origin:
            raise StoreError(
                f"individual name collision: {name} generated by {names_seen[name]} and {origin}"
            )
        if name in core.individual_names:
            raise StoreError(f"individual name collision with core ontology: {name}")
        names_seen[name] = origin
        return name

    codes = store.postal_code_by_id()
    streets = store.street_by_id()
    districts = store.district_by_id()

    for row in store.postal_codes:
        out.add_assertion(
            ClassAssertion(
                Atomic(LOCATION_CLASSES["postal_code"]),
                individual(postal_code_individual(row.value), f"postal_code {row.id}"),
            )
        )
    for row in store.streets:
        out.add_assertion(
            ClassAssertion(
                Atomic(LOCATION_CLASSES["street"]),
                individual(row.name, f"street {row.id}"),
            )
        )
    for row in store.districts:
        out.add_assertion(
            ClassAssertion(
                Atomic(LOCATION_CLASSES["district"]),
                individual(row.name, f"district {row.id}"),
            )
        )
    has_location = RoleExpr(HAS_LOCATION)
    for street_id, code_id in store.street_2_postal_code:
        out.add_assertion(
            RoleAssertion(
                has_location,
                postal_code_individual(codes[code_id].value),
                streets[street_id].name,
            )
        )
    for street_id, district_id in store.street_2_district:
        out.add_assertion(
            RoleAssertion(
                has_location, streets[street_id].name, districts[district_id].name
            )
        )
    conditions = store.condition_by_id()
    for condition_id, code_id in store.traffic_condition_2_postal_code:
        out.add_axiom(
            SubClassOf(
                Atomic(conditions[condition_id].name),
                HasValue(has_location, postal_code_individual(codes[code_id].value)),
            )
        )
    out.finalize()
    return out


def update_assignments(store: Store, postal_code_id: int, condition_ids: Iterable[int]) -> Store:
    """Replace the condition assignments of one postal code wholesale."""
    codes = store.postal_code_by_id()
    if postal_code_id not in codes:
        raise StoreError(f"unknown postal_code_id {postal_code_id}")
    conditions = store.condition_by_id()
    wanted = sorted(set(condition_ids))
    for condition_id in wanted:
        if condition_id not in conditions:
            raise StoreError(f"unknown traffic_condition_id {condition_id}")
    kept = tuple(
        pair for pair in store.traffic_condition_2_postal_code if pair[1] != postal_code_id
    )
    added = tuple((condition_id, postal_code_id) for condition_id in wanted)
    return replace(store, traffic_condition_2_postal_code=kept + added)
