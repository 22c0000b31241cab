"""HTTP facade over the engine: location catalogs, danger queries, predefined
questions, synchronization, ontology downloads, and trusted-user updates.

Reads serve from an immutable cached snapshot (knowledge base, reasoner,
taxonomy) swapped atomically by synchronization, so they stay responsive and
never observe a half-built state. The first read triggers the initial sync
lazily. Updates to condition assignments do NOT refresh the cache; clients
must request synchronization explicitly.
"""

from __future__ import annotations

import logging
import secrets
import threading
import time
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, HTTPException, Query, Response
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .concepts import And, Atomic, Exists, OneOf, RoleExpr
from .errors import KbError
from .kb import KnowledgeBase, is_defined_class
from .store import (
    Store,
    load_store,
    postal_code_individual,
    save_store,
    synchronize,
    update_assignments,
    verify_credentials,
)
from .tableau import Reasoner
from .taxonomy import Taxonomy, classify, dl_query
from .text_format import parse_text, serialize_text

logger = logging.getLogger(__name__)

LANGS = ("en", "pl")
SCOPES = ("postal_code", "street", "district")


@dataclass(frozen=True)
class Snapshot:
    """One synchronized state: everything a read needs, immutable."""

    kb: KnowledgeBase
    reasoner: Reasoner
    taxonomy: Taxonomy
    store: Store


class KbCache:
    """Holder for the current snapshot; swaps are atomic, reads lock-free."""

    def __init__(self) -> None:
        self.current: Optional[tuple[int, Snapshot]] = None
        self._swap_lock = threading.Lock()
        self.generation = 0

    def read(self) -> Optional[tuple[int, Snapshot]]:
        return self.current

    def swap(self, snapshot: Snapshot) -> int:
        with self._swap_lock:
            self.generation += 1
            self.current = (self.generation, snapshot)
            return self.generation


@dataclass
class Session:
    token: str
    username: str
    expires_at: float


@dataclass
class ServiceConfig:
    ontology_uri: str
    store_path: str
    listen_address: str = "127.0.0.1:8080"
    session_ttl: float = 3600.0
    dashboard_dir: Optional[str] = None


def load_config(path: str | Path) -> ServiceConfig:
    """Flat key=value file; '#' starts a comment line."""
    values: dict[str, str] = {}
    for raw_line in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise KbError(f"config line is not key=value: {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    try:
        config = ServiceConfig(
            ontology_uri=values.pop("ontology_uri"),
            store_path=values.pop("store_path"),
        )
    except KeyError as exc:
        raise KbError(f"config is missing required key {exc}") from exc
    if "listen_address" in values:
        config.listen_address = values.pop("listen_address")
    if "session_ttl" in values:
        config.session_ttl = float(values.pop("session_ttl"))
    if "dashboard_dir" in values:
        config.dashboard_dir = values.pop("dashboard_dir")
    if values:
        raise KbError(f"unknown config keys: {', '.join(sorted(values))}")
    return config


def fetch_ontology(uri: str) -> str:
    """Resolve the core ontology once at boot: plain path, file:// or http(s)://."""
    if uri.startswith(("http://", "https://")):
        with urllib.request.urlopen(uri) as response:
            return response.read().decode("utf-8")
    if uri.startswith("file://"):
        uri = uri[len("file://"):]
    return Path(uri).read_text(encoding="utf-8")


class LoginBody(BaseModel):
    username: str
    password: str


class ConditionsBody(BaseModel):
    postal_code: str
    condition_names: list[str]


class TrafficService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        core_text = fetch_ontology(config.ontology_uri)
        self.core = parse_text(core_text)  # fatal (with location) when unparseable
        self.core_text = serialize_text(self.core)
        self.cache = KbCache()
        self.sessions: dict[str, Session] = {}
        self._sync_lock = threading.RLock()
        self._store_lock = threading.Lock()

    # -- store access -----------------------------------------------------------

    def read_store(self) -> Store:
        return load_store(self.config.store_path)

    # -- synchronization ----------------------------------------------------------

    def sync(self) -> int:
        """Run synchronize + classify and swap the cache; serialized with other
        syncs, never blocking readers. On failure the old snapshot stays."""
        with self._sync_lock:
            with self._store_lock:  # don't race an in-progress assignment write
                store = self.read_store()
            synced = synchronize(self.core, store)
            reasoner = Reasoner(synced)
            taxonomy = classify(synced, reasoner)  # raises InconsistentKB on clash
            snapshot = Snapshot(kb=synced, reasoner=reasoner, taxonomy=taxonomy, store=store)
            return self.cache.swap(snapshot)

    def snapshot(self) -> tuple[int, Snapshot]:
        """Current snapshot; the very first read synchronizes lazily."""
        current = self.cache.read()
        if current is None:
            with self._sync_lock:
                if self.cache.read() is None:
                    try:
                        self.sync()
                    except KbError as exc:
                        raise HTTPException(status_code=500, detail=str(exc))
                current = self.cache.read()
        assert current is not None
        return current

    # -- sessions ----------------------------------------------------------------

    def login(self, username: str, password: str) -> str:
        store = self.read_store()
        if not verify_credentials(store, username, password):
            raise HTTPException(status_code=401, detail="bad credentials")
        token = secrets.token_hex(16)  # 128 bits
        self.sessions[token] = Session(
            token=token, username=username, expires_at=time.time() + self.config.session_ttl
        )
        return token

    def authenticate(self, authorization: Optional[str]) -> Session:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = authorization[len("Bearer "):].strip()
        session = self.sessions.get(token)
        if session is None or session.expires_at < time.time():
            raise HTTPException(status_code=401, detail="invalid or expired session")
        return session

    # -- queries -------------------------------------------------------------------

    def location_individual(self, store: Store, scope: str, name: str) -> Optional[str]:
        if scope == "postal_code":
            for row in store.postal_codes:
                if row.value == name:
                    return postal_code_individual(row.value)
            return None
        rows = store.streets if scope == "street" else store.districts
        for row in rows:
            if row.name == name:
                return row.name
        return None

    def dangers_for(self, snapshot: Snapshot, individual: str, lang: str) -> list[dict]:
        query = And(
            (
                Atomic("TrafficDanger"),
                Exists(
                    RoleExpr("hasCondition"),
                    Exists(RoleExpr("hasLocation"), OneOf((individual,))),
                ),
            )
        )
        answer = dl_query(query, snapshot.kb, snapshot.reasoner, snapshot.taxonomy)
        names = sorted(
            (answer.all_subclasses | answer.equivalents)
            - snapshot.taxonomy.unsatisfiable_names()
        )
        return [
            {"class_name": name, "label": snapshot.kb.label(name, lang)} for name in names
        ]


def create_app(config: ServiceConfig) -> FastAPI:
    service = TrafficService(config)
    app = FastAPI(title="traffic danger query service")
    app.state.service = service

    def with_generation(response: Response, generation: int) -> None:
        response.headers["X-Generation"] = str(generation)

    @app.get("/api/locations")
    def locations(response: Response):
        store = service.read_store()
        current = service.cache.read()
        with_generation(response, current[0] if current else 0)
        return {
            "districts": [{"id": r.id, "name": r.name} for r in store.districts],
            "streets": [{"id": r.id, "name": r.name} for r in store.streets],
            "postal_codes": [{"id": r.id, "value": r.value} for r in store.postal_codes],
            "mappings": {
                "street_2_district": [list(pair) for pair in store.street_2_district],
                "street_2_postal_code": [list(pair) for pair in store.street_2_postal_code],
            },
            "conditions": [
                {
                    "id": r.id,
                    "parent_id": r.parent_id,
                    "name": r.name,
                    "description": r.description,
                }
                for r in store.traffic_conditions
            ],
            "assignments": [
                {"traffic_condition_id": a, "postal_code_id": b}
                for a, b in store.traffic_condition_2_postal_code
            ],
        }

    @app.get("/api/dangers")
    def dangers(
        response: Response,
        scope: str = Query(...),
        name: str = Query(...),
        lang: str = Query("en"),
    ):
        if scope not in SCOPES:
            raise HTTPException(status_code=400, detail=f"bad scope {scope!r}")
        if lang not in LANGS:
            raise HTTPException(status_code=400, detail=f"bad lang {lang!r}")
        generation, snapshot = service.snapshot()
        individual = service.location_individual(snapshot.store, scope, name)
        if individual is None:
            raise HTTPException(status_code=404, detail=f"unknown {scope} {name!r}")
        with_generation(response, generation)
        return service.dangers_for(snapshot, individual, lang)

    @app.get("/api/questions")
    def questions(response: Response, lang: str = Query("en")):
        if lang not in LANGS:
            raise HTTPException(status_code=400, detail=f"bad lang {lang!r}")
        generation, snapshot = service.snapshot()
        with_generation(response, generation)
        out = []
        for name in sorted(service.core.concept_names):
            if not is_defined_class(name, service.core):
                continue
            answers = sorted(snapshot.taxonomy.descendants(name))
            labels = {n: snapshot.kb.label(n, lang) for n in answers + [name]}
            out.append({"question_class": name, "answers": answers, "labels": labels})
        return out

    @app.post("/api/sync")
    def sync_endpoint():
        try:
            generation = service.sync()
        except KbError as exc:
            logger.warning("synchronization failed: %s", exc)
            raise HTTPException(status_code=500, detail=str(exc))
        return {"generation": generation}

    @app.get("/api/ontology")
    def ontology(variant: str = Query(...)):
        if variant == "core":
            return PlainTextResponse(service.core_text)
        if variant == "synchronized":
            current = service.cache.read()
            if current is None:
                raise HTTPException(
                    status_code=409, detail="no synchronized ontology yet; sync first"
                )
            return PlainTextResponse(serialize_text(current[1].kb))
        raise HTTPException(status_code=400, detail=f"bad variant {variant!r}")

    @app.post("/api/login")
    def login(body: LoginBody):
        token = service.login(body.username, body.password)
        return {"token": token, "username": body.username}

    @app.post("/api/conditions")
    def conditions(body: ConditionsBody, authorization: Optional[str] = Header(None)):
        service.authenticate(authorization)
        with service._store_lock:
            store = service.read_store()
            code_row = next(
                (r for r in store.postal_codes if r.value == body.postal_code), None
            )
            if code_row is None:
                raise HTTPException(
                    status_code=404, detail=f"unknown postal code {body.postal_code!r}"
                )
            by_name = {c.name: c.id for c in store.traffic_conditions}
            try:
                ids = [by_name[n] for n in body.condition_names]
            except KeyError as exc:
                raise HTTPException(status_code=404, detail=f"unknown condition {exc}")
            updated = update_assignments(store, code_row.id, ids)
            save_store(updated, service.config.store_path)
        # no auto-sync: the cache refreshes only on an explicit /api/sync
        return {"postal_code": body.postal_code, "condition_ids": sorted(ids)}

    if config.dashboard_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.dashboard_dir, html=True), name="dashboard")

    return app


def run(config: ServiceConfig) -> None:  # pragma: no cover - exercised manually
    import uvicorn

    host, _, port = config.listen_address.rpartition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port or "8080"))
