import importlib.resources

import pytest

from trafficdl.kb import KnowledgeBase
from trafficdl.store import Store, load_store, synchronize
from trafficdl.tableau import Reasoner
from trafficdl.text_format import parse_text


def data_path(name: str):
    return importlib.resources.files("trafficdl") / "data" / name


@pytest.fixture(scope="session")
def core_text() -> str:
    return data_path("traffic.kb").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def core_kb(core_text) -> KnowledgeBase:
    return parse_text(core_text)


@pytest.fixture(scope="session")
def sample_store() -> Store:
    return load_store(data_path("sample_store.json"))


@pytest.fixture(scope="session")
def synced_kb(core_kb, sample_store) -> KnowledgeBase:
    return synchronize(core_kb, sample_store)


@pytest.fixture(scope="session")
def synced_reasoner(synced_kb) -> Reasoner:
    return Reasoner(synced_kb)


@pytest.fixture()
def empty_kb() -> KnowledgeBase:
    kb = KnowledgeBase()
    kb.finalize()
    return kb
