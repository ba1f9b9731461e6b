import itertools
import json

import pytest

from trustconv.prompts import load_prompt_set
from trustconv.resources import default_corpus_path, default_prompt_set_path
from trustconv.server import create_app, load_prompt_sets
from trustconv.store import SessionStore


@pytest.fixture
def mini_corpus_path():
    return str(default_corpus_path())


@pytest.fixture
def figure2_prompt_set():
    """Bundled prompt set whose first concept slot is 'system performance'."""
    return load_prompt_set(default_prompt_set_path())


@pytest.fixture
def ticking_clock():
    counter = itertools.count()
    return lambda: float(next(counter))


@pytest.fixture
def store(tmp_path, ticking_clock):
    return SessionStore(tmp_path / "sessions", load_prompt_sets(), clock=ticking_clock)


@pytest.fixture
def client(store):
    from fastapi.testclient import TestClient

    return TestClient(create_app(store))


@pytest.fixture
def corpus_file(tmp_path):
    """Factory writing ad-hoc corpus JSON documents."""

    def write(doc, name="corpus.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc, encoding="utf-8")
        return str(path)

    return write
