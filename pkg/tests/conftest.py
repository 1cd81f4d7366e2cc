"""Shared fixtures: a small certified pair and the schema registry."""

import json
from pathlib import Path

import pytest

from hcat.disjoint import certify

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "hcat" / "schemas"
DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def small_cert():
    """Quickly certified pair used by the unit tests (not acceptance scale)."""
    return certify(H=0.25, d1=3.0, d2=100.0, t_max=3.0, grid_step=0.5)


@pytest.fixture(scope="session")
def schema_registry():
    from referencing import Registry, Resource

    resources = []
    for path in SCHEMA_DIR.glob("*.json"):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


def validate_against(schema_name: str, doc: dict, registry) -> None:
    import jsonschema

    schema = json.loads((SCHEMA_DIR / schema_name).read_text())
    jsonschema.Draft202012Validator(schema, registry=registry).validate(doc)
