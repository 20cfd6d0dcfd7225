"""JSON schemas for CLI configs and reports, with pointer-path error reporting."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMA_FILES = (
    "operator.schema.json",
    "simulate_config.schema.json",
    "simulation_report.schema.json",
    "basis.schema.json",
    "decomposition_report.schema.json",
)


class SchemaError(ValueError):
    """Validation failure; ``errors`` holds ``(json_pointer, message)`` pairs."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{p}: {m}" for p, m in errors))


def load(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath(name).read_text())


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (name, Resource.from_contents(load(name))) for name in SCHEMA_FILES
    )


def _pointer(path) -> str:
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(instance, name: str) -> None:
    """Raise :class:`SchemaError` listing every violation with its JSON pointer."""
    v = Draft202012Validator(load(name), registry=_registry())
    errors = sorted(v.iter_errors(instance), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise SchemaError([(_pointer(e.absolute_path), e.message) for e in errors])
