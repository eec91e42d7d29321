import json
from importlib import resources

import pytest


@pytest.fixture(scope="session")
def schema_loader():
    def load(name: str) -> dict:
        path = resources.files("permatch") / "schemas" / f"{name}.schema.json"
        return json.loads(path.read_text())

    return load


@pytest.fixture()
def write_graph(tmp_path):
    counter = [0]

    def write(text: str, suffix: str = ".txt") -> str:
        counter[0] += 1
        p = tmp_path / f"g{counter[0]}{suffix}"
        p.write_text(text)
        return str(p)

    return write
