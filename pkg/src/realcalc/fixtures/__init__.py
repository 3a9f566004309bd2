"""Bundled input files for the command-line tool and the test suite."""

from __future__ import annotations

from pathlib import Path

_HERE = Path(__file__).parent


def fixture_names() -> list[str]:
    """Names of all bundled fixture files, sorted."""
    return sorted(p.name for p in _HERE.glob("*.json"))


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled fixture; raises KeyError when unknown."""
    path = _HERE / name
    if not path.is_file():
        raise KeyError(f"no bundled fixture named {name!r}")
    return path
