"""Shared fixtures: an announcer that bypasses capture for criterion lines."""

from __future__ import annotations

import pytest


@pytest.fixture
def announce(capsys):
    def _announce(line: str) -> None:
        with capsys.disabled():
            print(line, flush=True)
    return _announce
