from __future__ import annotations

import json
from pathlib import Path

import pytest

import fakes
from unigen.blueprint import GameBlueprint, parse_blueprint

FIXTURES_DIR = Path(__file__).parent / "fixtures"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def obstacle_doc() -> dict:
    return fakes.obstacle_run_doc()


@pytest.fixture
def obstacle_bp(obstacle_doc) -> GameBlueprint:
    return parse_blueprint(json.dumps(obstacle_doc))


@pytest.fixture
def scripted_model(obstacle_doc) -> fakes.ScriptedModel:
    return fakes.ScriptedModel(obstacle_doc)


@pytest.fixture
def fixtures_dir() -> Path:
    if not FIXTURES_DIR.is_dir():
        pytest.fail("tests/fixtures is missing; run tools/make_fixtures.py")
    return FIXTURES_DIR


@pytest.fixture
def golden_dir() -> Path:
    if not GOLDEN_DIR.is_dir():
        pytest.fail("tests/golden is missing; run tools/make_fixtures.py")
    return GOLDEN_DIR
