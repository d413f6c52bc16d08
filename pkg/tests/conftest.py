"""Shared test fixtures."""

import json
import random
from collections.abc import Callable
from math import comb
from pathlib import Path
from typing import Any

import pytest

from src.core.symplectic_core import HVector, VClass, Wedge3


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator so every run sees the same inputs."""
    return random.Random(20240611)


@pytest.fixture
def random_hvector(rng: random.Random) -> Callable[[int], HVector]:
    """Factory for random H-vectors with small entries."""

    def make(g: int) -> HVector:
        return HVector(g, tuple(rng.randint(-5, 5) for _ in range(2 * g)))

    return make


@pytest.fixture
def random_wedge3(rng: random.Random) -> Callable[[int], Wedge3]:
    """Factory for random Lambda^3 elements with small entries."""

    def make(g: int) -> Wedge3:
        return Wedge3(g, tuple(rng.randint(-3, 3) for _ in range(comb(2 * g, 3))))

    return make


@pytest.fixture
def random_vclass(random_wedge3: Callable[[int], Wedge3]) -> Callable[[int], VClass]:
    """Factory for random classes in V."""

    def make(g: int) -> VClass:
        return VClass(random_wedge3(g))

    return make


@pytest.fixture
def config_data() -> dict[str, Any]:
    """Sample configuration data with short schedules."""
    return {
        "max_workers": 2,
        "beta1_x_min": 20.0,
        "beta1_x_max": 200.0,
        "beta1_samples": 10,
        "fay_x_min": 20.0,
        "fay_x_max": 200.0,
        "fay_samples": 8,
        "reducible_k_min": 3,
        "reducible_k_max": 6,
    }


@pytest.fixture
def config_file(tmp_path: Path, config_data: dict[str, Any]) -> Path:
    """Create a temporary config file."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config_data))
    return path
