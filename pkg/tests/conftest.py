"""Pytest configuration and fixtures."""

import json

import pytest
from fastapi.testclient import TestClient

from pwl_infinity.analyzer import CRITICAL_REDUCED, PERTURBED_REDUCED, critical_spec, perturbed_spec
from pwl_infinity.main import app
from pwl_infinity.params import from_reduced


@pytest.fixture
def critical():
    """Third-order weak focus at infinity (gamma_L = -1/8, x_L = 1)."""
    return critical_spec()


@pytest.fixture
def perturbed():
    """Nearby system with three big limit cycles."""
    return perturbed_spec()


@pytest.fixture
def center_a():
    """Two linear centers glued along a sewing line."""
    return from_reduced(gamma_L=0.0, x_L=-1.0, b=0.0, gamma_R=0.0, x_R=2.0)


@pytest.fixture
def center_b():
    """Opposite damping with both foci at the origin."""
    return from_reduced(gamma_L=0.3, x_L=0.0, b=0.0, gamma_R=-0.3, x_R=0.0)


@pytest.fixture
def center_c():
    """Opposite damping with mirrored foci."""
    return from_reduced(gamma_L=0.2, x_L=1.0, b=0.0, gamma_R=-0.2, x_R=-1.0)


@pytest.fixture
def hyperbolic():
    """Homogeneous system with gamma_L + gamma_R = 1."""
    return from_reduced(gamma_L=0.5, x_L=0.0, b=0.0, gamma_R=0.5, x_R=0.0)


@pytest.fixture
def critical_document():
    return {"form": "reduced", **CRITICAL_REDUCED}


@pytest.fixture
def perturbed_document():
    return {"form": "reduced", **PERTURBED_REDUCED}


@pytest.fixture
def write_spec(tmp_path):
    """Write a parameter document to a JSON file and return its path."""

    def write(document, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write


@pytest.fixture
def client():
    """Create a test client with the application lifespan running."""
    with TestClient(app) as client:
        yield client
