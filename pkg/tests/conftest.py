# tests/conftest.py

import json
import os

import numpy as np
import pytest

from src.utils.config_loader import DEFAULT_SETTINGS
from src.powers.bases import computational, fourier, qubit_y
from src.powers.graph import generate_graph_from_bases
from src.scenario.parser import parse_scenario, build_joint_scenario

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENARIO_DIR = os.path.join(REPO_ROOT, "scenarios")

# Acceptance corpus: bell x4, werner x3, products x5, copies x3, dice x2, random pure x5
CORPUS = [
    "bell_phi_plus", "bell_phi_minus", "bell_psi_plus", "bell_psi_minus",
    "werner_02", "werner_05", "werner_09",
    "product_00", "product_0_plus", "product_plus_plus_i", "product_mixed_1", "product_matrix_minus",
    "copies_diag", "copies_plus", "copies_mixed",
    "fair_dice", "glued_dice",
    "random_pure_1", "random_pure_2", "random_pure_3", "random_pure_4", "random_pure_5",
]


def scenario_path(name: str) -> str:
    return os.path.join(SCENARIO_DIR, f"{name}.json")


def load_spec(name: str, **kwargs):
    return parse_scenario(scenario_path(name), **kwargs)


def load_joint(name: str, **kwargs):
    return build_joint_scenario(load_spec(name), **kwargs)


def random_density(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def settings():
    return DEFAULT_SETTINGS


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def qubit_zx_graph():
    """z basis (nodes 0, 1) and x basis (nodes 2, 3)"""
    return generate_graph_from_bases([computational(2), fourier(2)])


@pytest.fixture
def qubit_zxy_graph():
    return generate_graph_from_bases([computational(2), fourier(2), qubit_y()])


@pytest.fixture
def cli_config(tmp_path):
    """Config file identical to the shipped one but without the log file"""
    with open(os.path.join(REPO_ROOT, "config", "config.json"), encoding="utf-8") as f:
        config = json.load(f)
    config["logging"]["log_to_file"] = False
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)


@pytest.fixture
def write_scenario(tmp_path):
    """Write a scenario dict to a temporary file and return its path"""
    def _write(data, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write
