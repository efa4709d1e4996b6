from typing import Dict

import numpy as np
import pytest

from eulerq.qcore import EvalConfig
from eulerq.qdilog import QDilog
from eulerq.qlambert import FqFunction
from eulerq.qlog import SqFunction
from eulerq.qzeta import QZeta


@pytest.fixture(scope="class")
def make_sq() -> Dict[str, SqFunction]:
    return {
        "tenth": SqFunction(q=0.1),
        "third": SqFunction(q=0.3),
        "half": SqFunction(q=0.5),
        "seven": SqFunction(q=0.7),
        "ninth": SqFunction(q=0.9),
    }


@pytest.fixture(scope="class")
def make_fq() -> Dict[str, FqFunction]:
    return {
        "third": FqFunction(q=0.3),
        "half": FqFunction(q=0.5),
        "ninth": FqFunction(q=0.9),
    }


@pytest.fixture(scope="class")
def make_dilog() -> Dict[str, QDilog]:
    return {
        "tenth": QDilog(q=0.1),
        "third": QDilog(q=0.3),
        "four": QDilog(q=0.4),
        "half": QDilog(q=0.5),
        "seven": QDilog(q=0.7),
        "ninth": QDilog(q=0.9),
    }


@pytest.fixture(scope="class")
def make_zeta() -> Dict[str, QZeta]:
    return {
        "third": QZeta(q=0.3),
        "half": QZeta(q=0.5),
        "ninth": QZeta(q=0.9),
    }


@pytest.fixture(scope="class")
def make_config() -> Dict[str, EvalConfig]:
    return {
        "default": EvalConfig(),
        "loose": EvalConfig(eps=1e-8),
        "tiny": EvalConfig(min_terms=2, max_terms=5),
    }


@pytest.fixture(scope="class")
def random_points() -> Dict[str, np.ndarray]:
    rng = np.random.default_rng(20240611)
    radius = rng.uniform(0, 3, size=200)
    angle = rng.uniform(0, 2 * np.pi, size=200)
    return {
        "disc": radius * np.exp(1j * angle),
        "real": rng.uniform(-3, 3, size=200),
    }
