import numpy as np
import pytest

from wpolar.core_linalg import Tolerance
from wpolar.verify import SUITES, run_suite, trial_seed


def strip(report):
    return {k: v for k, v in report.items() if k != "timestamp"}


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "grid"])
def test_suites_pass(suite):
    rep = run_suite(suite, seed=3, trials=4, dims=[2, 3], tol=Tolerance())
    assert rep["failures"] == [], rep["failures"]
    assert rep["passes"] == 4


def test_grid_suite():
    rep = run_suite("grid", seed=0, trials=1, dims=[2], tol=Tolerance())
    assert rep["failures"] == []


def test_deterministic_and_parallel():
    a = run_suite("pt", seed=5, trials=6, dims=[2, 4], tol=Tolerance())
    b = run_suite("pt", seed=5, trials=6, dims=[2, 4], tol=Tolerance(), jobs=3)
    assert strip(a) == strip(b)
    c = run_suite("pt", seed=6, trials=6, dims=[2, 4], tol=Tolerance())
    assert strip(a) != strip(c)


def test_trial_seed_independent_streams():
    s1 = np.random.default_rng(trial_seed(1, "pt", 0)).random()
    s2 = np.random.default_rng(trial_seed(1, "core", 0)).random()
    s3 = np.random.default_rng(trial_seed(1, "pt", 1)).random()
    assert len({s1, s2, s3}) == 3
