import mpmath as mp
import numpy as np
import pytest

from octantwave import EvaluationControl, PotentialParams

mp.mp.dps = 25


@pytest.fixture(scope="session")
def ctrl():
    return EvaluationControl()


@pytest.fixture(scope="session")
def tight_ctrl():
    return EvaluationControl(rel_tol=1e-13, max_degree=900)


@pytest.fixture(scope="session")
def default_params():
    return PotentialParams(0.3, 0.2, 0.1)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def fa3_naive(apex, bs, cs, ws, n_max=60):
    """Brute-force high-precision triple sum; the independent series oracle."""
    total = mp.mpf(0)
    for m in range(n_max):
        tm = mp.rf(bs[0], m) / mp.rf(cs[0], m) / mp.factorial(m) * mp.mpf(ws[0]) ** m
        for n in range(n_max - m):
            tn = tm * mp.rf(bs[1], n) / mp.rf(cs[1], n) / mp.factorial(n) * mp.mpf(ws[1]) ** n
            for p in range(n_max - m - n):
                total += (mp.rf(apex, m + n + p) * tn
                          * mp.rf(bs[2], p) / mp.rf(cs[2], p) / mp.factorial(p)
                          * mp.mpf(ws[2]) ** p)
    return float(total)
