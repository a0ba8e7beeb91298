"""Shared code corpus and the acceptance summary hook."""

import numpy as np
import pytest

from symgt.superimposed_codes import bch_parity_check, min_distance_at_least_5

HAMMING_7_4 = np.array(
    [
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ],
    dtype=np.uint8,
)

# columns 00, 11, 01, 10
CROSS_2x4 = np.array([[0, 1, 0, 1], [0, 1, 1, 0]], dtype=np.uint8)


def random_dmin5_matrices(count=20, rows=8, cols=10, seed=2024):
    """Seeded random binary matrices that pass the d >= 5 check."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        H = (rng.random((rows, cols)) < 0.5).astype(np.uint8)
        if min_distance_at_least_5(H):
            out.append(H)
    return out


def code_corpus():
    """Named small codes used by the property and exactness sweeps."""
    rng = np.random.default_rng(11)
    corpus = {
        "identity3": np.eye(3, dtype=np.uint8),
        "identity5": np.eye(5, dtype=np.uint8),
        "cross2x4": CROSS_2x4,
        "hamming74": HAMMING_7_4,
        "bch3": bch_parity_check(3),
        "bch4": bch_parity_check(4),
    }
    for r in range(6):
        corpus[f"random{r}"] = (rng.random((8, 9)) < 0.5).astype(np.uint8)
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return code_corpus()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
