"""Decoders for symmetric observations and a seeded Monte Carlo harness.

Each trial ``r`` draws from ``numpy.random.default_rng([seed, r])`` (PCG64
seeded through ``SeedSequence``), so any single trial can be replayed
without running the ones before it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Optional

import numpy as np

from .info_measures import AGT, GGT, SGT, TestModel
from .ternary_algebra import (
    agt_observation,
    apply_noise,
    apply_or_noise,
    as_code_matrix,
    as_word,
    ggt_observation,
    observation,
)

__all__ = [
    "AmbiguityError",
    "TrialConfig",
    "ErrorRateReport",
    "decode_inclusion",
    "decode_exhaustive",
    "candidate_outputs",
    "synthesize",
    "run_trials",
    "CSV_HEADER",
]

log = logging.getLogger(__name__)

# C(30, <=3): the default enumeration budget of the exhaustive decoder
DECODE_MAX_CANDIDATES = sum(math.comb(30, s) for s in range(1, 4))

CSV_HEADER = "n,trials,successes,ambiguities,wrong_sets,error_rate"


class AmbiguityError(Exception):
    """Decoding failed: no candidate, or several equally good candidates."""

    def __init__(self, message: str, candidates: tuple = ()):
        super().__init__(message)
        self.candidates = candidates


def decode_inclusion(code, y, m_max: Optional[int] = None) -> frozenset[int]:
    """Subjects whose signature is included in the observation ``y``.

    Exact for noise-free observations of a symmetric m-disjunct code when
    the defective count is at most ``m_max <= m``.  On other codes the
    result may be larger than ``m_max``; this is logged, not raised.
    """
    code = as_code_matrix(code)
    y = as_word(y)
    if y.size != code.shape[0]:
        raise ValueError("observation length does not match the number of tests")
    hits = ((y[:, None] == 2) | (code == y[:, None])).all(axis=0)
    found = frozenset(int(j) for j in np.flatnonzero(hits))
    if m_max is not None and len(found) > m_max:
        log.debug("inclusion decoder returned %d subjects (m_max=%d)", len(found), m_max)
    return found


@lru_cache(maxsize=32)
def _candidates(N: int, m: int) -> tuple[tuple[tuple[int, ...], ...], tuple[np.ndarray, ...]]:
    subsets = []
    blocks = []
    for s in range(1, min(m, N) + 1):
        block = list(combinations(range(N), s))
        subsets.extend(block)
        blocks.append(np.array(block, dtype=np.intp))
    return tuple(subsets), tuple(blocks)


def candidate_outputs(code: np.ndarray, m: int, model: TestModel) -> tuple[tuple, np.ndarray]:
    """Noise-free outputs of every column subset of size 1..m, one row each."""
    subsets, blocks = _candidates(code.shape[1], m)
    rows = []
    for idx in blocks:
        s = idx.shape[1]
        k = code[:, idx].sum(axis=2, dtype=np.int16).T
        if model.kind == SGT:
            out = np.where(k == 0, 0, np.where(k == s, 1, 2))
        elif model.kind == AGT:
            out = (k > 0).astype(np.uint8)
        else:
            out = np.where(k <= model.eta1, 0, np.where(k > model.eta2, 1, 2))
        rows.append(out.astype(np.uint8))
    return subsets, np.vstack(rows)


def _channel(model: TestModel) -> np.ndarray:
    """P(observed | noise-free) with rows indexed by the noise-free symbol."""
    q = model.q
    if q is None:
        return np.eye(3)
    if model.kind == SGT:
        return np.array([[1 - q, 0, q], [0, q, 1 - q], [0, 0, 1]])
    if model.kind == AGT:
        return np.array([[1 - q, q, 0], [0, 1, 0], [0, 0, 1]])
    raise ValueError("noisy GGT is not supported")


def _packed_symbol_masks(code: np.ndarray, m: int, model: TestModel) -> np.ndarray:
    """Bit-packed (over tests) masks of output symbols 0, 1, 2 per candidate.

    Returns shape (3, C, B).  For a candidate set, ``at_least[j]`` marks the
    tests holding more than j of its members, built one column at a time.
    """
    n, N = code.shape
    packed = np.packbits(code.T.astype(bool), axis=1)  # (N, B)
    full = np.packbits(np.ones(n, dtype=bool))
    _, blocks = _candidates(N, m)
    masks = []
    for idx in blocks:
        s = idx.shape[1]
        cols = packed[idx]  # (R, s, B)
        at_least = [np.zeros_like(cols[:, 0]) for _ in range(s)]
        for c in range(s):
            col = cols[:, c]
            for j in range(c, 0, -1):
                at_least[j] |= at_least[j - 1] & col
            at_least[0] |= col
        if model.kind == SGT:
            zero, one = ~at_least[0] & full, at_least[s - 1]
        elif model.kind == AGT:
            zero, one = ~at_least[0] & full, at_least[0]
        else:
            # count <= eta1 -> 0, count > eta2 -> 1
            zero = ~at_least[model.eta1] & full if model.eta1 < s else np.broadcast_to(full, cols[:, 0].shape).copy()
            one = at_least[model.eta2] if model.eta2 < s else np.zeros_like(zero)
        two = full & ~(zero | one)
        masks.append(np.stack([zero, one, two]))
    return np.concatenate(masks, axis=1)


def decode_exhaustive(code, y_obs, m: int, model: TestModel, *, force: bool = False) -> frozenset[int]:
    """Reference decoder over all subsets of size 1..m.

    Noise-free models return the unique consistent subset.  Noisy models
    return the maximum-likelihood subset.  Anything else raises
    :class:`AmbiguityError`.
    """
    code = as_code_matrix(code)
    y = as_word(y_obs)
    if y.size != code.shape[0]:
        raise ValueError("observation length does not match the number of tests")
    N = code.shape[1]
    count = sum(math.comb(N, s) for s in range(1, min(m, N) + 1))
    if count > DECODE_MAX_CANDIDATES and not force:
        raise ValueError(f"{count} candidate subsets exceed the budget of {DECODE_MAX_CANDIDATES} (pass force=True)")

    subsets, _ = _candidates(N, m)
    cand = _packed_symbol_masks(code, m, model)  # (3, C, B)
    obs = np.packbits(y[None, :] == np.arange(3)[:, None], axis=1)  # (3, B)

    if model.q is None:
        hits = np.flatnonzero((cand == obs[:, None, :]).all(axis=(0, 2)))
        if hits.size == 1:
            return frozenset(subsets[hits[0]])
        if hits.size == 0:
            raise AmbiguityError("no candidate subset explains the observation")
        raise AmbiguityError("several subsets explain the observation", tuple(subsets[h] for h in hits))

    # transition counts a -> b between candidate output and observation
    counts = np.bitwise_count(cand[:, None, :, :] & obs[None, :, None, :]).sum(axis=3, dtype=np.int64)
    P = _channel(model)
    with np.errstate(divide="ignore"):
        logP = np.log(P)
    impossible = (counts * (P == 0)[:, :, None]).sum(axis=(0, 1)) > 0
    finite = np.where(P > 0, logP, 0.0)
    ll = np.einsum("abc,ab->c", counts, finite)
    ll[impossible] = -np.inf
    top = ll.max()
    if not np.isfinite(top):
        raise AmbiguityError("observation has zero likelihood under every candidate")
    best = np.flatnonzero(ll >= top - 1e-9 * max(1.0, abs(top)))
    if best.size > 1:
        raise AmbiguityError("likelihood tie", tuple(subsets[b] for b in best))
    return frozenset(subsets[best[0]])


@dataclass
class TrialConfig:
    """Monte Carlo setup; ``design=None`` draws an i.i.d. Bernoulli(p) design per trial."""

    N: int
    m: int
    n: int
    model: TestModel
    trials: int
    seed: int = 0
    design: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.m < self.N:
            raise ValueError("need 1 <= m < N")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.model.kind == GGT and not self.model.eta2 <= self.m - 1:
            raise ValueError("GGT thresholds must satisfy eta2 <= m - 1")
        if self.design is not None:
            self.design = as_code_matrix(self.design)
            if self.design.shape[1] != self.N:
                raise ValueError("design column count must equal N")
            self.n = self.design.shape[0]
        elif self.n < 0:
            raise ValueError("n must be >= 0")

    def echo(self) -> dict:
        d = {
            "N": self.N,
            "m": self.m,
            "n": self.n,
            "model": self.model.kind,
            "p": self.model.p,
            "q": self.model.q,
            "trials": self.trials,
            "seed": self.seed,
            "design": "fixed" if self.design is not None else "random_bernoulli",
        }
        if self.model.kind == GGT:
            d["eta1"], d["eta2"] = self.model.eta1, self.model.eta2
        return d


@dataclass
class ErrorRateReport:
    trials: int
    successes: int = 0
    ambiguities: int = 0
    wrong_sets: int = 0
    config: dict = field(default_factory=dict)

    @property
    def error_rate(self) -> float:
        return (self.trials - self.successes) / self.trials

    @property
    def stderr(self) -> float:
        e = self.error_rate
        return math.sqrt(e * (1 - e) / self.trials)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "ambiguities": self.ambiguities,
            "wrong_sets": self.wrong_sets,
            "error_rate": self.error_rate,
            "config": self.config,
        }

    def csv_row(self) -> str:
        n = self.config.get("n", "")
        return f"{n},{self.trials},{self.successes},{self.ambiguities},{self.wrong_sets},{self.error_rate!r}"


def synthesize(code: np.ndarray, defectives, model: TestModel, rng: np.random.Generator) -> np.ndarray:
    """Observation for ``defectives`` under ``model``, noise included."""
    if model.kind == SGT:
        y = observation(code, defectives)
        return y if model.q is None else apply_noise(y, model.q, rng)
    if model.kind == AGT:
        y = agt_observation(code, defectives)
        return y if model.q is None else apply_or_noise(y, model.q, rng)
    return ggt_observation(code, defectives, model.eta1, model.eta2)


def run_trials(config: TrialConfig) -> ErrorRateReport:
    report = ErrorRateReport(trials=config.trials, config=config.echo())
    if config.n == 0:
        # no tests, no information
        report.ambiguities = config.trials
        return report
    model = config.model
    for r in range(config.trials):
        rng = np.random.default_rng([config.seed, r])
        if config.design is None:
            code = (rng.random((config.n, config.N)) < model.p).astype(np.uint8)
        else:
            code = config.design
        truth = frozenset(int(j) for j in rng.choice(config.N, size=config.m, replace=False))
        y = synthesize(code, truth, model, rng)
        try:
            guess = decode_exhaustive(code, y, config.m, model, force=True)
        except AmbiguityError:
            report.ambiguities += 1
            continue
        if guess == truth:
            report.successes += 1
        else:
            report.wrong_sets += 1
    return report
