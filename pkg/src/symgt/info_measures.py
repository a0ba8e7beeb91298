"""Entropies and per-test mutual informations for AGT, SGT and GGT.

Every quantity is in bits.  The scalar helpers accept Python floats,
``mpmath.mpf`` values (for high-precision optimisation) or NumPy arrays
(for grid scans over the inclusion probability ``p``).

``mi_oracle`` enumerates the exact joint law of a single test and is kept
deliberately independent of the closed forms so it can validate them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Optional

import mpmath
import numpy as np

__all__ = [
    "AGT",
    "SGT",
    "GGT",
    "TestModel",
    "entropy2",
    "entropy3",
    "mi_agt",
    "mi_sgt",
    "mi_agt_noisy",
    "mi_sgt_noisy",
    "mi_ggt",
    "mutual_information",
    "mi_oracle",
    "ORACLE_MAX_M",
]

AGT, SGT, GGT = "agt", "sgt", "ggt"
KINDS = (AGT, SGT, GGT)

ORACLE_MAX_M = 20
_SLACK = 1e-12


@dataclass(frozen=True)
class TestModel:
    """Test model descriptor.

    ``q`` is ``None`` for the noise-free models; ``q=0`` is a *noisy* model
    with a degenerate noise word, which is not the same channel.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    kind: str
    p: float
    q: Optional[float] = None
    eta1: Optional[int] = None
    eta2: Optional[int] = None

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.q is not None and not 0 <= self.q <= 1:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if kind == GGT:
            if self.eta1 is None or self.eta2 is None:
                raise ValueError("GGT needs both thresholds eta1 and eta2")
            if not 0 <= self.eta1 <= self.eta2:
                raise ValueError("GGT thresholds must satisfy 0 <= eta1 <= eta2")
            if self.q is not None:
                raise ValueError("noisy GGT is not supported")
        elif self.eta1 is not None or self.eta2 is not None:
            raise ValueError("thresholds only apply to GGT")

    @property
    def noisy(self) -> bool:
        return self.q is not None

    def with_p(self, p) -> "TestModel":
        return TestModel(self.kind, p, self.q, self.eta1, self.eta2)

    def label(self) -> str:
        s = self.kind.upper()
        if self.kind == GGT:
            s += f"({self.eta1},{self.eta2})"
        if self.noisy:
            s += f"[q={self.q}]"
        return s


# -- entropy helpers --------------------------------------------------------


def _neg_xlog2x(x):
    if isinstance(x, np.ndarray):
        safe = np.where(x > 0, x, 1.0)
        return np.where(x > 0, -x * np.log2(safe), 0.0)
    if isinstance(x, mpmath.mpf):
        return -x * mpmath.log(x, 2) if x > 0 else mpmath.mpf(0)
    return -x * math.log2(x) if x > 0 else 0.0


def _clamp_unit(x, what: str):
    """Validate ``x`` lies in [0, 1] up to rounding slack, then clip."""
    if isinstance(x, np.ndarray):
        if np.any(x < -_SLACK) or np.any(x > 1 + _SLACK):
            raise ValueError(f"{what} must lie in [0, 1]")
        return np.clip(x, 0.0, 1.0)
    if x < -_SLACK or x > 1 + _SLACK:
        raise ValueError(f"{what} must lie in [0, 1], got {x}")
    if x < 0:
        return x * 0
    if x > 1:
        return x * 0 + 1
    return x


def entropy2(z):
    """Binary entropy h(z) in bits, with 0 log 0 = 0."""
    z = _clamp_unit(z, "z")
    return _neg_xlog2x(z) + _neg_xlog2x(1 - z)


def entropy3(z, g):
    """Entropy of the three-point law (z, g, 1 - z - g) in bits."""
    z = _clamp_unit(z, "z")
    g = _clamp_unit(g, "g")
    rest = _clamp_unit(1 - z - g, "1 - z - g")
    return _neg_xlog2x(z) + _neg_xlog2x(g) + _neg_xlog2x(rest)


# -- closed forms -----------------------------------------------------------


def _check_partition(m: int, i: int) -> None:
    if m < 2:
        raise ValueError(f"closed forms need m >= 2, got m={m}")
    if not 1 <= i <= m:
        raise ValueError(f"partition size i must satisfy 1 <= i <= m, got i={i}, m={m}")


def _check_prob(x, name: str) -> None:
    bad = np.any((np.asarray(x, dtype=float) < 0) | (np.asarray(x, dtype=float) > 1))
    if bad:
        raise ValueError(f"{name} must lie in [0, 1]")


def mi_sgt(m: int, i: int, p):
    """Noise-free SGT mutual information I(X_D1; X_D2, y) for |D1| = i."""
    _check_partition(m, i)
    _check_prob(p, "p")
    if i < m:
        return (1 - p) ** (m - i) * entropy2((1 - p) ** i) + p ** (m - i) * entropy2(p**i)
    return entropy3(p**m, (1 - p) ** m)


def mi_agt(m: int, i: int, p):
    """Noise-free AGT (Boolean OR) mutual information."""
    _check_partition(m, i)
    _check_prob(p, "p")
    return (1 - p) ** (m - i) * entropy2((1 - p) ** i)


def mi_sgt_noisy(m: int, i: int, p, q):
    """SGT mutual information under dilution noise with parameter q."""
    _check_partition(m, i)
    _check_prob(p, "p")
    _check_prob(q, "q")
    loss = ((1 - p) ** m + p**m) * entropy2(q)
    if i < m:
        gain = (1 - p) ** (m - i) * entropy2((1 - p) ** i * (1 - q)) + p ** (m - i) * entropy2(p**i * q)
    else:
        gain = entropy3(p**m * q, (1 - p) ** m * (1 - q))
    return gain - loss


def mi_agt_noisy(m: int, i: int, p, q):
    """AGT mutual information when negatives flip to positive w.p. q."""
    _check_partition(m, i)
    _check_prob(p, "p")
    _check_prob(q, "q")
    return (1 - p) ** (m - i) * entropy2((1 - p) ** i * (1 - q)) - (1 - p) ** m * entropy2(q)


def _check_thresholds(m: int, eta1: int, eta2: int) -> None:
    if not 0 <= eta1 <= eta2 <= m - 1:
        raise ValueError(f"thresholds must satisfy 0 <= eta1 <= eta2 <= m-1, got ({eta1}, {eta2}), m={m}")


def mi_ggt(m: int, i: int, p, eta1: int, eta2: int):
    """Noise-free GGT mutual information for thresholds (eta1, eta2)."""
    _check_partition(m, i)
    _check_prob(p, "p")
    _check_thresholds(m, eta1, eta2)
    r = m - i
    # partial sums of the Bin(i, p) law, shared by p1 and p2
    cdf1 = list(accumulate(math.comb(i, l) * p**l * (1 - p) ** (i - l) for l in range(i + 1)))
    total = 0 * p
    for k in range(min(eta2, r) + 1):
        p0 = math.comb(r, k) * p**k * (1 - p) ** (r - k)
        p2 = 1 - cdf1[min(i, eta2 - k)]
        if k <= eta1:
            p1 = cdf1[min(i, eta1 - k)]
            total = total + p0 * entropy3(p1, p2)
        else:
            total = total + p0 * entropy2(p2)
    return total


def mutual_information(model: TestModel, m: int, i: int, p=None):
    """Dispatch to the closed form matching ``model``.

    ``p`` overrides ``model.p`` and may be an array or an mpmath value.
    """
    p = model.p if p is None else p
    if model.kind == GGT:
        return mi_ggt(m, i, p, model.eta1, model.eta2)
    if model.kind == SGT:
        return mi_sgt(m, i, p) if model.q is None else mi_sgt_noisy(m, i, p, model.q)
    return mi_agt(m, i, p) if model.q is None else mi_agt_noisy(m, i, p, model.q)


# -- exhaustive oracle ------------------------------------------------------


def _conditional_entropy(joint: np.ndarray) -> float:
    """H(Y | X) for a joint table whose rows are values of X."""
    px = joint.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(joint > 0, joint / px, 1.0)
        terms = np.where(joint > 0, -joint * np.log2(cond), 0.0)
    return float(terms.sum())


def mi_oracle(model: TestModel, m: int, i: int) -> float:
    """I(X_D1; X_D2, y) by brute-force enumeration of one test.

    All 2**m inclusion patterns of the m defectives are enumerated; the
    first ``i`` defectives form D1.  The output law of each pattern follows
    the model's counting rule and, for noisy models, the noise channel:
    ternary dilution for SGT (0 -> 2 w.p. q, 1 -> 2 w.p. 1 - q) and the
    OR channel for AGT (0 -> 1 w.p. q).
    """
    if m > ORACLE_MAX_M:
        raise ValueError(f"oracle enumeration is limited to m <= {ORACLE_MAX_M}")
    if m < 1 or not 1 <= i <= m:
        raise ValueError("need 1 <= i <= m")
    p, q = float(model.p), model.q

    patterns = (np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1
    k = patterns.sum(axis=1)
    weight = p**k * (1 - p) ** (m - k)

    if model.kind == SGT:
        symbol = np.where(k == 0, 0, np.where(k == m, 1, 2))
    elif model.kind == AGT:
        symbol = np.where(k == 0, 0, 1)
    else:
        if not 0 <= model.eta1 <= model.eta2 <= m - 1:
            raise ValueError("thresholds out of range for this m")
        symbol = np.where(k <= model.eta1, 0, np.where(k > model.eta2, 1, 2))

    if q is None:
        channel = np.eye(3)
    elif model.kind == SGT:
        channel = np.array([[1 - q, 0, q], [0, q, 1 - q], [0, 0, 1]])
    elif model.kind == AGT:
        channel = np.array([[1 - q, q, 0], [0, 1, 0], [0, 0, 1]])
    else:
        raise ValueError("noisy GGT is not supported")

    # joint law of (full pattern, y); patterns are already unique rows
    joint_full = weight[:, None] * channel[symbol]

    # marginalise D1 (low i bits) to obtain the joint of (X_D2, y)
    d2_key = np.arange(2**m) >> i
    joint_d2 = np.zeros((2 ** (m - i), 3))
    np.add.at(joint_d2, d2_key, joint_full)

    return _conditional_entropy(joint_d2) - _conditional_entropy(joint_full)
