"""Ternary observation algebra.

Words are stored as 1-D ``numpy.uint8`` arrays over {0, 1, 2}; a code
(design) matrix is an ``(n, N)`` ``uint8`` array over {0, 1} whose column
``j`` is the test signature of subject ``j``.  Subject sets are frozensets
of column indices.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "tern_add",
    "as_word",
    "as_code_matrix",
    "as_subject_set",
    "parse_word",
    "format_word",
    "word_sum",
    "is_included",
    "observation",
    "ggt_observation",
    "agt_observation",
    "apply_noise",
    "apply_or_noise",
]

# rows: left operand, cols: right operand
_ADD_TABLE = np.array([[0, 2, 2], [2, 1, 2], [2, 2, 2]], dtype=np.uint8)


def tern_add(a: int, b: int) -> int:
    """Ternary addition: 0+0=0, 1+1=1, anything else is 2."""
    if a not in (0, 1, 2) or b not in (0, 1, 2):
        raise ValueError(f"ternary symbols must be 0, 1 or 2, got {a!r}, {b!r}")
    return int(_ADD_TABLE[a, b])


def as_word(word, *, binary: bool = False) -> np.ndarray:
    """Coerce a string / sequence / array into a validated word array."""
    if isinstance(word, str):
        return parse_word(word, binary=binary)
    arr = np.asarray(word)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("a word must be a non-empty 1-D sequence")
    if not np.issubdtype(arr.dtype, np.integer) and arr.dtype != np.bool_:
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("word symbols must be integers")
    arr = arr.astype(np.int64)
    top = 1 if binary else 2
    if arr.min() < 0 or arr.max() > top:
        raise ValueError(f"word symbols must lie in 0..{top}")
    return arr.astype(np.uint8)


def as_code_matrix(code) -> np.ndarray:
    arr = np.asarray(code)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("a code matrix must be 2-D with at least one row and column")
    if not ((arr == 0) | (arr == 1)).all():
        raise ValueError("code matrix entries must be 0 or 1")
    return arr.astype(np.uint8)


def as_subject_set(indices: Iterable[int], N: int | None = None) -> frozenset[int]:
    items = [int(j) for j in indices]
    s = frozenset(items)
    if len(s) != len(items):
        raise ValueError("subject set contains duplicates")
    if any(j < 0 for j in s) or (N is not None and any(j >= N for j in s)):
        raise ValueError(f"subject indices must lie in [0, {N})")
    return s


def parse_word(text: str, *, binary: bool = False) -> np.ndarray:
    """Parse ``"220"`` into ``array([2, 2, 0])``; first character is test 0."""
    text = text.strip()
    allowed = "01" if binary else "012"
    if not text or any(c not in allowed for c in text):
        raise ValueError(f"word text must be a non-empty string over {allowed!r}: {text!r}")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


def format_word(word) -> str:
    return "".join(str(int(s)) for s in np.asarray(word))


def word_sum(words: Sequence) -> np.ndarray:
    """Componentwise ternary sum of a non-empty list of equal-length words."""
    if len(words) == 0:
        raise ValueError("word_sum needs at least one word")
    arrs = [as_word(w) for w in words]
    n = arrs[0].size
    if any(a.size != n for a in arrs):
        raise ValueError("all words must have the same length")
    stack = np.vstack(arrs)
    all0 = (stack == 0).all(axis=0)
    all1 = (stack == 1).all(axis=0)
    return np.where(all0, 0, np.where(all1, 1, 2)).astype(np.uint8)


def is_included(y, x) -> bool:
    """True when ``y`` is included in ``x``, i.e. ``x + y == x``."""
    y, x = as_word(y), as_word(x)
    if y.size != x.size:
        raise ValueError("words must have the same length")
    return bool(((x == 2) | (x == y)).all())


def _defective_columns(code, defectives) -> tuple[np.ndarray, list[int]]:
    code = as_code_matrix(code)
    D = sorted(as_subject_set(defectives, code.shape[1]))
    if not D:
        raise ValueError("the defective set must be non-empty")
    return code, D


def observation(code, defectives) -> np.ndarray:
    """Noise-free symmetric observation: ternary sum of the defective columns."""
    code, D = _defective_columns(code, defectives)
    return word_sum([code[:, j] for j in D])


def ggt_observation(code, defectives, eta1: int, eta2: int) -> np.ndarray:
    """Threshold observation: 0 if count <= eta1, 1 if count > eta2, else 2."""
    code, D = _defective_columns(code, defectives)
    if not 0 <= eta1 <= eta2 <= len(D) - 1:
        raise ValueError(
            f"thresholds must satisfy 0 <= eta1 <= eta2 <= |D|-1, got ({eta1}, {eta2}) with |D|={len(D)}"
        )
    k = code[:, D].sum(axis=1)
    return np.where(k <= eta1, 0, np.where(k > eta2, 1, 2)).astype(np.uint8)


def agt_observation(code, defectives) -> np.ndarray:
    """Classical Boolean-OR observation (symbols 0/1)."""
    code, D = _defective_columns(code, defectives)
    return code[:, D].max(axis=1).astype(np.uint8)


def _check_q(q: float) -> None:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"noise parameter q must lie in [0, 1], got {q}")


def apply_noise(y, q: float, rng: np.random.Generator) -> np.ndarray:
    """Dilution noise: ternary sum of ``y`` with an i.i.d. Bernoulli(q) word.

    0 turns into 2 where the noise bit is 1, 1 turns into 2 where it is 0,
    and 2 is never altered.
    """
    _check_q(q)
    y = as_word(y)
    z = (rng.random(y.size) < q).astype(np.uint8)
    return _ADD_TABLE[y, z]


def apply_or_noise(y, q: float, rng: np.random.Generator) -> np.ndarray:
    """Asymmetric counterpart of :func:`apply_noise` for Boolean-OR outcomes.

    A negative outcome flips to positive with probability ``q``; positives
    are never altered.
    """
    _check_q(q)
    y = as_word(y, binary=True)
    z = (rng.random(y.size) < q).astype(np.uint8)
    return y | z
