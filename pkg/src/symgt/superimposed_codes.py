"""Symmetric disjunct / separable code checks and the BCH-based construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .ternary_algebra import as_code_matrix, format_word, word_sum

__all__ = [
    "PRIMITIVE_POLYNOMIALS",
    "GF2m",
    "FieldElement",
    "gf_mul",
    "VerificationWitness",
    "verify_disjunct",
    "verify_separable",
    "find_dependent_columns",
    "min_distance_at_least_5",
    "bch_parity_check",
    "load_matrix",
    "save_matrix",
    "subset_sums",
]

# bit i is the coefficient of x^i
PRIMITIVE_POLYNOMIALS = {
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,  # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}

DISJUNCT_MAX_N, DISJUNCT_MAX_M = 20, 3
# number of subset sums the separable check enumerates by default: C(40, <=2)
SEPARABLE_MAX_SUBSETS = 40 + 40 * 39 // 2


# -- GF(2^k) ----------------------------------------------------------------


class GF2m:
    """GF(2^k) with elements packed as k-bit integers."""

    def __init__(self, k: int, poly: Optional[int] = None):
        if poly is None:
            if k not in PRIMITIVE_POLYNOMIALS:
                raise ValueError(f"no tabulated primitive polynomial for k={k}")
            poly = PRIMITIVE_POLYNOMIALS[k]
        if poly.bit_length() != k + 1:
            raise ValueError("polynomial degree must equal k")
        self.k = k
        self.poly = poly
        self.order = 2**k

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.k, self.poly) == (other.k, other.poly)

    def __hash__(self):
        return hash((self.k, self.poly))

    def __repr__(self):
        return f"GF2m(k={self.k}, poly={self.poly:#b})"

    def mul(self, a: int, b: int) -> int:
        """Carry-less product reduced modulo the field polynomial."""
        if not (0 <= a < self.order and 0 <= b < self.order):
            raise ValueError("operands are not field elements")
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & self.order:
                a ^= self.poly
        return acc

    def pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def powers(self, base: int = 0b10) -> list[int]:
        """[base^0, base^1, ..., base^(2^k - 2)]."""
        out, x = [], 1
        for _ in range(self.order - 1):
            out.append(x)
            x = self.mul(x, base)
        return out


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: GF2m

    def _same(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.value ^ other.value, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


# -- verification -----------------------------------------------------------


@dataclass
class VerificationWitness:
    verdict: bool
    property: str
    m: Optional[int] = None
    counterexample: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self, code=None) -> dict:
        d = {"verdict": self.verdict, "property": self.property, "m": self.m}
        if self.counterexample is not None:
            xs, ys = self.counterexample
            cx = {"set_x": list(xs), "set_y": list(ys)}
            if code is not None and self.property in ("disjunct", "separable"):
                cx["sum_x"] = format_word(word_sum([code[:, j] for j in xs]))
                cx["sum_y"] = format_word(word_sum([code[:, j] for j in ys]))
            d["counterexample"] = cx
        return d


def _subsets(N: int, m: int) -> list[tuple[int, ...]]:
    """All subsets of size 1..m, in lexicographic tuple order."""
    return sorted(c for s in range(1, m + 1) for c in combinations(range(N), s))


def subset_sums(code: np.ndarray, subsets: list[tuple[int, ...]]) -> np.ndarray:
    """Ternary sums of the given column subsets, one row per subset."""
    code = as_code_matrix(code)
    n = code.shape[0]
    out = np.empty((len(subsets), n), dtype=np.uint8)
    for s in {len(t) for t in subsets}:
        rows = [r for r, t in enumerate(subsets) if len(t) == s]
        idx = np.array([subsets[r] for r in rows])
        cols = code[:, idx]  # (n, R, s)
        k = cols.sum(axis=2)
        out[rows] = np.where(k == 0, 0, np.where(k == s, 1, 2)).T
    return out


def _guard(ok: bool, message: str, force: bool) -> None:
    if not ok and not force:
        raise ValueError(message + " (pass force=True to run anyway)")


def verify_disjunct(code, m: int, *, force: bool = False) -> VerificationWitness:
    """Check the symmetric m-disjunct property exhaustively.

    For all column sets S, T of sizes 1..m: sum(S) included in sum(T) must
    imply S is a subset of T.  The first violation in lexicographic (S, T)
    order is returned as the witness.
    """
    code = as_code_matrix(code)
    N = code.shape[1]
    if m < 1:
        raise ValueError("m must be positive")
    _guard(N <= DISJUNCT_MAX_N and m <= DISJUNCT_MAX_M, f"disjunct check limited to N <= {DISJUNCT_MAX_N}, m <= {DISJUNCT_MAX_M}", force)
    subs = _subsets(N, min(m, N))
    sums = subset_sums(code, subs)
    member = np.zeros((len(subs), N), dtype=bool)
    for r, t in enumerate(subs):
        member[r, list(t)] = True
    big2 = sums == 2
    for r, S in enumerate(subs):
        included = (big2 | (sums == sums[r])).all(axis=1)
        contains = member[:, list(S)].all(axis=1)
        bad = np.flatnonzero(included & ~contains)
        if bad.size:
            return VerificationWitness(False, "disjunct", m, (S, subs[bad[0]]))
    return VerificationWitness(True, "disjunct", m)


def verify_separable(code, m: int, *, force: bool = False) -> VerificationWitness:
    """Check that distinct column sets of sizes 1..m have distinct ternary sums."""
    code = as_code_matrix(code)
    N = code.shape[1]
    if m < 1:
        raise ValueError("m must be positive")
    count = sum(math.comb(N, s) for s in range(1, min(m, N) + 1))
    _guard(count <= SEPARABLE_MAX_SUBSETS, f"separable check limited to {SEPARABLE_MAX_SUBSETS} subset sums, need {count}", force)
    subs = [c for s in range(1, min(m, N) + 1) for c in combinations(range(N), s)]
    sums = subset_sums(code, subs)
    seen: dict[bytes, tuple[int, ...]] = {}
    for S, row in zip(subs, sums):
        key = row.tobytes()
        if key in seen:
            return VerificationWitness(False, "separable", m, (seen[key], S))
        seen[key] = S
    return VerificationWitness(True, "separable", m)


def find_dependent_columns(H) -> Optional[tuple[int, ...]]:
    """Return 1..4 distinct columns of H whose GF(2) sum is zero, if any."""
    H = as_code_matrix(H)
    cols = [int("".join(map(str, H[:, j][::-1])), 2) for j in range(H.shape[1])]
    where: dict[int, int] = {}
    for j, c in enumerate(cols):
        if c == 0:
            return (j,)
        if c in where:
            return (where[c], j)
        where[c] = j
    pair_xor: dict[int, tuple[int, int]] = {}
    for a, b in combinations(range(len(cols)), 2):
        x = cols[a] ^ cols[b]
        c = where.get(x)
        if c is not None and c not in (a, b):
            return tuple(sorted((a, b, c)))
        prev = pair_xor.get(x)
        if prev is not None and not set(prev) & {a, b}:
            return tuple(sorted(prev + (a, b)))
        pair_xor.setdefault(x, (a, b))
    return None


def min_distance_at_least_5(H) -> bool:
    """True iff every set of at most 4 columns of H is linearly independent."""
    return find_dependent_columns(H) is None


# -- construction -----------------------------------------------------------


def bch_parity_check(k: int) -> np.ndarray:
    """2k x (2^k - 1) parity-check matrix of the double-error-correcting BCH code.

    Column j holds alpha^j in rows 0..k-1 and alpha^(3j) in rows k..2k-1,
    least significant bit first.
    """
    if not 2 <= k <= 10:
        raise ValueError(f"k must lie in 2..10, got {k}")
    field = GF2m(k)
    powers = field.powers()
    n = len(powers)
    H = np.zeros((2 * k, n), dtype=np.uint8)
    for j in range(n):
        a1, a3 = powers[j], powers[(3 * j) % n]
        for b in range(k):
            H[b, j] = (a1 >> b) & 1
            H[k + b, j] = (a3 >> b) & 1
    return H


# -- text format ------------------------------------------------------------


def load_matrix(text: str) -> np.ndarray:
    """Parse newline-separated rows of '0'/'1'; rows are tests."""
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty matrix text")
    width = len(rows[0])
    for r, line in enumerate(rows):
        if len(line) != width:
            raise ValueError(f"ragged rows: row {r} has length {len(line)}, expected {width}")
        if set(line) - {"0", "1"}:
            raise ValueError(f"row {r} contains characters outside {{0,1}}")
    return np.array([[int(c) for c in line] for line in rows], dtype=np.uint8)


def save_matrix(code) -> str:
    code = as_code_matrix(code)
    return "".join(format_word(row) + "\n" for row in code)
