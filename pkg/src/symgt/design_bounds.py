"""Design criterion, its optimisation, and test-count / code-size bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .info_measures import AGT, GGT, SGT, TestModel, mutual_information

__all__ = [
    "Maximizer",
    "AlphaResult",
    "BoundReport",
    "alpha",
    "alpha_per_i",
    "alpha_grid",
    "ggt_alpha_grid",
    "alpha_opt",
    "golden_section_max",
    "sufficient_tests",
    "necessary_tests",
    "lll_disjunct_pprime",
    "lll_disjunct_maxN",
    "lll_disjunct_maxN_agt",
    "disjunct_rate",
    "rate_ratio",
    "lll_separable_pdprime",
    "lll_separable_maxN",
    "construction_size_estimates",
    "gv_satisfied",
    "gv_max_columns",
    "sphere_min_columns",
]

GRID_POINTS = 2001
REPORT_TOL = 1e-4
# grid candidates this far below the best grid value still get refined
_CANDIDATE_MARGIN = 2e-3
INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class Maximizer:
    p: float
    eta1: Optional[int] = None
    eta2: Optional[int] = None
    alpha: float = 0.0


@dataclass
class AlphaResult:
    m: int
    model: str
    value: float
    maximizers: list[Maximizer]
    per_i: list[tuple[int, float]]
    q: Optional[float] = None

    def rows(self) -> list[dict]:
        return [
            {
                "m": self.m,
                "model": self.model,
                "p_star": float(mx.p),
                "eta1_star": mx.eta1,
                "eta2_star": mx.eta2,
                "alpha": float(mx.alpha),
            }
            for mx in self.maximizers
        ]


@dataclass
class BoundReport:
    kind: str
    exact: float
    asymptotic: float
    inputs: dict
    integer: Optional[int] = None
    flags: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "exact": float(self.exact),
            "asymptotic": float(self.asymptotic),
            "m": self.inputs.get("m"),
            "model": self.inputs.get("model"),
            "inputs": self.inputs,
        }
        if self.integer is not None:
            d["integer"] = self.integer
        if self.flags:
            d["flags"] = list(self.flags)
        if self.extras:
            d["extras"] = {k: float(v) if isinstance(v, (Fraction, mpmath.mpf)) else v for k, v in self.extras.items()}
        return d


# -- the design criterion ---------------------------------------------------


def alpha_per_i(m: int, model: TestModel, p=None) -> list[tuple[int, float]]:
    return [(i, mutual_information(model, m, i, p)) for i in range(1, m + 1)]


def alpha(m: int, model: TestModel, p=None):
    """min over i of I(X_D1; X_D2, y) / i for |D1| = i.

    ``p`` overrides ``model.p``; an array of p gives the curve pointwise.
    """
    if m < 2:
        raise ValueError("alpha needs m >= 2")
    out = None
    for i, v in alpha_per_i(m, model, p):
        out = v / i if out is None else (np.minimum(out, v / i) if isinstance(v, np.ndarray) else min(out, v / i))
    return out


def alpha_grid(m: int, kind: str, ps: np.ndarray, q: Optional[float] = None) -> np.ndarray:
    """Vectorised alpha over an array of p for AGT or SGT."""
    return alpha(m, TestModel(kind, 0.5, q), ps)


def _binom_rows(n: int, ps: np.ndarray) -> np.ndarray:
    """Rows k = 0..n of the Bin(n, p) pmf evaluated on ``ps``."""
    k = np.arange(n + 1)[:, None]
    coef = np.array([math.comb(n, j) for j in range(n + 1)], dtype=float)[:, None]
    return coef * ps[None, :] ** k * (1 - ps[None, :]) ** (n - k)


def _nxl(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, -x * np.log2(safe), 0.0)


def ggt_alpha_grid(m: int, ps: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """alpha(m, p, eta1, eta2) on ``ps`` for every valid threshold pair.

    Per partition size i, the conditional output entropy given k defectives
    of D2 in the pool depends only on the clamped CDF indices eta - k, so the
    entropy pieces are tabulated once per i and gathered per pair.
    """
    pairs = [(a, b) for a in range(m) for b in range(a, m)]
    best = {pr: np.full(ps.shape, np.inf) for pr in pairs}
    for i in range(1, m + 1):
        r = m - i
        pmf2 = _binom_rows(r, ps)
        cdf = np.cumsum(_binom_rows(i, ps), axis=0)
        cdf[-1] = 1.0
        # index 0 <-> l = -1 (CDF 0); index i+1 <-> l >= i (CDF 1)
        F = np.vstack([np.zeros((1, ps.size)), cdf])
        g_low = _nxl(F)
        g_high = _nxl(1 - F)
        g_mid = _nxl(np.clip(F[None, :, :] - F[:, None, :], 0.0, 1.0))
        ks = np.arange(r + 1)
        for a, b in pairs:
            kk = ks[: min(b, r) + 1]
            ia = np.clip(a - kk, -1, i) + 1
            ib = np.clip(b - kk, -1, i) + 1
            cond_h = g_low[ia] + g_high[ib] + g_mid[ia, ib]
            mi = np.einsum("kg,kg->g", pmf2[: kk.size], cond_h)
            np.minimum(best[(a, b)], mi / i, out=best[(a, b)])
    return best


# -- optimisation -----------------------------------------------------------


def golden_section_max(f, a, b, tol=1e-9, max_iter=10_000):
    """Maximise a unimodal ``f`` on [a, b]; returns (x, f(x)).

    Works with floats or ``mpmath.mpf`` endpoints alike.
    """
    invphi = (mpmath.sqrt(5) - 1) / 2 if isinstance(a, mpmath.mpf) else INV_PHI
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _grid(points: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, points + 2)[1:-1]


def _local_maxima(vals: np.ndarray) -> np.ndarray:
    left = np.concatenate([[-np.inf], vals[:-1]])
    right = np.concatenate([vals[1:], [-np.inf]])
    return np.flatnonzero((vals >= left) & (vals > right))


def alpha_opt(
    m: int,
    family: str,
    q: Optional[float] = None,
    *,
    grid_points: int = GRID_POINTS,
    xtol: float = 1e-9,
    report_tol: float = REPORT_TOL,
    dps: Optional[int] = None,
) -> AlphaResult:
    """Maximise alpha over p (and over the thresholds for GGT).

    A uniform grid over (0, 1) locates every local maximum; those close to
    the best are refined by golden-section search.  All maximizers within
    ``report_tol`` of the optimum are returned, sorted by p.  With ``dps``
    the refinement runs in mpmath at that many decimal digits.
    """
    family = family.lower()
    if m < 2:
        raise ValueError("alpha_opt needs m >= 2")
    if family == GGT and q is not None:
        raise ValueError("noisy GGT is not supported")
    if family not in (AGT, SGT, GGT):
        raise ValueError(f"unknown family {family!r}")

    ps = _grid(grid_points)
    if family == GGT:
        curves = ggt_alpha_grid(m, ps)
    else:
        curves = {(None, None): alpha_grid(m, family, ps, q)}

    best_grid = max(float(c.max()) for c in curves.values())
    step = ps[1] - ps[0]
    with mpmath.workdps(dps or mpmath.mp.dps):
        tol = xtol if dps is None else mpmath.mpf(10) ** (10 - dps)
        found = []
        for (e1, e2), curve in curves.items():
            for j in _local_maxima(curve):
                if curve[j] < best_grid - _CANDIDATE_MARGIN:
                    continue
                lo = ps[j] - step if j > 0 else ps[j] / 2
                hi = ps[j] + step if j < ps.size - 1 else (ps[j] + 1) / 2
                if dps is None:
                    lo, hi = float(lo), float(hi)
                else:
                    lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
                model = TestModel(family, float(ps[j]), q, e1, e2)
                p_star, a_star = golden_section_max(lambda p: alpha(m, model, p), lo, hi, tol)
                if dps is None:
                    p_star, a_star = float(p_star), float(a_star)
                found.append(Maximizer(p_star, e1, e2, a_star))

        top = max(mx.alpha for mx in found)
        keep = sorted((mx for mx in found if mx.alpha >= top - report_tol), key=lambda mx: (float(mx.p), mx.eta1 or 0))
        lead = max(keep, key=lambda mx: mx.alpha)
        per_i = alpha_per_i(m, TestModel(family, 0.5, q, lead.eta1, lead.eta2), lead.p)
    return AlphaResult(m=m, model=family, value=top, maximizers=keep, per_i=per_i, q=q)


# -- test-count bounds ------------------------------------------------------


def _log2_comb(a: int, b: int) -> float:
    if b < 0 or b > a:
        return -math.inf
    return (math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)) / math.log(2)


def _model_inputs(N: int, m: int, model: TestModel) -> dict:
    d = {"N": N, "m": m, "model": model.kind, "p": float(model.p)}
    if model.q is not None:
        d["q"] = model.q
    if model.kind == GGT:
        d["eta1"], d["eta2"] = model.eta1, model.eta2
    return d


def _test_count_bound(kind: str, N: int, m: int, model: TestModel, numerator) -> BoundReport:
    if m < 2:
        raise ValueError("need m >= 2")
    if m >= N:
        raise ValueError(f"need m < N, got m={m}, N={N}")
    terms = []
    for i, info in alpha_per_i(m, model):
        info = float(info)
        terms.append(numerator(i) / info if info > 0 else math.inf)
    exact = max(terms)
    a = float(alpha(m, model))
    asym = math.log2(N) / a if a > 0 else math.inf
    if kind == "sufficient_n":
        integer = math.floor(exact) + 1 if math.isfinite(exact) else None
    else:
        integer = math.ceil(exact) if math.isfinite(exact) else None
    return BoundReport(
        kind=kind,
        exact=exact,
        asymptotic=asym,
        inputs=_model_inputs(N, m, model),
        integer=integer,
        extras={"per_i": terms, "alpha": a},
    )


def sufficient_tests(N: int, m: int, model: TestModel) -> BoundReport:
    """n > max_i log2(C(N-m, i) C(m, i)) / I(i); ``integer`` is the least such n."""
    return _test_count_bound(
        "sufficient_n", N, m, model, lambda i: _log2_comb(N - m, i) + _log2_comb(m, i)
    )


def necessary_tests(N: int, m: int, model: TestModel) -> BoundReport:
    """n >= max_i log2(C(N-m+i, i)) / I(i); ``integer`` is the ceiling."""
    return _test_count_bound("necessary_n", N, m, model, lambda i: _log2_comb(N - m + i, i))


# -- Lovasz local lemma code-size bounds ------------------------------------


def _check_lll(n: int, m: int) -> None:
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    if 2**n < m + 1:
        raise ValueError(f"2^n = {2**n} distinct words cannot host m+1 = {m + 1} codewords")


def lll_disjunct_pprime(n: int, m: int) -> tuple[Fraction, float]:
    """Upper bound on P(some word of an (m+1)-set is included in the sum of the rest).

    Returns the exact rational bound and its large-n form (m+1)(1-2^-m)^n.
    """
    _check_lll(n, m)
    t = m + 1
    num = 2 ** (n * t) - t * (2**t - 2) ** n
    den = math.factorial(t) * math.comb(2**n, t)
    exact = 1 - Fraction(num, den)
    asym = t * (1 - 2.0**-m) ** n
    return exact, asym


def _lll_dependents(N: int, t: int) -> int:
    return math.comb(N, t) - math.comb(N - t, t) if N >= t else math.comb(N, t)


def _largest_N(p_bound, t: int) -> int:
    """Largest N with e * p_bound * [C(N, t) - C(N - t, t)] < 1."""

    def ok(N: int) -> bool:
        return math.e * float(p_bound * _lll_dependents(N, t)) < 1

    if not ok(t):
        return t - 1
    lo, hi = t, 2 * t
    while ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def disjunct_rate(m: int, symmetric: bool = True) -> float:
    """log2 of the per-test growth factor B_S (symmetric) or B_A (asymmetric)."""
    if m < 1:
        raise ValueError("need m >= 1")
    base = 2.0**m if symmetric else 2.0 ** (m + 1)
    # log2 B = log2(base / (base - 1)) / m
    return -math.log1p(-1 / base) / (m * math.log(2))


def _disjunct_A(m: int) -> float:
    return (math.factorial(m) / ((m + 1) ** 2 * math.e)) ** (1 / m)


def lll_disjunct_maxN(n: int, m: int) -> BoundReport:
    """Largest N for which a symmetric m-disjunct (n, N) code is guaranteed."""
    p_exact, _ = lll_disjunct_pprime(n, m)
    A = _disjunct_A(m)
    B = (2**m / (2**m - 1)) ** (1 / m)
    flags = ["pprime_exceeds_one"] if p_exact > 1 else []
    N = _largest_N(p_exact, m + 1)
    return BoundReport(
        kind="disjunct_maxN",
        exact=N,
        asymptotic=A * B**n,
        inputs={"n": n, "m": m, "model": SGT},
        integer=N,
        flags=flags,
        extras={"A": A, "B": B, "rate": math.log2(B), "pprime": p_exact},
    )


def lll_disjunct_maxN_agt(n: int, m: int) -> BoundReport:
    """Asymmetric counterpart; the event bound is only known asymptotically."""
    _check_lll(n, m)
    A = _disjunct_A(m)
    B = (2 ** (m + 1) / (2 ** (m + 1) - 1)) ** (1 / m)
    p_sub = (m + 1) * (1 - Fraction(1, 2 ** (m + 1))) ** n
    N = _largest_N(p_sub, m + 1)
    return BoundReport(
        kind="disjunct_maxN_agt",
        exact=N,
        asymptotic=A * B**n,
        inputs={"n": n, "m": m, "model": AGT},
        integer=N,
        flags=["asymptotic_event_bound"],
        extras={"A": A, "B": B, "rate": math.log2(B), "pprime": p_sub},
    )


def rate_ratio(m: int) -> float:
    """R_S(m) / R_A(m) = (m - log2(2^m - 1)) / (m + 1 - log2(2^(m+1) - 1))."""
    if m < 2:
        raise ValueError("need m >= 2")
    # m - log2(2^m - 1) = -log2(1 - 2^-m); log1p keeps the digits at large m
    return math.log1p(-(2.0**-m)) / math.log1p(-(2.0 ** -(m + 1)))


def lll_separable_pdprime(n: int) -> tuple[Fraction, float]:
    """Bound on P(two distinct pairs of a 4-set share a ternary sum)."""
    if n < 1 or 2**n < 4:
        raise ValueError("need 2^n >= 4")
    w = 2**n
    exact = Fraction(3 * 6**n - 6 * 4**n + 3 * 2**n, w * (w - 1) * (w - 2) * (w - 3))
    return exact, 3 * (3 / 8) ** n


def lll_separable_maxN(n: int) -> BoundReport:
    """Largest N for which a symmetric 2-separable (n, N) code is guaranteed."""
    p_exact, _ = lll_separable_pdprime(n)
    A = (2 * math.e) ** (-1 / 3)
    B = (8 / 3) ** (1 / 3)
    N = _largest_N(p_exact, 4)
    return BoundReport(
        kind="separable_maxN",
        exact=N,
        asymptotic=A * B**n,
        inputs={"n": n, "m": 2, "model": SGT},
        integer=N,
        flags=["pdprime_exceeds_one"] if p_exact > 1 else [],
        extras={"A": A, "B": B, "pdprime": p_exact},
    )


# -- construction size estimates --------------------------------------------


def gv_satisfied(n: int, r: int) -> bool:
    """Exact inequality n(n^2 - 3n + 8)/6 < 2^r."""
    return n * (n * n - 3 * n + 8) < 6 * 2**r


def gv_max_columns(r: int) -> int:
    n = 1
    while gv_satisfied(n + 1, r):
        n += 1
    return n


def sphere_min_columns(r: int) -> int:
    """Least n with sum_{i<=4} C(n, i) >= 2^r, the sphere-packing side for d = 5."""
    if r < 1:
        raise ValueError("need r >= 1")
    n = 1
    while sum(math.comb(n, i) for i in range(5)) < 2**r:
        n += 1
    return n


def construction_size_estimates(r: int) -> tuple[float, float]:
    """(GV estimate, sphere-packing estimate) of the column count for r parity bits."""
    if r < 1:
        raise ValueError("need r >= 1")
    gv = 6 ** (1 / 3) * 2 ** (r / 3)
    sphere = 24 ** (1 / 4) * 2 ** (r / 4)
    return gv, sphere
