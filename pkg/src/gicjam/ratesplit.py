"""Rate-split feasibility over (R1c, R1p, R2c, R2p) and its projection onto (R1, R2).

Each rate-split inequality bounds a sum of sub-rates by one of the HK terms
``a_i, b_i, c_i, d_i`` (see :func:`gicjam.regions.hk_terms`). The projection
eliminates the common rates exactly: coefficients are integers and the right
hand sides are kept as integer combinations of the named terms, so only the
final redundancy pruning touches floating point.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.optimize import linprog

from .params import NormalizedParams
from .regions import AlphaPair, Halfspace, RateRegion, alpha_feasible, hk_terms

# variable order inside the elimination
VARS = ("R1", "R2", "R1c", "R2c")


@dataclass(frozen=True)
class SplitRates:
    R1c: float
    R1p: float
    R2c: float
    R2p: float

    def __post_init__(self):
        for v in (self.R1c, self.R1p, self.R2c, self.R2p):
            if v < 0:
                raise ValueError("split rates must be nonnegative")

    @property
    def R1(self) -> float:
        return self.R1c + self.R1p

    @property
    def R2(self) -> float:
        return self.R2c + self.R2p

    def common(self, i: int) -> float:
        return self.R1c if i == 1 else self.R2c

    def private(self, i: int) -> float:
        return self.R1p if i == 1 else self.R2p


def split_system(p: NormalizedParams, a: AlphaPair) -> list[dict]:
    """The eight rate-split inequalities with their numeric bounds."""
    t = hk_terms(p, a)
    rows = []
    for i, j in ((1, 2), (2, 1)):
        rows += [
            {"lhs": [f"R{i}p"], "term": f"a{i}"},
            {"lhs": [f"R{i}p", f"R{i}c"], "term": f"b{i}"},
            {"lhs": [f"R{i}p", f"R{j}c"], "term": f"c{i}"},
            {"lhs": [f"R{i}p", f"R{i}c", f"R{j}c"], "term": f"d{i}"},
        ]
    for r in rows:
        r["bound"] = t[r["term"]]
    return rows


def split_feasible(p: NormalizedParams, a: AlphaPair, s: SplitRates) -> bool:
    """All eight inequalities hold strictly (gamma -> 0 limit)."""
    if p.jammer_dominates() or not alpha_feasible(p, a):
        return False
    vals = {"R1c": s.R1c, "R1p": s.R1p, "R2c": s.R2c, "R2p": s.R2p}
    return all(sum(vals[v] for v in r["lhs"]) < r["bound"] for r in split_system(p, a))


def debug_dump(p: NormalizedParams, a: AlphaPair) -> str:
    """JSON audit record of the full eight-inequality system."""
    rec = {
        "schema": "gicjam.splitsystem/1",
        "params": p.to_dict(),
        "alpha": [a.alpha1, a.alpha2],
        "feasible_alpha": alpha_feasible(p, a),
        "rows": split_system(p, a),
    }
    return json.dumps(rec, indent=2, sort_keys=True)


# --- Fourier-Motzkin ---------------------------------------------------------

@dataclass(frozen=True)
class _Row:
    """``coef . (R1, R2, R1c, R2c) <= sum(rhs[term] * term)``."""

    coef: tuple
    rhs: tuple  # sorted (term, multiplicity) pairs

    def key(self):
        return self.coef, self.rhs


def _row(coef, rhs: Counter) -> _Row:
    rhs = Counter({k: v for k, v in rhs.items() if v})
    g = 0
    for c in coef:
        g = gcd(g, int(c))
    for v in rhs.values():
        g = gcd(g, int(v))
    g = g or 1
    return _Row(tuple(int(c) // g for c in coef),
                tuple(sorted((k, v // g) for k, v in rhs.items())))


def _base_rows() -> list[_Row]:
    # substitute Rip = Ri - Ric
    rows = []
    for i, j in ((1, 2), (2, 1)):
        Ri, Ric, Rjc = VARS.index(f"R{i}"), VARS.index(f"R{i}c"), VARS.index(f"R{j}c")
        for term, extra in (("a", ()), ("b", (Ric,)), ("c", (Rjc,)), ("d", (Ric, Rjc))):
            coef = [0, 0, 0, 0]
            coef[Ri] += 1
            coef[Ric] -= 1
            for e in extra:
                coef[e] += 1
            rows.append(_row(coef, Counter({f"{term}{i}": 1})))
    for k in (2, 3):  # Ric >= 0
        coef = [0, 0, 0, 0]
        coef[k] = -1
        rows.append(_row(coef, Counter()))
    for k, c in ((0, 2), (1, 3)):  # Rip >= 0  ->  Ric - Ri <= 0
        coef = [0, 0, 0, 0]
        coef[c], coef[k] = 1, -1
        rows.append(_row(coef, Counter()))
    return rows


def _eliminate(rows: list[_Row], k: int) -> list[_Row]:
    pos = [r for r in rows if r.coef[k] > 0]
    neg = [r for r in rows if r.coef[k] < 0]
    out = {r.key(): r for r in rows if r.coef[k] == 0}
    for rp in pos:
        for rn in neg:
            mp, mn = -rn.coef[k], rp.coef[k]
            coef = [mp * x + mn * y for x, y in zip(rp.coef, rn.coef)]
            rhs = Counter()
            for t, v in rp.rhs:
                rhs[t] += mp * v
            for t, v in rn.rhs:
                rhs[t] += mn * v
            r = _row(coef, rhs)
            out.setdefault(r.key(), r)
    return list(out.values())


def symbolic_projection() -> list[_Row]:
    """All inequalities over (R1, R2) after eliminating both common rates."""
    rows = _base_rows()
    for k in (2, 3):
        rows = _eliminate(rows, k)
    return rows


def format_row(r: _Row) -> str:
    lhs = " + ".join(f"{c}*{v}" if c != 1 else v for c, v in zip(r.coef, VARS) if c) or "0"
    rhs = " + ".join(f"{m}*{t}" if m != 1 else t for t, m in r.rhs) or "0"
    return f"{lhs} <= {rhs}"


def _evaluate(rhs, terms) -> float:
    return float(sum(Fraction(m) * Fraction(terms[t]) for t, m in rhs))


def _prune(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> list[int]:
    """Indices of non-redundant rows of ``A x <= b`` within ``x >= 0``."""
    keep = list(range(len(b)))
    for k in sorted(range(len(b)), key=lambda k: -b[k]):
        others = [m for m in keep if m != k]
        if not others:
            continue
        res = linprog(-A[k], A_ub=A[others], b_ub=b[others], bounds=[(0, None)] * 2,
                      method="highs")
        if res.status == 0 and -res.fun <= b[k] + tol:
            keep = others
    return sorted(keep)


def fme_project(p: NormalizedParams, a: AlphaPair) -> RateRegion:
    """Project the closed rate-split system onto ``(R1, R2)``.

    Redundant inequalities are dropped. The result is open in the same sense
    as :func:`gicjam.regions.hk_region`.
    """
    terms = hk_terms(p, a)
    rows = []
    for r in symbolic_projection():
        c1, c2 = r.coef[0], r.coef[1]
        b = _evaluate(r.rhs, terms)
        if c1 <= 0 and c2 <= 0:
            # implied by R >= 0 unless the bound is negative
            if b < -1e-12 and (c1, c2) == (0, 0):
                return RateRegion.empty_region()
            continue
        rows.append((c1, c2, b))
    # tightest bound per direction first
    best: dict = {}
    for c1, c2, b in rows:
        if (c1, c2) not in best or b < best[(c1, c2)]:
            best[(c1, c2)] = b
    items = sorted(best.items())
    A = np.array([k for k, _ in items], dtype=float)
    b = np.array([v for _, v in items], dtype=float)
    keep = _prune(A, b)
    return RateRegion(tuple(Halfspace(int(A[k, 0]), int(A[k, 1]), float(b[k])) for k in keep),
                      open=True)


def find_witness(p: NormalizedParams, a: AlphaPair, R1: float, R2: float,
                 step: float = 1e-3):
    """Grid search for split rates realizing ``(R1, R2)`` in the closed system."""
    t = hk_terms(p, a)
    r1c = np.arange(0.0, R1 + step / 2, step)
    r1c = np.append(r1c[r1c <= R1], R1)
    r2c = np.arange(0.0, R2 + step / 2, step)
    r2c = np.append(r2c[r2c <= R2], R2)
    X, Y = np.meshgrid(r1c, r2c, indexing="ij")
    R1p, R2p = R1 - X, R2 - Y
    tol = 1e-12
    ok = ((R1p <= t["a1"] + tol) & (R1 <= t["b1"] + tol)
          & (R1p + Y <= t["c1"] + tol) & (R1 + Y <= t["d1"] + tol)
          & (R2p <= t["a2"] + tol) & (R2 <= t["b2"] + tol)
          & (R2p + X <= t["c2"] + tol) & (R2 + X <= t["d2"] + tol))
    if not ok.any():
        return None
    k = np.flatnonzero(ok.ravel())[0]
    x, y = float(X.ravel()[k]), float(Y.ravel()[k])
    return SplitRates(x, max(R1 - x, 0.0), y, max(R2 - y, 0.0))
