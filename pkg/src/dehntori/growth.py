"""
Growth of free-group automorphisms.

Rank 2 is exact through GL(2,Z).  Higher rank uses an empirical fit over a
table of iterated images and is always flagged heuristic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .autos import Automorphism
from .intmat import IntMatrix, classify_matrix
from .words import Word, commutator, cyclic_length, exponent_vector

DEFAULT_WORD_BUDGET = 20_000


class BudgetError(RuntimeError):
    def __init__(self, n, msg=""):
        super().__init__(msg or f"word-length budget exceeded at n = {n}")
        self.n = n


@dataclass
class GrowthRow:
    n: int
    basis: int                 # max_x |phi^n(x)| over generators
    basis_inv: int             # same for phi^-n
    probe_len: Tuple[int, ...]
    cyclic: Tuple[int, ...]    # ||phi^n(w)|| per probe
    cyclic_inv: Tuple[int, ...]


@dataclass
class GrowthTable:
    rows: List[GrowthRow]
    n_max: int
    sample: List[Word]
    truncated_at: Optional[int] = None   # first n that hit the budget

    def column(self, name: str, direction: int = 1):
        if name == "basis":
            return [r.basis if direction > 0 else r.basis_inv for r in self.rows]
        if name == "cyclic":
            return [max(r.cyclic if direction > 0 else r.cyclic_inv) for r in self.rows]
        raise KeyError(name)

    def to_csv(self, alphabet=None) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf)
        fmt = (lambda w: alphabet.format(w)) if alphabet else str
        wr.writerow(["n", "basis_length", "basis_length_inverse"]
                    + [f"cyclic[{fmt(w)}]" for w in self.sample]
                    + [f"cyclic_inverse[{fmt(w)}]" for w in self.sample])
        for r in self.rows:
            wr.writerow([r.n, r.basis, r.basis_inv, *r.cyclic, *r.cyclic_inv])
        return buf.getvalue()


@dataclass(frozen=True)
class GrowthClass:
    kind: str                  # Periodic | Polynomial | Exponential | Inconclusive
    degree: Optional[int] = None
    exact: bool = False
    basis_degree: Optional[int] = None
    cyclic_degree: Optional[int] = None
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def exactness(self) -> str:
        return "Exact" if self.exact else "Heuristic"

    def to_dict(self):
        d = {"kind": self.kind, "exactness": self.exactness}
        if self.degree is not None:
            d["degree"] = self.degree
        if self.basis_degree is not None:
            d["basis_degree"] = self.basis_degree
        if self.cyclic_degree is not None:
            d["cyclic_degree"] = self.cyclic_degree
        return d


def default_probes(phi: Automorphism, extras: Sequence[Word] = ()) -> List[Word]:
    G = phi.group
    gens = [(g,) for g in G.gens]
    comms = [commutator((i,), (j,)) for i, j in combinations(G.gens, 2)]
    return gens + comms + [G.canonical(w) for w in extras]


def growth_table(phi: Automorphism, n_max: int, sample: Optional[Sequence[Word]] = None,
                 budget: int = DEFAULT_WORD_BUDGET, strict: bool = True) -> GrowthTable:
    """Lengths of ``phi^{+-n}`` on generators and cyclic lengths on probes.

    With ``strict`` a BudgetError names the first ``n`` whose words exceed the
    budget; otherwise the table is truncated there.
    """
    G = phi.group
    probes = list(sample) if sample is not None else default_probes(phi)
    gens = [(g,) for g in G.gens]
    fwd_g, bwd_g = list(gens), list(gens)
    fwd_p, bwd_p = list(probes), list(probes)
    rows = [GrowthRow(0, 1, 1, tuple(len(w) for w in probes),
                      tuple(cyclic_length(w) for w in probes),
                      tuple(cyclic_length(w) for w in probes))]
    phi_inv = phi.inverse()
    for n in range(1, n_max + 1):
        fwd_g = [phi.apply(w) for w in fwd_g]
        bwd_g = [phi_inv.apply(w) for w in bwd_g]
        fwd_p = [phi.apply(w) for w in fwd_p]
        bwd_p = [phi_inv.apply(w) for w in bwd_p]
        biggest = max(len(w) for w in fwd_g + bwd_g + fwd_p + bwd_p)
        if biggest > budget:
            if strict:
                raise BudgetError(n)
            return GrowthTable(rows, n_max, probes, truncated_at=n)
        rows.append(GrowthRow(n, max(len(w) for w in fwd_g), max(len(w) for w in bwd_g),
                              tuple(len(w) for w in fwd_p),
                              tuple(cyclic_length(w) for w in fwd_p),
                              tuple(cyclic_length(w) for w in bwd_p)))
    return GrowthTable(rows, n_max, probes)


def is_positive(phi: Automorphism) -> bool:
    return all(x > 0 for w in phi.images for x in w)


def positive_power_length(phi: Automorphism, w: Word, i: int) -> int:
    """``|phi^i(w)|`` for a positive automorphism and positive word, via matrices.

    Positive words never cancel, so this is also the cyclic length.
    """
    if i < 0 or not is_positive(phi) or any(x < 0 for x in w):
        raise ValueError("fast length needs a positive automorphism, word and power")
    M = phi.abelianization(tuple(phi.group.gens))
    v = (M ** i).apply(exponent_vector(w, phi.group.rank))
    return sum(v)


class PowerLengths:
    """Cyclic lengths ``||phi^i(w)||`` for increasing ``i``, cached.

    Uses the matrix shortcut when it applies, else iterates words.
    """

    def __init__(self, phi: Automorphism, w: Word, budget: int = 5_000_000):
        self.phi, self.w, self.budget = phi, phi.group.canonical(w), budget
        self.fast = is_positive(phi) and all(x > 0 for x in self.w)
        self._words = [self.w]
        self._lengths = [cyclic_length(self.w)]

    def __call__(self, i: int) -> int:
        if self.fast:
            return positive_power_length(self.phi, self.w, i)
        while len(self._lengths) <= i:
            nxt = self.phi.apply(self._words[-1])
            if len(nxt) > self.budget:
                raise BudgetError(len(self._lengths))
            self._words.append(nxt)
            self._lengths.append(cyclic_length(nxt))
        return self._lengths[i]


def classify_growth_f2(phi: Automorphism) -> GrowthClass:
    """Exact growth class in rank 2 from the abelianization."""
    if phi.group.rank != 2:
        raise ValueError("classify_growth_f2 needs rank 2")
    mc = classify_matrix(phi.abelianization())
    if mc.verdict == "FiniteOrder":
        return GrowthClass("Periodic", 0, True, 0, 0, {"matrix": mc.to_dict()})
    if mc.verdict == "UnitParabolic":
        return GrowthClass("Polynomial", 1, True, 1, 1, {"matrix": mc.to_dict()})
    return GrowthClass("Exponential", None, True, None, None, {"matrix": mc.to_dict()})


def loglog_slope(ns: Sequence[float], vals: Sequence[float]) -> float:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray([float(v) for v in vals]))
    return float(np.polyfit(x, y, 1)[0])


def _fit_series(ns, vals, tol, min_ratio, window):
    """Classify one length series: ('Periodic'|'Polynomial'|'Exponential'|'Inconclusive', degree, info)."""
    ns, vals = list(ns), list(vals)
    hi = ns[-1]
    sel = [i for i, n in enumerate(ns) if n >= max(1, hi // 2)]
    wv = [vals[i] for i in sel]
    info = {"window": [ns[sel[0]], hi]}
    if len(set(wv)) == 1:
        return "Periodic", 0, info
    tail = vals[-(window + 1):]
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
    info["ratios"] = ratios
    if len(ratios) == window and all(r >= min_ratio for r in ratios):
        # exponential growth has log-log slope rising linearly in n
        s_hi = loglog_slope(ns[-window:], vals[-window:])
        mid = [i for i, n in enumerate(ns) if hi // 2 - window < n <= hi // 2]
        s_mid = loglog_slope([ns[i] for i in mid], [vals[i] for i in mid]) if len(mid) >= 2 else 0.0
        info["slopes"] = [s_mid, s_hi]
        if s_mid > 0 and s_hi >= 1.5 * s_mid:
            return "Exponential", None, info
    slope = loglog_slope([ns[i] for i in sel], wv)
    info["slope"] = slope
    d = round(slope)
    if abs(slope - d) <= tol and d >= 0:
        return ("Polynomial", d, info) if d > 0 else ("Periodic", 0, info)
    return "Inconclusive", None, info


def estimate_growth(phi: Automorphism, n_max: int = 64, probes: Optional[Sequence[Word]] = None,
                    budget: int = DEFAULT_WORD_BUDGET, tol: float = 0.25,
                    min_ratio: float = 1.05, window: int = 8,
                    table: Optional[GrowthTable] = None) -> GrowthClass:
    """Heuristic growth class from the upper half of a growth table."""
    if table is None:
        # fast growers hit the budget early; widen it until the fit window fits
        for b in (budget, 10 * budget):
            table = growth_table(phi, n_max, probes, budget=b, strict=False)
            if table.truncated_at is None or len(table.rows) >= window + 5:
                break
    rows = [r for r in table.rows if r.n >= 1]
    if len(rows) < window + 2:
        return GrowthClass("Inconclusive", detail={"reason": "table too short", "table": table})
    ns = [r.n for r in rows]
    verdicts = {}
    for label, series in (
            ("cyclic", [max(r.cyclic) for r in rows]),
            ("cyclic_inv", [max(r.cyclic_inv) for r in rows]),
            ("basis", [r.basis for r in rows])):
        verdicts[label] = _fit_series(ns, series, tol, min_ratio, window)
    kind, deg, _ = verdicts["cyclic"]
    kind_i, deg_i, _ = verdicts["cyclic_inv"]
    if (kind, deg) != (kind_i, deg_i):
        # growth of phi and phi^-1 agree up to equivalence; disagreement means the fit is unreliable
        kind, deg = "Inconclusive", None
    b_kind, b_deg, _ = verdicts["basis"]
    detail = {"fits": {k: v[2] for k, v in verdicts.items()}, "table": table}
    return GrowthClass(kind, deg, False,
                       b_deg if b_kind != "Exponential" else None,
                       deg, detail)


def growth_class(phi: Automorphism, **kw) -> GrowthClass:
    """Exact in rank 2, heuristic otherwise."""
    if phi.group.rank == 2:
        return classify_growth_f2(phi)
    return estimate_growth(phi, **kw)
