"""
Corridor arithmetic on boundary words, regular bipartite 1-factors and the
central-extension area bound.

Boundary words use the ``N_l`` alphabet by default: a = 1, c = 2, t = 3.
Pairings are lists of index pairs into the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .words import Alphabet, Word, exponent_sum

NL_ALPHABET = Alphabet(("a", "c", "t"))
A, C, T = 1, 2, 3


class PairingError(ValueError):
    pass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class CPairing:
    pairs: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, pairs) -> "CPairing":
        return cls(tuple(tuple(sorted(p)) for p in pairs))


def validate_pairing(w: Sequence[int], P: CPairing, c: int = C) -> None:
    """Necessary conditions for a c-pairing: complete, sign-opposed, non-crossing, balanced."""
    positions = [i for i, x in enumerate(w) if abs(x) == c]
    seen = set()
    for i, j in P.pairs:
        for k in (i, j):
            if not 0 <= k < len(w) or abs(w[k]) != c:
                raise PairingError(f"index {k} is not a c-letter")
            if k in seen:
                raise PairingError(f"index {k} paired twice")
            seen.add(k)
        if w[i] != -w[j]:
            raise PairingError(f"pair ({i}, {j}) has equal signs")
    if seen != set(positions):
        missing = sorted(set(positions) - seen)
        raise PairingError(f"unbalanced: c-letters at {missing} are unpaired")
    chords = sorted(P.pairs)
    for x, (i, j) in enumerate(chords):
        for k, l in chords[x + 1:]:
            if i < k < j < l:
                raise PairingError(f"pairs ({i}, {j}) and ({k}, {l}) cross")
        if exponent_sum(w[i + 1:j], c):
            raise PairingError(f"arc of pair ({i}, {j}) has nonzero c-balance")


@dataclass(frozen=True)
class CorridorRecord:
    pair: Tuple[int, int]
    length: int
    side_words: Tuple[Word, Word]


@dataclass(frozen=True)
class CorridorReport:
    records: Tuple[CorridorRecord, ...]
    regions: Tuple[Word, ...]          # perimeter words of the c-complementary regions

    @property
    def lengths(self) -> List[int]:
        return [r.length for r in self.records]


def corridor_lengths(w: Sequence[int], P: CPairing, c: int = C, t: int = T) -> CorridorReport:
    """Corridor lengths from t-index sums, plus region perimeter words."""
    w = tuple(w)
    validate_pairing(w, P, c)
    if exponent_sum(w, t):
        raise PairingError("boundary word has nonzero t-index sum")
    records = []
    for i, j in sorted(P.pairs):
        inner, outer = w[i + 1:j], w[j + 1:] + w[:i]
        li, lo = abs(exponent_sum(inner, t)), abs(exponent_sum(outer, t))
        assert li == lo
        records.append(CorridorRecord((i, j), li, (inner, outer)))

    # region perimeters: each corridor side reads t^k with k the enclosed t-sum
    chords = sorted(P.pairs)
    partner = {}
    for i, j in chords:
        partner[i] = j

    def tpow(k):
        return (t,) * k if k >= 0 else (-t,) * (-k)

    def region(lo, hi):
        """Perimeter of the region bounded by w[lo:hi] with nested chords collapsed."""
        out = []
        k = lo
        while k < hi:
            if k in partner:
                j = partner[k]
                out.extend(tpow(exponent_sum(w[k + 1:j], t)))
                k = j + 1
            else:
                out.append(w[k])
                k += 1
        return out

    regions = [tuple(region(0, len(w)))]
    for i, j in chords:
        body = region(i + 1, j)
        regions.append(tuple(body) + tpow(-exponent_sum(w[i + 1:j], t)))
    return CorridorReport(tuple(records), tuple(regions))


def ql_to_q1(u: Sequence[int], l: int, t: int = T) -> Tuple[Word, List[int]]:
    """Substitute t -> tau^l; returns the new word and old-to-new index map."""
    if l < 1:
        raise ValueError("l must be positive")
    out, index = [], []
    for x in u:
        index.append(len(out))
        if abs(x) == t:
            out.extend((x,) * l)
        else:
            out.append(x)
    return tuple(out), index


def transfer_pairing(P: CPairing, index: List[int]) -> CPairing:
    return CPairing.of([(index[i], index[j]) for i, j in P.pairs])


def multiple_of_l_check(records: Sequence[CorridorRecord], l: int) -> Tuple[bool, Dict[Tuple[int, int], int]]:
    residues = {r.pair: r.length % l for r in records if r.length % l}
    return not residues, residues


# -- bipartite multigraphs ----------------------------------------------------

@dataclass
class BipartiteMultigraph:
    n_left: int
    n_right: int
    edges: List[Tuple[int, int]]

    def degrees(self):
        dl, dr = [0] * self.n_left, [0] * self.n_right
        for u, v in self.edges:
            dl[u] += 1
            dr[v] += 1
        return dl, dr

    def regular_degree(self) -> Optional[int]:
        dl, dr = self.degrees()
        ds = set(dl) | set(dr)
        return ds.pop() if len(ds) == 1 else None

    def to_text(self) -> str:
        d = self.regular_degree() or 0
        lines = [f"{self.n_left} {self.n_right} {d}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BipartiteMultigraph":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        L, R, d = map(int, lines[0])
        g = cls(L, R, [(int(u), int(v)) for u, v in lines[1:]])
        if d and g.regular_degree() != d:
            raise GraphError(f"declared degree {d} does not match the edge list")
        return g


def is_perfect_matching(G: BipartiteMultigraph, chosen: Sequence[int]) -> bool:
    """Structural check: every vertex meets exactly one chosen edge."""
    if len(set(chosen)) != len(chosen):
        return False
    hit_l, hit_r = [0] * G.n_left, [0] * G.n_right
    for e in chosen:
        u, v = G.edges[e]
        hit_l[u] += 1
        hit_r[v] += 1
    return all(x == 1 for x in hit_l) and all(x == 1 for x in hit_r)


def one_factor(G: BipartiteMultigraph, d: Optional[int] = None) -> List[int]:
    """Perfect matching of a d-regular bipartite multigraph, as edge indices."""
    deg = G.regular_degree()
    if deg is None or deg < 1 or (d is not None and deg != d):
        raise GraphError("input is not regular of the requested degree")
    adj: List[List[int]] = [[] for _ in range(G.n_left)]
    for e, (u, v) in enumerate(G.edges):
        adj[u].append(e)
    match_r: List[Optional[int]] = [None] * G.n_right   # right vertex -> edge

    def augment(u, seen):
        for e in adj[u]:
            v = G.edges[e][1]
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] is None or augment(G.edges[match_r[v]][0], seen):
                match_r[v] = e
                return True
        return False

    for u in range(G.n_left):
        if not augment(u, set()):
            raise GraphError("no perfect matching found (regular input should always have one)")
    chosen = sorted(e for e in match_r if e is not None)
    if not is_perfect_matching(G, chosen):
        raise AssertionError("matching failed structural verification")
    return chosen


@dataclass
class CappingGraph:
    """Black vertices (capping faces) with an orientation side, white leaves on the boundary.

    Edges join vertices named ``("b", i)`` or ``("w", j)``; each edge must
    join opposite sides, and a white vertex takes the side opposite its neighbour.
    """
    black_sides: List[int]
    n_white: int
    edges: List[Tuple[Tuple[str, int], Tuple[str, int]]]


@dataclass
class RegularizedGraph:
    graph: BipartiteMultigraph
    beta: int
    left: List[Tuple[str, int, int]]    # (kind, index, copy) per left vertex; whites use copy 0
    right: List[Tuple[str, int, int]]
    copy_edges: Dict[int, List[int]]    # copy -> edge indices in graph

    def black_pairing(self, matching: Sequence[int], copy: int = 1) -> Dict[int, Tuple[str, int]]:
        """Restrict a 1-factor to one copy: partner of each black vertex."""
        out = {}
        for e in matching:
            u, v = self.graph.edges[e]
            lu, rv = self.left[u], self.right[v]
            for x, y in ((lu, rv), (rv, lu)):
                if x[0] == "b" and x[2] == copy:
                    out[x[1]] = (y[0], y[1])
        return out


def regularize(G: CappingGraph, beta: int) -> RegularizedGraph:
    """|beta| copies of G with white vertices identified; audits degrees."""
    k = abs(beta)
    if k == 0:
        raise GraphError("beta must be nonzero")
    deg_b = [0] * len(G.black_sides)
    deg_w = [0] * G.n_white
    white_side: Dict[int, int] = {}
    for x, y in G.edges:
        for p, q in ((x, y), (y, x)):
            if p[0] == "b":
                deg_b[p[1]] += 1
            else:
                deg_w[p[1]] += 1
                if q[0] != "b":
                    raise GraphError("white vertices must hang off black vertices")
                white_side[p[1]] = 1 - G.black_sides[q[1]]
        if x[0] == "b" and y[0] == "b" and G.black_sides[x[1]] == G.black_sides[y[1]]:
            raise GraphError("edge joins two black vertices on the same side")
    if any(dg != k for dg in deg_b) or any(dg != 1 for dg in deg_w):
        raise GraphError("degree audit failed: blacks need degree |beta|, whites degree 1")

    left, right, where = [], [], {}

    def vertex(kind, i, copy):
        key = (kind, i, 0 if kind == "w" else copy)
        if key not in where:
            side = G.black_sides[i] if kind == "b" else white_side[i]
            lst = left if side == 0 else right
            where[key] = (side, len(lst))
            lst.append(key)
        return where[key]

    edges, copy_edges = [], {}
    for copy in range(1, k + 1):
        copy_edges[copy] = []
        for x, y in G.edges:
            sx, ix = vertex(x[0], x[1], copy)
            sy, iy = vertex(y[0], y[1], copy)
            copy_edges[copy].append(len(edges))
            edges.append((ix, iy) if sx == 0 else (iy, ix))
    out = BipartiteMultigraph(len(left), len(right), edges)
    if out.regular_degree() != k:
        raise GraphError("regularized graph failed the degree audit")
    return RegularizedGraph(out, beta, left, right, copy_edges)


@dataclass(frozen=True)
class ElectroBound:
    f: int
    g: int
    n: int
    C: int
    bound: int


def electro_bound(f: int, g: int, n: int, C: int) -> ElectroBound:
    """Area bound ``C f (g + 1) + n^2`` for a central extension."""
    if min(f, g, n, C) < 0:
        raise ValueError("inputs must be nonnegative")
    return ElectroBound(f, g, n, C, C * f * (g + 1) + n * n)
