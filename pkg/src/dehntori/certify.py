"""
Certificates: witness-word lower bounds, the abelian-subgroup lower bound,
t-shuffle upper-bound ledgers and an exact area search for tiny words.

In a mapping torus the stable letter acts by ``t^-1 x t = Phi(x)``.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .autos import Automorphism
from .growth import PowerLengths
from .groups import Group
from .words import (Alphabet, Word, commutator, cyclic_reduce, exponent_vector, inverse, mul,
                    reduce)


class TrivialProbe(ValueError):
    pass


class KNotInvariant(ValueError):
    pass


class ShuffleBudgetError(RuntimeError):
    def __init__(self, partial: "ShuffleCertificate"):
        super().__init__(f"shuffle budget exhausted after {partial.relator_count} relator applications")
        self.partial = partial


# -- mapping tori -----------------------------------------------------------------

class MappingTorus:
    """``G x|_Phi Z`` with stable letter ``t`` = generator ``rank + 1``."""

    def __init__(self, phi: Automorphism):
        self.phi = phi
        self.group = phi.group
        self.t = self.group.rank + 1
        self.alphabet = self.group.alphabet.extend("t")

    def relators(self) -> List[Word]:
        t = self.t
        rels = [reduce((-t, g, t) + inverse(self.phi.images[g - 1])) for g in self.group.gens]
        return rels + list(self.group.relators())

    def parse(self, text: str) -> Word:
        return self.alphabet.parse(text)

    def format(self, w) -> str:
        return self.alphabet.format(w)

    def presentation(self) -> "Presentation":
        return Presentation(f"M[{self.phi.format()}]", self.alphabet, self.relators())


def random_identity_word(torus: MappingTorus, rng: random.Random, max_len: int = 40,
                         n_relators: int = 3, conj_len: int = 3, tries: int = 200) -> Word:
    """Product of random conjugates of relators, freely reduced, of length <= max_len."""
    rels = torus.relators()
    gens = list(range(1, torus.t + 1))
    for _ in range(tries):
        w: Word = ()
        for _ in range(rng.randint(1, n_relators)):
            r = rng.choice(rels)
            if rng.random() < 0.5:
                r = inverse(r)
            u = reduce(rng.choice(gens) * rng.choice((1, -1)) for _ in range(rng.randint(0, conj_len)))
            w = mul(w, inverse(u), r, u)
        if 0 < len(w) <= max_len:
            return w
    raise RuntimeError("could not sample a short identity word")


# -- witness words for F_k x F_l ---------------------------------------------------

@dataclass
class WitnessFamily:
    n: int
    word: Word
    x: Word
    y: Word
    terms: List[int]
    total: int
    alphabet: Alphabet = field(repr=False, default=None)

    @property
    def length(self) -> int:
        return len(self.word)

    def to_dict(self):
        return {"n": self.n, "length": self.length, "total": self.total, "terms": self.terms}


def witness_word(n: int, x: Word, y: Word, t: int) -> Word:
    """``t^-4n y^n t^4n x^n t^-4n y^-n t^4n x^-n``."""
    T = lambda e: (t,) * e if e >= 0 else (-t,) * (-e)
    xn = x * n
    yn = y * n
    return T(-4 * n) + yn + T(4 * n) + xn + T(-4 * n) + inverse(yn) + T(4 * n) + inverse(xn)


class WitnessBounds:
    """Witness lower bounds for several n, sharing the cached power lengths."""

    def __init__(self, phi1: Automorphism, phi2: Automorphism, x: Word, y: Word):
        for p in (x, y):
            if not p or cyclic_reduce(reduce(p)).conjugator or reduce(p) != tuple(p):
                raise TrivialProbe("probes must be nontrivial and cyclically reduced")
        self.phi1, self.phi2 = phi1, phi2
        k = phi1.group.rank
        self.x = tuple(x)
        self.y = tuple(y)
        self.y_shifted = tuple(g + k if g > 0 else g - k for g in y)
        self.t = k + phi2.group.rank + 1
        names = phi1.group.alphabet.names + phi2.group.alphabet.names
        if len(set(names)) < len(names):
            from .groups import make_group
            names = make_group("FkxFl", k, phi2.group.rank).alphabet.names
        self.alphabet = Alphabet(names + ("t",))
        self._l1 = PowerLengths(phi1.inverse(), self.x)
        self._l2 = PowerLengths(phi2, self.y)

    def __call__(self, n: int) -> WitnessFamily:
        terms = [n * min(self._l1(i), self._l2(i)) for i in range(n, 2 * n)]
        return WitnessFamily(n, witness_word(n, self.x, self.y_shifted, self.t), self.x, self.y,
                             terms, sum(terms), self.alphabet)


def witness_lower_bound(phi1: Automorphism, phi2: Automorphism, n: int, probes: Tuple[Word, Word]) -> WitnessFamily:
    return WitnessBounds(phi1, phi2, *probes)(n)


def choose_probe(phi: Automorphism, n: int = 16) -> Word:
    """Default probe: the generator or commutator with the largest cyclic length under phi^n."""
    from .growth import default_probes
    best, best_len = None, -1
    for w in default_probes(phi):
        core = cyclic_reduce(w).core
        L = PowerLengths(phi, core)(n) + PowerLengths(phi.inverse(), core)(n)
        if L > best_len:
            best, best_len = core, L
    return best


# -- abelian subgroup bound --------------------------------------------------------

def _solve_integer(cols: List[Tuple[int, ...]], target: Tuple[int, ...]) -> Optional[List[int]]:
    """Integer solution of sum c_j cols[j] = target for independent columns, else None."""
    m = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(m)] + [Fraction(target[i])] for i in range(len(target))]
    piv_cols, r = [], 0
    for ccol in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][ccol] != 0), None)
        if pr is None:
            return None
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][ccol]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][ccol] != 0:
                f = rows[i][ccol]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(ccol)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    sol = [rows[i][-1] for i in range(m)]
    if any(s.denominator != 1 for s in sol):
        return None
    return [int(s) for s in sol]


def check_k_invariant(Phi: Automorphism, K: Sequence[Word]) -> None:
    G = Phi.group
    K = [G.canonical(k) for k in K]
    for i, u in enumerate(K):
        for v in K[i + 1:]:
            if not G.is_identity(commutator(u, v)):
                raise KNotInvariant("K-generators do not commute")
    cols = [exponent_vector(k, G.rank) for k in K]
    for k in K:
        for img in (Phi.apply(k), Phi.apply_inverse(k)):
            coef = _solve_integer(cols, exponent_vector(img, G.rank))
            if coef is None:
                raise KNotInvariant(f"{G.format(img)} is not in K")
            prod: List[int] = []
            for kj, e in zip(K, coef):
                prod.extend(kj * e if e >= 0 else inverse(kj) * (-e))
            if not G.equal(prod, img):
                raise KNotInvariant(f"{G.format(img)} is not in K")


def bg_lower_bound(Phi: Automorphism, K: Sequence[Word], n: int) -> int:
    """``n^2 max_i |Phi^{+-n}(k_i)|`` for a Phi-invariant abelian subgroup K."""
    check_k_invariant(Phi, K)
    G = Phi.group
    best = 0
    for k in K:
        f = b = G.canonical(k)
        for _ in range(n):
            f, b = Phi.apply(f), Phi.apply_inverse(b)
        best = max(best, len(f), len(b))
    return n * n * best


# -- t-shuffle -------------------------------------------------------------------------

@dataclass
class LedgerEntry:
    position: int
    relator: str
    before: int
    after: int

    def __str__(self):
        return f"({self.position}, {self.relator}, {self.before}, {self.after})"


@dataclass
class ShuffleCertificate:
    word: Word
    final_u: Word
    s: int
    relator_count: int
    stages: int
    ledger: List[LedgerEntry]
    C: int
    certified: bool = False

    @property
    def crude_bound(self) -> int:
        n = len(self.word)
        return n * self.C ** n

    def to_dict(self, torus: Optional[MappingTorus] = None):
        fmt = torus.format if torus else str
        return {"word": fmt(self.word), "final_u": fmt(self.final_u), "s": self.s,
                "relator_count": self.relator_count, "stages": self.stages, "C": self.C,
                "certified": self.certified, "ledger": [str(e) for e in self.ledger]}


def t_shuffle(w: Sequence[int], torus: MappingTorus, budget: int = 10_000_000) -> ShuffleCertificate:
    """Move every t to the right, rewriting base letters; count letters crossed."""
    phi, t, G = torus.phi, torus.t, torus.group
    cert = ShuffleCertificate(tuple(w), (), 0, 0, 0, [], phi.max_image_length())
    u: Word = ()
    s = 0
    for pos, x in enumerate(w):
        if abs(x) == t:
            s += 1 if x > 0 else -1
            continue
        block: Word = (x,)
        # t^-1 x = Phi(x) t^-1 and t x = Phi^-1(x) t
        imgs = phi.images if s < 0 else phi.inverse_images
        label = "t^-1" if s < 0 else "t"
        for _ in range(abs(s)):
            before = len(block)
            cert.relator_count += before
            out: List[int] = []
            for y in block:
                out.extend(imgs[y - 1] if y > 0 else inverse(imgs[-y - 1]))
            block = reduce(out)
            cert.stages += 1
            cert.ledger.append(LedgerEntry(pos, label, before, len(block)))
            if cert.relator_count > budget:
                cert.final_u, cert.s = mul(u, block), s
                raise ShuffleBudgetError(cert)
        u = mul(u, block)
    cert.final_u, cert.s = u, s
    cert.certified = s == 0 and G.is_identity(u)
    return cert


def shuffle_growth_constant(phi: Automorphism, n: int, d: int) -> float:
    """``K = max_{1<=j<=n} L(j) / j^d`` where L(j) bounds the shuffled block after j steps.

    L(j) is the longest free reduction of phi^{+-j} on a generator computed by
    the same letter substitution the shuffle uses.
    """
    best = 0.0
    for imgs in (phi.images, phi.inverse_images):
        blocks = [(g,) for g in phi.group.gens]
        for j in range(1, n + 1):
            nb = []
            for blk in blocks:
                out: List[int] = []
                for y in blk:
                    out.extend(imgs[y - 1] if y > 0 else inverse(imgs[-y - 1]))
                nb.append(reduce(out))
            blocks = nb
            best = max(best, max(len(b) for b in blocks) / j ** d)
    return best


# -- area oracle ------------------------------------------------------------------------

@dataclass
class Presentation:
    name: str
    alphabet: Alphabet
    relators: List[Word]
    heuristic: Optional[Callable[[Word], int]] = None

    def moves(self):
        """Map first letter -> list of (alpha, replacement) with alpha gamma a cyclic conjugate."""
        table: Dict[int, List[Tuple[Word, Word]]] = {}
        inserts = set()
        for r in self.relators:
            for rr in (r, inverse(r)):
                for k in range(len(rr)):
                    conj = rr[k:] + rr[:k]
                    inserts.add(conj)
                    for p in range(1, len(conj) + 1):
                        alpha, repl = conj[:p], inverse(conj[p:])
                        table.setdefault(alpha[0], [])
                        if (alpha, repl) not in table[alpha[0]]:
                            table[alpha[0]].append((alpha, repl))
        return table, sorted(inserts)


def z2_winding_bound(w: Sequence[int], x: int = 1, y: int = 2) -> int:
    """Sum of |winding numbers| of a closed path in Z^2 (x steps along the first axis).

    Every commutator cell changes one winding number by one, so this is a
    lower bound on area for any identity word.
    """
    px = py = 0
    edges = []
    ys = [0]
    for g in w:
        if abs(g) == x:
            s = 1 if g > 0 else -1
            edges.append((min(px, px + s), py, s))
            px += s
        elif abs(g) == y:
            py += 1 if g > 0 else -1
            ys.append(py)
        else:
            raise ValueError("word leaves the two-letter alphabet")
    if px or py:
        raise ValueError("path is not closed")
    lo = min(ys)
    wind: Dict[Tuple[int, int], int] = {}
    for col, height, s in edges:
        for j in range(lo, height):
            wind[(col, j)] = wind.get((col, j), 0) + s
    return sum(abs(v) for v in wind.values())


def presentation(kind: str, **params) -> Presentation:
    """Built-in finite presentations used by the oracle."""
    if kind == "Z2":
        al = Alphabet(("a", "t"))
        return Presentation("<a,t | [a,t]>", al, [commutator((1,), (2,))], z2_winding_bound)
    if kind in ("N_l", "Q_l"):
        l = params.get("l", 1)
        al = Alphabet(("a", "c", "t"))
        rel2 = reduce((-3, 2, 3) + (-1,) * l + (-2,))
        return Presentation(f"<a,c,t | a^t = a, c^t = c a^{l}>", al, [commutator((1,), (3,)), rel2])
    if kind == "M_klm":
        k, l, m = params["k"], params["l"], params["m"]
        al = Alphabet(("a", "b", "c", "t"))
        p = lambda g, e: (g,) * e if e >= 0 else (-g,) * (-e)
        rels = [commutator((1,), (2,)),
                reduce((-4, 1, 4) + inverse((1,) + p(2, k))),
                commutator((2,), (4,)),
                reduce((-4, 3, 4) + inverse((3,) + p(1, l) + p(2, m)))]
        return Presentation(f"M_{{{k},{l},{m}}}", al, rels)
    if kind == "torus":
        return MappingTorus(params["phi"]).presentation()
    raise ValueError(f"unknown presentation kind {kind!r}")


@dataclass
class OracleResult:
    word: Word
    area: Optional[int]
    lower: int
    upper: Optional[int]
    exact: bool
    explored: int
    L_max: int
    budget: int
    status: str            # exact | bracket | unreachable

    def to_dict(self, alphabet: Optional[Alphabet] = None):
        return {"word": alphabet.format(self.word) if alphabet else list(self.word),
                "area": self.area, "lower": self.lower, "upper": self.upper, "exact": self.exact,
                "explored": self.explored, "L_max": self.L_max, "budget": self.budget,
                "status": self.status}


def _splice(left: Word, mid: Word, right: Word) -> Word:
    """Free reduction of ``left mid right`` when all three are already reduced."""
    out = list(left)
    for x in mid:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    k = 0
    while k < len(right) and out and out[-1] == -right[k]:
        out.pop()
        k += 1
    return tuple(out) + right[k:]


def area_oracle(w: Sequence[int], pres: Presentation, L_max: Optional[int] = None,
                budget: int = 5_000_000, insertions: bool = True) -> OracleResult:
    """Best-first search for the least number of relator applications reducing w to 1.

    States are freely reduced words of length at most L_max.  With an
    admissible heuristic the search is A*; otherwise it is uniform cost.
    ``exact`` means optimal among derivations that stay under the cap.
    """
    start = reduce(w)
    L_max = len(start) + 6 if L_max is None else L_max
    if len(start) > L_max:
        raise ValueError("word longer than the cap")
    h = pres.heuristic or (lambda _w: 0)
    lower0 = max(h(start), 1 if start else 0)
    if not start:
        return OracleResult(start, 0, 0, 0, True, 0, L_max, budget, "exact")
    table, inserts = pres.moves()
    dist = {start: 0}
    heap = [(h(start), 0, start)]
    explored = 0
    while heap:
        f, g, cur = heapq.heappop(heap)
        if g != dist.get(cur):
            continue
        if not cur:
            return OracleResult(tuple(w), g, lower0, g, True, explored, L_max, budget, "exact")
        explored += 1
        if explored > budget:
            return OracleResult(tuple(w), None, max(lower0, f), None, False, explored, L_max,
                                budget, "bracket")
        succ = []
        for i, x in enumerate(cur):
            for alpha, repl in table.get(x, ()):
                if cur[i:i + len(alpha)] == alpha:
                    succ.append(_splice(cur[:i], repl, cur[i + len(alpha):]))
        if insertions:
            for i in range(len(cur) + 1):
                for r in inserts:
                    succ.append(_splice(cur[:i], r, cur[i:]))
        for nxt in succ:
            if len(nxt) > L_max:
                continue
            ng = g + 1
            if ng < dist.get(nxt, 1 << 60):
                dist[nxt] = ng
                heapq.heappush(heap, (ng + h(nxt), ng, nxt))
    return OracleResult(tuple(w), None, lower0, None, False, explored, L_max, budget, "unreachable")
