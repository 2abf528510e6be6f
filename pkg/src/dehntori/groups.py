"""
The small RAAGs handled by the package, each with a solvable normal form.

Every group exposes ``canonical(word)``: a reduced representative that is
equal for equal elements.  Group kinds: Zk, F2, Fk, F2xZ, FkxZ, Z2astZ, FkxFl.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

from .words import (Alphabet, MalformedWord, Word, alternating_normal_form,
                    commutator, reduce)

KINDS = ("Zk", "F2", "Fk", "F2xZ", "FkxZ", "Z2astZ", "FkxFl")


class FactorTag(Enum):
    FirstFree = "FirstFree"
    SecondFree = "SecondFree"
    Central = "Central"
    Stable = "Stable"


@dataclass(frozen=True)
class Generator:
    index: int
    factor: FactorTag


def _letters(k: int):
    # letter names, skipping t which is reserved for the stable letter
    names = [ch for ch in string.ascii_lowercase if ch != "t"]
    if k > len(names):
        return [f"x{i + 1}" for i in range(k)]
    return names[:k]


class Group:
    kind = "?"

    def __init__(self, alphabet: Alphabet, ranks: Tuple[int, ...]):
        self.alphabet = alphabet
        self.ranks = tuple(ranks)

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    @property
    def gens(self):
        return range(1, self.rank + 1)

    def generator(self, i: int) -> Generator:
        return Generator(i, FactorTag.FirstFree)

    def commuting_pairs(self):
        return []

    def relators(self):
        return [commutator((i,), (j,)) for i, j in self.commuting_pairs()]

    def check(self, w: Sequence[int]) -> None:
        for x in w:
            if x == 0 or abs(x) > self.rank:
                raise MalformedWord(f"letter {x} not in {self.alphabet}")

    def canonical(self, w: Sequence[int]) -> Word:
        raise NotImplementedError

    def is_identity(self, w: Sequence[int]) -> bool:
        return not self.canonical(w)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.canonical(u) == self.canonical(v)

    def length(self, w: Sequence[int]) -> int:
        return len(self.canonical(w))

    def parse(self, text: str) -> Word:
        return self.canonical(self.alphabet.parse(text))

    def format(self, w: Sequence[int]) -> str:
        return self.alphabet.format(w)

    def __eq__(self, other):
        return type(self) is type(other) and self.alphabet == other.alphabet and self.ranks == other.ranks

    def __hash__(self):
        return hash((self.kind, self.alphabet, self.ranks))

    def __repr__(self):
        return f"{self.kind}{self.ranks}"


class FreeGroup(Group):
    kind = "Fk"

    def __init__(self, k: int = 2, names=None):
        super().__init__(Alphabet(names or _letters(k)), (k,))
        if k == 2:
            self.kind = "F2"

    def canonical(self, w):
        return reduce(w, self.rank)


class FreeAbelianGroup(Group):
    kind = "Zk"

    def __init__(self, k: int, names=None):
        super().__init__(Alphabet(names or _letters(k)), (k,))

    def commuting_pairs(self):
        return [(i, j) for i in self.gens for j in self.gens if i < j]

    def exponents(self, w):
        v = [0] * self.rank
        for x in w:
            if x == 0 or abs(x) > self.rank:
                raise MalformedWord(f"letter {x} not in {self.alphabet}")
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def from_exponents(self, v) -> Word:
        out = []
        for i, e in enumerate(v):
            out.extend(((i + 1) if e > 0 else -(i + 1),) * abs(e))
        return tuple(out)

    def canonical(self, w):
        return self.from_exponents(self.exponents(w))


class DirectProduct(Group):
    """Direct product of free groups on disjoint blocks of generators.

    Normal form: reduced block words concatenated in block order, which is
    the ProductWord of the data model.
    """

    def __init__(self, kind: str, names, blocks, tags, ranks):
        super().__init__(Alphabet(names), ranks)
        self.kind = kind
        self.blocks = [tuple(b) for b in blocks]
        self._block_of = {}
        self._tags = {}
        for bi, (block, tag) in enumerate(zip(self.blocks, tags)):
            for g in block:
                self._block_of[g] = bi
                self._tags[g] = tag
        self._signed_block = {**self._block_of, **{-g: b for g, b in self._block_of.items()}}

    def generator(self, i):
        return Generator(i, self._tags[i])

    def commuting_pairs(self):
        return [(i, j) for i in self.gens for j in self.gens
                if i < j and self._block_of[i] != self._block_of[j]]

    def components(self, w) -> Tuple[Word, ...]:
        parts = [[] for _ in self.blocks]
        blk = self._signed_block
        try:
            for x in w:
                parts[blk[x]].append(x)
        except KeyError as e:
            raise MalformedWord(f"letter {e.args[0]} not in {self.alphabet}") from None
        return tuple(reduce(p) for p in parts)

    def canonical(self, w):
        return tuple(x for part in self.components(w) for x in part)


class Z2FreeZ(Group):
    """``<a, b | [a, b]> * <c>`` with the alternating normal form."""
    kind = "Z2astZ"

    def __init__(self):
        super().__init__(Alphabet(("a", "b", "c")), (2, 1))

    def generator(self, i):
        return Generator(i, FactorTag.Central if i == 3 else FactorTag.FirstFree)

    def commuting_pairs(self):
        return [(1, 2)]

    def normal_form(self, w):
        self.check(w)
        return alternating_normal_form(w)

    def canonical(self, w):
        return self.normal_form(w).to_word()


def make_group(kind: str, *ranks: int) -> Group:
    """Build a group of the given kind; ranks default sensibly."""
    if kind == "Zk":
        (k,) = ranks or (2,)
        return FreeAbelianGroup(k)
    if kind in ("F2", "Fk"):
        (k,) = ranks or (2,)
        return FreeGroup(k)
    if kind == "F2xZ":
        return DirectProduct("F2xZ", ("a", "b", "c"), [(1, 2), (3,)],
                             [FactorTag.FirstFree, FactorTag.Central], (2, 1))
    if kind == "FkxZ":
        (k,) = ranks or (3,)
        names = [f"x{i + 1}" for i in range(k)] + ["c"]
        return DirectProduct("FkxZ", names, [tuple(range(1, k + 1)), (k + 1,)],
                             [FactorTag.FirstFree, FactorTag.Central], (k, 1))
    if kind == "Z2astZ":
        return Z2FreeZ()
    if kind == "FkxFl":
        k, l = ranks or (2, 2)
        names = [f"x{i + 1}" for i in range(k)] + [f"y{i + 1}" for i in range(l)]
        return DirectProduct("FkxFl", names,
                             [tuple(range(1, k + 1)), tuple(range(k + 1, k + l + 1))],
                             [FactorTag.FirstFree, FactorTag.SecondFree], (k, l))
    raise ValueError(f"unknown group kind {kind!r}; expected one of {KINDS}")
