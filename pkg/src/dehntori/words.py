"""
Reduced-word arithmetic for free groups and the Z^2 * Z alternating form.

A word is a tuple of nonzero ints: generator ``i`` (1-based) is the letter
``i`` and its inverse is ``-i``.  Conjugation follows ``x^h = h^-1 x h`` and
commutators are ``[x, y] = x^-1 y^-1 x y`` everywhere in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Word = Tuple[int, ...]
EMPTY: Word = ()


class MalformedWord(ValueError):
    """Raised for unknown generators or unparsable word literals."""


def reduce(raw: Iterable[int], n_gens: Optional[int] = None) -> Word:
    """Freely reduce ``raw`` with a single stack pass."""
    out: list = []
    push, pop = out.append, out.pop
    for x in raw:
        if x == 0 or (n_gens is not None and abs(x) > n_gens):
            raise MalformedWord(f"unknown generator index {x}")
        if out and out[-1] == -x:
            pop()
        else:
            push(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*ws: Sequence[int]) -> Word:
    """Reduced product of several words."""
    out: list = []
    for w in ws:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    core = cyclic_reduce(reduce(w))
    # g^n = conj^-1 core^n conj, and core^n stays reduced
    return mul(inverse(core.conjugator), core.core * n, core.conjugator)


def conjugate(w: Sequence[int], h: Sequence[int]) -> Word:
    """``h^-1 w h``."""
    return mul(inverse(h), w, h)


def commutator(x: Sequence[int], y: Sequence[int]) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return mul(inverse(x), inverse(y), x, y)


def exponent_sum(w: Sequence[int], gen: int) -> int:
    return sum(1 if x == gen else -1 if x == -gen else 0 for x in w)


def exponent_vector(w: Sequence[int], n_gens: int) -> Tuple[int, ...]:
    v = [0] * n_gens
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def delete_generators(w: Sequence[int], gens: Iterable[int]) -> Word:
    drop = set(gens)
    return reduce(x for x in w if abs(x) not in drop)


def letter_key(x: int) -> Tuple[int, int]:
    # a < a^-1 < b < b^-1 < ...
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]):
    return (len(w), tuple(letter_key(x) for x in w))


@dataclass(frozen=True)
class CyclicWord:
    """``word = conjugator^-1 * core * conjugator`` with ``core`` cyclically reduced."""
    core: Word
    conjugator: Word

    def reassemble(self) -> Word:
        return mul(inverse(self.conjugator), self.core, self.conjugator)


def cyclic_reduce(w: Sequence[int]) -> CyclicWord:
    w = tuple(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    # w = w[:i] core w[j+1:], and w[j+1:] is the inverse of w[:i]
    return CyclicWord(w[i:j + 1], w[j + 1:])


def cyclic_length(w: Sequence[int]) -> int:
    """Length of a shortest conjugate (``||w||``)."""
    return len(cyclic_reduce(reduce(w)).core)


def conjugacy_match(w: Sequence[int], v: Sequence[int]) -> Optional[Word]:
    """Find ``h`` with ``reduce(h^-1 v h) == w``, or None if not conjugate.

    Among the rotation offsets that work, the shortlex-least ``h`` is returned.
    """
    w, v = reduce(w), reduce(v)
    cw, cv = cyclic_reduce(w), cyclic_reduce(v)
    if len(cw.core) != len(cv.core):
        return None
    n = len(cv.core)
    if n == 0:
        return mul(inverse(cv.conjugator), cw.conjugator)
    best = None
    doubled = cv.core + cv.core
    for off in range(n):
        if doubled[off:off + n] != cw.core:
            continue
        # core_w = P^-1 core_v P with P = core_v[:off]
        h = mul(inverse(cv.conjugator), cv.core[:off], cw.conjugator)
        if best is None or shortlex_key(h) < shortlex_key(best):
            best = h
    if best is not None:
        assert conjugate(v, best) == w
    return best


class Alphabet:
    """Generator names with parse/format for the ``a a^-1 a^3`` literal syntax."""

    _token = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*?)(?:\^(-?\d+))?$")

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self._index = {n: i + 1 for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MalformedWord(f"undeclared generator {name!r}") from None

    def extend(self, *names: str) -> "Alphabet":
        return Alphabet(self.names + tuple(names))

    def parse_tokens(self, text: str):
        """Yield ``(column, letters)`` for each token, columns 1-based."""
        for m in re.finditer(r"\S+", text):
            tok = m.group(0)
            if tok == "1":
                yield m.start() + 1, ()
                continue
            mm = self._token.match(tok)
            if not mm:
                raise MalformedWord(f"bad token {tok!r} at column {m.start() + 1}")
            g = self.index(mm.group(1))
            e = int(mm.group(2)) if mm.group(2) is not None else 1
            yield m.start() + 1, (g,) * e if e >= 0 else (-g,) * (-e)

    def parse(self, text: str, reduced: bool = True) -> Word:
        letters = []
        for _, part in self.parse_tokens(text):
            letters.extend(part)
        return reduce(letters) if reduced else tuple(letters)

    def format(self, w: Sequence[int]) -> str:
        if not w:
            return "1"
        out = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.names[abs(w[i]) - 1]
            e = (j - i) * (1 if w[i] > 0 else -1)
            out.append(name if e == 1 else f"{name}^{e}")
            i = j
        return " ".join(out)


@dataclass(frozen=True)
class AlternatingWord:
    """Normal form ``u_1 c^e_1 u_2 ... c^e_n u_{n+1}`` in ``<a,b | [a,b]> * <c>``.

    ``syllables`` holds the ``u_i`` as exponent pairs (i, j) meaning a^i b^j.
    """
    syllables: Tuple[Tuple[int, int], ...]
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if len(self.syllables) != len(self.exponents) + 1:
            raise ValueError("need exactly one more syllable than c-exponent")
        if any(e == 0 for e in self.exponents):
            raise ValueError("zero c-exponent")
        if any(u == (0, 0) for u in self.syllables[1:-1]):
            raise ValueError("trivial interior syllable")

    @property
    def n(self) -> int:
        return len(self.exponents)

    def to_word(self, a: int = 1, b: int = 2, c: int = 3) -> Word:
        out: list = []
        for k, (i, j) in enumerate(self.syllables):
            out.extend((a if i > 0 else -a,) * abs(i))
            out.extend((b if j > 0 else -b,) * abs(j))
            if k < self.n:
                e = self.exponents[k]
                out.extend((c if e > 0 else -c,) * abs(e))
        return tuple(out)

    def is_in_z2(self) -> bool:
        return self.n == 0


def alternating_normal_form(raw: Iterable[int], a: int = 1, b: int = 2, c: int = 3) -> AlternatingWord:
    """Collect a word over {a, b, c} into the Z^2 * Z normal form."""
    stack: list = []  # entries ["z", (i, j)] or ["c", e], alternating kinds
    for x in raw:
        g = abs(x)
        s = 1 if x > 0 else -1
        if g == c:
            kind, val = "c", s
        elif g == a:
            kind, val = "z", (s, 0)
        elif g == b:
            kind, val = "z", (0, s)
        else:
            raise MalformedWord(f"letter {x} outside {{a, b, c}}")
        if stack and stack[-1][0] == kind:
            old = stack.pop()[1]
            val = old + val if kind == "c" else (old[0] + val[0], old[1] + val[1])
            if val in (0, (0, 0)):
                continue
        stack.append((kind, val))
    syll = [(0, 0)]
    exps = []
    for kind, val in stack:
        if kind == "z":
            syll[-1] = val
        else:
            exps.append(val)
            syll.append((0, 0))
    return AlternatingWord(tuple(syll), tuple(exps))
