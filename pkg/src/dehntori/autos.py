"""
Automorphisms given by generator images together with inverse images.

Composition convention: ``compose(f, g)`` is ``f o g``, i.e. ``x -> f(g(x))``.
Inner automorphisms: ``inner(h)`` is ``x -> h^-1 x h``, so that
``inner(x) o inner(y) == inner(y x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from .groups import Group
from .intmat import IntMatrix, MatrixError
from .words import Word, conjugate, delete_generators, exponent_sum, inverse, mul


class ValidationError(ValueError):
    def __init__(self, msg, generator=None):
        super().__init__(msg)
        self.generator = generator


class RelationError(ValidationError):
    pass


class KindMismatch(ValueError):
    pass


class Automorphism:
    """A validated automorphism of ``group``.

    ``images[i]`` and ``inverse_images[i]`` are the canonical words for the
    image and preimage of generator ``i + 1``.
    """

    def __init__(self, group: Group, images, inverse_images, validate: bool = True, name: str = ""):
        self.group = group
        self.name = name
        self.images = self._normalize(images)
        self.inverse_images = self._normalize(inverse_images)
        if validate:
            self.validate()

    def _normalize(self, imgs):
        G = self.group
        if isinstance(imgs, dict):
            missing = [g for g in G.alphabet.names if g not in imgs]
            if missing:
                raise ValidationError(f"no image given for {missing[0]}", missing[0])
            imgs = [imgs[n] for n in G.alphabet.names]
        imgs = list(imgs)
        if len(imgs) != G.rank:
            raise ValidationError(f"expected {G.rank} images, got {len(imgs)}")
        out = []
        for w in imgs:
            if isinstance(w, str):
                w = G.alphabet.parse(w)
            G.check(w)
            out.append(G.canonical(w))
        return tuple(out)

    # -- basic action --------------------------------------------------------
    def apply(self, w: Sequence[int]) -> Word:
        return self.group.canonical(self._subst(w, self.images))

    def apply_inverse(self, w: Sequence[int]) -> Word:
        return self.group.canonical(self._subst(w, self.inverse_images))

    @staticmethod
    def _subst(w, imgs):
        out = []
        for x in w:
            out.extend(imgs[x - 1] if x > 0 else inverse(imgs[-x - 1]))
        return out

    __call__ = apply

    def validate(self) -> "Automorphism":
        G = self.group
        names = G.alphabet.names
        for g in G.gens:
            if G.canonical(self._subst(self.images[g - 1], self.inverse_images)) != (g,):
                raise ValidationError(
                    f"inverse(image({names[g - 1]})) != {names[g - 1]}", names[g - 1])
            if G.canonical(self._subst(self.inverse_images[g - 1], self.images)) != (g,):
                raise ValidationError(
                    f"image(inverse({names[g - 1]})) != {names[g - 1]}", names[g - 1])
        for rel in G.relators():
            for imgs, which in ((self.images, "images"), (self.inverse_images, "inverse images")):
                if not G.is_identity(self._subst(rel, imgs)):
                    raise RelationError(f"{which} violate relator {G.format(rel)}")
        return self

    # -- algebra ---------------------------------------------------------------
    def inverse(self) -> "Automorphism":
        return Automorphism(self.group, self.inverse_images, self.images, validate=False,
                            name=f"{self.name}^-1" if self.name else "")

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``."""
        if self.group != other.group:
            raise KindMismatch(f"cannot compose over {self.group} and {other.group}")
        imgs = [self.apply(w) for w in other.images]
        invs = [other.apply_inverse(w) for w in self.inverse_images]
        return Automorphism(self.group, imgs, invs, validate=False)

    def power(self, n: int) -> "Automorphism":
        base = self if n >= 0 else self.inverse()
        result = identity(self.group)
        sq = base
        n = abs(n)
        while n:
            if n & 1:
                result = result.compose(sq)
            n >>= 1
            if n:
                sq = sq.compose(sq)
        return result

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.group == other.group and self.images == other.images

    def __hash__(self):
        return hash((self.group, self.images))

    def is_identity(self) -> bool:
        return all(img == (g,) for g, img in zip(self.group.gens, self.images))

    def max_image_length(self) -> int:
        """``C = max |Psi^{+-1}(x)|`` over generators."""
        return max(len(w) for w in self.images + self.inverse_images)

    def abelianization(self, gens: Optional[Sequence[int]] = None) -> IntMatrix:
        """Exponent matrix on the generators ``gens`` (columns are images).

        The default block depends on the group kind: the free or free-abelian
        factor that the classification theorems use.
        """
        if gens is None:
            gens = default_abelian_block(self.group)
        cols = []
        for g in gens:
            img = self.images[g - 1]
            cols.append([exponent_sum(img, h) for h in gens])
        M = IntMatrix.from_columns(cols)
        if M.det not in (1, -1):
            raise MatrixError(f"abelianization has determinant {M.det}")
        return M

    def format(self, inverse_block: bool = False) -> str:
        G = self.group
        imgs = self.inverse_images if inverse_block else self.images
        return ", ".join(f"{n} -> {G.format(w)}" for n, w in zip(G.alphabet.names, imgs))

    def __repr__(self):
        return f"Automorphism({self.group}: {self.format()})"


def default_abelian_block(G: Group):
    if G.kind in ("F2xZ", "FkxZ"):
        return tuple(G.blocks[0])
    if G.kind == "Z2astZ":
        return (1, 2)
    return tuple(G.gens)


def identity(G: Group) -> Automorphism:
    gens = [(g,) for g in G.gens]
    return Automorphism(G, gens, gens, validate=False, name="id")


def validate(G: Group, images, inverse_images, name: str = "") -> Automorphism:
    return Automorphism(G, images, inverse_images, validate=True, name=name)


def apply(phi: Automorphism, w) -> Word:
    return phi.apply(w)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    return phi.compose(psi)


def compose_all(G: Group, auts) -> Automorphism:
    """``f_1 o f_2 o ... o f_r``."""
    result = identity(G)
    for f in auts:
        result = result.compose(f)
    return result


def power(phi: Automorphism, n: int) -> Automorphism:
    return phi.power(n)


def inner(G: Group, h: Sequence[int]) -> Automorphism:
    """``x -> h^-1 x h``."""
    h = G.canonical(h)
    imgs = [conjugate((g,), h) for g in G.gens]
    invs = [conjugate((g,), inverse(h)) for g in G.gens]
    return Automorphism(G, imgs, invs, validate=False, name="inner")


@dataclass(frozen=True)
class InducedMaps:
    psi: Automorphism
    p_values: Dict[str, int]
    c_sign: int


def induced_maps(Psi: Automorphism) -> InducedMaps:
    """Factor map (central letter deleted) and central exponent counts."""
    G = Psi.group
    if G.kind not in ("F2xZ", "FkxZ"):
        raise KindMismatch("induced_maps needs an F2xZ or FkxZ automorphism")
    c = G.rank
    if Psi.images[c - 1] not in ((c,), (-c,)):
        raise ValidationError(f"central generator maps to {G.format(Psi.images[c - 1])}, not c^+-1", "c")
    F = _free_on(G)
    imgs = [delete_generators(Psi.images[g - 1], [c]) for g in range(1, c)]
    invs = [delete_generators(Psi.inverse_images[g - 1], [c]) for g in range(1, c)]
    # c is central and fixed up to sign, so the quotient map is an automorphism
    psi = Automorphism(F, imgs, invs, validate=False)
    p = {G.alphabet.names[g - 1]: exponent_sum(Psi.images[g - 1], c) for g in range(1, c)}
    return InducedMaps(psi, p, 1 if Psi.images[c - 1] == (c,) else -1)


def _free_on(G: Group):
    from .groups import FreeGroup
    names = G.alphabet.names[:-1]
    return FreeGroup(len(names), names=names)


def lift(f: Automorphism, G: Group, offset: int = 0) -> Automorphism:
    """Extend an automorphism of a free factor to ``G``, fixing other generators.

    Generator ``i`` of ``f``'s group becomes generator ``i + offset`` of ``G``.
    """
    shift = lambda w: tuple(x + offset if x > 0 else x - offset for x in w)
    own = set(range(1 + offset, f.group.rank + 1 + offset))
    imgs, invs = [], []
    for g in G.gens:
        if g in own:
            imgs.append(shift(f.images[g - 1 - offset]))
            invs.append(shift(f.inverse_images[g - 1 - offset]))
        else:
            imgs.append((g,))
            invs.append((g,))
    return Automorphism(G, imgs, invs, validate=False)


@dataclass(frozen=True)
class OuterWitness:
    """Certifies ``Phi = inner(h) o F^-1 o Psi^k o F`` (``F`` defaults to the identity)."""
    h: Word
    k: int
    conj: Optional[Automorphism] = None

    def realize(self, Psi: Automorphism) -> Automorphism:
        X = Psi.power(self.k)
        if self.conj is not None:
            X = self.conj.inverse().compose(X).compose(self.conj)
        return inner(Psi.group, self.h).compose(X)

    def to_dict(self, G: Group):
        d = {"h": G.format(self.h), "k": self.k}
        if self.conj is not None:
            d["conj"] = self.conj.format()
        return d


def outer_equal(Phi: Automorphism, Psi: Automorphism, witness: OuterWitness) -> bool:
    """Check ``Phi(x) == h^-1 F^-1(Psi^k(F(x))) h`` on every generator."""
    return Phi.images == witness.realize(Psi).images


class Tracked:
    """An automorphism together with an OuterWitness tying it to a base ``Psi``.

    Each operation updates both the automorphism and the witness, so the
    invariant ``outer_equal(aut, base, witness)`` is preserved.
    """

    def __init__(self, base: Automorphism, aut: Optional[Automorphism] = None,
                 witness: Optional[OuterWitness] = None):
        self.base = base
        self.aut = aut if aut is not None else base
        self.witness = witness if witness is not None else OuterWitness((), 1)

    @property
    def group(self):
        return self.base.group

    def twist(self, u) -> "Tracked":
        """Left-compose with ``inner(u)``."""
        G = self.group
        u = G.canonical(u)
        aut = inner(G, u).compose(self.aut)
        w = self.witness
        return Tracked(self.base, aut, OuterWitness(G.canonical(w.h + u), w.k, w.conj))

    def power(self, m: int) -> "Tracked":
        if m < 1:
            raise ValueError("only positive powers are tracked")
        G = self.group
        w = self.witness
        X = self.base.power(w.k)
        if w.conj is not None:
            X = w.conj.inverse().compose(X).compose(w.conj)
        H = w.h
        for _ in range(m - 1):
            H = G.canonical(X.apply(H) + w.h)
        return Tracked(self.base, self.aut.power(m), OuterWitness(H, w.k * m, w.conj))

    def conjugate_by(self, F: Automorphism) -> "Tracked":
        """Replace ``aut`` by ``F^-1 o aut o F``."""
        w = self.witness
        aut = F.inverse().compose(self.aut).compose(F)
        conj = F if w.conj is None else w.conj.compose(F)
        return Tracked(self.base, aut, OuterWitness(F.apply_inverse(w.h), w.k, conj))

    def verify(self) -> bool:
        return outer_equal(self.aut, self.base, self.witness)
