"""
Normalization pipelines for F_2 x Z, Z^2 * Z and F_k x F_l.

Each pipeline carries a Tracked automorphism, so the returned normal form
comes with an OuterWitness that is re-verified against the input before
returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .autos import Automorphism, OuterWitness, Tracked, ValidationError, induced_maps, lift
from .groups import FreeGroup, Group
from .intmat import IntMatrix, MatrixClass, classify_matrix, matrix_to_aut_f2, parabolic_normalize
from .words import (Word, alternating_normal_form, commutator, conjugacy_match, exponent_sum,
                    inverse, mul)

SWAP = IntMatrix([[0, 1], [1, 0]])


class NormalizationError(RuntimeError):
    """Witness verification failed; indicates a bug, never bad input."""


class InvalidAutomorphism(ValueError):
    pass


def _bug_trap(T: Tracked):
    if not T.verify():
        raise NormalizationError("outer witness failed verification")


def _power_word(g: int, e: int) -> Word:
    return (g,) * e if e >= 0 else (-g,) * (-e)


def _split_power_conjugate(v: Word, x: int, y: int) -> Optional[Tuple[int, int]]:
    """If ``v == x^-j y x^(j+e)`` return (j, e), else None."""
    i = 0
    while i < len(v) and abs(v[i]) == x:
        i += 1
    lead = v[:i]
    if len(lead) and len(set(lead)) != 1:
        return None
    j = -exponent_sum(lead, x)
    if i >= len(v) or v[i] != y:
        return None
    rest = v[i + 1:]
    if any(abs(z) != x for z in rest) or len(set(rest)) > 1:
        return None
    return j, exponent_sum(rest, x) - j


# -- F_2 x Z ------------------------------------------------------------------

@dataclass
class NormalFormF2xZ:
    case: str                    # NonUnit | UnitParabolic | FiniteOrderBase
    beta: int
    k_a: int
    k_b: int
    witness: OuterWitness
    base_aut: Automorphism       # phi on F_2 with phi([a,b]) == [a,b]
    normalized: Automorphism     # final Xi on F_2 x Z
    matrix_class: MatrixClass

    def to_dict(self):
        G = self.normalized.group
        return {"case": self.case, "beta": self.beta, "k_a": self.k_a, "k_b": self.k_b,
                "base_aut": self.base_aut.format(), "normalized": self.normalized.format(),
                "matrix": self.matrix_class.to_dict(), "witness": self.witness.to_dict(G)}


def normalize_f2xz(Psi: Automorphism) -> NormalFormF2xZ:
    G = Psi.group
    if G.kind != "F2xZ":
        raise InvalidAutomorphism("normalize_f2xz needs an F2xZ automorphism")
    induced_maps(Psi)                      # enforces Psi(c) = c^+-1
    a, b, c = 1, 2, 3
    comm = commutator((a,), (b,))
    T = Tracked(Psi).power(2)              # squaring fixes c
    theta2 = induced_maps(T.aut).psi
    h = conjugacy_match(theta2.apply(comm), comm)
    if h is None:
        raise NormalizationError("commutator image is not conjugate to [a,b]")
    T = T.twist(inverse(h))
    base = induced_maps(T.aut).psi
    if base.apply(comm) != comm:
        raise NormalizationError("base automorphism does not fix [a,b]")
    A = T.aut.abelianization()
    mc = classify_matrix(A)
    beta = 0

    if mc.verdict == "FiniteOrder":
        if mc.order > 1:
            T = T.power(mc.order)
        phi = induced_maps(T.aut).psi      # inner: phi = inner(g)
        ha = conjugacy_match(phi.apply((a,)), (a,))
        split = None if ha is None else _split_power_conjugate(
            mul(ha, phi.apply((b,)), inverse(ha)), a, b)
        if split is None or split[1] != 0:
            raise NormalizationError("finite-order base power is not inner")
        g = mul(_power_word(a, split[0]), ha)
        T = T.twist(inverse(g))
        case = "FiniteOrderBase"
    elif mc.verdict == "UnitParabolic":
        pf = parabolic_normalize(A, mc)
        T = T.power(pf.k)
        # B S turns [[1, alpha], [0, 1]] into [[1, 0], [alpha, 1]], i.e. a -> a b^alpha
        f = matrix_to_aut_f2(pf.B @ SWAP, G)
        T = T.conjugate_by(f)
        xi = induced_maps(T.aut).psi
        hb = conjugacy_match(xi.apply((b,)), (b,))
        T = T.twist(inverse(hb))
        xi = induced_maps(T.aut).psi
        split = _split_power_conjugate(xi.apply((a,)), b, a)
        if xi.apply((b,)) != (b,) or split is None:
            raise NormalizationError("parabolic base did not reduce to a transvection")
        T = T.twist(_power_word(b, -split[0]))
        beta = split[1]
        case = "UnitParabolic"
    else:
        case = "NonUnit"

    p = induced_maps(T.aut).p_values
    xi = induced_maps(T.aut).psi
    if case == "FiniteOrderBase" and not xi.is_identity():
        raise NormalizationError("finite-order case did not reach the identity")
    if case == "UnitParabolic" and (xi.apply((a,)) != (a,) + _power_word(b, beta)
                                    or xi.apply((b,)) != (b,)):
        raise NormalizationError("parabolic case did not reach a -> a b^beta")
    _bug_trap(T)
    return NormalFormF2xZ(case, beta, p["a"], p["b"], T.witness, base, T.aut, mc)


# -- Z^2 * Z --------------------------------------------------------------------

@dataclass
class NormalFormZ2astZ:
    case: str                    # FiniteOrder | UnitParabolic | NonUnitEigenvalue
    matrix: IntMatrix            # xi of the normalized automorphism
    z: Tuple[int, int]
    klm: Optional[Tuple[int, int, int]]
    witness: OuterWitness
    normalized: Automorphism
    matrix_class: MatrixClass

    def to_dict(self):
        return {"case": self.case, "matrix": self.matrix.tolist(), "z": list(self.z),
                "klm": list(self.klm) if self.klm else None,
                "normalized": self.normalized.format(),
                "matrix_class": self.matrix_class.to_dict(),
                "witness": self.witness.to_dict(self.normalized.group)}


def z2_matrix_aut(G: Group, M: IntMatrix) -> Automorphism:
    """Automorphism of Z^2 * Z acting on <a, b> by M (columns are images), fixing c."""
    def img(col):
        return _power_word(1, col[0]) + _power_word(2, col[1])
    Mi = M.inverse()
    return Automorphism(G, [img(M.column(0)), img(M.column(1)), (3,)],
                        [img(Mi.column(0)), img(Mi.column(1)), (3,)], validate=False)


def _c_syllable(G: Group, w: Word):
    nf = alternating_normal_form(w)
    if nf.n != 1 or abs(nf.exponents[0]) != 1:
        return None
    return nf.syllables[0], nf.exponents[0], nf.syllables[1]


def _z2word(u) -> Word:
    return _power_word(1, u[0]) + _power_word(2, u[1])


def normalize_z2astz(Psi: Automorphism) -> NormalFormZ2astZ:
    G = Psi.group
    if G.kind != "Z2astZ":
        raise InvalidAutomorphism("normalize_z2astz needs a Z2astZ automorphism")
    nf = alternating_normal_form(Psi.images[0])
    if nf.n % 2:
        raise InvalidAutomorphism("image of a is not conjugate into <a, b>")
    m = nf.n // 2
    g: Word = ()
    if m >= 1:
        letters = []
        for idx in range(m, 2 * m):
            letters += _power_word(3, nf.exponents[idx]) + _z2word(nf.syllables[idx + 1])
        g = G.canonical(letters)
    T = Tracked(Psi).twist(inverse(g))
    for x in (1, 2):
        if alternating_normal_form(T.aut.images[x - 1]).n:
            raise InvalidAutomorphism("conjugated images of a, b leave <a, b>")
    parts = _c_syllable(G, T.aut.images[2])
    if parts is None:
        raise InvalidAutomorphism("image of c is not w c^+-1 x with w, x in <a, b>")
    w, eps, x = parts
    if eps == 1:
        T = T.twist(_z2word(w))
    else:
        u = G.canonical(T.aut.apply(_z2word(w)) + inverse(_z2word(x)))
        T = T.power(2).twist(u)
    parts = _c_syllable(G, T.aut.images[2])
    if parts is None or parts[0] != (0, 0) or parts[1] != 1:
        raise NormalizationError("grooming did not give c -> c z")

    A = T.aut.abelianization()
    mc = classify_matrix(A)
    klm = None
    if mc.verdict == "FiniteOrder":
        if mc.order > 1:
            T = T.power(mc.order)
        z = _c_syllable(G, T.aut.images[2])[2]
        klm = (0, z[0], z[1])
        case = "FiniteOrder"
    elif mc.verdict == "UnitParabolic":
        pf = parabolic_normalize(A, mc)
        T = T.power(pf.k).conjugate_by(z2_matrix_aut(G, pf.B @ SWAP))
        z = _c_syllable(G, T.aut.images[2])[2]
        klm = (pf.alpha, z[0], z[1])
        case = "UnitParabolic"
    else:
        z = parts[2]
        case = "NonUnitEigenvalue"
    parts = _c_syllable(G, T.aut.images[2])
    if parts is None or parts[0] != (0, 0) or parts[1] != 1:
        raise NormalizationError("normalized automorphism does not map c to c z")
    _bug_trap(T)
    return NormalFormZ2astZ(case, T.aut.abelianization(), tuple(parts[2]), klm,
                            T.witness, T.aut, mc)


# -- F_k x F_l --------------------------------------------------------------------

@dataclass
class FactorDecomposition:
    phi1: Automorphism
    phi2: Automorphism
    witness: OuterWitness
    square: Automorphism

    def to_dict(self):
        return {"phi1": self.phi1.format(), "phi2": self.phi2.format(),
                "witness": self.witness.to_dict(self.square.group)}


def decompose_fkxfl(Psi: Automorphism) -> FactorDecomposition:
    G = Psi.group
    if G.kind != "FkxFl":
        raise InvalidAutomorphism("decompose_fkxfl needs an FkxFl automorphism")
    k, l = G.ranks
    if k < 2 or l < 2:
        raise InvalidAutomorphism("both factors need rank at least 2")
    T = Tracked(Psi).power(2)
    X, Y = G.blocks
    imgs1, invs1, imgs2, invs2 = [], [], [], []
    for gens, own, dest_i, dest_v in ((X, 0, imgs1, invs1), (Y, 1, imgs2, invs2)):
        for g in gens:
            ci = G.components(T.aut.images[g - 1])
            cv = G.components(T.aut.inverse_images[g - 1])
            if ci[1 - own] or cv[1 - own]:
                # the square of a product automorphism preserves both factors exactly
                raise InvalidAutomorphism("squared automorphism mixes the factors")
            shift = 0 if own == 0 else k
            dest_i.append(tuple(x - shift if x > 0 else x + shift for x in ci[own]))
            dest_v.append(tuple(x - shift if x > 0 else x + shift for x in cv[own]))
    F1 = FreeGroup(k, names=G.alphabet.names[:k])
    F2 = FreeGroup(l, names=G.alphabet.names[k:])
    # restrictions of a factor-preserving automorphism are automorphisms; the
    # product check below catches any slip without re-expanding the images
    phi1 = Automorphism(F1, imgs1, invs1, validate=False)
    phi2 = Automorphism(F2, imgs2, invs2, validate=False)
    product = lift(phi1, G).compose(lift(phi2, G, offset=k))
    witness = OuterWitness((), 2)
    if product != T.aut or not T.verify():
        raise NormalizationError("factor decomposition failed verification")
    return FactorDecomposition(phi1, phi2, witness, product)
