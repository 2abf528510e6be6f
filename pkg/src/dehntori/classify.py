"""
Dehn-function classifiers for mapping tori, one per group kind.

Every result carries a provenance record (rule identifier, case and a
snapshot of the normal form it was read from) and a heuristic flag that is
set whenever an empirical growth fit fed the decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .autos import Automorphism, KindMismatch
from .groups import make_group
from .growth import GrowthClass, growth_class
from .intmat import IntMatrix, classify_matrix
from .normalize import decompose_fkxfl, normalize_f2xz, normalize_z2astz
from .words import commutator, exponent_sum, inverse

KIND_ORDER = ("Linear", "Quadratic", "Cubic", "Polynomial", "Exponential")


class WitnessRejected(ValueError):
    pass


class InconclusiveGrowth(RuntimeError):
    """A heuristic growth fit could not decide; carries the growth classes."""

    def __init__(self, msg, growths=()):
        super().__init__(msg)
        self.growths = growths


@dataclass(frozen=True)
class DehnClass:
    kind: str                       # Linear | Quadratic | Cubic | Polynomial | Exponential | Bracket
    degree: Optional[int] = None    # polynomial degree for Quadratic, Cubic, Polynomial
    lo: Optional[str] = None        # Bracket bounds
    hi: Optional[str] = None
    provenance: dict = field(default_factory=dict, compare=False)
    heuristic: bool = False

    def __post_init__(self):
        if self.kind == "Polynomial" and (self.degree is None or self.degree < 2):
            raise ValueError("Polynomial(d) needs d >= 2")
        if self.kind == "Bracket" and not (self.lo and self.hi):
            raise ValueError("Bracket needs both bounds")

    @classmethod
    def polynomial(cls, d: int, **kw) -> "DehnClass":
        name = {1: "Linear", 2: "Quadratic", 3: "Cubic"}.get(d, "Polynomial")
        return cls(name, d, **kw)

    @classmethod
    def exponential(cls, **kw) -> "DehnClass":
        return cls("Exponential", **kw)

    @property
    def label(self) -> str:
        if self.kind == "Polynomial":
            return f"Polynomial(n^{self.degree})"
        if self.kind == "Bracket":
            return f"Bracket({self.lo}, {self.hi})"
        return self.kind

    def same_kind(self, other: "DehnClass") -> bool:
        return (self.kind, self.degree, self.lo, self.hi) == (other.kind, other.degree, other.lo, other.hi)

    def to_dict(self):
        d = {"kind": self.kind, "label": self.label, "heuristic": self.heuristic,
             "provenance": self.provenance}
        if self.degree is not None:
            d["degree"] = self.degree
        if self.kind == "Bracket":
            d["lo"], d["hi"] = self.lo, self.hi
        return d


def _prov(rule: str, case: str, snapshot=None, **extra) -> dict:
    return {"rule": rule, "case": case, "normal_form": {**(snapshot or {}), **extra}}


# -- free abelian and free bases ------------------------------------------------------

def classify_zk(A: IntMatrix) -> DehnClass:
    """Polynomial of degree c+1 (c the largest Jordan block) unless an eigenvalue is off the unit circle."""
    mc = classify_matrix(A)
    if mc.verdict == "NonUnitEigenvalue":
        return DehnClass.exponential(provenance=_prov("Zk", "non-unit-eigenvalue", matrix=mc.to_dict()))
    c = mc.jordan_block
    return DehnClass.polynomial(c + 1, provenance=_prov("Zk", f"jordan-block-{c}", matrix=mc.to_dict()))


def classify_f2(phi: Automorphism) -> DehnClass:
    if phi.group.rank != 2 or phi.group.kind not in ("F2", "Fk"):
        raise KindMismatch("classify_f2 needs an automorphism of F2")
    # phi^2 sends [a,b] to a conjugate of [a,b]: a periodic conjugacy class always exists
    img = phi.power(2).apply(commutator((1,), (2,)))
    return DehnClass.polynomial(2, provenance=_prov(
        "F2", "never-atoroidal", square_of_commutator=phi.group.format(img)))


# -- F2 x Z ------------------------------------------------------------------------------

def classify_f2xz(Psi: Automorphism) -> DehnClass:
    nf = normalize_f2xz(Psi)
    snap = nf.to_dict()
    if nf.case == "NonUnit":
        return DehnClass.polynomial(2, provenance=_prov("F2xZ", "non-unit", snap))
    if nf.case == "UnitParabolic":
        if nf.k_b != 0:
            return DehnClass.polynomial(3, provenance=_prov("F2xZ", "parabolic-kb-nonzero", snap))
        return DehnClass.polynomial(2, provenance=_prov("F2xZ", "parabolic-kb-zero", snap))
    if (nf.k_a, nf.k_b) != (0, 0):
        return DehnClass.polynomial(3, provenance=_prov("F2xZ", "finite-order-k-nonzero", snap))
    return DehnClass.polynomial(2, provenance=_prov("F2xZ", "finite-order-k-zero", snap))


# -- Z^2 * Z -------------------------------------------------------------------------------

def classify_z2astz(Psi: Automorphism) -> DehnClass:
    nf = normalize_z2astz(Psi)
    snap = nf.to_dict()
    if nf.case == "FiniteOrder":
        return DehnClass.polynomial(2, provenance=_prov("Z2astZ", "finite-order", snap))
    if nf.case == "NonUnitEigenvalue":
        return DehnClass.exponential(provenance=_prov("Z2astZ", "non-unit-eigenvalue", snap))
    return DehnClass.polynomial(3, provenance=_prov("Z2astZ", "unit-parabolic", snap))


# -- F_k x F_l -------------------------------------------------------------------------------

def _growth_snapshot(g: GrowthClass) -> dict:
    d = g.to_dict()
    fits = g.detail.get("fits")
    if fits:
        d["fits"] = {k: {kk: vv for kk, vv in v.items() if kk in ("slope", "slopes", "window")}
                     for k, v in fits.items()}
    return d


def classify_fkxfl(Psi: Automorphism, **growth_kw) -> DehnClass:
    dec = decompose_fkxfl(Psi)
    g1 = growth_class(dec.phi1, **growth_kw)
    g2 = growth_class(dec.phi2, **growth_kw)
    heuristic = not (g1.exact and g2.exact)
    snap = {**dec.to_dict(), "growth": [_growth_snapshot(g1), _growth_snapshot(g2)]}
    kinds = (g1.kind, g2.kind)
    if "Periodic" in kinds:
        return DehnClass.polynomial(2, provenance=_prov("FkxFl", "periodic-factor", snap),
                                    heuristic=heuristic)
    if "Inconclusive" in kinds:
        raise InconclusiveGrowth("factor growth could not be fitted", (g1, g2))
    if kinds == ("Exponential", "Exponential"):
        return DehnClass.exponential(provenance=_prov("FkxFl", "both-exponential", snap),
                                     heuristic=heuristic)
    # the slower factor governs; record both degrees
    d = min(g.degree for g in (g1, g2) if g.kind == "Polynomial")
    snap["degrees"] = [g1.degree, g2.degree]
    return DehnClass.polynomial(d + 2, provenance=_prov("FkxFl", f"polynomial-d{d}", snap),
                                heuristic=heuristic)


# -- F_k x Z -----------------------------------------------------------------------------------

def verify_fkxz_witness(Psi: Automorphism, w: Sequence[int]) -> int:
    """Return k != 0 with Psi(w) = w c^k, else raise WitnessRejected."""
    G = Psi.group
    c = G.rank
    w = G.canonical(w)
    if not w or any(abs(x) == c for x in w):
        raise WitnessRejected("witness must be a nontrivial word in the free factor")
    img = Psi.apply(w)
    k = exponent_sum(img, c)
    if k == 0:
        raise WitnessRejected("witness has c-exponent 0")
    if not G.is_identity(img + (-c if k > 0 else c,) * abs(k) + inverse(w)):
        raise WitnessRejected(f"Psi(w) != w c^{k}")
    return k


def classify_fkxz(Psi: Automorphism, witness: Optional[Sequence[int]] = None,
                  strict: bool = False) -> DehnClass:
    """Bracket(Quadratic, Cubic) unless a witness Psi(w) = w c^k with k != 0 is verified.

    A rejected witness raises with ``strict``; otherwise the result falls back
    to the bracket and records the rejection.
    """
    G = Psi.group
    if G.kind != "FkxZ":
        raise KindMismatch("classify_fkxz needs an FkxZ automorphism")
    if G.ranks[0] == 2:
        F = make_group("F2xZ")
        return classify_f2xz(Automorphism(F, Psi.images, Psi.inverse_images))
    if Psi.images[-1] not in ((G.rank,), (-G.rank,)):
        raise KindMismatch("central generator is not mapped to c^+-1")
    rejected = None
    if witness is not None:
        try:
            k = verify_fkxz_witness(Psi, witness)
            return DehnClass.polynomial(3, provenance=_prov(
                "FkxZ", "witness", witness=G.format(witness), k=k, aut=Psi.format()))
        except WitnessRejected as e:
            if strict:
                raise
            rejected = str(e)
    prov = _prov("FkxZ", "open-bracket", aut=Psi.format())
    if rejected:
        prov["witness_rejected"] = rejected
    return DehnClass("Bracket", lo="Quadratic", hi="Cubic", provenance=prov)


# -- dispatcher -----------------------------------------------------------------------------------

def classify(Psi: Automorphism, witness=None, **growth_kw) -> DehnClass:
    kind = Psi.group.kind
    if kind == "Zk":
        return classify_zk(Psi.abelianization())
    if kind in ("F2", "Fk"):
        if Psi.group.rank == 2:
            return classify_f2(Psi)
        raise KindMismatch("free groups of rank >= 3 are outside the classifiers")
    if kind == "F2xZ":
        return classify_f2xz(Psi)
    if kind == "FkxZ":
        return classify_fkxz(Psi, witness)
    if kind == "Z2astZ":
        return classify_z2astz(Psi)
    if kind == "FkxFl":
        return classify_fkxfl(Psi, **growth_kw)
    raise KindMismatch(f"no classifier for {kind}")
