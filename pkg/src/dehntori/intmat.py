"""
Exact integer matrices: unit-eigenvalue classification, parabolic normal
form in SL(2,Z), and lifting GL(2,Z) to Aut(F_2).

Matrices act on column vectors; column j of an automorphism's matrix is the
exponent vector of the image of generator j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple


class MatrixError(ValueError):
    pass


class IntMatrix:
    """Square matrix of Python ints (arbitrary precision)."""

    __slots__ = ("rows", "_det")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise MatrixError("matrix must be square")
        self.rows = rows
        self._det = None

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMatrix":
        n = len(cols)
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        n = self.n
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])

    def apply(self, v: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other):
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self.rows])

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    @property
    def det(self) -> int:
        if self._det is None:
            self._det = _bareiss_det(self.rows)
        return self._det

    def inverse(self) -> "IntMatrix":
        """Exact inverse; only for determinant +-1."""
        d = self.det
        if d not in (1, -1):
            raise MatrixError(f"determinant {d} is not a unit")
        n = self.n
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [r[:j] + r[j + 1:] for k, r in enumerate(self.rows) if k != i]
                adj[j][i] = (-1) ** (i + j) * (_bareiss_det(minor) if minor else 1)
        return IntMatrix(adj).scale(d)

    def __pow__(self, k: int) -> "IntMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = IntMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def _bareiss_det(rows) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- integer polynomials, coefficient lists low degree first ---------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def poly_divmod(p, d):
    """Division by a monic ``d``; exact over the integers."""
    p = _trim(p)
    d = _trim(d)
    if d[-1] != 1:
        raise ValueError("divisor must be monic")
    q = [0] * max(len(p) - len(d) + 1, 1)
    r = list(p)
    for i in range(len(p) - len(d), -1, -1):
        c = r[i + len(d) - 1]
        q[i] = c
        if c:
            for j, dc in enumerate(d):
                r[i + j] -= c * dc
    return _trim(q), _trim(r[:max(len(d) - 1, 1)])


def charpoly(A: IntMatrix) -> List[int]:
    """Characteristic polynomial det(xI - A) by Faddeev-LeVerrier."""
    n = A.n
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = IntMatrix([[0] * n for _ in range(n)])
    I = IntMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[n - k + 1])
        t = (A @ M).trace()
        if t % k:
            raise AssertionError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = -t // k
    return coeffs


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Tuple[int, ...]:
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = poly_divmod(p, list(cyclotomic(d)))
            assert r == [0]
    return tuple(p)


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def cyclotomic_orders_up_to_degree(deg: int) -> List[int]:
    # totient(n) >= sqrt(n/2), so n <= 2 deg^2 covers every candidate
    return [n for n in range(1, 2 * deg * deg + 3) if _totient(n) <= deg]


def strip_cyclotomic(p) -> Tuple[List[int], List[int]]:
    """Remove all cyclotomic factors; return (orders with multiplicity, rest)."""
    rest = _trim(p)
    orders = []
    for n in cyclotomic_orders_up_to_degree(len(rest) - 1):
        cyc = list(cyclotomic(n))
        while len(rest) >= len(cyc):
            q, r = poly_divmod(rest, cyc)
            if any(r):
                break
            orders.append(n)
            rest = q
    return orders, rest


def _lcm(xs):
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


@dataclass(frozen=True)
class MatrixClass:
    verdict: str                      # FiniteOrder | UnitParabolic | NonUnitEigenvalue
    charpoly: Tuple[int, ...]
    order: Optional[int] = None       # FiniteOrder
    block: Optional[int] = None       # UnitParabolic: nilpotency degree c
    power: Optional[int] = None       # UnitParabolic: certified power N
    factor: Optional[Tuple[int, ...]] = None   # NonUnitEigenvalue
    cyclotomic_orders: Tuple[int, ...] = field(default=())

    @property
    def jordan_block(self) -> int:
        """Largest Jordan block size for unit-modulus cases."""
        if self.verdict == "FiniteOrder":
            return 1
        if self.verdict == "UnitParabolic":
            return self.block
        raise MatrixError("no Jordan block data for non-unit eigenvalues")

    def to_dict(self):
        d = {"verdict": self.verdict, "charpoly": list(self.charpoly)}
        if self.order is not None:
            d["order"] = self.order
        if self.block is not None:
            d["block"] = self.block
            d["power"] = self.power
        if self.factor is not None:
            d["factor"] = list(self.factor)
        return d


def classify_matrix(A: IntMatrix) -> MatrixClass:
    if A.det not in (1, -1):
        raise MatrixError(f"determinant {A.det} is not +-1")
    cp = charpoly(A)
    orders, rest = strip_cyclotomic(cp)
    if len(rest) > 1:
        return MatrixClass("NonUnitEigenvalue", tuple(cp), factor=tuple(rest),
                           cyclotomic_orders=tuple(orders))
    N = _lcm(orders)
    I = IntMatrix.identity(A.n)
    AN = A ** N
    if AN == I:
        n = min(d for d in range(1, N + 1) if N % d == 0 and A ** d == I)
        return MatrixClass("FiniteOrder", tuple(cp), order=n, cyclotomic_orders=tuple(orders))
    nil = AN - I
    c, P = 1, nil
    while not P.is_zero():
        P = P @ nil
        c += 1
    return MatrixClass("UnitParabolic", tuple(cp), block=c, power=N,
                       cyclotomic_orders=tuple(orders))


@dataclass(frozen=True)
class ParabolicForm:
    k: int
    alpha: int
    B: IntMatrix

    def verify(self, A: IntMatrix) -> bool:
        return self.B.inverse() @ (A ** self.k) @ self.B == IntMatrix([[1, self.alpha], [0, 1]])


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def parabolic_normalize(A: IntMatrix, cls: Optional[MatrixClass] = None) -> ParabolicForm:
    """Conjugate a power of a parabolic A in SL(2,Z) to [[1, alpha], [0, 1]]."""
    if A.n != 2:
        raise MatrixError("parabolic_normalize needs a 2x2 matrix")
    if A.det != 1:
        raise MatrixError("parabolic_normalize needs determinant 1")
    cls = cls or classify_matrix(A)
    if cls.verdict != "UnitParabolic":
        raise MatrixError(f"matrix is {cls.verdict}, not parabolic")
    k = cls.power
    N = A ** k - IntMatrix.identity(2)
    a, b = N[0, 0], N[0, 1]
    c = N[1, 0]
    # kernel vector (p, q) of N, made primitive
    if (a, b) != (0, 0):
        p, q = b, -a
    else:
        p, q = a, c
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    _, x, y = ext_gcd(p, q)
    s, r = x, -y        # p s - q r = 1
    B = IntMatrix([[p, r], [q, s]])
    alpha = 2 * a * r * s + b * s * s - c * r * r
    form = ParabolicForm(k, alpha, B)
    if not form.verify(A):
        raise AssertionError("parabolic normal form failed verification")
    return form


# -- GL(2,Z) decomposition into Nielsen generators --------------------------

def _elementary(kind: str, n: int = 0) -> IntMatrix:
    if kind == "T12":
        return IntMatrix([[1, n], [0, 1]])
    if kind == "T21":
        return IntMatrix([[1, 0], [n, 1]])
    if kind == "S":
        return IntMatrix([[0, 1], [1, 0]])
    if kind == "D1":
        return IntMatrix([[-1, 0], [0, 1]])
    if kind == "D2":
        return IntMatrix([[1, 0], [0, -1]])
    raise ValueError(kind)


def decompose_gl2(B: IntMatrix) -> List[Tuple[str, int]]:
    """Write B as a product of elementary factors, left to right."""
    if B.n != 2 or B.det not in (1, -1):
        raise MatrixError("need a 2x2 matrix with determinant +-1")
    M = [list(r) for r in B.rows]
    ops = []  # left multiplications applied to M, in order

    def left(kind, n=0):
        E = _elementary(kind, n)
        nonlocal M
        M = (E @ IntMatrix(M)).tolist()
        ops.append((kind, n))

    while M[0][0] != 0 and M[1][0] != 0:
        if abs(M[0][0]) >= abs(M[1][0]):
            left("T12", -(M[0][0] // M[1][0]))
        else:
            left("T21", -(M[1][0] // M[0][0]))
    if M[0][0] == 0:
        left("S")
    if M[0][0] < 0:
        left("D1")
    if M[1][1] < 0:
        left("D2")
    if M[0][1] != 0:
        left("T12", -M[0][1])
    assert M == [[1, 0], [0, 1]], M
    # B = E_1^-1 E_2^-1 ... E_r^-1
    factors = []
    for kind, n in ops:
        factors.append((kind, -n) if kind in ("T12", "T21") else (kind, 0))
    return factors


def matrix_to_aut_f2(B: IntMatrix, group=None):
    """An automorphism f of F_2 (or of the a,b part of a larger group) with ab(f) = B."""
    from .autos import Automorphism, compose_all
    from .groups import make_group
    G = group or make_group("F2")
    extra = [((g,), (g,)) for g in range(3, G.rank + 1)]

    def nielsen(kind, n):
        a, b = (1,), (2,)
        an = (1,) * n if n >= 0 else (-1,) * (-n)
        bn = (2,) * n if n >= 0 else (-2,) * (-n)
        inv = lambda w: tuple(-x for x in reversed(w))
        if kind == "T12":   # b -> b a^n
            imgs, invs = [a, b + an], [a, b + inv(an)]
        elif kind == "T21":  # a -> a b^n
            imgs, invs = [a + bn, b], [a + inv(bn), b]
        elif kind == "S":
            imgs = invs = [b, a]
        elif kind == "D1":
            imgs = invs = [(-1,), b]
        else:
            imgs = invs = [a, (-2,)]
        imgs = list(imgs) + [e[0] for e in extra]
        invs = list(invs) + [e[1] for e in extra]
        return Automorphism(G, imgs, invs)

    f = compose_all(G, [nielsen(k, n) for k, n in decompose_gl2(B)])
    return f
