"""Fixtures built by construction, each tagged with its expected class."""

import random
from functools import lru_cache

from dehntori.autos import Automorphism, identity, inner, lift
from dehntori.groups import make_group
from dehntori.intmat import IntMatrix, matrix_to_aut_f2
from dehntori.normalize import z2_matrix_aut
from dehntori.words import inverse, reduce

FINITE_2X2 = [IntMatrix(m) for m in ([[1, 0], [0, 1]], [[-1, 0], [0, -1]], [[0, -1], [1, 0]],
                                     [[0, -1], [1, -1]], [[1, -1], [1, 0]], [[0, 1], [1, 0]],
                                     [[1, 0], [0, -1]])]
HYPERBOLIC_2X2 = [IntMatrix(m) for m in ([[2, 1], [1, 1]], [[1, 1], [1, 2]], [[3, 1], [2, 1]],
                                         [[1, 1], [1, 0]], [[0, 1], [1, 3]], [[-2, 1], [1, -1]])]


def pw(g, e):
    return (g,) * e if e >= 0 else (-g,) * (-e)


def random_gl2(rng, steps=3, bound=2):
    M = IntMatrix.identity(2)
    for _ in range(steps):
        n = rng.choice([x for x in range(-bound, bound + 1) if x])
        E = IntMatrix([[1, n], [0, 1]]) if rng.random() < 0.5 else IntMatrix([[1, 0], [n, 1]])
        M = M @ E
    if rng.random() < 0.3:
        M = M @ IntMatrix([[0, 1], [1, 0]])
    return M


def parabolic_2x2(rng):
    k = rng.choice([-3, -2, -1, 1, 2, 3])
    M = IntMatrix([[1, 0], [k, 1]])
    if rng.random() < 0.3:
        M = M.scale(-1)
    P = random_gl2(rng, 2, 1)
    return P @ M @ P.inverse()


def random_word(rng, gens, length):
    return reduce(rng.choice(gens) * rng.choice((1, -1)) for _ in range(length))


def conj(Xi, F):
    return F.inverse().compose(Xi).compose(F)


# -- F2 x Z ---------------------------------------------------------------------

def f2xz_c_twist(G, p, q, flip=False):
    c = 3
    s = -1 if flip else 1
    return Automorphism(G, [(1,) + pw(c, p), (2,) + pw(c, q), (s * c,)],
                        [(1,) + pw(c, -p * s), (2,) + pw(c, -q * s), (s * c,)])


def random_aut_f2xz(rng, G):
    F = matrix_to_aut_f2(random_gl2(rng), G)
    T = f2xz_c_twist(G, rng.randint(-2, 2), rng.randint(-2, 2), flip=rng.random() < 0.2)
    return F.compose(T)


@lru_cache(maxsize=None)
def f2xz_fixtures(seed=0, count=24):
    """(Psi, expected kind, case) triples over F2 x Z."""
    rng = random.Random(seed)
    G = make_group("F2xZ")
    base = []
    for beta in (1, -1, 2, 3):
        for ka, kb in ((0, 1), (2, -1), (1, 0), (-2, 0)):
            Xi = Automorphism(G, [(1,) + pw(2, beta) + pw(3, ka), (2,) + pw(3, kb), (3,)],
                              [(1,) + pw(2, -beta) + pw(3, beta * kb - ka), (2,) + pw(3, -kb), (3,)])
            base.append((Xi, "Cubic" if kb else "Quadratic", "parabolic"))
    for ka, kb in ((0, 0), (1, 0), (0, -2), (3, 1)):
        base.append((f2xz_c_twist(G, ka, kb), "Cubic" if (ka, kb) != (0, 0) else "Quadratic", "finite"))
    for p, q in ((0, 0), (1, -1), (1, 0), (2, 3)):
        # swap base: the square is a -> a c^(p+q), b -> b c^(p+q)
        Xi = Automorphism(G, [(2,) + pw(3, p), (1,) + pw(3, q), (3,)],
                          [(2,) + pw(3, -q), (1,) + pw(3, -p), (3,)])
        base.append((Xi, "Cubic" if p + q else "Quadratic", "finite-order-2"))
    for p, q in ((0, 0), (1, 2), (-1, 3)):
        # order-4 base: the fourth power is the identity
        Xi = Automorphism(G, [(2,) + pw(3, p), (-1,) + pw(3, q), (3,)],
                          [(-2,) + pw(3, q), (1,) + pw(3, -p), (3,)])
        base.append((Xi, "Quadratic", "finite-order-4"))
    for M in HYPERBOLIC_2X2:
        f = matrix_to_aut_f2(M, G)
        Xi = f2xz_c_twist(G, rng.randint(-2, 2), rng.randint(-2, 2)).compose(f)
        base.append((Xi, "Quadratic", "non-unit"))
    out = []
    for i in range(max(count, len(base))):
        Xi, kind, case = base[i % len(base)]
        if i >= len(base) or i % 3:
            Xi = conj(Xi, random_aut_f2xz(rng, G))
            Xi = inner(G, random_word(rng, [1, 2, 3], 4)).compose(Xi)
        out.append((Xi, kind, case))
    return out


# -- Z^2 * Z ----------------------------------------------------------------------

def z2_c_map(G, M, x, y):
    F = z2_matrix_aut(G, M)
    z = pw(1, x) + pw(2, y)
    return Automorphism(G, [F.images[0], F.images[1], (3,) + z],
                        [F.inverse_images[0], F.inverse_images[1], (3,) + F.apply_inverse(inverse(z))])


def random_aut_z2(rng, G):
    F = z2_matrix_aut(G, random_gl2(rng))
    g = pw(1, rng.randint(-2, 2)) + pw(2, rng.randint(-2, 2))
    partial = Automorphism(G, [(1,), (2,), inverse(g) + (3,) + g], [(1,), (2,), g + (3,) + inverse(g)])
    out = F.compose(partial)
    if rng.random() < 0.3:
        out = out.compose(Automorphism(G, [(1,), (2,), (-3,)], [(1,), (2,), (-3,)]))
    return out


@lru_cache(maxsize=None)
def z2astz_fixtures(seed=1, count=24):
    rng = random.Random(seed)
    G = make_group("Z2astZ")
    base = []
    for M in FINITE_2X2:
        base.append((z2_c_map(G, M, rng.randint(-2, 2), rng.randint(-2, 2)), "Quadratic", "finite"))
    for M in HYPERBOLIC_2X2:
        base.append((z2_c_map(G, M, rng.randint(-2, 2), rng.randint(-2, 2)), "Exponential", "non-unit"))
    for _ in range(7):
        base.append((z2_c_map(G, parabolic_2x2(rng), rng.randint(-2, 2), rng.randint(-2, 2)),
                     "Cubic", "parabolic"))
    out = []
    for i in range(max(count, len(base))):
        Xi, kind, case = base[i % len(base)]
        if i >= len(base) or i % 2:
            Xi = conj(Xi, random_aut_z2(rng, G))
            Xi = inner(G, random_word(rng, [1, 2, 3], 4)).compose(Xi)
        out.append((Xi, kind, case))
    return out


# -- F2 x F2 --------------------------------------------------------------------------

def _factor(M, G, offset):
    F2 = make_group("F2")
    return lift(matrix_to_aut_f2(M, F2), G, offset)


def _growth_kind(M):
    from dehntori.intmat import classify_matrix
    return {"FiniteOrder": "P", "UnitParabolic": "L", "NonUnitEigenvalue": "E"}[classify_matrix(M).verdict]


def _expected(k1, k2):
    if "P" in (k1, k2):
        return "Quadratic"
    if (k1, k2) == ("E", "E"):
        return "Exponential"
    return "Cubic"


@lru_cache(maxsize=None)
def f2xf2_fixtures(seed=2, count=24):
    rng = random.Random(seed)
    G = make_group("FkxFl", 2, 2)
    pool = FINITE_2X2[:4] + HYPERBOLIC_2X2[:3] + [parabolic_2x2(rng) for _ in range(3)]
    swap = Automorphism(G, [(3,), (4,), (1,), (2,)], [(3,), (4,), (1,), (2,)])
    out = []
    while len(out) < count:
        M1, M2 = rng.choice(pool), rng.choice(pool)
        if rng.random() < 0.2:
            # swapped product with identity second factor: the square is phi1 x phi1
            Xi = swap.compose(_factor(M1, G, 0))
            kind = _expected(_growth_kind(M1), _growth_kind(M1))
            case = "swap"
        else:
            Xi = _factor(M1, G, 0).compose(_factor(M2, G, 2))
            kind = _expected(_growth_kind(M1), _growth_kind(M2))
            case = "product"
        F = _factor(random_gl2(rng), G, 0).compose(_factor(random_gl2(rng), G, 2))
        Xi = inner(G, random_word(rng, [1, 2, 3, 4], 4)).compose(conj(Xi, F))
        out.append((Xi, kind, case))
    return out


# -- Z^k -------------------------------------------------------------------------------

def _block_diag(blocks):
    n = sum(b.n for b in blocks)
    rows = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[o + i][o + j] = b[i, j]
        o += b.n
    return IntMatrix(rows)


def _jordan(c, sign=1):
    return IntMatrix([[sign if i == j else (1 if j == i + 1 else 0) for j in range(c)] for i in range(c)])


def random_unimodular(rng, n, steps=6):
    M = IntMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        rows[i][j] = rng.choice((-1, 1))
        M = M @ IntMatrix(rows)
    return M


@lru_cache(maxsize=None)
def zk_fixtures(seed=3, count=24):
    """(matrix, expected kind, degree)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        if rng.random() < 0.25 and n >= 2:
            blocks = [HYPERBOLIC_2X2[rng.randrange(len(HYPERBOLIC_2X2))]]
            if n > 2:
                blocks.append(_jordan(n - 2, rng.choice((1, -1))))
            kind, deg = "Exponential", None
        else:
            sizes, left = [], n
            while left:
                s = rng.randint(1, left)
                sizes.append(s)
                left -= s
            blocks = [_jordan(s, rng.choice((1, -1))) for s in sizes]
            c = max(sizes)
            deg = c + 1
            kind = {2: "Quadratic", 3: "Cubic"}.get(deg, "Polynomial")
        A = _block_diag(blocks)
        P = random_unimodular(rng, A.n)
        out.append((P @ A @ P.inverse(), kind, deg))
    return out


# -- growth fixtures --------------------------------------------------------------------

def stacked_transvection_f3():
    """a -> a, b -> b a, c -> c b: quadratic growth on F3."""
    F3 = make_group("Fk", 3)
    return Automorphism(F3, [(1,), (2, 1), (3, 2)], [(1,), (2, -1), (3, 1, -2)])


def n4_product():
    """The stacked transvection on both factors of F3 x F3."""
    G = make_group("FkxFl", 3, 3)
    phi = stacked_transvection_f3()
    return lift(phi, G, 0).compose(lift(phi, G, 3)), phi


def exponential_pair():
    """phi1 has positive inverse (a -> ab, b -> a); phi2 = (a -> ab, b -> a)."""
    F2 = make_group("F2")
    phi1 = Automorphism(F2, [(2,), (-2, 1)], [(1, 2), (1,)])
    phi2 = Automorphism(F2, [(1, 2), (1,)], [(2,), (-2, 1)])
    return phi1, phi2


def transvection_f2():
    F2 = make_group("F2")
    return Automorphism(F2, [(1, 2), (2,)], [(1, -2), (2,)])
