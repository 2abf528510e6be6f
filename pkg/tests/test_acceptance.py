"""
Acceptance criteria 1 to 8.  Each test records one PASS/FAIL line, printed in
the pytest terminal summary (and directly when run as a script).
"""

import random
import time

import numpy as np
import pytest
import sympy

import conftest
from builders import (exponential_pair, f2xf2_fixtures, f2xz_fixtures, n4_product, random_word,
                      stacked_transvection_f3, transvection_f2, z2astz_fixtures, zk_fixtures)
from dehntori.autos import Automorphism, identity, inner, lift
from dehntori.certify import (MappingTorus, WitnessBounds, area_oracle, presentation,
                              random_identity_word, shuffle_growth_constant, t_shuffle)
from dehntori.classify import classify, classify_fkxfl, classify_zk
from dehntori.corridors import (BipartiteMultigraph, CappingGraph, CPairing, corridor_lengths,
                                is_perfect_matching, multiple_of_l_check, one_factor, ql_to_q1,
                                regularize, transfer_pairing)
from dehntori.groups import make_group
from dehntori.growth import loglog_slope
from dehntori.intmat import IntMatrix, charpoly, classify_matrix, parabolic_normalize
from dehntori.normalize import decompose_fkxfl
from dehntori.words import commutator, exponent_sum


def record(key, ok, detail):
    conftest.RESULTS[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _key(r):
    return (r.kind, r.degree if r.kind not in ("Exponential", "Bracket") else None)


# -- 1. theorem-case battery ------------------------------------------------------------

def paper_examples():
    """(Psi, expected kind) for every example quoted with a classification."""
    F2, G, Z = make_group("F2"), make_group("F2xZ"), make_group("Z2astZ")
    P = make_group("FkxFl", 2, 2)
    t, fib = transvection_f2(), Automorphism(F2, ["a b", "a"], ["b", "b^-1 a"])
    return [
        (identity(F2), "Quadratic"),
        (fib, "Quadratic"),
        (Automorphism(G, ["a b c", "b c", "c"], ["a b^-1", "b c^-1", "c"]), "Cubic"),
        (Automorphism(G, ["a b c^5", "b", "c"], ["a b^-1 c^-5", "b", "c"]), "Quadratic"),
        (Automorphism(G, ["a b", "a", "c"], ["b", "b^-1 a", "c"]), "Quadratic"),
        (Automorphism(Z, ["a", "b", "c a"], ["a", "b", "c a^-1"]), "Quadratic"),
        (Automorphism(Z, ["a^2 b", "a b", "c"], ["a b^-1", "a^-1 b^2", "c"]), "Exponential"),
        (Automorphism(Z, ["a b", "b", "c"], ["a b^-1", "b", "c"]), "Cubic"),
        (identity(P), "Quadratic"),
        (lift(t, P, 0).compose(lift(t, P, 2)), "Cubic"),
        (lift(fib, P, 0).compose(lift(fib, P, 2)), "Exponential"),
    ]


def test_criterion_1_battery():
    t0 = time.time()
    counts, wrong = {}, []
    for name, fx in (("F2xZ", f2xz_fixtures()), ("Z2astZ", z2astz_fixtures()),
                     ("F2xF2", f2xf2_fixtures())):
        counts[name] = len(fx)
        for Psi, kind, case in fx:
            got = classify(Psi).kind
            if got != kind:
                wrong.append((name, case, kind, got))
    zk = zk_fixtures()
    counts["Zk"] = len(zk)
    for A, kind, deg in zk:
        r = classify_zk(A)
        if _key(r) != (kind, deg if kind != "Exponential" else None):
            wrong.append(("Zk", A, kind, r.label))
    paper = paper_examples()
    for Psi, kind in paper:
        if classify(Psi).kind != kind:
            wrong.append(("paper", Psi.format(), kind))
    elapsed = time.time() - t0
    ok = not wrong and min(counts.values()) >= 20 and elapsed < 10
    record(1, ok, f"{counts} + {len(paper)} quoted examples, {len(wrong)} wrong, {elapsed:.1f}s")


# -- 2. invariance ---------------------------------------------------------------------------

def test_criterion_2_invariance():
    rng = random.Random(20)
    bad, per_kind = [], {}
    for name, fx, gens in (("F2xZ", f2xz_fixtures(), [1, 2, 3]), ("Z2astZ", z2astz_fixtures(), [1, 2, 3]),
                           ("F2xF2", f2xf2_fixtures(), [1, 2, 3, 4])):
        per_kind[name] = 0
        for _ in range(50):
            Psi = rng.choice(fx)[0]
            base = _key(classify(Psi))
            h = random_word(rng, gens, rng.randint(1, 6))
            for label, X in (("square", Psi.power(2)), ("inverse", Psi.inverse()),
                             ("inner", inner(Psi.group, h).compose(Psi))):
                if _key(classify(X)) != base:
                    bad.append((name, label, Psi.format()))
            per_kind[name] += 1
    zk = zk_fixtures()
    per_kind["Zk"] = 0
    for _ in range(50):
        A = rng.choice(zk)[0]
        base = _key(classify_zk(A))
        for X in (A @ A, A.inverse()):
            if _key(classify_zk(X)) != base:
                bad.append(("Zk", A))
        per_kind["Zk"] += 1
    record(2, not bad, f"pairs per kind {per_kind}, {len(bad)} disagreements")


# -- 3. witness asymptotics ------------------------------------------------------------------

NS = [8, 16, 32, 64]


def test_criterion_3_witness_asymptotics():
    t = transvection_f2()
    P = make_group("FkxFl", 2, 2)
    dec = decompose_fkxfl(lift(t, P, 0).compose(lift(t, P, 2)))
    wb = WitnessBounds(dec.phi1, dec.phi2, (1,), (1,))
    cubic = [wb(n).total for n in NS]
    s3 = loglog_slope(NS, cubic)

    Psi4, _ = n4_product()
    dec4 = decompose_fkxfl(Psi4)
    wb4 = WitnessBounds(dec4.phi1, dec4.phi2, (3,), (3,))
    quartic = [wb4(n).total for n in NS]
    s4 = loglog_slope(NS, quartic)
    heuristic = classify_fkxfl(Psi4).heuristic

    phi1, phi2 = exponential_pair()
    wbe = WitnessBounds(phi1, phi2, (1,), (1,))
    exp_vals = [wbe(n).total for n in NS]
    ratios = [b / a for a, b in zip(exp_vals, exp_vals[1:])]
    increasing = all(r2 > r1 for r1, r2 in zip(ratios, ratios[1:])) and ratios[0] > 2 ** 4

    ok = abs(s3 - 3) <= 0.1 and abs(s4 - 4) <= 0.2 and heuristic and increasing
    record(3, ok, f"cubic slope {s3:.3f}, n^4 slope {s4:.3f} (heuristic={heuristic}), "
                  f"exponential doubling ratios {[f'{r:.3g}' for r in ratios]}")


# -- 4. oracle ground truth ---------------------------------------------------------------------

def test_criterion_4_oracle():
    Z2 = presentation("Z2")
    cases = [((1, -1), 0), (commutator((1,), (2,)), 1), (commutator((1, 1), (2, 2)), 4),
             (commutator((1, 1, 1), (2, 2, 2)), 9)]
    details, ok = [], True
    for w, expect in cases:
        t0 = time.time()
        r = area_oracle(w, Z2)
        dt = time.time() - t0
        ok &= r.exact and r.area == expect and dt < 5
        details.append(f"{Z2.alphabet.format(w)}={r.area} ({dt:.2f}s)")
    record(4, ok, ", ".join(details))


# -- 5. corridor arithmetic ----------------------------------------------------------------------

def random_corridor_fixture(rng, depth=0):
    """Random boundary word over a, c, t with a non-crossing, sign-opposed c-pairing."""
    A, C, T = 1, 2, 3
    word, pairs = [], []

    def emit(d):
        for _ in range(rng.randint(1, 4)):
            r = rng.random()
            if r < 0.3 and d < 3:
                e = rng.choice((1, -1))
                start = len(word)
                word.append(C * e)
                emit(d + 1)
                pairs.append((start, len(word)))
                word.append(-C * e)
            elif r < 0.65:
                word.extend([T * rng.choice((1, -1))] * rng.randint(1, 3))
            else:
                word.append(A * rng.choice((1, -1)))

    emit(0)
    s = exponent_sum(word, T)
    word.extend([-T if s > 0 else T] * abs(s))
    return tuple(word), CPairing.of(pairs)


def test_criterion_5_corridors():
    rng = random.Random(5)
    bad, n_corr = [], 0
    fixtures = 0
    while fixtures < 100:
        w, P = random_corridor_fixture(rng)
        if not P.pairs:
            continue
        fixtures += 1
        rep = corridor_lengths(w, P)
        for rec in rep.records:
            i, j = rec.pair
            inner_sum = exponent_sum(w[i + 1:j], 3)
            outer_sum = exponent_sum(w[j + 1:] + w[:i], 3)
            if not (rec.length == abs(inner_sum) == abs(outer_sum)):
                bad.append(("arc", w, rec))
        if any(len(v) > len(w) for v in rep.regions):
            bad.append(("region", w))
        l = rng.randint(1, 5)
        u, idx = ql_to_q1(w, l)
        rep_l = corridor_lengths(u, transfer_pairing(P, idx))
        if rep_l.lengths != [l * x for x in rep.lengths] or not multiple_of_l_check(rep_l.records, l)[0]:
            bad.append(("transfer", w, l))
        n_corr += len(rep.records)
    record(5, not bad, f"100 fixtures, {n_corr} corridors, {len(bad)} violations")


# -- 6. matchings ----------------------------------------------------------------------------------

def random_regular(rng):
    d = rng.randint(1, 5)
    n = rng.randint(1, 20)
    edges = []
    for _ in range(d):
        perm = list(range(n))
        rng.shuffle(perm)
        edges += [(i, perm[i]) for i in range(n)]
    rng.shuffle(edges)
    return BipartiteMultigraph(n, n, edges), d


def random_capping_graph(rng):
    beta = rng.choice([-3, -2, -1, 1, 2, 3, 4])
    k = abs(beta)
    sides = [rng.randint(0, 1) for _ in range(rng.randint(1, 6))]
    spare = [k] * len(sides)
    edges = []
    for _ in range(3 * len(sides)):
        i, j = rng.randrange(len(sides)), rng.randrange(len(sides))
        if sides[i] != sides[j] and spare[i] and spare[j]:
            edges.append((("b", i), ("b", j)))
            spare[i] -= 1
            spare[j] -= 1
    n_white = 0
    for i, s in enumerate(spare):
        for _ in range(s):
            edges.append((("b", i), ("w", n_white)))
            n_white += 1
    return CappingGraph(sides, n_white, edges), beta


def test_criterion_6_matching():
    rng = random.Random(6)
    bad = []
    for _ in range(200):
        G, d = random_regular(rng)
        m = one_factor(G, d)
        if not is_perfect_matching(G, m):
            bad.append(("matching", G))
    for _ in range(200):
        cg, beta = random_capping_graph(rng)
        R = regularize(cg, beta)
        if R.graph.regular_degree() != abs(beta):
            bad.append(("audit", cg))
        m = one_factor(R.graph)
        if set(R.black_pairing(m, copy=1)) != set(range(len(cg.black_sides))):
            bad.append(("restriction", cg))
    record(6, not bad, f"200 regular multigraphs, 200 regularized capping graphs, {len(bad)} failures")


# -- 7. matrix classification ---------------------------------------------------------------------------

def random_elementary_product(rng):
    n = rng.randint(2, 4)
    M = IntMatrix.identity(n)
    for _ in range(rng.randint(1, 7)):
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        kind = rng.random()
        i, j = rng.sample(range(n), 2)
        if kind < 0.6:
            rows[i][j] = rng.choice((-1, 1))
        elif kind < 0.8:
            rows[i][i] = -1
        else:
            rows[i], rows[j] = rows[j], rows[i]
        M = M @ IntMatrix(rows)
    return M


def float_unit_moduli(A):
    """Float eigenvalue moduli of the distinct eigenvalues (squarefree part of the char poly)."""
    x = sympy.Symbol("x")
    cp = charpoly(A)
    p = sympy.Poly(list(reversed(cp)), x)
    sqf = p.sqf_part()
    roots = np.roots([float(c) for c in sqf.all_coeffs()])
    return np.abs(roots)


def test_criterion_7_matrices():
    rng = random.Random(7)
    bad, tally, n_para = [], {}, 0
    for _ in range(500):
        A = random_elementary_product(rng)
        mc = classify_matrix(A)
        tally[mc.verdict] = tally.get(mc.verdict, 0) + 1
        mods = float_unit_moduli(A)
        on_circle = bool(np.all(np.abs(mods - 1) <= 1e-6))
        if on_circle != (mc.verdict != "NonUnitEigenvalue"):
            bad.append(("verdict", A.tolist(), mc.verdict, mods))
        if A.n == 2 and mc.verdict == "UnitParabolic":
            n_para += 1
            pf = parabolic_normalize(A, mc)
            if not pf.verify(A):
                bad.append(("parabolic", A.tolist()))
    record(7, not bad, f"500 matrices {tally}, {n_para} parabolic 2x2 normalized, {len(bad)} failures")


# -- 8. shuffle bounds ----------------------------------------------------------------------------------------

def shuffle_fixtures():
    """(name, automorphism, basis growth degree or None)."""
    F2, G, Z = make_group("F2"), make_group("F2xZ"), make_group("Z2astZ")
    phi1, phi2 = exponential_pair()
    return [
        ("F2 identity", identity(F2), 0),
        ("F2 transvection", transvection_f2(), 1),
        ("F2xZ a->abc b->bc", Automorphism(G, ["a b c", "b c", "c"], ["a b^-1", "b c^-1", "c"]), 1),
        ("Z2*Z a->ab", Automorphism(Z, ["a b", "b", "c"], ["a b^-1", "b", "c"]), 1),
        ("F3 stacked", stacked_transvection_f3(), 2),
        ("F2 exponential", phi2, None),
        ("F2 exponential inverse-positive", phi1, None),
    ]


def test_criterion_8_shuffle():
    rng = random.Random(8)
    bad, report = [], []
    for name, phi, d in shuffle_fixtures():
        M = MappingTorus(phi)
        worst, K_fit = 0.0, 0.0
        for _ in range(40):
            w = random_identity_word(M, rng, max_len=40, n_relators=rng.randint(1, 4),
                                     conj_len=rng.randint(1, 6))
            n = len(w)
            cert = t_shuffle(w, M)
            if cert.relator_count > cert.crude_bound:
                bad.append(("crude", name, cert.relator_count, cert.crude_bound))
            if d is not None:
                K = shuffle_growth_constant(phi, n, d)
                K_fit = max(K_fit, K)
                if cert.relator_count > K * n ** (d + 2):
                    bad.append(("poly", name, cert.relator_count, K * n ** (d + 2)))
                worst = max(worst, cert.relator_count / n ** (d + 2))
        if d is not None:
            report.append(f"{name}: d={d} K={K_fit:g} max count/n^(d+2)={worst:.3g}")
    record(8, not bad, "; ".join(report) + f"; {len(bad)} violations")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
