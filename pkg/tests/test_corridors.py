import random

import pytest
from hypothesis import given, settings, strategies as st

from dehntori.corridors import (NL_ALPHABET, BipartiteMultigraph, CappingGraph, CorridorRecord,
                                CPairing, GraphError, PairingError, corridor_lengths, electro_bound,
                                is_perfect_matching, multiple_of_l_check, one_factor, ql_to_q1,
                                regularize, transfer_pairing)
from dehntori.growth import loglog_slope



def P(text):
    return NL_ALPHABET.parse(text, reduced=False)


def test_lengths_examples():
    assert corridor_lengths(P("c^-1 t^-1 c t a^-1"), CPairing.of([(0, 2)])).lengths == [1]
    assert corridor_lengths(P("a c c^-1 a^-1"), CPairing.of([(1, 2)])).lengths == [0]
    w = P("c t^2 c^-1 t^-1 c t^-1 c^-1")
    assert corridor_lengths(w, CPairing.of([(0, 3), (5, 7)])).lengths == [2, 1]


def test_nested_example_lengths():
    # c t c t c^-1 t^-1 c^-1 t^-1 with the nested pairing: both arcs of each chord give 1
    w = P("c t c t c^-1 t^-1 c^-1 t^-1")
    assert corridor_lengths(w, CPairing.of([(0, 6), (2, 4)])).lengths == [1, 1]


@pytest.mark.parametrize("pairs, msg", [
    ([(0, 2), (1, 3)], "cross"),
    ([(0, 2)], "equal signs"),
    ([(0, 3)], "unpaired"),
])
def test_pairing_errors(pairs, msg):
    w = P("c c^-1 c c^-1") if msg != "equal signs" else P("c t c")
    if msg == "cross":
        w = (2, 2, -2, -2)
    with pytest.raises(PairingError, match=msg):
        corridor_lengths(w, CPairing.of(pairs))


def test_ql_to_q1_examples():
    u, _ = ql_to_q1(P("t a t^-1"), 3)
    assert u == P("t^3 a t^-3")
    u, idx = ql_to_q1(P("c t c^-1"), 1)
    assert u == P("c t c^-1") and idx == [0, 1, 2]
    w = P("c^-1 t^-1 c t a^-1")
    u, idx = ql_to_q1(w, 4)
    assert corridor_lengths(u, transfer_pairing(CPairing.of([(0, 2)]), idx)).lengths == [4]


def test_multiple_of_l_examples():
    rec = [CorridorRecord((0, 3), 8, ((), ()))]
    assert multiple_of_l_check(rec, 4) == (True, {})
    assert multiple_of_l_check(rec, 1)[0]
    bad = [CorridorRecord((0, 3), 2, ((), ()))]
    assert multiple_of_l_check(bad, 4) == (False, {(0, 3): 2})


def test_one_factor_examples():
    g = BipartiteMultigraph(3, 3, [(0, 1), (1, 2), (2, 0)])
    assert one_factor(g) == [0, 1, 2]
    k22 = BipartiteMultigraph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert is_perfect_matching(k22, one_factor(k22, 2))
    multi = BipartiteMultigraph(2, 2, [(0, 0), (0, 0), (0, 1), (1, 1), (1, 1), (1, 0)])
    assert is_perfect_matching(multi, one_factor(multi, 3))
    with pytest.raises(GraphError):
        one_factor(BipartiteMultigraph(2, 2, [(0, 0), (0, 1), (1, 1)]))


def test_text_roundtrip():
    g = BipartiteMultigraph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert BipartiteMultigraph.from_text(g.to_text()) == g


def test_regularize_examples():
    one = CappingGraph([0], 1, [(("b", 0), ("w", 0))])
    R = regularize(one, 1)
    assert R.graph.n_left == 1 and R.graph.n_right == 1 and len(R.graph.edges) == 1
    two = CappingGraph([0], 2, [(("b", 0), ("w", 0)), (("b", 0), ("w", 1))])
    R = regularize(two, 2)
    assert (R.graph.n_left, R.graph.n_right, R.graph.regular_degree()) == (2, 2, 2)
    m = one_factor(R.graph)
    assert set(R.black_pairing(m)) == {0}
    with pytest.raises(GraphError):
        regularize(two, 3)


def test_electro_examples():
    assert electro_bound(0, 0, 0, 1).bound == 0
    assert electro_bound(100, 10, 10, 1).bound == 1200


def _electro_slope(ns):
    return loglog_slope(ns, [electro_bound(n * n, n, n, 1).bound for n in ns])


def test_electro_table_is_asymptotically_cubic():
    # n^3 + 2 n^2: the lower-order term drags the slope down at small n
    assert abs(_electro_slope(range(4, 65)) - 2.896) < 1e-3
    assert abs(_electro_slope([2 ** k for k in range(8, 13)]) - 3) < 0.01


@pytest.mark.xfail(strict=True, reason="n^3 + 2n^2 has log-log slope 2.90 on [4, 64], outside 3 +- 0.1")
def test_electro_slope_on_small_window_as_stated():
    assert abs(_electro_slope(range(4, 65)) - 3) <= 0.1
