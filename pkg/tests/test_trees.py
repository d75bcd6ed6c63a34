import itertools
import random

import pytest

from posetbch.trees import (
    LEAF,
    Tree,
    TreeSyntaxError,
    distance_to_rightmost,
    enumerate_trees,
    graft,
    is_binary,
    leaf_partial_order,
    node,
    parse_tree,
    render_tree,
    subroots,
    to_dot,
)

FIG4 = "(((x,x),x),((x,x),(x,x)))"
FIG6 = "(x1,((x2,x3),(x4,x5)),x6)"


def catalan(k):
    c = [1]
    for m in range(1, k + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[k]


def schroeder_counts(upto):
    # f = x + f^2 / (1 - f) as truncated power series, iterated to a fixed point
    f = [0] * (upto + 1)
    for _ in range(upto + 1):
        sq = [sum(f[i] * f[n - i] for i in range(n + 1)) for n in range(upto + 1)]
        g = [0] * (upto + 1)  # f^2 / (1 - f) = f^2 + f^3 + ...
        power = sq
        while any(power):
            g = [a + b for a, b in zip(g, power)]
            power = [sum(power[i] * f[n - i] for i in range(n + 1)) for n in range(upto + 1)]
        f = [0, 1] + g[2:]
    return f


def brute_subroots(t):
    # components of the rightmost-edge graph; the top vertex of each non-trivial one
    verts = {p: sub for p, sub, _ in t.vertices()}
    parent = {p: p for p in verts}

    def find(p):
        while parent[p] != p:
            p = parent[p]
        return p

    for p, sub in verts.items():
        if sub.children:
            child = p + (len(sub.children) - 1,)
            parent[find(child)] = find(p)
    comps = {}
    for p in verts:
        comps.setdefault(find(p), []).append(p)
    return sorted(min(c, key=len) for c in comps.values() if len(c) >= 2)


def brute_order(t):
    leaves = [(p, first) for p, sub, first in t.vertices() if not sub.children]
    pairs = set()
    for s in subroots(t):
        for p, i in leaves:
            if p[: len(s.subroot)] == s.subroot and i != s.rightmost_leaf:
                pairs.add((i, s.rightmost_leaf))
    return pairs


def all_trees(n):
    return [t for k in range(1, n + 1) for t in enumerate_trees(k)]


class TestParse:
    def test_binary(self):
        t = parse_tree("((b,a),a)")
        assert t.n_leaves == 3
        assert not t.children[0].is_leaf and t.children[1].is_leaf
        assert t.labels() == ("b", "a", "a")

    def test_corolla(self):
        t = parse_tree("(a, b, c)")
        assert len(t.children) == 3 and t.n_leaves == 3

    def test_unary_rejected(self):
        with pytest.raises(TreeSyntaxError):
            parse_tree("(a)")

    @pytest.mark.parametrize("text", ["", "(a,", "(a,b))", "a b", "(a,,b)", "(a;b)"])
    def test_syntax_errors(self, text):
        with pytest.raises(TreeSyntaxError) as exc:
            parse_tree(text)
        assert "position" in str(exc.value)

    @pytest.mark.parametrize("text", ["((b,a),a)", "(a,b,c)", "a1"])
    def test_round_trip(self, text):
        assert render_tree(parse_tree(text)) == text

    def test_round_trip_enumerated(self):
        for t in all_trees(6):
            assert parse_tree(render_tree(t)) == t

    def test_canonical_has_no_spaces(self):
        assert render_tree(parse_tree(" ( a , ( b , c ) ) ")) == "(a,(b,c))"


class TestSubroots:
    def test_figure_example(self):
        t = parse_tree(FIG4)
        info = {s.subroot: s for s in subroots(t)}
        r, a, c, e = (), (0,), (0, 0), (1, 0)
        assert set(info) == {r, a, c, e}
        assert [info[v].rightmost_leaf for v in (a, c, e, r)] == [3, 2, 5, 7]
        assert info[r].distance == 3
        assert info[a].distance == info[c].distance == info[e].distance == 1
        assert sorted(s.rightmost_leaf for s in subroots(t)) == [2, 3, 5, 7]

    def test_distance_of_non_subroots(self):
        t = parse_tree(FIG4)
        assert distance_to_rightmost(t, (1,)) == (7, 2)  # b
        assert distance_to_rightmost(t, ()) == (7, 3)
        assert distance_to_rightmost(t, (1, 1)) == (7, 1)  # f
        assert distance_to_rightmost(t, (0, 0, 0)) == (1, 0)

    def test_invalid_path(self):
        with pytest.raises(ValueError):
            distance_to_rightmost(parse_tree("(a,b)"), (5,))

    def test_single_leaf(self):
        assert subroots(LEAF) == []

    def test_left_comb(self):
        s = subroots(parse_tree("((a,b),c)"))
        assert [(x.subroot, x.rightmost_leaf, x.distance) for x in s] == [((), 3, 1), ((0,), 2, 1)]

    def test_matches_rightmost_edge_scan(self):
        for t in all_trees(7):
            assert [s.subroot for s in subroots(t)] == brute_subroots(t)

    def test_branches_disjoint_and_bijective(self):
        for t in all_trees(8):
            ss = subroots(t)
            flat = [p for s in ss for p in s.branch]
            assert len(flat) == len(set(flat))
            assert all(s.distance == len(s.branch) - 1 >= 1 for s in ss)
            assert len({s.rightmost_leaf for s in ss}) == len(ss)


class TestBinary:
    def test_examples(self):
        t = parse_tree("((b,a),a)")
        assert is_binary(t) and sum(s.distance for s in subroots(t)) == 2
        t = parse_tree("(a,b,c)")
        assert not is_binary(t) and sum(s.distance for s in subroots(t)) == 1
        assert is_binary(LEAF) and subroots(LEAF) == []

    def test_distance_criterion(self):
        for n in range(1, 9):
            for t in enumerate_trees(n):
                total = sum(s.distance for s in subroots(t))
                if is_binary(t):
                    assert total == n - 1
                else:
                    assert total < n - 1


class TestLeafOrder:
    def test_figure_example(self):
        order = leaf_partial_order(parse_tree(FIG6))
        expected = {(i, 6) for i in range(1, 6)} | {(2, 5), (3, 5), (4, 5), (2, 3)}
        assert order.pairs == expected

    def test_right_comb(self):
        assert leaf_partial_order(parse_tree("(a,(b,c))")).pairs == {(1, 3), (2, 3)}

    def test_single_leaf(self):
        assert leaf_partial_order(LEAF).pairs == frozenset()

    def test_definition(self):
        for t in all_trees(6):
            assert leaf_partial_order(t).pairs == brute_order(t)

    def test_partial_order_up_to_7(self):
        for t in all_trees(7):
            order = leaf_partial_order(t)
            reflexive = {(i, i) for i in range(1, t.n_leaves + 1)} | set(order.pairs)
            assert order.closure() == reflexive
            assert all((y, x) not in reflexive for x, y in order.pairs)


class TestEnumerate:
    def test_catalan(self):
        assert [len(enumerate_trees(n, True)) for n in range(1, 7)] == [1, 1, 2, 5, 14, 42]
        for n in range(1, 10):
            assert len(enumerate_trees(n, True)) == catalan(n - 1)

    def test_all_trees_counts(self):
        counts = schroeder_counts(8)
        for n in range(1, 9):
            trees = enumerate_trees(n)
            assert len(trees) == counts[n] == len(set(trees))

    def test_n3(self):
        assert [render_tree(t) for t in enumerate_trees(3)] == ["(*,(*,*))", "((*,*),*)", "(*,*,*)"]

    def test_single_leaf(self):
        assert enumerate_trees(1) == (LEAF,)

    def test_deterministic(self):
        enumerate_trees.cache_clear()
        first = [render_tree(t) for t in enumerate_trees(6)]
        enumerate_trees.cache_clear()
        assert [render_tree(t) for t in enumerate_trees(6)] == first

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            enumerate_trees(0)


class TestGraft:
    def test_identity(self):
        t = parse_tree("((u,v),w)")
        assert graft(Tree(label="x"), 1, t) == t
        assert graft(t, 2, Tree(label="v")) == t

    def test_structural(self):
        assert graft(parse_tree("(x,y)"), 1, parse_tree("(u,v)")) == parse_tree("((u,v),y)")

    def test_invalid_leaf(self):
        with pytest.raises(ValueError):
            graft(parse_tree("(x,y)"), 3, LEAF)

    def test_leaf_count(self):
        rng = random.Random(7)
        pool = all_trees(5)
        for _ in range(200):
            host, scion = rng.choice(pool), rng.choice(pool)
            i = rng.randint(1, host.n_leaves)
            assert graft(host, i, scion).n_leaves == host.n_leaves + scion.n_leaves - 1


def test_dot_marks_subroots():
    dot = to_dot(parse_tree("((b,a),a)"))
    assert dot.startswith("digraph") and dot.count("fillcolor=black") == 2
    assert dot.count("doublecircle") == 2 and dot.count("->") == 4


def test_node_helper():
    assert node(node("b", "a"), "a") == parse_tree("((b,a),a)")
    with pytest.raises(ValueError):
        Tree((LEAF,))
