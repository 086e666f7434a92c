import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bicrossed.groups import (GroupValidationError, SubgroupEmbedding, cyclic, direct_product, exact_factorizations,
                              from_permutations, parse_group, product_map_is_bijective, serialize_group, subgroups,
                              symmetric)


def brute_subgroups(G):
    """Every subset containing e that is closed under products (exhaustive, |G| <= 8)."""
    out = []
    others = range(1, G.order)
    for r in range(G.order):
        for rest in itertools.combinations(others, r):
            S = {0, *rest}
            if all(G.mul(a, b) in S for a in S for b in S):
                out.append(tuple(sorted(S)))
    return sorted(out, key=lambda e: (len(e), e))


def test_parse_trivial_and_z2():
    G = parse_group({"name": "1", "order": 1, "table": [[0]]})
    assert G.order == 1
    Z2 = parse_group({"name": "Z2", "table": [[0, 1], [1, 0]]})
    assert Z2.order == 2 and Z2.inv(1) == 1


@pytest.mark.parametrize("table, message", [
    ([[0, 1], [1, 1]], "row 1 not a permutation"),
    ([[0, 1], [1]], "not square"),
    ([[1, 0], [0, 1]], "identity law"),
    ([[0, 1, 2], [1, 0, 2], [2, 2, 0]], "permutation"),
    ([[0, 1], [1, 5]], "out of range"),
])
def test_parse_rejects(table, message):
    with pytest.raises(GroupValidationError, match=message):
        parse_group({"table": table})


def test_non_associative_loop_rejected():
    # a Latin square with identity 0 that is not associative (order-5 loop)
    L = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(GroupValidationError, match="not associative at triple"):
        parse_group({"table": L})


def test_round_trip(corpus):
    for G in corpus.values():
        H = parse_group(serialize_group(G))
        assert np.array_equal(H.table, G.table) and H.labels == G.labels
        assert json.loads(serialize_group(H)) == json.loads(serialize_group(G))


def test_inverse_and_identity(corpus):
    for G in corpus.values():
        for g in range(G.order):
            assert G.mul(g, G.inv(g)) == 0 == G.mul(G.inv(g), g)


@pytest.mark.parametrize("name, count", [("Z2", 2), ("Z4", 3), ("S3", 6)])
def test_subgroup_counts(corpus, name, count):
    assert len(subgroups(corpus[name])) == count


@pytest.mark.parametrize("name", ["trivial", "Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8", "Z2^3"])
def test_subgroups_match_exhaustive_search(corpus, name):
    G = corpus[name]
    assert [H.elements for H in subgroups(G)] == brute_subgroups(G)


def test_s3_subgroup_orders(corpus):
    assert sorted(H.order for H in subgroups(corpus["S3"])) == [1, 2, 2, 2, 3, 6]


def test_factorizations_small(corpus):
    assert [(a.elements, b.elements) for a, b in exact_factorizations(corpus["trivial"])] == [((0,), (0,))]
    Z4 = exact_factorizations(corpus["Z4"])
    assert [(a.order, b.order) for a, b in Z4] == [(1, 4), (4, 1)]
    S3 = corpus["S3"]
    pairs = {(tuple(S3.label(x) for x in a.elements), tuple(S3.label(x) for x in b.elements))
             for a, b in exact_factorizations(S3)}
    assert (("e", "(123)", "(132)"), ("e", "(12)")) in pairs
    z3z2 = [p for p in pairs if len(p[0]) == 3]
    assert len(z3z2) == 3 and len(pairs) == 8


@pytest.mark.parametrize("name", ["Z2xZ2", "S3", "D4", "Q8", "Z2^3"])
def test_factorizations_exhaustive(corpus, name):
    G = corpus[name]
    subs = subgroups(G)
    expected = []
    for H, K in itertools.product(subs, repeat=2):
        if len({G.mul(h, k) for h in H.elements for k in K.elements}) == G.order == H.order * K.order:
            expected.append((H.elements, K.elements))
    got = [(H.elements, K.elements) for H, K in exact_factorizations(G)]
    assert got == expected
    for H, K in exact_factorizations(G):
        assert product_map_is_bijective(H, K)


def test_q8_has_no_proper_factorization(corpus):
    assert all(a.order in (1, 8) for a, _ in exact_factorizations(corpus["Q8"]))


def test_subgroup_closure_rejected():
    S3 = symmetric(3)
    with pytest.raises(GroupValidationError):
        SubgroupEmbedding(S3, [0, S3.labels.index("(12)"), S3.labels.index("(23)")])


def test_s4_order_and_subgroup_count(corpus):
    assert corpus["S4"].order == 24
    assert len(subgroups(corpus["S4"])) == 30


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_products_of_cyclic_groups_are_groups(ns):
    G = cyclic(ns[0])
    for n in ns[1:]:
        G = direct_product(G, cyclic(n))
    H = parse_group(G.to_document())
    assert H.order == np.prod(ns)
    assert H.is_abelian()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.permutations(range(4)), min_size=1, max_size=2))
def test_permutation_groups_validate(gens):
    G = from_permutations([tuple(p) for p in gens])
    parse_group(G.to_document())
    assert 24 % G.order == 0
