import numpy as np
import pytest

from bicrossed.fixtures import d4_pair, s3_pair, s4_pair
from bicrossed.groups import SubgroupEmbedding, exact_factorizations
from bicrossed.matched import (MatchedPairError, action_properties, decompose, from_factorization, parse_matched_pair,
                               verify_identities, with_corrupted_alpha)


def brute_actions(mp):
    """alpha, beta by searching all (a, b) in G2 x G1 with a b = g s in G."""
    G = mp.G
    alpha = np.zeros((mp.n1, mp.n2), dtype=int)
    beta = np.zeros((mp.n2, mp.n1), dtype=int)
    for g, x in enumerate(mp.G1.elements):
        for s, y in enumerate(mp.G2.elements):
            target = G.mul(x, y)
            hits = [(a, b) for a, ya in enumerate(mp.G2.elements) for b, xb in enumerate(mp.G1.elements)
                    if G.mul(ya, xb) == target]
            assert len(hits) == 1
            alpha[g, s], beta[s, g] = hits[0]
    return alpha, beta


def test_identities_on_corpus(corpus_pairs):
    for name, mp in corpus_pairs:
        assert verify_identities(mp) == [], name


def test_actions_match_exhaustive_search(corpus_pairs):
    for name, mp in corpus_pairs:
        a, b = brute_actions(mp)
        assert np.array_equal(a, mp.alpha) and np.array_equal(b, mp.beta), name


def test_unit_laws_and_bijectivity(corpus_pairs):
    for _, mp in corpus_pairs:
        assert all(mp.a(g, 0) == 0 for g in range(mp.n1))
        assert all(mp.a(0, s) == s for s in range(mp.n2))
        assert all(mp.b(s, 0) == 0 for s in range(mp.n2))
        assert all(mp.b(0, g) == g for g in range(mp.n1))
        for s in range(mp.n2):
            assert sorted(mp.beta[s]) == list(range(mp.n1))
        for g in range(mp.n1):
            assert sorted(mp.alpha[g]) == list(range(mp.n2))


def test_decompose_inverts_product(corpus_pairs):
    for _, mp in corpus_pairs:
        G = mp.G
        for g, x in enumerate(mp.G1.elements):
            for s, y in enumerate(mp.G2.elements):
                assert decompose(mp, G.mul(x, y)) == (g, s)
        assert decompose(mp, 0) == (0, 0)


def test_decompose_s3_transposition():
    mp = s3_pair()
    G = mp.G
    x = G.labels.index("(23)")
    g, s = decompose(mp, x)
    assert G.mul(mp.G1.elements[g], mp.G2.elements[s]) == x
    hits = [(g2, s2) for g2 in range(3) for s2 in range(2)
            if G.mul(mp.G1.elements[g2], mp.G2.elements[s2]) == x]
    assert hits == [(g, s)]


def test_s3_semidirect_actions():
    props = action_properties(s3_pair())
    assert props["alpha_trivial"] and not props["beta_trivial"]
    mp = s3_pair()
    G = mp.G
    # beta_s(g) is conjugation by s inside the normal subgroup G1
    for s, y in enumerate(mp.G2.elements):
        for g, x in enumerate(mp.G1.elements):
            conj = G.mul(G.mul(y, x), G.inv(y))
            assert mp.G1.elements[mp.b(s, g)] == conj


def test_s4_pair_both_actions_nontrivial():
    mp = s4_pair()
    props = action_properties(mp)
    assert not props["alpha_trivial"] and not props["beta_trivial"]
    assert verify_identities(mp) == []


def test_normal_subgroups_give_trivial_actions(corpus_pairs):
    for name, mp in corpus_pairs:
        props = action_properties(mp)
        if mp.G1.is_normal():
            assert props["alpha_trivial"], name
        if mp.G2.is_normal():
            assert props["beta_trivial"], name


def test_beta_never_free(corpus_pairs):
    for _, mp in corpus_pairs:
        if mp.n1 > 1 and mp.n2 > 1:
            assert not action_properties(mp)["beta_free"]


def test_trivial_g2_gives_trivial_alpha(corpus):
    G = corpus["D4"]
    for G1, G2 in exact_factorizations(G):
        if G2.order == 1:
            assert action_properties(from_factorization(G, G1, G2))["alpha_trivial"]


def test_corruption_detected():
    mp = d4_pair()
    bad = with_corrupted_alpha(mp, 1, 1, 0)
    report = verify_identities(bad)
    assert report
    assert any(w["witness"].get("g") == 1 or w["witness"].get("s") == 1 for w in report)


def test_rejects_non_factorizations(corpus):
    G = corpus["S3"]
    A = SubgroupEmbedding(G, [0, G.labels.index("(12)")])
    with pytest.raises(MatchedPairError):
        from_factorization(G, A, A)
    with pytest.raises(MatchedPairError):
        from_factorization(G, A, SubgroupEmbedding(G, [0, G.labels.index("(13)")]))


def test_parse_round_trip():
    mp = d4_pair()
    mp2 = parse_matched_pair(mp.to_document())
    assert np.array_equal(mp2.alpha, mp.alpha) and np.array_equal(mp2.beta, mp.beta)
