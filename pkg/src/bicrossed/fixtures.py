"""Named matched pairs, cocycles, Lie data and schedules used by the tests and the CLI."""
from __future__ import annotations

import json
import os

from . import lie
from .cocycles import extension_group
from .groups import FiniteGroup, SubgroupEmbedding, dihedral, exact_factorizations, standard_corpus, symmetric
from .matched import MatchedPair, from_factorization


def _pair(G: FiniteGroup, g1_labels, g2_labels) -> MatchedPair:
    G1 = SubgroupEmbedding(G, [G.labels.index(x) for x in g1_labels])
    G2 = SubgroupEmbedding(G, [G.labels.index(x) for x in g2_labels])
    return from_factorization(G, G1, G2)


def s3_pair() -> MatchedPair:
    """Z3 . Z2 inside S3."""
    return _pair(standard_corpus()["S3"], ["e", "(123)", "(132)"], ["e", "(12)"])


def d4_pair() -> MatchedPair:
    """Z2 x Z2 . Z2 inside D4 (symmetries of the square 1234)."""
    return _pair(dihedral(4), ["e", "(13)(24)", "(12)(34)", "(14)(23)"], ["e", "(13)"])


def d4_z4_pair() -> MatchedPair:
    """Z4 . Z2 inside D4."""
    return _pair(dihedral(4), ["e", "(1234)", "(13)(24)", "(1432)"], ["e", "(13)"])


def s4_pair() -> MatchedPair:
    """<(1234)> . S3 inside S4."""
    return _pair(symmetric(4), ["e", "(1234)", "(13)(24)", "(1432)"],
                 ["e", "(12)", "(132)", "(23)", "(13)", "(123)"])


NAMED_PAIRS = {"s3_pair": s3_pair, "d4_pair": d4_pair, "d4_z4_pair": d4_z4_pair, "s4_pair": s4_pair}


def pair_name(group_name: str, mp: MatchedPair) -> str:
    return f"{group_name}[{','.join(map(str, mp.G1.elements))}|{','.join(map(str, mp.G2.elements))}]"


def corpus_pairs() -> list[tuple[str, MatchedPair]]:
    """Every exact factorization of every corpus group of order <= 16, then the S4 pair."""
    out = []
    for name, G in standard_corpus().items():
        if G.order > 16:
            continue
        for G1, G2 in exact_factorizations(G):
            mp = from_factorization(G, G1, G2)
            out.append((pair_name(name, mp), mp))
    mp = s4_pair()
    out.append((pair_name("S4", mp), mp))
    return out


def nontrivial_d4_cocycle(N: int = 2):
    """First class (lexicographic coordinates) of the d4_pair extension group whose
    bicrossed product is neither commutative nor cocommutative."""
    from .monomial import fundamental_unitary
    from .qgroup import QuantumGroup, classify_commutativity

    mp = d4_pair()
    for _, rep in extension_group(mp, N).all_classes():
        W, _ = fundamental_unitary(mp, rep)
        kind = classify_commutativity(QuantumGroup(W))
        if not kind["commutative"] and not kind["cocommutative"]:
            return rep
    raise LookupError("no class gives a genuine quantum group")


def schedule_documents() -> dict:
    return {
        "all_primes.json": {"family": "prime_geometric", "primes": {"kind": "all"}, "n_max": 200, "k_max": 20},
        "above_powers.json": {"family": "prime_geometric", "primes": {"kind": "above_powers", "base": 3},
                              "n_max": 20, "k_max": 20},
        "two_three.json": {"family": "prime_geometric", "primes": {"kind": "list", "primes": [2, 3]},
                           "n_max": 2, "k_max": 20},
    }


def lie_documents() -> dict:
    b1, b2 = lie.family_split(2)
    return {
        "axb_pair.json": {"algebra": lie.axb_algebra().to_document(),
                          "g1_basis": lie.AXB_G1, "g2_basis": lie.AXB_G2},
        "family2_pair.json": {"algebra": lie.family_algebra(2).to_document(),
                              "g1_basis": b1, "g2_basis": [[str(x) for x in v] for v in b2]},
        "axb_algebra.json": lie.axb_algebra().to_document(),
        "axb_bialgebra.json": lie.LieBialgebra.from_wedge_table(lie.axb_algebra(), [[0], [1]]).to_document(),
    }


def fixture_documents() -> dict:
    corpus = standard_corpus()
    docs = {
        "s3.json": corpus["S3"].to_document(),
        "d4.json": corpus["D4"].to_document(),
        "z2xz2.json": corpus["Z2xZ2"].to_document(),
        "nontrivial.json": nontrivial_d4_cocycle(2).to_document(),
    }
    for name, make in NAMED_PAIRS.items():
        docs[f"{name}.json"] = make().to_document()
    docs.update(schedule_documents())
    docs.update(lie_documents())
    return docs


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def write_fixtures(directory: str) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, doc in sorted(fixture_documents().items()):
        path = os.path.join(directory, name)
        with open(path, "w") as fh:
            fh.write(dump(doc))
        paths.append(path)
    return paths
