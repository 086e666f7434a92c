"""Matched pairs of finite groups and their mutual actions.

For an exact factorization ``G = G1 G2`` every product ``g s`` (g in G1,
s in G2) can be rewritten uniquely as ``a b`` with ``a`` in G2 and ``b`` in
G1. Writing ``a = alpha_g(s)`` and ``b = beta_s(g)`` gives

    j(alpha_g(s)) i(beta_s(g)) = i(g) j(s).

G2 is stored as an ordinary subgroup with ``j`` the inclusion. Because the
construction wants ``j`` to be an anti-homomorphism, the group that acts
is the *opposite* of the stored subgroup: its product ``t . s`` is the
stored product ``s * t``. :meth:`MatchedPair.g2_mul` implements that
product and every formula downstream uses it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, GroupValidationError, SubgroupEmbedding, parse_group


class MatchedPairError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MatchedPair:
    G: FiniteGroup
    G1: SubgroupEmbedding
    G2: SubgroupEmbedding
    alpha: np.ndarray  # alpha[g, s] = alpha_g(s), local G2 index
    beta: np.ndarray   # beta[s, g] = beta_s(g), local G1 index
    theta_inv: np.ndarray = field(repr=False)  # G element -> (g, s)

    @property
    def n1(self) -> int:
        return self.G1.order

    @property
    def n2(self) -> int:
        return self.G2.order

    def g1_mul(self, g: int, h: int) -> int:
        return int(self.G1.table[g, h])

    def g2_mul(self, t: int, s: int) -> int:
        """Product ``t . s`` in the acting (opposite) group: stored ``s * t``."""
        return int(self.G2.table[s, t])

    def g1_inv(self, g: int) -> int:
        return int(np.argmin(self.G1.table[g]))

    def g2_inv(self, s: int) -> int:
        return int(np.argmin(self.G2.table[s]))

    def a(self, g: int, s: int) -> int:
        return int(self.alpha[g, s])

    def b(self, s: int, g: int) -> int:
        return int(self.beta[s, g])

    def to_document(self) -> dict:
        return {"group": self.G.to_document(), "g1": list(self.G1.elements), "g2": list(self.G2.elements)}


def from_factorization(G: FiniteGroup, G1: SubgroupEmbedding, G2: SubgroupEmbedding) -> MatchedPair:
    """Derive ``alpha`` and ``beta`` from an exact factorization of ``G``."""
    if G1.parent != G or G2.parent != G:
        raise MatchedPairError("subgroups must live in G")
    if set(G1.elements) & set(G2.elements) != {0}:
        raise MatchedPairError("G1 and G2 intersect nontrivially")
    if G1.order * G2.order != G.order:
        raise MatchedPairError(f"|G1||G2| = {G1.order * G2.order} != |G| = {G.order}")
    n1, n2 = G1.order, G2.order
    theta_inv = np.full((G.order, 2), -1, dtype=np.int64)
    rho_inv = np.full((G.order, 2), -1, dtype=np.int64)
    for g, x in enumerate(G1.elements):
        for s, y in enumerate(G2.elements):
            theta_inv[G.mul(x, y)] = (g, s)
            rho_inv[G.mul(y, x)] = (g, s)
    alpha = np.empty((n1, n2), dtype=np.int64)
    beta = np.empty((n2, n1), dtype=np.int64)
    for g, x in enumerate(G1.elements):
        for s, y in enumerate(G2.elements):
            b, a = rho_inv[G.mul(x, y)]
            alpha[g, s] = a
            beta[s, g] = b
    for arr in (theta_inv, alpha, beta):
        arr.setflags(write=False)
    return MatchedPair(G, G1, G2, alpha, beta, theta_inv)


def decompose(mp: MatchedPair, x: int) -> tuple[int, int]:
    """Local ``(g, s)`` with ``i(g) j(s) = x``."""
    g, s = mp.theta_inv[x]
    return int(g), int(s)


def verify_identities(mp: MatchedPair) -> list[dict]:
    """Violations of the matched-pair action identities; empty when valid."""
    out = []
    n1, n2 = mp.n1, mp.n2
    a, b, m1, m2 = mp.a, mp.b, mp.g1_mul, mp.g2_mul

    def bad(name, **args):
        out.append({"identity": name, "witness": args})

    for g in range(n1):
        if a(g, 0) != 0:
            bad("alpha_g(e) = e", g=g)
    for s in range(n2):
        if a(0, s) != s:
            bad("alpha_e(s) = s", s=s)
        if b(s, 0) != 0:
            bad("beta_s(e) = e", s=s)
    for g in range(n1):
        if b(0, g) != g:
            bad("beta_e(g) = g", g=g)
    for h in range(n1):
        for g in range(n1):
            hg = m1(h, g)
            for s in range(n2):
                ags = a(g, s)
                if a(hg, s) != a(h, ags):
                    bad("alpha_hg(s) = alpha_h(alpha_g(s))", h=h, g=g, s=s)
                if b(s, hg) != m1(b(ags, h), b(s, g)):
                    bad("beta_s(hg) = beta_alpha_g(s)(h) beta_s(g)", h=h, g=g, s=s)
    for t in range(n2):
        for s in range(n2):
            ts = m2(t, s)
            for g in range(n1):
                bsg = b(s, g)
                if b(ts, g) != b(t, bsg):
                    bad("beta_ts(g) = beta_t(beta_s(g))", t=t, s=s, g=g)
                if a(g, ts) != m2(a(bsg, t), a(g, s)):
                    bad("alpha_g(ts) = alpha_beta_s(g)(t) alpha_g(s)", t=t, s=s, g=g)
    G = mp.G
    for g in range(n1):
        for s in range(n2):
            lhs = G.mul(mp.G2.elements[a(g, s)], mp.G1.elements[b(s, g)])
            if lhs != G.mul(mp.G1.elements[g], mp.G2.elements[s]):
                bad("j(alpha_g(s)) i(beta_s(g)) = i(g) j(s)", g=g, s=s)
    return out


def with_corrupted_alpha(mp: MatchedPair, g: int, s: int, value: int) -> MatchedPair:
    """Copy of ``mp`` with one alpha entry overwritten (for negative tests)."""
    alpha = mp.alpha.copy()
    alpha[g, s] = value
    alpha.setflags(write=False)
    return MatchedPair(mp.G, mp.G1, mp.G2, alpha, mp.beta, mp.theta_inv)


def action_properties(mp: MatchedPair) -> dict:
    alpha_fixed = {g: [s for s in range(mp.n2) if mp.a(g, s) == s] for g in range(mp.n1)}
    beta_fixed = {s: [g for g in range(mp.n1) if mp.b(s, g) == g] for s in range(mp.n2)}
    return {
        "alpha_trivial": all(len(v) == mp.n2 for v in alpha_fixed.values()),
        "beta_trivial": all(len(v) == mp.n1 for v in beta_fixed.values()),
        "alpha_fixed_points": alpha_fixed,
        "beta_fixed_points": beta_fixed,
        # an action is free when only the identity fixes any point
        "alpha_free": all(not v for g, v in alpha_fixed.items() if g != 0),
        "beta_free": all(not v for s, v in beta_fixed.items() if s != 0),
    }


def parse_matched_pair(document) -> MatchedPair:
    """Matched-pair document: ``{"group": <group doc>, "g1": [...], "g2": [...]}``."""
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    try:
        G = parse_group(document["group"])
        G1 = SubgroupEmbedding(G, document["g1"])
        G2 = SubgroupEmbedding(G, document["g2"])
    except KeyError as exc:
        raise GroupValidationError(f"matched-pair document missing field {exc}") from exc
    return from_factorization(G, G1, G2)
