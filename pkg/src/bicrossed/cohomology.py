"""Cohomology of finite groups with trivial coefficients Z/N (written additively).

Normalized bar cochains: an n-cochain is a function on (G \\ {e})^n, i.e.
it vanishes whenever an argument is the identity. The coboundary is the
alternating sum of the face maps

    (dF)(g_0, ..., g_n) = F(g_1, ..., g_n)
                          + sum_{i=1..n} (-1)^i F(g_0, ..., g_{i-1} g_i, ..., g_n)
                          + (-1)^{n+1} F(g_0, ..., g_{n-1}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import zmod
from .groups import FiniteGroup, SubgroupEmbedding

DEFAULT_MAX_CELLS = 20000


class ScaleError(ValueError):
    pass


def cochain_index(G: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    """Arguments of normalized n-cochains in lexicographic order."""
    return list(itertools.product(range(1, G.order), repeat=n))


def _check_scale(G: FiniteGroup, n: int, max_cells: int):
    if n < 0:
        raise ValueError("degree must be non-negative")
    cells = max(G.order - 1, 1) ** (n + 1)
    if cells > max_cells:
        raise ScaleError(f"{cells} cochain cells in degree {n + 1} exceeds the bound {max_cells}")


@dataclass(frozen=True, eq=False)
class CochainComplexSlice:
    group: FiniteGroup
    degree: int
    N: int
    matrix: np.ndarray  # rows: (n+1)-cochain arguments, columns: n-cochain arguments
    rows: list = field(repr=False)
    cols: list = field(repr=False)


def coboundary_matrix(G: FiniteGroup, n: int, N: int, max_cells: int = DEFAULT_MAX_CELLS) -> CochainComplexSlice:
    """Matrix of ``d: C^n -> C^{n+1}`` on normalized cochains, entries reduced mod N."""
    _check_scale(G, n, max_cells)
    cols = cochain_index(G, n)
    rows = cochain_index(G, n + 1)
    col_of = {c: i for i, c in enumerate(cols)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, g in enumerate(rows):
        faces = [(1, g[1:])]
        for i in range(1, n + 1):
            merged = g[:i - 1] + (G.mul(g[i - 1], g[i]),) + g[i + 1:]
            faces.append(((-1) ** i, merged))
        faces.append(((-1) ** (n + 1), g[:n]))
        for sign, arg in faces:
            j = col_of.get(arg)  # None when an argument is the identity
            if j is not None:
                D[r, j] += sign
    D %= N
    D.setflags(write=False)
    return CochainComplexSlice(G, n, N, D, rows, cols)


def composition_vanishes(G: FiniteGroup, n: int, N: int, max_cells: int = DEFAULT_MAX_CELLS) -> bool:
    """``d_{n+1} d_n == 0`` mod N."""
    a = coboundary_matrix(G, n, N, max_cells).matrix
    b = coboundary_matrix(G, n + 1, N, max_cells).matrix
    return not ((b @ a) % N).any()


@dataclass(frozen=True, eq=False)
class CohomologyResult:
    group: FiniteGroup
    degree: int
    N: int
    invariant_factors: tuple[int, ...]
    representatives: list[np.ndarray]
    quotient: zmod.Subquotient = field(repr=False)
    index: list = field(repr=False)

    @property
    def order(self) -> int:
        return self.quotient.order

    def coords(self, cocycle) -> tuple[int, ...]:
        return self.quotient.coords(np.asarray(cocycle, dtype=np.int64))

    def to_document(self) -> dict:
        return {
            "group": self.group.name,
            "degree": self.degree,
            "N": self.N,
            "invariant_factors": list(self.invariant_factors),
            "order": self.order,
            "representatives": [
                {",".join(map(str, arg)): int(v) for arg, v in zip(self.index, rep) if v}
                for rep in self.representatives
            ],
        }


def _cycles_and_boundaries(G, n, N, max_cells):
    dn = coboundary_matrix(G, n, N, max_cells)
    ncols = len(dn.cols)
    Z = zmod.kernel(dn.matrix, N, ncols)
    if n == 0:
        B = np.zeros((0, ncols), dtype=np.int64)
    else:
        B = coboundary_matrix(G, n - 1, N, max_cells).matrix.T.copy()
    return dn, Z, B


_CACHE: dict = {}


def cohomology_group(G: FiniteGroup, n: int, N: int, max_cells: int = DEFAULT_MAX_CELLS) -> CohomologyResult:
    """``ker d_n / im d_{n-1}`` with invariant factors and lexicographically least representatives."""
    key = (G.table.tobytes(), G.order, G.name, n, N)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    dn, Z, B = _cycles_and_boundaries(G, n, N, max_cells)
    sq = zmod.subquotient(Z, B, N, len(dn.cols))
    out = CohomologyResult(G, n, N, tuple(sq.invariant_factors), list(sq.generators), sq, dn.cols)
    _CACHE[key] = out
    return out


def restrict_cochain(G: FiniteGroup, H: SubgroupEmbedding, n: int, F, opposite: bool = False) -> np.ndarray:
    """Pull a normalized n-cochain of G back to H (local indices).

    With ``opposite`` the result is read as a cochain of the opposite group
    of H through the isomorphism ``x -> x^-1``.
    """
    src = {arg: i for i, arg in enumerate(cochain_index(G, n))}
    Hg = H.as_group()
    out = []
    for arg in cochain_index(Hg, n):
        if opposite:
            arg = tuple(Hg.inv(x) for x in arg)
        parent = tuple(H.elements[x] for x in arg)
        out.append(F[src[parent]])
    return np.array(out, dtype=np.int64)


def opposite_group(G: FiniteGroup) -> FiniteGroup:
    return FiniteGroup(G.table.T.copy(), name=f"{G.name}^op", labels=G.labels)


@dataclass(frozen=True, eq=False)
class RestrictionResult:
    source: CohomologyResult
    target: CohomologyResult
    matrix: np.ndarray  # row i: coordinates of res(generator i) in the target basis

    def image_order(self) -> int:
        return image_order([self], self.source.N)


def restriction_map(G: FiniteGroup, H: SubgroupEmbedding, n: int, N: int,
                    opposite: bool = False, max_cells: int = DEFAULT_MAX_CELLS) -> RestrictionResult:
    """``H^n(G) -> H^n(H)`` (or ``H^n(H^op)``) on invariant-factor bases."""
    src = cohomology_group(G, n, N, max_cells)
    Hg = H.as_group()
    tgt = cohomology_group(opposite_group(Hg) if opposite else Hg, n, N, max_cells)
    rows = []
    for rep in src.representatives:
        rows.append(tgt.coords(restrict_cochain(G, H, n, rep, opposite)))
    M = np.array(rows, dtype=np.int64).reshape(len(rows), len(tgt.invariant_factors))
    return RestrictionResult(src, tgt, M)


def image_order(maps: list[RestrictionResult], N: int) -> int:
    """Order of the image of ``H^n(G) -> (+)_k H^n(H_k)`` for maps sharing a source."""
    scales = []
    for m in maps:
        scales.extend(N // d for d in m.target.invariant_factors)
    if not scales:
        return 1
    # Z/d embeds in Z/N by multiplication with N/d
    rows = []
    for i in range(len(maps[0].source.invariant_factors)):
        row = []
        for m in maps:
            row.extend(int(x) for x in m.matrix[i])
        rows.append([(x * s) % N for x, s in zip(row, scales)])
    return zmod.howell_form(np.array(rows, dtype=np.int64).reshape(len(rows), len(scales)), N, len(scales)).order()


def image_order_cochains(G: FiniteGroup, subgroups: list[SubgroupEmbedding], n: int, N: int,
                         max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Same image order computed on cochains: |res(Z^n(G)) + B| / |B| in the product of the C^n(H_k)."""
    _, Z, _ = _cycles_and_boundaries(G, n, N, max_cells)
    blocks, bounds = [], []
    for H in subgroups:
        Hg = H.as_group()
        _, _, B = _cycles_and_boundaries(Hg, n, N, max_cells)
        blocks.append(len(cochain_index(Hg, n)))
        bounds.append(B)
    width = sum(blocks)
    res_rows = [np.concatenate([restrict_cochain(G, H, n, z) for H in subgroups]) if subgroups else np.zeros(0)
                for z in Z]
    brows = []
    offset = 0
    for B, w in zip(bounds, blocks):
        for row in B:
            full = np.zeros(width, dtype=np.int64)
            full[offset:offset + w] = row
            brows.append(full)
        offset += w
    Bm = np.array(brows, dtype=np.int64).reshape(len(brows), width)
    both = np.vstack([np.array(res_rows, dtype=np.int64).reshape(len(res_rows), width), Bm])
    return zmod.howell_form(both, N, width).order() // zmod.howell_form(Bm, N, width).order()


def kac_sequence_check(mp, N: int, max_cells: int = DEFAULT_MAX_CELLS) -> dict:
    """Compare |extension group| with |coker res_2| * |ker res_3|.

    The restrictions go to G1 and to G2; G2 is taken both as the stored
    subgroup and as its opposite group (the acting group of the matched
    pair). The two readings give isomorphic targets, and both are reported.
    """
    from .cocycles import extension_group

    G = mp.G
    ext = extension_group(mp, N)
    out = {"N": N, "extension_group_order": ext.order,
           "extension_invariant_factors": list(ext.invariants.invariant_factors)}
    readings = {}
    for label, opposite in (("opposite", True), ("plain", False)):
        res2 = [restriction_map(G, mp.G1, 2, N, False, max_cells),
                restriction_map(G, mp.G2, 2, N, opposite, max_cells)]
        res3 = [restriction_map(G, mp.G1, 3, N, False, max_cells),
                restriction_map(G, mp.G2, 3, N, opposite, max_cells)]
        target2 = res2[0].target.order * res2[1].target.order
        img2 = image_order(res2, N)
        img3 = image_order(res3, N)
        coker2 = target2 // img2
        ker3 = res3[0].source.order // img3
        readings[label] = {
            "H2_G": res2[0].source.order, "H2_G1": res2[0].target.order, "H2_G2": res2[1].target.order,
            "H3_G": res3[0].source.order, "H3_G1": res3[0].target.order, "H3_G2": res3[1].target.order,
            "coker_res2": coker2, "ker_res3": ker3,
            "exactness_consistent": coker2 * ker3 == ext.order,
        }
    main = readings["opposite"]
    out.update({"coker_res2": main["coker_res2"], "ker_res3": main["ker_res3"],
                "exactness_consistent": main["exactness_consistent"], "readings": readings})
    return out
