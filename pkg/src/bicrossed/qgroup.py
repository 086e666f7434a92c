"""Finite quantum groups from monomial multiplicative unitaries.

Given a multiplicative unitary ``W`` on H (x) H (dim H = n), the algebra
``M`` is spanned by the left slices ``(id (x) w_ij)(W)`` and carries the
comultiplication ``Delta(x) = W* (1 (x) x) W``. Everything is computed
exactly over the cyclotomic field containing the phases of ``W``.

A :class:`QuantumGroup` keeps a reduced echelon basis ``b_k`` of M and the
structure constants in that basis: products ``b_i b_j``, adjoints ``b_i*``
and ``Delta(b_x) = sum c[x][i, j] b_i (x) b_j``. The axiom checks below
work on those tables, except where a check is meant to be an independent
route (coassociativity on operators, invariant mean via vector functionals).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .cyclotomic import CyclotomicField, CyclotomicMatrix, SpanBasis, cyclotomic_field, solve_linear
from .monomial import MonomialOperator, embed, flip, group_unitary, verify_pentagon


class AxiomError(ArithmeticError):
    """A structure that must exist for a valid multiplicative unitary does not."""


def _side_of(W: MonomialOperator) -> int:
    n = int(round(W.dimension ** 0.5))
    if n * n != W.dimension:
        raise ValueError("W must act on H (x) H")
    return n


def field_of(W: MonomialOperator) -> CyclotomicField:
    return cyclotomic_field(W.N)


def slices(W: MonomialOperator, side: str = "left") -> list[CyclotomicMatrix]:
    """All slices of ``W`` against matrix-unit functionals, ordered by ``(i, j)``.

    ``left``: ``(id (x) w_ij)(W)``; ``right``: ``(w_ij (x) id)(W)``;
    ``C``: left slices of ``Sigma W``.
    """
    n = _side_of(W)
    F = field_of(W)
    if side == "C":
        W = flip(n, N=W.N) @ W
        side = "left"
    if side not in ("left", "right"):
        raise ValueError(f"unknown side {side!r}")
    out = [dict() for _ in range(n * n)]
    for b in range(W.dimension):
        a, j = divmod(b, n)
        a2, i = divmod(int(W.perm[b]), n)
        val = F.root(int(W.phase[b]))
        if side == "left":
            # W[(a2, i), (a, j)] lands in slice (i, j) at (a2, a)
            out[i * n + j][(a2, a)] = val
        else:
            # W[(a2, i), (a, j)] lands in slice (a2, a) at (i, j)
            out[a2 * n + a][(i, j)] = val
    return [CyclotomicMatrix(F, (n, n), e) for e in out]


@dataclass
class SliceAlgebra:
    basis: SpanBasis
    elements: list[CyclotomicMatrix]
    generators: list[CyclotomicMatrix] = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def coordinates(self, x: CyclotomicMatrix):
        return self.basis.coordinates(x.entries)

    def contains(self, x: CyclotomicMatrix) -> bool:
        return self.basis.contains(x.entries)

    def combine(self, coords) -> CyclotomicMatrix:
        F = self.basis.F
        n = self.elements[0].shape if self.elements else (0, 0)
        out = CyclotomicMatrix(F, n, {})
        for c, b in zip(coords, self.elements):
            if not F.is_zero(c):
                out = out + b.scale(c)
        return out


def span_of(F: CyclotomicField, mats: list[CyclotomicMatrix]) -> SliceAlgebra:
    basis = SpanBasis(F)
    for m in mats:
        basis.add(m.entries)
    shape = mats[0].shape if mats else (0, 0)
    elements = [CyclotomicMatrix(F, shape, dict(v)) for v in basis.vectors]
    return SliceAlgebra(basis, elements, mats)


def slice_algebra(W: MonomialOperator, side: str = "left") -> SliceAlgebra:
    """Echelon basis of the slice span; ``.dimension`` is its linear dimension."""
    return span_of(field_of(W), slices(W, side))


def comultiplication(W: MonomialOperator, x: CyclotomicMatrix, algebra: SliceAlgebra | None = None) -> CyclotomicMatrix:
    """``Delta(x) = W* (1 (x) x) W``; raises when ``x`` is not in the left slice algebra."""
    if algebra is None:
        algebra = slice_algebra(W)
    if not algebra.contains(x):
        raise ValueError("x is not in the slice algebra M")
    n = _side_of(W)
    F = x.field
    one_x = CyclotomicMatrix.identity(F, n).kron(x)
    return one_x.conjugate_by(W)


def _tensor_key(p, q, n):
    (r1, c1), (r2, c2) = p, q
    return (r1 * n + r2, c1 * n + c2)


class QuantumGroup:
    """Structure tables of the finite quantum group defined by ``W``."""

    def __init__(self, W: MonomialOperator):
        self.W = W
        self.n = _side_of(W)
        self.F = field_of(W)
        self.algebra = slice_algebra(W, "left")
        self.d = self.algebra.dimension

    # -- basic tables -------------------------------------------------

    @property
    def basis(self) -> list[CyclotomicMatrix]:
        return self.algebra.elements

    def coords(self, x: CyclotomicMatrix) -> list:
        c = self.algebra.coordinates(x)
        if c is None:
            raise AxiomError("element is not in M")
        return c

    @cached_property
    def one(self) -> list:
        """Coordinates of the unit; M must be unital."""
        return self.coords(CyclotomicMatrix.identity(self.F, self.n))

    @cached_property
    def mult(self) -> list[list[dict]]:
        """``mult[i][j]`` = sparse coordinates of ``b_i b_j``; raises if M is not closed."""
        F = self.F
        out = []
        for bi in self.basis:
            row = []
            for bj in self.basis:
                c = self.coords(bi @ bj)
                row.append({k: v for k, v in enumerate(c) if not F.is_zero(v)})
            out.append(row)
        return out

    @cached_property
    def star(self) -> list[dict]:
        F = self.F
        return [{k: v for k, v in enumerate(self.coords(b.adjoint())) if not F.is_zero(v)} for b in self.basis]

    @cached_property
    def delta_ops(self) -> list[CyclotomicMatrix]:
        return [comultiplication(self.W, b, self.algebra) for b in self.basis]

    @cached_property
    def delta(self) -> list[dict]:
        """``delta[x][(i, j)]``: coordinates of Delta(b_x) in the basis ``b_i (x) b_j``.

        Coefficients are read at pivot pairs and the expansion is then
        compared exactly with the operator, which certifies membership in
        M (x) M.
        """
        F = self.F
        piv = self.algebra.basis.pivots
        out = []
        for D in self.delta_ops:
            coeffs = {}
            for i, p in enumerate(piv):
                for j, q in enumerate(piv):
                    v = D.entries.get(_tensor_key(p, q, self.n))
                    if v is not None:
                        coeffs[(i, j)] = v
            rebuilt = CyclotomicMatrix(F, D.shape, {})
            for (i, j), c in coeffs.items():
                rebuilt = rebuilt + self.basis[i].kron(self.basis[j]).scale(c)
            if rebuilt != D:
                raise AxiomError("Delta(x) is not in M (x) M")
            out.append(coeffs)
        return out

    def element(self, coords) -> CyclotomicMatrix:
        if isinstance(coords, dict):
            coords = [coords.get(k, self.F.zero) for k in range(self.d)]
        return self.algebra.combine(coords)

    # -- helpers on sparse coordinate vectors --------------------------

    def _mul_coords(self, a: dict, b: dict) -> dict:
        F = self.F
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                xy = F.mul(x, y)
                for k, z in self.mult[i][j].items():
                    t = F.mul(xy, z)
                    out[k] = F.add(out[k], t) if k in out else t
        return {k: v for k, v in out.items() if not F.is_zero(v)}

    def _apply(self, table: list[dict], a: dict) -> dict:
        """Apply a linear map given by images of basis vectors."""
        F = self.F
        out: dict = {}
        for i, x in a.items():
            for k, z in table[i].items():
                t = F.mul(x, z)
                out[k] = F.add(out[k], t) if k in out else t
        return {k: v for k, v in out.items() if not F.is_zero(v)}


# -- axiom checks -------------------------------------------------------


def check_coassociativity(qg: QuantumGroup) -> tuple[bool, int | None]:
    """``W12* Delta(x)_23 W12 == W23* Delta(x)_13 W23`` for each basis ``x``; returns first failing index."""
    n = qg.n
    W = qg.W.regroup((n, n))
    dims = (n, n, n)
    W12, W23 = embed(W, (0, 1), dims), embed(W, (1, 2), dims)
    I = CyclotomicMatrix.identity(qg.F, n)
    for x, D in enumerate(qg.delta_ops):
        D23 = I.kron(D)
        # D_13 = Sigma_12 D_23 Sigma_12
        S12 = embed(flip(n, N=W.N), (0, 1), dims)
        D13 = D23.conjugate_by(S12)
        if D23.conjugate_by(W12) != D13.conjugate_by(W23):
            return False, x
    return True, None


@dataclass
class HaarResult:
    values: list  # h(b_k)
    solution_dimension: int
    positive: bool
    formatted: list[str] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return self.solution_dimension == 1


def haar_state(qg: QuantumGroup) -> HaarResult:
    """The bi-invariant functional with h(1) = 1, by exact linear solve."""
    F, d = qg.F, qg.d
    rows = []
    for x, cx in enumerate(qg.delta):
        right = [dict() for _ in range(d)]  # (id (x) h) Delta(b_x) = h(b_x) 1
        left = [dict() for _ in range(d)]   # (h (x) id) Delta(b_x) = h(b_x) 1
        for (i, j), c in cx.items():
            right[i][j] = F.add(right[i].get(j, F.zero), c)
            left[j][i] = F.add(left[j].get(i, F.zero), c)
        for eqs in (right, left):
            for i in range(d):
                row = dict(eqs[i])
                row[x] = F.sub(row.get(x, F.zero), qg.one[i])
                rows.append((row, F.zero))
    _, null = solve_linear(F, rows, d)
    if len(null) != 1:
        raise AxiomError(f"invariant functionals form a space of dimension {len(null)}")
    h = null[0]
    norm = F.zero
    for a, b in zip(qg.one, h):
        norm = F.add(norm, F.mul(a, b))
    if F.is_zero(norm):
        raise AxiomError("invariant functional vanishes on the unit")
    s = F.inv(norm)
    h = [F.mul(s, v) for v in h]
    return HaarResult(h, len(null), haar_positive(qg, h), [F.format(v) for v in h])


def apply_functional(qg: QuantumGroup, f: list, coords: dict):
    F = qg.F
    out = F.zero
    for k, v in coords.items():
        out = F.add(out, F.mul(f[k], v))
    return out


def haar_positive(qg: QuantumGroup, h: list) -> bool:
    """Exact test that the Gram matrix ``h(b_i* b_j)`` is positive semidefinite."""
    F, d = qg.F, qg.d
    G = [[apply_functional(qg, h, qg._mul_coords(qg.star[i], {j: F.one})) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(d):
            if G[i][j] != F.conj(G[j][i]):
                return False
    return hermitian_psd(F, G)


def hermitian_psd(F: CyclotomicField, G) -> bool:
    """Symmetric elimination with exact pivots; signs decided by certified intervals."""
    G = [row[:] for row in G]
    d = len(G)
    active = list(range(d))
    while active:
        k = active.pop(0)
        sign = F.real_sign(G[k][k])
        if sign < 0:
            return False
        if sign == 0:
            if any(not F.is_zero(G[k][j]) for j in active):
                return False
            continue
        inv = F.inv(G[k][k])
        for i in active:
            if F.is_zero(G[i][k]):
                continue
            f = F.mul(G[i][k], inv)
            for j in active:
                G[i][j] = F.sub(G[i][j], F.mul(f, G[k][j]))
    return True


@dataclass
class AntipodeResult:
    table: list[dict]  # S(b_k) in coordinates
    anti_homomorphism: bool
    S_squared_identity: bool
    consistent: bool


def antipode_and_kac(qg: QuantumGroup) -> AntipodeResult:
    """``S((id (x) w)(W)) = (id (x) w)(W*)`` on every slice, extended linearly."""
    F, d = qg.F, qg.d
    X = qg.algebra.generators
    Y = slices(qg.W.adjoint(), "left")
    table = []
    for combo in qg.algebra.basis.combos:
        img = CyclotomicMatrix(F, (qg.n, qg.n), {})
        for g, c in combo.items():
            img = img + Y[g].scale(c)
        coords = qg.algebra.coordinates(img)
        if coords is None:
            raise AxiomError("antipode image leaves M")
        table.append({k: v for k, v in enumerate(coords) if not F.is_zero(v)})
    consistent = True
    for x, y in zip(X, Y):
        cx = qg.algebra.coordinates(x)
        cy = qg.algebra.coordinates(y)
        if cy is None:
            consistent = False
            break
        got = qg._apply(table, {k: v for k, v in enumerate(cx) if not F.is_zero(v)})
        if got != {k: v for k, v in enumerate(cy) if not F.is_zero(v)}:
            consistent = False
            break
    if not consistent:
        raise AxiomError("slices do not determine the antipode consistently")
    anti = True
    for i in range(d):
        for j in range(d):
            lhs = qg._apply(table, qg.mult[i][j])
            rhs = qg._mul_coords(table[j], table[i])
            if lhs != rhs:
                anti = False
                break
        if not anti:
            break
    sq = all(qg._apply(table, table[k]) == {k: F.one} for k in range(d))
    return AntipodeResult(table, anti, sq, consistent)


@dataclass
class CounitResult:
    values: list
    unique: bool
    character: bool
    haar_is_invariant_mean: bool


def counit(qg: QuantumGroup) -> tuple[list, bool]:
    F, d = qg.F, qg.d
    rows = []
    for x, cx in enumerate(qg.delta):
        left = [dict() for _ in range(d)]   # (eps (x) id) Delta(b_x) = b_x
        right = [dict() for _ in range(d)]  # (id (x) eps) Delta(b_x) = b_x
        for (i, j), c in cx.items():
            left[j][i] = F.add(left[j].get(i, F.zero), c)
            right[i][j] = F.add(right[i].get(j, F.zero), c)
        for eqs in (left, right):
            for k in range(d):
                rows.append((eqs[k], F.one if k == x else F.zero))
    sol, null = solve_linear(F, rows, d)
    if sol is None:
        raise AxiomError("no counit")
    return sol, not null


def counit_and_mean(qg: QuantumGroup, haar: HaarResult | None = None) -> CounitResult:
    F, d = qg.F, qg.d
    eps, unique = counit(qg)
    character = apply_functional(qg, eps, dict(enumerate(qg.one))) == F.one
    for i in range(d):
        for j in range(d):
            if apply_functional(qg, eps, qg.mult[i][j]) != F.mul(eps[i], eps[j]):
                character = False
        if apply_functional(qg, eps, qg.star[i]) != F.conj(eps[i]):
            character = False
    if haar is None:
        haar = haar_state(qg)
    return CounitResult(eps, unique, character, invariant_mean_holds(qg, haar.values))


def invariant_mean_holds(qg: QuantumGroup, h: list) -> bool:
    """``h((w (x) id) Delta(x)) = h(x) w(1)`` for all matrix-unit functionals ``w`` on H."""
    F, n = qg.F, qg.n
    for x, D in enumerate(qg.delta_ops):
        hx = h[x]
        parts: dict = {}
        for (r, c), v in D.entries.items():
            a, rr = divmod(r, n)
            b, cc = divmod(c, n)
            parts.setdefault((a, b), {})[(rr, cc)] = v
        for a in range(n):
            for b in range(n):
                sl = parts.get((a, b), {})
                coords = qg.algebra.basis.coordinates(sl)
                if coords is None:
                    return False
                val = apply_functional(qg, h, dict(enumerate(coords)))
                if val != (hx if a == b else F.zero):
                    return False
    return True


def dual_unitary(W: MonomialOperator) -> MonomialOperator:
    """``W_hat = Sigma W* Sigma``."""
    n = _side_of(W)
    S = flip(n, N=W.N)
    return (S @ W.adjoint() @ S).regroup(W.dims)


@dataclass
class DualityResult:
    W_hat: MonomialOperator
    dual_pentagon: bool
    right_slices_match: bool
    bidual_equal: bool
    dim_M: int
    dim_M_hat: int


def same_span(a: SliceAlgebra, b: SliceAlgebra) -> bool:
    return a.dimension == b.dimension and all(b.contains(x) for x in a.elements)


def dual_and_bidual(qg: QuantumGroup) -> DualityResult:
    W = qg.W
    W_hat = dual_unitary(W)
    ok_pent, _ = verify_pentagon(W_hat)
    right = slice_algebra(W, "right")
    M_hat = slice_algebra(W_hat, "left")
    W_bidual = dual_unitary(W_hat)
    bi = QuantumGroup(W_bidual)
    equal = (W_bidual == W
             and [b.entries for b in bi.basis] == [b.entries for b in qg.basis]
             and bi.delta == qg.delta)
    return DualityResult(W_hat, ok_pent, same_span(right, M_hat), equal, qg.d, M_hat.dimension)


def regular_dimension(W: MonomialOperator) -> int:
    return slice_algebra(W, "C").dimension


def classify_commutativity(qg: QuantumGroup) -> dict:
    d = qg.d
    comm = all(qg.mult[i][j] == qg.mult[j][i] for i in range(d) for j in range(i + 1, d))
    cocomm = all(cx.get((i, j)) == cx.get((j, i)) for cx in qg.delta for (i, j) in cx)
    return {"commutative": comm, "cocommutative": cocomm}


# -- models -------------------------------------------------------------


def linf_model(G) -> MonomialOperator:
    """``W_G``: its left slices are the diagonal algebra L-infinity(G)."""
    return group_unitary(G)


def group_algebra_model(G) -> MonomialOperator:
    """``Sigma W_G* Sigma``: its left slices span the group algebra L(G)."""
    return dual_unitary(group_unitary(G))


def full_report(W: MonomialOperator) -> dict:
    """All axiom checks for ``W`` as a JSON-ready dictionary."""
    pent, bad = verify_pentagon(W)
    report: dict = {"pentagon": pent, "pentagon_witness": bad}
    if not pent:
        return report
    qg = QuantumGroup(W)
    F = qg.F
    co, _ = check_coassociativity(qg)
    haar = haar_state(qg)
    anti = antipode_and_kac(qg)
    cu = counit_and_mean(qg, haar)
    dual = dual_and_bidual(qg)
    reg = regular_dimension(W)
    report.update({
        "coassociative": co,
        "haar": {"values": haar.formatted, "solution_dimension": haar.solution_dimension,
                 "unique": haar.unique, "positive": haar.positive},
        "kac": anti.S_squared_identity,
        "antipode": {"anti_homomorphism": anti.anti_homomorphism, "S_squared_identity": anti.S_squared_identity},
        "counit": {"values": [F.format(v) for v in cu.values], "unique": cu.unique, "character": cu.character},
        "haar_is_invariant_mean": cu.haar_is_invariant_mean,
        "duality": {"dual_pentagon": dual.dual_pentagon, "right_slices_match": dual.right_slices_match,
                    "bidual_equal": dual.bidual_equal},
        "regular_dimension": reg,
        "dims": {"H": qg.n, "M": dual.dim_M, "M_hat": dual.dim_M_hat},
    })
    report.update(classify_commutativity(qg))
    return report
