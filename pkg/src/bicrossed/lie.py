"""Matched pairs of Lie algebras, their doubles, and Lie bialgebras over Q.

Structure constants are exact ``Fraction`` values stored in object arrays:
``[e_i, e_j] = sum_k c[i, j, k] e_k``.

For a matched pair (g1, g2) the actions are tables

    x_j |> a_i = sum_k tri[j, i, k] a_k      (g2 (x) g1 -> g1)
    x_j <| a_i = sum_k tle[j, i, k] x_k      (g2 (x) g1 -> g2)

and the double g1 (+) g2 has the bracket

    [a + x, b + y] = ([a,b] + x|>b - y|>a) + ([x,y] + x<|b - y<|a).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy


class LieError(ValueError):
    pass


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise LieError(f"floating point entry {x!r}; use exact rationals")
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(str(x).strip())


def rational_array(data, shape=None) -> np.ndarray:
    arr = np.array(data, dtype=object)
    if shape is not None and arr.shape != tuple(shape):
        raise LieError(f"expected shape {tuple(shape)}, got {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = _q(arr[idx])
    return out


def zeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass
class Report:
    """Outcome of an axiom check; ``defects`` lists (law, indices, nonzero value)."""
    name: str
    defects: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.defects

    def add(self, law, idx, value):
        self.defects.append((law, tuple(int(i) for i in idx), value))

    def to_document(self, limit: int = 20) -> dict:
        return {
            "check": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "defect_count": len(self.defects),
            "defects": [
                {"law": law, "indices": list(idx),
                 "value": [_fmt(v) for v in np.ravel(val)] if isinstance(val, np.ndarray) else _fmt(val)}
                for law, idx, val in self.defects[:limit]
            ],
        }

    def merge(self, other: "Report") -> "Report":
        self.defects.extend(other.defects)
        self.checked += other.checked
        return self


def _nonzero(v) -> bool:
    return any(x != 0 for x in np.ravel(v))


# -- Lie algebras -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray  # (d, d, d) Fractions

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_constants(cls, c, dim=None) -> "LieAlgebra":
        if dim is None:
            dim = len(c)
        if dim == 0:
            return cls(zeros(0, 0, 0))
        return cls(rational_array(c, (dim, dim, dim)))

    @classmethod
    def abelian(cls, d: int) -> "LieAlgebra":
        return cls(zeros(d, d, d))

    @classmethod
    def from_brackets(cls, d: int, brackets: dict) -> "LieAlgebra":
        """``brackets[(i, j)] = {k: coeff}`` for i < j; the rest follows by antisymmetry."""
        c = zeros(d, d, d)
        for (i, j), out in brackets.items():
            for k, v in out.items():
                c[i, j, k] = _q(v)
                c[j, i, k] = -_q(v)
        return cls(c)

    def bracket(self, u, v) -> np.ndarray:
        d = self.dim
        out = zeros(d)
        for i in range(d):
            if u[i] == 0:
                continue
            for j in range(d):
                if v[j] == 0:
                    continue
                w = u[i] * v[j]
                for k in range(d):
                    if self.c[i, j, k]:
                        out[k] += w * self.c[i, j, k]
        return out

    def basis(self, i: int) -> np.ndarray:
        e = zeros(self.dim)
        e[i] = Fraction(1)
        return e

    def antisymmetry(self) -> Report:
        rep = Report("antisymmetry")
        d = self.dim
        for i, j in itertools.product(range(d), repeat=2):
            rep.checked += 1
            s = self.c[i, j] + self.c[j, i]
            if _nonzero(s):
                rep.add("[e_i,e_j] + [e_j,e_i]", (i, j), s)
        return rep

    def to_document(self) -> dict:
        return {"dim": self.dim,
                "c": [[[_fmt(self.c[i, j, k]) for k in range(self.dim)] for j in range(self.dim)]
                      for i in range(self.dim)]}

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.c.shape == other.c.shape and bool((self.c == other.c).all())

    def __hash__(self):
        return hash(tuple(np.ravel(self.c)))


def verify_jacobi(L: LieAlgebra) -> Report:
    """Antisymmetry plus every basis triple of ``[a,[b,c]] + [b,[c,a]] + [c,[a,b]]``."""
    rep = L.antisymmetry()
    rep.name = "jacobi"
    d = L.dim
    e = [L.basis(i) for i in range(d)]
    for i, j, k in itertools.combinations(range(d), 3) if not rep.defects else itertools.product(range(d), repeat=3):
        rep.checked += 1
        s = (L.bracket(e[i], L.bracket(e[j], e[k])) + L.bracket(e[j], L.bracket(e[k], e[i]))
             + L.bracket(e[k], L.bracket(e[i], e[j])))
        if _nonzero(s):
            rep.add("jacobi", (i, j, k), s)
    return rep


def change_basis(L: LieAlgebra, P) -> LieAlgebra:
    """Structure constants in the basis ``f_i = sum_k P[k, i] e_k`` (columns of P)."""
    P = rational_array(P, (L.dim, L.dim))
    Pinv = _inverse(P)
    d = L.dim
    c = zeros(d, d, d)
    cols = [P[:, i] for i in range(d)]
    for i, j in itertools.product(range(d), repeat=2):
        c[i, j] = _matvec(Pinv, L.bracket(cols[i], cols[j]))
    return LieAlgebra(c)


def _inverse(P: np.ndarray) -> np.ndarray:
    M = sympy.Matrix(P.shape[0], P.shape[1], lambda i, j: sympy.Rational(P[i, j].numerator, P[i, j].denominator))
    if M.det() == 0:
        raise LieError("basis matrix is singular")
    return rational_array(M.inv().tolist())


def _matvec(A: np.ndarray, v) -> np.ndarray:
    out = zeros(A.shape[0])
    for i in range(A.shape[0]):
        out[i] = sum((A[i, j] * v[j] for j in range(A.shape[1])), Fraction(0))
    return out


def realify(c_real, c_imag) -> LieAlgebra:
    """Complex constants ``c_real + i c_imag`` as a real algebra on ``(e_0..e_{d-1}, i e_0..i e_{d-1})``."""
    re = rational_array(c_real)
    im = rational_array(c_imag, re.shape)
    d = re.shape[0]
    c = zeros(2 * d, 2 * d, 2 * d)
    for j, k in itertools.product(range(d), repeat=2):
        for l in range(d):
            a, b = re[j, k, l], im[j, k, l]
            # [e_j, e_k] = (a + ib) e_l
            c[j, k, l] += a
            c[j, k, d + l] += b
            # [i e_j, e_k] = [e_j, i e_k] = (a + ib) i e_l = -b e_l + a i e_l
            for (x, y) in ((d + j, k), (j, d + k)):
                c[x, y, l] += -b
                c[x, y, d + l] += a
            # [i e_j, i e_k] = -[e_j, e_k]
            c[d + j, d + k, l] += -a
            c[d + j, d + k, d + l] += -b
    return LieAlgebra(c)


# -- matched pairs ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieMatchedPair:
    g1: LieAlgebra
    g2: LieAlgebra
    act_right_on_left: np.ndarray  # tri[j, i, k]: x_j |> a_i, coefficient of a_k
    act_left_on_right: np.ndarray  # tle[j, i, k]: x_j <| a_i, coefficient of x_k

    def __post_init__(self):
        n1, n2 = self.g1.dim, self.g2.dim
        if self.act_right_on_left.shape != (n2, n1, n1):
            raise LieError(f"|> table must have shape {(n2, n1, n1)}")
        if self.act_left_on_right.shape != (n2, n1, n2):
            raise LieError(f"<| table must have shape {(n2, n1, n2)}")

    @classmethod
    def from_tables(cls, g1, g2, tri, tle) -> "LieMatchedPair":
        n1, n2 = g1.dim, g2.dim
        tri = rational_array(tri, (n2, n1, n1)) if n1 and n2 else zeros(n2, n1, n1)
        tle = rational_array(tle, (n2, n1, n2)) if n1 and n2 else zeros(n2, n1, n2)
        return cls(g1, g2, tri, tle)

    @classmethod
    def trivial(cls, g1, g2) -> "LieMatchedPair":
        return cls(g1, g2, zeros(g2.dim, g1.dim, g1.dim), zeros(g2.dim, g1.dim, g2.dim))

    def tri(self, x, a) -> np.ndarray:
        """``x |> a`` for coordinate vectors x in g2, a in g1."""
        n1 = self.g1.dim
        out = zeros(n1)
        for j, i in itertools.product(range(self.g2.dim), range(n1)):
            w = x[j] * a[i]
            if w:
                out += w * self.act_right_on_left[j, i]
        return out

    def tle(self, x, a) -> np.ndarray:
        """``x <| a``."""
        n2 = self.g2.dim
        out = zeros(n2)
        for j, i in itertools.product(range(n2), range(self.g1.dim)):
            w = x[j] * a[i]
            if w:
                out += w * self.act_left_on_right[j, i]
        return out

    def to_document(self) -> dict:
        n1, n2 = self.g1.dim, self.g2.dim
        return {
            "g1_dim": n1, "g2_dim": n2,
            "g1": self.g1.to_document(), "g2": self.g2.to_document(),
            "act_right_on_left": [[[_fmt(self.act_right_on_left[j, i, k]) for k in range(n1)]
                                   for i in range(n1)] for j in range(n2)],
            "act_left_on_right": [[[_fmt(self.act_left_on_right[j, i, k]) for k in range(n2)]
                                   for i in range(n1)] for j in range(n2)],
        }


def verify_matched_lie(mp: LieMatchedPair) -> Report:
    """Module laws of both actions and the two compatibility identities on basis elements.

        [x,y] |> a = x |> (y |> a) - y |> (x |> a)
        x <| [a,b] = (x <| a) <| b - (x <| b) <| a
        x |> [a,b] = [x|>a, b] + [a, x|>b] + (x<|a)|>b - (x<|b)|>a
        [x,y] <| a = [x, y<|a] + [x<|a, y] + x<|(y|>a) - y<|(x|>a)
    """
    rep = Report("matched_lie")
    for name, L in (("g1", mp.g1), ("g2", mp.g2)):
        sub = verify_jacobi(L)
        for law, idx, val in sub.defects:
            rep.add(f"{name} {law}", idx, val)
        rep.checked += sub.checked
    g1, g2 = mp.g1, mp.g2
    A = [g1.basis(i) for i in range(g1.dim)]
    X = [g2.basis(j) for j in range(g2.dim)]
    br1, br2 = g1.bracket, g2.bracket
    tri, tle = mp.tri, mp.tle
    for (j, x), (k, y) in itertools.product(enumerate(X), repeat=2):
        for i, a in enumerate(A):
            rep.checked += 2
            lhs = tri(br2(x, y), a)
            rhs = tri(x, tri(y, a)) - tri(y, tri(x, a))
            if _nonzero(lhs - rhs):
                rep.add("left module", (j, k, i), lhs - rhs)
            lhs = tle(br2(x, y), a)
            rhs = br2(x, tle(y, a)) + br2(tle(x, a), y) + tle(x, tri(y, a)) - tle(y, tri(x, a))
            if _nonzero(lhs - rhs):
                rep.add("identity (2)", (j, k, i), lhs - rhs)
    for j, x in enumerate(X):
        for (i, a), (l, b) in itertools.product(enumerate(A), repeat=2):
            rep.checked += 2
            lhs = tle(x, br1(a, b))
            rhs = tle(tle(x, a), b) - tle(tle(x, b), a)
            if _nonzero(lhs - rhs):
                rep.add("right module", (j, i, l), lhs - rhs)
            lhs = tri(x, br1(a, b))
            rhs = br1(tri(x, a), b) + br1(a, tri(x, b)) + tri(tle(x, a), b) - tri(tle(x, b), a)
            if _nonzero(lhs - rhs):
                rep.add("identity (1)", (j, i, l), lhs - rhs)
    return rep


def double_bracket_constants(mp: LieMatchedPair) -> np.ndarray:
    """Structure constants of the double on the basis (a_0.., x_0..), without verification."""
    n1, n2 = mp.g1.dim, mp.g2.dim
    d = n1 + n2
    c = zeros(d, d, d)
    c[:n1, :n1, :n1] = mp.g1.c
    c[n1:, n1:, n1:] = mp.g2.c
    for j, i in itertools.product(range(n2), range(n1)):
        # [x_j, a_i] = x_j |> a_i + x_j <| a_i
        c[n1 + j, i, :n1] = mp.act_right_on_left[j, i]
        c[n1 + j, i, n1:] = mp.act_left_on_right[j, i]
        c[i, n1 + j] = -c[n1 + j, i]
    return c


def double_lie_algebra(mp: LieMatchedPair) -> LieAlgebra:
    rep = verify_matched_lie(mp)
    if not rep.ok:
        law, idx, _ = rep.defects[0]
        raise LieError(f"not a matched pair: {law} fails at {idx}")
    D = LieAlgebra(double_bracket_constants(mp))
    jac = verify_jacobi(D)
    if not jac.ok:  # would mean the identities above are mis-transcribed
        raise LieError(f"double violates Jacobi at {jac.defects[0][1]}")
    return D


def restriction_consistent(mp: LieMatchedPair, D: LieAlgebra) -> bool:
    """The double's bracket restricted to g1 and to g2 equals the input brackets."""
    n1 = mp.g1.dim
    return bool((D.c[:n1, :n1, :n1] == mp.g1.c).all() and (D.c[n1:, n1:, n1:] == mp.g2.c).all()
                and not _nonzero(D.c[:n1, :n1, n1:]) and not _nonzero(D.c[n1:, n1:, :n1]))


def from_embedding(L: LieAlgebra, g1_basis, g2_basis) -> LieMatchedPair:
    """Actions obtained by projecting brackets of L onto a complementary pair of subalgebras.

    ``g1_basis`` and ``g2_basis`` are lists of coordinate vectors in L.
    """
    B1 = [rational_array(v, (L.dim,)) for v in g1_basis]
    B2 = [rational_array(v, (L.dim,)) for v in g2_basis]
    n1, n2 = len(B1), len(B2)
    if n1 + n2 != L.dim:
        raise LieError("subalgebra dimensions must add up to the dimension of L")
    P = zeros(L.dim, L.dim)
    for col, v in enumerate(B1 + B2):
        P[:, col] = v
    Pinv = _inverse(P)

    def split(v):
        w = _matvec(Pinv, v)
        return w[:n1], w[n1:]

    c1, c2 = zeros(n1, n1, n1), zeros(n2, n2, n2)
    for i, k in itertools.product(range(n1), repeat=2):
        a, x = split(L.bracket(B1[i], B1[k]))
        if _nonzero(x):
            raise LieError("g1 basis does not span a subalgebra")
        c1[i, k] = a
    for j, k in itertools.product(range(n2), repeat=2):
        a, x = split(L.bracket(B2[j], B2[k]))
        if _nonzero(a):
            raise LieError("g2 basis does not span a subalgebra")
        c2[j, k] = x
    tri, tle = zeros(n2, n1, n1), zeros(n2, n1, n2)
    for j, i in itertools.product(range(n2), range(n1)):
        tri[j, i], tle[j, i] = split(L.bracket(B2[j], B1[i]))
    return LieMatchedPair(LieAlgebra(c1), LieAlgebra(c2), tri, tle)


def double_basis_matrix(g1_basis, g2_basis) -> np.ndarray:
    """Columns: the embedded basis, i.e. the change of basis from the double back to L."""
    cols = [rational_array(v) for v in list(g1_basis) + list(g2_basis)]
    P = zeros(len(cols[0]), len(cols))
    for i, v in enumerate(cols):
        P[:, i] = v
    return P


def is_isomorphism(P, source: LieAlgebra, target: LieAlgebra) -> bool:
    """``P [e_i, e_j]_source == [P e_i, P e_j]_target`` for all basis pairs (P maps source coords to target)."""
    P = rational_array(P, (target.dim, source.dim))
    if source.dim != target.dim:
        return False
    try:
        _inverse(P)
    except LieError:
        return False
    cols = [P[:, i] for i in range(source.dim)]
    for i, j in itertools.product(range(source.dim), repeat=2):
        if _nonzero(_matvec(P, source.c[i, j]) - target.bracket(cols[i], cols[j])):
            return False
    return True


# -- Lie bialgebras -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieBialgebra:
    algebra: LieAlgebra
    cobracket: np.ndarray  # T[i, j, k]: delta(e_i) = sum T[i, j, k] e_j (x) e_k

    @classmethod
    def from_wedge_table(cls, L: LieAlgebra, table) -> "LieBialgebra":
        """``table[i][p]`` is the coefficient of ``e_j ^ e_k`` (p-th pair j < k) in delta(e_i)."""
        d = L.dim
        pairs = list(itertools.combinations(range(d), 2))
        tab = rational_array(table, (d, len(pairs))) if pairs else zeros(d, 0)
        T = zeros(d, d, d)
        for i in range(d):
            for p, (j, k) in enumerate(pairs):
                T[i, j, k] += tab[i, p]
                T[i, k, j] -= tab[i, p]
        return cls(L, T)

    @classmethod
    def from_tensor(cls, L: LieAlgebra, T) -> "LieBialgebra":
        return cls(L, rational_array(T, (L.dim,) * 3))

    def delta(self, u) -> np.ndarray:
        d = self.algebra.dim
        out = zeros(d, d)
        for i in range(d):
            if u[i]:
                out += u[i] * self.cobracket[i]
        return out

    def wedge_table(self) -> list:
        d = self.algebra.dim
        return [[_fmt(self.cobracket[i, j, k]) for j, k in itertools.combinations(range(d), 2)]
                for i in range(d)]

    def to_document(self) -> dict:
        return {"algebra": self.algebra.to_document(), "cobracket": self.wedge_table()}


def _ad2(L: LieAlgebra, u, t: np.ndarray) -> np.ndarray:
    """``ad_u`` on a 2-tensor: ``[u, a] (x) b + a (x) [u, b]``."""
    d = L.dim
    out = zeros(d, d)
    for a, b in itertools.product(range(d), repeat=2):
        w = t[a, b]
        if not w:
            continue
        ua = L.bracket(u, L.basis(a))
        ub = L.bracket(u, L.basis(b))
        for k in range(d):
            if ua[k]:
                out[k, b] += w * ua[k]
            if ub[k]:
                out[a, k] += w * ub[k]
    return out


def verify_lie_bialgebra(B: LieBialgebra) -> Report:
    """Co-antisymmetry ``(id + tau) delta = 0``, co-Jacobi and the cocycle compatibility.

    Compatibility is checked in the form
    ``delta[u, v] = ad_u delta(v) - ad_v delta(u)``, which expands to the
    four-term identity with Sweedler-type legs.
    """
    L = B.algebra
    rep = verify_jacobi(L)
    rep.name = "lie_bialgebra"
    d = L.dim
    T = B.cobracket
    for i in range(d):
        rep.checked += 1
        s = T[i] + T[i].T
        if _nonzero(s):
            rep.add("co-antisymmetry", (i,), s)
    for i in range(d):
        rep.checked += 1
        # Q[j, l, m] = coefficient of e_j e_l e_m in (id (x) delta) delta(e_i)
        Q = zeros(d, d, d)
        for j, k in itertools.product(range(d), repeat=2):
            if T[i, j, k]:
                Q[j] += T[i, j, k] * T[k]
        # zeta(u v w) = v w u, so (zeta Q)[a, b, c] = Q[c, a, b]
        S = Q + np.transpose(Q, (1, 2, 0)) + np.transpose(Q, (2, 0, 1))
        if _nonzero(S):
            rep.add("co-Jacobi", (i,), S)
    for i, j in itertools.product(range(d), repeat=2):
        rep.checked += 1
        u, v = L.basis(i), L.basis(j)
        lhs = B.delta(L.bracket(u, v))
        rhs = _ad2(L, u, B.delta(v)) - _ad2(L, v, B.delta(u))
        if _nonzero(lhs - rhs):
            rep.add("compatibility", (i, j), lhs - rhs)
    return rep


# -- exponentiated ax+b actions -----------------------------------------------

def evaluate_axb_actions(g, s) -> tuple[Fraction, Fraction]:
    """``alpha_g(s) = g(s-1) + 1`` and ``beta_s(g) = s g / (g(s-1) + 1)`` for nonzero rationals.

    These are the mutual actions of G1 = G2 = (Q\\{0}, .) embedded as
    ``i(g) = (g, 0)`` and ``j(s) = (s, s - 1)`` in the group
    ``(t, x)(t', x') = (t t', x + t x')``.
    """
    g, s = _q(g), _q(s)
    if g == 0 or s == 0:
        raise LieError("arguments must be nonzero")
    den = g * (s - 1) + 1
    if den == 0:
        raise LieError(f"g(s-1)+1 vanishes at g={g}, s={s}")
    return den, s * g / den


def axb_identities(h, g, s, t) -> dict:
    """The four composition identities of the mutual actions at one point.

    Returns a dict name -> (lhs, rhs), or raises LieError on a singular point.
    """
    h, g, s, t = map(_q, (h, g, s, t))
    a = lambda g_, s_: evaluate_axb_actions(g_, s_)[0]
    b = lambda g_, s_: evaluate_axb_actions(g_, s_)[1]
    return {
        "alpha_hg(s) = alpha_h(alpha_g(s))": (a(h * g, s), a(h, a(g, s))),
        "beta_s(hg) = beta_alpha_g(s)(h) beta_s(g)": (b(h * g, s), b(h, a(g, s)) * b(g, s)),
        "beta_ts(g) = beta_t(beta_s(g))": (b(g, t * s), b(b(g, s), t)),
        "alpha_g(ts) = alpha_beta_s(g)(t) alpha_g(s)": (a(g, t * s), a(b(g, s), t) * a(g, s)),
    }


def axb_pair_identity(g, s) -> bool:
    """``j(alpha_g(s)) i(beta_s(g)) == i(g) j(s)`` in the group ``(t, x)(t', x') = (t t', x + t x')``."""
    al, be = evaluate_axb_actions(g, s)
    g, s = _q(g), _q(s)
    mul = lambda p, q: (p[0] * q[0], p[1] + p[0] * q[1])
    return mul((al, al - 1), (be, Fraction(0))) == mul((g, Fraction(0)), (s, s - 1))


# -- fixtures and documents ---------------------------------------------------

def axb_algebra() -> LieAlgebra:
    """span{X, Y} with [X, Y] = Y."""
    return LieAlgebra.from_brackets(2, {(0, 1): {1: 1}})


AXB_G1 = [[1, 0]]          # X
AXB_G2 = [[1, 1]]          # X + Y


def axb_matched_pair() -> LieMatchedPair:
    return from_embedding(axb_algebra(), AXB_G1, AXB_G2)


def family_algebra(alpha) -> LieAlgebra:
    """span{X, Y, Z} with [X,Y] = Y, [X,Z] = alpha Z, [Y,Z] = 0."""
    return LieAlgebra.from_brackets(3, {(0, 1): {1: 1}, (0, 2): {2: _q(alpha)}})


def family_split(alpha):
    """span{X, Y} and Q(X + alpha Z)."""
    return [[1, 0, 0], [0, 1, 0]], [[1, 0, _q(alpha)]]


def family_matched_pair(alpha) -> LieMatchedPair:
    b1, b2 = family_split(alpha)
    return from_embedding(family_algebra(alpha), b1, b2)


def parse_lie_algebra(doc: dict) -> LieAlgebra:
    if "dim" not in doc or "c" not in doc:
        raise LieError("Lie algebra document needs 'dim' and 'c'")
    d = int(doc["dim"])
    if d < 0:
        raise LieError("negative dimension")
    try:
        return LieAlgebra.from_constants(doc["c"], d)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise LieError(f"bad structure constants: {exc}") from exc


def parse_matched_lie(doc: dict) -> LieMatchedPair:
    """Either explicit tables (``g1``, ``g2``, two action tables) or an embedding
    (``algebra``, ``g1_basis``, ``g2_basis``)."""
    try:
        if "algebra" in doc:
            return from_embedding(parse_lie_algebra(doc["algebra"]), doc["g1_basis"], doc["g2_basis"])
        g1, g2 = parse_lie_algebra(doc["g1"]), parse_lie_algebra(doc["g2"])
        for key, dim in (("g1_dim", g1.dim), ("g2_dim", g2.dim)):
            if key in doc and int(doc[key]) != dim:
                raise LieError(f"{key} disagrees with the algebra")
        return LieMatchedPair.from_tables(g1, g2, doc["act_right_on_left"], doc["act_left_on_right"])
    except KeyError as exc:
        raise LieError(f"missing field {exc}") from exc
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, LieError):
            raise
        raise LieError(str(exc)) from exc


def parse_lie_bialgebra(doc: dict) -> LieBialgebra:
    try:
        L = parse_lie_algebra(doc["algebra"])
        if "cobracket_tensor" in doc:
            return LieBialgebra.from_tensor(L, doc["cobracket_tensor"])
        return LieBialgebra.from_wedge_table(L, doc["cobracket"])
    except KeyError as exc:
        raise LieError(f"missing field {exc}") from exc
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, LieError):
            raise
        raise LieError(str(exc)) from exc


def random_matched_pair(rng, n1: int, n2: int, lo: int = -3, hi: int = 3, density: float = 0.3,
                        max_tries: int = 100000) -> LieMatchedPair:
    """Rejection-sample integer structure constants and action tables until the pair verifies.

    Entries are drawn from [lo, hi] and kept with probability ``density``
    (sparse tables make verified pairs common enough to sample).
    """
    def draw(shape):
        vals = rng.integers(lo, hi + 1, size=shape)
        keep = rng.random(shape) < density
        return np.where(keep, vals, 0)

    def algebra(d):
        c = zeros(d, d, d)
        for i, j in itertools.combinations(range(d), 2):
            for k, v in enumerate(draw(d)):
                c[i, j, k] = Fraction(int(v))
                c[j, i, k] = -Fraction(int(v))
        return LieAlgebra(c)

    for _ in range(max_tries):
        g1, g2 = algebra(n1), algebra(n2)
        if not (verify_jacobi(g1).ok and verify_jacobi(g2).ok):
            continue
        mp = LieMatchedPair.from_tables(g1, g2, draw((n2, n1, n1)).tolist(), draw((n2, n1, n2)).tolist())
        if verify_matched_lie(mp).ok:
            return mp
    raise LieError("no verified matched pair found")
