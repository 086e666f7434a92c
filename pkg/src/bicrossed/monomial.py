"""Monomial unitaries: a permutation of basis vectors with root-of-unity phases.

``MonomialOperator(dims, perm, phase, N)`` maps basis vector ``b`` to
``zeta_N**phase[b] * e_{perm[b]}`` where ``zeta_N = exp(2 pi i / N)``.
Basis vectors of a tensor product are indexed in row-major order over
``dims``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm, prod
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class MonomialOperator:
    dims: tuple[int, ...]
    perm: np.ndarray
    phase: np.ndarray
    N: int = 1

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        perm = np.asarray(self.perm, dtype=np.int64)
        phase = np.asarray(self.phase, dtype=np.int64) % self.N
        if perm.shape != (prod(dims),) or phase.shape != perm.shape:
            raise ValueError("perm/phase length must equal the product of dims")
        perm.setflags(write=False)
        phase.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phase", phase)

    @property
    def dimension(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, dims: Sequence[int], N: int = 1) -> "MonomialOperator":
        n = prod(dims)
        return cls(tuple(dims), np.arange(n), np.zeros(n, dtype=np.int64), N)

    @classmethod
    def from_pullback(cls, dims, pullback: Callable, multiplier: Callable | None = None, N: int = 1):
        """Operator ``(T xi)(x) = zeta**multiplier(x) * xi(pullback(x))`` on functions of a multi-index.

        ``pullback`` and ``multiplier`` take and return multi-indices (tuples).
        """
        dims = tuple(dims)
        n = prod(dims)
        perm = np.empty(n, dtype=np.int64)
        phase = np.zeros(n, dtype=np.int64)
        for x in np.ndindex(*dims):
            y = pullback(*x)
            src = np.ravel_multi_index(y, dims)
            dst = np.ravel_multi_index(x, dims)
            # T e_src has its single entry at x
            perm[src] = dst
            if multiplier is not None:
                phase[src] = multiplier(*x)
        if len(np.unique(perm)) != n:
            raise ValueError("pullback is not a bijection")
        return cls(dims, perm, phase, N)

    def with_order(self, N: int) -> "MonomialOperator":
        """Same operator with phases expressed over ``mu_N`` (N a multiple of self.N)."""
        if N % self.N:
            raise ValueError(f"{N} is not a multiple of {self.N}")
        return MonomialOperator(self.dims, self.perm, self.phase * (N // self.N), N)

    def _common(self, other):
        N = lcm(self.N, other.N)
        return self.with_order(N), other.with_order(N)

    def __matmul__(self, other: "MonomialOperator") -> "MonomialOperator":
        """Composition ``self o other``."""
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        A, B = self._common(other)
        return MonomialOperator(A.dims, A.perm[B.perm], B.phase + A.phase[B.perm], A.N)

    def adjoint(self) -> "MonomialOperator":
        perm = np.empty_like(self.perm)
        perm[self.perm] = np.arange(self.dimension)
        phase = np.empty_like(self.phase)
        phase[self.perm] = -self.phase
        return MonomialOperator(self.dims, perm, phase, self.N)

    def __eq__(self, other):
        if not isinstance(other, MonomialOperator):
            return NotImplemented
        if self.dimension != other.dimension:
            return False
        A, B = self._common(other)
        return np.array_equal(A.perm, B.perm) and np.array_equal(A.phase, B.phase)

    def __hash__(self):
        return hash((self.perm.tobytes(), self.N))

    def regroup(self, dims: Sequence[int]) -> "MonomialOperator":
        """Same operator with a different (compatible) tensor factorization."""
        if prod(dims) != self.dimension:
            raise ValueError("incompatible regrouping")
        return MonomialOperator(tuple(dims), self.perm, self.phase, self.N)

    def first_difference(self, other: "MonomialOperator") -> int | None:
        A, B = self._common(other)
        diff = np.flatnonzero((A.perm != B.perm) | (A.phase != B.phase))
        return int(diff[0]) if len(diff) else None

    def entries(self):
        """Sparse triplets ``(row, col, phase_exponent)``."""
        return [(int(self.perm[b]), b, int(self.phase[b])) for b in range(self.dimension)]

    def to_document(self) -> dict:
        return {"dims": list(self.dims), "N": self.N, "entries": self.entries()}

    def is_diagonal(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.dimension)))


def embed(op: MonomialOperator, legs: Sequence[int], dims: Sequence[int]) -> MonomialOperator:
    """Leg embedding: ``op`` acting on tensor factors ``legs`` of a space with ``dims``.

    Factors of ``op`` are matched with ``legs`` in order, e.g. ``X_13`` is
    ``embed(X, (0, 2), (n, n, n))``.
    """
    dims = tuple(dims)
    legs = tuple(legs)
    sub_dims = tuple(dims[i] for i in legs)
    if prod(sub_dims) != op.dimension:
        raise ValueError("leg sizes do not match operator dimension")
    n = prod(dims)
    digits = np.array(np.unravel_index(np.arange(n), dims))
    sub = np.ravel_multi_index(tuple(digits[i] for i in legs), sub_dims)
    new_sub = op.perm[sub]
    new_digits = digits.copy()
    moved = np.unravel_index(new_sub, sub_dims)
    for k, i in enumerate(legs):
        new_digits[i] = moved[k]
    perm = np.ravel_multi_index(tuple(new_digits), dims)
    return MonomialOperator(dims, perm, op.phase[sub], op.N)


def flip(n: int, m: int | None = None, N: int = 1) -> MonomialOperator:
    """The flip ``Sigma: H (x) K -> K (x) H`` on basis vectors (square case when m is None)."""
    m = n if m is None else m
    a, b = np.divmod(np.arange(n * m), m)
    return MonomialOperator((m, n), b * n + a, np.zeros(n * m, dtype=np.int64), N)


def legs3(W: MonomialOperator, n: int):
    """``W_12, W_13, W_23`` on ``H (x) H (x) H`` with ``dim H = n``."""
    W = W.regroup((n, n))
    dims = (n, n, n)
    return embed(W, (0, 1), dims), embed(W, (0, 2), dims), embed(W, (1, 2), dims)


def verify_pentagon(W: MonomialOperator, n: int | None = None) -> tuple[bool, int | None]:
    """Check ``W_12 W_13 W_23 == W_23 W_12`` exactly; return ``(ok, first failing basis index)``."""
    if n is None:
        n = int(round(W.dimension ** 0.5))
    if n * n != W.dimension:
        raise ValueError("W must act on H (x) H")
    W12, W13, W23 = legs3(W, n)
    lhs = W12 @ W13 @ W23
    rhs = W23 @ W12
    bad = lhs.first_difference(rhs)
    return bad is None, bad


def group_unitary(G) -> MonomialOperator:
    """``W_G`` on l2(G) (x) l2(G): ``(W xi)(g, h) = xi(g, g^-1 h)``, i.e. ``d_a (x) d_b -> d_a (x) d_ab``."""
    n = G.order
    return MonomialOperator.from_pullback((n, n), lambda g, h: (g, G.mul(G.inv(g), h)))


def fundamental_unitary(mp, c=None) -> tuple[MonomialOperator, MonomialOperator]:
    """``(W, W_hat)`` of the cocycle bicrossed product on H (x) H, H = l2(G1) (x) l2(G2).

    Legs are ordered (G1, G2, G1, G2) with variables ``(g, s, h, t)``.
    ``W_hat = A B`` with

        (A xi)(g,s,h,t) = conj U(b_s(g), b_s(g)^-1 h, t) xi(g, s, b_s(g)^-1 h, t)
        (B xi)(g,s,h,t) = V(g, s, a_h(t)) xi(g, a_h(t) . s, h, t)

    (A is the beta-twisted copy of (W_G1 (x) 1) U*, B the alpha-twisted copy
    of V (1 (x) W_hat_G2)), and ``W = Sigma W_hat* Sigma``. ``c`` must be a
    normalized cocycle pair; ``None`` means the trivial pair.
    """
    from .cocycles import CocycleError, PhaseCocyclePair, cocycle_violations

    n1, n2 = mp.n1, mp.n2
    if c is None:
        c = PhaseCocyclePair.trivial(mp, 1)
    bad = cocycle_violations(mp, c, limit=1)
    if bad:
        raise CocycleError(f"not a normalized cocycle pair: {bad[0]}")
    N, u, v = c.N, c.u, c.v
    dims = (n1, n2, n1, n2)

    def a_pull(g, s, h, t):
        x = mp.b(s, g)
        return g, s, mp.g1_mul(mp.g1_inv(x), h), t

    def a_phase(g, s, h, t):
        x = mp.b(s, g)
        return -u[x, mp.g1_mul(mp.g1_inv(x), h), t]

    def b_pull(g, s, h, t):
        return g, mp.g2_mul(mp.a(h, t), s), h, t

    def b_phase(g, s, h, t):
        return v[g, s, mp.a(h, t)]

    A = MonomialOperator.from_pullback(dims, a_pull, a_phase, N)
    B = MonomialOperator.from_pullback(dims, b_pull, b_phase, N)
    W_hat = (A @ B).regroup((n1 * n2, n1 * n2))
    S = flip(n1 * n2, N=N)
    W = S @ W_hat.adjoint() @ S
    return W, W_hat
