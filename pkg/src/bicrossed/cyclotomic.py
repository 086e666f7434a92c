"""Exact arithmetic in the cyclotomic field Q(zeta_N) and sparse matrices over it.

Elements are tuples of rationals (``gmpy2.mpq``) of length ``phi(N)``:
coefficients of a polynomial in ``zeta = exp(2 pi i / N)`` reduced modulo the
N-th cyclotomic polynomial, so equal field elements have equal tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import gmpy2
import mpmath
import sympy

Elem = tuple  # tuple[gmpy2.mpq, ...]
Q = gmpy2.mpq


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> "CyclotomicField":
    return CyclotomicField(N)


class CyclotomicField:
    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = N
        x = sympy.Symbol("x")
        poly = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
        # monic: x^d = -sum_{k<d} c_k x^k
        coeffs = [Q(int(c)) for c in reversed(poly.all_coeffs())]
        self.degree = d = len(coeffs) - 1
        self._reduce_tail = [-c for c in coeffs[:d]]
        self.zero: Elem = (Q(0),) * d
        self.one: Elem = self.from_poly([1])
        self._roots = [self.from_poly([0] * k + [1]) for k in range(N)]
        # zeta^k acts on coefficient vectors by an integer matrix; store its columns
        self._root_maps = []
        for k in range(N):
            cols = [self.from_poly([0] * (k + j) + [1]) for j in range(d)]
            self._root_maps.append(cols)

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def from_poly(self, coeffs) -> Elem:
        """Reduce a coefficient list (lowest degree first) modulo the cyclotomic polynomial."""
        c = [Q(x) for x in coeffs]
        d = self.degree
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                for j, t in enumerate(self._reduce_tail):
                    if t:
                        c[k - d + j] += top * t
            c[k] = Q(0)
        c = c[:d] + [Q(0)] * (d - len(c))
        return tuple(c)

    def rational(self, q) -> Elem:
        return (Q(q),) + (Q(0),) * (self.degree - 1)

    def root(self, k: int) -> Elem:
        """``zeta_N ** k``."""
        return self._roots[k % self.N]

    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        return tuple(-x for x in a)

    def scale(self, q, a: Elem) -> Elem:
        return tuple(q * x for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        if self.degree == 1:
            return (a[0] * b[0],)
        if not any(a[1:]):
            x = a[0]
            return tuple(x * y for y in b)
        if not any(b[1:]):
            y = b[0]
            return tuple(x * y for x in a)
        prod = [Q(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self.from_poly(prod)

    def mul_root(self, k: int, a: Elem) -> Elem:
        k %= self.N
        if k == 0:
            return a
        if self.degree == 1:  # N = 2
            return (-a[0],)
        out = [Q(0)] * self.degree
        for x, col in zip(a, self._root_maps[k]):
            if x:
                for i, y in enumerate(col):
                    if y:
                        out[i] += x * y
        return tuple(out)

    def is_zero(self, a: Elem) -> bool:
        return not any(a)

    def conj(self, a: Elem) -> Elem:
        """Complex conjugation: zeta -> zeta^-1."""
        out = [Q(0)] * self.degree
        for k, x in enumerate(a):
            if x:
                for i, y in enumerate(self._roots[-k % self.N]):
                    if y:
                        out[i] += x * y
        return tuple(out)

    def inv(self, a: Elem) -> Elem:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.degree == 1:
            return (1 / a[0],)
        # solve (a * x) = 1 as a linear system in the power basis
        d = self.degree
        cols = [self.mul(a, self.root(k)) for k in range(d)]
        A = [[cols[j][i] for j in range(d)] + [self.one[i]] for i in range(d)]
        x = _solve_rational(A, d)
        return tuple(x)

    def div(self, a: Elem, b: Elem) -> Elem:
        return self.mul(a, self.inv(b))

    def to_complex(self, a: Elem, prec: int = 53) -> complex:
        with mpmath.workprec(prec):
            z = mpmath.exp(2j * mpmath.pi / self.N)
            return complex(sum(mpmath.mpf(int(x.numerator)) / int(x.denominator) * z ** k for k, x in enumerate(a)))

    def is_real(self, a: Elem) -> bool:
        return self.conj(a) == a

    def real_sign(self, a: Elem) -> int:
        """Sign of a real field element, decided exactly (zero) or by rising precision."""
        if not self.is_real(a):
            raise ValueError("element is not real")
        if self.is_zero(a):
            return 0
        iv = mpmath.iv
        saved = iv.prec
        try:
            return self._interval_sign(a, iv, 64)
        finally:
            iv.prec = saved

    def _interval_sign(self, a: Elem, iv, prec: int) -> int:
        while prec <= 1 << 16:
            iv.prec = prec
            angle = 2 * iv.pi / self.N
            val = iv.mpf(0)
            for k, x in enumerate(a):
                if x:
                    val += iv.mpf(int(x.numerator)) / int(x.denominator) * iv.cos(k * angle)
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
            prec *= 2
        raise ArithmeticError("could not decide the sign of a nonzero element")

    def format(self, a: Elem) -> str:
        terms = []
        for k, x in enumerate(a):
            if x:
                terms.append(f"{x}" if k == 0 else f"{x}*z^{k}")
        return " + ".join(terms) if terms else "0"


def _solve_rational(A, n):
    """Solve the square system given as augmented rows of rationals."""
    A = [row[:] for row in A]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


@dataclass(eq=False)
class CyclotomicMatrix:
    """Sparse matrix over Q(zeta_N); ``entries`` maps ``(row, col)`` to nonzero elements."""

    field: CyclotomicField
    shape: tuple[int, int]
    entries: dict = field(default_factory=dict)

    @classmethod
    def identity(cls, F: CyclotomicField, n: int) -> "CyclotomicMatrix":
        return cls(F, (n, n), {(i, i): F.one for i in range(n)})

    @classmethod
    def from_monomial(cls, F: CyclotomicField, op) -> "CyclotomicMatrix":
        step = F.N // op.N if F.N % op.N == 0 else None
        if step is None:
            raise ValueError("field does not contain the operator's phases")
        n = op.dimension
        return cls(F, (n, n), {(int(op.perm[b]), b): F.root(int(op.phase[b]) * step) for b in range(n)})

    def __eq__(self, other):
        if not isinstance(other, CyclotomicMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        F = self.field
        out = dict(self.entries)
        for k, v in other.entries.items():
            if k in out:
                s = F.add(out[k], v)
                if F.is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return CyclotomicMatrix(F, self.shape, out)

    def __neg__(self):
        F = self.field
        return CyclotomicMatrix(F, self.shape, {k: F.neg(v) for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Elem) -> "CyclotomicMatrix":
        F = self.field
        if F.is_zero(c):
            return CyclotomicMatrix(F, self.shape, {})
        return CyclotomicMatrix(F, self.shape, {k: F.mul(c, v) for k, v in self.entries.items()})

    def __matmul__(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        F = self.field
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                p = F.mul(a, b)
                key = (r, c)
                out[key] = F.add(out[key], p) if key in out else p
        out = {k: v for k, v in out.items() if not F.is_zero(v)}
        return CyclotomicMatrix(F, (self.shape[0], other.shape[1]), out)

    def adjoint(self) -> "CyclotomicMatrix":
        F = self.field
        return CyclotomicMatrix(F, (self.shape[1], self.shape[0]),
                                {(c, r): F.conj(v) for (r, c), v in self.entries.items()})

    def kron(self, other: "CyclotomicMatrix") -> "CyclotomicMatrix":
        F = self.field
        r2, c2 = other.shape
        out = {}
        for (r, c), a in self.entries.items():
            for (rr, cc), b in other.entries.items():
                out[(r * r2 + rr, c * c2 + cc)] = F.mul(a, b)
        return CyclotomicMatrix(F, (self.shape[0] * r2, self.shape[1] * c2), out)

    def conjugate_by(self, op) -> "CyclotomicMatrix":
        """``U* X U`` for a monomial unitary ``U``."""
        F = self.field
        step = F.N // op.N
        inv = [0] * op.dimension
        for b, p in enumerate(op.perm):
            inv[int(p)] = b
        ph = op.phase
        out = {}
        for (r, c), v in self.entries.items():
            br, bc = inv[r], inv[c]
            out[(br, bc)] = F.mul_root((int(ph[bc]) - int(ph[br])) * step, v)
        return CyclotomicMatrix(F, self.shape, out)

    def trace(self) -> Elem:
        F = self.field
        out = F.zero
        for (r, c), v in self.entries.items():
            if r == c:
                out = F.add(out, v)
        return out

    def to_complex(self):
        import numpy as np

        A = np.zeros(self.shape, dtype=complex)
        for (r, c), v in self.entries.items():
            A[r, c] = self.field.to_complex(v)
        return A


class SpanBasis:
    """Incrementally maintained reduced echelon basis of a span of sparse vectors.

    Vectors are dicts from sortable keys to field elements. Each basis vector
    is 1 at its pivot key and every other basis vector is 0 there, so the
    coordinates of a vector in the span are its values at the pivots. The
    basis also records how each basis vector combines the vectors that were
    offered to :meth:`add` (``combos``).
    """

    def __init__(self, F: CyclotomicField):
        self.F = F
        self.vectors: list[dict] = []
        self.pivots: list = []
        self.combos: list[dict] = []  # basis index -> {generator index: coefficient}
        self._ngen = 0

    def __len__(self):
        return len(self.vectors)

    def _reduce(self, vec: dict, combo: dict):
        F = self.F
        vec = dict(vec)
        for b, p, cb in zip(self.vectors, self.pivots, self.combos):
            c = vec.get(p)
            if c is None:
                continue
            _axpy(F, vec, F.neg(c), b)
            _axpy(F, combo, F.neg(c), cb)
        return vec, combo

    def add(self, vec: dict) -> bool:
        """Offer a vector; returns True when it enlarged the span."""
        F = self.F
        gen = self._ngen
        self._ngen += 1
        vec, combo = self._reduce(vec, {gen: F.one})
        if not vec:
            return False
        p = min(vec)
        s = F.inv(vec[p])
        vec = {k: F.mul(s, v) for k, v in vec.items()}
        combo = {k: F.mul(s, v) for k, v in combo.items()}
        for i, b in enumerate(self.vectors):
            c = b.get(p)
            if c is not None:
                _axpy(F, b, F.neg(c), vec)
                _axpy(F, self.combos[i], F.neg(c), combo)
        self.vectors.append(vec)
        self.pivots.append(p)
        self.combos.append(combo)
        return True

    def coordinates(self, vec: dict):
        """Coordinates of ``vec`` in the basis, or ``None`` when it is outside the span."""
        F = self.F
        coords = [vec.get(p, F.zero) for p in self.pivots]
        rest = dict(vec)
        for c, b in zip(coords, self.vectors):
            if not F.is_zero(c):
                _axpy(F, rest, F.neg(c), b)
        return None if rest else coords

    def contains(self, vec: dict) -> bool:
        return self.coordinates(vec) is not None


def _axpy(F: CyclotomicField, y: dict, a: Elem, x: dict) -> None:
    """``y += a * x`` in place, dropping zeros."""
    for k, v in x.items():
        t = F.mul(a, v)
        if k in y:
            s = F.add(y[k], t)
            if F.is_zero(s):
                del y[k]
            else:
                y[k] = s
        else:
            y[k] = t


def solve_linear(F: CyclotomicField, rows, nvars: int):
    """Solve ``rows`` (each a ``(coeff dict, rhs)``) over F.

    Returns ``(particular, null_basis)`` where ``particular`` is a list of
    length ``nvars`` or ``None`` when inconsistent, and ``null_basis`` spans
    the homogeneous solutions.
    """
    echelon: list[tuple[dict, Elem]] = []
    pivots: list[int] = []
    for coeffs, rhs in rows:
        vec = {k: v for k, v in coeffs.items() if not F.is_zero(v)}
        for (e, er), p in zip(echelon, pivots):
            c = vec.get(p)
            if c is not None:
                _axpy(F, vec, F.neg(c), e)
                rhs = F.sub(rhs, F.mul(c, er))
        if not vec:
            if not F.is_zero(rhs):
                return None, []
            continue
        p = min(vec)
        s = F.inv(vec[p])
        vec = {k: F.mul(s, v) for k, v in vec.items()}
        rhs = F.mul(s, rhs)
        for i, (e, er) in enumerate(echelon):
            c = e.get(p)
            if c is not None:
                _axpy(F, e, F.neg(c), vec)
                echelon[i] = (e, F.sub(er, F.mul(c, rhs)))
        echelon.append((vec, rhs))
        pivots.append(p)
    free = [j for j in range(nvars) if j not in set(pivots)]
    particular = [F.zero] * nvars
    for (e, er), p in zip(echelon, pivots):
        particular[p] = er
    null = []
    for f in free:
        x = [F.zero] * nvars
        x[f] = F.one
        for (e, er), p in zip(echelon, pivots):
            c = e.get(f)
            if c is not None:
                x[p] = F.neg(c)
        null.append(x)
    return particular, null
