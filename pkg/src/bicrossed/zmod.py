"""Exact linear algebra over Z/N.

Row vectors throughout. The workhorse is the Howell form: an echelon
basis of a submodule of (Z/N)^c such that, for every k, the rows with
pivot column >= k span all module elements vanishing in the first k
columns. With it, reduction of a vector is canonical (it yields the
lexicographically least element of its coset) and kernels can be read
off an augmented matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np
from sympy import factorint


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unit_normalizer(a: int, N: int) -> int:
    """A unit ``u`` mod N with ``u*a == gcd(a, N) (mod N)``."""
    a %= N
    if a == 0:
        return 1
    g = gcd(a, N)
    m = N // g
    u0 = pow(a // g, -1, m) if m > 1 else 0
    for k in range(g):
        u = u0 + k * m
        if gcd(u, N) == 1:
            return u % N
    raise ArithmeticError("no unit normalizer")  # cannot happen


def as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    A = np.array(rows, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(-1, ncols if ncols is not None else A.shape[0])
    if A.size == 0 and ncols is not None:
        A = A.reshape(0, ncols)
    return A


@dataclass
class Howell:
    """Howell basis ``rows`` with pivot columns ``pivots`` over Z/N."""

    rows: np.ndarray
    pivots: list[int]
    N: int

    def reduce(self, v) -> np.ndarray:
        """Canonical (lexicographically least) representative of ``v + span``."""
        v = np.asarray(v, dtype=np.int64) % self.N
        for row, col in zip(self.rows, self.pivots):
            q = int(v[col]) // int(row[col])
            if q:
                v = (v - q * row) % self.N
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    @property
    def ncols(self) -> int:
        return self.rows.shape[1]

    def order(self) -> int:
        """Cardinality of the spanned submodule."""
        out = 1
        for row, col in zip(self.rows, self.pivots):
            out *= self.N // int(row[col])
        return out


def howell_form(A, N: int, ncols: int | None = None) -> Howell:
    A = as_matrix(A, ncols)
    r, c = A.shape
    if N == 1:
        return Howell(np.zeros((0, c), dtype=np.int64), [], 1)
    W = A % N
    W = W[W.any(axis=1)]
    out_rows, pivots = [], []
    for col in range(c):
        if W.shape[0] == 0:
            break
        nz = np.flatnonzero(W[:, col])
        if len(nz) == 0:
            continue
        p = nz[0]
        for i in nz[1:]:
            a, b = int(W[p, col]), int(W[i, col])
            g, s, t = xgcd(a, b)
            rp = (s * W[p] + t * W[i]) % N
            ri = ((b // g) * W[p] - (a // g) * W[i]) % N
            W[p], W[i] = rp, ri
        row = (unit_normalizer(int(W[p, col]), N) * W[p]) % N
        a = int(row[col])
        extra = ((N // a) * row) % N
        W = np.delete(W, p, axis=0)
        W = W[W.any(axis=1)]
        if extra.any():
            W = np.vstack([W, extra[None, :]])
        out_rows.append(row)
        pivots.append(col)
    H = np.array(out_rows, dtype=np.int64).reshape(len(out_rows), c)
    for i, col in enumerate(pivots):
        a = int(H[i, col])
        for j in range(i):
            q = int(H[j, col]) // a
            if q:
                H[j] = (H[j] - q * H[i]) % N
    return Howell(H, pivots, N)


def kernel(E, N: int, ncols: int | None = None) -> np.ndarray:
    """Rows spanning ``{x : E @ x == 0 (mod N)}`` (E has one equation per row)."""
    E = as_matrix(E, ncols)
    r, c = E.shape
    if N == 1:
        return np.zeros((0, c), dtype=np.int64)
    aug = np.hstack([E.T % N, np.eye(c, dtype=np.int64)])
    H = howell_form(aug, N)
    keep = [i for i, col in enumerate(H.pivots) if col >= r]
    return H.rows[keep, r:].reshape(len(keep), c)


def solve_left(K: np.ndarray, z, N: int):
    """Some ``lam`` with ``lam @ K == z (mod N)``, or ``None``."""
    k, c = K.shape
    aug = np.hstack([K % N, np.eye(k, dtype=np.int64)])
    H = howell_form(aug, N)
    rem = H.reduce(np.concatenate([np.asarray(z, dtype=np.int64), np.zeros(k, dtype=np.int64)]))
    if rem[:c].any():
        return None
    return (-rem[c:]) % N


def diagonalize(S, k: int, N: int) -> tuple[list[int], np.ndarray]:
    """Unimodular row/column operations bringing ``S`` (rows in (Z/N)^k) to diagonal form.

    Returns ``(d, Q)`` with ``rowspace(S) @ Q == rowspace(diag(d))``; missing
    diagonal entries are 0. ``Q`` is invertible mod N.
    """
    M = as_matrix(S, k) % N
    M = M[M.any(axis=1)] if M.size else M.reshape(0, k)
    r = M.shape[0]
    Q = np.eye(k, dtype=np.int64)
    d = []
    for t in range(min(r, k)):
        sub = np.argwhere(M[t:, t:] != 0)
        if len(sub) == 0:
            break
        i, j = sub[0] + t
        M[[t, i]] = M[[i, t]]
        M[:, [t, j]] = M[:, [j, t]]
        Q[:, [t, j]] = Q[:, [j, t]]
        while True:
            for i in np.flatnonzero(M[t + 1:, t]) + t + 1:
                a, b = int(M[t, t]), int(M[i, t])
                if b % a == 0:
                    M[i] = (M[i] - (b // a) * M[t]) % N
                else:
                    g, s, u = xgcd(a, b)
                    rt = (s * M[t] + u * M[i]) % N
                    M[i] = ((b // g) * M[t] - (a // g) * M[i]) % N
                    M[t] = rt
            if not M[t, t + 1:].any():
                break
            for j in np.flatnonzero(M[t, t + 1:]) + t + 1:
                a, b = int(M[t, t]), int(M[t, j])
                if b % a == 0:
                    q = b // a
                    M[:, j] = (M[:, j] - q * M[:, t]) % N
                    Q[:, j] = (Q[:, j] - q * Q[:, t]) % N
                else:
                    g, s, u = xgcd(a, b)
                    ct = (s * M[:, t] + u * M[:, j]) % N
                    M[:, j] = ((b // g) * M[:, t] - (a // g) * M[:, j]) % N
                    M[:, t] = ct
                    qt = (s * Q[:, t] + u * Q[:, j]) % N
                    Q[:, j] = ((b // g) * Q[:, t] - (a // g) * Q[:, j]) % N
                    Q[:, t] = qt
            if not M[t + 1:, t].any():
                break
        d.append(int(M[t, t]))
    d += [0] * (k - len(d))
    return d, Q


def invariant_factors_of(orders) -> list[int]:
    """Invariant factors (d1 | d2 | ..., all > 1) of a direct sum of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for o in orders:
        for p, e in factorint(int(o)).items():
            by_prime.setdefault(p, []).append(p ** e)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for p, powers in by_prime.items():
        powers = sorted(powers, reverse=True)
        for i, q in enumerate(powers):
            factors[length - 1 - i] *= q
    return factors


@dataclass
class Subquotient:
    """The finite abelian group ``ker / im`` inside ``(Z/N)^c``.

    ``cycles`` are rows spanning the kernel, ``boundaries`` rows spanning the
    image (which must lie in the kernel). Classes get coordinates with
    respect to an invariant-factor basis; ``generators`` holds one
    lexicographically least cochain per basis element.
    """

    N: int
    ncols: int
    cycles: np.ndarray
    boundaries: Howell
    invariant_factors: list[int] = field(default_factory=list)
    generators: list[np.ndarray] = field(default_factory=list)
    _Q: np.ndarray | None = None
    _orders: list[int] = field(default_factory=list)
    _parts: list = field(default_factory=list)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_cycle_rep(self, z) -> bool:
        return solve_left(self.cycles, z, self.N) is not None

    def cyclic_coords(self, z) -> list[int]:
        lam = solve_left(self.cycles, z, self.N)
        if lam is None:
            raise ValueError("vector is not a cycle")
        mu = (lam @ self._Q) % self.N
        return [int(mu[i]) % o for i, o in enumerate(self._orders)]

    def coords(self, z) -> tuple[int, ...]:
        """Coordinates of the class of ``z`` in the invariant-factor basis."""
        x = self.cyclic_coords(z)
        out = []
        for d, part in zip(self.invariant_factors, self._parts):
            # part: list of (cyclic index, prime power q, multiplier c)
            residues, moduli = [], []
            for i, q, c in part:
                residues.append((x[i] * c) % q)
                moduli.append(q)
            out.append(_crt(residues, moduli) % d)
        return tuple(out)

    def representative(self, coords) -> np.ndarray:
        v = np.zeros(self.ncols, dtype=np.int64)
        for c, g in zip(coords, self.generators):
            v = (v + int(c) * g) % self.N
        return self.boundaries.reduce(v)

    def same_class(self, z1, z2) -> bool:
        return self.boundaries.contains((np.asarray(z1) - np.asarray(z2)) % self.N)


def _crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        # moduli are powers of distinct primes, so pairwise coprime
        t = ((r - x) * pow(m, -1, q)) % q if q > 1 else 0
        x += m * t
        m *= q
    return x


def subquotient(cycles: np.ndarray, boundaries, N: int, ncols: int) -> Subquotient:
    cycles = as_matrix(cycles, ncols) % N
    B = as_matrix(boundaries, ncols) % N
    Bh = howell_form(B, N, ncols)
    k = cycles.shape[0]
    if N == 1 or k == 0:
        return Subquotient(N, ncols, cycles, Bh, [], [], np.zeros((k, k), dtype=np.int64), [], [])
    # relations: lam with lam @ cycles in span(B)
    top = np.hstack([cycles, np.eye(k, dtype=np.int64)])
    bottom = np.hstack([B, np.zeros((B.shape[0], k), dtype=np.int64)])
    H = howell_form(np.vstack([top, bottom]), N)
    rel = [H.rows[i, ncols:] for i, col in enumerate(H.pivots) if col >= ncols]
    rel = np.array(rel, dtype=np.int64).reshape(len(rel), k)
    d, Q = diagonalize(rel, k, N)
    orders = [gcd(x, N) for x in d]
    # columns of Q^-1 give cyclic generators: class of row e_i Q^{-1} has coords e_i
    Qinv = _inverse_mod(Q, N)
    cyc_gens = [(Qinv[i] @ cycles) % N for i in range(k)]
    # invariant-factor basis via primary decomposition
    primary: dict[int, list] = {}
    for i, o in enumerate(orders):
        if o == 1:
            continue
        f = factorint(o)
        for p, e in f.items():
            q = p ** e
            # o/q * gen_i has order q; coordinate transforms by c = inverse(o/q) mod q
            c = pow(o // q, -1, q) if q > 1 else 0
            primary.setdefault(p, []).append((i, q, c, o // q))
    length = max((len(v) for v in primary.values()), default=0)
    parts = [[] for _ in range(length)]
    factors = [1] * length
    gens = [np.zeros(ncols, dtype=np.int64) for _ in range(length)]
    for p in sorted(primary):
        items = sorted(primary[p], key=lambda t: (-t[1], t[0]))
        for rank, (i, q, c, mult) in enumerate(items):
            slot = length - 1 - rank
            factors[slot] *= q
            parts[slot].append((i, q, c))
            gens[slot] = (gens[slot] + mult * cyc_gens[i]) % N
    gens = [Bh.reduce(g) for g in gens]
    return Subquotient(N, ncols, cycles, Bh, factors, gens, Q, orders, parts)


def _inverse_mod(Q: np.ndarray, N: int) -> np.ndarray:
    k = Q.shape[0]
    aug = np.hstack([Q % N, np.eye(k, dtype=np.int64)])
    H = howell_form(aug, N)
    if len(H.pivots) < k or H.pivots[:k] != list(range(k)) or any(H.rows[i, i] != 1 for i in range(k)):
        raise ArithmeticError("matrix not invertible mod N")
    return H.rows[:k, k:] % N
