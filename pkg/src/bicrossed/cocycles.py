"""Pair cocycles ``(u, v)`` of a matched pair with values in Z/N.

A phase pair is stored additively: ``u[g, h, s]`` and ``v[g, s, t]`` are
exponents of ``zeta_N``. The three equations solved here are

    E1: u(g,h,a_k(s)) + u(gh,k,s) - u(h,k,s) - u(g,hk,s) = 0
    E2: v(b_s(g),t,r) + v(g,s,rt) - v(g,s,t) - v(g,ts,r) = 0
    E3: v(gh,s,t) - u(g,h,ts) + u(g,h,s) + u(b_{a_h(s)}(g), b_s(h), t)
        - v(g,a_h(s),a_{b_s(h)}(t)) - v(h,s,t) = 0

where ``a = alpha``, ``b = beta`` and products of G2 elements are taken in
the acting (opposite) group, see :mod:`bicrossed.matched`. Cocycles are
normalized: every entry with an identity argument is 0, and those entries
are not variables of the linear system.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import zmod
from .matched import MatchedPair


class CocycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PhaseCocyclePair:
    N: int
    u: np.ndarray  # shape (n1, n1, n2)
    v: np.ndarray  # shape (n1, n2, n2)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.int64) % self.N
        v = np.asarray(self.v, dtype=np.int64) % self.N
        if u.ndim != 3 or v.ndim != 3:
            raise CocycleError("u and v must be 3-dimensional tables")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def trivial(cls, mp: MatchedPair, N: int) -> "PhaseCocyclePair":
        return cls(N, np.zeros((mp.n1, mp.n1, mp.n2)), np.zeros((mp.n1, mp.n2, mp.n2)))

    def is_trivial(self) -> bool:
        return not self.u.any() and not self.v.any()

    def is_normalized(self) -> bool:
        u, v = self.u, self.v
        return not (u[0].any() or u[:, 0].any() or u[:, :, 0].any()
                    or v[0].any() or v[:, 0].any() or v[:, :, 0].any())

    def __add__(self, other: "PhaseCocyclePair") -> "PhaseCocyclePair":
        if self.N != other.N:
            raise CocycleError("coefficient orders differ")
        return PhaseCocyclePair(self.N, self.u + other.u, self.v + other.v)

    def __neg__(self):
        return PhaseCocyclePair(self.N, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PhaseCocyclePair):
            return NotImplemented
        return (self.N == other.N and np.array_equal(self.u, other.u)
                and np.array_equal(self.v, other.v))

    def __hash__(self):
        return hash((self.N, self.u.tobytes(), self.v.tobytes()))

    def to_document(self) -> dict:
        return {"N": self.N, "u": self.u.tolist(), "v": self.v.tolist()}


def parse_cocycle(document, mp: MatchedPair | None = None) -> PhaseCocyclePair:
    """Cocycle document ``{"N": int, "u": nested arrays, "v": nested arrays}``."""
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    try:
        N = int(document["N"])
        u = np.array(document["u"], dtype=np.int64)
        v = np.array(document["v"], dtype=np.int64)
    except KeyError as exc:
        raise CocycleError(f"cocycle document missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise CocycleError(f"malformed cocycle tables: {exc}") from exc
    if N < 1:
        raise CocycleError("N must be positive")
    c = PhaseCocyclePair(N, u, v)
    if mp is not None:
        if c.u.shape != (mp.n1, mp.n1, mp.n2) or c.v.shape != (mp.n1, mp.n2, mp.n2):
            raise CocycleError(
                f"table shapes {c.u.shape}, {c.v.shape} do not match |G1|={mp.n1}, |G2|={mp.n2}")
    return c


def cocycle_violations(mp: MatchedPair, c: PhaseCocyclePair, limit: int | None = None) -> list[dict]:
    """Direct evaluation of E1-E3 and normalization on every tuple; empty when ``c`` is a cocycle."""
    N, u, v = c.N, c.u, c.v
    n1, n2 = mp.n1, mp.n2
    a, b, m1, m2 = mp.a, mp.b, mp.g1_mul, mp.g2_mul
    out: list[dict] = []
    if u.shape != (n1, n1, n2) or v.shape != (n1, n2, n2):
        return [{"equation": "shape", "witness": {"u": list(u.shape), "v": list(v.shape)}}]
    if not c.is_normalized():
        out.append({"equation": "normalization", "witness": {}})

    def full():
        return limit is not None and len(out) >= limit

    for g, h, k, s in itertools.product(range(n1), range(n1), range(n1), range(n2)):
        val = u[g, h, a(k, s)] + u[m1(g, h), k, s] - u[h, k, s] - u[g, m1(h, k), s]
        if val % N:
            out.append({"equation": "E1", "witness": {"g": g, "h": h, "k": k, "s": s}})
            if full():
                return out
    for g, s, t, r in itertools.product(range(n1), range(n2), range(n2), range(n2)):
        val = v[b(s, g), t, r] + v[g, s, m2(r, t)] - v[g, s, t] - v[g, m2(t, s), r]
        if val % N:
            out.append({"equation": "E2", "witness": {"g": g, "s": s, "t": t, "r": r}})
            if full():
                return out
    for g, h, s, t in itertools.product(range(n1), range(n1), range(n2), range(n2)):
        ahs = a(h, s)
        bsh = b(s, h)
        val = (v[m1(g, h), s, t] - u[g, h, m2(t, s)] + u[g, h, s]
               + u[b(ahs, g), bsh, t] - v[g, ahs, a(bsh, t)] - v[h, s, t])
        if val % N:
            out.append({"equation": "E3", "witness": {"g": g, "h": h, "s": s, "t": t}})
            if full():
                return out
    return out


def is_cocycle(mp: MatchedPair, c: PhaseCocyclePair) -> bool:
    return not cocycle_violations(mp, c, limit=1)


@dataclass(frozen=True, eq=False)
class CocycleSystem:
    """Integer equation matrix whose kernel mod N is the group of normalized cocycle pairs.

    Columns are the ``u`` variables ``(g, h, s)`` followed by the ``v``
    variables ``(g, s, t)``, all arguments non-identity, in lexicographic
    order. Rows are E1, E2, E3 instances in lexicographic order of their
    free arguments (instances that vanish identically are kept).
    """

    mp: MatchedPair
    N: int
    u_vars: list[tuple[int, int, int]]
    v_vars: list[tuple[int, int, int]]
    matrix: np.ndarray
    row_labels: list[tuple[str, tuple[int, ...]]] = field(repr=False)

    @property
    def nvars(self) -> int:
        return len(self.u_vars) + len(self.v_vars)

    def to_vector(self, c: PhaseCocyclePair) -> np.ndarray:
        x = [c.u[i] for i in self.u_vars] + [c.v[i] for i in self.v_vars]
        return np.array(x, dtype=np.int64).reshape(self.nvars) % self.N

    def from_vector(self, x) -> PhaseCocyclePair:
        mp = self.mp
        u = np.zeros((mp.n1, mp.n1, mp.n2), dtype=np.int64)
        v = np.zeros((mp.n1, mp.n2, mp.n2), dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        nu = len(self.u_vars)
        for i, idx in enumerate(self.u_vars):
            u[idx] = x[i]
        for i, idx in enumerate(self.v_vars):
            v[idx] = x[nu + i]
        return PhaseCocyclePair(self.N, u, v)


def build_system(mp: MatchedPair, N: int) -> CocycleSystem:
    if N < 1:
        raise CocycleError("N must be positive")
    n1, n2 = mp.n1, mp.n2
    a, b, m1, m2 = mp.a, mp.b, mp.g1_mul, mp.g2_mul
    u_vars = [t for t in itertools.product(range(1, n1), range(1, n1), range(1, n2))]
    v_vars = [t for t in itertools.product(range(1, n1), range(1, n2), range(1, n2))]
    col = {("u",) + t: i for i, t in enumerate(u_vars)}
    col.update({("v",) + t: len(u_vars) + i for i, t in enumerate(v_vars)})
    rows, labels = [], []

    def emit(name, args, terms):
        row = np.zeros(len(col), dtype=np.int64)
        for coef, key in terms:
            j = col.get(key)
            if j is not None:  # identity arguments are eliminated
                row[j] += coef
        rows.append(row)
        labels.append((name, args))

    for g, h, k, s in itertools.product(range(n1), range(n1), range(n1), range(n2)):
        emit("E1", (g, h, k, s), [
            (1, ("u", g, h, a(k, s))), (1, ("u", m1(g, h), k, s)),
            (-1, ("u", h, k, s)), (-1, ("u", g, m1(h, k), s))])
    for g, s, t, r in itertools.product(range(n1), range(n2), range(n2), range(n2)):
        emit("E2", (g, s, t, r), [
            (1, ("v", b(s, g), t, r)), (1, ("v", g, s, m2(r, t))),
            (-1, ("v", g, s, t)), (-1, ("v", g, m2(t, s), r))])
    for g, h, s, t in itertools.product(range(n1), range(n1), range(n2), range(n2)):
        ahs, bsh = a(h, s), b(s, h)
        emit("E3", (g, h, s, t), [
            (1, ("v", m1(g, h), s, t)), (-1, ("u", g, h, m2(t, s))), (1, ("u", g, h, s)),
            (1, ("u", b(ahs, g), bsh, t)), (-1, ("v", g, ahs, a(bsh, t))), (-1, ("v", h, s, t))])
    matrix = np.array(rows, dtype=np.int64).reshape(len(rows), len(col))
    matrix.setflags(write=False)
    return CocycleSystem(mp, N, u_vars, v_vars, matrix, labels)


def solve_space(system: CocycleSystem) -> list[PhaseCocyclePair]:
    """Generators of the group of normalized cocycle pairs (as a Z/N-module)."""
    E = np.unique(system.matrix % system.N, axis=0) if system.matrix.size else system.matrix
    K = zmod.kernel(E, system.N, system.nvars)
    return [system.from_vector(row) for row in K]


def coboundary(mp: MatchedPair, r, N: int) -> PhaseCocyclePair:
    """The pair induced by a normalized ``r: G1 x G2 -> Z/N``."""
    r = np.asarray(r, dtype=np.int64) % N
    if r.shape != (mp.n1, mp.n2):
        raise CocycleError("r must have shape (|G1|, |G2|)")
    if r[0].any() or r[:, 0].any():
        raise CocycleError("r must vanish on identity arguments")
    n1, n2 = mp.n1, mp.n2
    u = np.zeros((n1, n1, n2), dtype=np.int64)
    v = np.zeros((n1, n2, n2), dtype=np.int64)
    for g, h, s in itertools.product(range(n1), range(n1), range(n2)):
        u[g, h, s] = r[h, s] + r[g, mp.a(h, s)] - r[mp.g1_mul(g, h), s]
    for g, s, t in itertools.product(range(n1), range(n2), range(n2)):
        v[g, s, t] = r[g, s] + r[mp.b(s, g), t] - r[g, mp.g2_mul(t, s)]
    return PhaseCocyclePair(N, u, v)


def r_variables(mp: MatchedPair) -> list[tuple[int, int]]:
    return [(g, s) for g in range(1, mp.n1) for s in range(1, mp.n2)]


def coboundary_rows(system: CocycleSystem) -> np.ndarray:
    """One row per normalized r-variable: the cocycle vector of its unit coboundary."""
    mp, N = system.mp, system.N
    out = []
    for g, s in r_variables(mp):
        r = np.zeros((mp.n1, mp.n2), dtype=np.int64)
        r[g, s] = 1
        out.append(system.to_vector(coboundary(mp, r, N)))
    return np.array(out, dtype=np.int64).reshape(len(out), system.nvars)


def are_cohomologous(mp: MatchedPair, a: PhaseCocyclePair, b: PhaseCocyclePair):
    """``(True, r)`` when ``b - a`` is the coboundary of a normalized ``r``, else ``(False, None)``."""
    if a.N != b.N:
        raise CocycleError("coefficient orders differ")
    system = build_system(mp, a.N)
    B = coboundary_rows(system)
    diff = system.to_vector(b - a)
    if not a.is_normalized() or not b.is_normalized():
        raise CocycleError("cocycles must be normalized")
    lam = zmod.solve_left(B, diff, a.N) if len(B) else (None if diff.any() else np.zeros(0, dtype=np.int64))
    if lam is None:
        return False, None
    r = np.zeros((mp.n1, mp.n2), dtype=np.int64)
    for coef, (g, s) in zip(lam, r_variables(mp)):
        r[g, s] = coef
    return True, r


@dataclass(frozen=True, eq=False)
class AbelianGroupInvariants:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True, eq=False)
class ExtensionGroup:
    mp: MatchedPair
    N: int
    invariants: AbelianGroupInvariants
    generators: list[PhaseCocyclePair]
    system: CocycleSystem = field(repr=False)
    quotient: zmod.Subquotient = field(repr=False)
    cocycle_group_order: int = 0

    @property
    def order(self) -> int:
        return self.invariants.order

    def class_of(self, c: PhaseCocyclePair) -> tuple[int, ...]:
        return self.quotient.coords(self.system.to_vector(c))

    def representative(self, coords) -> PhaseCocyclePair:
        """Lexicographically least cocycle in the class with the given coordinates."""
        return self.system.from_vector(self.quotient.representative(coords))

    def all_classes(self):
        """``(coords, representative)`` for every class, coordinates in lexicographic order."""
        for coords in itertools.product(*(range(d) for d in self.invariants.invariant_factors)):
            yield coords, self.representative(coords)

    def to_document(self) -> dict:
        return {
            "N": self.N,
            "invariant_factors": list(self.invariants.invariant_factors),
            "extension_group_order": self.order,
            "generators": [g.to_document() for g in self.generators],
        }


def extension_group(mp: MatchedPair, N: int) -> ExtensionGroup:
    """Normalized cocycle pairs modulo coboundaries of normalized ``r``."""
    system = build_system(mp, N)
    E = np.unique(system.matrix % N, axis=0) if system.matrix.size else system.matrix
    K = zmod.kernel(E, N, system.nvars)
    B = coboundary_rows(system)
    for row in B:
        if ((system.matrix @ row) % N).any():
            raise CocycleError("coboundary fails the cocycle equations")
    sq = zmod.subquotient(K, B, N, system.nvars)
    gens = [system.from_vector(g) for g in sq.generators]
    for g in gens:
        if not is_cocycle(mp, g):
            raise CocycleError("solver produced a non-cocycle representative")
    return ExtensionGroup(mp, N, AbelianGroupInvariants(tuple(sq.invariant_factors)), gens,
                          system, sq, zmod.howell_form(K, N, system.nvars).order())
