import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
import hypothesis.strategies as st

from bicrossed import lie
from bicrossed.lie import (
    LieAlgebra, LieBialgebra, LieError, LieMatchedPair, axb_identities, change_basis, double_basis_matrix,
    double_lie_algebra, evaluate_axb_actions, is_isomorphism, random_matched_pair, realify,
    restriction_consistent, verify_jacobi, verify_lie_bialgebra, verify_matched_lie,
)

F = Fraction


def sl2():
    # [H, E] = 2E, [H, F] = -2F, [E, F] = H
    return LieAlgebra.from_brackets(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})


def heisenberg():
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}})


# -- Jacobi --------------------------------------------------------------


def test_jacobi_examples():
    for L in (LieAlgebra.abelian(3), lie.axb_algebra(), sl2(), heisenberg(), lie.family_algebra(F(-1, 3))):
        rep = verify_jacobi(L)
        assert rep.ok and rep.checked > 0


def test_jacobi_perturbation_is_caught():
    L = sl2()
    c = L.c.copy()
    c[1, 2, 1] += 1  # [E, F] = H + E, antisymmetry kept
    c[2, 1, 1] -= 1
    rep = verify_jacobi(LieAlgebra(c))
    assert not rep.ok
    doc = rep.to_document()
    assert doc["defects"][0]["law"] == "jacobi" and doc["defects"][0]["indices"] == [0, 1, 2]
    # breaking antisymmetry alone is reported too
    c = L.c.copy()
    c[0, 1, 1] += 1
    assert not verify_jacobi(LieAlgebra(c)).ok


def test_change_basis_preserves_jacobi():
    P = lie.rational_array([[1, 2, 0], [0, 1, 0], [1, 1, 1]])
    L = change_basis(sl2(), P)
    assert verify_jacobi(L).ok
    assert is_isomorphism(P, L, sl2())


def test_realify_doubles_dimension():
    # complex ax+b: [X, Y] = (1 + i) Y
    re = lie.zeros(2, 2, 2)
    im = lie.zeros(2, 2, 2)
    re[0, 1, 1], re[1, 0, 1] = F(1), F(-1)
    im[0, 1, 1], im[1, 0, 1] = F(1), F(-1)
    R = realify(re, im)
    assert R.dim == 4 and verify_jacobi(R).ok
    assert R != LieAlgebra.abelian(4)


# -- matched pairs and doubles -------------------------------------------------


def test_trivial_actions_on_abelian_pair():
    for n1, n2 in ((1, 1), (2, 1), (2, 3)):
        mp = LieMatchedPair.trivial(LieAlgebra.abelian(n1), LieAlgebra.abelian(n2))
        assert verify_matched_lie(mp).ok
        assert double_lie_algebra(mp) == LieAlgebra.abelian(n1 + n2)


def test_trivial_actions_give_direct_sum():
    mp = LieMatchedPair.trivial(lie.axb_algebra(), sl2())
    D = double_lie_algebra(mp)
    assert D.dim == 5 and restriction_consistent(mp, D)
    assert not D.c[:2, 2:].any() and not D.c[2:, :2].any()


def test_one_dimensional_actions_match_double_jacobi():
    g1, g2 = LieAlgebra.abelian(1), LieAlgebra.abelian(1)
    mp = LieMatchedPair.from_tables(g1, g2, [[[1]]], [[[1]]])
    rep = verify_matched_lie(mp)
    assert rep.ok == verify_jacobi(lie.LieAlgebra(lie.double_bracket_constants(mp))).ok


def test_axb_split():
    mp = lie.axb_matched_pair()
    # B |> X = X and B <| X = -B
    assert mp.act_right_on_left[0, 0, 0] == 1 and mp.act_left_on_right[0, 0, 0] == -1
    assert verify_matched_lie(mp).ok
    D = double_lie_algebra(mp)
    assert D.c[0, 1].tolist() == [F(-1), F(1)]  # [A, B] = B - A
    P = double_basis_matrix(lie.AXB_G1, lie.AXB_G2)
    assert is_isomorphism(P, D, lie.axb_algebra())
    # the reverse change X = A, Y = B - A gives [X, Y] = Y
    Q = lie.rational_array([[1, -1], [0, 1]])
    assert change_basis(D, Q) == lie.axb_algebra()


def test_family_at_two():
    mp = lie.family_matched_pair(2)
    assert verify_matched_lie(mp).ok
    D = double_lie_algebra(mp)
    assert verify_jacobi(D).ok and restriction_consistent(mp, D)
    P = double_basis_matrix(*lie.family_split(2))
    assert is_isomorphism(P, D, lie.family_algebra(2))


def test_corrupted_action_is_rejected():
    mp = lie.family_matched_pair(2)
    tri = mp.act_right_on_left.copy()
    tri[0, 1, 1] += 1
    bad = LieMatchedPair(mp.g1, mp.g2, tri, mp.act_left_on_right)
    rep = verify_matched_lie(bad)
    assert not rep.ok
    with pytest.raises(LieError):
        double_lie_algebra(bad)


def test_embedding_rejects_non_subalgebra():
    with pytest.raises(LieError):
        lie.from_embedding(heisenberg(), [[1, 0, 0], [0, 1, 0]], [[0, 0, 1]])


def test_verifier_agrees_with_double_jacobi():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n1, n2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        g1 = LieAlgebra.abelian(n1) if n1 == 1 else lie.axb_algebra()
        g2 = LieAlgebra.abelian(n2) if n2 == 1 else lie.axb_algebra()
        tri = rng.integers(-1, 2, (n2, n1, n1)) * (rng.random((n2, n1, n1)) < 0.4)
        tle = rng.integers(-1, 2, (n2, n1, n2)) * (rng.random((n2, n1, n2)) < 0.4)
        mp = LieMatchedPair.from_tables(g1, g2, tri.tolist(), tle.tolist())
        double = LieAlgebra(lie.double_bracket_constants(mp))
        assert verify_matched_lie(mp).ok == verify_jacobi(double).ok


def test_random_pairs_double_is_lie():
    rng = np.random.default_rng(5)
    for n1, n2 in ((1, 1), (1, 2), (2, 1), (2, 2)):
        for _ in range(10):
            mp = random_matched_pair(rng, n1, n2)
            D = double_lie_algebra(mp)
            assert verify_jacobi(D).ok and restriction_consistent(mp, D)


def test_documents_round_trip():
    mp = lie.family_matched_pair(2)
    back = lie.parse_matched_lie(mp.to_document())
    assert np.array_equal(back.act_right_on_left, mp.act_right_on_left)
    assert np.array_equal(back.act_left_on_right, mp.act_left_on_right)
    assert lie.parse_lie_algebra(sl2().to_document()) == sl2()
    for bad in ({"dim": 2}, {"dim": 1, "c": [[["x"]]]}, {"dim": 1, "c": [[[0.5]]]}):
        with pytest.raises(LieError):
            lie.parse_lie_algebra(bad)
    with pytest.raises(LieError):
        lie.parse_matched_lie({"g1": {"dim": 1, "c": [[["0"]]]}})


# -- bialgebras ------------------------------------------------------------


def noncommutative_bialgebra_defects(brackets, cobracket):
    """Expand the three bialgebra axioms with sympy noncommutative symbols.

    Words of length two stand for tensors e_a (x) e_b.
    """
    d = len(cobracket)
    e = sympy.symbols(f"e0:{d}", commutative=False)

    def br(i, j):
        return sum((sympy.Rational(str(c)) * e[k] for k, c in brackets.get((i, j), {}).items()), sympy.Integer(0)) \
            - sum((sympy.Rational(str(c)) * e[k] for k, c in brackets.get((j, i), {}).items()), sympy.Integer(0))

    def words(expr):
        expr = sympy.expand(expr)
        terms = expr.args if expr.is_Add else (expr,)
        out = []
        for t in terms:
            if t == 0:
                continue
            coeff, rest = t.as_coeff_Mul()
            letters = []
            for f in (rest.args if rest.is_Mul else (rest,)):
                base, exp = f.as_base_exp()
                letters += [e.index(base)] * int(exp)
            out.append((coeff, letters))
        return out

    def map_letter(expr, pos, f):
        total = sympy.Integer(0)
        for coeff, w in words(expr):
            piece = sympy.Integer(1)
            for p, a in enumerate(w):
                piece = piece * (f(a) if p == pos else e[a])
            total += coeff * piece
        return sympy.expand(total)

    def delta(i):
        return cobracket[i]

    def ad(i, expr, length):
        return sum((map_letter(expr, p, lambda a: br(i, a)) for p in range(length)), sympy.Integer(0))

    def flip(expr):
        total = sympy.Integer(0)
        for coeff, w in words(expr):
            total += coeff * sympy.Mul(*[e[a] for a in reversed(w)])
        return sympy.expand(total)

    def cycle(expr):
        total = sympy.Integer(0)
        for coeff, w in words(expr):
            total += coeff * sympy.Mul(*[e[a] for a in w[1:] + w[:1]])
        return sympy.expand(total)

    defects = []
    for i in range(d):
        if sympy.expand(delta(i) + flip(delta(i))) != 0:
            defects.append("co-antisymmetry")
        dd = map_letter(delta(i), 1, delta)
        if sympy.expand(dd + cycle(dd) + cycle(cycle(dd))) != 0:
            defects.append("co-Jacobi")
    for i, j in itertools.product(range(d), repeat=2):
        lhs = sympy.Integer(0)
        for coeff, w in words(br(i, j)):
            lhs += coeff * delta(w[0])
        if sympy.expand(lhs - ad(i, delta(j), 2) + ad(j, delta(i), 2)) != 0:
            defects.append("compatibility")
    return sorted(set(defects))


def wedge(e, a, b):
    return e[a] * e[b] - e[b] * e[a]


def test_zero_cobracket_is_bialgebra():
    for L in (sl2(), heisenberg(), lie.axb_algebra()):
        assert verify_lie_bialgebra(LieBialgebra.from_tensor(L, lie.zeros(L.dim, L.dim, L.dim))).ok


def test_dual_of_lie_algebra_is_bialgebra():
    # cobracket of the abelian algebra = transpose of sl2's bracket
    c = sl2().c
    T = np.transpose(c, (2, 0, 1)).copy()
    B = LieBialgebra.from_tensor(LieAlgebra.abelian(3), T)
    assert verify_lie_bialgebra(B).ok
    # a non-Jacobi transpose fails co-Jacobi
    bad = T.copy()
    bad[1, 1, 2] += 1
    bad[1, 2, 1] -= 1
    rep = verify_lie_bialgebra(LieBialgebra.from_tensor(LieAlgebra.abelian(3), bad))
    assert not rep.ok and {d["law"] for d in rep.to_document()["defects"]} == {"co-Jacobi"}


def test_axb_bialgebra_against_symbolic_expansion():
    e = sympy.symbols("e0:2", commutative=False)
    cases = {
        "x_y_wedge": [[0], [1]],   # delta(X) = 0, delta(Y) = X ^ Y
        "y_x_wedge": [[1], [0]],   # delta(X) = X ^ Y, delta(Y) = 0
        "both": [[1], [1]],
    }
    for name, table in cases.items():
        B = LieBialgebra.from_wedge_table(lie.axb_algebra(), table)
        cob = [table[i][0] * wedge(e, 0, 1) for i in range(2)]
        oracle = noncommutative_bialgebra_defects({(0, 1): {1: 1}}, cob)
        got = sorted({d["law"] for d in verify_lie_bialgebra(B).to_document()["defects"]})
        assert got == oracle, name
    assert verify_lie_bialgebra(LieBialgebra.from_wedge_table(lie.axb_algebra(), [[0], [1]])).ok


def test_co_antisymmetry_failure():
    T = lie.zeros(2, 2, 2)
    T[0, 0, 1] = F(1)  # X (x) Y, not a wedge
    rep = verify_lie_bialgebra(LieBialgebra.from_tensor(LieAlgebra.abelian(2), T))
    assert "co-antisymmetry" in {d["law"] for d in rep.to_document()["defects"]}


# -- exponentiated ax+b actions -------------------------------------------------


def test_axb_values():
    assert evaluate_axb_actions(2, 3) == (5, F(6, 5))
    for g in (F(1, 2), 3, -7):
        assert evaluate_axb_actions(g, 1) == (1, g)
    lhs, rhs = axb_identities(2, 3, 5, 1)["alpha_hg(s) = alpha_h(alpha_g(s))"]
    assert lhs == rhs == 25
    for bad in ((0, 2), (2, 0), (2, F(1, 2))):  # 2 (1/2 - 1) + 1 = 0
        with pytest.raises(LieError):
            evaluate_axb_actions(*bad)
    with pytest.raises(LieError):
        evaluate_axb_actions(0.5, 2)


nonzero_q = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda x: x != 0)


@settings(max_examples=200, deadline=None)
@given(nonzero_q, nonzero_q, nonzero_q, nonzero_q)
def test_axb_identities(h, g, s, t):
    try:
        ids = axb_identities(h, g, s, t)
    except LieError:
        return  # a singular intermediate point
    for name, (lhs, rhs) in ids.items():
        assert lhs == rhs, name
    assert lie.axb_pair_identity(g, s)
