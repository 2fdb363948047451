import random
from fractions import Fraction

import numpy as np
import pytest

from quatlab.actions import (
    GENERATORS, LieElem, _pow, act, cayley, check_poincare_intertwiner, elementary, generator,
    inversion, torus,
)
from quatlab.bases import basis, family_degree, family_indices
from quatlab.hcq import Biquaternion, CRational, I
from quatlab.laurent import N, Laurent, ShapeMismatch, SymFunc, var
from quatlab.tables import check_action_table, check_pattern
from quatlab.tcoeff import TIndex

z11, z12, z21, z22 = (var(n) for n in ("11", "12", "21", "22"))


def _rq(rnd):
    return Biquaternion(*(CRational(rnd.randint(-2, 2), rnd.randint(-2, 2)) for _ in range(4)))


def _rl(rnd):
    return LieElem(_rq(rnd), _rq(rnd), _rq(rnd), _rq(rnd))


def test_rho_prime_on_norm():
    X = LieElem.of(B=[[1, 0], [0, 0]])
    assert act("rhoPrime", X, SymFunc.scalar(N)) == SymFunc.scalar(-z22)


def test_pi_prime_l_on_constant():
    A = Biquaternion(1, 2, CRational(0, 1), 3)
    s = SymFunc.col(1, 5)
    got = act("piPrimeL", LieElem(A=A), s)
    expected = s.scale(-A.trace()) + SymFunc.mat(*A.entries()) * s
    assert got == expected


def test_pi_prime_r_on_constant_row():
    D = Biquaternion(2, -1, 4, 1)
    g = SymFunc.row(1, 0)
    assert act("piPrimeR", LieElem(D=D), g) == g.scale(D.trace()) - g * SymFunc.mat(*D.entries())


@pytest.mark.parametrize("action,family", [
    ("piPrimeL", "f2"), ("piPrimeR", "g1"), ("rhoPrime", "phi1"), ("piLa", "f1"),
    ("piRa", "g2"), ("piL", "f1"), ("rho1", "phi2"), ("rho2", None), ("rho2Prime", None),
])
def test_lie_algebra_homomorphism(action, family):
    rnd = random.Random(hash(action) % 1000)
    for trial in range(2):
        X, Y = _rl(rnd), _rl(rnd)
        if family:
            f = basis(family, family_indices(family, 3)[trial]).sym
        else:
            f = SymFunc.mat(z11, N, z12 * z21, Laurent.monomial(k=-1))
        lhs = act(action, X, act(action, Y, f)) - act(action, Y, act(action, X, f))
        assert lhs == act(action, X.bracket(Y), f)


def test_shape_guard():
    with pytest.raises(ShapeMismatch):
        act("piPrimeL", generator("E1"), SymFunc.scalar(N))


@pytest.mark.parametrize("fam,tf,action,sign", [
    ("f1", "fT1", "piPrimeL", -1), ("f2", "fT2", "piPrimeL", -1), ("f3", "fT3", "piPrimeL", -1),
    ("g1", "gT1", "piPrimeR", 1), ("g2", "gT2", "piPrimeR", 1), ("g3", "gT3", "piPrimeR", 1),
    ("phi1", "phiT1", "rhoPrime", 1), ("phi2", "phiT2", "rhoPrime", 1),
])
def test_inversion_swaps_families(fam, tf, action, sign):
    for tl in range(4):
        for i in family_indices(fam, tl):
            img = inversion(action, basis(fam, i).sym)
            assert img == basis(tf, TIndex(i.twoL, i.twoN, i.twoM)).sym.scale(sign), (fam, i)


def test_inversion_is_involution():
    f = basis("f2", family_indices("f2", 3)[2]).sym
    assert inversion("piPrimeL", inversion("piPrimeL", f)) == f


def test_torus_acts_by_degree():
    lam = CRational(Fraction(3, 5), Fraction(4, 5))
    for fam, action in [("f1", "piPrimeL"), ("fT2", "piPrimeL"), ("g3", "piPrimeR"), ("gT1", "piPrimeR")]:
        for tl in (2, 3):
            for i in family_indices(fam, tl)[:2]:
                f = basis(fam, i).sym
                d = family_degree(fam, tl)
                assert torus(action, lam, f) == f.scale(_pow(lam, -2 * d - 1))


def test_cayley_scalar_constant():
    Z = np.array([[0.3 + 0.1j, 0.2], [-0.1j, -0.4]])
    val = cayley("fwd", "pi0L", Laurent.const(1))(Z)
    assert val == pytest.approx(4 / np.linalg.det(Z - np.eye(2)))


@pytest.mark.parametrize("flavor", ["piPrimeL", "piLa", "piL", "pi0L"])
def test_cayley_round_trip(flavor):
    Z0 = 0.2 * np.eye(2)
    f = SymFunc.scalar(z11) if flavor == "pi0L" else SymFunc.col(z11 + 0.5j * z12, z21 * z22 + 1)
    back = cayley("inv", flavor, cayley("fwd", flavor, f))(Z0)
    ref = np.asarray(f.evaluate(Z0))
    assert np.allclose(np.ravel(back), np.ravel(ref)[: np.size(back)], atol=1e-12)


def test_cayley_constant_column():
    Z = -np.eye(2) + np.array([[0.1j, 0.3], [-0.3, -0.1j]])
    s = SymFunc.col(1, 2)
    got = cayley("fwd", "piPrimeL", s)(Z)
    M = Z - np.eye(2)
    assert np.allclose(got, 1j * M / np.linalg.det(M) @ np.array([[1], [2]]))


def test_poincare_intertwiners():
    translation = LieElem.of(B=[[I, 0], [0, 0]])
    assert translation.is_pprime()
    assert check_poincare_intertwiner(translation, basis("f2", TIndex(1, 1, 0)).sym)
    A = Biquaternion(I, 1, -1, -I)
    diag = LieElem(A=A, D=-A.star())
    assert diag.is_pprime()
    assert check_poincare_intertwiner(diag, basis("f1", TIndex(2, 0, 1)).sym)
    assert not check_poincare_intertwiner(elementary("C", 0, 0), basis("f1", TIndex(2, 0, 1)).sym)


def test_generators_are_u22():
    for name in ("X", "Y"):
        assert GENERATORS[name].is_u22()


def test_e2_raises_m():
    for i in family_indices("f1", 2):
        assert check_pattern("piPrimeL", "E2", "f1", i).ok


def test_off_diagonal_table_samples():
    for fam in ("f1", "f2", "f3", "g2", "phi1"):
        for i in family_indices(fam, 2)[:3]:
            action = {"f": "piPrimeL", "g": "piPrimeR", "p": "rhoPrime"}[fam[0]]
            for gen in ("B=E11", "C=E11"):
                r = check_action_table(action, gen, fam, i)
                assert r.ok, r.report()


def test_rho_prime_x_formula():
    for i in family_indices("phi1", 2):
        assert check_action_table("rhoPrime", "X", "phi1", i, rho_x_formula=True).ok


def test_printed_f2_row_needs_alpha():
    # the printed pi'_r(F2) row drops alpha in the first component; g1 at l=1/2 shows it
    bad = [i for tl in range(3) for i in family_indices("g1", tl)
           if not check_pattern("piPrimeR", "F2", "g1", i).ok]
    assert bad
    assert all(check_pattern("piPrimeR", "F2", "g1", i, corrected=True).ok for i in bad)
