from fractions import Fraction

import pytest

from quatlab.bases import (
    BH_FAMILIES, FAMILIES, U_FAMILIES, UPRIME_FAMILIES, IndexOutOfRange, NotBiharmonic, NotInSpan,
    basis, decompose_biharmonic, dim_formula_BH, dim_formula_U, elements_of_degree, expand_in_basis,
    family_indices, is_qlar, is_qrar, kernel_dimension_polynomial, project, reassemble,
)
from quatlab.laurent import N, Laurent, SymFunc, Z, box, nabla, var
from quatlab.tcoeff import TIndex, t

z11, z12, z21, z22 = (var(n) for n in ("11", "12", "21", "22"))
h = Fraction(1, 2)


def test_basis_examples():
    assert basis("f1", TIndex(0, 0, 1)).sym == SymFunc.col(1, 0)
    assert basis("f2", TIndex(1, 1, 0)).sym == SymFunc.col(z12, z22)
    assert basis("phi2", TIndex(2, 0, 0)).sym == SymFunc.scalar(N)


def test_index_range_enforced():
    with pytest.raises(IndexOutOfRange):
        basis("f2", TIndex(0, 0, 0))
    with pytest.raises(IndexOutOfRange):
        basis("f1", TIndex(2, 0, 0))
    with pytest.raises(KeyError):
        basis("f9", TIndex(0, 0, 0))


def test_f3_is_n_times_f1():
    for tl in range(2, 5):
        for i in family_indices("f3", tl):
            lower = TIndex(tl - 2, i.twoM, i.twoN)
            assert basis("f3", i).sym == basis("f1", lower).sym * N


def test_qlar_and_qrar_small_levels():
    for fam in U_FAMILIES:
        for tl in range(3):
            for i in family_indices(fam, tl):
                assert is_qlar(basis(fam, i).sym), (fam, i)
    for fam in UPRIME_FAMILIES:
        for tl in range(3):
            for i in family_indices(fam, tl):
                assert is_qrar(basis(fam, i).sym), (fam, i)


def test_biharmonic_families():
    for fam in BH_FAMILIES:
        for tl in range(4):
            for i in family_indices(fam, tl):
                f = basis(fam, i).sym
                assert box(box(f)).is_zero()


def test_negative_control_not_qlar():
    assert not is_qlar(SymFunc.col(z11 * N, 0))


@pytest.mark.parametrize("d", range(-5, 6))
def test_dimension_formulas(d):
    u = elements_of_degree(U_FAMILIES, d)
    assert len(u) == dim_formula_U(d)
    if d != 0:
        assert len(elements_of_degree(BH_FAMILIES, d)) == dim_formula_BH(d)


@pytest.mark.parametrize("d", [0, 1, 2])
def test_dimension_against_kernel_oracle(d):
    n = kernel_dimension_polynomial(lambda F: nabla(box(F)), (2, 1), d)
    assert n == len(elements_of_degree(("f1", "f2", "f3"), d))


def test_decompose_biharmonic_examples():
    assert decompose_biharmonic(N) == (Laurent(), Laurent.const(1))
    assert decompose_biharmonic(z11 ** 2) == (z11 ** 2, Laurent())
    for i in family_indices("f3", 3):
        h0, h1 = decompose_biharmonic(basis("f3", i).sym)
        assert h0.is_zero()
        assert h1 == basis("f1", TIndex(1, i.twoM, i.twoN)).sym
    with pytest.raises(NotBiharmonic):
        decompose_biharmonic(N * N)


def test_projection_examples():
    ninv = Laurent.monomial(k=-1)
    assert project("Zh0", ninv) == ninv
    assert project("Zh+", ninv) == 0 and project("Zh-", ninv) == 0
    assert project("Zh+", z22) == z22
    f = Laurent.monomial(k=-2) * z11
    assert project("Zh0", f) == f


def test_projections_partition():
    f = Laurent.monomial(k=-3) * z11 + z12 * z21 * Laurent.monomial(k=-1) + N * z22 + Laurent.monomial(k=-4) * t(1, 0, 1)
    total = project("Zh+", f) + project("Zh0", f) + project("Zh-", f)
    assert total == f


def test_expand_examples():
    F = basis("f1", TIndex(0, 0, 1)).sym + basis("f1", TIndex(0, 0, -1)).sym.scale(2)
    assert expand_in_basis(F) == {("f1", TIndex(0, 0, 1)): 1, ("f1", TIndex(0, 0, -1)): 2}
    G = SymFunc.col(z11, 0)
    c = expand_in_basis(G)
    assert {fam for fam, _ in c} <= {"f1", "f2"}
    assert reassemble(c) == G


def test_z_multiples_expand_in_f2():
    for i in family_indices("f1", 0):
        F = Z * basis("f1", i).sym
        c = expand_in_basis(F)
        assert reassemble(c) == F
        assert {fam for fam, _ in c} == {"f2"}


def test_expand_rejects_outside_span():
    with pytest.raises(NotInSpan):
        expand_in_basis(SymFunc.col(z11 * N, 0))
