from fractions import Fraction

import numpy as np
import pytest

from quatlab.laurent import Laurent, var
from quatlab.tcoeff import (
    TIndex, all_tindices, check_ct_identity, check_ct_inverse, check_dt_identity, check_dt_inverse,
    check_zt_identity, t, t_coeff, t_inv_num, t_num, t_table,
)

h = Fraction(1, 2)
z11, z12, z21, z22 = (var(n) for n in ("11", "12", "21", "22"))


def test_small_coefficients():
    assert t_coeff(TIndex(0, 0, 0)) == Laurent.const(1)
    assert t_coeff(TIndex(1, 1, 1)) == z22
    assert t_coeff(TIndex(1, -1, -1)) == z11
    assert t(1, 0, 0) == z11 * z22 + z12 * z21


def test_out_of_range_is_zero():
    assert t(0, 1, 0) == 0
    assert t(h, Fraction(3, 2), h) == 0


def test_tindex_doubled_storage():
    i = TIndex.of(Fraction(3, 2), h, -Fraction(3, 2))
    assert i == TIndex(3, 1, -3)
    assert (i.l, i.m, i.n) == (Fraction(3, 2), h, -Fraction(3, 2))
    assert i.in_range()
    assert not TIndex(2, 1, 0).in_range()
    assert len(list(all_tindices(3))) == sum((k + 1) ** 2 for k in range(4))


@pytest.mark.parametrize("kind", ["dt", "zt", "ct", "dt_inv", "ct_inv"])
def test_identity_sweep(kind):
    check = {"dt": check_dt_identity, "zt": check_zt_identity, "ct": check_ct_identity,
             "dt_inv": check_dt_inverse, "ct_inv": check_ct_inverse}[kind]
    bad = [i for i in all_tindices(6) if not check(i)]
    assert bad == []


def test_table_matches_symbolic(rng):
    Zs = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    for tl in range(5):
        tab = t_table(tl, Zs)
        for i in all_tindices(tl):
            if i.twoL != tl:
                continue
            ref = t_coeff(i).evaluate(Zs)
            assert np.allclose(tab[:, (i.twoN + tl) // 2, (i.twoM + tl) // 2], ref)
            assert np.allclose(t_num(i.l, i.n, i.m, Zs), ref)


def test_representation_property(rng):
    # t^l(ZW) = t^l(Z) t^l(W) with rows n and columns m
    Z, W = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    for tl in range(6):
        assert np.allclose(t_table(tl, Z @ W), t_table(tl, Z) @ t_table(tl, W))


def test_inverse_table(rng):
    Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    for tl in range(4):
        assert np.allclose(t_inv_num(tl, Z) @ t_table(tl, Z), np.eye(tl + 1))
