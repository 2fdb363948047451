from fractions import Fraction

import numpy as np
import pytest

from quatlab.hcq import from_ecoords_num
from quatlab.laurent import (
    N, Z, Degree2Component, Laurent, ShapeMismatch, SymFunc, box, deg_op, deg_tilde, eval_at,
    inv_deg_plus2, nabla, nabla_plus, partial, var,
)
from quatlab.tcoeff import t

z11, z12, z21, z22 = (var(n) for n in ("11", "12", "21", "22"))
NINV = Laurent.monomial(k=-1)


def test_products_normalise():
    assert z11 * z22 == Laurent.monomial(1, 0, 0, 1)
    assert NINV * N == Laurent.const(1)
    assert z11 * z22 - z12 * z21 == N


def test_canonical_form_is_unique():
    a = (z11 * z22) * NINV - z12 * z21 * NINV
    assert a == Laurent.const(1)
    assert (z11 * z22 * z11 - z11 * z12 * z21).serialize() == (z11 * N).serialize()


def test_partials():
    assert partial(z11, "11") == Laurent.const(1)
    assert partial(N, "11") == z22
    assert partial(NINV, "11") == -z22 * Laurent.monomial(k=-2)


def test_partial_matches_finite_difference(rng):
    f = z11 ** 2 * z21 * Laurent.monomial(k=-2) + z12 * z22 ** 3
    Z0 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = 1e-6
    for k, name in enumerate(("11", "12", "21", "22")):
        dZ = np.zeros((2, 2))
        dZ.flat[k] = h
        fd = (eval_at(f, Z0 + dZ) - eval_at(f, Z0 - dZ)) / (2 * h)
        assert abs(fd - eval_at(partial(f, name), Z0)) < 1e-5 * max(1, abs(fd))


def test_box_examples():
    assert box(N) == Laurent.const(8)
    for h in (Laurent.const(1), z11, z11 * z22 + z12 * z21 + z11 ** 2, t(1, 0, 1)):
        assert box(h) == 0
        assert box(box(N * h)) == 0
    assert box(box(N * N)) != 0


def test_box_is_sum_of_squares_numerically():
    f = z11 ** 3 * z22 + z12 * z21 ** 2
    x0 = np.array([0.3, -0.2, 0.5, 0.1])
    h = 1e-3
    lap = 0
    for k in range(4):
        dx = np.zeros(4)
        dx[k] = h
        lap += (eval_at(f, from_ecoords_num(x0 + dx)) - 2 * eval_at(f, from_ecoords_num(x0))
                + eval_at(f, from_ecoords_num(x0 - dx))) / h ** 2
    assert abs(lap - eval_at(box(f), from_ecoords_num(x0))) < 1e-4


def test_degree_operators():
    assert deg_op(z11 * z21) == (z11 * z21).scale(2)
    assert deg_tilde(z11) == z11.scale(2)
    assert inv_deg_plus2(Laurent.const(1)) == Laurent.const(Fraction(1, 2))
    f = NINV * z11
    assert inv_deg_plus2(f) == f
    with pytest.raises(Degree2Component):
        inv_deg_plus2(NINV)


def test_evaluation_examples():
    assert eval_at(NINV, 2 * np.eye(2)) == pytest.approx(0.25)
    M = np.array([[1, 2], [3, 4]])
    assert eval_at(z11, M) == pytest.approx(1)
    assert eval_at(t(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)), M) == pytest.approx(4)


def test_nabla_of_norm_is_twice_adjugate():
    assert nabla(SymFunc.scalar(N)) == Z.conj().scale(2)
    assert nabla_plus(SymFunc.scalar(N)) == Z.scale(2)


def test_shape_rules():
    c = SymFunc.col(z11, z21)
    r = SymFunc.row(z12, z22)
    assert (c * r).shape == (2, 2)
    assert (r * c).shape == (1, 1)
    assert (Z * c).shape == (2, 1)
    with pytest.raises(ShapeMismatch):
        c * c
