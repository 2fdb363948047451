from fractions import Fraction

import numpy as np
import pytest

from quatlab.hcq import (
    Biquaternion, CRational, GL2H, I, conj, from_ecoords, from_ecoords_num, in_domain, norm,
    num_inv, num_norm, to_ecoords, to_ecoords_num,
)


def test_conj_examples():
    assert conj(Biquaternion.identity()) == Biquaternion.identity()
    e1 = from_ecoords(0, 1, 0, 0)
    assert conj(e1) == -e1
    assert conj(Biquaternion(1, 2, 3, 4)) == Biquaternion(4, -2, -3, 1)


def test_norm_examples():
    assert norm(Biquaternion.identity()) == 1
    assert norm(from_ecoords(1, 1, 0, 0)) == 2
    assert norm(Biquaternion(1, 2, 3, 4)) == -2


def test_units_square_to_minus_one():
    one = Biquaternion.identity()
    for k in range(1, 4):
        x = [0, 0, 0, 0]
        x[k] = 1
        e = from_ecoords(*x)
        assert e * e == -one


def test_norm_is_sum_of_squares():
    x = (CRational(1, 2), Fraction(-3, 4), CRational(0, 1), 5)
    Z = from_ecoords(*x)
    assert Z.norm() == sum(c * c for c in x)


def test_ecoords_round_trip_exact():
    x = (CRational(1, 2), CRational(-3, 1), CRational(0, 5), CRational(7, -1))
    assert to_ecoords(from_ecoords(*x)) == x


def test_ecoords_round_trip_numeric(rng):
    x = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    assert np.allclose(to_ecoords_num(from_ecoords_num(x)), x)


def test_inverse_and_multiplicativity():
    Z = Biquaternion(CRational(1, 1), 2, I, 4)
    W = Biquaternion(3, -1, 0, CRational(2, -1))
    assert Z * Z.inverse() == Biquaternion.identity()
    assert (Z * W).norm() == Z.norm() * W.norm()
    assert (Z * W).conj() == W.conj() * Z.conj()


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        Biquaternion(1, 2, 2, 4).inverse()


def test_numeric_helpers(rng):
    Z = rng.normal(size=(3, 2, 2)) + 1j * rng.normal(size=(3, 2, 2))
    assert np.allclose(num_norm(Z), np.linalg.det(Z))
    assert np.allclose(num_inv(Z), np.linalg.inv(Z))


def test_domains():
    assert in_domain(0.3 * np.eye(2), "D+R")
    assert not in_domain(np.eye(2), "D+R")
    assert in_domain(2 * np.eye(2), "D-R")
    assert in_domain(np.eye(2), "U2R")
    X = from_ecoords_num([0.4, -1.0, 2.0, 0.3])
    assert in_domain(X, "Hreal")
    # M is anti-Hermitian, so iC+ is the negative definite Hermitian matrices
    assert in_domain(-np.eye(2) + X, "T+")
    assert not in_domain(-np.eye(2) + X, "T-")
    assert in_domain(np.eye(2) + X, "T-")
    with pytest.raises(ValueError):
        in_domain(X, "nowhere")


def test_gl2h_inverse_blocks():
    one, zero = Biquaternion.identity(), Biquaternion()
    B = Biquaternion(1, 2, 0, 1)
    g = GL2H.from_blocks(one, B, zero, one)
    assert g.b == -B
    assert np.allclose(g.matrix() @ g.inverse_matrix(), np.eye(4))
