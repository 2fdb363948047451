import itertools
import warnings

import numpy as np
import pytest

from quatlab.fock import (
    CliffOp, FockState, UnknownIndex, anticommutator, apply, apply_letter, correlation2d_contour,
    correlation2d_fock, defect_on_state, field_product_defect, make_universe, normal_order, reduce,
    universe_2d, universe_qr, universe_regular, validate_qr_duality,
)
from quatlab.kernels import DomainViolation, kernel_closed


@pytest.fixture(scope="module")
def u2d():
    return universe_2d(3)


def _minus(u):
    return int(np.flatnonzero(~u.plus)[0])


def _plus(u):
    return int(np.flatnonzero(u.plus)[0])


def test_creation_and_annihilation_on_vacuum(u2d):
    i = _minus(u2d)
    s = apply(CliffOp.beta(i), FockState.vacuum(), u2d)
    assert s.amps == {1 << i: 1}
    assert not apply(CliffOp.gamma(i), FockState.vacuum(), u2d).amps
    j = _plus(u2d)
    assert apply(CliffOp.gamma(j), FockState.vacuum(), u2d).amps == {1 << j: 1}
    assert not apply(CliffOp.beta(j), FockState.vacuum(), u2d).amps


def test_anticommutation_relations(u2d, rng):
    n = len(u2d)
    for _ in range(100):
        s = FockState.random(n, rng)
        i, j = (int(x) for x in rng.integers(0, n, 2))
        pairs = [(CliffOp.beta(i), CliffOp.gamma(j), float(i == j)),
                 (CliffOp.beta(i), CliffOp.beta(j), 0.0),
                 (CliffOp.gamma(i), CliffOp.gamma(j), 0.0)]
        for x, y, expected in pairs:
            assert apply(anticommutator(x, y), s, u2d).close(s.scale(expected))


def test_unknown_mode(u2d):
    with pytest.raises(UnknownIndex):
        apply_letter("b", len(u2d), FockState.vacuum(), u2d)
    with pytest.raises(UnknownIndex):
        u2d.index(99)


def test_normal_order_examples(u2d):
    i = _plus(u2d)
    got = normal_order(CliffOp.word(("b", i), ("g", i)), u2d)
    assert got.terms == (((("g", i), ("b", i)), -1),)
    j = _minus(u2d)
    w = CliffOp.word(("b", j), ("g", i))
    assert normal_order(w, u2d) == w
    w = normal_order(CliffOp.word(("g", 1), ("b", 5), ("g", 2)), u2d)
    assert normal_order(w, u2d) == w


def test_reduce_agrees_with_apply(u2d, rng):
    i = _plus(u2d)
    op = CliffOp.word(("b", i), ("g", i), ("b", 2))
    red = reduce(op, u2d)
    for _ in range(5):
        s = FockState.random(len(u2d), rng)
        assert apply(op, s, u2d).close(apply(red, s, u2d))


def test_fockstate_algebra():
    a = FockState({0: 1, 3: 2j})
    b = FockState({3: 1})
    assert a.inner(b) == -2j
    assert (a - a).amps == {}
    assert a.scale(2).vacuum_amp() == 2


def test_defect_2d():
    u = universe_2d(60)
    assert abs(field_product_defect(u, 2.0, 1.0) - 1.0) < 1e-9


def test_defect_2d_truncation_is_exact_partial_sum():
    u = universe_2d(6)
    z, w = 2.0, 0.5
    partial = sum(z ** (-i - 1) * w ** i for i in range(7))
    assert field_product_defect(u, z, w) == pytest.approx(partial, abs=1e-15)


def test_defect_is_state_independent(rng):
    u = universe_2d(6)
    partial = sum(2.0 ** (-i - 1) * 0.5 ** i for i in range(7))
    for _ in range(3):
        s = FockState.random(len(u), rng)
        assert defect_on_state(u, 2.0, 0.5, s) / s.inner(s) == pytest.approx(partial, abs=1e-12)
    u = universe_qr(2)
    Z, W = np.eye(2), 0.3 * np.eye(2)
    k = field_product_defect(u, Z, W)
    s = FockState.random(len(u), rng)
    assert np.allclose(defect_on_state(u, Z, W, s) / s.inner(s), k, atol=1e-12)


def test_defect_qr_universe():
    u = universe_qr(30)
    Z, W = np.eye(2), 0.3 * np.eye(2)
    assert np.allclose(field_product_defect(u, Z, W), 0.7 * np.eye(2) / 0.49, atol=1e-6)


def test_qr_defect_equals_truncated_series(rng):
    from quatlab.kernels import kernel_series
    u = universe_qr(6)
    Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    W = 0.4 * Z @ np.linalg.qr(rng.normal(size=(2, 2)))[0]
    series, _ = kernel_series("QRkernel2", Z, W, 6)
    assert np.allclose(field_product_defect(u, Z, W), series, atol=1e-12)


def test_qr_duality_validation():
    u = universe_qr(2, validate_max=2)
    assert len(u) > 0


def test_defect_regular_universe():
    u = universe_regular(20)
    Z, W = np.eye(2), 0.3 * np.eye(2)
    assert np.allclose(field_product_defect(u, Z, W), kernel_closed("CauchyFueter", Z, W), atol=1e-6)
    assert u.plus.all()


def test_make_universe():
    assert make_universe("2D", 2).name == "2D"
    with pytest.raises(KeyError):
        make_universe("5D", 2)


def test_defect_domain_warning():
    with pytest.warns(DomainViolation):
        field_product_defect(universe_2d(3), 1.0, 2.0)


def test_correlation_trivial():
    assert correlation2d_fock({0: 0}, {0: 0}, {0: 0}) == 0
    assert abs(correlation2d_contour({0: 0}, {0: 0}, {0: 0})) < 1e-15


def test_correlation_scalar_examples():
    F, G, H = {1: 1}, {-1: 1}, {0: 1}
    assert correlation2d_fock(F, G, H) == pytest.approx(correlation2d_contour(F, G, H), abs=1e-9)
    one = {0: 1}
    assert correlation2d_fock(one, one, one) == pytest.approx(correlation2d_contour(one, one, one), abs=1e-9)


def test_rank_one_three_point_vanishes():
    for a, b in itertools.product(range(-3, 4), repeat=2):
        F, G, H = {a: 1}, {b: 1}, {-a - b: 1}
        assert abs(correlation2d_fock(F, G, H, 1, 6)) < 1e-12
        assert abs(correlation2d_contour(F, G, H, nodes=64)) < 1e-9


def test_correlation_matrix_instances(rng):
    for r, powers in [(2, ([1, 0], [-1, 2], [0, -1])), (2, ([2], [-1], [-1])), (3, ([1], [0, -1], [0]))]:
        F, G, H = ({k: rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r)) for k in p} for p in powers)
        a = correlation2d_fock(F, G, H, r, cutoff=5)
        b = correlation2d_contour(F, G, H)
        assert abs(a - b) < 1e-9 * max(1, abs(a))


def test_printed_single_loop_differs(rng):
    r = 2
    F, G, H = ({k: rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r)) for k in p}
               for p in ([2], [-1], [-1]))
    fock = correlation2d_fock(F, G, H, r, cutoff=5)
    wick = correlation2d_contour(F, G, H)
    printed = correlation2d_contour(F, G, H, convention="printed")
    assert abs(fock - wick) < 1e-9 * abs(fock)
    assert abs(fock - printed) > 1e-3 * abs(fock)
