import numpy as np
import pytest

from quatlab.kernels import DomainViolation, kernel_closed, kernel_series
from quatlab.laurent import nabla, nabla_plus
from quatlab.quadrature import ContourSpec, s3_grid
from quatlab.regular import cauchy_fueter_series, dual_values, regular_level, regular_values
from quatlab.tcoeff import t_table


@pytest.mark.parametrize("tl", range(4))
def test_level_rank(tl):
    lev = regular_level(tl)
    assert len(lev.funcs) == (tl + 1) * (tl + 2)


@pytest.mark.parametrize("tl", range(3))
def test_columns_are_regular(tl):
    # the Cauchy-Fueter kernel columns are killed by nabla^+ acting from the left
    for F in regular_level(tl).funcs:
        assert nabla_plus(F).is_zero()
        assert not nabla(F).is_zero() or tl == 0


def test_duality_on_sphere():
    X, w = s3_grid(ContourSpec("S3R", R=1.0, nodes=20))
    P = len(X)
    F = {tl: np.stack([np.asarray(f.evaluate(X)).reshape(P, 2) for f in regular_level(tl).funcs])
         for tl in range(4)}
    G = {tl: np.einsum("akj,pk->apj", regular_level(tl).duals, t_table(tl, X).reshape(P, -1))
         for tl in range(4)}
    for a in range(4):
        for b in range(4):
            M = np.einsum("apj,pjk,bpk,p->ab", G[a], X, F[b], w) / (2 * np.pi ** 2)
            E = np.eye(len(G[a])) if a == b else np.zeros_like(M)
            assert np.max(np.abs(M - E)) < 1e-10


def test_values_shapes(rng):
    lev = regular_level(2)
    Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert regular_values(lev, Z).shape == (12, 2)
    assert dual_values(lev, Z).shape == (12, 2)


def test_series_matches_cauchy_fueter():
    Z, W = np.eye(2), 0.3 * np.eye(2)
    val, rep = cauchy_fueter_series(Z, W, cutoff=20)
    assert np.max(np.abs(val - kernel_closed("CauchyFueter", Z, W))) < 1e-8
    assert 0.25 < rep.ratio < 0.4


def test_series_through_kernel_dispatch(rng):
    Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    W = 0.3 * Z @ np.linalg.qr(rng.normal(size=(2, 2)))[0]
    val, _ = kernel_series("CauchyFueter", Z, W, 24)
    assert np.max(np.abs(val - kernel_closed("CauchyFueter", Z, W))) < 1e-8


def test_domain_warning():
    with pytest.warns(DomainViolation):
        cauchy_fueter_series(np.eye(2), 2 * np.eye(2), cutoff=2)
