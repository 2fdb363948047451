"""Numeric integration over S^3_R and U(2)_R, reproducing formulas and the
intertwiners built from them.

Grids are products of one-dimensional rules. The polar angle of SU(2) is
handled through u = cos^2(eta), which turns the measure into du and makes
Gauss-Legendre exact on polynomial integrands; the phases use the periodic
trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bases import basis, project
from .hcq import as_array, num_conj, num_norm, num_inv, to_ecoords_num
from .laurent import (SingularPoint, SymFunc, Z as ZSYM, box, deg_op, deg_tilde,
                      inv_deg_plus2, nabla)

# dz0^dz1^dz2^dz3 pulled back along (theta, u, xi1, xi2) gives the opposite
# orientation to the one used by the intertwiners; fixed by calibrate_u2().
U2_ORIENTATION = -1


class QuadratureUnderresolved(RuntimeError):
    pass


@dataclass(frozen=True)
class ContourSpec:
    manifold: str = "S3R"
    R: float = 1.0
    nodes: int = 24
    orientation: int = U2_ORIENTATION

    def __post_init__(self):
        if self.manifold not in ("S3R", "U2R"):
            raise ValueError(f"unknown manifold {self.manifold!r}")
        if self.nodes < 2:
            raise ValueError("need at least two nodes per angle")

    @staticmethod
    def for_degree(max_degree: int, manifold="S3R", R=1.0):
        return ContourSpec(manifold, R, 2 * max_degree + 4)


def _su2(u, x1, x2):
    c, s = np.sqrt(u), np.sqrt(1 - u)
    a, b = c * np.exp(1j * x1), s * np.exp(1j * x2)
    return a, b


def _quat(a, b, ac, bc):
    out = np.empty(np.broadcast(a, b).shape + (2, 2), dtype=complex)
    out[..., 0, 0], out[..., 0, 1] = a, b
    out[..., 1, 0], out[..., 1, 1] = -bc, ac
    return out


def _rules(n):
    u, wu = np.polynomial.legendre.leggauss(n)
    xi = np.arange(n) * 2 * np.pi / n
    return (u + 1) / 2, wu / 2, xi, np.full(n, 2 * np.pi / n)


def s3_grid(spec: ContourSpec):
    """Points X (K, 2, 2) on S^3_R and weights of the Euclidean dS."""
    u, wu, xi, wxi = _rules(spec.nodes)
    U, X1, X2 = np.meshgrid(u, xi, xi, indexing="ij")
    # dS = sin(eta) cos(eta) d eta = du / 2
    w = np.einsum("a,b,c->abc", wu / 2, wxi, wxi) * spec.R ** 3
    a, b = _su2(U, X1, X2)
    return spec.R * _quat(a, b, a.conj(), b.conj()).reshape(-1, 2, 2), w.reshape(-1)


def u2_grid(spec: ContourSpec):
    """Points W = R e^{i theta} u on U(2)_R and weights of the holomorphic dV.

    theta runs over [0, pi) since (theta + pi, u) and (theta, -u) coincide.
    """
    n = spec.nodes
    u, wu, xi, wxi = _rules(n)
    th = np.arange(n) * np.pi / n
    T, U, X1, X2 = np.meshgrid(th, u, xi, xi, indexing="ij")
    w = np.einsum("a,b,c,d->abcd", np.full(n, np.pi / n), wu, wxi, wxi)
    a, b = _su2(U, X1, X2)
    c, s = np.sqrt(U), np.sqrt(1 - U)
    ph = (spec.R * np.exp(1j * T))[..., None, None]
    W = ph * _quat(a, b, a.conj(), b.conj())
    e1, e2 = np.exp(1j * X1), np.exp(1j * X2)
    zero = np.zeros_like(a)
    tangents = (
        1j * W,
        ph * _quat(e1 / (2 * c), -e2 / (2 * s), e1.conj() / (2 * c), -e2.conj() / (2 * s)),
        ph * _quat(1j * a, zero, -1j * a.conj(), zero),
        ph * _quat(zero, 1j * b, zero, -1j * b.conj()),
    )
    jac = np.linalg.det(np.stack([to_ecoords_num(t) for t in tangents], axis=-1))
    return W.reshape(-1, 2, 2), (spec.orientation * w * jac).reshape(-1)


def _values(f, X):
    if isinstance(f, SymFunc):
        return f.evaluate(X)
    return np.asarray(f(X))


def integrate_s3(f, spec: ContourSpec | None = None):
    """Integral of f over S^3_R against dS; f is a SymFunc or a batched callable."""
    spec = spec or ContourSpec()
    X, w = s3_grid(spec)
    v = _values(f, X)
    return np.tensordot(w, v, axes=(0, 0))


def integrate_u2(f, spec: ContourSpec | None = None):
    spec = spec or ContourSpec("U2R")
    W, w = u2_grid(spec)
    return np.tensordot(w, _values(f, W), axes=(0, 0))


def _scaled(M, s):
    return M / s[..., None, None]


def _deg_kernel(X, X0):
    """deg_X of (X - X0)/N(X - X0), evaluated at each X."""
    D = X - X0
    n = num_norm(D)
    dn = np.einsum("kij,kji->k", num_conj(D), X)
    return _scaled(X, n) - _scaled(D, n * n / dn)


def reproduce_qlar(f: SymFunc, X0, R=1.0, nodes=48):
    """Three-term boundary formula over S^3_R for a column valued QLAR f."""
    if f.shape != (2, 1):
        raise ValueError("reproduce_qlar expects a column valued function")
    X0 = as_array(X0)
    spec = ContourSpec("S3R", R, nodes)
    X, w = s3_grid(spec)
    D = X - X0
    n = num_norm(D)
    if np.min(np.abs(n)) < 1e-12:
        raise SingularPoint("X0 lies on the sphere")
    fv = f.evaluate(X)
    nf = nabla(f)
    t1 = R / (2 * np.pi ** 2) * (_scaled(D, n * n) @ num_inv(X) @ fv)
    t2 = 1 / (8 * np.pi ** 2 * R) * (_deg_kernel(X, X0) @ nf.evaluate(X))
    t3 = -1 / (8 * np.pi ** 2 * R) * (_scaled(D, n) @ deg_op(nf).evaluate(X))
    return np.tensordot(w, t1 + t2 + t3, axes=(0, 0))


def _log_kernel(X, X0):
    lam = np.linalg.eigvals(num_inv(X) @ X0)
    return np.sum(np.log(1 - lam), axis=-1)


def _bh_kernel(X, X0):
    return 1 / num_norm(X - X0) - 1 / num_norm(X)


def _bh_kernel_deg_tilde(X, X0):
    D = X - X0
    n = num_norm(D)
    dn = np.einsum("kij,kji->k", num_conj(D), X)
    return -dn / n ** 2 + 2 / num_norm(X) + _bh_kernel(X, X0)


def _bh_kernel_inv_deg2(X, X0, nodes=40):
    # components of degree -2-j (j >= 1) get the factor -1/j
    s, ws = np.polynomial.legendre.leggauss(nodes)
    s, ws = (s + 1) / 2, ws / 2
    acc = 0
    for si, wi in zip(s, ws):
        acc = acc + wi * _bh_kernel(X, si * X0) / si
    return -acc


def reproduce_biharmonic(f: SymFunc, X0, R=1.0, nodes=48, convention="corrected"):
    """Biharmonic reproducing formula over S^3_R for X0 in B_R.

    The three boundary terms sum to <f, log N(1 - X^{-1} X0)>, which is
    f(0) - f(X0) because the log kernel expands with weights -1/(2l).
    ``convention="printed"`` returns f(0) plus the terms, i.e. 2 f(0) - f(X0).
    """
    if convention not in ("corrected", "printed"):
        raise ValueError(f"unknown convention {convention!r}")
    if f.shape != (1, 1):
        raise ValueError("reproduce_biharmonic expects a scalar function")
    X0 = as_array(X0)
    spec = ContourSpec("S3R", R, nodes)
    X, w = s3_grid(spec)
    val = lambda g: g.evaluate(X)[..., 0, 0]
    bf = box(f)
    t1 = val(f) * _bh_kernel_deg_tilde(X, X0) / (2 * np.pi ** 2)
    t2 = -val(deg_tilde(bf)) * _log_kernel(X, X0) / (8 * np.pi ** 2)
    t3 = val(deg_tilde(inv_deg_plus2(bf))) * _bh_kernel_inv_deg2(X, X0) / (4 * np.pi ** 2)
    f0 = complex(f.evaluate(np.zeros((2, 2)))[0, 0])
    total = np.dot(w, t1 + t2 + t3) / R
    return f0 + total if convention == "printed" else f0 - total


# J'_R and Mx -----------------------------------------------------------------

def _check_off_contour(Zs, R, tol=1e-6):
    for Z in Zs:
        sv = np.linalg.svd(as_array(Z), compute_uv=False)
        if np.min(np.abs(sv - R)) < tol:
            raise SingularPoint("point on U(2)_R")


def j_prime(F, Z1, Z2, R=1.0, nodes=24, orientation=U2_ORIENTATION):
    """(i/2 pi^3) int (W-Z1)/N(W-Z1) F(W) (W-Z2)/N(W-Z2) dV over U(2)_R."""
    Z1, Z2 = as_array(Z1), as_array(Z2)
    _check_off_contour((Z1, Z2), R)
    W, w = u2_grid(ContourSpec("U2R", R, nodes, orientation))
    A = _scaled(W - Z1, num_norm(W - Z1))
    B = _scaled(W - Z2, num_norm(W - Z2))
    return 1j / (2 * np.pi ** 3) * np.einsum("k,kij,kjl,klm->im", w, A, _values(F, W), B)


def mx_integral(F, Z, R=1.0, nodes=24):
    """Integral presentation of Mx^+ (Z in D^+_R) or Mx^- (Z in D^-_R)."""
    Z = as_array(Z)
    _check_off_contour((Z,), R)
    W, w = u2_grid(ContourSpec("U2R", R, nodes))
    D = W - Z
    K = _scaled(D @ _values(F, W) @ D, num_norm(D) ** 2)
    return 1j / (2 * np.pi ** 3) * np.tensordot(w, K, axes=(0, 0))


_PROJ = {"plus": "Zh+", "zero": "Zh0", "minus": "Zh-"}


def mx_operator(sign: str, F: SymFunc) -> SymFunc:
    """proj(ZFZ) - Z proj(FZ) - proj(ZF) Z + Z proj(F) Z for the chosen piece."""
    if F.shape != (2, 2):
        raise ValueError("mx_operator expects a 2x2 valued function")
    p = lambda G: project(_PROJ[sign], G)
    return p(ZSYM * F * ZSYM) - ZSYM * p(F * ZSYM) - p(ZSYM * F) * ZSYM + ZSYM * p(F) * ZSYM


def calibrate_u2(R=1.0, nodes=16, seed=0):
    """Ratio between the raw pulled-back J' and the printed value -(Z1+Z2)/2.

    Returns the orientation constant (expected +-1) and the residual of the
    second calibration target J'(N^-2 W^+) = 0.
    """
    rng = np.random.default_rng(seed)
    Z1, Z2 = (_random_in_ball(rng, 0.4 * R) for _ in range(2))
    F1 = ZSYM.conj() * SymFunc.scalar(_ninv(1))
    F2 = ZSYM.conj() * SymFunc.scalar(_ninv(2))
    raw = j_prime(F1, Z1, Z2, R, nodes, orientation=1)
    target = -(Z1 + Z2) / 2
    c = complex(np.sum(raw * target.conj()) / np.sum(np.abs(target) ** 2))
    resid = np.abs(j_prime(F2, Z1, Z2, R, nodes, orientation=1)).max()
    return c, resid


def _ninv(k):
    from .laurent import Laurent
    return Laurent.monomial(k=-k)


def _random_in_ball(rng, r):
    M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return M / np.linalg.norm(M, 2) * r


# bilocal series and the diagonal restriction -----------------------------------

@dataclass
class BilocalFunc:
    """A function of (Z1, Z2) with an optional finite series form.

    ``series`` maps ((f_family, f_index), (g_family, g_index)) to a coefficient;
    each term is the column f(Z1) times the row g(Z2).
    """
    func: Callable | None = None
    series: dict = field(default_factory=dict)

    def evaluate(self, Z1, Z2):
        if self.func is not None:
            return self.func(Z1, Z2)
        return self.series_value(Z1, Z2)

    def series_value(self, Z1, Z2):
        out = np.zeros((2, 2), dtype=complex)
        for ((ff, fi), (gf, gi)), c in self.series.items():
            fv = basis(ff, fi).sym.evaluate(as_array(Z1))
            gv = basis(gf, gi).sym.evaluate(as_array(Z2))
            out += complex(c) * (fv @ gv)
        return out


def mult_diag(F: BilocalFunc) -> SymFunc:
    """Diagonal restriction Z1 = Z2 = Z of the series form."""
    if not F.series:
        raise ValueError("mult_diag needs a series form")
    acc = SymFunc.zeros((2, 2))
    for ((ff, fi), (gf, gi)), c in F.series.items():
        acc = acc + (basis(ff, fi).sym * basis(gf, gi).sym).scale(c)
    return acc


def j_formula1_series(max_two_l: int) -> BilocalFunc:
    """Truncation of the expansion of J'^{+-}(N(W)^-2 W^+) at 2l <= max_two_l."""
    from fractions import Fraction
    from .bases import family_indices
    weights = {
        ("f1", "gT1"): lambda tl: Fraction(-1, (tl + 1) ** 2),
        ("f2", "gT2"): lambda tl: Fraction(-1, tl ** 2 * (tl + 1) ** 2),
        ("f3", "gT3"): lambda tl: Fraction(-1, tl ** 2),
    }
    series = {}
    for (ff, gf), wt in weights.items():
        for tl in range(max_two_l + 1):
            for idx in family_indices(ff, tl):
                series[((ff, idx), (gf, idx))] = wt(tl)
    return BilocalFunc(series=series)


def rho2_diagonal_numeric(F, a_, d_):
    """rho_2(h) for h = diag(a', d') as a batched numeric callable."""
    a_, d_ = as_array(a_), as_array(d_)
    ai = np.linalg.inv(a_)
    na, nd = np.linalg.det(a_), np.linalg.det(d_)

    def g(W):
        return (d_ * nd) @ _values(F, ai @ W @ d_) @ (ai / na)
    return g


def j_prime_diagonal_transform(J, Z1, Z2, a_, d_):
    """pi'_l x pi'_r of h = diag(a', d') applied to a bilocal callable J."""
    a_, d_ = as_array(a_), as_array(d_)
    ai = np.linalg.inv(a_)
    na, nd = np.linalg.det(a_), np.linalg.det(d_)
    return (a_ / na) @ J(ai @ Z1 @ d_, ai @ Z2 @ d_) @ (np.linalg.inv(d_) * nd)
