"""Reproducing kernels: closed forms and truncated basis expansions."""

from __future__ import annotations

import csv
import io
import warnings
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from .bases import FAMILIES
from .hcq import as_array, num_inv, num_norm
from .laurent import SingularPoint
from .tcoeff import t_table

KERNELS = ("QRkernel1", "QRkernel2", "BHkernelLog1", "BHkernelLog2", "CauchyFueter")


class BranchCut(ArithmeticError):
    pass


class DomainViolation(UserWarning):
    pass


# closed forms -------------------------------------------------------------------

def _log_norm(M):
    """Principal log of N(M), refusing the cut along the negative axis."""
    n = complex(np.linalg.det(M))
    if abs(n) < 1e-300:
        raise SingularPoint("log of zero")
    if n.real < 0 and abs(n.imag) <= 1e-14 * abs(n):
        raise BranchCut(f"N = {n} lies on the branch cut")
    return complex(np.log(n))


def kernel_closed(kid: str, Z, W):
    Z, W = as_array(Z), as_array(W)
    eye = np.eye(2)
    if kid in ("QRkernel1", "QRkernel2", "CauchyFueter"):
        D = Z - W
        n = num_norm(D)
        if abs(n) < 1e-14:
            raise SingularPoint("N(Z - W) = 0")
        return D / n if kid != "CauchyFueter" else np.linalg.inv(D) / n
    if kid == "BHkernelLog1":
        return _log_norm(eye - Z @ num_inv(W))
    if kid == "BHkernelLog2":
        return _log_norm(eye - num_inv(Z) @ W)
    raise KeyError(f"unknown kernel {kid!r}")


# numeric family evaluation ------------------------------------------------------
# each component: (weight(l, m, n), table, level shift, first index, second index, N power)
# table "t" is t^l(Z), table "ti" is t^l(Z^{-1}); indices are functions of (l, m, n)

def _c(w, tab, dl, i1, i2, k):
    return (w, tab, dl, i1, i2, k)


_one = lambda l, m, n: 1.0
_h = 0.5
_NUMERIC = {
    "f1": [_c(_one, "t", 0, lambda l, m, n: n - _h, lambda l, m, n: m, 0),
           _c(lambda l, m, n: -1.0, "t", 0, lambda l, m, n: n + _h, lambda l, m, n: m, 0)],
    "f2": [_c(lambda l, m, n: l - n + _h, "t", 0, lambda l, m, n: n - _h, lambda l, m, n: m, 0),
           _c(lambda l, m, n: l + n + _h, "t", 0, lambda l, m, n: n + _h, lambda l, m, n: m, 0)],
    "f3": [_c(_one, "t", -1, lambda l, m, n: n - _h, lambda l, m, n: m, 1),
           _c(lambda l, m, n: -1.0, "t", -1, lambda l, m, n: n + _h, lambda l, m, n: m, 1)],
    "g1": [_c(lambda l, m, n: l + m + _h, "t", 0, lambda l, m, n: n, lambda l, m, n: m - _h, 0),
           _c(lambda l, m, n: -(l - m + _h), "t", 0, lambda l, m, n: n, lambda l, m, n: m + _h, 0)],
    "g2": [_c(_one, "t", 0, lambda l, m, n: n, lambda l, m, n: m - _h, 0),
           _c(_one, "t", 0, lambda l, m, n: n, lambda l, m, n: m + _h, 0)],
    "g3": [_c(lambda l, m, n: l + m - _h, "t", -1, lambda l, m, n: n, lambda l, m, n: m - _h, 1),
           _c(lambda l, m, n: -(l - m - _h), "t", -1, lambda l, m, n: n, lambda l, m, n: m + _h, 1)],
    "fT1": [_c(_one, "ti", _h, lambda l, m, n: m, lambda l, m, n: n + _h, 0),
            _c(lambda l, m, n: -1.0, "ti", _h, lambda l, m, n: m, lambda l, m, n: n - _h, 0)],
    "fT2": [_c(lambda l, m, n: l - n, "ti", -_h, lambda l, m, n: m, lambda l, m, n: n + _h, -1),
            _c(lambda l, m, n: l + n, "ti", -_h, lambda l, m, n: m, lambda l, m, n: n - _h, -1)],
    "fT3": [_c(_one, "ti", -_h, lambda l, m, n: m, lambda l, m, n: n + _h, -1),
            _c(lambda l, m, n: -1.0, "ti", -_h, lambda l, m, n: m, lambda l, m, n: n - _h, -1)],
    "gT1": [_c(lambda l, m, n: l + m + 1, "ti", _h, lambda l, m, n: m + _h, lambda l, m, n: n, 0),
            _c(lambda l, m, n: -(l - m + 1), "ti", _h, lambda l, m, n: m - _h, lambda l, m, n: n, 0)],
    "gT2": [_c(_one, "ti", -_h, lambda l, m, n: m + _h, lambda l, m, n: n, -1),
            _c(_one, "ti", -_h, lambda l, m, n: m - _h, lambda l, m, n: n, -1)],
    "gT3": [_c(lambda l, m, n: l + m, "ti", -_h, lambda l, m, n: m + _h, lambda l, m, n: n, -1),
            _c(lambda l, m, n: -(l - m), "ti", -_h, lambda l, m, n: m - _h, lambda l, m, n: n, -1)],
    "phi1": [_c(_one, "t", 0, lambda l, m, n: n, lambda l, m, n: m, 0)],
    "phi2": [_c(_one, "t", -1, lambda l, m, n: n, lambda l, m, n: m, 1)],
    "phiT1": [_c(_one, "ti", 0, lambda l, m, n: m, lambda l, m, n: n, 0)],
    "phiT2": [_c(_one, "ti", -1, lambda l, m, n: m, lambda l, m, n: n, -1)],
}


class TableCache:
    """t-tables of one point Z (and of Z^{-1}) by doubled level."""

    def __init__(self, Z):
        self.Z = as_array(Z)
        self.N = complex(num_norm(self.Z))
        self._Zi = None
        self._t, self._ti = {}, {}

    @property
    def Zi(self):
        # Z = 0 is a valid point for the t-tables alone
        if self._Zi is None:
            self._Zi = num_inv(self.Z)
        return self._Zi

    def table(self, kind, tl):
        store, arg = (self._t, self.Z) if kind == "t" else (self._ti, self.Zi)
        if tl not in store:
            store[tl] = t_table(tl, arg)
        return store[tl]


def family_grid(family: str, two_l: int):
    """(l, m, n) arrays of all indices of a family at one level, m-major."""
    spec = FAMILIES[family]
    l = two_l / 2
    lf = Fraction(two_l, 2)
    mlo, mhi = spec.m_range(lf)
    nlo, nhi = spec.n_range(lf)
    ms = np.arange(float(mlo), float(mhi) + 0.5, 1.0)
    ns = np.arange(float(nlo), float(nhi) + 0.5, 1.0)
    if two_l < spec.min_two_l or ms.size == 0 or ns.size == 0:
        return np.zeros(0), np.zeros(0), np.zeros(0)
    M, Nn = np.meshgrid(ms, ns, indexing="ij")
    return np.full(M.size, l), M.ravel(), Nn.ravel()


def _gather(T, level2, i1, i2):
    if level2 < 0:
        return np.zeros(i1.shape, dtype=complex)
    a = np.rint(i1 * 2).astype(int)
    b = np.rint(i2 * 2).astype(int)
    ok = (np.abs(a) <= level2) & (np.abs(b) <= level2) & ((a - level2) % 2 == 0) & ((b - level2) % 2 == 0)
    out = np.zeros(i1.shape, dtype=complex)
    out[ok] = T[(a[ok] + level2) // 2, (b[ok] + level2) // 2]
    return out


def family_values(family: str, two_l: int, cache: TableCache) -> np.ndarray:
    """Values of every family element at one level: array (K, components)."""
    l, m, n = family_grid(family, two_l)
    comps = []
    for w, tab, dl, i1, i2, k in _NUMERIC[family]:
        lev = two_l + int(round(2 * dl))
        T = cache.table(tab, lev) if lev >= 0 else None
        v = _gather(T, lev, i1(l, m, n), i2(l, m, n)) if T is not None else np.zeros(l.shape, complex)
        comps.append(np.asarray(w(l, m, n), dtype=float) * v * cache.N ** k)
    return np.stack(comps, axis=-1)


# series --------------------------------------------------------------------------

# (left family at Z, right family at W, weight(2l))
SERIES = {
    "QRkernel1": [("f1", "gT1", lambda tl: -1 / (tl + 1)),
                  ("f2", "gT2", lambda tl: 1 / (tl * (tl + 1))),
                  ("f3", "gT3", lambda tl: 1 / tl)],
    "QRkernel2": [("fT1", "g1", lambda tl: 1 / (tl + 1)),
                  ("fT2", "g2", lambda tl: -1 / (tl * (tl + 1))),
                  ("fT3", "g3", lambda tl: -1 / tl)],
    # weights -1/(2l) and +1/(2l); the printed +1/(2l), -1/(2l) sum to minus the log
    "BHkernelLog1": [("phi1", "phiT1", lambda tl: -1 / tl),
                     ("phi2", "phiT2", lambda tl: 1 / tl)],
    "BHkernelLog2": [("phiT1", "phi1", lambda tl: -1 / tl),
                     ("phiT2", "phi2", lambda tl: 1 / tl)],
}

DOMAINS = {"QRkernel1": "ZW^-1", "BHkernelLog1": "ZW^-1",
           "QRkernel2": "Z^-1W", "BHkernelLog2": "Z^-1W", "CauchyFueter": "Z^-1W"}


def domain_radius(kid, Z, W):
    """Spectral norm of ZW^{-1} or Z^{-1}W; the series needs it below 1."""
    Z, W = as_array(Z), as_array(W)
    M = Z @ np.linalg.inv(W) if DOMAINS[kid] == "ZW^-1" else np.linalg.inv(Z) @ W
    return float(np.linalg.norm(M, 2)), float(max(abs(np.linalg.eigvals(M))))


@dataclass
class TruncationReport:
    kernel: str
    cutoff: int
    level_errors: list = field(default_factory=list)
    term_norms: list = field(default_factory=list)
    ratio: float = float("nan")
    spectral_radius: float = float("nan")
    diverging: bool = False

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kernel", "two_l", "partial_sum_error", "term_norm"])
        for tl, (e, t) in enumerate(zip(self.level_errors, self.term_norms)):
            w.writerow([self.kernel, tl, f"{e:.6e}", f"{t:.6e}"])
        return buf.getvalue()


def _level_term(kid, tl, cz, cw, convention):
    acc = 0
    for lf, rf, wt in SERIES[kid]:
        if tl < FAMILIES[lf].min_two_l or tl == 0 and lf.startswith("phi"):
            continue
        a = family_values(lf, tl, cz)
        b = family_values(rf, tl, cw)
        if a.shape[0] == 0:
            continue
        w = wt(tl)
        if convention == "printed" and kid.startswith("BH"):
            w = -w
        if a.shape[1] == 1:
            acc = acc + w * np.sum(a[:, 0] * b[:, 0])
        else:
            acc = acc + w * np.einsum("ki,kj->ij", a, b)
    return acc


def kernel_series(kid: str, Z, W, cutoff: int = 40, convention="corrected", report=True):
    """Partial sum over 2l <= cutoff, levels added in increasing l.

    Within a level all (m, n) are summed first, matching the prescribed
    order. Returns (value, TruncationReport).
    """
    if kid == "CauchyFueter":
        from .regular import cauchy_fueter_series
        return cauchy_fueter_series(Z, W, cutoff)
    if kid not in SERIES:
        raise KeyError(f"unknown kernel {kid!r}")
    if convention not in ("corrected", "printed"):
        raise ValueError(convention)
    norm, rho = domain_radius(kid, Z, W)
    if norm >= 1:
        warnings.warn(f"{kid}: {DOMAINS[kid]} outside D+ (norm {norm:.3g}); divergence expected",
                      DomainViolation, stacklevel=2)
    cz, cw = TableCache(Z), TableCache(W)
    try:
        exact = kernel_closed(kid, Z, W)
    except (SingularPoint, BranchCut):
        exact = None
    if exact is not None and convention == "printed" and kid.startswith("BH"):
        exact = -exact
    total = 0
    rep = TruncationReport(kid, cutoff, spectral_radius=rho)
    for tl in range(cutoff + 1):
        term = _level_term(kid, tl, cz, cw, convention)
        total = total + term
        rep.term_norms.append(float(np.max(np.abs(term))) if np.ndim(term) or term else 0.0)
        rep.level_errors.append(float(np.max(np.abs(total - exact))) if exact is not None else float("nan"))
    rep.ratio = _tail_ratio(rep.term_norms)
    rep.diverging = bool(rep.ratio > 1.0 + 1e-3 and rep.term_norms[-1] > rep.term_norms[len(rep.term_norms) // 2])
    return total, (rep if report else None)


def _tail_ratio(norms):
    v = np.array([x for x in norms[len(norms) // 2:] if x > 1e-280])
    if v.size < 3:
        return float("nan")
    return float(np.exp(np.polyfit(np.arange(v.size), np.log(v), 1)[0]))


# gradient relation -----------------------------------------------------------------

_UNITS = {(i, j): np.eye(2)[:, [i]] @ np.eye(2)[[j], :] for i in range(2) for j in range(2)}


def nabla_plus_fd(fn, Z, h=1e-5):
    """Central differences for nabla^+ = 2 (d22 -d21; -d12 d11) of a scalar function."""
    Z = as_array(Z)
    d = {k: (fn(Z + h * E) - fn(Z - h * E)) / (2 * h) for k, E in _UNITS.items()}
    return 2 * np.array([[d[1, 1], -d[1, 0]], [-d[0, 1], d[0, 0]]])


def _local_log_norm(M_of, base):
    """log N(M_of(A)) up to a constant, continuous near ``base`` on any branch."""
    n0 = complex(np.linalg.det(M_of(base)))
    if abs(n0) < 1e-300:
        raise SingularPoint("log of zero")
    return lambda A: complex(np.log(np.linalg.det(M_of(A)) / n0))


def check_gradient_relation(Z, W, tol=1e-6):
    """nabla^+_Z log N(1 - Z W^-1) = 2 k(Z, W) and nabla^+_W log N(1 - Z^-1 W) = -2 k(Z, W).

    Gradients of log N do not depend on the branch, so the differences are
    taken of log N relative to its value at the base point.
    """
    Z, W = as_array(Z), as_array(W)
    eye = np.eye(2)
    k = kernel_closed("QRkernel1", Z, W)
    gz = nabla_plus_fd(_local_log_norm(lambda A: eye - A @ num_inv(W), Z), Z)
    gw = nabla_plus_fd(_local_log_norm(lambda B: eye - num_inv(Z) @ B, W), W)
    return bool(np.max(np.abs(gz - 2 * k)) < tol and np.max(np.abs(gw + 2 * k)) < tol)
