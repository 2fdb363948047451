"""Matrix coefficients t^l_{n,m}(Z) of SU(2), extended to all of H_C.

t^l_{n,m}(Z) is the coefficient of s^{l-n} in
(s z11 + z21)^{l-m} (s z12 + z22)^{l+m}. Indices are half integers; the
public functions take them as ``Fraction``/int values or as doubled ints via
``TIndex``.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np

from .laurent import Laurent, N, Ninv, SymFunc, Z, partial

__all__ = [
    "TIndex", "t", "t_inv", "t_coeff", "t_num", "t_table", "t_inv_num",
    "check_dt_identity", "check_zt_identity", "check_ct_identity",
    "check_dt_inverse", "check_ct_inverse", "all_tindices", "half",
]

half = Fraction(1, 2)


class TIndex(NamedTuple):
    """Half-integer triple (l, m, n) stored as doubled integers."""

    twoL: int
    twoM: int
    twoN: int

    @classmethod
    def of(cls, l, m, n):
        return cls(int(2 * l), int(2 * m), int(2 * n))

    @property
    def l(self):
        return Fraction(self.twoL, 2)

    @property
    def m(self):
        return Fraction(self.twoM, 2)

    @property
    def n(self):
        return Fraction(self.twoN, 2)

    def in_range(self):
        return (self.twoL >= 0 and (self.twoM - self.twoL) % 2 == 0 and (self.twoN - self.twoL) % 2 == 0
                and abs(self.twoM) <= self.twoL and abs(self.twoN) <= self.twoL)


_cache: dict = {}
_inv_cache: dict = {}
_lock = threading.Lock()


def _valid(tl, tn, tm):
    return tl >= 0 and (tl - tn) % 2 == 0 and (tl - tm) % 2 == 0 and abs(tn) <= tl and abs(tm) <= tl


def _build(tl, tn, tm):
    lm, lp, ln = (tl - tm) // 2, (tl + tm) // 2, (tl - tn) // 2
    terms = {}
    for a in range(max(0, ln - lp), min(lm, ln) + 1):
        b = ln - a
        terms[(a, b, lm - a, lp - b, 0)] = comb(lm, a) * comb(lp, b)
    return Laurent(terms)


def t(l, n, m) -> Laurent:
    """t^l_{n,m}(Z); zero outside the index range."""
    key = (int(2 * l), int(2 * n), int(2 * m))
    hit = _cache.get(key)
    if hit is not None:
        return hit
    val = _build(*key) if _valid(*key) else Laurent()
    with _lock:
        _cache.setdefault(key, val)
    return _cache[key]


def t_inv(l, n, m) -> Laurent:
    """t^l_{n,m}(Z^{-1}) = N^{-2l} t^l_{n,m}(Z^+)."""
    key = (int(2 * l), int(2 * n), int(2 * m))
    hit = _inv_cache.get(key)
    if hit is not None:
        return hit
    if _valid(*key):
        val = t(l, n, m).substitute_conj() * Laurent.monomial(k=-key[0])
    else:
        val = Laurent()
    with _lock:
        _inv_cache.setdefault(key, val)
    return _inv_cache[key]


def t_coeff(idx: TIndex) -> Laurent:
    """t^l_{n,m} for idx = (2l, 2m, 2n)."""
    return t(idx.l, idx.n, idx.m)


def all_tindices(max_two_l):
    for tl in range(max_two_l + 1):
        for tm in range(-tl, tl + 1, 2):
            for tn in range(-tl, tl + 1, 2):
                yield TIndex(tl, tm, tn)


# numeric tables --------------------------------------------------------------

_table_coef: dict = {}


def _coef_table(tl):
    hit = _table_coef.get(tl)
    if hit is not None:
        return hit
    rows = []
    for tn in range(-tl, tl + 1, 2):
        for tm in range(-tl, tl + 1, 2):
            lm, lp, ln = (tl - tm) // 2, (tl + tm) // 2, (tl - tn) // 2
            for a in range(max(0, ln - lp), min(lm, ln) + 1):
                b = ln - a
                rows.append(((tn + tl) // 2, (tm + tl) // 2, a, b, lm - a, lp - b,
                             float(comb(lm, a) * comb(lp, b))))
    arr = np.array(rows, dtype=float).reshape(-1, 7)
    _table_coef[tl] = arr
    return arr


def t_table(two_l: int, Zs) -> np.ndarray:
    """All t^l_{n,m}(Z) for one l: array (..., 2l+1, 2l+1) indexed [n+l, m+l]."""
    Zs = np.asarray(Zs, dtype=complex)
    tl = int(two_l)
    arr = _coef_table(tl)
    size = tl + 1
    out = np.zeros(Zs.shape[:-2] + (size, size), dtype=complex)
    z = [Zs[..., 0, 0], Zs[..., 0, 1], Zs[..., 1, 0], Zs[..., 1, 1]]
    pw = [np.stack([zz ** e for e in range(tl + 1)], axis=-1) for zz in z]
    ni, mi = arr[:, 0].astype(int), arr[:, 1].astype(int)
    e = arr[:, 2:6].astype(int)
    val = arr[:, 6] * pw[0][..., e[:, 0]] * pw[1][..., e[:, 1]] * pw[2][..., e[:, 2]] * pw[3][..., e[:, 3]]
    flat = out.reshape(out.shape[:-2] + (size * size,))
    _add_at(flat, ni * size + mi, val)
    return flat.reshape(out.shape)


def _add_at(flat, idx, val):
    # rows come grouped by target slot, so one segmented sum does it
    starts = np.flatnonzero(np.r_[True, idx[1:] != idx[:-1]])
    flat[..., idx[starts]] = np.add.reduceat(val, starts, axis=-1)


def t_num(l, n, m, Zs):
    tl, tn, tm = int(2 * l), int(2 * n), int(2 * m)
    if not _valid(tl, tn, tm):
        return np.zeros(np.asarray(Zs).shape[:-2], dtype=complex)
    return t_table(tl, Zs)[..., (tn + tl) // 2, (tm + tl) // 2]


def t_inv_num(two_l, Zs):
    from .hcq import num_inv
    return t_table(two_l, num_inv(Zs))


# identities ------------------------------------------------------------------

def _mat(a, b, c, d):
    return SymFunc.mat(a, b, c, d)


def _d(f: Laurent) -> SymFunc:
    """The matrix operator (d11 d21; d12 d22) applied to a scalar."""
    return _mat(partial(f, "11"), partial(f, "21"), partial(f, "12"), partial(f, "22"))


def dt_rhs(l, m, n) -> SymFunc:
    h = half
    return _mat((l - m) * t(l - h, n + h, m + h), (l - m) * t(l - h, n - h, m + h),
                (l + m) * t(l - h, n + h, m - h), (l + m) * t(l - h, n - h, m - h))


def check_dt_identity(idx: TIndex) -> bool:
    l, m, n = idx.l, idx.m, idx.n
    return _d(t(l, n, m)) == dt_rhs(l, m, n)


def _up_matrix(l, m, n, fn):
    h = half
    return _mat((l - n + 1) * fn(l + h, n - h, m - h), (l - n + 1) * fn(l + h, n - h, m + h),
                (l + n + 1) * fn(l + h, n + h, m - h), (l + n + 1) * fn(l + h, n + h, m + h))


def check_zt_identity(idx: TIndex) -> bool:
    l, m, n = idx.l, idx.m, idx.n
    h = half
    lhs = Z * t(l, n, m)
    first = _up_matrix(l, m, n, t)
    second = _mat((l + m) * t(l - h, n - h, m - h), -(l - m) * t(l - h, n - h, m + h),
                  -(l + m) * t(l - h, n + h, m - h), (l - m) * t(l - h, n + h, m + h))
    c = Fraction(1) / (2 * l + 1)
    return lhs == (first + second * N).scale(c)


def check_ct_identity(idx: TIndex) -> bool:
    l, m, n = idx.l, idx.m, idx.n
    f = t(l, n, m)
    lhs = Z * _d(f) * Z + Z * f
    return lhs == _up_matrix(l, m, n, t)


def check_dt_inverse(idx: TIndex) -> bool:
    l, m, n = idx.l, idx.m, idx.n
    lhs = _d(Ninv * t_inv(l, n, m))
    rhs = (_up_matrix(l, m, n, t_inv) * Ninv).scale(-1)
    return lhs == rhs


def check_ct_inverse(idx: TIndex) -> bool:
    l, m, n = idx.l, idx.m, idx.n
    h = half
    f = Ninv * t_inv(l, n, m)
    lhs = Z * _d(f) * Z + Z * f
    rhs = _mat((l - m) * t_inv(l - h, n + h, m + h), (l - m) * t_inv(l - h, n - h, m + h),
               (l + m) * t_inv(l - h, n + h, m - h), (l + m) * t_inv(l - h, n - h, m - h))
    return lhs == (rhs * Ninv).scale(-1)
