"""Biquaternions realized as 2x2 complex matrices.

Exact arithmetic uses Gaussian rationals (``CRational``), numeric arithmetic
uses numpy complex arrays. Coordinates follow e0 = Id, e_k = -i sigma_k, so
that N(Z) = det Z is the sum of the squares of the e-coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "CRational", "crat", "I", "Biquaternion", "GL2H", "conj", "norm",
    "from_ecoords", "to_ecoords", "in_domain", "as_array", "num_conj",
    "num_norm", "num_inv", "from_ecoords_num", "to_ecoords_num",
]


class CRational:
    """Exact complex number re + i*im with rational parts.

    Arithmetic results with zero imaginary part collapse to ``Fraction`` so
    that purely real computations never pay for the complex wrapper.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _parts(x):
        if isinstance(x, CRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction, Rational)):
            return Fraction(x), Fraction(0)
        if isinstance(x, complex):
            return Fraction(x.real), Fraction(x.imag)
        raise TypeError(f"cannot coerce {type(x).__name__} to CRational")

    def __add__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re - a, self.im - b)

    def __rsub__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return crat(a - self.re, b - self.im)

    def __mul__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return crat(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        d = a * a + b * b
        if d == 0:
            raise ZeroDivisionError("CRational division by zero")
        return crat((self.re * a + self.im * b) / d, (self.im * a - self.re * b) / d)

    def __rtruediv__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return CRational(a, b) / self

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self.re == a and self.im == b

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return crat(self.re, -self.im)

    def __repr__(self):
        return f"CRational({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def crat(re, im=0):
    """Build an exact scalar, returning a plain ``Fraction`` when real."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return CRational(re, im)


I = CRational(0, 1)


def _cconj(x):
    return x.conjugate() if isinstance(x, CRational) else x


@dataclass(frozen=True)
class Biquaternion:
    """Exact element of H_C stored by its matrix entries."""

    z11: object = 0
    z12: object = 0
    z21: object = 0
    z22: object = 0

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def scalar(cls, c):
        return cls(c, 0, 0, c)

    def entries(self):
        return (self.z11, self.z12, self.z21, self.z22)

    def __add__(self, o):
        return Biquaternion(*(a + b for a, b in zip(self.entries(), o.entries())))

    def __sub__(self, o):
        return Biquaternion(*(a - b for a, b in zip(self.entries(), o.entries())))

    def __neg__(self):
        return Biquaternion(*(-a for a in self.entries()))

    def __mul__(self, o):
        if isinstance(o, Biquaternion):
            a, b, c, d = self.entries()
            e, f, g, h = o.entries()
            return Biquaternion(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return Biquaternion(*(a * o for a in self.entries()))

    def __rmul__(self, c):
        return Biquaternion(*(c * a for a in self.entries()))

    def conj(self):
        return Biquaternion(self.z22, -self.z12, -self.z21, self.z11)

    def norm(self):
        return self.z11 * self.z22 - self.z12 * self.z21

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("biquaternion with N(Z) = 0 is not invertible")
        return Biquaternion(*(Fraction(1) * a / n if not isinstance(a, float) else a / n
                              for a in self.conj().entries()))

    def star(self):
        """Hermitian adjoint Z*."""
        return Biquaternion(_cconj(self.z11), _cconj(self.z21), _cconj(self.z12), _cconj(self.z22))

    def trace(self):
        return self.z11 + self.z22

    def to_array(self):
        return np.array([[complex(self.z11), complex(self.z12)],
                         [complex(self.z21), complex(self.z22)]])

    def __repr__(self):
        return f"Biquaternion({self.z11}, {self.z12}; {self.z21}, {self.z22})"


def conj(Z: Biquaternion) -> Biquaternion:
    return Z.conj()


def norm(Z: Biquaternion):
    return Z.norm()


def from_ecoords(x0, x1, x2, x3) -> Biquaternion:
    """Matrix realization of x0 e0 + x1 e1 + x2 e2 + x3 e3."""
    return Biquaternion(x0 - I * x3, -x2 - I * x1, x2 - I * x1, x0 + I * x3)


def to_ecoords(Z: Biquaternion):
    half = Fraction(1, 2)
    z11, z12, z21, z22 = Z.entries()
    x0 = (z11 + z22) * half
    x3 = (z22 - z11) * half / I
    x2 = (z21 - z12) * half
    x1 = -(z12 + z21) * half / I
    return tuple(crat(*CRational._parts(x)) for x in (x0, x1, x2, x3))


# numeric helpers; Z is an array of shape (..., 2, 2)

def as_array(Z) -> np.ndarray:
    if isinstance(Z, Biquaternion):
        return Z.to_array()
    return np.asarray(Z, dtype=complex)


def num_conj(Z):
    Z = as_array(Z)
    out = np.empty_like(Z)
    out[..., 0, 0] = Z[..., 1, 1]
    out[..., 1, 1] = Z[..., 0, 0]
    out[..., 0, 1] = -Z[..., 0, 1]
    out[..., 1, 0] = -Z[..., 1, 0]
    return out


def num_norm(Z):
    Z = as_array(Z)
    return Z[..., 0, 0] * Z[..., 1, 1] - Z[..., 0, 1] * Z[..., 1, 0]


def num_inv(Z):
    Z = as_array(Z)
    return num_conj(Z) / num_norm(Z)[..., None, None]


def from_ecoords_num(x):
    """Map e-coordinates of shape (..., 4) to matrices of shape (..., 2, 2)."""
    x = np.asarray(x, dtype=complex)
    out = np.empty(x.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = x[..., 0] - 1j * x[..., 3]
    out[..., 0, 1] = -x[..., 2] - 1j * x[..., 1]
    out[..., 1, 0] = x[..., 2] - 1j * x[..., 1]
    out[..., 1, 1] = x[..., 0] + 1j * x[..., 3]
    return out


def to_ecoords_num(Z):
    Z = as_array(Z)
    x0 = (Z[..., 0, 0] + Z[..., 1, 1]) / 2
    x3 = (Z[..., 1, 1] - Z[..., 0, 0]) / 2j
    x2 = (Z[..., 1, 0] - Z[..., 0, 1]) / 2
    x1 = -(Z[..., 0, 1] + Z[..., 1, 0]) / 2j
    return np.stack([x0, x1, x2, x3], axis=-1)


DOMAINS = ("D+R", "D-R", "U2R", "T+", "T-", "Hreal")


def in_domain(Z, domain: str, R: float = 1.0, tol: float = 1e-10) -> bool:
    """Membership predicates for the domains D+R, D-R, U2R, T+, T- and Hreal.

    D+R: ZZ* < R^2, D-R: ZZ* > R^2, U2R: ZZ* = R^2 Id, T+/T-: the tube
    domains M + iC^{+/-}, Hreal: real quaternions.
    """
    Z = as_array(Z)
    if domain in ("D+R", "D-R"):
        s = np.linalg.svd(Z, compute_uv=False)
        if domain == "D+R":
            return bool(s.max() < R * (1 - tol))
        return bool(s.min() > R * (1 + tol))
    if domain == "U2R":
        return bool(np.allclose(Z @ Z.conj().T, R * R * np.eye(2), atol=tol * max(1.0, R * R)))
    x = to_ecoords_num(Z)
    if domain == "Hreal":
        return bool(np.all(np.abs(x.imag) <= tol * max(1.0, np.abs(x).max())))
    if domain in ("T+", "T-"):
        # M is the anti-Hermitian matrices, so Z = Y + C with C = (Z + Z*)/2 and
        # C in iC^+ exactly when C is negative definite (positive for T-).
        ev = np.linalg.eigvalsh((Z + Z.conj().T) / 2)
        scale = max(1.0, np.abs(Z).max())
        if domain == "T+":
            return bool(ev.max() < -tol * scale)
        return bool(ev.min() > tol * scale)
    raise ValueError(f"unknown domain {domain!r}")


@dataclass(frozen=True)
class GL2H:
    """Element (a' b'; c' d') of GL(2, H_C) with its inverse blocks (a b; c d)."""

    a_: Biquaternion
    b_: Biquaternion
    c_: Biquaternion
    d_: Biquaternion
    a: Biquaternion
    b: Biquaternion
    c: Biquaternion
    d: Biquaternion

    @classmethod
    def from_blocks(cls, a_, b_, c_, d_):
        M = np.block([[a_.to_array(), b_.to_array()], [c_.to_array(), d_.to_array()]])
        exact = all(not isinstance(x, (float, complex)) for blk in (a_, b_, c_, d_) for x in blk.entries())
        if exact:
            rows = [[_block_entry((a_, b_, c_, d_), i, j) for j in range(4)] for i in range(4)]
            blocks = _exact_inverse(rows)
        else:
            blocks = np.linalg.inv(M).tolist()

        def blk(r, c):
            return Biquaternion(blocks[r][c], blocks[r][c + 1], blocks[r + 1][c], blocks[r + 1][c + 1])

        return cls(a_, b_, c_, d_, blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2))

    def matrix(self):
        return np.block([[self.a_.to_array(), self.b_.to_array()],
                         [self.c_.to_array(), self.d_.to_array()]])

    def inverse_matrix(self):
        return np.block([[self.a.to_array(), self.b.to_array()],
                         [self.c.to_array(), self.d.to_array()]])


def _block_entry(blocks, i, j):
    blk = blocks[2 * (i // 2) + (j // 2)]
    return blk.entries()[2 * (i % 2) + (j % 2)]


def _exact_inverse(rows):
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular block matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p if isinstance(x, CRational) else Fraction(1) * x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
