"""Exact Laurent polynomial functions on H_C^x.

A scalar function is an element of C[z11, z12, z21, z22, N^{-1}] with
N = z11 z22 - z12 z21. Monomials are keys ``(a, b, c, d, k)`` standing for
z11^a z12^b z21^c z22^d N^k. The canonical form never contains both z11 and
z22: every product z11 z22 is rewritten as N + z12 z21. Because z11 z22 is
the leading term of N, the surviving monomials form a basis of the ring, so
equality of canonical forms is equality of functions.

``SymFunc`` is a small matrix (scalar, column, row or 2x2) of such scalars.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from .hcq import CRational, as_array, num_norm

__all__ = [
    "Laurent", "SymFunc", "ShapeMismatch", "SingularPoint", "Degree2Component",
    "partial", "nabla", "nabla_plus", "nabla_right", "nabla_plus_right", "box",
    "deg_op", "deg_tilde", "inv_deg_plus2", "eval_at", "Z", "Zplus", "N", "Ninv",
    "ONE", "var",
]


class ShapeMismatch(ValueError):
    pass


class SingularPoint(ArithmeticError):
    pass


class Degree2Component(ArithmeticError):
    """Raised by (deg+2)^{-1} on a nonzero homogeneous piece of degree -2."""


def _canon(key, coef, out):
    a, b, c, d, k = key
    if a and d:
        j = a if a < d else d
        a -= j
        d -= j
        for i in range(j + 1):
            kk = (a, b + j - i, c + j - i, d, k + i)
            v = out.get(kk, 0) + comb(j, i) * coef
            if v:
                out[kk] = v
            else:
                out.pop(kk, None)
    else:
        v = out.get(key, 0) + coef
        if v:
            out[key] = v
        else:
            out.pop(key, None)


def _simplify(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Laurent:
    """Scalar Laurent polynomial in canonical form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, _canonical=False):
        if terms is None:
            self.terms = {}
        elif _canonical:
            self.terms = terms
        else:
            out = {}
            for key, coef in (terms.items() if isinstance(terms, dict) else terms):
                if coef:
                    _canon(tuple(key), coef, out)
            self.terms = out
        self._hash = None

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0, 0, 0): c}) if c else cls()

    @classmethod
    def monomial(cls, a=0, b=0, c=0, d=0, k=0, coef=1):
        return cls({(a, b, c, d, k): coef})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other)
        out = dict(self.terms)
        for key, v in other.terms.items():
            w = out.get(key, 0) + v
            if w:
                out[key] = w
            else:
                del out[key]
        return Laurent(out, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -v for k, v in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return Laurent()
        return Laurent({k: v * c for k, v in self.terms.items()}, _canonical=True)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            if isinstance(other, SymFunc):
                return NotImplemented
            return self.scale(other)
        out = {}
        for (a1, b1, c1, d1, k1), v1 in self.terms.items():
            for (a2, b2, c2, d2, k2), v2 in other.terms.items():
                _canon((a1 + a2, b1 + b2, c1 + c2, d1 + d2, k1 + k2), v1 * v2, out)
        return Laurent(out, _canonical=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are only available for N")
        out = Laurent.const(1)
        for _ in range(n):
            out = out * self
        return out

    def substitute_conj(self):
        """f(Z) -> f(Z^+) where Z^+ = (z22, -z12; -z21, z11)."""
        out = {}
        for (a, b, c, d, k), v in self.terms.items():
            s = -1 if (b + c) % 2 else 1
            _canon((d, b, c, a, k), s * v, out)
        return Laurent(out, _canonical=True)

    def degrees(self):
        return {a + b + c + d + 2 * k for (a, b, c, d, k) in self.terms}

    def homogeneous_part(self, deg):
        return Laurent({key: v for key, v in self.terms.items()
                        if key[0] + key[1] + key[2] + key[3] + 2 * key[4] == deg}, _canonical=True)

    def map_coeffs(self, fn):
        out = {}
        for key, v in self.terms.items():
            w = fn(key, v)
            if w:
                out[key] = w
        return Laurent(out, _canonical=True)

    def conjugate_coeffs(self):
        return self.map_coeffs(lambda k, v: v.conjugate() if isinstance(v, CRational) else v)

    def min_k(self):
        return min((key[4] for key in self.terms), default=0)

    def serialize(self):
        """Canonical text form, sorted by monomial key."""
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            parts.append(f"{_coef_str(self.terms[key])}*[{','.join(map(str, key))}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"Laurent({self.serialize()})"

    # numeric evaluation -------------------------------------------------
    def compile(self):
        keys = np.array(list(self.terms.keys()), dtype=np.int64).reshape(-1, 5)
        coefs = np.array([complex(v) for v in self.terms.values()], dtype=complex)
        return keys, coefs

    def evaluate(self, Zs):
        return _eval_compiled(self.compile(), Zs)


def _coef_str(v):
    if isinstance(v, CRational):
        return f"({v.re}+{v.im}i)"
    return str(v)


def _eval_compiled(compiled, Zs):
    keys, coefs = compiled
    Zs = as_array(Zs)
    single = Zs.ndim == 2
    if single:
        Zs = Zs[None]
    out = np.zeros(Zs.shape[:-2], dtype=complex)
    if len(coefs):
        n = num_norm(Zs)
        if keys[:, 4].min() < 0 and np.any(n == 0):
            raise SingularPoint("N(Z) = 0 at an evaluation point")
        base = np.stack([Zs[..., 0, 0], Zs[..., 0, 1], Zs[..., 1, 0], Zs[..., 1, 1], n], axis=-1)
        # group by exponent to avoid float power of negative ints
        flat = base.reshape(-1, 5)
        acc = np.zeros(flat.shape[0], dtype=complex)
        for key, c in zip(keys, coefs):
            term = np.full(flat.shape[0], c, dtype=complex)
            for j in range(5):
                e = int(key[j])
                if e:
                    term = term * flat[:, j] ** e
            acc += term
        out = acc.reshape(Zs.shape[:-2])
    return out[0] if single else out


_SHAPES = {(1, 1): "scalar", (2, 1): "col2", (1, 2): "row2", (2, 2): "mat2"}


def _as_laurent(x):
    if isinstance(x, Laurent):
        return x
    if isinstance(x, SymFunc) and x.shape == (1, 1):
        return x.entries[0]
    return Laurent.const(x)


class SymFunc:
    """Matrix-valued Laurent function: scalar, column, row or 2x2."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape, entries):
        shape = tuple(shape)
        if shape not in _SHAPES:
            raise ShapeMismatch(f"unsupported shape {shape}")
        entries = tuple(_as_laurent(e) for e in entries)
        if len(entries) != shape[0] * shape[1]:
            raise ShapeMismatch("entry count does not match shape")
        self.shape = shape
        self.entries = entries

    @property
    def value_shape(self):
        return _SHAPES[self.shape]

    @classmethod
    def scalar(cls, f):
        return cls((1, 1), (f,))

    @classmethod
    def col(cls, a, b):
        return cls((2, 1), (a, b))

    @classmethod
    def row(cls, a, b):
        return cls((1, 2), (a, b))

    @classmethod
    def mat(cls, a, b, c, d):
        return cls((2, 2), (a, b, c, d))

    @classmethod
    def zeros(cls, shape):
        return cls(shape, [Laurent()] * (shape[0] * shape[1]))

    @classmethod
    def constant_matrix(cls, M):
        return cls.mat(*(Laurent.const(x) for x in M))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.shape[1] + j]

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other):
        if isinstance(other, SymFunc):
            if self.shape != other.shape:
                return False
            return self.entries == other.entries
        if isinstance(other, (int, Fraction)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.shape, self.entries))

    def map(self, fn):
        return SymFunc(self.shape, [fn(e) for e in self.entries])

    def _binary(self, other, op):
        if not isinstance(other, SymFunc):
            other = SymFunc.scalar(_as_laurent(other))
        if self.shape != other.shape:
            if self.shape == (1, 1) and other.shape != (1, 1):
                return SymFunc(other.shape, [op(self.entries[0], e) for e in other.entries])
            raise ShapeMismatch(f"{self.value_shape} vs {other.value_shape}")
        return SymFunc(self.shape, [op(a, b) for a, b in zip(self.entries, other.entries)])

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.map(lambda e: -e)

    def scale(self, c):
        return self.map(lambda e: e.scale(c))

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            if self.shape == (1, 1):
                s = self.entries[0]
                return other.map(lambda e: s * e)
            if other.shape == (1, 1):
                s = other.entries[0]
                return self.map(lambda e: e * s)
            r, m = self.shape
            m2, c = other.shape
            if m != m2:
                raise ShapeMismatch(f"cannot multiply {self.value_shape} by {other.value_shape}")
            entries = []
            for i in range(r):
                for j in range(c):
                    acc = Laurent()
                    for t in range(m):
                        acc = acc + self.entries[i * m + t] * other.entries[t * c + j]
                    entries.append(acc)
            return SymFunc((r, c), entries)
        if isinstance(other, Laurent):
            return self.map(lambda e: e * other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Laurent):
            return self.map(lambda e: other * e)
        return self.scale(other)

    def transpose(self):
        r, c = self.shape
        return SymFunc((c, r), [self.entries[i * c + j] for j in range(c) for i in range(r)])

    def conj(self):
        """Quaternionic conjugate (adjugate) of a 2x2 valued function."""
        if self.shape != (2, 2):
            raise ShapeMismatch("conj needs a 2x2 valued function")
        a, b, c, d = self.entries
        return SymFunc.mat(d, -b, -c, a)

    def trace(self):
        if self.shape != (2, 2):
            raise ShapeMismatch("trace needs a 2x2 valued function")
        return SymFunc.scalar(self.entries[0] + self.entries[3])

    def substitute_conj(self):
        return self.map(lambda e: e.substitute_conj())

    def degrees(self):
        out = set()
        for e in self.entries:
            out |= e.degrees()
        return out

    def homogeneous_part(self, d):
        return self.map(lambda e: e.homogeneous_part(d))

    def serialize(self):
        return f"{self.value_shape}[" + "; ".join(e.serialize() for e in self.entries) + "]"

    def __repr__(self):
        return f"SymFunc({self.serialize()})"

    def compile(self):
        return [e.compile() for e in self.entries]

    def evaluate(self, Zs, compiled=None):
        """Evaluate at one point (2x2) or a batch (..., 2, 2)."""
        compiled = compiled or self.compile()
        vals = [_eval_compiled(c, Zs) for c in compiled]
        arr = np.stack([np.asarray(v) for v in vals], axis=-1)
        return arr.reshape(arr.shape[:-1] + self.shape)


def var(name):
    idx = {"11": 0, "12": 1, "21": 2, "22": 3}[name]
    key = [0, 0, 0, 0, 0]
    key[idx] = 1
    return Laurent({tuple(key): 1})


ONE = Laurent.const(1)
N = Laurent.monomial(k=1)
Ninv = Laurent.monomial(k=-1)
Z = SymFunc.mat(var("11"), var("12"), var("21"), var("22"))
Zplus = Z.conj()


# differential operators -----------------------------------------------------

_PARTIAL_N = {  # dN/dz_ij as (key offset, sign)
    "11": ((0, 0, 0, 1, 0), 1),
    "12": ((0, 0, 1, 0, 0), -1),
    "21": ((0, 1, 0, 0, 0), -1),
    "22": ((1, 0, 0, 0, 0), 1),
}
_VAR_POS = {"11": 0, "12": 1, "21": 2, "22": 3}


def _partial_laurent(f: Laurent, which: str) -> Laurent:
    pos = _VAR_POS[which]
    off, sgn = _PARTIAL_N[which]
    out = {}
    for key, v in f.terms.items():
        e = key[pos]
        if e:
            kk = list(key)
            kk[pos] -= 1
            _canon(tuple(kk), e * v, out)
        k = key[4]
        if k:
            kk = [key[i] + off[i] for i in range(4)] + [k - 1]
            _canon(tuple(kk), sgn * k * v, out)
    return Laurent(out, _canonical=True)


def partial(f, which: str):
    """Partial derivative d/dz_{which}, which in {'11','12','21','22'}."""
    if isinstance(f, Laurent):
        return _partial_laurent(f, which)
    return f.map(lambda e: _partial_laurent(e, which))


# operator matrices: entry (i, j) is the variable differentiated
_D = (("11", "21"), ("12", "22"))
_DPLUS = ((("22", 1), ("21", -1)), (("12", -1), ("11", 1)))


def _apply_left(ops, f: SymFunc, factor):
    if f.shape == (1, 1):
        g = f.entries[0]
        return SymFunc.mat(*(partial(g, w).scale(s * factor) for row in ops for (w, s) in row))
    if f.shape[0] != 2:
        raise ShapeMismatch("left differential operator needs a column or 2x2 function")
    c = f.shape[1]
    entries = []
    for i in range(2):
        for j in range(c):
            acc = Laurent()
            for t in range(2):
                w, s = ops[i][t]
                acc = acc + partial(f.entries[t * c + j], w).scale(s * factor)
            entries.append(acc)
    return SymFunc(f.shape, entries)


def _apply_right(ops, f: SymFunc, factor):
    if f.shape == (1, 1):
        return _apply_left(ops, f, factor)
    if f.shape[1] != 2:
        raise ShapeMismatch("right differential operator needs a row or 2x2 function")
    r = f.shape[0]
    entries = []
    for i in range(r):
        for j in range(2):
            acc = Laurent()
            for t in range(2):
                w, s = ops[t][j]
                acc = acc + partial(f.entries[i * 2 + t], w).scale(s * factor)
            entries.append(acc)
    return SymFunc(f.shape, entries)


_DOPS = tuple(tuple((w, 1) for w in row) for row in _D)


def _to_sym(f):
    if isinstance(f, Laurent):
        return SymFunc.scalar(f)
    return f


def nabla(f):
    """Left action of nabla = 2 (d11 d21; d12 d22)."""
    return _apply_left(_DOPS, _to_sym(f), 2)


def nabla_plus(f):
    """Left action of nabla^+ = 2 (d22 -d21; -d12 d11)."""
    return _apply_left(_DPLUS, _to_sym(f), 2)


def nabla_right(f):
    """Right action f -> f nabla for row or 2x2 valued f."""
    return _apply_right(_DOPS, _to_sym(f), 2)


def nabla_plus_right(f):
    return _apply_right(_DPLUS, _to_sym(f), 2)


def _box_laurent(f: Laurent) -> Laurent:
    a = _partial_laurent(_partial_laurent(f, "22"), "11")
    b = _partial_laurent(_partial_laurent(f, "21"), "12")
    return (a - b).scale(4)


def box(f):
    """Laplacian 4 (d11 d22 - d12 d21), the sum of squares in e-coordinates."""
    if isinstance(f, Laurent):
        return _box_laurent(f)
    return f.map(_box_laurent)


def _deg_map(fn):
    def op(f):
        g = f if isinstance(f, Laurent) else None
        mapper = lambda e: e.map_coeffs(lambda key, v: fn(key[0] + key[1] + key[2] + key[3] + 2 * key[4], v))
        return mapper(g) if g is not None else f.map(mapper)
    return op


deg_op = _deg_map(lambda d, v: d * v)
deg_op.__doc__ = "Degree (Euler) operator."
deg_tilde = _deg_map(lambda d, v: (d + 1) * v)
deg_tilde.__doc__ = "Degree operator plus the identity."


def _inv_deg_plus2(d, v):
    if d == -2:
        raise Degree2Component("function has a nonzero homogeneous component of degree -2")
    return _simplify(Fraction(1, d + 2) * v) if not isinstance(v, CRational) else v / (d + 2)


inv_deg_plus2 = _deg_map(_inv_deg_plus2)
inv_deg_plus2.__doc__ = "(deg+2)^{-1}, defined away from degree -2."


def eval_at(f, Zv):
    """Numeric evaluation; scalars return a complex number, others an array."""
    if isinstance(f, Laurent):
        return complex(f.evaluate(as_array(Zv)))
    val = f.evaluate(as_array(Zv))
    return complex(val[..., 0, 0]) if f.shape == (1, 1) and np.ndim(val) == 2 else val
