"""Conformal Lie algebra actions on Laurent functions.

Every action of X = (A B; C D) in gl(2, H_C) is the common vector field

    f -> -tr((AZ + B - ZCZ - ZD) d) f

plus multiplier terms that depend on the representation. Here
tr(M d) = sum_ik M_ik d/dz_ik. Group level actions are provided only for
the elements used in the text: block diagonal elements, the inversion
(0 1; 1 0) and the Cayley transforms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hcq import Biquaternion, CRational, as_array, num_inv, num_norm
from .laurent import Laurent, ShapeMismatch, SingularPoint, SymFunc, Z, _canon, box, nabla, partial

__all__ = [
    "LieElem", "ACTIONS", "act", "vector_field", "inversion", "act_diagonal", "torus",
    "cayley", "check_poincare_intertwiner", "generator", "GENERATORS", "elementary",
    "substitute_inverse",
]

# the value shape each action acts on
ACTIONS = {
    "rhoPrime": "scalar",
    "rho1": "scalar",
    "piPrimeL": "col2",
    "piLa": "col2",
    "piL": "col2",
    "piPrimeR": "row2",
    "piRa": "row2",
    "rho2": "mat2",
    "rho2Prime": "mat2",
}


def _bq(x) -> Biquaternion:
    if isinstance(x, Biquaternion):
        return x
    if x is None or (not isinstance(x, (list, tuple, np.ndarray)) and x == 0):
        return Biquaternion()
    arr = x
    return Biquaternion(arr[0][0], arr[0][1], arr[1][0], arr[1][1])


@dataclass(frozen=True)
class LieElem:
    """Element (A B; C D) of gl(2, H_C), each block a 2x2 biquaternion."""

    A: Biquaternion = Biquaternion()
    B: Biquaternion = Biquaternion()
    C: Biquaternion = Biquaternion()
    D: Biquaternion = Biquaternion()

    @classmethod
    def of(cls, A=0, B=0, C=0, D=0):
        return cls(_bq(A), _bq(B), _bq(C), _bq(D))

    @classmethod
    def from_matrix(cls, M):
        M = [list(r) for r in M]

        def blk(r, c):
            return Biquaternion(M[r][c], M[r][c + 1], M[r + 1][c], M[r + 1][c + 1])
        return cls(blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2))

    def matrix(self):
        rows = [[0] * 4 for _ in range(4)]
        for (r, c), q in (((0, 0), self.A), ((0, 2), self.B), ((2, 0), self.C), ((2, 2), self.D)):
            a, b, cc, d = q.entries()
            rows[r][c], rows[r][c + 1], rows[r + 1][c], rows[r + 1][c + 1] = a, b, cc, d
        return rows

    def __add__(self, o):
        return LieElem(self.A + o.A, self.B + o.B, self.C + o.C, self.D + o.D)

    def __sub__(self, o):
        return LieElem(self.A - o.A, self.B - o.B, self.C - o.C, self.D - o.D)

    def __neg__(self):
        return LieElem(-self.A, -self.B, -self.C, -self.D)

    def scale(self, c):
        return LieElem(self.A * c, self.B * c, self.C * c, self.D * c)

    def __mul__(self, o):
        return LieElem(self.A * o.A + self.B * o.C, self.A * o.B + self.B * o.D,
                       self.C * o.A + self.D * o.C, self.C * o.B + self.D * o.D)

    def bracket(self, o):
        return self * o - o * self

    def is_u22(self):
        """A = -A*, D = -D*, C = B* (the real form preserving U(2))."""
        return self.A == -self.A.star() and self.D == -self.D.star() and self.C == self.B.star()

    def is_pprime(self):
        """Lie algebra of the Poincare group preserving M: (A B; 0 -A*), tr A = 0, B* = -B."""
        return (self.C == Biquaternion() and self.D == -self.A.star()
                and self.A.trace() == 0 and self.B.star() == -self.B)

    def __repr__(self):
        return f"LieElem(A={self.A}, B={self.B}, C={self.C}, D={self.D})"


def elementary(block: str, i: int, j: int, coef=1) -> LieElem:
    """The matrix unit E_ij placed in one block."""
    e = [[0, 0], [0, 0]]
    e[i][j] = coef
    return LieElem.of(**{block: e})


I_ = CRational(0, 1)

GENERATORS = {
    "E1": elementary("A", 0, 1),
    "F1": elementary("A", 1, 0),
    "E2": elementary("D", 1, 0),
    "F2": elementary("D", 0, 1),
    "B=E11": elementary("B", 0, 0),
    "C=E11": elementary("C", 0, 0),
    "X": LieElem.of(B=[[1, 0], [0, 0]], C=[[1, 0], [0, 0]]),
    "Y": LieElem.of(B=[[I_, 0], [0, 0]], C=[[-I_, 0], [0, 0]]),
}


def generator(name: str) -> LieElem:
    return GENERATORS[name]


def _const(q: Biquaternion) -> SymFunc:
    return SymFunc.constant_matrix(q.entries())


def _sc(x) -> Laurent:
    return x.entries[0] if isinstance(x, SymFunc) else x


_VARS = ("11", "12", "21", "22")


def _derivation(V: SymFunc):
    """Return f -> tr(V d) f = sum_ik V_ik df/dz_ik on a Laurent scalar."""
    coeffs = [(V.entries[idx], w) for idx, w in enumerate(_VARS) if V.entries[idx]]

    def apply(e: Laurent) -> Laurent:
        acc = Laurent()
        for c, w in coeffs:
            d = partial(e, w)
            if d:
                acc = acc + c * d
        return acc
    return apply


def vector_field(X: LieElem, f: SymFunc) -> SymFunc:
    """-tr((AZ + B - ZCZ - ZD) d) applied entrywise."""
    A, B, C, D = (_const(q) for q in (X.A, X.B, X.C, X.D))
    V = A * Z + B - Z * C * Z - Z * D
    der = _derivation(V)
    return f.map(lambda e: -der(e))


def _shape_guard(action, f):
    want = ACTIONS.get(action)
    if want is None:
        raise ValueError(f"unknown action {action!r}")
    if f.value_shape != want:
        raise ShapeMismatch(f"{action} acts on {want} functions, got {f.value_shape}")


def act(action: str, X: LieElem, f: SymFunc) -> SymFunc:
    """Exact Lie algebra action of X on f."""
    if isinstance(f, Laurent):
        f = SymFunc.scalar(f)
    _shape_guard(action, f)
    A, B, C, D = (_const(q) for q in (X.A, X.B, X.C, X.D))
    out = vector_field(X, f)
    trA = X.A.trace()
    trD = X.D.trace()
    ZC = Z * C
    CZ = C * Z
    if action == "rhoPrime":
        return out
    if action == "rho1":
        return out + f * (_sc(ZC.trace()).scale(2) + Laurent.const(trD - trA))
    if action in ("piPrimeL", "piLa", "piL"):
        if action == "piL":
            M = CZ + D
            return out + M * f + f * (_sc(M.trace()))
        k = 1 if action == "piPrimeL" else 2
        s = _sc(ZC.trace()).scale(k) - Laurent.const(trA * k)
        return out + (A - ZC) * f + f * s
    if action in ("piPrimeR", "piRa"):
        k = 1 if action == "piPrimeR" else 2
        M = CZ + D
        return out + f * _sc(M.trace()).scale(k) - f * M
    if action == "rho2":
        M = CZ + D
        s = _sc(M.trace()) + _sc(ZC.trace()) - Laurent.const(trA)
        return out + M * f + f * s - f * A + f * ZC
    # rho2Prime: left multiplier of piPrimeL, right multiplier of piPrimeR
    M = CZ + D
    s = _sc(ZC.trace()) - Laurent.const(trA) + _sc(M.trace())
    return out + (A - ZC) * f - f * M + f * s


# group elements ---------------------------------------------------------

def _substitute_inverse_laurent(e: Laurent) -> Laurent:
    out = {}
    for (a, b, c, d, k), v in e.terms.items():
        s = -1 if (b + c) % 2 else 1
        _canon((d, b, c, a, -k - (a + b + c + d)), s * v, out)
    return Laurent(out, _canonical=True)


def substitute_inverse(f):
    """f(Z) -> f(Z^{-1}) using Z^{-1} = Z^+ / N(Z)."""
    if isinstance(f, Laurent):
        return _substitute_inverse_laurent(f)
    return f.map(_substitute_inverse_laurent)


def inversion(action: str, f: SymFunc) -> SymFunc:
    """Action of the group element (0 1; 1 0)."""
    if isinstance(f, Laurent):
        f = SymFunc.scalar(f)
    fi = substitute_inverse(f)
    ZN = Z * Laurent.monomial(k=-1)
    if action == "piPrimeL":
        return -(ZN * fi)
    if action == "piPrimeR":
        return fi * ZN
    if action == "rhoPrime":
        return fi
    raise ValueError(f"inversion is implemented for piPrimeL, piPrimeR and rhoPrime, not {action!r}")


def _linear_sub(e: Laurent, P: Biquaternion, Q: Biquaternion) -> Laurent:
    """e(P Z Q) for constant P, Q."""
    img = Z_images(P, Q)
    nfac = P.norm() * Q.norm()
    out = Laurent()
    for (a, b, c, d, k), v in e.terms.items():
        term = Laurent.monomial(k=k, coef=v * _pow(nfac, k))
        for base, ex in zip(img, (a, b, c, d)):
            if ex:
                term = term * base ** ex
        out = out + term
    return out


def _recip(x):
    return 1 / x if isinstance(x, CRational) else Fraction(1) / x


def _pow(x, k):
    r = 1
    for _ in range(abs(k)):
        r = r * x
    return r if k >= 0 else _recip(r)


def Z_images(P: Biquaternion, Q: Biquaternion):
    W = _const(P) * Z * _const(Q)
    return W.entries


def act_diagonal(action: str, a_: Biquaternion, d_: Biquaternion, f: SymFunc) -> SymFunc:
    """Group action of h = diag(a', d'), so h^{-1} = diag(a'^{-1}, d'^{-1}).

    The argument becomes (aZ + b)(cZ + d)^{-1} = a'^{-1} Z d'. Supported for
    piPrimeL, piPrimeR, piLa, piRa, piL and rhoPrime.
    """
    if isinstance(f, Laurent):
        f = SymFunc.scalar(f)
    _shape_guard(action, f)
    ai = a_.inverse()
    g = f.map(lambda e: _linear_sub(e, ai, d_))
    if action == "rhoPrime":
        return g
    if action == "piPrimeL":  # (a' - Zc') / N(a' - Zc')
        return (_const(a_) * g) * _recip(a_.norm())
    if action == "piLa":
        return (_const(a_) * g) * _recip(a_.norm() ** 2)
    di = d_.inverse()
    if action == "piL":  # (cZ + d)^{-1} / N(cZ + d) with d = d'^{-1}
        return (_const(d_) * g) * d_.norm()
    if action == "piPrimeR":  # (cZ + d) / N(cZ + d)
        return g * _const(di) * d_.norm()
    if action == "piRa":
        n = d_.norm()
        return g * _const(di) * (n * n)
    raise ValueError(f"diagonal action not available for {action!r}")


def torus(action: str, lam, f: SymFunc) -> SymFunc:
    """The element diag(lam, lam, 1/lam, 1/lam)."""
    lq = Biquaternion.scalar(lam)
    li = Biquaternion.scalar(_recip(lam))
    return act_diagonal(action, lq, li, f)


# Cayley transform (numeric) ---------------------------------------------

_EYE = np.eye(2)

_CAYLEY = {
    # flavour: (forward prefactor, inverse prefactor) as functions of Z
    "piPrimeL": (lambda Z: 1j * (Z - _EYE) / num_norm(Z - _EYE)[..., None, None],
                 lambda Z: -2 * (Z + 1j * _EYE) / num_norm(Z + 1j * _EYE)[..., None, None]),
    "piLa": (lambda Z: -1j * (Z - _EYE) / (num_norm(Z - _EYE) ** 2)[..., None, None],
             lambda Z: -8 * (Z + 1j * _EYE) / (num_norm(Z + 1j * _EYE) ** 2)[..., None, None]),
    "piL": (lambda Z: 8 * num_inv(Z - _EYE) / num_norm(Z - _EYE)[..., None, None],
            lambda Z: 1j * num_inv(Z + 1j * _EYE) / num_norm(Z + 1j * _EYE)[..., None, None]),
    "pi0L": (lambda Z: 4 / num_norm(Z - _EYE),
             lambda Z: -1 / num_norm(Z + 1j * _EYE)),
}


def _gamma_inv_point(Z):
    return -1j * (Z + _EYE) @ num_inv(Z - _EYE)


def _gamma_point(Z):
    return (Z - 1j * _EYE) @ num_inv(Z + 1j * _EYE)


def _as_callable(f):
    if callable(f) and not isinstance(f, (SymFunc, Laurent)):
        return f
    compiled = f.compile() if isinstance(f, SymFunc) else None

    def ev(Zs):
        if isinstance(f, Laurent):
            return f.evaluate(Zs)
        val = f.evaluate(Zs, compiled)
        return val[..., 0, 0] if f.shape == (1, 1) else val
    return ev


def cayley(direction: str, flavor: str, f):
    """Numeric Cayley transform of f; returns a callable on points (..., 2, 2).

    ``fwd`` sends functions on D+ to functions on T+, ``inv`` goes back.
    Scalar flavour ``pi0L`` expects scalar f, the others column-valued f.
    """
    if flavor not in _CAYLEY:
        raise ValueError(f"unknown Cayley flavour {flavor!r}")
    pre = _CAYLEY[flavor][0 if direction == "fwd" else 1]
    arg = _gamma_inv_point if direction == "fwd" else _gamma_point
    g = _as_callable(f)

    def transformed(Zs):
        Zs = as_array(Zs)
        shift = Zs - _EYE if direction == "fwd" else Zs + 1j * _EYE
        if np.any(np.abs(num_norm(shift)) < 1e-14):
            raise SingularPoint("Cayley transform evaluated at a pole")
        p = pre(Zs)
        val = g(arg(Zs))
        if flavor == "pi0L":
            return p * val
        return p @ val
    return transformed


# Poincare intertwiners --------------------------------------------------

def check_poincare_intertwiner(X: LieElem, f: SymFunc) -> bool:
    """nabla o piPrimeL(X) == piL(X) o nabla and box o piPrimeL(X) == piLa(X) o box."""
    g = act("piPrimeL", X, f)
    ok1 = nabla(g) == act("piL", X, nabla(f))
    ok2 = box(g) == act("piLa", X, box(f))
    return bool(ok1 and ok2)
