"""Invariant bilinear pairings and pseudounitary forms.

Each form is available structurally (exact, through basis expansions and the
orthogonality constants) and as an S^3_R integral; the two are cross-checked
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .actions import LieElem, act, inversion
from .bases import (BH_FAMILIES, PARTNER, U_FAMILIES, UPRIME_FAMILIES, basis, expand_in_basis,
                    family_indices)
from .hcq import _cconj, num_inv
from .laurent import SymFunc, box, deg_op, deg_tilde, inv_deg_plus2, nabla
from .quadrature import ContourSpec, s3_grid

KINDS = ("QR", "BH", "pseudoUplus", "pseudoUminus", "pseudoBHplus", "pseudoBHminus")


def pairing_constant(family: str, idx) -> Fraction:
    """<b, partner(b)> for a basis element b = family(idx)."""
    tl = idx[0]
    fam = family.replace("T", "")
    return {
        "f1": Fraction(tl + 1), "g1": Fraction(tl + 1),
        "f2": Fraction(-tl * (tl + 1)), "g2": Fraction(-tl * (tl + 1)),
        "f3": Fraction(-tl), "g3": Fraction(-tl),
        "phi1": Fraction(tl), "phi2": Fraction(-tl),
    }[fam]


def _as_sym(x):
    return x if isinstance(x, SymFunc) else SymFunc.scalar(x)


def _expansion(F, kind):
    if kind == "QR-left":
        return expand_in_basis(F, U_FAMILIES)
    if kind == "QR-right":
        return expand_in_basis(F, UPRIME_FAMILIES)
    return expand_in_basis(F, BH_FAMILIES)


def pair_coefficients(ca: dict, cb: dict) -> Fraction:
    """Bilinear extension of the orthogonality table to two expansions."""
    acc = Fraction(0)
    for (fam, idx), x in ca.items():
        y = cb.get((PARTNER[fam], idx))
        if y:
            acc = acc + x * y * pairing_constant(fam, idx)
    return acc


def pair_structural(kind: str, a, b):
    """Exact value of <a, b> for kind "QR" (column, row) or "BH" (scalars)."""
    a, b = _as_sym(a), _as_sym(b)
    if kind == "QR":
        return pair_coefficients(_expansion(a, "QR-left"), _expansion(b, "QR-right"))
    if kind == "BH":
        return pair_coefficients(_expansion(a, "BH"), _expansion(b, "BH"))
    raise ValueError(f"no structural pairing of kind {kind!r}")


# integral formulas ---------------------------------------------------------------

def _split(F: SymFunc):
    degs = F.degrees()
    pos = sum((F.homogeneous_part(d) for d in sorted(degs) if d >= 0), SymFunc.zeros(F.shape))
    neg = sum((F.homogeneous_part(d) for d in sorted(degs) if d < 0), SymFunc.zeros(F.shape))
    return pos, neg


def _bandwidth(*fs):
    return sum(max((abs(d) for d in f.degrees()), default=0) for f in fs) + 4


def _nodes_for(*fs):
    return 2 * _bandwidth(*fs) + 4


def _qr_formula(f: SymFunc, g: SymFunc, R, nodes):
    if f.is_zero() or g.is_zero():
        return 0j
    X, w = s3_grid(ContourSpec("S3R", R, nodes or _nodes_for(f, g)))
    nf = nabla(f)
    ev = lambda h: h.evaluate(X)
    t = (ev(deg_op(g)) @ ev(nf) - ev(g) @ ev(deg_op(nf))) / R
    t = t - R * (ev(box(g)) @ num_inv(X) @ ev(f))
    return complex(np.dot(w, t[:, 0, 0])) / (8 * np.pi ** 2)


def _bh_formula(f: SymFunc, g: SymFunc, R, nodes):
    if f.is_zero() or g.is_zero():
        return 0j
    X, w = s3_grid(ContourSpec("S3R", R, nodes or _nodes_for(f, g)))
    ev = lambda h: h.evaluate(X)[:, 0, 0]
    bf, bg = box(f), box(g)
    t = (ev(f) * ev(deg_tilde(bg)) - ev(deg_tilde(bf)) * ev(g)) / (8 * np.pi ** 2)
    t = t + ev(deg_tilde(inv_deg_plus2(bf))) * ev(inv_deg_plus2(bg)) / (16 * np.pi ** 2)
    return complex(np.dot(w, t)) / R


def pair_integral(kind: str, a, b, R=1.0, nodes=None):
    """S^3_R integral evaluation of <a, b>.

    Only the mixed blocks are integrated: the QR pairing vanishes on
    U+ x U'+ and U- x U'- by definition, and the BH formula is applied
    to (BH+, BH-) with symmetry supplying the other block.
    """
    a, b = _as_sym(a), _as_sym(b)
    ap, an = _split(a)
    bp, bn = _split(b)
    if kind == "QR":
        return _qr_formula(ap, bn, R, nodes) + _qr_formula(an, bp, R, nodes)
    if kind == "BH":
        return _bh_formula(ap, bn, R, nodes) + _bh_formula(bp, an, R, nodes)
    raise ValueError(f"no integral pairing of kind {kind!r}")


# invariance ---------------------------------------------------------------------

@dataclass
class InvarianceReport:
    kind: str
    generator: str
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def _sweep_elements(families, max_two_l):
    for fam in families:
        for tl in range(max_two_l + 1):
            for idx in family_indices(fam, tl):
                yield fam, idx


def check_invariance(kind: str, X: LieElem, max_two_l=3, name="X") -> InvarianceReport:
    """<act(X) a, b> + <a, act(X) b> = 0 on all basis pairs with 2l <= max_two_l."""
    if kind == "QR":
        left, right = ("f1", "f2", "f3", "fT1", "fT2", "fT3"), ("g1", "g2", "g3", "gT1", "gT2", "gT3")
        la, ra, le, re = "piPrimeL", "piPrimeR", "QR-left", "QR-right"
    elif kind == "BH":
        left = right = BH_FAMILIES
        la = ra = "rhoPrime"
        le = re = "BH"
    else:
        raise ValueError(kind)
    moved_a = {k: _expansion(act(la, X, basis(*k).sym), le) for k in _sweep_elements(left, max_two_l)}
    moved_b = {k: _expansion(act(ra, X, basis(*k).sym), re) for k in _sweep_elements(right, max_two_l)}
    failures, count = [], 0
    for ka, xa in moved_a.items():
        for kb, xb in moved_b.items():
            count += 1
            lhs = pair_coefficients(xa, {kb: 1}) + pair_coefficients({ka: 1}, xb)
            if lhs != 0:
                failures.append((ka, kb, lhs))
    return InvarianceReport(kind, name, count, failures)


def inversion_sign(kind: str, a, b):
    """Ratio <inv a, inv b> / <a, b>; -1 for QR and +1 for BH."""
    if kind == "QR":
        ia, ib = inversion("piPrimeL", a), inversion("piPrimeR", b)
    else:
        ia, ib = inversion("rhoPrime", a), inversion("rhoPrime", b)
    before = pair_structural(kind, a, b)
    if before == 0:
        raise ZeroDivisionError("pairing vanishes on this pair")
    return pair_structural(kind, ia, ib) / before


def degenerate_directions(max_two_l=3):
    """Basis elements of BH pairing to zero against every basis element."""
    elems = list(_sweep_elements(BH_FAMILIES, max_two_l))
    out = []
    for k in elems:
        if all(pair_coefficients({k: 1}, {j: 1}) == 0 for j in elems):
            out.append(k)
    return out


# pseudounitary structures ---------------------------------------------------------

def _fact(x) -> int:
    x = Fraction(x)
    if x.denominator != 1 or x < 0:
        raise ValueError(f"factorial of {x}")
    return factorial(int(x))


def pseudo_norm(family: str, idx, convention="corrected") -> Fraction:
    """Diagonal value (b, b) for b = family(idx) on U+ or BH+.

    For phi2 the printed weight -2l(2l+1) is not u(2,2)-invariant; the
    corrected weight -2l(2l-1), the one used by the bilinear BH pairing,
    gives (b, b) = -2l times the factorial ratio.
    """
    from .tcoeff import TIndex
    i = TIndex(*idx)
    l, m, n = i.l, i.m, i.n
    h = Fraction(1, 2)
    if family == "f1":
        return (2 * l + 1) * Fraction(_fact(l - m) * _fact(l + m), _fact(l - n + h) * _fact(l + n + h))
    if family == "f2":
        return -2 * l * (2 * l + 1) * Fraction(_fact(l - m) * _fact(l + m), _fact(l - n - h) * _fact(l + n - h))
    if family == "f3":
        return -2 * l * Fraction(_fact(l - m - 1) * _fact(l + m - 1), _fact(l - n - h) * _fact(l + n - h))
    if family == "phi1":
        return 2 * l * Fraction(_fact(l - m) * _fact(l + m), _fact(l - n) * _fact(l + n))
    if family == "phi2":
        w = -2 * l * (2 * l + 1) / (2 * l - 1) if convention == "printed" else -2 * l
        return (w * Fraction(_fact(l - m - 1) * _fact(l + m - 1), _fact(l - n - 1) * _fact(l + n - 1)))
    raise ValueError(f"no pseudounitary norm for family {family!r}")


_PSEUDO = {
    "pseudoUplus": (("f1", "f2", "f3"), None),
    "pseudoUminus": (("f1", "f2", "f3"), "piPrimeL"),
    "pseudoBHplus": (("phi1", "phi2"), None),
    "pseudoBHminus": (("phi1", "phi2"), "rhoPrime"),
}


def _pseudo_coeffs(kind, F):
    fams, inv = _PSEUDO[kind]
    F = _as_sym(F)
    if inv is not None:
        F = inversion(inv, F)
    return expand_in_basis(F, fams)


def pseudo_form(kind: str, a, b, convention="corrected"):
    """Sesquilinear (a, b), exact. The minus spaces use the inversion transport."""
    ca, cb = _pseudo_coeffs(kind, a), _pseudo_coeffs(kind, b)
    acc = Fraction(0)
    for key, x in ca.items():
        y = cb.get(key)
        if y:
            acc = acc + x * _cconj(y) * pseudo_norm(*key, convention)
    return acc


_PSEUDO_WEIGHTS = {
    "f1": lambda tl: tl + 1, "f2": lambda tl: -tl * (tl + 1), "f3": lambda tl: -tl,
    "phi1": lambda tl: tl * (tl + 1), "phi2": lambda tl: -tl * (tl - 1),
}
_PRINTED_PHI2_WEIGHT = lambda tl: -tl * (tl + 1)


def pseudo_form_integral(kind: str, a, b, nodes=None, convention="corrected"):
    """Unit-sphere integral presentation, family by family."""
    ca, cb = _pseudo_coeffs(kind, a), _pseudo_coeffs(kind, b)
    total = 0j
    for fam in _PSEUDO[kind][0]:
        for tl in sorted({k[1][0] for k in ca if k[0] == fam}):
            pa = [(k, v) for k, v in ca.items() if k[0] == fam and k[1][0] == tl]
            pb = [(k, v) for k, v in cb.items() if k[0] == fam and k[1][0] == tl]
            if not pb:
                continue
            A = sum((basis(*k).sym.scale(v) for k, v in pa), SymFunc.zeros(basis(*pa[0][0]).sym.shape))
            B = sum((basis(*k).sym.scale(v) for k, v in pb), SymFunc.zeros(A.shape))
            X, w = s3_grid(ContourSpec("S3R", 1.0, nodes or 2 * tl + 8))
            va, vb = A.evaluate(X), B.evaluate(X)
            inner = np.einsum("kij,kij->k", va, vb.conj())
            wt = _PRINTED_PHI2_WEIGHT if (fam, convention) == ("phi2", "printed") else _PSEUDO_WEIGHTS[fam]
            total += wt(tl) * complex(np.dot(w, inner)) / (2 * np.pi ** 2)
    return total


_PSEUDO_SPACES = {
    "pseudoUplus": (("f1", "f2", "f3"), "piPrimeL"),
    "pseudoUminus": (("fT1", "fT2", "fT3"), "piPrimeL"),
    "pseudoBHplus": (("phi1", "phi2"), "rhoPrime"),
    "pseudoBHminus": (("phiT1", "phiT2"), "rhoPrime"),
}


def check_pseudo_invariance(kind: str, X: LieElem, max_two_l=3, name="X",
                            convention="corrected") -> InvarianceReport:
    """(act(X) a, b) + (a, act(X) b) = 0 for X in u(2,2) on basis pairs."""
    if not X.is_u22():
        raise ValueError("pseudounitary invariance only holds for u(2,2) elements")
    fams, action = _PSEUDO_SPACES[kind]
    elems = list(_sweep_elements(fams, max_two_l))
    coeffs = {k: _pseudo_coeffs(kind, basis(*k).sym) for k in elems}
    moved = {k: _pseudo_coeffs(kind, act(action, X, basis(*k).sym)) for k in elems}

    def form(ca, cb):
        acc = Fraction(0)
        for key, x in ca.items():
            y = cb.get(key)
            if y:
                acc = acc + x * _cconj(y) * pseudo_norm(*key, convention)
        return acc

    failures, count = [], 0
    for ka in elems:
        for kb in elems:
            count += 1
            s = form(moved[ka], coeffs[kb]) + form(coeffs[ka], moved[kb])
            if s != 0:
                failures.append((ka, kb, s))
    return InvarianceReport(kind, name, count, failures)
