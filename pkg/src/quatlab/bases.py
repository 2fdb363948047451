"""K-type basis families and subspace decompositions.

Families: phi1, phi2, phiT1, phiT2 (biharmonic, scalar); f1..f3 and fT1..fT3
(quasi left anti regular, columns); g1..g3 and gT1..gT3 (quasi right anti
regular, rows). A trailing ``T`` marks the tilde families built from
t(Z^{-1}).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .laurent import Laurent, N, Ninv, SymFunc, box, nabla, nabla_right
from .tcoeff import TIndex, half, t, t_inv

__all__ = [
    "FAMILIES", "BasisElement", "IndexOutOfRange", "NotBiharmonic", "NotInSpan",
    "basis", "family_indices", "family_degree", "families_in_degree",
    "elements_of_degree", "decompose_biharmonic", "harmonic_decomposition",
    "project", "space_contains", "expand_in_basis", "LinearSpan",
    "U_FAMILIES", "UPRIME_FAMILIES", "BH_FAMILIES", "is_qlar", "is_qrar",
    "dim_formula_U", "dim_formula_BH", "kernel_dimension_polynomial",
]


class IndexOutOfRange(ValueError):
    pass


class NotBiharmonic(ValueError):
    pass


class NotInSpan(ValueError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


def _hrange(lo, hi):
    """Half-integer range lo, lo+1, ..., hi (inclusive); empty if lo > hi."""
    out = []
    x = Fraction(lo)
    while x <= hi:
        out.append(x)
        x += 1
    return out


def _col(a, b):
    return SymFunc.col(a, b)


def _row(a, b):
    return SymFunc.row(a, b)


def _f1(l, m, n):
    return _col(t(l, n - half, m), -t(l, n + half, m))


def _f2(l, m, n):
    return _col((l - n + half) * t(l, n - half, m), (l + n + half) * t(l, n + half, m))


def _f3(l, m, n):
    return _col(N * t(l - 1, n - half, m), -(N * t(l - 1, n + half, m)))


def _g1(l, m, n):
    return _row((l + m + half) * t(l, n, m - half), -(l - m + half) * t(l, n, m + half))


def _g2(l, m, n):
    return _row(t(l, n, m - half), t(l, n, m + half))


def _g3(l, m, n):
    return _row(N * ((l + m - half) * t(l - 1, n, m - half)), N * (-(l - m - half) * t(l - 1, n, m + half)))


def _fT1(l, m, n):
    return _col(t_inv(l + half, m, n + half), -t_inv(l + half, m, n - half))


def _fT2(l, m, n):
    return _col(Ninv * ((l - n) * t_inv(l - half, m, n + half)), Ninv * ((l + n) * t_inv(l - half, m, n - half)))


def _fT3(l, m, n):
    return _col(Ninv * t_inv(l - half, m, n + half), -(Ninv * t_inv(l - half, m, n - half)))


def _gT1(l, m, n):
    return _row((l + m + 1) * t_inv(l + half, m + half, n), -(l - m + 1) * t_inv(l + half, m - half, n))


def _gT2(l, m, n):
    return _row(Ninv * t_inv(l - half, m + half, n), Ninv * t_inv(l - half, m - half, n))


def _gT3(l, m, n):
    return _row(Ninv * ((l + m) * t_inv(l - half, m + half, n)), Ninv * (-(l - m) * t_inv(l - half, m - half, n)))


def _phi1(l, m, n):
    return SymFunc.scalar(t(l, n, m))


def _phi2(l, m, n):
    return SymFunc.scalar(N * t(l - 1, n, m))


def _phiT1(l, m, n):
    return SymFunc.scalar(t_inv(l, m, n))


def _phiT2(l, m, n):
    return SymFunc.scalar(Ninv * t_inv(l - 1, m, n))


@dataclass(frozen=True)
class FamilySpec:
    name: str
    shape: str
    build: Callable
    m_range: Callable  # l -> (lo, hi)
    n_range: Callable
    min_two_l: int
    degree: Callable  # l -> degree


def _r(a, b):
    return lambda l: (a(l), b(l))


_full = _r(lambda l: -l, lambda l: l)
_wide = _r(lambda l: -l - half, lambda l: l + half)
_narrow = _r(lambda l: -l + half, lambda l: l - half)
_inner = _r(lambda l: -l + 1, lambda l: l - 1)
_pos = lambda l: int(2 * l)
_neg = lambda l: -int(2 * l) - 1

FAMILIES = {
    "f1": FamilySpec("f1", "col2", _f1, _full, _wide, 0, _pos),
    "f2": FamilySpec("f2", "col2", _f2, _full, _narrow, 1, _pos),
    "f3": FamilySpec("f3", "col2", _f3, _inner, _narrow, 2, _pos),
    "g1": FamilySpec("g1", "row2", _g1, _wide, _full, 0, _pos),
    "g2": FamilySpec("g2", "row2", _g2, _narrow, _full, 1, _pos),
    "g3": FamilySpec("g3", "row2", _g3, _narrow, _inner, 2, _pos),
    "fT1": FamilySpec("fT1", "col2", _fT1, _wide, _full, 0, _neg),
    "fT2": FamilySpec("fT2", "col2", _fT2, _narrow, _full, 1, _neg),
    # printed with step 1/2 in m; the step-1 range matches the K-type dimension
    "fT3": FamilySpec("fT3", "col2", _fT3, _narrow, _inner, 2, _neg),
    "gT1": FamilySpec("gT1", "row2", _gT1, _full, _wide, 0, _neg),
    "gT2": FamilySpec("gT2", "row2", _gT2, _full, _narrow, 1, _neg),
    "gT3": FamilySpec("gT3", "row2", _gT3, _inner, _narrow, 2, _neg),
    "phi1": FamilySpec("phi1", "scalar", _phi1, _full, _full, 0, _pos),
    "phi2": FamilySpec("phi2", "scalar", _phi2, _inner, _inner, 2, _pos),
    "phiT1": FamilySpec("phiT1", "scalar", _phiT1, _full, _full, 0, lambda l: -int(2 * l)),
    "phiT2": FamilySpec("phiT2", "scalar", _phiT2, _inner, _inner, 2, lambda l: -int(2 * l)),
}

U_FAMILIES = ("f1", "f2", "f3", "fT1", "fT2", "fT3")
UPRIME_FAMILIES = ("g1", "g2", "g3", "gT1", "gT2", "gT3")
BH_FAMILIES = ("phi1", "phi2", "phiT1", "phiT2")
# family -> partner in the invariant pairing, and the pairing constant at l
PARTNER = {"f1": "gT1", "f2": "gT2", "f3": "gT3", "fT1": "g1", "fT2": "g2", "fT3": "g3",
           "phi1": "phiT1", "phi2": "phiT2"}
PARTNER.update({v: k for k, v in list(PARTNER.items())})


def family_indices(family: str, two_l: int) -> list[TIndex]:
    spec = FAMILIES[family]
    if two_l < spec.min_two_l:
        return []
    l = Fraction(two_l, 2)
    mlo, mhi = spec.m_range(l)
    nlo, nhi = spec.n_range(l)
    return [TIndex(two_l, int(2 * m), int(2 * n)) for m in _hrange(mlo, mhi) for n in _hrange(nlo, nhi)]


def family_degree(family: str, two_l: int) -> int:
    return FAMILIES[family].degree(Fraction(two_l, 2))


def _two_l_for_degree(family, d):
    spec = FAMILIES[family]
    for two_l in range(0, 2 * abs(d) + 3):
        if spec.degree(Fraction(two_l, 2)) == d:
            return two_l
    return None


@dataclass(frozen=True)
class BasisElement:
    family: str
    idx: TIndex
    shape: str
    sym: SymFunc = field(compare=False, repr=False)

    @property
    def degree(self):
        return family_degree(self.family, self.idx.twoL)


@lru_cache(maxsize=None)
def _basis_cached(family, idx):
    spec = FAMILIES[family]
    return spec.build(idx.l, idx.m, idx.n)


def basis(family: str, idx) -> BasisElement:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}")
    idx = TIndex(*idx)
    if idx not in family_indices(family, idx.twoL):
        raise IndexOutOfRange(f"{family} has no index {idx}")
    return BasisElement(family, idx, FAMILIES[family].shape, _basis_cached(family, idx))


def elements_of_degree(families: Iterable[str], d: int) -> list[BasisElement]:
    out = []
    for fam in families:
        two_l = _two_l_for_degree(fam, d)
        if two_l is None:
            continue
        out.extend(basis(fam, i) for i in family_indices(fam, two_l))
    return out


def families_in_degree(families, d):
    return [f for f in families if _two_l_for_degree(f, d) is not None]


def dim_formula_U(d):
    return 3 * d * d + 3 * d + 2


def dim_formula_BH(d):
    return 1 if d == 0 else 2 * d * d + 2


def is_qlar(f: SymFunc) -> bool:
    return nabla(box(f)).is_zero()


def is_qrar(g: SymFunc) -> bool:
    return nabla_right(box(g)).is_zero()


# harmonic decomposition --------------------------------------------------------

@lru_cache(maxsize=None)
def _hdecomp_monomial(key):
    """z^alpha = sum_j N^j h_j with h_j harmonic; returns ((j, h_j), ...)."""
    p = Laurent({key: 1})
    D = sum(key[:4])
    out = []
    rest = p
    for j in range(D // 2, -1, -1):
        if rest.is_zero():
            break
        q = rest
        for _ in range(j):
            q = box(q)
        if q.is_zero():
            continue
        e = D - 2 * j
        c = 1
        for i in range(1, j + 1):
            c *= 4 * i * (e + i + 1)
        h = q.scale(Fraction(1, c))
        out.append((j, h))
        rest = rest - Laurent.monomial(k=j) * h
    if not rest.is_zero():
        raise ArithmeticError("harmonic decomposition failed")
    return tuple(out)


def harmonic_decomposition(f: Laurent) -> dict:
    """Split a scalar into pieces N^k h with h harmonic homogeneous.

    Returns {(k, two_l): Laurent piece N^k h}.
    """
    out: dict = {}
    for key, v in f.terms.items():
        zkey = key[:4] + (0,)
        k0 = key[4]
        for j, h in _hdecomp_monomial(zkey):
            two_l = sum(zkey[:4]) - 2 * j
            piece = (Laurent.monomial(k=k0 + j) * h).scale(v)
            slot = (k0 + j, two_l)
            out[slot] = out[slot] + piece if slot in out else piece
    return {s: p for s, p in out.items() if not p.is_zero()}


_PREDICATES = {
    "Zh+": lambda k, tl: k >= 0,
    "Zh-": lambda k, tl: k <= -(tl + 2),
    "Zh0": lambda k, tl: -(tl + 1) <= k <= -1,
    "H+": lambda k, tl: k == 0,
    "H-": lambda k, tl: k == -tl - 1,
    "BH+": lambda k, tl: 0 <= k <= 1,
    "BH-": lambda k, tl: -1 <= tl + k <= 0,
    "W": lambda k, tl: True,
}


def space_contains(space: str, k: int, two_l: int) -> bool:
    """Membership of the monomial N^k t^l in a scalar space."""
    return _PREDICATES[space](k, two_l)


def _project_laurent(space, f):
    acc = Laurent()
    for (k, tl), piece in harmonic_decomposition(f).items():
        if space_contains(space, k, tl):
            acc = acc + piece
    return acc


def project(space: str, F):
    """Keep exactly the N^k t^l components allowed by ``space``.

    Matrix valued inputs are projected entrywise (H_C tensor the space).
    """
    if space not in _PREDICATES:
        raise KeyError(f"unknown space {space!r}")
    if isinstance(F, Laurent):
        return _project_laurent(space, F)
    return F.map(lambda e: _project_laurent(space, e))


def decompose_biharmonic(f, d=None):
    """Write f = h0 + N h1 with h0, h1 harmonic (f homogeneous of degree d)."""
    single = isinstance(f, Laurent)
    F = SymFunc.scalar(f) if single else f
    degs = F.degrees()
    if len(degs) > 1:
        raise NotBiharmonic("input is not homogeneous")
    if d is None:
        d = degs.pop() if degs else 0
    if not box(box(F)).is_zero():
        raise NotBiharmonic("box^2 f != 0")
    if d == 0:
        h1 = SymFunc.zeros(F.shape)
    else:
        h1 = box(F).scale(Fraction(1, 4 * d))
    h0 = F - h1 * N
    if not box(h0).is_zero() or not box(h1).is_zero():
        raise NotBiharmonic("no decomposition into harmonic pieces")
    if single:
        return h0.entries[0], h1.entries[0]
    return h0, h1


# exact linear algebra -----------------------------------------------------------

def _flatten(F: SymFunc) -> dict:
    vec = {}
    for i, e in enumerate(F.entries):
        for key, v in e.terms.items():
            vec[(i,) + key] = v
    return vec


class LinearSpan:
    """Incremental exact row reduction of labelled SymFunc vectors."""

    def __init__(self, items=()):
        self.pivots: list = []  # (pivot key, reduced vector, combination)
        self.dependent: list = []
        for label, F in items:
            self.add(label, F)

    def _reduce(self, vec, comb):
        for p, r, rc in self.pivots:
            c = vec.get(p)
            if c:
                for k, v in r.items():
                    w = vec.get(k, 0) - c * v
                    if w:
                        vec[k] = w
                    else:
                        vec.pop(k, None)
                for k, v in rc.items():
                    w = comb.get(k, 0) - c * v
                    if w:
                        comb[k] = w
                    else:
                        comb.pop(k, None)
        return vec, comb

    def add(self, label, F):
        vec, comb = self._reduce(_flatten(F), {label: 1})
        if not vec:
            self.dependent.append(label)
            return False
        p = min(vec)
        c = vec[p]
        inv = 1 / c if not isinstance(c, int) else Fraction(1, c)
        vec = {k: v * inv for k, v in vec.items()}
        comb = {k: v * inv for k, v in comb.items()}
        self.pivots.append((p, vec, comb))
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def express(self, F) -> dict:
        """Coefficients c with F = sum c[label] * item[label]."""
        target = _flatten(F)
        vec = dict(target)
        coeffs: dict = {}
        for p, r, rc in self.pivots:
            c = vec.get(p)
            if c:
                for k, v in r.items():
                    w = vec.get(k, 0) - c * v
                    if w:
                        vec[k] = w
                    else:
                        vec.pop(k, None)
                for k, v in rc.items():
                    w = coeffs.get(k, 0) + c * v
                    if w:
                        coeffs[k] = w
                    else:
                        coeffs.pop(k, None)
        if vec:
            raise NotInSpan("target is not in the span", residual=vec)
        return coeffs


_span_cache: dict = {}


def _span_for(families: tuple, d: int) -> LinearSpan:
    key = (families, d)
    sp = _span_cache.get(key)
    if sp is None:
        sp = LinearSpan(((e.family, e.idx), e.sym) for e in elements_of_degree(families, d))
        _span_cache[key] = sp
    return sp


def expand_in_basis(F: SymFunc, families=U_FAMILIES) -> dict:
    """Exact coefficients {(family, TIndex): c} of F in the given families."""
    families = tuple(families)
    if isinstance(F, Laurent):
        F = SymFunc.scalar(F)
    out: dict = {}
    for d in sorted(F.degrees()):
        piece = F.homogeneous_part(d)
        sp = _span_for(families, d)
        try:
            coeffs = sp.express(piece)
        except NotInSpan as exc:
            raise NotInSpan(f"degree {d} component not in span of {families}", exc.residual) from None
        out.update(coeffs)
    return out


def reassemble(coeffs: dict) -> SymFunc:
    acc = None
    for (fam, idx), c in coeffs.items():
        term = basis(fam, idx).sym.scale(c)
        acc = term if acc is None else acc + term
    return acc


# independent dimension oracle ---------------------------------------------------

def _poly_monomials(d):
    for a in range(d + 1):
        for b in range(d + 1 - a):
            for c in range(d + 1 - a - b):
                yield (a, b, c, d - a - b - c, 0)


def kernel_dimension_polynomial(op: Callable, shape: tuple, d: int) -> int:
    """dim ker(op) on homogeneous polynomial functions of degree d and shape.

    Uses raw (not necessarily canonical) monomials as a spanning set, so the
    source dimension is the rank of that set.
    """
    src = LinearSpan()
    img = LinearSpan()
    nent = shape[0] * shape[1]
    for mono in _poly_monomials(d):
        for slot in range(nent):
            entries = [Laurent()] * nent
            entries[slot] = Laurent({mono: 1})
            F = SymFunc(shape, entries)
            if src.add((slot, mono), F):
                img.add((slot, mono), op(F))
    return src.rank - img.rank
