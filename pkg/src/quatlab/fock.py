"""Clifford algebra on dual basis pairs and its fermionic Fock module.

Every mode i carries one creation and one annihilation operator. For i in
I- these are beta_i and gamma_i, for i in I+ they are gamma_i and beta_i,
so {beta_i, gamma_j} = delta_ij with all other anticommutators zero. A Fock
monomial is a bitmask over modes; the vacuum is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hcq import as_array
from .kernels import SERIES, DomainViolation, TableCache, domain_radius, family_values, family_grid
from .regular import dual_values, regular_level, regular_values

import warnings


class UnknownIndex(KeyError):
    pass


# universes ----------------------------------------------------------------------

@dataclass
class IndexUniverse:
    """Modes with polarity and vectorised evaluators of the field coefficients.

    beta(Z) = sum_i beta_i b_i(Z) and gamma(W) = sum_i gamma_i c_i(W), with
    <c_i, b_j> = delta_ij under the universe's pairing.
    """

    name: str
    labels: list
    plus: np.ndarray                 # bool per mode
    b_eval: object = field(repr=False)   # Z -> (modes, *shape)
    c_eval: object = field(repr=False)   # W -> (modes, *shape)
    domain: str = ""
    rescaling: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self._pos[label]
        except AttributeError:
            self._pos = {lab: k for k, lab in enumerate(self.labels)}
            return self.index(label)
        except KeyError:
            raise UnknownIndex(label) from None


def universe_2d(cutoff: int) -> IndexUniverse:
    """Modes i in [-cutoff-1, cutoff] with b_i = z^{-i-1}, c_i = w^i."""
    idx = np.arange(-cutoff - 1, cutoff + 1)
    return IndexUniverse(
        "2D", [int(i) for i in idx], idx >= 0,
        lambda z: complex(z) ** (-idx - 1.0), lambda w: complex(w) ** idx.astype(float),
        domain="|z| > |w|")


def _qr_blocks(cutoff):
    # (polarity, b family, c family, level) in mode order
    blocks = []
    for tl in range(cutoff + 1):
        for (bf, cf, _), (af, gf, _) in zip(SERIES["QRkernel2"], SERIES["QRkernel1"]):
            blocks.append((True, bf, cf, tl))
            blocks.append((False, af, gf, tl))
    return [b for b in blocks if family_grid(b[1], b[3])[0].size]


def _qr_const(family, tl):
    from .pairing import pairing_constant
    return pairing_constant(family, (tl,))


def universe_qr(cutoff: int, validate_max: int = 2) -> IndexUniverse:
    """Quasi regular modes: I+ = (f~/c, g), I- = (f/c, g~), c the pairing constants.

    Duality is checked with the exact QR pairing on all modes with
    2l <= validate_max.
    """
    blocks = _qr_blocks(cutoff)
    labels, plus, consts = [], [], []
    for pol, bf, cf, tl in blocks:
        _, m, n = family_grid(bf, tl)
        c = _qr_const(bf, tl)
        for mm, nn in zip(m, n):
            labels.append((bf, tl, int(round(2 * mm)), int(round(2 * nn))))
            plus.append(pol)
            consts.append(c)
    scale = np.array([1 / float(c) for c in consts])

    def b_eval(Z):
        cz = TableCache(Z)
        return np.concatenate([family_values(bf, tl, cz) for _, bf, _, tl in blocks]) * scale[:, None]

    def c_eval(W):
        cw = TableCache(W)
        return np.concatenate([family_values(cf, tl, cw) for _, _, cf, tl in blocks])

    u = IndexUniverse("QR", labels, np.array(plus), b_eval, c_eval, domain="Z^-1 W in D+",
                      rescaling={(bf, tl): _qr_const(bf, tl) for _, bf, _, tl in blocks})
    if validate_max >= 0:
        validate_qr_duality(u, blocks, validate_max)
    return u


def validate_qr_duality(u, blocks, max_two_l):
    """<c_i, b_j> = delta_ij exactly on the low levels; raises on failure."""
    from .bases import basis
    from .pairing import pair_structural
    from .tcoeff import TIndex

    elems = []
    for pol, bf, cf, tl in blocks:
        if tl > max_two_l:
            continue
        _, m, n = family_grid(bf, tl)
        c = _qr_const(bf, tl)
        for mm, nn in zip(m, n):
            idx = TIndex(tl, int(round(2 * mm)), int(round(2 * nn)))
            elems.append((basis(bf, idx).sym.scale(1 / c), basis(cf, idx).sym))
    for i, (_, g) in enumerate(elems):
        for j, (f, _) in enumerate(elems):
            v = pair_structural("QR", f, g)
            if v != (1 if i == j else 0):
                raise ValueError(f"QR duality fails at modes {i}, {j}: {v}")
    return len(elems)


def universe_regular(cutoff: int) -> IndexUniverse:
    """Left regular modes at infinity with their dual rows; all modes in I+."""
    levels = [regular_level(tl) for tl in range(cutoff + 1)]
    labels = [(lev.two_l,) + lab for lev in levels for lab in lev.labels]
    return IndexUniverse(
        "CF", labels, np.ones(len(labels), bool),
        lambda Z: np.concatenate([regular_values(lev, Z) for lev in levels]),
        lambda W: np.concatenate([dual_values(lev, W) for lev in levels]),
        domain="Z^-1 W in D+")


def make_universe(name: str, cutoff: int) -> IndexUniverse:
    return {"2D": universe_2d, "QR": universe_qr, "CF": universe_regular}[name](cutoff)


# Fock states ------------------------------------------------------------------------

def _sign(mask: int, i: int) -> int:
    return -1 if bin(mask & ((1 << i) - 1)).count("1") & 1 else 1


class FockState:
    """Finite linear combination of monomials; amplitudes numbers or arrays."""

    __slots__ = ("amps",)

    def __init__(self, amps=None):
        self.amps = {k: v for k, v in (amps or {}).items() if np.any(v != 0)}

    @classmethod
    def vacuum(cls):
        return cls({0: 1})

    @classmethod
    def random(cls, n_modes, rng, n_terms=6, max_occ=4):
        amps = {}
        for _ in range(n_terms):
            k = int(rng.integers(0, max_occ + 1))
            bits = rng.choice(n_modes, size=min(k, n_modes), replace=False)
            mask = sum(1 << int(b) for b in bits)
            amps[mask] = amps.get(mask, 0) + complex(rng.normal(), rng.normal())
        return cls(amps)

    def __add__(self, other):
        out = dict(self.amps)
        for k, v in other.amps.items():
            out[k] = out.get(k, 0) + v
        return FockState(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return FockState({k: c * v for k, v in self.amps.items()})

    def inner(self, other):
        """Sum of conj(self) * other over monomials."""
        return sum(np.conj(self.amps[k]) * v for k, v in other.amps.items() if k in self.amps)

    def vacuum_amp(self):
        return self.amps.get(0, 0)

    def close(self, other, tol=1e-12):
        d = self - other
        return all(np.max(np.abs(v)) <= tol for v in d.amps.values())


# Clifford words --------------------------------------------------------------------

def _is_creation(gen, plus):
    return (gen == "b") != bool(plus)


@dataclass(frozen=True)
class CliffOp:
    """Sum of words in beta ("b", i) and gamma ("g", i); a word acts right to left."""

    terms: tuple = ()   # ((word, coef), ...)

    @classmethod
    def word(cls, *letters, coef=1):
        return cls(((tuple(letters), coef),))

    @classmethod
    def beta(cls, i):
        return cls.word(("b", i))

    @classmethod
    def gamma(cls, i):
        return cls.word(("g", i))

    def __add__(self, other):
        return CliffOp(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, CliffOp):
            return CliffOp(tuple((w1 + w2, c1 * c2) for w1, c1 in self.terms for w2, c2 in other.terms))
        return CliffOp(tuple((w, c * other) for w, c in self.terms))

    __rmul__ = lambda self, c: self * c

    def simplified(self):
        acc = {}
        for w, c in self.terms:
            acc[w] = acc.get(w, 0) + c
        return CliffOp(tuple(sorted(((w, c) for w, c in acc.items() if c != 0), key=lambda t: t[0])))


def apply_letter(gen, i, state: FockState, u: IndexUniverse) -> FockState:
    if not 0 <= i < len(u):
        raise UnknownIndex(i)
    out = {}
    bit = 1 << i
    create = _is_creation(gen, u.plus[i])
    for mask, v in state.amps.items():
        if create == bool(mask & bit):
            continue
        out[mask ^ bit] = out.get(mask ^ bit, 0) + _sign(mask, i) * v
    return FockState(out)


def apply(op: CliffOp, state: FockState, u: IndexUniverse) -> FockState:
    total = FockState()
    for word, c in op.terms:
        s = state
        for gen, i in reversed(word):
            s = apply_letter(gen, i, s, u)
            if not s.amps:
                break
        total = total + s.scale(c)
    return total


def normal_order(op: CliffOp, u: IndexUniverse) -> CliffOp:
    """Creators to the left, annihilators to the right, sign per transposition.

    No contraction terms are produced, so :beta_i gamma_i: = -gamma_i beta_i
    for i in I+. Relative order inside each group is kept, which makes the
    map idempotent.
    """
    out = []
    for word, c in op.terms:
        flags = [_is_creation(g, u.plus[i]) for g, i in word]
        cre = [k for k, f in enumerate(flags) if f]
        ann = [k for k, f in enumerate(flags) if not f]
        perm = cre + ann
        inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
        letters = tuple(word[k] for k in perm)
        if len(set(word[k] for k in cre)) < len(cre) or len(set(word[k] for k in ann)) < len(ann):
            continue
        out.append((letters, -c if inv & 1 else c))
    return CliffOp(tuple(out))


def reduce(op: CliffOp, u: IndexUniverse) -> CliffOp:
    """Normal form modulo the anticommutation relations.

    Creators sorted ascending, then annihilators sorted ascending; moving an
    annihilator past its own creator adds the contraction term.
    """
    acc = {}
    todo = list(op.terms)
    while todo:
        word, c = todo.pop()
        keys = [(0 if _is_creation(g, u.plus[i]) else 1, i) for g, i in word]
        for k in range(len(word) - 1):
            if keys[k] > keys[k + 1]:
                a, b = word[k], word[k + 1]
                swapped = word[:k] + (b, a) + word[k + 2:]
                todo.append((swapped, -c))
                if a[1] == b[1] and a[0] != b[0]:
                    todo.append((word[:k] + word[k + 2:], c))
                break
            if keys[k] == keys[k + 1]:
                c = 0
                break
        else:
            acc[word] = acc.get(word, 0) + c
            continue
    return CliffOp(tuple(sorted(((w, c) for w, c in acc.items() if c != 0), key=lambda t: t[0])))


def anticommutator(x: CliffOp, y: CliffOp) -> CliffOp:
    return x * y + y * x


# fields ----------------------------------------------------------------------------

def _times(coef, amp):
    coef, amp = np.asarray(coef), np.asarray(amp)
    if coef.ndim and amp.ndim:
        return coef.reshape(-1, 1) @ amp.reshape(1, -1) if coef.size == 2 and amp.size == 2 else coef * amp
    return coef * amp


def apply_field(gen, coeffs, state: FockState, u: IndexUniverse, vacuum_only=False) -> FockState:
    """sum_i coeffs[i] x_i applied to the state, x = beta or gamma.

    With vacuum_only the creation part is skipped and only the vacuum
    component is kept, which is all a vacuum expectation needs.
    """
    out = {}
    n = len(u)
    creators = np.flatnonzero(u.plus != (gen == "b"))
    for mask, v in state.amps.items():
        # annihilation part: only occupied modes
        m = mask
        while m:
            low = m & -m
            m ^= low
            i = low.bit_length() - 1
            if not _is_creation(gen, u.plus[i]):
                tgt = mask ^ low
                if not vacuum_only or tgt == 0:
                    out[tgt] = out.get(tgt, 0) + _sign(mask, i) * _times(coeffs[i], v)
        if vacuum_only:
            continue
        for i in creators:
            i = int(i)
            if not mask & (1 << i) and i < n:
                tgt = mask | (1 << i)
                out[tgt] = out.get(tgt, 0) + _sign(mask, i) * _times(coeffs[i], v)
    return FockState(out)


def _check_domain(u, Z, W):
    if u.name == "2D":
        if abs(W) >= abs(Z):
            warnings.warn("|w| >= |z|: divergence expected", DomainViolation, stacklevel=3)
    elif domain_radius("QRkernel2", Z, W)[0] >= 1:
        warnings.warn("Z^-1 W outside D+: divergence expected", DomainViolation, stacklevel=3)


def field_product_defect(u: IndexUniverse, Z, W):
    """<vac, beta(Z) gamma(W) vac> from the truncated fields."""
    _check_domain(u, Z, W)
    s = apply_field("g", u.c_eval(W), FockState.vacuum(), u)
    return apply_field("b", u.b_eval(Z), s, u, vacuum_only=True).vacuum_amp()


def defect_on_state(u: IndexUniverse, Z, W, state: FockState):
    """<s, beta(Z)gamma(W) s> - <s, :beta(Z)gamma(W): s>.

    Normal ordering changes only the diagonal I+ products,
    :beta_i gamma_i: = -gamma_i beta_i, so the normal ordered field product
    is beta(Z)gamma(W) with those pairs replaced.
    """
    b, c = u.b_eval(Z), u.c_eval(W)
    full = apply_field("b", b, apply_field("g", c, state, u), u)
    ordered = full
    for i in np.flatnonzero(u.plus):
        i = int(i)
        one = apply_letter("b", i, apply_letter("g", i, state, u), u)
        swap = apply_letter("g", i, apply_letter("b", i, state, u), u)
        coef = _times(b[i], c[i])
        ordered = ordered - FockState({k: _times(coef, v) for k, v in one.amps.items()})
        ordered = ordered - FockState({k: _times(coef, v) for k, v in swap.amps.items()})
    return state.inner(full) - state.inner(ordered)


# 2D correlations --------------------------------------------------------------------

def _laurent_modes(F):
    """{k: matrix} for a matrix Laurent polynomial given as {power: matrix}."""
    return {int(k): np.atleast_2d(np.asarray(v, dtype=complex)) for k, v in F.items()}


def pi_operator_terms(F, rank, cutoff):
    """pi(F) = sum_{a,b,k,j} F_ab,k :beta^a_{k+j} gamma^b_j: as (a, b, i, j, coef).

    beta^a(z) gamma^b(z) F_ab(z) integrated against dz/(2 pi i) pairs the
    modes beta_p z^{-p-1}, gamma_j z^j, z^k with p = k + j.
    """
    out = []
    for k, M in _laurent_modes(F).items():
        for a in range(rank):
            for b in range(rank):
                if M[a, b] == 0:
                    continue
                for j in range(-cutoff - 1, cutoff + 1):
                    p = k + j
                    if -cutoff - 1 <= p <= cutoff:
                        out.append((a, b, p, j, M[a, b]))
    return out


def _matrix_universe(rank, cutoff):
    idx = [(a, i) for a in range(rank) for i in range(-cutoff - 1, cutoff + 1)]
    plus = np.array([i >= 0 for _, i in idx])
    return IndexUniverse("2Dx", idx, plus, None, None, domain="|z| > |w|")


def _letter(mask, i, create):
    bit = 1 << i
    if create == bool(mask & bit):
        return None, 0
    return mask ^ bit, _sign(mask, i)


def _apply_bilinears(terms, amps, plus, max_occ=None):
    """sum c :beta_ib gamma_ig: on a state given as {mask: amp}.

    States with more than max_occ occupied modes are dropped.
    """
    out = {}
    for ib, ig, c in terms:
        cb, cg = (not plus[ib]), bool(plus[ig])
        if ib == ig and plus[ib]:
            # :beta_i gamma_i: = -gamma_i beta_i
            first, second, sgn = (ib, cb), (ig, cg), -1
        else:
            first, second, sgn = (ig, cg), (ib, cb), 1
        for mask, v in amps.items():
            m1, s1 = _letter(mask, *first)
            if m1 is None:
                continue
            m2, s2 = _letter(m1, *second)
            if m2 is None:
                continue
            out[m2] = out.get(m2, 0) + sgn * s1 * s2 * c * v
    return {k: v for k, v in out.items()
            if v != 0 and (max_occ is None or bin(k).count("1") <= max_occ)}


def correlation2d_fock(F, G, H, rank=1, cutoff=12):
    """(1, pi(F) pi(G) pi(H) 1) in the truncated rank-component Fock space."""
    u = _matrix_universe(rank, cutoff)
    pos = {lab: k for k, lab in enumerate(u.labels)}
    amps = {0: 1}
    for left, X in zip((2, 1, 0), (H, G, F)):
        if not X:
            return 0j
        terms = [(pos[a, p], pos[b, j], c) for a, b, p, j, c in pi_operator_terms(X, rank, cutoff)]
        # each bilinear removes at most two excitations, so the rest cannot reach the vacuum
        amps = _apply_bilinears(terms, amps, u.plus, max_occ=2 * left)
    return complex(amps.get(0, 0))


def correlation2d_contour(F, G, H, radii=(1.6, 1.2, 0.8), nodes=128, convention="wick"):
    """Triple contour integral with dz/(2 pi i) on each circle, R1 > R2 > R3.

    Full contraction of three normal ordered bilinears gives two fermion
    loops, F->G->H->F and F->H->G->F, each with a minus sign:

        -oint tr F(z1)G(z2)H(z3) / ((z1-z2)(z2-z3)(z3-z1))
        -oint tr F(z1)H(z3)G(z2) / ((z1-z3)(z3-z2)(z2-z1))

    convention="printed" keeps only the first loop, without the sign.
    """
    if not F or not G or not H:
        return 0j
    t = 2 * np.pi * np.arange(nodes) / nodes
    e = np.exp(1j * t)

    def ev(X, z):
        return sum(M[None] * (z ** k)[:, None, None] for k, M in _laurent_modes(X).items())

    z1, z2, z3 = (r * e for r in radii)
    A, B, C = ev(F, z1), ev(G, z2), ev(H, z3)
    # dz / (2 pi i) on a circle under the trapezoid rule is z / nodes
    w = [z / nodes for z in (z1, z2, z3)]

    def inv_diff(x, y):
        return 1 / (x[:, None] - y[None, :])

    # absorb weights, then contract one circle at a time
    A, B, C = A * w[0][:, None, None], B * w[1][:, None, None], C * w[2][:, None, None]
    d12, d23, d31 = inv_diff(z1, z2), inv_diff(z2, z3), inv_diff(z3, z1)
    # loop1: sum_ijk tr(A_i B_j C_k) d12[i,j] d23[j,k] d31[k,i]
    BC = np.einsum("jbc,kcd,jk->jkbd", B, C, d23, optimize=True)
    loop1 = np.einsum("iab,jkba,ij,ki->", A, BC, d12, d31, optimize=True)
    if convention == "printed":
        return complex(loop1)
    CB = np.einsum("kbc,jcd,jk->jkbd", C, B, d23, optimize=True)
    loop2 = -np.einsum("iab,jkba,ij,ki->", A, CB, d12, d31, optimize=True)
    return complex(-(loop1 + loop2))
