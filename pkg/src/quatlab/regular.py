"""Left regular functions at infinity and their duals.

The Cauchy-Fueter kernel is -1/2 nabla_Z of 1/N(Z - W), and for W small
against Z

    1/N(Z - W) = N(Z)^-1 sum_{l,m,n} t^l_{mn}(Z^-1) t^l_{nm}(W).

Differentiating termwise gives columns of nabla(N^-1 t^l_{mn}(Z^-1)), all
left regular of degree -2l-3. They are linearly dependent, so each level is
reduced to an independent set F_a and the W-side factors are recombined
into dual rows G_a with  k(Z, W) = sum_a F_a(Z) G_a(W).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bases import LinearSpan
from .hcq import as_array
from .laurent import Laurent, SymFunc, nabla
from .tcoeff import t_inv, t_table


@dataclass(frozen=True)
class RegularLevel:
    two_l: int
    funcs: tuple          # independent left regular columns F_a
    labels: tuple         # pivot labels ((m, n), j)
    duals: np.ndarray     # (a, k, j): G_a(W)_j = sum_k duals[a, k, j] t_k(W)


def _cnum(c):
    if isinstance(c, (int, Fraction)):
        return complex(float(c))
    return complex(c)


@lru_cache(maxsize=None)
def regular_level(two_l: int) -> RegularLevel:
    l = Fraction(two_l, 2)
    inv_n = Laurent.monomial(k=-1)
    half = [Fraction(k, 2) for k in range(-two_l, two_l + 1, 2)]
    span = LinearSpan()
    cols = {}
    for m in half:
        for n in half:
            G = nabla(inv_n * t_inv(l, m, n))
            for j in range(2):
                cols[(m, n), j] = SymFunc.col(G[0, j], G[1, j])
    for lab, F in cols.items():
        span.add(lab, F)
    # pick independent originals and express every column in them
    chosen = [lab for lab in cols if lab not in span.dependent]
    basis = LinearSpan((lab, cols[lab]) for lab in chosen)
    size = two_l + 1
    duals = np.zeros((len(chosen), size * size, 2), dtype=complex)
    where = {lab: a for a, lab in enumerate(chosen)}
    for ((m, n), j), F in cols.items():
        # k(Z, W) gets -1/2 col_j(nabla H_mn)(Z) * t_nm(W) e_j^T
        k = int(n + l) * size + int(m + l)   # t_table index [n + l, m + l]
        for lab, c in basis.express(F).items():
            duals[where[lab], k, j] += -0.5 * _cnum(c)
    return RegularLevel(two_l, tuple(cols[lab] for lab in chosen), tuple(chosen), duals)


def regular_values(level: RegularLevel, Z) -> np.ndarray:
    """F_a(Z) for every a: array (a, 2)."""
    Z = as_array(Z)
    return np.array([np.asarray(F.evaluate(Z)).ravel() for F in level.funcs], dtype=complex)


def dual_values(level: RegularLevel, W) -> np.ndarray:
    """G_a(W) for every a: array (a, 2)."""
    t = t_table(level.two_l, as_array(W)).ravel()
    return np.einsum("akj,k->aj", level.duals, t)


def cauchy_fueter_series(Z, W, cutoff: int = 8):
    """Partial sum of sum_a F_a(Z) G_a(W) over 2l <= cutoff."""
    from .kernels import DomainViolation, TruncationReport, _tail_ratio, domain_radius, kernel_closed
    import warnings

    norm, rho = domain_radius("CauchyFueter", Z, W)
    if norm >= 1:
        warnings.warn(f"CauchyFueter: Z^-1W outside D+ (norm {norm:.3g})", DomainViolation, stacklevel=3)
    exact = kernel_closed("CauchyFueter", Z, W)
    rep = TruncationReport("CauchyFueter", cutoff, spectral_radius=rho)
    total = np.zeros((2, 2), dtype=complex)
    for tl in range(cutoff + 1):
        lev = regular_level(tl)
        term = np.einsum("ai,aj->ij", regular_values(lev, Z), dual_values(lev, W))
        total = total + term
        rep.term_norms.append(float(np.max(np.abs(term))))
        rep.level_errors.append(float(np.max(np.abs(total - exact))))
    rep.ratio = _tail_ratio(rep.term_norms)
    return total, rep
