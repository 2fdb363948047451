"""Verification checks grouped into suites.

Every check returns a list of Entry records. The CLI runs them by suite and
the acceptance tests call them directly.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import bases, pairing, quadrature as quad
from .actions import GENERATORS, elementary
from .hcq import from_ecoords_num
from .laurent import Laurent, SymFunc, Z as ZSYM


@dataclass
class Config:
    suite: str = "all"
    max_2l: int | None = None
    tol: float | None = None
    quad_nodes: int = 24
    seed: int = 0
    report: str = "json"


@dataclass
class Entry:
    id: str
    anchor: str
    status: str
    measured: object = None
    expected: object = None
    error: float | None = None
    detail: dict = field(default_factory=dict)
    repro: str | None = None

    def to_dict(self):
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None and v != {}}


def _num(x):
    """JSON-friendly rendering of numbers and small arrays."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return [float(f"{x.real:.12g}"), float(f"{x.imag:.12g}")]
    if isinstance(x, np.ndarray):
        return [_num(v) for v in x.ravel()]
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    return x


def _entry(cid, anchor, ok, measured=None, expected=None, error=None, **detail):
    return Entry(cid, anchor, "pass" if ok else "fail", _num(measured), _num(expected),
                 None if error is None else float(f"{float(error):.6g}"), detail)


def _rng(cfg):
    return np.random.default_rng(cfg.seed)


def _pick(cfg_value, default):
    return default if cfg_value is None else cfg_value


# 1, 2: quasi anti regular identities and dimensions -------------------------------

def check_qlar_sweep(cfg: Config, max_two_l=None):
    max_two_l = _pick(cfg.max_2l, 5) if max_two_l is None else max_two_l
    bad, total = [], 0
    for fam in bases.U_FAMILIES + bases.UPRIME_FAMILIES:
        pred = bases.is_qlar if fam.startswith("f") else bases.is_qrar
        for tl in range(max_two_l + 1):
            for idx in bases.family_indices(fam, tl):
                total += 1
                if not pred(bases.basis(fam, idx).sym):
                    bad.append(f"{fam}{tuple(idx)}")
    return [_entry("qlar.sweep", "quasi anti regular definition", not bad, total - len(bad), total,
                   len(bad), failures=bad[:10])]


def check_dimensions(cfg: Config, max_deg=None):
    max_deg = _pick(cfg.max_2l, 5) if max_deg is None else max_deg
    out = []
    for d in range(-max_deg, max_deg + 1):
        for name, fams, formula in (("U", bases.U_FAMILIES, bases.dim_formula_U),
                                    ("BH", bases.BH_FAMILIES, bases.dim_formula_BH)):
            if name == "BH" and d == 0:
                continue
            elems = bases.elements_of_degree(fams, d)
            rank = bases.LinearSpan(((e.family, e.idx), e.sym) for e in elems).rank
            exp = formula(d)
            out.append(_entry(f"dim.{name}({d})", "K-type dimension count", rank == len(elems) == exp,
                              rank, exp, abs(rank - exp)))
    return out


# 3: action tables -------------------------------------------------------------------

def check_action_tables(cfg: Config, max_two_l=None):
    max_two_l = _pick(cfg.max_2l, 4) if max_two_l is None else max_two_l
    from .tables import pattern_sweep, table_sweep
    blocks = table_sweep(max_two_l)
    printed = pattern_sweep(max_two_l)
    corrected = pattern_sweep(max_two_l, corrected=True)

    def summary(rs):
        bad = [r for r in rs if not r.ok]
        return bad, [f"{r.action}({r.generator}) {r.family}{tuple(r.idx)}" for r in bad[:8]]

    b1, s1 = summary(blocks)
    b2, s2 = summary(printed)
    b3, s3 = summary(corrected)
    return [
        _entry("tables.offdiagonal", "B/C block tables incl. biharmonic", not b1, len(blocks) - len(b1),
               len(blocks), len(b1), failures=s1),
        _entry("tables.sl2.printed", "sl(2) weight tables as printed", not b2, len(printed) - len(b2),
               len(printed), len(b2), failures=s2),
        _entry("tables.sl2.corrected", "sl(2) weight tables, alpha restored in pi'_r(F2)", not b3,
               len(corrected) - len(b3), len(corrected), len(b3), failures=s3),
    ]


# 4, 5: pairings ---------------------------------------------------------------------

def _pairing_samples(max_two_l):
    out = []
    for fam in ("f1", "f2", "f3", "fT1", "fT2", "fT3"):
        for tl in range(1, max_two_l + 1):
            ids = bases.family_indices(fam, tl)
            if not ids:
                continue
            i = ids[len(ids) // 2]
            out.append(("QR", fam, i, bases.PARTNER[fam], i))
            j = ids[0] if ids[0] != i else ids[-1]
            if j != i:
                out.append(("QR", fam, i, bases.PARTNER[fam], j))
            other = {"1": "2", "2": "3", "3": "1"}[fam[-1]]
            pf = bases.PARTNER[fam][:-1] + other
            if i in bases.family_indices(pf, tl):
                out.append(("QR", fam, i, pf, i))
    for fam in ("phi1", "phi2", "phiT1", "phiT2"):
        for tl in range(1, max_two_l + 1):
            ids = bases.family_indices(fam, tl)
            if ids:
                i = ids[0]
                out.append(("BH", fam, i, bases.PARTNER[fam], i))
                if len(ids) > 1:
                    out.append(("BH", fam, i, bases.PARTNER[fam], ids[-1]))
    return out


def check_pairings(cfg: Config, max_two_l=None, tol=None):
    max_two_l = _pick(cfg.max_2l, 3) if max_two_l is None else max_two_l
    tol = _pick(cfg.tol, 1e-9) if tol is None else tol
    out = []
    for kind, fa, ia, fb, ib in _pairing_samples(max_two_l):
        a, b = bases.basis(fa, ia).sym, bases.basis(fb, ib).sym
        s = pairing.pair_structural(kind, a, b)
        if fb == bases.PARTNER[fa] and ia == ib:
            expected = pairing.pairing_constant(fa, ia)
        else:
            expected = 0
        vals = [complex(pairing.pair_integral(kind, a, b, R=R)) for R in (0.5, 1.0, 2.0)]
        err = max(abs(v - float(s)) for v in vals)
        spread = max(abs(v - vals[1]) for v in vals)
        ok = s == expected and err < tol and spread < tol
        out.append(_entry(f"pair.{kind}.{fa}{tuple(ia)}.{fb}{tuple(ib)}", "orthogonality relations",
                          ok, vals[1], s, max(err, spread), structural=str(s), constant=str(expected)))
    return out


INVARIANCE_GENERATORS = ["X", "Y"] + [f"{blk}=E{i + 1}{j + 1}" for blk in "ABCD" for i in range(2) for j in range(2)]


def _gen(name):
    if name in GENERATORS:
        return GENERATORS[name]
    blk, rest = name.split("=E")
    return elementary(blk, int(rest[0]) - 1, int(rest[1]) - 1)


def check_invariance(cfg: Config, max_two_l=None, kinds=("QR", "BH"), gens=None):
    max_two_l = _pick(cfg.max_2l, 3) if max_two_l is None else max_two_l
    out = []
    for kind in kinds:
        for name in gens or INVARIANCE_GENERATORS:
            r = pairing.check_invariance(kind, _gen(name), max_two_l=max_two_l, name=name)
            out.append(_entry(f"invariance.{kind}.{name}", "invariance of the pairing", r.ok,
                              r.checked - len(r.failures), r.checked, len(r.failures),
                              failures=[str(f) for f in r.failures[:5]]))
    return out


def check_inversion_signs(cfg: Config, max_two_l=None):
    max_two_l = _pick(cfg.max_2l, 3) if max_two_l is None else max_two_l
    out = []
    for kind, expected, fams in (("QR", -1, ("f1", "f2", "f3", "fT1", "fT2", "fT3")),
                                 ("BH", 1, ("phi1", "phi2", "phiT1", "phiT2"))):
        signs = set()
        for fam in fams:
            for tl in range(1, max_two_l + 1):
                for idx in bases.family_indices(fam, tl)[:3]:
                    a, b = bases.basis(fam, idx).sym, bases.basis(bases.PARTNER[fam], idx).sym
                    signs.add(pairing.inversion_sign(kind, a, b))
        out.append(_entry(f"inversion.{kind}", "pairing under inversion", signs == {expected},
                          sorted(signs), expected))
    return out


# 6: kernels ----------------------------------------------------------------------------

def _domain_pair(rng, kid, rho=0.5):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    M = A @ np.linalg.inv(B) if kid.endswith("1") else np.linalg.inv(A) @ B
    s = np.linalg.norm(M, 2) / (rho * rng.uniform(0.5, 1.0))
    if kid.endswith("1"):
        A = A / s
    else:
        B = B / s
    return A, B


def check_kernels(cfg: Config, cutoff=40, samples=20, tol=None):
    tol = _pick(cfg.tol, 1e-8) if tol is None else tol
    from .kernels import check_gradient_relation, kernel_closed, kernel_series
    rng = _rng(cfg)
    out = []
    for kid in ("QRkernel1", "QRkernel2", "BHkernelLog1", "BHkernelLog2"):
        worst, first = 0.0, None
        for _ in range(samples):
            Z, W = _domain_pair(rng, kid)
            v, rep = kernel_series(kid, Z, W, cutoff)
            worst = max(worst, float(np.max(np.abs(v - kernel_closed(kid, Z, W)))))
            first = first or rep
        out.append(_entry(f"kernel.{kid}", "kernel expansions", worst < tol, worst, 0.0, worst,
                          cutoff=cutoff, samples=samples, ratio=_num(first.ratio),
                          spectral_radius=_num(first.spectral_radius), convergence=first.to_csv()))
    Z, W = 0.3 * np.eye(2), np.eye(2)
    v, _ = kernel_series("QRkernel1", Z, W, cutoff)
    e = float(np.max(np.abs(v - (Z - W) / np.linalg.det(Z - W))))
    out.append(_entry("kernel.QRkernel1.0.3Id", "first kernel expansion", e < tol, v, (Z - W) / 0.49, e))
    v, _ = kernel_series("BHkernelLog1", Z, W, cutoff)
    e = abs(v - 2 * np.log(0.7))
    out.append(_entry("kernel.BHkernelLog1.0.3Id", "first log kernel expansion", e < tol, v, 2 * np.log(0.7), e))
    ok = all(check_gradient_relation(*_domain_pair(rng, "QRkernel1", 0.4)) for _ in range(samples))
    ok &= check_gradient_relation(0.2 * np.eye(2), np.eye(2))
    out.append(_entry("kernel.gradient", "gradient of the log kernel", ok, ok, True))
    return out


# 7: reproducing formulas -----------------------------------------------------------

def _qlar_samples(rng, k=10):
    pool = [(f, i) for f in ("f1", "f2", "f3") for tl in range(0, 4) for i in bases.family_indices(f, tl)]
    picks = rng.choice(len(pool), size=k, replace=False)
    return [pool[int(p)] for p in sorted(picks)]


def _bh_samples(rng, k=10):
    pool = [(f, i) for f in ("phi1", "phi2") for tl in range(0, 4) for i in bases.family_indices(f, tl)]
    picks = rng.choice(len(pool), size=k, replace=False)
    return [pool[int(p)] for p in sorted(picks)]


def check_reproducing(cfg: Config, tol=None, nodes=None):
    tol = _pick(cfg.tol, 1e-6) if tol is None else tol
    nodes = max(nodes or cfg.quad_nodes, 24)
    rng = _rng(cfg)
    out = []
    X0 = from_ecoords_num([0.2, 0.1, -0.15, 0.3])
    far = from_ecoords_num([1.2, 0.9, -0.8, 1.1])
    worst_in = worst_out = worst_bh = 0.0
    for fam, idx in _qlar_samples(rng):
        f = bases.basis(fam, idx).sym
        worst_in = max(worst_in, float(np.max(np.abs(
            quad.reproduce_qlar(f, X0, nodes=nodes).ravel() - np.asarray(f.evaluate(X0)).ravel()))))
        worst_out = max(worst_out, float(np.max(np.abs(quad.reproduce_qlar(f, far, nodes=nodes)))))
    for fam, idx in _bh_samples(rng):
        f = bases.basis(fam, idx).sym
        worst_bh = max(worst_bh, abs(quad.reproduce_biharmonic(f, X0, nodes=nodes)
                                     - complex(np.asarray(f.evaluate(X0)).ravel()[0])))
    return [
        _entry("repro.qlar.inside", "quasi anti regular reproducing formula", worst_in < tol, worst_in, 0, worst_in),
        _entry("repro.qlar.outside", "zero outside the ball", worst_out < tol, worst_out, 0, worst_out),
        _entry("repro.biharmonic.inside", "biharmonic reproducing formula", worst_bh < tol, worst_bh, 0, worst_bh),
    ]


# 8: intertwiners -----------------------------------------------------------------------

def random_laurent_mat(rnd: random.Random, terms=3, kmin=-2, kmax=1, deg=2):
    def entry():
        acc = Laurent()
        for _ in range(terms):
            e = [rnd.randint(0, deg) for _ in range(4)]
            acc = acc + Laurent.monomial(*e, k=rnd.randint(kmin, kmax), coef=rnd.randint(-3, 3))
        return acc
    return SymFunc.mat(entry(), entry(), entry(), entry())


def _ball(rng, r):
    return quad._random_in_ball(rng, r)


def check_intertwiners(cfg: Config, tol=None, nodes=None):
    tol = _pick(cfg.tol, 1e-6) if tol is None else tol
    nodes = nodes or cfg.quad_nodes
    rng = _rng(cfg)
    inv_n = lambda k: SymFunc.scalar(Laurent.monomial(k=-k))
    Wplus = ZSYM.conj()
    out = []
    Z1, Z2 = _ball(rng, 0.3), _ball(rng, 0.4)
    v = quad.j_prime(Wplus * inv_n(1), Z1, Z2, nodes=nodes)
    e = float(np.max(np.abs(v + (Z1 + Z2) / 2)))
    out.append(_entry("jprime.N^-1 W+", "J' on the first generator", e < tol, v, -(Z1 + Z2) / 2, e))
    v = quad.j_prime(Wplus * inv_n(2), Z1, Z2, nodes=nodes)
    e = float(np.max(np.abs(v)))
    out.append(_entry("jprime.N^-2 W+ (++)", "J' on the second generator", e < tol, v, np.zeros(4), e))
    U = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    Z2m = 3.0 * U @ np.diag([1.0, 1.3])
    v = quad.j_prime(Wplus * inv_n(2), Z1, Z2m, nodes=nodes)
    s = quad.j_formula1_series(10).series_value(Z1, Z2m)
    e = float(np.max(np.abs(v - s)))
    out.append(_entry("jprime.N^-2 W+ (+-)", "J' series formula", e < tol, v, s, e))

    rnd = random.Random(cfg.seed)
    bad = 0
    for _ in range(20):
        F = random_laurent_mat(rnd)
        tot = quad.mx_operator("plus", F) + quad.mx_operator("zero", F) + quad.mx_operator("minus", F)
        bad += not tot.is_zero()
    out.append(_entry("mx.partition", "Mx+ + Mx0 + Mx- = 0", bad == 0, 20 - bad, 20, bad))

    worst = 0.0
    for _ in range(5):
        F = random_laurent_mat(rnd, terms=2, kmin=-2, kmax=0, deg=1)
        Zp = _ball(rng, 0.4)
        sym = np.asarray(quad.mx_operator("plus", F).evaluate(Zp))
        worst = max(worst, float(np.max(np.abs(quad.mx_integral(F, Zp, nodes=nodes) - sym))))
    out.append(_entry("mx.integral", "integral presentation of Mx+", worst < tol, worst, 0, worst))
    mp = quad.mx_operator("plus", Wplus * inv_n(1))
    out.append(_entry("mx.plus.generator", "Mx+ on N^-1 W+ is -Z", mp == ZSYM.scale(-1), mp.serialize(), "-Z"))
    return out


# 9: Clifford / Fock ---------------------------------------------------------------------

def check_clifford(cfg: Config, tol=None):
    tol = _pick(cfg.tol, 1e-6) if tol is None else tol
    from . import fock
    from .kernels import kernel_closed, kernel_series
    rng = _rng(cfg)
    out = []
    u = fock.universe_2d(4)
    n = len(u)
    bad = 0
    for _ in range(100):
        s = fock.FockState.random(n, rng)
        i, j = (int(x) for x in rng.integers(0, n, 2))
        for x, y, c in ((fock.CliffOp.beta(i), fock.CliffOp.gamma(j), float(i == j)),
                        (fock.CliffOp.beta(i), fock.CliffOp.beta(j), 0.0),
                        (fock.CliffOp.gamma(i), fock.CliffOp.gamma(j), 0.0)):
            bad += not fock.apply(fock.anticommutator(x, y), s, u).close(s.scale(c), 0)
    out.append(_entry("fock.anticommutators", "Clifford relations", bad == 0, 300 - bad, 300, bad))

    # 2D defect
    u = fock.universe_2d(60)
    d = fock.field_product_defect(u, 2.0, 1.0)
    partial = sum(2.0 ** (-i - 1) for i in range(61))
    out.append(_entry("defect.2D.truncated", "defect is the truncated kernel", abs(d - partial) < 1e-14,
                      d, partial, abs(d - partial)))
    out.append(_entry("defect.2D.closed", "defect is 1/(z-w)", abs(d - 1) < 1e-9, d, 1.0, abs(d - 1)))

    Z, W = np.eye(2), 0.3 * np.eye(2)
    uq = fock.universe_qr(30)
    d = fock.field_product_defect(uq, Z, W)
    part, _ = kernel_series("QRkernel2", Z, W, 30)
    closed = kernel_closed("QRkernel2", Z, W)
    e1, e2 = float(np.max(np.abs(d - part))), float(np.max(np.abs(d - closed)))
    out.append(_entry("defect.QR.truncated", "defect is the truncated kernel", e1 < 1e-12, d, part, e1))
    out.append(_entry("defect.QR.closed", "defect is (Z-W)/N(Z-W)", e2 < tol, d, closed, e2))

    ur = fock.universe_regular(20)
    d = fock.field_product_defect(ur, Z, W)
    from .regular import cauchy_fueter_series
    part, _ = cauchy_fueter_series(Z, W, 20)
    closed = kernel_closed("CauchyFueter", Z, W)
    e1, e2 = float(np.max(np.abs(d - part))), float(np.max(np.abs(d - closed)))
    out.append(_entry("defect.CF.truncated", "defect is the truncated kernel", e1 < 1e-12, d, part, e1))
    out.append(_entry("defect.CF.closed", "defect is (Z-W)^-1/N(Z-W)", e2 < tol, d, closed, e2))

    # state independence
    worst = 0.0
    us = fock.universe_qr(1)
    k = fock.field_product_defect(us, Z, W)
    for _ in range(20):
        s = fock.FockState.random(len(us), rng)
        s = s.scale(1 / np.sqrt(abs(s.inner(s))))
        worst = max(worst, float(np.max(np.abs(fock.defect_on_state(us, Z, W, s) - k))))
    out.append(_entry("defect.state_independent", "defect is a multiple of the identity", worst < 1e-12,
                      worst, 0, worst))

    # correlations
    worst = 0.0
    for _ in range(5):
        r = int(rng.integers(1, 4))
        pw = lambda: {int(k): rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
                      for k in rng.integers(-2, 3, size=2)}
        F, G, H = pw(), pw(), pw()
        a = fock.correlation2d_fock(F, G, H, r, cutoff=8)
        b = fock.correlation2d_contour(F, G, H)
        worst = max(worst, abs(a - b))
    out.append(_entry("correlation2D", "Fock vs residue correlation", worst < 1e-9, worst, 0, worst))
    return out


SUITES = {
    "qlar-identities": [check_qlar_sweep, check_dimensions],
    "action-tables": [check_action_tables],
    "pairings": [check_pairings, check_invariance, check_inversion_signs],
    "kernels": [check_kernels],
    "reproducing": [check_reproducing],
    "intertwiners": [check_intertwiners],
    "clifford": [check_clifford],
}
SUITES["all"] = [c for name in list(SUITES) for c in SUITES[name]]


class UnknownSuite(KeyError):
    pass


def suite_checks(name):
    try:
        return SUITES[name]
    except KeyError:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
