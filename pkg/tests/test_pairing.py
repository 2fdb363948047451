from fractions import Fraction

import numpy as np
import pytest

from quatlab.actions import act, elementary, generator
from quatlab.bases import PARTNER, basis, family_indices
from quatlab.pairing import (
    check_invariance, check_pseudo_invariance, degenerate_directions, inversion_sign,
    pair_integral, pair_structural, pairing_constant, pseudo_form, pseudo_form_integral,
)
from quatlab.tcoeff import TIndex


def b(fam, *i):
    return basis(fam, TIndex(*i)).sym


def test_structural_examples():
    assert pair_structural("QR", b("f1", 0, 0, 1), b("gT1", 0, 0, 1)) == 1
    assert pair_structural("QR", b("f2", 1, 1, 0), b("gT2", 1, 1, 0)) == -2
    assert pair_structural("QR", b("f1", 1, 1, 2), b("gT2", 1, 1, 0)) == 0
    assert pair_structural("QR", b("f1", 2, 0, 1), b("gT1", 2, 0, -1)) == 0


@pytest.mark.parametrize("fam", ["f1", "f2", "f3", "fT1", "fT2", "fT3"])
def test_qr_structural_matches_integral(fam):
    for tl in (1, 2, 3):
        ids = family_indices(fam, tl)
        if not ids:
            continue
        i = ids[len(ids) // 2]
        a, g = basis(fam, i).sym, basis(PARTNER[fam], i).sym
        exact = pair_structural("QR", a, g)
        assert exact == pairing_constant(fam, i)
        for R in (0.5, 1.0, 2.0):
            assert abs(pair_integral("QR", a, g, R=R) - float(exact)) < 1e-9


@pytest.mark.parametrize("fam", ["phi1", "phi2", "phiT1", "phiT2"])
def test_bh_structural_matches_integral(fam):
    for tl in (2, 3):
        i = family_indices(fam, tl)[0]
        a, g = basis(fam, i).sym, basis(PARTNER[fam], i).sym
        exact = pair_structural("BH", a, g)
        for R in (0.5, 1.0, 2.0):
            assert abs(pair_integral("BH", a, g, R=R) - float(exact)) < 1e-9


def test_cross_family_integrals_vanish():
    assert abs(pair_integral("QR", b("f1", 1, 1, 2), b("gT2", 1, 1, 0))) < 1e-9
    assert abs(pair_integral("QR", b("f1", 2, 0, 1), b("gT1", 2, 0, -1))) < 1e-9


def test_unknown_kind():
    with pytest.raises(ValueError):
        pair_structural("nope", b("f1", 0, 0, 1), b("gT1", 0, 0, 1))


def test_invariance_example():
    X = elementary("B", 0, 0)
    a, g = b("f1", 2, 0, 1), b("gT1", 1, 1, 2)
    left = pair_structural("QR", act("piPrimeL", X, a), g)
    right = pair_structural("QR", a, act("piPrimeR", X, g))
    assert left == -2 and left + right == 0


@pytest.mark.parametrize("kind", ["QR", "BH"])
@pytest.mark.parametrize("name", ["X", "Y", "E1", "F2", "B=E11", "C=E11"])
def test_invariance_sweep(kind, name):
    r = check_invariance(kind, generator(name), max_two_l=2, name=name)
    assert r.checked > 0 and r.ok, r.failures[:3]


def test_inversion_signs():
    assert inversion_sign("QR", b("f1", 2, 0, 1), b("gT1", 2, 0, 1)) == -1
    assert inversion_sign("QR", b("fT2", 2, 1, -2), b("g2", 2, 1, -2)) == -1
    assert inversion_sign("BH", b("phi1", 2, 0, 0), b("phiT1", 2, 0, 0)) == 1
    assert inversion_sign("BH", b("phiT2", 3, 1, 1), b("phi2", 3, 1, 1)) == 1


def test_bh_degenerate_directions_are_constants():
    # phi1 and phiT1 at l = 0 both equal 1 and pair to 0 with everything
    assert set(degenerate_directions(3)) == {("phi1", TIndex(0, 0, 0)), ("phiT1", TIndex(0, 0, 0))}


def test_pseudo_form_examples():
    f = b("f1", 0, 0, 1)
    assert pseudo_form("pseudoUplus", f, f) == 1
    g = b("f2", 1, 1, 0)
    assert pseudo_form("pseudoUplus", g, g) == -2
    assert pseudo_form("pseudoUplus", f, g) == 0


def test_pseudo_form_matches_integral():
    for fam, kind in [("f1", "pseudoUplus"), ("f2", "pseudoUplus"), ("f3", "pseudoUplus"),
                      ("phi1", "pseudoBHplus"), ("phi2", "pseudoBHplus")]:
        for tl in range(4):
            for i in family_indices(fam, tl):
                a = basis(fam, i).sym
                assert abs(complex(pseudo_form(kind, a, a)) - pseudo_form_integral(kind, a, a)) < 1e-9


@pytest.mark.parametrize("kind", ["pseudoUplus", "pseudoUminus", "pseudoBHplus", "pseudoBHminus"])
def test_pseudo_invariance(kind):
    for name in ("X", "Y"):
        r = check_pseudo_invariance(kind, generator(name), max_two_l=3, name=name)
        assert r.ok, r.failures[:3]


def test_printed_phi2_weight_breaks_invariance():
    r = check_pseudo_invariance("pseudoBHplus", generator("X"), max_two_l=3, convention="printed")
    assert not r.ok


def test_pseudo_invariance_needs_u22():
    with pytest.raises(ValueError):
        check_pseudo_invariance("pseudoUplus", elementary("B", 0, 0))
