import pytest
from math import comb

from otb.divisors import (DivisorClass, divisor_DA, exceptional,
                          h0_fatpoints, h0_h1, line_class, net_split,
                          pairing, riemann_roch_chi)
from otb.exact import RatMatrix, monomials_of_degree, rank
from otb.orlik_terao import l_forms
from otb.resonance import search_multinets

from conftest import BUILTINS, get_arrangement


def test_pairing_basis(braid):
    e0 = line_class()
    assert pairing(e0, e0) == 1
    p, q = braid.flats[0], braid.flats[1]
    assert pairing(exceptional(p), exceptional(q)) == 0
    assert pairing(exceptional(p), exceptional(p)) == -1
    assert pairing(e0, exceptional(p)) == 0


def test_divisor_arithmetic(braid):
    p = braid.flats[0]
    d = 2 * (line_class() + exceptional(p))
    assert d.m == 2 and d.mult(p) == -2


def test_braid_DA(braid):
    da = divisor_DA(braid)
    assert da.m == 5
    assert sorted(da.mults.values(), reverse=True) == [2, 2, 2, 2, 1, 1, 1]
    assert pairing(da, da) == 6
    assert riemann_roch_chi(braid, da) == 6


def test_DA_ex_2_4():
    a = get_arrangement("ex-2-4")
    da = divisor_DA(a)
    assert da.m == 3 and sorted(da.mults.values()) == [1] * 6


def test_DA_9_3_2():
    a = get_arrangement("9_3_2")
    da = divisor_DA(a)
    assert da.m == 8
    assert sorted(da.mults.values(), reverse=True) == [2] * 9 + [1] * 9


def test_chi_zero_divisor(braid):
    assert riemann_roch_chi(braid, DivisorClass(0, {})) == 1


def test_chi_equals_d_on_corpus():
    # equivalent to the edge double count
    for name in BUILTINS:
        a = get_arrangement(name)
        assert riemann_roch_chi(a, divisor_DA(a)) == a.d


def test_h0_DA_is_d_and_spans_l_basis():
    for name in BUILTINS:
        a = get_arrangement(name)
        sec = h0_fatpoints(a, divisor_DA(a))
        assert sec.dimension == a.d
        monos = monomials_of_degree(3, a.d - 1)
        rows = [[p.terms.get(m, 0) for m in monos] for p in sec.basis]
        lrows = [[p.terms.get(m, 0) for m in monos] for p in l_forms(a)]
        assert rank(RatMatrix(rows + lrows)) == a.d == rank(RatMatrix(lrows))


def test_h0_greater_equal_chi_on_corpus_divisors():
    for name in ("braid-a3", "9_3_1"):
        a = get_arrangement(name)
        da = divisor_DA(a)
        for div in (da, DivisorClass(3, {p: 1 for p in a.flats if p.mu == 2})):
            h0 = h0_fatpoints(a, div).dimension
            assert h0 >= riemann_roch_chi(a, div)


def test_9_3_1_net_divisors():
    a = get_arrangement("9_3_1")
    A = DivisorClass(3, {p: 1 for p in a.flats if p.mu == 2})
    sA = h0_fatpoints(a, A)
    assert sA.dimension == 2
    assert sA.conditions_shape == (9, 10)
    h0, h1 = h0_h1(a, A)
    assert (h0, h1) == (2, 1)
    B = divisor_DA(a) - A
    sB = h0_fatpoints(a, B)
    assert sB.dimension == 3
    assert sB.conditions_shape == (18, 21)
    # rank of the 18x21 simple-conditions matrix is full
    assert rank(RatMatrix(
        [[v for v in row] for row in _condition_rows(a, B)])) == 18


def _condition_rows(a, div):
    from otb.divisors import vanishing_condition_rows
    rows = []
    for p, v in sorted(div.mults.items(), key=lambda kv: kv[0].point):
        rows.extend(vanishing_condition_rows(p.point, v, div.m))
    return rows


def test_9_3_1_pencil_lower_bound_matches():
    # the net's block products give two independent sections, and the
    # condition matrix caps the dimension at two: equality both ways
    a = get_arrangement("9_3_1")
    cert = search_multinets(a, 3, 1)[0]
    from otb.exact import MPoly
    prods = []
    for b in cert.blocks:
        f = MPoly.constant(3, 1)
        for i in b:
            f = f * MPoly.linear_form(a.forms[i])
        prods.append(f)
    monos = monomials_of_degree(3, 3)
    rows = [[p.terms.get(m, 0) for m in monos] for p in prods]
    assert rank(RatMatrix(rows)) == 2


def test_net_split_braid(braid):
    cert = search_multinets(braid, 3, 1)[0]
    split = net_split(braid, cert)
    assert split.A_div.m == 2
    assert sorted(split.A_div.mults.values()) == [1, 1, 1, 1]
    assert all(p.mu == 2 for p in split.A_div.mults)
    assert split.B_div.m == 3
    assert sorted(split.B_div.mults.values()) == [1] * 7
    assert split.h0B_lower == 3
    assert split.h0A_lower == 2
    assert h0_fatpoints(braid, split.A_div).dimension == 2
    assert h0_fatpoints(braid, split.B_div).dimension == 3


def test_net_split_9_3_1():
    a = get_arrangement("9_3_1")
    cert = search_multinets(a, 3, 1)[0]
    split = net_split(a, cert)
    assert split.h0B_lower == 3 == 9 - comb(4, 2)
    assert h0_fatpoints(a, split.A_div).dimension == 2
    # base-locus Mobius count from the net numerology
    assert sum(p.mu for p in cert.Z) == a.d * cert.m - cert.m ** 2


def test_net_base_locus_mobius_count_braid(braid):
    cert = search_multinets(braid, 3, 1)[0]
    assert sum(p.mu for p in cert.Z) \
        == braid.d * cert.m - cert.m ** 2


def test_h0_rejects_negative():
    a = get_arrangement("braid-a3")
    p = a.flats[0]
    with pytest.raises(ValueError, match="not a fat-point divisor"):
        h0_fatpoints(a, DivisorClass(2, {p: -1}))
    with pytest.raises(ValueError, match="not a fat-point divisor"):
        h0_fatpoints(a, DivisorClass(-1, {}))


def test_h0_no_conditions():
    a = get_arrangement("braid-a3")
    sec = h0_fatpoints(a, DivisorClass(2, {}))
    assert sec.dimension == 6 and len(sec.basis) == 6


def test_rr_chi_parity_guard(braid):
    # chi is integral for every integral divisor class
    import random
    rng = random.Random(23)
    flats = braid.flats
    for _ in range(25):
        div = DivisorClass(rng.randint(-3, 6),
                           {p: rng.randint(-2, 3) for p in flats})
        riemann_roch_chi(braid, div)
