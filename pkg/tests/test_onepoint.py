from fractions import Fraction

import pytest
from hypothesis import given, settings

from arcticpaths.boundary import StartSequence, complement_of
from arcticpaths.onepoint import (H, H_det_oracle, Hcheck, Hcheck_residue, Hhat,
                                  Hhat_det_oracle, Hhat_residue, Htilde, Htilde_residue,
                                  Yfactor, Yhat, Ytilde, table, table_to_csv)

from conftest import sequences


def test_H_endpoints():
    for a in [(0, 2), (0, 2, 4), (0, 2, 3, 6, 10, 12, 15)]:
        seq = StartSequence(a)
        assert H(seq, 0) == 1
        assert H(seq, seq.n) == 1
    with pytest.raises(ValueError):
        H(StartSequence((0, 2)), 3)


def test_H_pure3_matches_determinant():
    seq = StartSequence((0, 3, 6))
    assert H(seq, 5) == H_det_oracle(seq, 5)
    assert 0 < H(seq, 5) < 1


def test_Htilde_examples():
    seq = StartSequence((0, 2))
    assert Htilde(seq, 0) == 0
    assert Htilde(seq, 1) == Fraction(1, 2)
    assert H(seq, 2) + Htilde(seq, 1) == 1
    s3 = StartSequence((0, 2, 4))
    assert Htilde(s3, 3) == 1 - H(s3, 4)
    with pytest.raises(ValueError):
        Htilde(s3, 0)


@given(sequences())
def test_sum_rule(seq):
    for ell in range(seq.n, seq.an + 1):
        assert H(seq, ell) + Htilde(seq, ell - 1) == 1


@given(sequences())
def test_Htilde_residue_form(seq):
    for ell in range(seq.n, seq.an + 1):
        assert Htilde(seq, ell) == Htilde_residue(seq, ell)


@given(sequences())
def test_monotone_and_bounded(seq):
    hs = [H(seq, ell) for ell in range(seq.an + 1)]
    assert all(0 <= v <= 1 for v in hs)
    assert all(x >= y for x, y in zip(hs, hs[1:]))
    ht = [Htilde(seq, ell) for ell in range(seq.n - 1, seq.an + 1)]
    assert all(0 <= v <= 1 for v in ht)
    assert all(x <= y for x, y in zip(ht, ht[1:]))


@settings(max_examples=40)
@given(sequences(n_max=5, an_max=12))
def test_H_determinant_oracle(seq):
    for ell in range(seq.an + 1):
        assert H(seq, ell) == H_det_oracle(seq, ell)


@settings(max_examples=40)
@given(sequences(n_max=5, an_max=12))
def test_Hhat_determinant_oracle(seq):
    if not complement_of(seq).b:
        return
    for ell in range(seq.n + 2):
        assert Hhat(seq, ell) == Hhat_det_oracle(seq, ell)


@given(sequences())
def test_Hhat_and_Hcheck(seq):
    if not complement_of(seq).b:
        with pytest.raises(ValueError):
            Hhat(seq, 1)
        return
    hh = [Hhat(seq, ell) for ell in range(seq.n + 2)]
    assert hh[0] == 1 and hh[-1] == 0
    assert all(0 <= v <= 1 for v in hh)
    assert all(x >= y for x, y in zip(hh, hh[1:]))
    hc = [Hcheck(seq, ell) for ell in range(seq.n + 1)]
    assert all(c + Hhat(seq, ell + 1) == 1 for ell, c in enumerate(hc))
    assert all(x <= y for x, y in zip(hc, hc[1:]))
    for ell in range(seq.n + 1):
        assert Hcheck(seq, ell) == Hcheck_residue(seq, ell)
    for ell in range(1, seq.n + 2):
        assert Hhat(seq, ell) == Hhat_residue(seq, ell)


def test_Hhat_examples():
    seq = StartSequence((0, 3))
    assert Hhat(seq, 1) == Hhat_det_oracle(seq, 1)
    assert Hcheck(StartSequence((0, 2)), 0) == 1 - Hhat(StartSequence((0, 2)), 1)
    # no b_k large enough -> empty residue sum
    assert Hhat(seq, seq.n + 1) == 0
    assert Hcheck(seq, seq.n) == 1


def test_escape_factors():
    assert all(Yfactor(0, r) == 1 for r in range(1, 6))
    assert all(Yhat(ell, ell) == 1 for ell in range(1, 6))
    seq = StartSequence((0, 2, 3, 6, 10, 12, 15))
    assert Ytilde(seq, 14, 1) == 1
    assert Yfactor(3, 2) == 4
    assert Yhat(2, 5) == 4


def test_tables_and_csv():
    t = table(StartSequence((0, 1)), "H")
    assert set(t.values.values()) == {1}
    text = table_to_csv(t)
    lines = text.splitlines()
    assert lines[0] == "ell,numerator,denominator,value"
    assert lines[1] == "0,1,1,1.0"
    assert len(lines) == 3
    for kind in ("Htilde", "Hhat", "Hcheck"):
        tab = table(StartSequence((0, 2, 4)), kind)
        assert tab.kind == kind and tab.ells()
    with pytest.raises(ValueError):
        table(StartSequence((0, 2)), "bogus")
