from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from affusion.errors import InvalidAlgebraError, InvalidWeightError
from affusion.liealg import AlgebraId, algebra_data
from affusion.weights import (charge_conjugate, charge_conjugation_perm, context, conjugations,
                              format_labels, format_weight, level_context, parse_weight,
                              simple_currents)


def _count_by_series(comarks, k):
    # coefficient of x^k in prod 1/(1 - x^a)
    c = [1] + [0] * k
    for a in comarks:
        for j in range(a, k + 1):
            c[j] += c[j - a]
    return c[k]


@pytest.mark.parametrize("name", ["A2", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_pplus_size(name, k):
    ctx = context(name, k)
    assert ctx.n == _count_by_series(algebra_data(AlgebraId.parse(name)).comarks, k)
    assert len(set(ctx.pplus)) == ctx.n
    assert ctx.pplus == tuple(sorted(ctx.pplus))
    assert ctx.index_of_zero == 0


@given(r=st.integers(1, 4), k=st.integers(1, 6))
def test_a_series_size(r, k):
    assert context(f"A{r}k{k}").n == comb(r + k, r)


def test_small_examples():
    e8 = context("E8k2")
    assert {format_weight(w) for w in e8.pplus} == {"0", "L1", "L7"}
    assert context("A1k1").n == 2
    assert context("B3k2").n == 7


def test_context_parsing():
    assert str(context("A3k4")) == "A3k4"
    assert context("a3", 4) is context("A3k4")
    for bad in ("A3", "X3k2", "A3kx"):
        with pytest.raises(InvalidAlgebraError):
            context(bad)


@given(st.lists(st.integers(0, 5), min_size=4, max_size=4))
def test_weight_notation_round_trip(lam):
    lam = tuple(lam)
    assert parse_weight(4, format_weight(lam)) == lam
    assert parse_weight(4, format_labels(lam)) == lam


def test_weight_parsing_variants():
    assert parse_weight(3, "2Λ1+Λ3") == (2, 0, 1)
    assert parse_weight(3, "L_2") == (0, 1, 0)
    assert parse_weight(3, "0") == (0, 0, 0)
    for bad in ("L4", "1 2", "2Lx", "L1*L2"):
        with pytest.raises(InvalidWeightError):
            parse_weight(3, bad)


def test_index_of_rejects_outside_weights():
    with pytest.raises(InvalidWeightError):
        context("A2k1").index_of("L1+L2")


@pytest.mark.parametrize("token,expected", [("A3k2", 4), ("B3k2", 2), ("C3k2", 2), ("D4k2", 4),
                                            ("D5k2", 4), ("E6k2", 3), ("E7k2", 2), ("E8k2", 2),
                                            ("F4k2", 1), ("G2k3", 1), ("E8k3", 1)])
def test_simple_current_counts(token, expected, ring):
    c = context(token)
    _, S, T = ring(str(c.id), c.level)
    currents = simple_currents(c, S)
    assert len(currents) == expected
    assert currents[0].index == 0


@pytest.mark.parametrize("token", ["A3k3", "B3k2", "C2k3", "D4k3", "D5k2", "E6k2", "E7k3", "E8k2"])
def test_current_properties(token, ring):
    c = context(token)
    _, S, T = ring(str(c.id), c.level)
    M = S.entries
    for sc in simple_currents(c, S):
        # J acts on S rows through its charge
        phase = np.exp(2j * np.pi * np.array([float(q) for q in sc.charge]))
        assert np.abs(M[sc.perm] - M * phase[None, :]).max() < 1e-9
        # fusing with J is the permutation
        assert np.array_equal(T.N[sc.index].argmax(axis=1), sc.perm)
        # charge is conserved in fusion
        a, b, cc = np.nonzero(T.N)
        q = np.array([float(x) for x in sc.charge])
        assert np.allclose(np.round(q[a] + q[b] - q[cc]), q[a] + q[b] - q[cc], atol=1e-9)
        assert all(isinstance(x, Fraction) and 0 <= x < 1 for x in sc.charge)


def test_charge_conjugation():
    a3 = context("A3k2")
    assert charge_conjugate(a3, "L1") == (0, 0, 1)
    assert charge_conjugate(context("D5k1"), "L4") == (0, 0, 0, 0, 1)
    assert charge_conjugate(context("D4k1"), "L4") == (0, 0, 0, 1)
    for token in ("A4k3", "E6k2", "D5k2", "G2k3"):
        C = charge_conjugation_perm(context(token))
        assert np.array_equal(C[C], np.arange(len(C)))


def test_d4_triality():
    assert len(conjugations(context("D4k2"))) == 6
    assert len(conjugations(context("D5k2"))) == 2
    assert len(conjugations(context("E8k3"))) == 1
