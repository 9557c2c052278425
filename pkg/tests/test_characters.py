import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affusion.characters import (_cyclotomic, _reduce_cyclotomic, chi_row, dominant_weights,
                                 orbit_size, qdim, qdim_minimal_orbit, qdims, smatrix,
                                 weight_multiplicities)
from affusion.liealg import AlgebraId, algebra_data, weyl_dimension
from affusion.weights import context, conjugations, simple_currents

WEYL_ORDERS = {"A3": 24, "B3": 48, "C4": 384, "D4": 192, "E6": 51840, "E7": 2903040,
               "E8": 696729600, "F4": 1152, "G2": 12}


@pytest.mark.parametrize("name", sorted(WEYL_ORDERS))
def test_regular_orbit_is_weyl_group(name):
    data = algebra_data(AlgebraId.parse(name))
    assert orbit_size(data, [1] * data.rank) == WEYL_ORDERS[name]


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(["A2", "A3", "B3", "C3", "G2", "F4", "D4"]),
       lam=st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_multiplicities_sum_to_dimension(name, lam):
    data = algebra_data(AlgebraId.parse(name))
    lam = tuple(lam[:data.rank])
    ws = weight_multiplicities(data, lam)
    assert ws.dimension() == weyl_dimension(data, lam)
    W, m = ws.arrays()
    assert int(m.sum()) == weyl_dimension(data, lam)
    assert dominant_weights(data.id, lam)[0] == lam


@pytest.mark.parametrize("name,lam,zero_mult", [("A2", (1, 1), 2), ("G2", (1, 0), 2), ("G2", (0, 1), 1),
                                                ("E8", (1, 0, 0, 0, 0, 0, 0, 0), 8),
                                                ("B3", (1, 0, 0), 1), ("F4", (0, 0, 0, 1), 2)])
def test_zero_weight_multiplicity(name, lam, zero_mult):
    data = algebra_data(AlgebraId.parse(name))
    assert weight_multiplicities(data, lam).mult([0] * data.rank) == zero_mult


@pytest.mark.parametrize("k", range(1, 7))
def test_a1_closed_form(k):
    S = smatrix(context("A1", k)).entries
    a = np.arange(k + 1)
    expect = math.sqrt(2 / (k + 2)) * np.sin(np.pi * np.outer(a + 1, a + 1) / (k + 2))
    assert np.abs(S - expect).max() < 1e-12


@pytest.mark.parametrize("r", range(1, 5))
def test_a_level_one_entries(r):
    S = smatrix(context(f"A{r}k1")).entries
    assert np.allclose(np.abs(S), 1 / math.sqrt(r + 1), atol=1e-12)


@pytest.mark.parametrize("token", ["G2k1", "F4k1"])
def test_golden_ratio_rings(token):
    ctx = context(token)
    D = qdims(ctx)
    assert ctx.n == 2
    assert abs(D[1] - (1 + math.sqrt(5)) / 2) < 1e-12


@pytest.mark.parametrize("token", ["A3k3", "B4k2", "C3k3", "D5k3", "E6k2", "E7k3", "E8k4", "F4k4",
                                   "G2k4"])
def test_s_matrix_structure(token):
    S = smatrix(context(token))
    res = S.residuals()
    assert res["symmetry"] < 1e-9
    assert res["unitarity"] < 1e-9
    assert res["square_is_conjugation"] < 1e-9
    assert res["row0_min"] > 0


@pytest.mark.parametrize("token", ["A3k3", "D4k2", "E6k2", "B3k3"])
def test_qdim_invariant_under_diagram_symmetries(token):
    ctx = context(token)
    D = qdims(ctx)
    perms = conjugations(ctx) + [sc.perm for sc in simple_currents(ctx, smatrix(ctx))]
    for p in perms:
        assert np.allclose(D[p], D, atol=1e-12)
    assert (D >= 1 - 1e-12).all()


def test_qdims_agree_with_s_ratio_and_characters():
    ctx = context("C3k2")
    S = smatrix(ctx)
    assert np.allclose(S.qdims(), qdims(ctx), atol=1e-12)
    for lam in ctx.pplus:
        assert abs(chi_row(ctx, lam)[0] - qdim(ctx, lam)) < 1e-10


def test_qdim_minimal_orbit_examples():
    for token in ("E8k4", "F4k4", "A3k3", "B3k3", "G2k2"):
        ctx = context(token)
        D = smatrix(ctx).qdims()
        rest = D[np.abs(D - 1) > 1e-7]
        expect = {ctx.pplus[i] for i in np.flatnonzero(np.abs(D - rest.min()) < 1e-7)}
        assert qdim_minimal_orbit(ctx) == expect
    e84 = context("E8k4")
    assert abs(qdim(e84, "L1") - qdim(e84, "L6")) < 1e-9
    assert qdim_minimal_orbit(context("A2k1")) == set()


@given(m=st.integers(2, 60), coeffs=st.lists(st.integers(-50, 50), min_size=60, max_size=60))
@settings(max_examples=50, deadline=None)
def test_cyclotomic_reduction_preserves_value(m, coeffs):
    counts = np.array(coeffs[:m], dtype=np.int64).reshape(m, 1)
    zeta = np.exp(2j * np.pi * np.arange(m) / m)
    before = zeta @ counts
    after = _reduce_cyclotomic(counts, m)
    assert after.shape[0] == len(_cyclotomic(m)) - 1
    assert abs(zeta[:after.shape[0]] @ after - before)[0] < 1e-6


def test_e8_level_five_heavy_rows():
    # rows obtained from the ring recursion still give a unitary matrix
    S = smatrix(context("E8k5"))
    assert S.residuals()["unitarity"] < 1e-9


@pytest.mark.parametrize("token", ["B3k3", "B4k2", "C3k3", "C2k4", "D4k3", "D5k2"])
def test_vector_character_from_orthogonal_components(token):
    ctx = context(token)
    data = ctx.algebra
    chi = chi_row(ctx, (1,) + (0,) * (ctx.rank - 1))
    for i, lam in enumerate(ctx.pplus):
        comps = [float(x) for x in data.orthogonal([a + 1 for a in lam])]
        if data.id.family == "C":
            expect = 2 * sum(math.cos(math.pi * x / ctx.kappa) for x in comps)
        else:
            expect = 2 * sum(math.cos(2 * math.pi * x / ctx.kappa) for x in comps)
            expect += data.id.family == "B"
        assert abs(chi[i] - expect) < 1e-9
