import numpy as np
import pytest

from affusion.isomorphism import (find_isomorphism, fingerprint, fingerprints_match,
                                  format_bijection, expected_isomorphic_pairs)
from affusion.symmetries import is_fusion_isomorphism
from affusion.weights import charge_conjugation_perm, context


def _get(ring, token):
    c = context(token)
    return ring(str(c.id), c.level)


@pytest.mark.parametrize("a,b", [("A1k1", "E7k1"), ("A2k1", "E6k1"), ("A3k1", "D5k1"),
                                 ("F4k1", "G2k1"), ("B3k1", "E8k2"), ("A1k2", "C2k1"),
                                 ("C2k3", "C3k2"), ("F4k2", "E8k3")])
def test_known_isomorphisms(a, b, ring):
    ca, Sa, Ta = _get(ring, a)
    cb, Sb, Tb = _get(ring, b)
    assert fingerprints_match(fingerprint(ca, Sa, Ta), fingerprint(cb, Sb, Tb))
    p = find_isomorphism(ca, Ta, cb, Tb)
    assert p is not None
    assert is_fusion_isomorphism(Ta, Tb, p)
    assert np.array_equal(p[charge_conjugation_perm(ca)], charge_conjugation_perm(cb)[p])
    assert int(p[0]) == 0


def test_f4_level_two_anchors(ring):
    ca, _, Ta = _get(ring, "F4k2")
    cb, _, Tb = _get(ring, "E8k3")
    pairs = dict(format_bijection(ca, cb, find_isomorphism(ca, Ta, cb, Tb)))
    # the bijection is unique here, so the anchors are forced
    assert pairs == {"0": "0", "L4": "L7", "2L4": "L2", "L3": "L1", "L1": "L8"}


@pytest.mark.parametrize("a,b", [("A1k2", "A2k1"), ("G2k2", "A3k1"), ("A2k2", "B3k2")])
def test_non_isomorphic(a, b, ring):
    ca, Sa, Ta = _get(ring, a)
    cb, Sb, Tb = _get(ring, b)
    assert find_isomorphism(ca, Ta, cb, Tb, force=True) is None
    assert find_isomorphism(ca, Ta, cb, Tb) is None


def test_different_sizes_short_circuit(ring):
    ca, _, Ta = _get(ring, "A1k3")
    cb, _, Tb = _get(ring, "A2k1")
    assert find_isomorphism(ca, Ta, cb, Tb, force=True) is None


def test_fingerprint_contents(ring):
    c, S, T = _get(ring, "A3k2")
    fp = fingerprint(c, S, T)
    assert fp.cardinality == c.n
    assert fp.sc_group == (1, 2, 4, 4)
    assert 0 < fp.galois_fraction <= 1
    assert set(fp.as_dict()) == {"cardinality", "sc_group", "qdim_multiset", "charge_profile",
                                 "galois_fraction"}


def test_pair_list_sizes_agree():
    for a, b in expected_isomorphic_pairs():
        ca = context(f"{a[0]}{a[1]}k{a[2]}")
        cb = context(f"{b[0]}{b[1]}k{b[2]}")
        assert ca.n == cb.n
