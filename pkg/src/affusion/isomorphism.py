"""Isomorphisms between affine fusion rings."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import SMatrix, qdim_minimal_orbit, smatrix
from .fusion import FusionTable, build_table
from .search import DEFAULT_SEARCH_BOUND, find_bijections, initial_domains, signatures
from .symmetries import coprime_residues, galois_perm, is_fusion_isomorphism, unit_orders
from .weights import LevelContext, QDIM_TOL, charge_conjugation_perm, simple_currents

QDIM_DIGITS = 7

Triple = tuple  # (family, rank, level)


@dataclass(frozen=True)
class Fingerprint:
    cardinality: int
    sc_group: tuple[int, ...]
    qdim_multiset: tuple[float, ...]
    charge_profile: tuple
    galois_fraction: Fraction

    def as_dict(self) -> dict:
        return {
            "cardinality": self.cardinality,
            "sc_group": list(self.sc_group),
            "qdim_multiset": list(self.qdim_multiset),
            "charge_profile": [[o, [str(q) for q in qs]] for o, qs in self.charge_profile],
            "galois_fraction": str(self.galois_fraction),
        }


def galois_fraction(ctx: LevelContext, S: SMatrix) -> Fraction:
    """Share of residues ell (coprime, below 2*kappa*N) with 0^(ell) a simple current."""
    residues = coprime_residues(ctx)
    D = S.qdims()
    hits = sum(1 for l in residues if abs(D[int(galois_perm(ctx, None, l).perm[0])] - 1) < QDIM_TOL)
    return Fraction(hits, len(residues))


def fingerprint(ctx: LevelContext, S: SMatrix | None = None,
                table: FusionTable | None = None) -> Fingerprint:
    S = S or smatrix(ctx)
    table = table or build_table(ctx)
    orders = unit_orders(table.N)
    sc_group = tuple(sorted(int(o) for o in orders if o))
    D = S.qdims()
    qd = tuple(sorted(round(float(x), QDIM_DIGITS) for x in D))
    minimal = [ctx.index[w] for w in qdim_minimal_orbit(ctx)]
    profile = []
    for sc in simple_currents(ctx, S):
        profile.append((sc.order, tuple(sorted(sc.charge[m] for m in minimal))))
    return Fingerprint(ctx.n, sc_group, qd, tuple(sorted(profile)), galois_fraction(ctx, S))


def fingerprints_match(fa: Fingerprint, fb: Fingerprint, tol: float = 1e-6) -> bool:
    if (fa.cardinality, fa.sc_group, fa.charge_profile, fa.galois_fraction) != \
            (fb.cardinality, fb.sc_group, fb.charge_profile, fb.galois_fraction):
        return False
    return bool(np.allclose(fa.qdim_multiset, fb.qdim_multiset, rtol=0, atol=tol))


def find_isomorphism(ctxA: LevelContext, tableA: FusionTable, ctxB: LevelContext,
                     tableB: FusionTable, force: bool = False,
                     bound: int = DEFAULT_SEARCH_BOUND) -> np.ndarray | None:
    """A bijection P+(A) -> P+(B) preserving fusion coefficients, or None.

    Unless ``force`` is set, differing fingerprints short-circuit to None.
    """
    SA, SB = smatrix(ctxA), smatrix(ctxB)
    if ctxA.n != ctxB.n:
        return None
    if not force and not fingerprints_match(fingerprint(ctxA, SA, tableA),
                                            fingerprint(ctxB, SB, tableB)):
        return None
    sig_a = signatures(tableA.N, unit_orders(tableA.N))
    sig_b = signatures(tableB.N, unit_orders(tableB.N))
    D = initial_domains(sig_a, sig_b, SA.qdims(), SB.qdims(), QDIM_TOL)
    found = find_bijections(tableA.N, tableB.N, D, limit=1, bound=bound)
    if not found:
        return None
    p = found[0]
    if not is_fusion_isomorphism(tableA, tableB, p):
        raise AssertionError("search returned an invalid bijection")
    CA, CB = charge_conjugation_perm(ctxA), charge_conjugation_perm(ctxB)
    if not np.array_equal(p[CA], CB[p]):
        raise AssertionError("isomorphism does not commute with charge conjugation")
    return p


def expected_isomorphic_pairs() -> list[tuple[Triple, Triple]]:
    """Expected isomorphisms between distinct rings, instantiated over the desk suite."""
    pairs = []
    for k in range(2, 6):
        pairs.append((("A", 1, k), ("C", k, 1)))
    for r in range(2, 6):
        for k in range(2, 6):
            if r < k and (r <= 4 and k <= 4 or (k == 5 and r <= 3)):
                pairs.append((("C", r, k), ("C", k, r)))
    level_one = [("A", 1, 2), ("C", 2, 1), ("E", 8, 2), ("B", 3, 1), ("B", 4, 1)]
    for i in range(len(level_one)):
        for j in range(i + 1, len(level_one)):
            pairs.append((level_one[i], level_one[j]))
    pairs += [
        (("A", 3, 1), ("D", 5, 1)),
        (("A", 2, 1), ("E", 6, 1)),
        (("A", 1, 1), ("E", 7, 1)),
        (("F", 4, 1), ("G", 2, 1)),
        (("F", 4, 2), ("E", 8, 3)),
        (("F", 4, 3), ("G", 2, 4)),
    ]
    return pairs


def format_bijection(ctxA: LevelContext, ctxB: LevelContext, p) -> list[list[str]]:
    from .weights import format_weight
    return [[format_weight(ctxA.pplus[i]), format_weight(ctxB.pplus[int(p[i])])]
            for i in range(ctxA.n)]
