"""Acceptance checks over a fixed suite of algebras and levels."""
from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .characters import qdim_minimal_orbit, qdims, smatrix
from .fusion import build_table, verlinde_genus, verlinde_genus_value, verlinde_tensor
from .isomorphism import find_isomorphism, fingerprint, fingerprints_match, expected_isomorphic_pairs
from .liealg import AlgebraId
from .search import DEFAULT_SEARCH_BOUND, find_bijections, initial_domains, signatures
from .symmetries import (FusionSymmetry, coprime_residues, d_even_admissible,
                         d_even_bijective_matrices, enumerate_automorphisms,
                         expected_automorphisms, galois_automorphism, galois_perm,
                         galois_residual, is_fusion_isomorphism, is_fusion_symmetry,
                         rank_level_tau, sc_matrix_permutation, unit_orders)
from .weights import (LevelContext, charge_conjugation_perm, conjugations, format_weight,
                      level_context, parse_weight, simple_currents)

log = logging.getLogger(__name__)

STRUCT_TOL = 1e-9
ROUND_TOL = 1e-6
QDIM_TOL = 1e-7
RUNTIME_BUDGET = 600.0

DESK_LEVELS = {
    "A1": 6, "A2": 6, "A3": 6, "A4": 6,
    "B3": 4, "B4": 4,
    "C2": 4, "C3": 4, "C4": 4, "C5": 3,
    "D4": 3, "D5": 3,
    "E6": 2, "E7": 3, "E8": 5,
    "F4": 4, "G2": 4,
}


def desk_suite() -> list[LevelContext]:
    return [ctx(name, k) for name, top in DESK_LEVELS.items() for k in range(1, top + 1)]


def ctx(name: str, k: int) -> LevelContext:
    return level_context(AlgebraId.parse(name), k)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str = ""
    residual: float | None = None

    def as_dict(self) -> dict:
        out = {"criterion": self.criterion, "name": self.name, "passed": self.passed,
               "detail": self.detail}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


@dataclass
class SuiteReport:
    checks: list[CheckResult] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def criterion_passed(self, c: int) -> bool:
        rel = [r for r in self.checks if r.criterion == c]
        return bool(rel) and all(r.passed for r in rel)

    def failures(self, c: int | None = None) -> list[CheckResult]:
        return [r for r in self.checks if not r.passed and (c is None or r.criterion == c)]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)


# -- fusion lists with level thresholds ---------------------------------------
# "factor x factor = weight@levels; ..." where each digit of ``levels`` is a
# level at which one more copy of the summand appears.

LEVEL_LISTS = {
    "E6": (range(1, 4), [
        "L1 x L1 = L2@2; L5@1; 2L1@2",
        "L1 x L5 = 0@1; L6@2; L1+L5@2",
        "L1 x L2 = L3@3; L6@2; L1+L2@3; L1+L5@2",
        "L1 x 2L1 = 3L1@3; L1+L2@3; L1+L5@2",
    ]),
    "E7": (range(1, 4), [
        "L6 x L6 = 0@1; L1@2; L5@2; 2L6@2",
        "L1 x L6 = L6@2; L7@2; L1+L6@3",
        "L5 x L6 = L4@3; L6@2; L7@2; L1+L6@3; L5+L6@3",
        "L6 x 2L6 = L6@2; L1+L6@3; 3L6@3; L5+L6@3",
        "L4 x L6 = L2@3; L3@4; L5@3; L1+L5@4; L4+L6@4; L6+L7@3",
        "L6 x L7 = L1@2; L2@3; L5@2; L6+L7@3",
        "L6 x L5+L6 = L5@3; 2L5@4; 2L6@3; L6+L7@3; L1+L5@4; L4+L6@4; L1+2L6@4; L5+2L6@4",
    ]),
    "E8": (range(2, 6), [
        "L1 x L1 = 0@2; L1@3; L2@3; L7@2; 2L1@4",
        "L2 x L2 = 0@3; L1@4; L2@34; L3@45; L4@5; L6@4; L7@34; L8@44; L1+L7@445; "
        "2L1@45; 2L2@6; 2L7@4; L1+L2@55; L1+L3@6; L1+L8@55; L2+L7@5; 2L1+L7@6; 3L1@6",
        "L7 x L7 = 0@2; L1@3; L2@3; L3@4; L6@4; L7@3; L8@3; 2L1@4; 2L7@4; L1+L7@4",
        "2L1 x 2L1 = 0@4; L1@5; L2@5; L3@4; L7@4; 2L1@46; 2L2@6; 2L7@4; L1+L2@56; "
        "L1+L7@5; L2+L7@5; 3L1@7; 2L1+L2@7; 2L1+L7@6; 4L1@8",
        "L1 x L4 = L3@5; L4@6; L5@6; L6@5; L1+L3@6; L1+L4@7; L1+L6@6; L1+L8@5; L2+L7@5; "
        "L7+L8@5; L2+L8@6; L3+L7@6",
        "L1 x L1+L3 = L3@6; L4@6; L1+L2@6; L1+L3@67; L1+L4@7; L1+L6@6; L1+L8@6; L2+L3@7; "
        "L2+L7@6; 2L2@6; L2+L8@6; L3+L7@6; 2L1+L8@7; 2L1+L2@7; 2L1+L3@8; 2L1+L7@6; L1+L2+L7@7",
        "L1 x 2L7 = L6@4; L1+L7@4; 2L7@5; L2+L7@5; L7+L8@5; L1+2L7@6",
    ]),
    "F4": (range(1, 5), [
        "L4 x L4 = 0@1; L1@2; L3@2; L4@1; 2L4@2",
        "L1 x L4 = L3@2; L4@2; L1+L4@3",
        "L3 x L4 = L1@2; L2@3; L3@2; L4@2; L1+L4@3; L3+L4@3; 2L4@2",
        "2L4 x L4 = L3@2; L4@2; 2L4@2; 3L4@3; L1+L4@3; L3+L4@3",
    ]),
    "G2": (range(1, 5), [
        "L2 x L2 = 0@1; L1@2; L2@1; 2L2@2",
        "L2 x L2 x L2 = 0@1; L1@22; L2@1122; 2L2@222; L1+L2@33; 3L2@3",
    ]),
}


def _parse_level_list(rank: int, text: str):
    lhs, rhs = text.split("=")
    factors = [parse_weight(rank, f) for f in lhs.split(" x ")]
    terms = []
    for part in rhs.split(";"):
        w, levels = part.strip().split("@")
        terms.append((parse_weight(rank, w), [int(d) for d in levels]))
    return factors, terms


def _product(c: LevelContext, N: np.ndarray, factors) -> np.ndarray:
    vec = np.zeros(c.n, dtype=np.int64)
    vec[c.index[factors[0]]] = 1
    for f in factors[1:]:
        vec = vec @ N[c.index[f]].astype(np.int64)
    return vec


def _expected_vector(c: LevelContext, terms) -> np.ndarray | None:
    vec = np.zeros(c.n, dtype=np.int64)
    for w, levels in terms:
        count = sum(1 for l in levels if l <= c.level)
        if count:
            if w not in c.index:
                return None
            vec[c.index[w]] += count
    return vec


def _generic_lists(c: LevelContext) -> list[tuple[str, list, list]]:
    """Closed-form products valid for every rank (A-D series), as (label, factors, terms)."""
    fam, r, k = c.id.family, c.rank, c.level
    out = []

    def fw(i, mult=1):
        v = [0] * r
        if i > 0:
            v[i - 1] += mult
        return v

    def add(*vs):
        return tuple(sum(x) for x in zip(*vs))

    L1 = fw(1)
    if fam == "A" and k >= 2:
        for l in range(1, r):
            out.append((f"L1 x L{l}", [tuple(L1), tuple(fw(l))], [add(fw(l + 1)), add(L1, fw(l))]))
    if fam in "BC" and k > (2 if fam == "B" else 1):
        top = r - 1 if fam == "B" else r
        for i in range(1, top):
            out.append((f"L1 x L{i}", [tuple(L1), tuple(fw(i))],
                        [add(fw(i - 1)), add(fw(i + 1)), add(L1, fw(i))]))
    if fam == "B" and k > 2:
        for l in range(1, k):
            terms = [add(fw(r, l)), add(L1, fw(r, l))]
            if l >= 2:
                terms.append(add(fw(r - 1), fw(r, l - 2)))
            out.append((f"L1 x {l}L{r}", [tuple(L1), add(fw(r, l))], terms))
    if fam == "D" and k > 2:
        for i in range(1, r - 2):
            out.append((f"L1 x L{i}", [tuple(L1), tuple(fw(i))],
                        [add(fw(i - 1)), add(fw(i + 1)), add(L1, fw(i))]))
        out.append((f"L1 x L{r}", [tuple(L1), tuple(fw(r))], [add(fw(r - 1)), add(L1, fw(r))]))
    return out


# -- suite ----------------------------------------------------------------------

class Runner:
    def __init__(self, cache_dir=None, tol: float = STRUCT_TOL,
                 search_bound: int = DEFAULT_SEARCH_BOUND, seed: int = 20240601,
                 progress: Callable[[str], None] | None = None):
        self.cache_dir = cache_dir
        self.tol = tol
        self.search_bound = search_bound
        self.seed = seed
        self.progress = progress or (lambda msg: log.info(msg))
        self.report = SuiteReport()

    def table(self, c: LevelContext):
        return build_table(c, self.cache_dir)

    def add(self, criterion: int, name: str, passed: bool, detail: str = "", residual=None):
        self.report.checks.append(CheckResult(criterion, name, bool(passed), detail,
                                              None if residual is None else float(residual)))

    def run(self, criteria: Iterable[int] | None = None) -> SuiteReport:
        wanted = set(criteria) if criteria else set(range(1, 10))
        start = time.perf_counter()
        steps = [(1, self.c1_smatrix), (2, self.c2_oracle), (3, self.c3_fusion_lists),
                 (4, self.c4_automorphisms), (5, self.c5_isomorphisms), (6, self.c6_qdims),
                 (7, self.c7_galois), (8, self.c8_genus)]
        for num, fn in steps:
            if num in wanted:
                t0 = time.perf_counter()
                self.progress(f"criterion {num}")
                try:
                    fn()
                except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                    log.exception("criterion %d crashed", num)
                    self.add(num, "completed without error", False, f"{type(exc).__name__}: {exc}")
                self.report.timings[num] = time.perf_counter() - t0
        total = time.perf_counter() - start
        self.report.timings["total"] = total
        if 9 in wanted:
            self.add(9, "suite runtime under budget", total < RUNTIME_BUDGET,
                     f"{total:.1f}s of {RUNTIME_BUDGET:.0f}s", total)
        return self.report

    # 1 ---------------------------------------------------------------------------
    def c1_smatrix(self):
        for c in desk_suite():
            S = smatrix(c, self.tol)
            res = S.residuals()
            ok = (res["symmetry"] < self.tol and res["unitarity"] < self.tol
                  and res["square_is_conjugation"] < self.tol and res["row0_min"] > 0
                  and res["row0_imag"] < self.tol)
            worst = max(res["symmetry"], res["unitarity"], res["square_is_conjugation"])
            self.add(1, f"S structure {c}", ok, str(res), worst)

    # 2 ---------------------------------------------------------------------------
    def c2_oracle(self):
        for c in desk_suite():
            T = self.table(c)
            V, resid = verlinde_tensor(smatrix(c))
            inv = T.check_invariants()
            ok = bool(np.array_equal(V, T.N)) and resid < ROUND_TOL and all(inv.values())
            self.add(2, f"Kac-Walton = Verlinde {c}", ok, f"invariants {inv}", resid)

    # 3 ---------------------------------------------------------------------------
    def c3_fusion_lists(self):
        for name, (levels, lists) in LEVEL_LISTS.items():
            rank = int(name[1:])
            for text in lists:
                factors, terms = _parse_level_list(rank, text)
                label = text.split("=")[0].strip()
                checked = []
                for k in levels:
                    c = ctx(name, k)
                    if any(f not in c.index for f in factors):
                        continue
                    got = _product(c, self.table(c).N, factors)
                    want = _expected_vector(c, terms)
                    ok = want is not None and np.array_equal(got, want)
                    checked.append(k)
                    if not ok:
                        diff = {format_weight(c.pplus[i]): int(got[i])
                                for i in np.flatnonzero(got)}
                        self.add(3, f"{name} {label} at k={k}", False, f"computed {diff}")
                    else:
                        self.add(3, f"{name} {label} at k={k}", True)
                if not checked:
                    self.add(3, f"{name} {label}", True, "factors outside the desk levels; skipped")
        for c in desk_suite():
            N = self.table(c).N
            for label, factors, terms in _generic_lists(c):
                got = _product(c, N, [tuple(f) for f in factors])
                want = np.zeros(c.n, dtype=np.int64)
                for w in terms:
                    if min(w) >= 0:
                        want[c.index[tuple(w)]] += 1
                self.add(3, f"{c} {label}", np.array_equal(got, want))

    # 4 ---------------------------------------------------------------------------
    EXPECTED_COUNTS = {("A1", 2): 2, ("A1", 3): 1, ("A2", 2): 4, ("A2", 3): 6, ("B3", 2): 6,
                       ("B3", 3): 2, ("C2", 2): 4, ("C2", 3): 2, ("D4", 2): 24, ("D4", 1): 6,
                       ("E7", 2): 2, ("E7", 3): 3, ("E8", 4): 2, ("E8", 5): 2, ("F4", 3): 2,
                       ("F4", 4): 4, ("G2", 3): 3, ("G2", 4): 2}

    def c4_automorphisms(self):
        groups = {}
        for c in desk_suite():
            T, S = self.table(c), smatrix(c)
            found = enumerate_automorphisms(c, T, S, self.search_bound)
            expect = expected_automorphisms(c, T, S)
            groups[(str(c.id), c.level)] = found
            same = [g.key() for g in found] == [g.key() for g in expect]
            self.add(4, f"search = constructed group {c}", same,
                     f"search {len(found)}, constructed {len(expect)}")
            if c.id.family == "D" and c.rank % 2 == 0:
                cur = simple_currents(c, S)
                listed = sorted(M for M, _ in d_even_admissible(c.rank, c.level))
                valid = [M for M in d_even_bijective_matrices(c, cur)
                         if is_fusion_symmetry(T, sc_matrix_permutation(c, cur, M))]
                self.add(4, f"D matrix parameters {c}", listed == valid,
                         f"listed {len(listed)}, valid {len(valid)}")
        for (name, k), n in self.EXPECTED_COUNTS.items():
            got = len(groups[(name, k)])
            self.add(4, f"|A({name},k={k})| = {n}", got == n, f"found {got}")
        # structural claims
        e6 = ctx("E6", 2)
        self.add(4, "E6 k=2 group matches its construction",
                 [g.key() for g in groups[("E6", 2)]]
                 == [g.key() for g in expected_automorphisms(e6, self.table(e6), smatrix(e6))])
        self.add(4, "A(C2,3) isomorphic to A(C3,2)",
                 _group_signature(groups[("C2", 3)]) == _group_signature(groups[("C3", 2)]))
        f44 = ctx("F4", 4)
        g = groups[("F4", 4)]
        orders = sorted(x.order() for x in g)
        pi5 = galois_automorphism(f44, smatrix(f44), self.table(f44), 5)
        squares = {tuple(x.perm[x.perm].tolist()) for x in g if x.order() == 4}
        self.add(4, "A(F4,4) cyclic of order 4 with square pi{5}",
                 orders == [1, 2, 4, 4] and pi5 is not None and squares == {pi5.key()})
        for name, k, pairs in (("E8", 4, [("L1", "L6")]),
                               ("E8", 5, [("L7", "2L1"), ("L8", "L1+L2"), ("L6", "L2+L7")])):
            c = ctx(name, k)
            p = np.arange(c.n)
            for a, b in pairs:
                i, j = c.index_of(a), c.index_of(b)
                p[i], p[j] = j, i
            keys = [x.key() for x in groups[(name, k)]]
            self.add(4, f"{name} k={k} exceptional symmetry present", tuple(p.tolist()) in keys)

    # 5 ---------------------------------------------------------------------------
    def _context_of(self, triple):
        fam, rank, level = triple
        return level_context(AlgebraId(fam, rank), level)

    def c5_isomorphisms(self):
        for a, b in expected_isomorphic_pairs():
            ca, cb = self._context_of(a), self._context_of(b)
            p = find_isomorphism(ca, self.table(ca), cb, self.table(cb), bound=self.search_bound)
            self.add(5, f"{ca} ~ {cb}", p is not None)
        for c in desk_suite():
            if c.id.family == "C" or str(c.id) == "A1":
                target, tau = rank_level_tau(c)
                ok = is_fusion_isomorphism(self.table(c), self.table(target), tau)
                St, Sc = smatrix(target), smatrix(c)
                s_ok = np.abs(St.entries[np.ix_(tau, tau)] - Sc.entries).max() < STRUCT_TOL
                self.add(5, f"rank-level tau {c} -> {target}", ok and s_ok)
        # A1,k ~ C_{k,1}: a L1 -> L_a
        for k in range(2, 6):
            ca, cb = ctx("A1", k), ctx(f"C{k}", 1)
            p = np.array([0 if a == 0 else cb.index_of(f"L{a}") for (a,) in ca.pplus])
            self.add(5, f"A1,{k} -> C{k},1 via a L1 -> L_a",
                     is_fusion_isomorphism(self.table(ca), self.table(cb), p))
        self._anchored("F4", 2, "E8", 3, [("L1", "L8"), ("2L4", "L2"), ("L3", "L1"), ("L4", "L7")],
                       complete=False)
        self._anchored("F4", 3, "G2", 4, [("L4", "L1"), ("L1", "2L1"), ("L3", "3L2"), ("2L4", "2L2"),
                                          ("L1+L4", "L1+2L2"), ("L2", "4L2"), ("3L4", "L2"),
                                          ("L3+L4", "L1+L2")], complete=True)
        self._negatives_and_completeness()

    def _anchored(self, fa, ka, fb, kb, pairs, complete: bool):
        ca, cb = ctx(fa, ka), ctx(fb, kb)
        Ta, Tb = self.table(ca), self.table(cb)
        D = np.zeros((ca.n, cb.n), dtype=bool)
        D[:] = True
        D[0, :] = False
        D[:, 0] = False
        D[0, 0] = True
        for x, y in pairs:
            i, j = ca.index_of(x), cb.index_of(y)
            D[i, :] = False
            D[:, j] = False
            D[i, j] = True
        if complete:
            p = D.argmax(axis=1)
            ok = is_fusion_isomorphism(Ta, Tb, p)
        else:
            ok = bool(find_bijections(Ta.N, Tb.N, D, limit=1, bound=self.search_bound))
        self.add(5, f"{ca} ~ {cb} with the stated correspondence", ok)

    def _negatives_and_completeness(self):
        contexts = desk_suite()
        expected = {frozenset((a, b)) for a, b in expected_isomorphic_pairs()}
        by_n: dict = {}
        for c in contexts:
            by_n.setdefault(c.n, []).append(c)
        negatives = 0
        for group in by_n.values():
            for ca, cb in itertools.combinations(group, 2):
                key = frozenset((ca.key(), cb.key()))
                fa = fingerprint(ca, smatrix(ca), self.table(ca))
                fb = fingerprint(cb, smatrix(cb), self.table(cb))
                same = fingerprints_match(fa, fb)
                if same:
                    p = find_isomorphism(ca, self.table(ca), cb, self.table(cb),
                                         bound=self.search_bound)
                    self.add(5, f"completeness {ca} vs {cb}", (p is not None) == (key in expected),
                             "isomorphic" if p is not None else "not isomorphic")
                elif key not in expected:
                    p = find_isomorphism(ca, self.table(ca), cb, self.table(cb), force=True,
                                         bound=self.search_bound)
                    negatives += p is None
                    self.add(5, f"negative {ca} vs {cb}", p is None)
                else:
                    self.add(5, f"fingerprint of expected pair {ca} vs {cb}", False)
        self.add(5, "at least 20 negative pairs", negatives >= 20, f"{negatives} pairs")

    # 6 ---------------------------------------------------------------------------
    STAR = {"A": "L1", "B": "L1", "C": "L1", "D": "L1", "E6": "L1", "E7": "L6", "E8": "L1",
            "F": "L4", "G": "L2"}
    PROP_CASES = [("A3", k) for k in range(1, 6)] + [("B3", 3), ("C3", 3), ("D4", 3), ("E6", 2),
                                                    ("E8", 3), ("E8", 5), ("F4", 2), ("G2", 2)]
    EQUALITIES = [("B3", 2, ["L1", "L2", "2L3"]), ("B4", 2, ["L1", "L2", "L3", "2L4"]),
                  ("C2", 3, ["L2", "3L1", "L1"]), ("E7", 3, ["L1", "L2", "L6"]),
                  ("E8", 4, ["L1", "L6"]), ("F4", 3, ["L2", "L4"]),
                  ("F4", 4, ["L1", "2L1", "4L4", "L4"]), ("G2", 3, ["L1", "L2", "3L2"]),
                  ("G2", 4, ["L2", "2L1"])]

    def c6_qdims(self):
        for name, k in self.PROP_CASES:
            c = ctx(name, k)
            star = c.index_of(self.STAR[name] if name in self.STAR else self.STAR[name[0]])
            orbit = _diagram_orbit(c, star)
            D = qdims(c)
            level_set = set(np.flatnonzero(np.abs(D - D[star]) < QDIM_TOL).tolist())
            minimal = {c.index[w] for w in qdim_minimal_orbit(c)}
            is_current = abs(D[star] - 1) < QDIM_TOL
            self.add(6, f"q-dimension class of the distinguished weight is its orbit {c}",
                     level_set == orbit, f"class {sorted(level_set)}, orbit {sorted(orbit)}")
            named = sorted(format_weight(c.pplus[i]) for i in minimal)
            self.add(6, f"minimal non-current class is the distinguished orbit {c}",
                     is_current or minimal == orbit, f"minimal class {named}")
        for name, k, weights in self.EQUALITIES:
            c = ctx(name, k)
            D = qdims(c)
            vals = [D[c.index_of(w)] for w in weights]
            spread = max(vals) - min(vals)
            self.add(6, f"{name} k={k}: equal q-dimensions {', '.join(weights)}",
                     spread < STRUCT_TOL, residual=spread)

    # 7 ---------------------------------------------------------------------------
    def c7_galois(self):
        for name, k in (("A2", 3), ("B3", 2), ("E8", 4), ("F4", 3), ("G2", 4)):
            c = ctx(name, k)
            S, T = smatrix(c), self.table(c)
            currents = simple_currents(c, S)
            D = S.qdims()
            worst = 0.0
            exist_ok = True
            commute_ok = True
            for ell in coprime_residues(c):
                g = galois_perm(c, S, ell)
                worst = max(worst, galois_residual(S, g))
                auto = galois_automorphism(c, S, T, ell, currents)
                is_sc = abs(D[int(g.perm[0])] - 1) < QDIM_TOL
                if is_sc != (auto is not None):
                    exist_ok = False
                if auto is not None and not is_fusion_symmetry(T, auto.perm):
                    exist_ok = False
                for sc in currents:
                    if not np.array_equal(g.perm[sc.perm], sc.power(ell)[g.perm]):
                        commute_ok = False
            self.add(7, f"Galois identity {c}", worst < STRUCT_TOL, residual=worst)
            self.add(7, f"pi{{ell}} exists iff 0^(ell) is a current {c}", exist_ok)
            self.add(7, f"Galois permutations commute with currents {c}", commute_ok)

    # 8 ---------------------------------------------------------------------------
    GENUS_CONTEXTS = [("A1", 4), ("A2", 3), ("C3", 2), ("E7", 3), ("G2", 4)]

    def c8_genus(self):
        rng = random.Random(self.seed)
        for name, k in self.GENUS_CONTEXTS:
            c = ctx(name, k)
            S, T = smatrix(c), self.table(c)
            worst = 0.0
            ok = True
            for g in range(4):
                for t in range(4):
                    for _ in range(5):
                        punct = [rng.randrange(c.n) for _ in range(t)]
                        z = verlinde_genus_value(S, g, punct)
                        v = round(z.real)
                        worst = max(worst, abs(z - v))
                        ok &= v >= 0
            Cp = charge_conjugation_perm(c)
            g0 = all(verlinde_genus(S, 0, (a, b, int(Cp[cc]))) == T.N[a, b, cc]
                     for a in range(c.n) for b in range(c.n) for cc in range(c.n))
            self.add(8, f"genus values integral {c}", ok and worst < ROUND_TOL, residual=worst)
            self.add(8, f"genus 0 with three punctures reproduces fusion {c}", g0)
            self.add(8, f"genus 1 without punctures counts P+ {c}",
                     verlinde_genus(S, 1) == c.n)


def _group_signature(group: list[FusionSymmetry]) -> tuple:
    return (len(group), tuple(sorted(g.order() for g in group)))


def _diagram_orbit(c: LevelContext, start: int) -> set:
    """Orbit of an index under simple currents and conjugations."""
    gens = [sc.perm for sc in simple_currents(c, smatrix(c))] + conjugations(c)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for p in gens:
                y = int(p[x])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def run_suite(criteria=None, **kwargs) -> SuiteReport:
    return Runner(**kwargs).run(criteria)
