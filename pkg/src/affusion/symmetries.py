"""Fusion-ring symmetries: explicit constructions checked against exhaustive search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .characters import SMatrix, smatrix
from .errors import (InternalConsistencyError, InvalidAlgebraError, NotAPermutationError,
                     VerificationError)
from .fusion import FusionTable, build_table
from .liealg import AlgebraId, affine_fold
from .search import DEFAULT_SEARCH_BOUND, find_bijections, initial_domains, signatures
from .weights import (LevelContext, QDIM_TOL, SimpleCurrent, charge_conjugation_perm,
                      conjugations, level_context, parse_weight, perm_order, simple_currents)

S_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FusionSymmetry:
    perm: np.ndarray
    provenance: str
    partner: np.ndarray | None = None

    def key(self) -> tuple:
        return tuple(int(x) for x in self.perm)

    def __mul__(self, other: "FusionSymmetry") -> "FusionSymmetry":
        """Composition: (self * other)(x) = self(other(x))."""
        partner = None
        if self.partner is not None and other.partner is not None:
            partner = self.partner[other.partner]
        return FusionSymmetry(self.perm[other.perm], f"{self.provenance}*{other.provenance}",
                              partner)

    def order(self) -> int:
        return perm_order(self.perm)

    def cycles(self) -> str:
        """One-line cycle notation over canonical P+ indices."""
        seen = set()
        parts = []
        for start in range(len(self.perm)):
            if start in seen or int(self.perm[start]) == start:
                continue
            cyc = [start]
            seen.add(start)
            x = int(self.perm[start])
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = int(self.perm[x])
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"


@dataclass(frozen=True, eq=False)
class GaloisPermutation:
    ell: int
    perm: np.ndarray
    signs: np.ndarray


def _is_perm(p: np.ndarray, n: int) -> bool:
    return len(p) == n and len(set(int(x) for x in p)) == n and min(p) == 0 and max(p) == n - 1


def is_fusion_symmetry(table: FusionTable, perm) -> bool:
    p = np.asarray(perm, dtype=np.int64)
    if not _is_perm(p, table.n) or p[0] != 0:
        return False
    return bool(np.array_equal(table.N[np.ix_(p, p, p)], table.N))


def is_fusion_isomorphism(tableA: FusionTable, tableB: FusionTable, perm) -> bool:
    p = np.asarray(perm, dtype=np.int64)
    if tableA.n != tableB.n or not _is_perm(p, tableA.n) or p[0] != 0:
        return False
    return bool(np.array_equal(tableB.N[np.ix_(p, p, p)], tableA.N))


def s_partner(S: SMatrix, perm, tol: float = 1e-7) -> np.ndarray:
    """The column permutation p' with S[p[l], p'[m]] = S[l, m] for all l, m."""
    M = S.entries
    p = np.asarray(perm, dtype=np.int64)
    Sp = M[p, :]            # Sp[l, x] = S[p[l], x]
    out = np.empty(len(p), dtype=np.int64)
    for mu in range(len(p)):
        dist = np.abs(Sp - M[:, mu][:, None]).max(axis=0)
        hit = np.flatnonzero(dist < tol)
        if len(hit) != 1:
            raise VerificationError(f"no unique S-partner column for index {mu}")
        out[mu] = hit[0]
    return out


def _verified(table: FusionTable, perm, provenance: str, S: SMatrix | None = None) -> FusionSymmetry:
    perm = np.asarray(perm, dtype=np.int64)
    if not is_fusion_symmetry(table, perm):
        raise VerificationError(f"{provenance} is not a fusion-symmetry of {table.ctx}")
    partner = s_partner(S, perm) if S is not None else None
    return FusionSymmetry(perm, provenance, partner)


# -- Galois permutations -------------------------------------------------------

def galois_perm(ctx: LevelContext, S: SMatrix | None, ell: int) -> GaloisPermutation:
    data = ctx.algebra
    modulus = ctx.kappa * data.conductor
    if math.gcd(ell, modulus) != 1:
        raise ValueError(f"ell={ell} is not coprime to kappa*N={modulus}")
    perm = np.empty(ctx.n, dtype=np.int64)
    signs = np.empty(ctx.n, dtype=np.int64)
    for i, lam in enumerate(ctx.pplus):
        res = affine_fold(data, ctx.kappa, [ell * (x + 1) for x in lam])
        if res.det_sign == 0:
            raise InternalConsistencyError(f"Galois image of {lam} for ell={ell} hit a wall")
        perm[i] = ctx.index_of([x - 1 for x in res.weight])
        signs[i] = res.det_sign
    if len(set(perm.tolist())) != ctx.n:
        raise InternalConsistencyError(f"Galois map for ell={ell} is not a bijection")
    g = GaloisPermutation(ell, perm, signs)
    if S is not None and galois_residual(S, g) > 1e-7:
        raise InternalConsistencyError(f"Galois identity fails for ell={ell} in {ctx}")
    return g


def galois_residual(S: SMatrix, g: GaloisPermutation) -> float:
    """max |eps(l) S[l^(ell), m] - eps(m) S[l, m^(ell)]|."""
    M = S.entries
    lhs = g.signs[:, None] * M[g.perm, :]
    rhs = g.signs[None, :] * M[:, g.perm]
    return float(np.abs(lhs - rhs).max())


def coprime_residues(ctx: LevelContext, upper: int | None = None) -> list[int]:
    m = ctx.kappa * ctx.algebra.conductor
    upper = upper or 2 * m
    return [l for l in range(1, upper) if math.gcd(l, m) == 1]


def galois_automorphism(ctx: LevelContext, S: SMatrix, table: FusionTable, ell: int,
                        currents: list[SimpleCurrent] | None = None) -> FusionSymmetry | None:
    """pi{ell}: lam -> J(lam^(ell)) with J sending 0^(ell) back to 0, when 0^(ell) is a current."""
    g = galois_perm(ctx, S, ell)
    z = int(g.perm[0])
    if abs(S.qdims()[z] - 1) >= QDIM_TOL:
        return None
    currents = currents if currents is not None else simple_currents(ctx, S)
    for sc in currents:
        if int(sc.perm[0]) == z:
            inv = np.argsort(sc.perm)
            if sc.order > 2:
                raise InternalConsistencyError(f"Galois current of order {sc.order} for ell={ell}")
            return _verified(table, inv[g.perm], f"galois({ell})", S)
    raise InternalConsistencyError(f"0^({ell}) has q-dimension 1 but is not a known current")


# -- simple-current automorphisms --------------------------------------------

def _generator_current(ctx: LevelContext, currents: list[SimpleCurrent]) -> SimpleCurrent:
    fam, r, k = ctx.id.family, ctx.rank, ctx.level
    rep = [0] * r
    if fam in "AB":
        rep[0] = k
    elif fam in "CD":
        rep[r - 1] = k
    elif fam == "E" and r == 6:
        rep[0] = k
    elif fam == "E" and r == 7:
        rep[5] = k
    else:
        raise InvalidAlgebraError(f"{ctx.id} has no simple-current automorphisms")
    for sc in currents:
        if sc.rep == tuple(rep):
            return sc
    raise InternalConsistencyError(f"no current with representative {rep} in {ctx}")


def _exponent(q, n: int) -> int:
    v = q * n
    if v.denominator != 1:
        raise InternalConsistencyError(f"n*Q = {v} is not an integer")
    return int(v) % n


def sc_permutation(j: SimpleCurrent, a: int) -> np.ndarray:
    n = j.order
    powers = [j.power(m) for m in range(n)]
    return np.array([powers[(_exponent(j.charge[lam], n) * a) % n][lam]
                     for lam in range(len(j.perm))], dtype=np.int64)


def sc_valid(j: SimpleCurrent, a: int) -> bool:
    n = j.order
    return math.gcd(_exponent(j.charge[j.index], n) * a + 1, n) == 1


def sc_partner_parameter(j: SimpleCurrent, a: int) -> int:
    n = j.order
    t = _exponent(j.charge[j.index], n) * a + 1
    return (-a * pow(t, -1, n)) % n if n > 1 else 0


def sc_automorphism(ctx: LevelContext, table: FusionTable, j: SimpleCurrent, a: int,
                    S: SMatrix | None = None) -> FusionSymmetry:
    if not sc_valid(j, a):
        raise NotAPermutationError(f"pi[{a}] violates the gcd condition for a current of order {j.order}")
    perm = sc_permutation(j, a)
    sym = _verified(table, perm, f"sc[{a % j.order}]", S)
    if S is not None:
        b = sc_partner_parameter(j, a)
        if not np.array_equal(sym.partner, sc_permutation(j, b)):
            raise VerificationError(f"partner of pi[{a}] is not pi[{b}]")
    return sym


def _d_currents(ctx: LevelContext, currents: list[SimpleCurrent]):
    r, k = ctx.rank, ctx.level
    jv = next(sc for sc in currents if sc.rep == (k,) + (0,) * (r - 1))
    js = next(sc for sc in currents if sc.rep == (0,) * (r - 1) + (k,))
    return jv, js


def sc_matrix_permutation(ctx: LevelContext, currents: list[SimpleCurrent], M) -> np.ndarray:
    (a, b), (c, d) = M
    jv, js = _d_currents(ctx, currents)
    out = np.empty(ctx.n, dtype=np.int64)
    for lam in range(ctx.n):
        qv2 = 2 * jv.charge[lam]
        qs2 = 2 * js.charge[lam]
        ev = a * qv2 + b * qs2
        es = c * qv2 + d * qs2
        if ev.denominator != 1 or es.denominator != 1:
            raise InternalConsistencyError("non-integral exponent in matrix automorphism")
        out[lam] = jv.power(int(ev))[js.power(int(es))[lam]]
    return out


def d_even_admissible(r: int, k: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Parameter matrices (mod 2) with their partner matrices for D_{even rank}."""
    h = r // 2
    out = []
    if k % 2 == 0:
        for a, b, c, d in itertools.product((0, 1), repeat=4):
            out.append((((a, b), (c, d)), ((a, c), (b, d))))
        return out
    for a, d in itertools.product((0, 1), repeat=2):
        if a == h % 2 or d == 0:
            M = ((a, 0), (0, d))
            P = ((a * (d + 1) % 2, d * h % 2), (d * h % 2, d))
            out.append((M, P))
    for b, c in itertools.product((0, 1), repeat=2):
        if b == 1 or c == 1:
            M = (((h + 1) % 2, b), (c, 1))
            P = (((h + 1 + b * c * h) % 2, (b + h) % 2), ((h + 1 + b * c + b) % 2, 1))
            out.append((M, P))
    return out


def sc_automorphism_matrix(ctx: LevelContext, table: FusionTable, M, S: SMatrix | None = None,
                           currents: list[SimpleCurrent] | None = None) -> FusionSymmetry:
    if ctx.id.family != "D" or ctx.rank % 2:
        raise InvalidAlgebraError("matrix simple-current automorphisms need D of even rank")
    M = tuple(tuple(int(x) % 2 for x in row) for row in M)
    adm = dict(d_even_admissible(ctx.rank, ctx.level))
    if M not in adm:
        raise NotAPermutationError(f"{M} is not admissible for {ctx}")
    if currents is None:
        currents = simple_currents(ctx, S if S is not None else smatrix(ctx))
    perm = sc_matrix_permutation(ctx, currents, M)
    if not _is_perm(perm, ctx.n):
        raise NotAPermutationError(f"{M} does not give a permutation of P+")
    sym = _verified(table, perm, f"sc{list(map(list, M))}", S)
    if S is not None:
        expect = sc_matrix_permutation(ctx, currents, adm[M])
        if not np.array_equal(sym.partner, expect):
            raise VerificationError(f"partner of {M} is not {adm[M]}")
    return sym


def d_even_bijective_matrices(ctx: LevelContext, currents: list[SimpleCurrent]) -> list:
    """All 2x2 matrices mod 2 for which the matrix formula permutes P+."""
    out = []
    for a, b, c, d in itertools.product((0, 1), repeat=4):
        M = ((a, b), (c, d))
        if _is_perm(sc_matrix_permutation(ctx, currents, M), ctx.n):
            out.append(M)
    return out


# -- rank-level duality --------------------------------------------------------

def _as_c(ctx: LevelContext) -> tuple[int, int]:
    fam, r = ctx.id.family, ctx.rank
    if fam == "C" or (fam == "A" and r == 1):
        return r, ctx.level
    raise InvalidAlgebraError(f"rank-level duality needs a C algebra (or A1), got {ctx.id}")


def _c_context(r: int, k: int) -> LevelContext:
    return level_context(AlgebraId("A", 1) if r == 1 else AlgebraId("C", r), k)


def rank_level_tau(ctx: LevelContext) -> tuple[LevelContext, np.ndarray]:
    """Young-diagram transpose P+(C_{r,k}) -> P+(C_{k,r})."""
    r, k = _as_c(ctx)
    target = _c_context(k, r)
    perm = np.empty(ctx.n, dtype=np.int64)
    for i, lam in enumerate(ctx.pplus):
        rows = [sum(lam[l:]) for l in range(r)]
        cols = [sum(1 for x in rows if x > j) for j in range(k)]
        labels = [cols[j] - (cols[j + 1] if j + 1 < k else 0) for j in range(k)]
        perm[i] = target.index_of(labels)
    return target, perm


# -- exceptional catalog -------------------------------------------------------

_CYCLES = {
    ("E", 8, 4): ["L1 L6"],
    ("E", 8, 5): ["L7 2L1", "L8 L1+L2", "L6 L2+L7"],
    ("F", 4, 3): ["L2 L4", "L1 3L4"],
    ("F", 4, 4): ["L4 L1 2L1 4L4", "L2 2L3 3L4 L3", "L1+L3 L3+2L4 L1+L4 L1+2L4"],
    ("G", 2, 3): ["L1 3L2 L2"],
    ("G", 2, 4): ["L1 4L2", "2L1 L2"],
}


def _perm_from_cycles(ctx: LevelContext, cycles: Iterable[Sequence[int]]) -> np.ndarray:
    perm = np.arange(ctx.n)
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    if not _is_perm(perm, ctx.n):
        raise VerificationError("catalog cycles overlap")
    return perm


def exceptional_catalog(ctx: LevelContext, table: FusionTable | None = None,
                        S: SMatrix | None = None) -> list[FusionSymmetry]:
    key = ctx.key()
    if key == ("E", 7, 3):
        S = S or smatrix(ctx)
        J = _generator_current(ctx, simple_currents(ctx, S))
        cycles = []
        for i in range(2):
            Ji = J.power(i)
            cycles.append([int(Ji[ctx.index_of(parse_weight(7, w))]) for w in ("L1", "2L6", "L2")])
    elif key in _CYCLES:
        cycles = [[ctx.index_of(parse_weight(ctx.rank, w)) for w in spec.split()]
                  for spec in _CYCLES[key]]
    else:
        return []
    table = table or build_table(ctx)
    name = {("E", 8, 4): "pi4", ("E", 8, 5): "pi5", ("F", 4, 4): "pi4"}.get(key, "pi3")
    if key == ("G", 2, 4):
        name = "pi4"
    return [_verified(table, _perm_from_cycles(ctx, cycles), f"exceptional({name})", S)]


# -- groups --------------------------------------------------------------------

def group_closure(gens: Sequence[FusionSymmetry], n: int) -> list[FusionSymmetry]:
    ident = FusionSymmetry(np.arange(n), "id", np.arange(n))
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = h * g
                if p.key() not in seen:
                    seen[p.key()] = p
                    nxt.append(p)
        frontier = nxt
    return sorted(seen.values(), key=FusionSymmetry.key)


def unit_orders(N: np.ndarray) -> np.ndarray:
    """Order of each invertible basis element (0 for non-units), from the ring alone."""
    n = N.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for x in range(n):
        if (N[x].sum(axis=1) == 1).all():
            out[x] = perm_order(N[x].argmax(axis=1))
    return out


def enumerate_automorphisms(ctx: LevelContext, table: FusionTable, S: SMatrix,
                            bound: int = DEFAULT_SEARCH_BOUND) -> list[FusionSymmetry]:
    """Every fusion-symmetry, by exhaustive backtracking."""
    sig = signatures(table.N, unit_orders(table.N))
    qd = S.qdims()
    D = initial_domains(sig, sig, qd, qd, QDIM_TOL)
    perms = find_bijections(table.N, table.N, D, bound=bound)
    return [FusionSymmetry(p, "search", s_partner(S, p)) for p in perms]


def expected_generators(ctx: LevelContext, table: FusionTable, S: SMatrix) -> list[FusionSymmetry]:
    """Generators of the full symmetry group, as classified for this algebra and level."""
    fam, r, k = ctx.id.family, ctx.rank, ctx.level
    gens: list[FusionSymmetry] = []
    C = charge_conjugation_perm(ctx)
    currents = simple_currents(ctx, S)

    if fam == "A":
        J = _generator_current(ctx, currents)
        for a in range(r + 1):
            if math.gcd(1 + k * a, r + 1) == 1:
                gens.append(sc_automorphism(ctx, table, J, a, S))
        if r > 1 and k > 1:
            gens.append(_verified(table, C, "C", S))
    elif fam == "B":
        gens.append(sc_automorphism(ctx, table, _generator_current(ctx, currents), 1, S))
        if k == 2:
            for m in range(1, r + 1):
                if math.gcd(m, ctx.kappa) == 1:
                    g = galois_automorphism(ctx, S, table, _coprime_lift(ctx, m), currents)
                    if g is None:
                        raise VerificationError(f"pi{{{m}}} missing for {ctx}")
                    gens.append(g)
    elif fam == "C":
        J = _generator_current(ctx, currents)
        if k % 2 == 0 or r % 2 == 0:
            gens.append(sc_automorphism(ctx, table, J, 1, S))
        if k == r:
            _, tau = rank_level_tau(ctx)
            gens.append(_verified(table, tau, "rank-level", S))
    elif fam == "D":
        conj = [_verified(table, p, "conj", S) for p in conjugations(ctx)]
        if k == 2 and r > 4:
            gens.append(conj[1])
            gens.append(_pi_v(ctx, table, S, currents))
            for m in range(1, r):
                if math.gcd(m, 2 * r) == 1:
                    g = galois_automorphism(ctx, S, table, _coprime_lift(ctx, m), currents)
                    if g is None:
                        raise VerificationError(f"pi{{{m}}} missing for {ctx}")
                    gens.append(g)
        else:
            gens.extend(conj)
            gens.extend(d_simple_current_automorphisms(ctx, table, S, currents))
    elif fam == "E" and r == 6:
        J = _generator_current(ctx, currents)
        for a in range(3):
            if (a * k) % 3 != 1:
                gens.append(sc_automorphism(ctx, table, J, a, S))
        gens.append(_verified(table, C, "C", S))
    elif fam == "E" and r == 7:
        if k % 2 == 0:
            gens.append(sc_automorphism(ctx, table, _generator_current(ctx, currents), 1, S))
        gens.extend(exceptional_catalog(ctx, table, S))
    else:
        gens.extend(exceptional_catalog(ctx, table, S))
    return gens


def _coprime_lift(ctx: LevelContext, m: int) -> int:
    """An integer congruent to m mod kappa that is coprime to kappa*N."""
    modulus = ctx.kappa * ctx.algebra.conductor
    x = m
    while math.gcd(x, modulus) != 1:
        x += ctx.kappa
    return x


def _pi_v(ctx, table, S, currents) -> FusionSymmetry:
    if ctx.rank % 2:
        return sc_automorphism(ctx, table, _generator_current(ctx, currents), 2, S)
    return sc_automorphism_matrix(ctx, table, ((1, 0), (0, 0)), S, currents)


def d_simple_current_automorphisms(ctx, table, S, currents) -> list[FusionSymmetry]:
    if ctx.rank % 2:
        J = _generator_current(ctx, currents)
        return [sc_automorphism(ctx, table, J, a, S) for a in range(J.order) if sc_valid(J, a)]
    return [sc_automorphism_matrix(ctx, table, M, S, currents)
            for M, _ in d_even_admissible(ctx.rank, ctx.level)]


def expected_automorphisms(ctx: LevelContext, table: FusionTable, S: SMatrix) -> list[FusionSymmetry]:
    return group_closure(expected_generators(ctx, table, S), ctx.n)


def fusion_generators(ctx: LevelContext) -> list[int]:
    """Indices of the fundamental weights present in P+."""
    out = []
    for i in range(ctx.rank):
        lam = [0] * ctx.rank
        lam[i] = 1
        if tuple(lam) in ctx.index:
            out.append(ctx.index[tuple(lam)])
    return out
