"""Level-k highest weights with their conjugations and simple currents."""
from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (InconsistentChargeError, InvalidAlgebraError, InvalidWeightError,
                     NotAPermutationError)
from .liealg import AlgebraData, AlgebraId, algebra_data

Weight = tuple  # Dynkin labels lambda_1..lambda_r

QDIM_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class LevelContext:
    algebra: AlgebraData
    level: int
    kappa: int
    pplus: tuple[Weight, ...]
    index: dict = field(repr=False)
    index_of_zero: int = 0

    @property
    def id(self) -> AlgebraId:
        return self.algebra.id

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def n(self) -> int:
        return len(self.pplus)

    def __len__(self):
        return len(self.pplus)

    def __str__(self):
        return f"{self.algebra.id}k{self.level}"

    def key(self) -> tuple:
        return (self.id.family, self.id.rank, self.level)

    def extended(self, lam: Sequence[int]) -> tuple[int, ...]:
        lam0 = self.level - sum(a * x for a, x in zip(self.algebra.comarks[1:], lam))
        return (lam0,) + tuple(lam)

    def index_of(self, lam) -> int:
        if isinstance(lam, str):
            lam = parse_weight(self.rank, lam)
        lam = tuple(int(x) for x in lam)
        try:
            return self.index[lam]
        except KeyError:
            raise InvalidWeightError(f"{format_weight(lam)} is not in P+ of {self}") from None

    def labels_array(self) -> np.ndarray:
        return np.array(self.pplus, dtype=np.int64).reshape(self.n, self.rank)


def _solutions(comarks: Sequence[int], k: int):
    """Nonnegative integer vectors x with sum comarks[i]*x[i] <= k."""
    if not comarks:
        yield ()
        return
    a = comarks[0]
    for x in range(k // a + 1):
        for rest in _solutions(comarks[1:], k - a * x):
            yield (x,) + rest


def enumerate_pplus(algebra: AlgebraData, k: int) -> LevelContext:
    if not isinstance(k, int) or k < 1:
        raise InvalidWeightError(f"level must be a positive integer, got {k!r}")
    weights = sorted(_solutions(algebra.comarks[1:], k))
    return LevelContext(algebra=algebra, level=k, kappa=k + algebra.dual_coxeter,
                        pplus=tuple(weights), index={w: i for i, w in enumerate(weights)})


@lru_cache(maxsize=None)
def level_context(aid: AlgebraId, k: int) -> LevelContext:
    return enumerate_pplus(algebra_data(aid), k)


def context(token: str | AlgebraId, k: int | None = None) -> LevelContext:
    """Build a context from ``"A3k4"`` or from an algebra name plus level."""
    if isinstance(token, AlgebraId):
        return level_context(token, k)
    m = re.fullmatch(r"\s*([A-Ga-g]\d+)\s*(?:[kK,:\s]\s*(\d+))?\s*", token)
    if not m or (m.group(2) is None and k is None):
        raise InvalidAlgebraError(f"cannot parse context {token!r}; expected e.g. 'A3k4'")
    level = int(m.group(2)) if m.group(2) is not None else k
    return level_context(AlgebraId.parse(m.group(1)), level)


# -- weight notation ---------------------------------------------------------

_TERM = re.compile(r"^(\d*)\s*\*?\s*[LΛ]\s*_?\s*(\d+)$")


def parse_weight(rank: int, text: str) -> Weight:
    """Parse ``"2L1+L3"`` (or with Λ) or plain labels ``"2 0 1"``."""
    s = text.strip()
    if s in ("0", ""):
        return (0,) * rank
    if "L" in s or "Λ" in s:
        labels = [0] * rank
        for term in s.replace(" ", "").split("+"):
            m = _TERM.match(term)
            if not m:
                raise InvalidWeightError(f"cannot parse weight term {term!r}")
            i = int(m.group(2))
            if not 1 <= i <= rank:
                raise InvalidWeightError(f"fundamental weight index {i} out of range 1..{rank}")
            labels[i - 1] += int(m.group(1) or 1)
        return tuple(labels)
    parts = re.split(r"[\s,]+", s)
    if len(parts) != rank or not all(p.lstrip("-").isdigit() for p in parts):
        raise InvalidWeightError(f"expected {rank} Dynkin labels, got {text!r}")
    return tuple(int(p) for p in parts)


def format_weight(lam: Sequence[int]) -> str:
    terms = [(f"{x}" if x > 1 else "") + f"L{i + 1}" for i, x in enumerate(lam) if x]
    return "+".join(terms) if terms else "0"


def format_labels(lam: Sequence[int]) -> str:
    return " ".join(str(x) for x in lam)


# -- extended-diagram permutations -------------------------------------------

def _apply_label_perm(ctx: LevelContext, p: Sequence[int]) -> np.ndarray:
    """Index permutation induced by new[i] = old[p[i]] on extended labels."""
    out = np.empty(ctx.n, dtype=np.int64)
    for idx, lam in enumerate(ctx.pplus):
        ext = ctx.extended(lam)
        new = tuple(ext[p[i]] for i in range(1, len(ext)))
        j = ctx.index.get(new)
        if j is None or ctx.extended(new)[0] != ext[p[0]]:
            raise NotAPermutationError(f"label permutation {p} does not preserve P+ of {ctx}")
        out[idx] = j
    return out


def _conjugation_label_perms(aid: AlgebraId) -> list[tuple[int, ...]]:
    r = aid.rank
    ident = tuple(range(r + 1))
    fam = aid.family
    if fam == "A" and r >= 2:
        return [ident, (0,) + tuple(range(r, 0, -1))]
    if fam == "D":
        if r == 4:
            perms = []
            for img in itertools.permutations((1, 3, 4)):
                p = list(ident)
                for src, dst in zip((1, 3, 4), img):
                    p[src] = dst
                perms.append(tuple(p))
            return sorted(perms)
        return [ident, tuple(range(r - 1)) + (r, r - 1)]
    if fam == "E" and r == 6:
        return [ident, (0, 5, 4, 3, 2, 1, 6)]
    return [ident]


def _charge_label_perm(aid: AlgebraId) -> tuple[int, ...]:
    r = aid.rank
    fam = aid.family
    if fam == "A" and r >= 2:
        return (0,) + tuple(range(r, 0, -1))
    if fam == "D" and r % 2 == 1:
        return tuple(range(r - 1)) + (r, r - 1)
    if fam == "E" and r == 6:
        return (0, 5, 4, 3, 2, 1, 6)
    return tuple(range(r + 1))


def _current_label_perms(aid: AlgebraId) -> list[tuple[int, ...]]:
    """Generators of the extended-diagram symmetries that move node 0."""
    r = aid.rank
    fam = aid.family
    if fam == "A":
        return [(r,) + tuple(range(r))]
    if fam == "B":
        return [(1, 0) + tuple(range(2, r + 1))]
    if fam == "C":
        return [tuple(range(r, -1, -1))]
    if fam == "D":
        jv = (1, 0) + tuple(range(2, r - 1)) + (r, r - 1)
        if r % 2 == 0:
            js = tuple(range(r, -1, -1))
        else:
            js = (r - 1, r) + tuple(range(r - 2, -1, -1))
        return [jv, js]
    if fam == "E" and r == 6:
        return [(5, 0, 6, 3, 2, 1, 4)]
    if fam == "E" and r == 7:
        return [(6, 5, 4, 3, 2, 1, 0, 7)]
    return []


def charge_conjugation_perm(ctx: LevelContext) -> np.ndarray:
    return _apply_label_perm(ctx, _charge_label_perm(ctx.id))


def charge_conjugate(ctx: LevelContext, lam: Weight) -> Weight:
    i = ctx.index_of(lam)
    return ctx.pplus[int(charge_conjugation_perm(ctx)[i])]


def conjugations(ctx: LevelContext) -> list[np.ndarray]:
    """Index permutations of the unextended-diagram symmetries (identity first)."""
    perms = [_apply_label_perm(ctx, p) for p in _conjugation_label_perms(ctx.id)]
    return perms


def _closure(gens: list[np.ndarray], n: int) -> list[np.ndarray]:
    ident = np.arange(n)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g[p]
                key = q.tobytes()
                if key not in seen:
                    seen[key] = q
                    nxt.append(q)
        frontier = nxt
    return list(seen.values())


def perm_order(p: np.ndarray) -> int:
    q = p.copy()
    ident = np.arange(len(p))
    order = 1
    while not np.array_equal(q, ident):
        q = p[q]
        order += 1
    return order


# -- simple currents ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimpleCurrent:
    rep: Weight
    index: int
    perm: np.ndarray
    order: int
    charge: tuple[Fraction, ...]   # Q_j(mu) for every mu index, reduced into [0,1)

    def power(self, m: int) -> np.ndarray:
        m %= self.order
        out = np.arange(len(self.perm))
        for _ in range(m):
            out = self.perm[out]
        return out


def _round_charge(x: float, denom: int) -> Fraction:
    q = Fraction(round(x * denom), denom) % 1
    return q


def _charges_from_s(S: np.ndarray, j: int, denom: int) -> tuple[Fraction, ...]:
    ratio = S[j] / S[0]
    out = []
    for mu, z in enumerate(ratio):
        if abs(abs(z) - 1) > QDIM_TOL:
            raise InconsistentChargeError(f"|S_j,mu/S_0,mu| = {abs(z)} != 1 at mu={mu}")
        x = cmath.phase(z) / (2 * math.pi)
        q = _round_charge(x, denom)
        if abs(cmath.exp(2j * math.pi * float(q)) - z) > QDIM_TOL:
            raise InconsistentChargeError(
                f"charge of current {j} at {mu} is not a multiple of 1/{denom}")
        out.append(q)
    return tuple(out)


def _perm_from_s(S: np.ndarray, phases: np.ndarray, tol: float) -> np.ndarray:
    n = S.shape[0]
    target = S * phases[None, :]
    perm = np.empty(n, dtype=np.int64)
    for lam in range(n):
        dist = np.abs(S - target[lam][None, :]).max(axis=1)
        hit = np.flatnonzero(dist < tol)
        if len(hit) != 1:
            raise InconsistentChargeError(f"no unique row matches J applied to row {lam}")
        perm[lam] = hit[0]
    if len(set(perm.tolist())) != n:
        raise NotAPermutationError("row matching did not produce a bijection")
    return perm


def simple_currents(ctx: LevelContext, S) -> list[SimpleCurrent]:
    """All simple currents of ``ctx``, identity first, ordered by P+ index."""
    M = S.entries if hasattr(S, "entries") else np.asarray(S)
    n = ctx.n
    D = M[:, 0].real / M[0, 0].real
    reps = [i for i in range(n) if abs(D[i] - 1) < QDIM_TOL]

    gens = [_apply_label_perm(ctx, p) for p in _current_label_perms(ctx.id)]
    by_image = {}
    for p in _closure(gens, n) if gens else [np.arange(n)]:
        by_image.setdefault(int(p[0]), p)

    N = ctx.algebra.conductor
    out = []
    for j in reps:
        perm = by_image.get(j)
        if perm is not None:
            ratio = M[j] / M[0]
            if np.abs(M[perm] - M * ratio[None, :]).max() > 1e-7:
                perm = None
        if perm is None:
            # anomalous current: match rows of S directly
            perm = _perm_from_s(M, M[j] / M[0], 1e-7)
        order = perm_order(perm)
        charge = _charges_from_s(M, j, order * N * ctx.kappa)
        out.append(SimpleCurrent(rep=ctx.pplus[j], index=j, perm=perm, order=order, charge=charge))

    # closure: products of currents are currents
    idx = {sc.index for sc in out}
    for a in out:
        for b in out:
            if int(a.perm[b.index]) not in idx:
                raise InconsistentChargeError("simple currents do not form a group")
    return out


def current_by_index(currents: list[SimpleCurrent], j: int) -> SimpleCurrent:
    for sc in currents:
        if sc.index == j:
            return sc
    raise InvalidWeightError(f"index {j} is not a simple current")
