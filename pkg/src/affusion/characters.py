"""Characters of integrable highest weights and the modular S-matrix."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InternalConsistencyError, UnitarityError
from .liealg import AlgebraData, AlgebraId, algebra_data, dominant_conjugate, weyl_orbit
from .weights import LevelContext, QDIM_TOL, Weight, charge_conjugation_perm

STRUCT_TOL = 1e-9

# weights with more distinct weights than this are never expanded into full
# weight systems; their S rows and fusion rows are derived by ring recursion
ORBIT_BUDGET = 400_000


def _heights(data: AlgebraData) -> np.ndarray:
    return data.positive_roots_simple.sum(axis=1)


def orbit_size(data: AlgebraData, mu: Sequence[int]) -> int:
    """Size of the Weyl orbit of a dominant weight, via the height product formula."""
    zero = np.array([x == 0 for x in mu])
    roots = data.positive_roots_simple
    h = _heights(data)
    in_stab = ~(roots[:, ~zero] != 0).any(axis=1)
    num = Fraction(1)
    for hh, stab in zip(h, in_stab):
        if not stab:
            num *= Fraction(int(hh) + 1, int(hh))
    if num.denominator != 1:
        raise InternalConsistencyError(f"non-integral orbit size for {mu}")
    return int(num)


@lru_cache(maxsize=4096)
def dominant_weights(aid: AlgebraId, lam: Weight) -> tuple[Weight, ...]:
    """Dominant weights of L(lam), sorted by depth below lam (lam first)."""
    data = algebra_data(aid)
    roots = [tuple(int(x) for x in row) for row in data.positive_roots]
    Ainv = _inverse_cartan(aid)
    seen = {tuple(lam)}
    layer = [tuple(lam)]
    while layer:
        nxt = []
        for mu in layer:
            for a in roots:
                nu = tuple(m - x for m, x in zip(mu, a))
                if min(nu) >= 0 and nu not in seen:
                    seen.add(nu)
                    nxt.append(nu)
        layer = nxt

    def depth(mu):
        diff = [a - b for a, b in zip(lam, mu)]
        return sum(sum(Ainv[i][j] * diff[j] for j in range(len(diff))) for i in range(len(diff)))

    return tuple(sorted(seen, key=lambda mu: (depth(mu), mu)))


@lru_cache(maxsize=None)
def _inverse_cartan(aid: AlgebraId):
    from .liealg import _fraction_inverse
    return _fraction_inverse(algebra_data(aid).cartan)


def distinct_weight_count(data: AlgebraData, lam: Weight) -> int:
    return sum(orbit_size(data, mu) for mu in dominant_weights(data.id, tuple(lam)))


@dataclass
class WeightSystem:
    highest: Weight
    dominant: dict            # dominant weight -> multiplicity
    algebra: AlgebraData = field(repr=False)
    _arrays: tuple | None = field(default=None, repr=False)

    @property
    def mults(self) -> dict:
        W, m = self.arrays()
        return {tuple(int(x) for x in w): int(c) for w, c in zip(W, m)}

    def mult(self, w: Sequence[int]) -> int:
        return self.dominant.get(dominant_conjugate(self.algebra, w), 0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """All weights (one per row) and their multiplicities."""
        if self._arrays is None:
            blocks, mults = [], []
            for mu, m in self.dominant.items():
                orb = weyl_orbit(self.algebra, mu)
                blocks.append(orb)
                mults.append(np.full(len(orb), m, dtype=np.int64))
            self._arrays = (np.concatenate(blocks), np.concatenate(mults))
        return self._arrays

    def dimension(self) -> int:
        return sum(m * orbit_size(self.algebra, mu) for mu, m in self.dominant.items())


@lru_cache(maxsize=1024)
def _freudenthal(aid: AlgebraId, lam: Weight) -> tuple[tuple[Weight, int], ...]:
    data = algebra_data(aid)
    Q = data.quad_int        # conductor * (Lambda_i|Lambda_j)
    roots = data.positive_roots
    dom = dominant_weights(aid, lam)
    mult = {dom[0]: 1}

    def ip(u, v):
        return int(u @ Q @ v)

    lam_r = np.array(lam, dtype=np.int64) + 1
    top = ip(lam_r, lam_r)
    for mu in dom[1:]:
        mu_a = np.array(mu, dtype=np.int64)
        mu_r = mu_a + 1
        denom = top - ip(mu_r, mu_r)
        total = 0
        for alpha in roots:
            a_q = Q @ alpha
            j = 1
            while True:
                nu = mu_a + j * alpha
                m = mult.get(dominant_conjugate(data, nu.tolist()), 0)
                if m == 0:
                    break
                total += m * int(nu @ a_q)
                j += 1
        num = 2 * total
        if denom <= 0 or num % denom:
            raise InternalConsistencyError(f"Freudenthal recursion failed at {mu} in L({lam})")
        value = num // denom
        if value:
            mult[mu] = value
    return tuple(mult.items())


def weight_multiplicities(algebra: AlgebraData, lam: Weight) -> WeightSystem:
    lam = tuple(int(x) for x in lam)
    if min(lam, default=0) < 0:
        raise ValueError(f"{lam} is not dominant")
    return _weight_system(algebra.id, lam)


@lru_cache(maxsize=512)
def _weight_system(aid: AlgebraId, lam: Weight) -> WeightSystem:
    return WeightSystem(lam, dict(_freudenthal(aid, lam)), algebra_data(aid))


# -- q-dimensions and characters ---------------------------------------------

def _root_pairings(data: AlgebraData, L: np.ndarray) -> np.ndarray:
    """(lambda|alpha) for rows of L against all positive roots (float)."""
    coef = data.positive_roots_simple * np.array([float(d) for d in data.symmetrizer])
    return L @ coef.T


def qdims(ctx: LevelContext) -> np.ndarray:
    data = ctx.algebra
    L = ctx.labels_array().astype(float) + 1
    num = np.sin(np.pi * _root_pairings(data, L) / ctx.kappa)
    den = np.sin(np.pi * _root_pairings(data, np.ones((1, ctx.rank))) / ctx.kappa)
    return np.prod(num / den, axis=1)


def qdim(ctx: LevelContext, lam: Weight) -> float:
    return float(qdims(ctx)[ctx.index_of(lam)])


def is_cheap(ctx: LevelContext, lam: Weight) -> bool:
    return distinct_weight_count(ctx.algebra, tuple(lam)) <= ORBIT_BUDGET


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, constant term first."""
    from sympy import Poly, cyclotomic_poly, symbols
    x = symbols("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, x), x).all_coeffs()))


def _reduce_cyclotomic(counts: np.ndarray, m: int) -> np.ndarray:
    """Reduce integer coefficient columns of powers of exp(2 pi i/m) modulo Phi_m.

    The result has degree < phi(m) and small coefficients, so evaluating it in
    floating point avoids the cancellation of large weight multiplicities.
    """
    phi = np.array(_cyclotomic(m), dtype=object)
    deg = len(phi) - 1
    c = counts.astype(object)
    for d in range(m - 1, deg - 1, -1):
        lead = c[d].copy()
        if any(lead):
            c[d - deg:d + 1] -= np.outer(phi, lead)
    return np.array(c[:deg].tolist(), dtype=float)


def chi_row(ctx: LevelContext, lam: Weight) -> np.ndarray:
    """chi_lam[mu] for every mu in P+, summed over the full weight system.

    The exponents are exact integers mod conductor*kappa; the sum is binned
    by exponent and reduced in the cyclotomic field before evaluation.
    """
    data = ctx.algebra
    W, m = weight_multiplicities(data, lam).arrays()
    modulus = data.conductor * ctx.kappa
    targets = (ctx.labels_array() + 1) @ data.quad_int.T      # rows: N*F(mu+rho)
    counts = np.zeros((modulus, ctx.n), dtype=np.int64)
    step = max(1, 4_000_000 // max(ctx.n, 1))
    cols = np.arange(ctx.n)
    for s in range(0, len(W), step):
        E = (-(W[s:s + step] @ targets.T)) % modulus
        flat = E * ctx.n + cols[None, :]
        weights = np.broadcast_to(m[s:s + step, None], E.shape)
        counts += np.bincount(flat.ravel(), weights=weights.ravel(),
                              minlength=modulus * ctx.n).round().astype(np.int64).reshape(modulus, ctx.n)
    reduced = _reduce_cyclotomic(counts, modulus) if modulus > 1 else counts.astype(float)
    zeta = np.exp(2j * np.pi * np.arange(reduced.shape[0]) / modulus)
    return zeta @ reduced


def chi(ctx: LevelContext, lam: Weight, mu: Weight) -> complex:
    return complex(chi_row(ctx, lam)[ctx.index_of(mu)])


@dataclass(frozen=True, eq=False)
class SMatrix:
    entries: np.ndarray
    ctx: LevelContext
    tol: float = STRUCT_TOL

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, item):
        return self.entries[item]

    def qdims(self) -> np.ndarray:
        return self.entries[:, 0].real / self.entries[0, 0].real

    def residuals(self) -> dict:
        S = self.entries
        n = self.n
        C = np.zeros((n, n))
        C[np.arange(n), charge_conjugation_perm(self.ctx)] = 1
        return {
            "symmetry": float(np.abs(S - S.T).max()),
            "unitarity": float(np.abs(S @ S.conj().T - np.eye(n)).max()),
            "square_is_conjugation": float(np.abs(S @ S - C).max()),
            "row0_min": float(S[0].real.min()),
            "row0_imag": float(np.abs(S[0].imag).max()),
        }


_S_CACHE: dict = {}


def smatrix(ctx: LevelContext, tol: float = STRUCT_TOL) -> SMatrix:
    key = ctx.key()
    if key in _S_CACHE:
        return _S_CACHE[key]
    D = qdims(ctx)
    s00 = 1 / math.sqrt(float(np.sum(D ** 2)))
    row0 = s00 * D
    ratios = np.empty((ctx.n, ctx.n), dtype=complex)
    missing = []
    for i, lam in enumerate(ctx.pplus):
        if is_cheap(ctx, lam):
            ratios[i] = chi_row(ctx, lam)
        else:
            missing.append(i)
    if missing:
        from .fusion import derive_rows, build_table
        table = build_table(ctx)
        derive_rows(table.N, ratios, missing, [i for i in range(ctx.n) if i not in missing])
    S = SMatrix(ratios * row0[None, :], ctx, tol)
    res = S.residuals()
    if res["unitarity"] > tol or res["symmetry"] > tol or res["row0_min"] <= 0:
        raise UnitarityError(f"S-matrix of {ctx} fails structure checks: {res}")
    _S_CACHE[key] = S
    return S


def qdim_minimal_orbit(ctx: LevelContext) -> set:
    """Weights whose q-dimension is minimal among the non-simple-currents."""
    D = qdims(ctx)
    mask = np.abs(D - 1) >= QDIM_TOL
    if not mask.any():
        return set()
    dmin = D[mask].min()
    return {ctx.pplus[i] for i in np.flatnonzero(mask & (np.abs(D - dmin) < QDIM_TOL))}
