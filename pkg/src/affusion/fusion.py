"""Tensor-product multiplicities and Kac-Walton fusion, cross-checked by Verlinde."""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .characters import (ORBIT_BUDGET, SMatrix, distinct_weight_count, weight_multiplicities)
from .errors import InternalConsistencyError, RoundingFailure
from .liealg import AlgebraData, AlgebraId, fold_affine_array, fold_finite_array
from .weights import LevelContext, Weight, charge_conjugation_perm, format_labels

log = logging.getLogger(__name__)

ROUND_TOL = 1e-6
ROW_CHUNK = 1_500_000


def tensor_mult(algebra: AlgebraData, lam: Weight, mu: Weight) -> dict:
    """Multiplicities of L(nu) in L(lam) (x) L(mu), by Racah-Speiser folding."""
    lam, mu = tuple(lam), tuple(mu)
    if distinct_weight_count(algebra, lam) > distinct_weight_count(algebra, mu):
        lam, mu = mu, lam
    W, m = weight_multiplicities(algebra, lam).arrays()
    Y, sign = fold_finite_array(algebra, W + np.array(mu, dtype=np.int64) + 1)
    out: dict = {}
    for y, s, c in zip(Y, sign, m):
        if s:
            nu = tuple(int(v) - 1 for v in y)
            out[nu] = out.get(nu, 0) + int(s) * int(c)
    if any(v < 0 for v in out.values()):
        raise InternalConsistencyError(f"negative tensor multiplicity in {lam} x {mu}")
    return {nu: v for nu, v in sorted(out.items()) if v}


class _Locator:
    """Vectorised lookup of P+ indices from shifted Dynkin labels."""

    def __init__(self, ctx: LevelContext):
        self.base = ctx.level + 1
        self.powers = self.base ** np.arange(ctx.rank, dtype=np.int64)
        L = ctx.labels_array()
        self.table = np.full(self.base ** ctx.rank, -1, dtype=np.int64)
        self.table[L @ self.powers] = np.arange(ctx.n)

    def __call__(self, shifted: np.ndarray) -> np.ndarray:
        return self.table[(shifted - 1) @ self.powers]


def _kw_rows(ctx: LevelContext, lam: Weight, targets: Sequence[int],
             locate: _Locator | None = None) -> np.ndarray:
    """Kac-Walton: N[lam, b, :] for every b in ``targets`` by folding the weights of lam."""
    locate = locate or _Locator(ctx)
    data = ctx.algebra
    W, m = weight_multiplicities(data, lam).arrays()
    L = ctx.labels_array()
    n = ctx.n
    targets = np.asarray(targets, dtype=np.int64)
    out = np.zeros((len(targets), n), dtype=np.int64)
    per = max(1, ROW_CHUNK // max(len(W), 1))
    for t0 in range(0, len(targets), per):
        tb = targets[t0:t0 + per]
        wchunk = max(1, ROW_CHUNK // len(tb))
        for w0 in range(0, len(W), wchunk):
            Wc, mc = W[w0:w0 + wchunk], m[w0:w0 + wchunk]
            X = (Wc[None, :, :] + (L[tb] + 1)[:, None, :]).reshape(-1, ctx.rank)
            Y, sign = fold_affine_array(data, ctx.kappa, X)
            keep = sign != 0
            idx = locate(Y[keep])
            if (idx < 0).any():
                raise InternalConsistencyError("affine fold left the alcove")
            rows = np.repeat(np.arange(len(tb)), len(Wc))[keep]
            wts = (sign * np.tile(mc, len(tb)))[keep]
            flat = np.bincount(rows * n + idx, weights=wts, minlength=len(tb) * n)
            out[t0:t0 + len(tb)] += np.rint(flat).astype(np.int64).reshape(len(tb), n)
    if (out < 0).any():
        raise InternalConsistencyError(f"negative Kac-Walton coefficient for {lam} in {ctx}")
    return out


def fusion_product(ctx: LevelContext, lam: Weight, mu: Weight) -> dict:
    """N_{lam,mu}^nu as a sparse mapping nu -> coefficient, by the Kac-Walton formula."""
    a, b = ctx.index_of(lam), ctx.index_of(mu)
    data = ctx.algebra
    if distinct_weight_count(data, ctx.pplus[a]) > distinct_weight_count(data, ctx.pplus[b]):
        a, b = b, a
    row = _kw_rows(ctx, ctx.pplus[a], [b])[0]
    return {ctx.pplus[c]: int(row[c]) for c in np.flatnonzero(row)}


def derive_rows(N: np.ndarray, rows: np.ndarray, missing: Sequence[int], known: Sequence[int],
                mul: Callable | None = None, generators: Sequence[int] | None = None) -> None:
    """Fill ``rows[x]`` for x in ``missing`` from the ring relation

        rows[g] * rows[mu] = sum_nu N[g, mu, nu] rows[nu]

    choosing g among ``generators`` (default ``known``) and mu already known.
    ``mul`` multiplies two rows (elementwise by default; use matmul for fusion
    matrices).  Integer rows must divide exactly.
    """
    mul = mul or np.multiply
    known = set(int(x) for x in known)
    gens = list(generators) if generators is not None else sorted(known)
    todo = set(int(x) for x in missing)
    while todo:
        progress = False
        for nu in sorted(todo):
            done = False
            for g in gens:
                for mu in sorted(known):
                    c = int(N[g, mu, nu])
                    if not c:
                        continue
                    others = [x for x in np.flatnonzero(N[g, mu]) if x != nu]
                    if any(int(x) not in known for x in others):
                        continue
                    acc = mul(rows[g], rows[mu])
                    for x in others:
                        acc = acc - N[g, mu, x] * rows[x]
                    if np.issubdtype(rows.dtype, np.integer):
                        if (acc % c).any():
                            raise InternalConsistencyError(f"ring recursion not divisible at {nu}")
                        rows[nu] = acc // c
                    else:
                        rows[nu] = acc / c
                    done = True
                    break
                if done:
                    break
            if done:
                known.add(nu)
                todo.discard(nu)
                progress = True
        if not progress:
            raise InternalConsistencyError(f"ring recursion stuck on rows {sorted(todo)}")


@dataclass(frozen=True, eq=False)
class FusionTable:
    ctx: LevelContext
    N: np.ndarray          # N[a, b, c] = N_{ab}^c

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def data(self) -> dict:
        """Sparse form {(a, b): {c: N}}."""
        out = {}
        for a, b, c in zip(*np.nonzero(self.N)):
            out.setdefault((int(a), int(b)), {})[int(c)] = int(self.N[a, b, c])
        return out

    def product(self, lam, mu) -> dict:
        a, b = self.ctx.index_of(lam), self.ctx.index_of(mu)
        return {self.ctx.pplus[c]: int(self.N[a, b, c]) for c in np.flatnonzero(self.N[a, b])}

    def triples(self):
        a, b, c = np.nonzero(self.N)
        return np.stack([a, b, c, self.N[a, b, c]], axis=1)

    def check_invariants(self, full_associativity: bool | None = None) -> dict:
        N = self.N
        n = self.n
        C = charge_conjugation_perm(self.ctx)
        res = {
            "unit": bool(np.array_equal(N[0], np.eye(n, dtype=N.dtype))),
            "commutative": bool(np.array_equal(N, N.transpose(1, 0, 2))),
            "dual": bool(np.array_equal(N[:, :, 0], np.eye(n, dtype=N.dtype)[C])),
            "nonnegative": bool((N >= 0).all()),
            "conjugation": bool(np.array_equal(N[np.ix_(C, C, C)], N)),
        }
        if full_associativity is None:
            full_associativity = n <= 60
        if full_associativity:
            # (N_a N_b)_{c,e} = sum_d N_{ac}^d N_{bd}^e must equal sum_d N_{ab}^d N_{dc}^e
            Nl = N.astype(np.int64)
            lhs = np.einsum("acd,bde->abce", Nl, Nl, optimize=True)
            rhs = np.einsum("abd,dce->abce", Nl, Nl, optimize=True)
            res["associative"] = bool(np.array_equal(lhs, rhs))
        return res


# -- building and caching ----------------------------------------------------

_TABLES: dict = {}


def cache_root(cache_dir: str | os.PathLike | None = None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get("AFFUSION_CACHE")
    return Path(env) if env else None


def _cache_file(root: Path, ctx: LevelContext) -> Path:
    fam, rank, level = ctx.key()
    return root / f"{fam}{rank}_k{level}_v{__version__}.fus"


def save_table(table: FusionTable, path: Path) -> None:
    ctx = table.ctx
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# affusion fusion table {__version__}",
             f"algebra {ctx.id}", f"level {ctx.level}", f"pplus {ctx.n}"]
    lines += [format_labels(w) for w in ctx.pplus]
    trip = table.triples()
    lines.append(f"triples {len(trip)}")
    lines += [f"{a} {b} {c} {v}" for a, b, c, v in trip.tolist()]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def load_table(ctx: LevelContext, path: Path) -> FusionTable | None:
    try:
        lines = path.read_text().splitlines()
    except OSError:
        return None
    try:
        if lines[0] != f"# affusion fusion table {__version__}":
            return None
        if lines[1] != f"algebra {ctx.id}" or lines[2] != f"level {ctx.level}":
            return None
        n = int(lines[3].split()[1])
        order = [tuple(int(x) for x in ln.split()) for ln in lines[4:4 + n]]
        if tuple(order) != ctx.pplus:
            return None
        count = int(lines[4 + n].split()[1])
        body = lines[5 + n:5 + n + count]
        if len(body) != count:
            return None
        N = np.zeros((n, n, n), dtype=np.int32)
        if count:
            arr = np.array([ln.split() for ln in body], dtype=np.int64)
            N[arr[:, 0], arr[:, 1], arr[:, 2]] = arr[:, 3]
        return FusionTable(ctx, N)
    except (IndexError, ValueError):
        return None


def build_table(ctx: LevelContext, cache_dir=None, use_cache: bool = True) -> FusionTable:
    """All fusion coefficients of ``ctx``.

    Pairs whose smaller factor has a manageable weight system are computed by
    Kac-Walton folding; the remaining rows (both factors huge) follow from the
    ring recursion with exact integer division.
    """
    key = ctx.key()
    if use_cache and key in _TABLES:
        return _TABLES[key]
    root = cache_root(cache_dir)
    if use_cache and root is not None:
        table = load_table(ctx, _cache_file(root, ctx))
        if table is not None:
            _TABLES[key] = table
            return table
    table = FusionTable(ctx, _compute(ctx))
    if use_cache:
        _TABLES[key] = table
        if root is not None:
            save_table(table, _cache_file(root, ctx))
    return table


def _compute(ctx: LevelContext) -> np.ndarray:
    n = ctx.n
    data = ctx.algebra
    sizes = [distinct_weight_count(data, w) for w in ctx.pplus]
    order = sorted(range(n), key=lambda i: (sizes[i], i))
    rank_of = {i: pos for pos, i in enumerate(order)}
    locate = _Locator(ctx)
    N = np.zeros((n, n, n), dtype=np.int64)
    cheap = [i for i in order if sizes[i] <= ORBIT_BUDGET]
    for a in cheap:
        targets = [b for b in range(n) if rank_of[b] >= rank_of[a]]
        rows = _kw_rows(ctx, ctx.pplus[a], targets, locate)
        N[a, targets] = rows
        N[targets, a] = rows
    missing = [i for i in range(n) if sizes[i] > ORBIT_BUDGET]
    if missing:
        log.info("deriving %d fusion matrices of %s by ring recursion", len(missing), ctx)
        partial = N[missing].copy()
        mats = N.copy()
        derive_rows(N, mats, missing, cheap, mul=np.matmul, generators=cheap)
        N[missing] = mats[missing]
        mask = partial != 0
        if not np.array_equal(N[missing][mask], partial[mask]):
            raise InternalConsistencyError("derived fusion rows disagree with direct rows")
        if not np.array_equal(N, N.transpose(1, 0, 2)):
            raise InternalConsistencyError("derived fusion table is not commutative")
    if (N < 0).any():
        raise InternalConsistencyError(f"negative fusion coefficient in {ctx}")
    return N.astype(np.int32)


# -- Verlinde formula ----------------------------------------------------------

def verlinde_tensor(S: SMatrix) -> tuple[np.ndarray, float]:
    """All N_{ab}^c from Verlinde's formula, rounded, plus the maximal residual."""
    M = S.entries
    n = M.shape[0]
    ratio = M / M[0][None, :]
    H = M.conj().T
    out = np.empty((n, n, n), dtype=np.int64)
    resid = 0.0
    for a in range(n):
        V = (M * ratio[a][None, :]) @ H
        R = np.rint(V.real)
        resid = max(resid, float(np.abs(V - R).max()))
        out[a] = R.astype(np.int64)
    if (out < 0).any():
        raise RoundingFailure("Verlinde formula produced a negative coefficient")
    return out, resid


def verlinde_fusion(S: SMatrix, a: int, b: int, c: int, tol: float = ROUND_TOL) -> int:
    M = S.entries
    z = complex(np.sum(M[a] * M[b] * M[c].conj() / M[0]))
    return _round(z, tol)


def _round(z: complex, tol: float) -> int:
    v = round(z.real)
    if abs(z - v) > tol or v < 0:
        raise RoundingFailure(f"value {z} is not within {tol} of a nonnegative integer")
    return int(v)


def verlinde_genus_value(S: SMatrix, g: int, punctures: Sequence[int] = ()) -> complex:
    M = S.entries
    s0 = M[0]
    terms = s0.real.astype(complex) ** (2 * (1 - g))
    for a in punctures:
        terms = terms * (M[a] / s0)
    return complex(np.sum(terms))


def verlinde_genus(S: SMatrix, g: int, punctures: Sequence[int] = (), tol: float = ROUND_TOL) -> int:
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return _round(verlinde_genus_value(S, g, punctures), tol)
