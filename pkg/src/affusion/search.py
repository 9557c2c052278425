"""Backtracking search for structure-constant-preserving bijections.

Both automorphism enumeration and isomorphism testing reduce to finding
permutations p with ``M[p[a], p[b], p[c]] == N[a, b, c]`` for all triples.
Candidates are pruned by invariant signatures and then by propagating the
constraints implied by every assigned pair.
"""
from __future__ import annotations

import numpy as np

from .errors import SearchBoundExceeded

DEFAULT_SEARCH_BOUND = 400


def signatures(N: np.ndarray, orders: np.ndarray) -> list[tuple]:
    """Exact per-element invariants of a fusion ring preserved by any isomorphism."""
    out = []
    for x in range(N.shape[0]):
        entries = N[x].ravel()
        vals, counts = np.unique(entries[entries > 0], return_counts=True)
        out.append((int(orders[x]), int(np.trace(N[x])),
                    tuple(vals.tolist()), tuple(counts.tolist())))
    return out


def initial_domains(sig_a: list, sig_b: list, qd_a: np.ndarray, qd_b: np.ndarray,
                    tol: float) -> np.ndarray:
    """Candidate images: equal exact signatures and q-dimensions within ``tol``."""
    D = np.abs(np.asarray(qd_a)[:, None] - np.asarray(qd_b)[None, :]) < tol
    for x in range(len(sig_a)):
        for y in np.flatnonzero(D[x]):
            D[x, y] = sig_a[x] == sig_b[y]
    D[0, :] = False
    D[:, 0] = False
    D[0, 0] = True
    return D


class _Search:
    def __init__(self, NA: np.ndarray, NB: np.ndarray, limit: int | None):
        self.NA = NA.astype(np.int32)
        self.NB = NB.astype(np.int32)
        self.n = NA.shape[0]
        self.limit = limit
        self.found: list[np.ndarray] = []
        self.nodes = 0

    def _propagate(self, D: np.ndarray, assign: dict, queue: list) -> bool:
        NA, NB = self.NA, self.NB
        while queue:
            if D.sum(axis=1).max() == 1:
                return True
            x, y = queue.pop()
            xs = np.fromiter(assign.keys(), dtype=np.int64)
            ys = np.fromiter(assign.values(), dtype=np.int64)
            for MA, MB in ((NA[x, xs, :], NB[y, ys, :]),
                           (NA[xs, :, x], NB[ys, :, y]),
                           (NA[x, :, xs], NB[y, :, ys])):
                D &= (MA[:, :, None] == MB[:, None, :]).all(axis=0)
            sizes = D.sum(axis=1)
            if (sizes == 0).any() or (D.sum(axis=0) == 0).any():
                return False
            for z in np.flatnonzero(sizes == 1):
                z = int(z)
                if z not in assign:
                    w = int(np.flatnonzero(D[z])[0])
                    if w in assign.values():
                        return False
                    assign[z] = w
                    others = np.ones(self.n, dtype=bool)
                    others[z] = False
                    D[others, w] = False
                    queue.append((z, w))
            if (D.sum(axis=1) == 0).any():
                return False
        return True

    def _accept(self, D: np.ndarray) -> None:
        p = D.argmax(axis=1)
        if len(set(p.tolist())) != self.n:
            return
        if np.array_equal(self.NB[np.ix_(p, p, p)], self.NA):
            self.found.append(p)

    def run(self, D: np.ndarray) -> None:
        D = D.copy()
        assign: dict = {}
        queue = []
        for x in np.flatnonzero(D.sum(axis=1) == 1):
            y = int(np.flatnonzero(D[x])[0])
            assign[int(x)] = y
            queue.append((int(x), y))
        if self._propagate(D, assign, queue):
            self._dfs(D, assign)

    def _dfs(self, D: np.ndarray, assign: dict) -> None:
        if self.limit is not None and len(self.found) >= self.limit:
            return
        self.nodes += 1
        sizes = D.sum(axis=1)
        if sizes.max() == 1:
            self._accept(D)
            return
        open_rows = np.flatnonzero(sizes > 1)
        x = int(open_rows[np.argmin(sizes[open_rows])])
        for y in np.flatnonzero(D[x]):
            y = int(y)
            D2 = D.copy()
            D2[x, :] = False
            D2[:, y] = False
            D2[x, y] = True
            a2 = dict(assign)
            a2[x] = y
            if self._propagate(D2, a2, [(x, y)]):
                self._dfs(D2, a2)
            if self.limit is not None and len(self.found) >= self.limit:
                return


def find_bijections(NA: np.ndarray, NB: np.ndarray, D: np.ndarray, limit: int | None = None,
                    bound: int = DEFAULT_SEARCH_BOUND) -> list[np.ndarray]:
    """All (or the first ``limit``) permutations p with NB[p,p,p] == NA within domains D."""
    n = NA.shape[0]
    if NB.shape[0] != n:
        return []
    if n > bound:
        raise SearchBoundExceeded(f"|P+| = {n} exceeds the search bound {bound}")
    s = _Search(NA, NB, limit)
    if not D.any(axis=1).all():
        return []
    s.run(D)
    return sorted(s.found, key=lambda p: p.tolist())
