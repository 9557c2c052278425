"""Root-system data for the simple Lie algebras and Weyl-group folding.

Node numbering follows the level equations used throughout the package:

* E6: chain 1-2-3-4-5 with node 6 attached to 3
* E7: chain 1-2-3-4-5-6 with node 7 attached to 3
* E8: chain 1-2-...-7 with node 8 attached to 5
* F4: 1-2 => 3-4 (nodes 1, 2 long)
* G2: 1 => 2 (node 1 long)

Weights are always given by Dynkin labels (coordinates in the basis of
fundamental weights).  Cartan matrix convention: ``A[i][j] = <alpha_i^vee, alpha_j>``,
so the Dynkin labels of the simple root ``alpha_j`` form column ``j`` of ``A``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InternalConsistencyError, InvalidAlgebraError

FAMILIES = "ABCDEFG"

_MIN_RANK = {"A": 1, "B": 3, "C": 2, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

MAX_FOLD_STEPS = 1_000_000


@dataclass(frozen=True, order=True)
class AlgebraId:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family
        if fam not in FAMILIES:
            raise InvalidAlgebraError(f"unknown family {fam!r}")
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise InvalidAlgebraError(f"rank must be an integer, got {self.rank!r}")
        if fam in _MIN_RANK:
            if self.rank < _MIN_RANK[fam]:
                raise InvalidAlgebraError(
                    f"{fam}{self.rank}: rank of {fam} must be >= {_MIN_RANK[fam]}")
        elif self.rank not in _FIXED_RANKS[fam]:
            allowed = ", ".join(str(r) for r in _FIXED_RANKS[fam])
            raise InvalidAlgebraError(f"{fam}{self.rank}: rank of {fam} must be one of {allowed}")

    @classmethod
    def parse(cls, token: str) -> "AlgebraId":
        token = token.strip().upper()
        if len(token) < 2 or not token[1:].isdigit():
            raise InvalidAlgebraError(f"cannot parse algebra {token!r}")
        return cls(token[0], int(token[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _chain(n):
    return [(i, i + 1) for i in range(n - 1)]


def cartan_matrix(aid: AlgebraId) -> np.ndarray:
    r = aid.rank
    fam = aid.family
    # simply-laced edges (0-based); non-simply-laced bonds patched below
    if fam in "ABC":
        edges = _chain(r)
    elif fam == "D":
        edges = _chain(r - 1) + [(r - 3, r - 1)]
    elif fam == "E":
        edges = _chain(r - 1) + [(2 if r < 8 else 4, r - 1)]
    elif fam == "F":
        edges = _chain(4)
    else:
        edges = _chain(2)
    A = 2 * np.eye(r, dtype=np.int64)
    for i, j in edges:
        A[i, j] = A[j, i] = -1
    if fam == "B":
        A[r - 1, r - 2] = -2
    elif fam == "C":
        A[r - 2, r - 1] = -2
    elif fam == "F":
        A[2, 1] = -2
    elif fam == "G":
        A[1, 0] = -3
    return A


def _symmetrizer(A: np.ndarray) -> list[Fraction]:
    """d_i = (alpha_i|alpha_i)/2 with the long roots normalised to d_i = 1."""
    r = A.shape[0]
    d: list[Fraction | None] = [None] * r
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(r):
            if j != i and A[i, j] != 0 and d[j] is None:
                d[j] = d[i] * int(A[i, j]) / int(A[j, i])
                stack.append(j)
    top = max(d)
    return [x / top for x in d]


def _positive_roots(A: np.ndarray) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, by closure under alpha-strings."""
    r = A.shape[0]
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots = set(simple)
    layer = list(simple)
    ordered = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(int(A[i, j]) * beta[j] for j in range(r))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
                        ordered.append(up)
        layer = nxt
    return ordered


@dataclass(frozen=True)
class AlgebraData:
    id: AlgebraId
    cartan: np.ndarray
    comarks: tuple[int, ...]
    dual_coxeter: int
    quad_form: tuple[tuple[Fraction, ...], ...]
    positive_roots: np.ndarray          # Dynkin labels, one root per row
    positive_roots_simple: np.ndarray   # simple-root coordinates
    rho: tuple[int, ...]
    conductor: int
    symmetrizer: tuple[Fraction, ...]
    highest_root: np.ndarray
    ortho: tuple[tuple[Fraction, ...], ...] | None = None
    # conductor * quad_form, an integer matrix for exact vectorised inner products
    quad_int: np.ndarray = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.id.rank

    def root_pairings(self, v: Sequence) -> list[Fraction]:
        """(v|alpha) for every positive root alpha, exactly."""
        dv = [self.symmetrizer[j] * v[j] for j in range(self.rank)]
        return [sum((int(c) * x for c, x in zip(row, dv)), Fraction(0))
                for row in self.positive_roots_simple]

    def orthogonal(self, labels: Sequence) -> tuple[Fraction, ...]:
        """Orthogonal components lambda(l) of a B/C/D (or A) weight."""
        if self.ortho is None:
            raise InvalidAlgebraError(f"{self.id} has no orthogonal coordinates")
        return tuple(sum((c * x for c, x in zip(row, labels)), Fraction(0))
                     for row in self.ortho)


def _ortho_table(aid: AlgebraId):
    r = aid.rank
    fam = aid.family
    rows = []
    if fam in "AC":
        for l in range(r):
            rows.append([Fraction(int(i >= l)) for i in range(r)])
        if fam == "A":
            rows.append([Fraction(0)] * r)
    elif fam == "B":
        for l in range(r):
            row = [Fraction(int(l <= i < r - 1)) for i in range(r)]
            row[r - 1] = Fraction(1, 2)
            rows.append(row)
    elif fam == "D":
        for l in range(r):
            row = [Fraction(int(l <= i < r - 1)) for i in range(r)]
            row[r - 2] -= Fraction(1, 2)
            row[r - 1] = Fraction(1, 2)
            rows.append(row)
    else:
        return None
    return tuple(tuple(row) for row in rows)


@lru_cache(maxsize=None)
def algebra_data(aid: AlgebraId) -> AlgebraData:
    if not isinstance(aid, AlgebraId):
        raise InvalidAlgebraError(f"expected AlgebraId, got {aid!r}")
    A = cartan_matrix(aid)
    r = aid.rank
    d = _symmetrizer(A)
    roots_simple = _positive_roots(A)
    heights = [sum(c) for c in roots_simple]
    theta_simple = roots_simple[heights.index(max(heights))]
    comarks_f = [theta_simple[i] * d[i] for i in range(r)]
    if any(c.denominator != 1 for c in comarks_f):
        raise InternalConsistencyError(f"non-integral comarks for {aid}")
    comarks = (1,) + tuple(int(c) for c in comarks_f)

    Ainv = _fraction_inverse(A)
    F = tuple(tuple(d[i] * Ainv[i][j] for j in range(r)) for i in range(r))
    conductor = 1
    for row in F:
        for x in row:
            conductor = conductor * x.denominator // math.gcd(conductor, x.denominator)
    quad_int = np.array([[int(x * conductor) for x in row] for row in F], dtype=np.int64)

    rs = np.array(roots_simple, dtype=np.int64)
    roots_labels = rs @ A.T
    theta = A @ np.array(theta_simple, dtype=np.int64)
    return AlgebraData(
        id=aid, cartan=A, comarks=comarks, dual_coxeter=sum(comarks), quad_form=F,
        positive_roots=roots_labels, positive_roots_simple=rs, rho=(1,) * r,
        conductor=conductor, symmetrizer=tuple(d), highest_root=theta,
        ortho=_ortho_table(aid), quad_int=quad_int)


def _fraction_inverse(A: np.ndarray) -> list[list[Fraction]]:
    n = A.shape[0]
    M = [[Fraction(int(A[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if M[i][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return [row[n:] for row in M]


def weight_inner(data: AlgebraData, v: Sequence, w: Sequence) -> Fraction:
    """(v|w) for weights given by Dynkin labels."""
    r = data.rank
    if len(v) != r or len(w) != r:
        raise ValueError(f"expected {r}-vectors, got lengths {len(v)} and {len(w)}")
    F = data.quad_form
    return sum((F[i][j] * v[i] * w[j] for i in range(r) for j in range(r) if v[i] and w[j]),
               Fraction(0))


def weyl_dimension(data: AlgebraData, lam: Sequence[int]) -> int:
    shifted = [x + 1 for x in lam]
    num = data.root_pairings(shifted)
    den = data.root_pairings(data.rho)
    value = Fraction(1)
    for a, b in zip(num, den):
        value *= a / b
    if value.denominator != 1:
        raise InternalConsistencyError(f"non-integral Weyl dimension for {lam}")
    return int(value)


class FoldResult(NamedTuple):
    weight: tuple
    det_sign: int
    word: tuple[int, ...] = ()


def _reflect(data: AlgebraData, x: list, i: int) -> None:
    xi = x[i]
    col = data.cartan[:, i]
    for j in range(len(x)):
        if col[j]:
            x[j] -= xi * int(col[j])


def finite_fold(data: AlgebraData, v: Sequence) -> FoldResult:
    """Fold ``v`` into the dominant chamber under the shifted action w.v = w(v+rho)-rho.

    The reflection word records the simple reflections applied to ``v + rho``,
    in order; ``det_sign`` is 0 when ``v + rho`` lies on a reflection wall.
    """
    x = [a + 1 for a in v]
    word = []
    while True:
        i = min(range(len(x)), key=x.__getitem__)
        if x[i] >= 0:
            break
        _reflect(data, x, i)
        word.append(i + 1)
        if len(word) > MAX_FOLD_STEPS:
            raise InternalConsistencyError("finite fold did not terminate")
    sign = 0 if any(a == 0 for a in x) else (-1) ** len(word)
    return FoldResult(tuple(a - 1 for a in x), sign, tuple(word))


def affine_fold(data: AlgebraData, kappa: int, v: Sequence) -> FoldResult:
    """Fold ``v`` into the closed fundamental alcove at level ``kappa``.

    ``v`` is already rho-shifted: the alcove is ``x_i >= 0`` and
    ``x_0 = kappa - sum a_i x_i >= 0``.  In the word, 0 denotes the affine
    reflection.  A zero label (including ``x_0``) gives ``det_sign = 0``.
    """
    if kappa < data.dual_coxeter:
        raise ValueError(f"kappa={kappa} is below the dual Coxeter number {data.dual_coxeter}")
    x = list(v)
    am = data.comarks[1:]
    theta = [int(t) for t in data.highest_root]
    word = []
    while True:
        i = min(range(len(x)), key=x.__getitem__)
        if x[i] < 0:
            _reflect(data, x, i)
            word.append(i + 1)
        else:
            x0 = kappa - sum(a * b for a, b in zip(am, x))
            if x0 >= 0:
                break
            for j in range(len(x)):
                x[j] += x0 * theta[j]
            word.append(0)
        if len(word) > MAX_FOLD_STEPS:
            raise InternalConsistencyError("affine fold did not terminate")
    x0 = kappa - sum(a * b for a, b in zip(am, x))
    sign = 0 if (x0 == 0 or any(a == 0 for a in x)) else (-1) ** len(word)
    return FoldResult(tuple(x), sign, tuple(word))


def unfold(data: AlgebraData, kappa: int | None, x: Sequence, word: Sequence[int]) -> tuple:
    """Apply the reflections of ``word`` in reverse order (undoes a fold)."""
    x = list(x)
    theta = [int(t) for t in data.highest_root]
    am = data.comarks[1:]
    for i in reversed(word):
        if i == 0:
            x0 = kappa - sum(a * b for a, b in zip(am, x))
            for j in range(len(x)):
                x[j] += x0 * theta[j]
        else:
            _reflect(data, x, i - 1)
    return tuple(x)


def dominant_conjugate(data: AlgebraData, v: Sequence[int]) -> tuple[int, ...]:
    """Unshifted dominant representative of the Weyl orbit of ``v``."""
    x = list(v)
    while True:
        i = min(range(len(x)), key=x.__getitem__)
        if x[i] >= 0:
            return tuple(x)
        _reflect(data, x, i)


# -- vectorised folding on integer arrays ------------------------------------

def fold_affine_array(data: AlgebraData, kappa: int, X: np.ndarray):
    """Vectorised :func:`affine_fold` for rows of an integer array.

    Returns ``(Y, signs)`` with ``Y`` the folded (still shifted) rows.
    """
    Y = np.array(X, dtype=np.int64, copy=True)
    n = Y.shape[0]
    signs = np.ones(n, dtype=np.int64)
    cols = data.cartan.T.astype(np.int64)          # row i = labels of alpha_i
    am = np.array(data.comarks[1:], dtype=np.int64)
    theta = data.highest_root.astype(np.int64)
    active = np.arange(n)
    steps = 0
    while active.size:
        Z = Y[active]
        imin = Z.argmin(axis=1)
        zmin = Z[np.arange(Z.shape[0]), imin]
        x0 = kappa - Z @ am
        fin = zmin < 0
        aff = ~fin & (x0 < 0)
        if fin.any():
            Z[fin] -= zmin[fin, None] * cols[imin[fin]]
        if aff.any():
            Z[aff] += x0[aff, None] * theta
        moved = fin | aff
        Y[active] = Z
        signs[active[moved]] *= -1
        active = active[moved]
        steps += 1
        if steps > MAX_FOLD_STEPS:
            raise InternalConsistencyError("vectorised affine fold did not terminate")
    x0 = kappa - Y @ am
    wall = (Y == 0).any(axis=1) | (x0 == 0)
    signs[wall] = 0
    return Y, signs


def fold_finite_array(data: AlgebraData, X: np.ndarray):
    """Vectorised fold of already-shifted rows into the dominant chamber."""
    Y = np.array(X, dtype=np.int64, copy=True)
    n = Y.shape[0]
    signs = np.ones(n, dtype=np.int64)
    cols = data.cartan.T.astype(np.int64)
    active = np.arange(n)
    steps = 0
    while active.size:
        Z = Y[active]
        imin = Z.argmin(axis=1)
        zmin = Z[np.arange(Z.shape[0]), imin]
        fin = zmin < 0
        if fin.any():
            Z[fin] -= zmin[fin, None] * cols[imin[fin]]
        Y[active] = Z
        signs[active[fin]] *= -1
        active = active[fin]
        steps += 1
        if steps > MAX_FOLD_STEPS:
            raise InternalConsistencyError("vectorised finite fold did not terminate")
    signs[(Y == 0).any(axis=1)] = 0
    return Y, signs


def _row_keys(M: np.ndarray) -> np.ndarray:
    M = np.ascontiguousarray(M, dtype=np.int64)
    return M.view(np.dtype((np.void, M.dtype.itemsize * M.shape[1]))).ravel()


def weyl_orbit(data: AlgebraData, mu: Sequence[int]) -> np.ndarray:
    """All elements of the Weyl orbit of the dominant weight ``mu``.

    Generated level by level by lowering reflections; elements of a level
    have minimal coset representatives of equal length, so deduplication
    within a level suffices.
    """
    r = data.rank
    cols = data.cartan.T.astype(np.int64)
    level = np.array([mu], dtype=np.int64)
    out = [level]
    while True:
        parts = []
        for i in range(r):
            sel = level[level[:, i] > 0]
            if sel.size:
                parts.append(sel - sel[:, i:i + 1] * cols[i])
        if not parts:
            break
        cand = np.concatenate(parts)
        _, idx = np.unique(_row_keys(cand), return_index=True)
        level = cand[np.sort(idx)]
        out.append(level)
    return np.concatenate(out)
