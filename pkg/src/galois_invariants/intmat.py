"""Exact integer matrix kernels: Smith and Hermite normal forms, kernels, completions.

Matrices are numpy arrays.  Work starts in ``int64`` and is promoted to
``object`` dtype (Python integers) as soon as an update could overflow, so
results are always exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

_BOUND = 1 << 61


def as_intmat(a, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``a`` to a 2-d integer array (int64 when it fits, else object)."""
    arr = a if isinstance(a, np.ndarray) else np.array(a, dtype=object)
    if arr.size == 0:
        if arr.ndim == 2 and (shape is None or any(arr.shape)):
            shape = arr.shape
        elif shape is None:
            shape = (0, 0)
        return np.zeros(shape, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    if arr.dtype == object:
        return arr.astype(np.int64) if _maxabs(arr) < _BOUND else arr
    if arr.dtype.kind not in "iub":
        raise TypeError(f"expected an integer matrix, got dtype {arr.dtype}")
    return arr.astype(np.int64, copy=False)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _big(*arrays: np.ndarray) -> list[np.ndarray]:
    return [a.astype(object) for a in arrays]


def imatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer product, promoting to Python integers on overflow risk."""
    if a.dtype != object and b.dtype != object:
        inner = a.shape[1] if a.ndim == 2 else a.shape[0]
        if _maxabs(a) * _maxabs(b) * max(inner, 1) < _BOUND:
            return a @ b
    out = a.astype(object) @ b.astype(object)
    if isinstance(out, np.ndarray) and out.size and _maxabs(out) < _BOUND:
        return out.astype(np.int64)
    return out


def _round_div(a: np.ndarray, p: int) -> np.ndarray:
    # nearest-integer quotient; keeps remainders in [-|p|/2, |p|/2)
    return (2 * a + p) // (2 * p)


@dataclass
class SmithForm:
    """``U @ A @ V = diag(diagonal, 0...)`` with ``U``, ``V`` unimodular.

    ``Uinv`` is the inverse of ``U``.  ``V`` is only populated when column
    transforms were requested.
    """

    diagonal: list[int]
    U: np.ndarray
    Uinv: np.ndarray
    V: np.ndarray | None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


class _Work:
    """Mutable elimination state for :func:`smith`."""

    def __init__(self, A: np.ndarray, track_cols: bool):
        n, m = A.shape
        self.A = A.copy()
        self.U = np.eye(n, dtype=A.dtype if A.dtype == object else np.int64)
        self.Ui = self.U.copy()
        self.V = np.eye(m, dtype=self.U.dtype) if track_cols else None
        if A.dtype == object:
            self._promote()

    def _promote(self) -> None:
        self.A, self.U, self.Ui = _big(self.A, self.U, self.Ui)
        if self.V is not None:
            self.V = self.V.astype(object)

    @property
    def small(self) -> bool:
        return self.A.dtype != object

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.A, self.U):
            M[[i, j]] = M[[j, i]]
        self.Ui[:, [i, j]] = self.Ui[:, [j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        if self.V is not None:
            self.V[:, [i, j]] = self.V[:, [j, i]]

    def negate_row(self, i: int) -> None:
        self.A[i] = -self.A[i]
        self.U[i] = -self.U[i]
        self.Ui[:, i] = -self.Ui[:, i]

    def row_update(self, k: int, rows: np.ndarray, q: np.ndarray) -> None:
        """rows -= q * row k."""
        if self.small:
            mq = _maxabs(q)
            risk = (
                mq * _maxabs(self.A[k]) + _maxabs(self.A[rows]),
                mq * _maxabs(self.U[k]) + _maxabs(self.U[rows]),
                _maxabs(self.Ui[:, k]) + len(rows) * mq * _maxabs(self.Ui[:, rows]),
            )
            if max(risk) >= _BOUND:
                self._promote()
                q = q.astype(object)
        self.A[rows] -= np.outer(q, self.A[k])
        self.U[rows] -= np.outer(q, self.U[k])
        self.Ui[:, k] += self.Ui[:, rows] @ q

    def col_update(self, k: int, cols: np.ndarray, q: np.ndarray) -> None:
        """cols -= q * col k."""
        if self.small:
            mq = _maxabs(q)
            risk = mq * _maxabs(self.A[:, k]) + _maxabs(self.A[:, cols])
            if self.V is not None:
                risk = max(risk, mq * _maxabs(self.V[:, k]) + _maxabs(self.V[:, cols]))
            if risk >= _BOUND:
                self._promote()
                q = q.astype(object)
        self.A[:, cols] -= np.outer(self.A[:, k], q)
        if self.V is not None:
            self.V[:, cols] -= np.outer(self.V[:, k], q)

    def row_mix(self, i: int, j: int, L: list[list[int]]) -> None:
        """Replace rows (i, j) by L @ rows (i, j); L unimodular 2x2."""
        (a, b), (c, d) = L
        det = a * d - b * c
        Linv = [[d * det, -b * det], [-c * det, a * det]]
        if self.small and max(abs(x) for row in L + Linv for x in row) * 2 * max(
            _maxabs(self.U), _maxabs(self.Ui), _maxabs(self.A)
        ) >= _BOUND:
            self._promote()
        for M in (self.A, self.U):
            ri, rj = M[i].copy(), M[j].copy()
            M[i] = a * ri + b * rj
            M[j] = c * ri + d * rj
        ci, cj = self.Ui[:, i].copy(), self.Ui[:, j].copy()
        self.Ui[:, i] = ci * Linv[0][0] + cj * Linv[1][0]
        self.Ui[:, j] = ci * Linv[0][1] + cj * Linv[1][1]


    def col_mix(self, i: int, j: int, R: list[list[int]]) -> None:
        """Replace columns (i, j) of V by columns (i, j) @ R."""
        if self.V is None:
            return
        if self.small and 2 * max(abs(x) for row in R for x in row) * _maxabs(self.V) >= _BOUND:
            self._promote()
        ci, cj = self.V[:, i].copy(), self.V[:, j].copy()
        self.V[:, i] = ci * R[0][0] + cj * R[1][0]
        self.V[:, j] = ci * R[0][1] + cj * R[1][1]


def _min_abs_position(sub: np.ndarray) -> tuple[int, int] | None:
    # smallest |entry|; ties broken by Markowitz cost to limit fill-in
    nz = sub != 0
    if not nz.any():
        return None
    absval = np.abs(sub)
    if sub.dtype == object:
        best = min(absval[nz])
        cand = nz & (absval == best)
    else:
        best = absval[nz].min()
        cand = absval == best
    rc = nz.sum(axis=1) - 1
    cc = nz.sum(axis=0) - 1
    cost = np.where(cand, np.outer(rc, cc), np.iinfo(np.int64).max)
    flat = int(cost.argmin())
    return divmod(flat, sub.shape[1])


def smith(A, track_cols: bool = False) -> SmithForm:
    """Smith normal form with row transforms (and optionally column transforms).

    Pivots are chosen by minimal absolute value; the returned diagonal is
    positive and satisfies ``d[i] | d[i+1]``.
    """
    A = as_intmat(A)
    n, m = A.shape
    w = _Work(A, track_cols)
    k = 0
    while k < min(n, m):
        pos = _min_abs_position(w.A[k:, k:])
        if pos is None:
            break
        w.swap_rows(k, k + pos[0])
        w.swap_cols(k, k + pos[1])
        while True:
            p = w.A[k, k]
            rows = np.nonzero(w.A[k + 1 :, k])[0] + k + 1
            if rows.size:
                w.row_update(k, rows, _round_div(w.A[rows, k], p))
            cols = np.nonzero(w.A[k, k + 1 :])[0] + k + 1
            if cols.size:
                w.col_update(k, cols, _round_div(w.A[k, cols], p))
            rest_r = np.nonzero(w.A[k + 1 :, k])[0]
            rest_c = np.nonzero(w.A[k, k + 1 :])[0]
            if not rest_r.size and not rest_c.size:
                break
            # a remainder is smaller than the pivot: move the smallest into place
            cands = [(abs(w.A[k + 1 + i, k]), 0, k + 1 + int(i)) for i in rest_r]
            cands += [(abs(w.A[k, k + 1 + j]), 1, k + 1 + int(j)) for j in rest_c]
            _, axis, idx = min(cands)
            if axis == 0:
                w.swap_rows(k, idx)
            else:
                w.swap_cols(k, idx)
        if w.A[k, k] < 0:
            w.negate_row(k)
        k += 1
    rank = k
    diag = [int(w.A[i, i]) for i in range(rank)]
    for i in range(rank):
        for j in range(i + 1, rank):
            a, b = diag[i], diag[j]
            if b % a == 0:
                continue
            g, s, t = _xgcd(a, b)
            w.row_mix(i, j, [[s, t], [-b // g, a // g]])
            w.col_mix(i, j, [[1, -t * (b // g)], [1, s * (a // g)]])
            diag[i], diag[j] = g, a // g * b
            w.A[i, i], w.A[j, j] = diag[i], diag[j]
            w.A[i, j] = w.A[j, i] = 0
    return SmithForm(diag, w.U, w.Ui, w.V)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def invariant_factors(A) -> list[int]:
    """Nonzero Smith invariants of ``A`` (including ones)."""
    return smith(A).diagonal


def is_saturated(B) -> bool:
    """True when the columns of ``B`` span a direct summand of Z^n of rank = #columns."""
    B = as_intmat(B)
    if B.shape[1] == 0:
        return True
    d = smith(B).diagonal
    return len(d) == B.shape[1] and all(x == 1 for x in d)


def kernel_basis(A) -> np.ndarray:
    """Columns form a Z-basis of ``{x : A x = 0}`` (automatically saturated)."""
    A = as_intmat(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    sf = smith(A.T)
    return as_intmat(sf.U[sf.rank :].T, shape=(n, 0))


def hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero echelon rows, pivots positive, entries above each
    pivot reduced into ``[0, pivot)``.
    """
    M = [[int(x) for x in r] for r in rows]
    if not M:
        return []
    ncols = len(M[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    r0 = 0
    for c in range(ncols):
        live = [i for i in range(r0, len(M)) if M[i][c] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(M[i][c]))
            piv = live[0]
            for i in live[1:]:
                q = M[i][c] // M[piv][c]
                if q:
                    M[i] = [x - q * y for x, y in zip(M[i], M[piv])]
            live = [i for i in live if M[i][c] != 0]
        piv = live[0]
        M[r0], M[piv] = M[piv], M[r0]
        if M[r0][c] < 0:
            M[r0] = [-x for x in M[r0]]
        pivots.append(c)
        r0 += 1
    out = M[:r0]
    for i, c in enumerate(pivots):
        for j in range(i):
            q = out[j][c] // out[i][c]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return out


def hnf_basis(B) -> np.ndarray:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``B``."""
    B = as_intmat(B)
    rows = hnf_rows(B.T.tolist())
    if not rows:
        return np.zeros((B.shape[0], 0), dtype=np.int64)
    return as_intmat(np.array(rows, dtype=object).T)


def complete_basis(K) -> tuple[np.ndarray, np.ndarray]:
    """Extend the saturated columns ``K`` (n x m) to a unimodular ``W = [K | C]``.

    Returns ``(W, Winv)``.  Raises ``ValueError`` if ``K`` is not saturated.
    """
    K = as_intmat(K)
    n, m = K.shape
    sf = smith(K, track_cols=True)
    if sf.rank != m or any(d != 1 for d in sf.diagonal):
        raise ValueError("columns are not a basis of a direct summand")
    C = sf.Uinv[:, m:]
    W = np.concatenate([K.astype(C.dtype), C], axis=1) if m else C
    top = imatmul(as_intmat(sf.V), as_intmat(sf.U[:m], shape=(0, n))) if m else sf.U[:0]
    Winv = np.concatenate([top.astype(object), sf.U[m:].astype(object)], axis=0)
    return as_intmat(W, shape=(n, n)), as_intmat(Winv, shape=(n, n))


def lcm_list(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
