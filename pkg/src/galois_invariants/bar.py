"""Reference cohomology from the inhomogeneous bar complex.

Cochains are functions ``h^n -> M`` stored as one long vector.  Nothing here
uses the generator-value cocycle model or the dimension shift, so it serves
as an independent check of :mod:`galois_invariants.cohomology`.
"""

from __future__ import annotations

import itertools

import numpy as np

from .abelian import AbelianHom, FiniteAbelianGroup, direct_sum, kernel
from .intmat import as_intmat, complete_basis, imatmul, kernel_basis


def _index(elements):
    return {s: i for i, s in enumerate(elements)}


def bar_differential(n: int, h, M) -> np.ndarray:
    """Matrix of ``d: C^n(h, M) -> C^(n+1)(h, M)`` for ``n`` in 0, 1, 2."""
    G, r = h.parent, M.rank
    els = list(h.elements)
    idx = _index(els)
    k = len(els)
    src = list(itertools.product(range(k), repeat=n))
    tgt = list(itertools.product(range(k), repeat=n + 1))
    spos = {t: i for i, t in enumerate(src)}
    D = np.zeros((len(tgt) * r, len(src) * r), dtype=np.int64)
    eye = np.eye(r, dtype=np.int64)

    def add(row, col_tuple, mat, sign):
        c = spos[col_tuple]
        D[row * r : (row + 1) * r, c * r : (c + 1) * r] += sign * mat

    for row, tup in enumerate(tgt):
        g = [els[i] for i in tup]
        # s0 . f(s1..sn)
        add(row, tup[1:], M.action(g[0]), 1)
        for i in range(n):
            merged = list(tup[:i]) + [idx[G.mul(g[i], g[i + 1])]] + list(tup[i + 2 :])
            add(row, tuple(merged), eye, (-1) ** (i + 1))
        add(row, tup[:n], eye, (-1) ** (n + 1))
    return D


class BarCohomology:
    """``H^n(h, M) = ker d_n / im d_(n-1)`` for ``n`` in 1, 2."""

    def __init__(self, n: int, h, M):
        self.n, self.h, self.M = n, h, M
        Z = kernel_basis(bar_differential(n, h, M))
        B = bar_differential(n - 1, h, M)
        m = Z.shape[1]
        self.Z = Z
        if m:
            _, Winv = complete_basis(Z)
            self.P = Winv[:m]
            self.group = FiniteAbelianGroup.from_cokernel(imatmul(self.P, B), m)
        else:
            self.P = np.zeros((0, Z.shape[0]), dtype=np.int64)
            self.group = FiniteAbelianGroup.trivial(0)

    def reduce(self, cochain) -> np.ndarray:
        x = as_intmat(np.asarray(cochain, dtype=object).reshape(-1, 1), shape=(self.Z.shape[0], 1))
        return self.group.reduce(imatmul(self.P, x)[:, 0]) if self.group.ngens else np.zeros(0, dtype=np.int64)

    def witness(self, j: int) -> np.ndarray:
        return imatmul(self.Z, self.group.witnesses[:, j : j + 1])[:, 0]

    def restrict(self, cochain, small) -> np.ndarray:
        """Restrict a cochain on ``h^n`` to ``small^n``."""
        r = self.M.rank
        els = list(self.h.elements)
        idx = _index(els)
        v = np.asarray(cochain, dtype=object).reshape(-1, r)
        sm = list(small.elements)
        out = []
        for tup in itertools.product(sm, repeat=self.n):
            pos = 0
            for s in tup:
                pos = pos * len(els) + idx[s]
            out.append(v[pos])
        return np.concatenate(out) if out else np.zeros(0, dtype=object)


def bar_restriction_kernel(n: int, M, subgroups) -> tuple[int, ...]:
    """Invariant factors of ``ker(H^n(G, M) -> prod_h H^n(h, M))``."""
    top = BarCohomology(n, M.group.whole, M)
    if top.group.is_trivial:
        return ()
    rows = []
    targets = []
    for h in subgroups:
        loc = BarCohomology(n, h, M)
        targets.append(loc.group)
        cols = [loc.reduce(top.restrict(top.witness(j), h)) for j in range(top.group.ngens)]
        rows.append(np.array(cols, dtype=object).T.reshape(loc.group.ngens, top.group.ngens))
    total = direct_sum(targets)
    stacked = np.concatenate(rows, axis=0) if rows else np.zeros((0, top.group.ngens), dtype=object)
    mat = total.reduce_columns(as_intmat(stacked, shape=(total.ngens, top.group.ngens))) if total.ngens else stacked
    K, _ = kernel(AbelianHom(top.group, total, mat))
    return K.invariant_factors
