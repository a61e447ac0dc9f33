"""Tate cohomology of Galois lattices in degrees -1, 0, 1, 2.

Each group is the torsion of the cokernel of one integer matrix:

* degree -1: ``ker(N_h) / I_h M``; ``I_h M`` is spanned by ``(s - 1) m`` for
  generators ``s`` of ``h`` and its saturation is ``ker(N_h)``;
* degree 0: ``M^h / N_h M``; the saturation of ``N_h M`` is ``M^h``;
* degree 1: a 1-cocycle is determined by its values on the generators of
  ``h``, the cocycles form a saturated sublattice of ``M^k`` and the
  coboundaries ``m -> ((s_i - 1) m)_i`` span a finite-index sublattice of it;
* degree 2: degree 1 of the dimension-shifted lattice.

Degree-1 class representatives are stored as generator values and expanded
to functions on all of ``h`` when restricting, so restriction is evaluation
at the smaller subgroup's generators.
"""

from __future__ import annotations

import numpy as np

from .abelian import AbelianHom, FiniteAbelianGroup
from .groups import Subgroup
from .intmat import as_intmat, imatmul, is_saturated
from .lattice import GaloisLattice, LatticeMap, norm_matrix, regular_lattice

DEGREES = (-1, 0, 1, 2)


class CohomologyError(ValueError):
    pass


def _check_subgroup(h: Subgroup, M: GaloisLattice) -> None:
    if h.parent is not M.group:
        raise CohomologyError("subgroup and lattice live over different groups")


def coboundary_matrix(h: Subgroup, M: GaloisLattice) -> np.ndarray:
    """``m -> ((s_1 - 1) m, ..., (s_k - 1) m)`` for the generators of ``h``."""
    r = M.rank
    eye = np.eye(r, dtype=np.int64)
    blocks = [M.action(g) - eye for g in h.generators]
    if not blocks:
        return np.zeros((0, r), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


def tate(degree: int, h: Subgroup, M: GaloisLattice) -> FiniteAbelianGroup:
    """Tate cohomology group ``H^degree(h, M)`` with witnesses.

    Ambient coordinates: ``M`` for degrees -1 and 0; generator values
    ``(c(s_1), ..., c(s_k))`` for degree 1; degree-1 coordinates on the
    shifted lattice for degree 2.
    """
    if degree not in DEGREES:
        raise CohomologyError(f"degree must be one of {DEGREES}, got {degree}")
    _check_subgroup(h, M)
    return M.cached(("tate", degree, h.elements), lambda: _tate(degree, h, M))


def _tate(degree: int, h: Subgroup, M: GaloisLattice) -> FiniteAbelianGroup:
    r = M.rank
    if degree == -1:
        if r == 0:
            return FiniteAbelianGroup.trivial(0)
        if not h.generators:
            return FiniteAbelianGroup.trivial(r)
        eye = np.eye(r, dtype=np.int64)
        augmentation_image = np.concatenate([M.action(g) - eye for g in h.generators], axis=1)
        return FiniteAbelianGroup.from_cokernel(augmentation_image, r)
    if degree == 0:
        if r == 0:
            return FiniteAbelianGroup.trivial(0)
        return FiniteAbelianGroup.from_cokernel(norm_matrix(M, h), r)
    if degree == 1:
        k = len(h.generators)
        if r == 0 or k == 0:
            return FiniteAbelianGroup.trivial(k * r)
        return FiniteAbelianGroup.from_cokernel(coboundary_matrix(h, M), k * r)
    M1, _ = dimension_shift(M)
    return tate(1, h, M1)


def expand_cocycle(h: Subgroup, M: GaloisLattice, values) -> dict[int, np.ndarray]:
    """Extend generator values of a 1-cocycle to all of ``h`` via ``c(xs) = c(x) + x c(s)``."""
    r = M.rank
    v = np.asarray(values, dtype=object).reshape(len(h.generators), r) if r else np.zeros((len(h.generators), 0), dtype=object)
    out = {0: np.zeros(r, dtype=object)}
    for y, x, pos in h.spanning_tree:
        out[y] = out[x] + M.action(x).astype(object) @ v[pos]
    return out


def is_cocycle(h: Subgroup, M: GaloisLattice, values) -> bool:
    """Check ``c(st) = c(s) + s c(t)`` on all of ``h`` for the expanded function."""
    c = expand_cocycle(h, M, values)
    G = h.parent
    for s in h.elements:
        As = M.action(s).astype(object)
        for t in h.elements:
            if not np.array_equal(c[G.mul(s, t)], c[s] + As @ c[t]):
                return False
    return True


def restrict_cochain(h_big: Subgroup, h_small: Subgroup, M: GaloisLattice, values) -> np.ndarray:
    c = expand_cocycle(h_big, M, values)
    if not h_small.generators:
        return np.zeros(0, dtype=object)
    return np.concatenate([c[g] for g in h_small.generators])


def restriction(h_big: Subgroup, h_small: Subgroup, M: GaloisLattice, degree: int = 1) -> AbelianHom:
    """Restriction ``H^degree(h_big, M) -> H^degree(h_small, M)`` in class coordinates."""
    if degree not in (1, 2):
        raise CohomologyError("restriction is provided in degrees 1 and 2")
    if not h_small.issubset(h_big):
        raise CohomologyError("h_small is not contained in h_big")
    _check_subgroup(h_big, M)
    if degree == 2:
        M1, _ = dimension_shift(M)
        return restriction(h_big, h_small, M1, 1)

    def compute():
        src = tate(1, h_big, M)
        tgt = tate(1, h_small, M)
        cols = [
            tgt.reduce(restrict_cochain(h_big, h_small, M, src.witnesses[:, j]))
            for j in range(src.ngens)
        ]
        mat = np.array(cols, dtype=object).T.reshape(tgt.ngens, src.ngens)
        return AbelianHom(src, tgt, as_intmat(mat, shape=(tgt.ngens, src.ngens)))

    return M.cached(("res", h_big.elements, h_small.elements), compute)


def dimension_shift(M: GaloisLattice) -> tuple[GaloisLattice, LatticeMap]:
    """``M1 = (Z[G] (x) M) / M`` and the embedding ``M -> Z[G] (x) M``.

    ``G`` acts on the ``Z[G]`` factor only, so the middle term is induced
    and ``H^i(h, M1) = H^(i+1)(h, M)`` for every subgroup ``h``.  The
    embedding is ``m -> sum_s e_s (x) s^-1 m``; its cokernel is realised on
    the blocks ``e_s (x) M`` with ``s != 1``.
    """
    return M.cached(("shift",), lambda: _dimension_shift(M))


def _dimension_shift(M: GaloisLattice) -> tuple[GaloisLattice, LatticeMap]:
    G = M.group
    n, r = G.order, M.rank
    R = regular_lattice(G)
    eye = np.eye(r, dtype=np.int64)
    ind_mats = tuple(np.kron(R.generator_matrices[p], eye) for p in range(len(G.generators)))
    P = GaloisLattice(G, n * r, ind_mats, name=f"Z[G]x{M.name}")
    emb = as_intmat(np.concatenate([M.action(G.inv(s)) for s in range(n)], axis=0), shape=(n * r, r))
    if not is_saturated(emb):
        raise CohomologyError("dimension-shift embedding has torsion cokernel")
    embedding = LatticeMap(M, P, emb)
    m1 = (n - 1) * r
    proj = _shift_projection_matrix(M)
    section = np.zeros((n * r, m1), dtype=np.int64)
    section[r:, :] = np.eye(m1, dtype=np.int64)
    mats = tuple(imatmul(imatmul(proj, A), section) for A in ind_mats)
    M1 = GaloisLattice(G, m1, mats, name=f"shift({M.name})")
    return M1, embedding


def _shift_projection_matrix(M: GaloisLattice) -> np.ndarray:
    # block s of the image is x_s - s^-1 x_1
    G, r = M.group, M.rank
    n = G.order
    proj = np.zeros(((n - 1) * r, n * r), dtype=object)
    eye = np.eye(r, dtype=np.int64)
    for s in range(1, n):
        rows = slice((s - 1) * r, s * r)
        proj[rows, s * r : (s + 1) * r] = eye
        proj[rows, 0:r] = -M.action(G.inv(s))
    return as_intmat(proj, shape=((n - 1) * r, n * r))


def shift_projection(M: GaloisLattice) -> LatticeMap:
    """The projection ``Z[G] (x) M -> M1`` matching :func:`dimension_shift`."""
    M1, emb = dimension_shift(M)
    return LatticeMap(emb.target, M1, _shift_projection_matrix(M))
