"""Galois lattices: free Z-modules of finite rank with an action of a finite group."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .groups import FiniteGroup, Subgroup, subgroup_classes
from .intmat import as_intmat, complete_basis, hnf_basis, imatmul, is_saturated, kernel_basis


class LatticeError(ValueError):
    """Invalid lattice data (non-homomorphic action, non-equivariant map...)."""


@dataclass(frozen=True, eq=False)
class GaloisLattice:
    """``rank`` x ``rank`` integer matrices for each group generator.

    ``action(s)`` for an arbitrary element is obtained along the group's
    breadth-first spanning tree.  Construction validates the homomorphism
    property on every Cayley-graph edge.
    """

    group: FiniteGroup
    rank: int
    generator_matrices: tuple[np.ndarray, ...] = field(repr=False)
    basis_tags: tuple[str, ...] | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(as_intmat(m, shape=(self.rank, self.rank)) for m in self.generator_matrices)
        if len(gens) != len(self.group.generators):
            raise LatticeError(
                f"expected {len(self.group.generators)} generator matrices, got {len(gens)}"
            )
        for m in gens:
            if m.shape != (self.rank, self.rank):
                raise LatticeError(f"generator matrix has shape {m.shape}, expected rank {self.rank}")
        object.__setattr__(self, "generator_matrices", gens)
        mats = self.matrices
        G = self.group
        for x in range(G.order):
            for pos, g in enumerate(G.generators):
                if not np.array_equal(mats[G.mul(x, g)], imatmul(mats[x], gens[pos])):
                    raise LatticeError("generator matrices do not define a group action")

    @cached_property
    def matrices(self) -> tuple[np.ndarray, ...]:
        G = self.group
        mats: list[np.ndarray | None] = [None] * G.order
        mats[0] = np.eye(self.rank, dtype=np.int64)
        for y, x, pos in G.spanning_tree:
            mats[y] = imatmul(mats[x], self.generator_matrices[pos])
        return tuple(mats)

    def action(self, s: int) -> np.ndarray:
        return self.matrices[s]

    def cached(self, key, compute):
        """Get-or-compute in the per-lattice memo table (atomic per lattice)."""
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    @property
    def is_permutation(self) -> bool:
        return self.basis_tags is not None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "generators": [m.tolist() for m in self.generator_matrices],
        }

    def same_action(self, other: "GaloisLattice") -> bool:
        return other.group is self.group and other.rank == self.rank and all(
            np.array_equal(a, b) for a, b in zip(self.generator_matrices, other.generator_matrices)
        )


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """Equivariant map ``source -> target`` given by a ``target.rank x source.rank`` matrix."""

    source: GaloisLattice
    target: GaloisLattice
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_intmat(self.matrix, shape=(self.target.rank, self.source.rank))
        if m.shape != (self.target.rank, self.source.rank):
            raise LatticeError(f"map matrix has shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        for a, b in zip(self.source.generator_matrices, self.target.generator_matrices):
            if not np.array_equal(imatmul(m, a), imatmul(b, m)):
                raise LatticeError("map is not equivariant")

    def to_json(self) -> dict:
        return {"rows": self.target.rank, "cols": self.source.rank, "matrix": self.matrix.tolist()}


def lattice_from_matrices(G: FiniteGroup, matrices, name: str = "") -> GaloisLattice:
    mats = [as_intmat(m) for m in matrices]
    if not mats:
        raise LatticeError("rank cannot be inferred without generator matrices")
    return GaloisLattice(G, mats[0].shape[0], tuple(mats), name=name)


# ---------------------------------------------------------------- constructors


def trivial_lattice(G: FiniteGroup, n: int = 1) -> GaloisLattice:
    eye = np.eye(n, dtype=np.int64)
    return GaloisLattice(G, n, tuple(eye for _ in G.generators), tuple(f"e{i}" for i in range(n)), name=f"trivial:{n}")


def _cosets(G: FiniteGroup, h: Subgroup) -> list[tuple[int, frozenset[int]]]:
    seen: dict[frozenset[int], int] = {}
    out = []
    for s in range(G.order):
        c = frozenset(G.mul(s, x) for x in h.elements)
        if c not in seen:
            seen[c] = len(out)
            out.append((s, c))
    return out


def permutation_lattice(G: FiniteGroup, h: Subgroup) -> GaloisLattice:
    """Z[G/h] with basis the left cosets ``sh`` (ordered by smallest representative)."""
    cos = _cosets(G, h)
    where = {}
    for j, (_, c) in enumerate(cos):
        for x in c:
            where[x] = j
    n = len(cos)
    mats = []
    for g in G.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for j, (s, _) in enumerate(cos):
            m[where[G.mul(g, s)], j] = 1
        mats.append(m)
    tags = tuple(f"{G.label(s)}h" for s, _ in cos)
    return GaloisLattice(G, n, tuple(mats), tags, name=f"Z[G/h{h.order}]")


def coset_representatives(G: FiniteGroup, h: Subgroup) -> list[int]:
    return [s for s, _ in _cosets(G, h)]


def regular_lattice(G: FiniteGroup) -> GaloisLattice:
    return permutation_lattice(G, G.trivial)


def direct_sum(*lattices: GaloisLattice) -> GaloisLattice:
    if not lattices:
        raise LatticeError("empty direct sum")
    G = lattices[0].group
    n = sum(L.rank for L in lattices)
    mats = []
    for pos in range(len(G.generators)):
        m = np.zeros((n, n), dtype=object)
        off = 0
        for L in lattices:
            m[off : off + L.rank, off : off + L.rank] = L.generator_matrices[pos]
            off += L.rank
        mats.append(as_intmat(m, shape=(n, n)))
    tags = None
    if all(L.is_permutation for L in lattices):
        tags = tuple(t for L in lattices for t in L.basis_tags)
    return GaloisLattice(G, n, tuple(mats), tags, name="+".join(L.name for L in lattices))


def dual(L: GaloisLattice) -> GaloisLattice:
    """Contragredient lattice: ``s`` acts by ``action(s^-1)^T``."""
    G = L.group
    mats = tuple(np.ascontiguousarray(L.action(G.inv(g)).T) for g in G.generators)
    return GaloisLattice(G, L.rank, mats, L.basis_tags, name=f"dual({L.name})")


def conjugate_basis(L: GaloisLattice, P) -> GaloisLattice:
    """Same module in the basis given by the columns of unimodular ``P``."""
    P = as_intmat(P, shape=(L.rank, L.rank))
    _, Pinv = complete_basis(P) if L.rank else (P, P)
    mats = tuple(imatmul(imatmul(Pinv, m), P) for m in L.generator_matrices)
    return GaloisLattice(L.group, L.rank, mats, name=L.name)


def fixed_sublattice(L: GaloisLattice, h: Subgroup) -> np.ndarray:
    """HNF-reduced basis (columns) of ``L^h``."""

    def compute():
        eye = np.eye(L.rank, dtype=np.int64)
        if not h.generators or L.rank == 0:
            return eye
        stacked = np.concatenate([L.action(g) - eye for g in h.generators], axis=0)
        return hnf_basis(kernel_basis(stacked))

    return L.cached(("fixed", h.elements), compute)


def norm_matrix(L: GaloisLattice, h: Subgroup) -> np.ndarray:
    out = np.zeros((L.rank, L.rank), dtype=object)
    for s in h.elements:
        out = out + L.action(s)
    return as_intmat(out, shape=(L.rank, L.rank))


def sublattice(L: GaloisLattice, K, name: str = "") -> tuple[GaloisLattice, LatticeMap]:
    """Stable saturated sublattice spanned by the columns of ``K`` with its inclusion map."""
    K = as_intmat(K, shape=(L.rank, 0))
    m = K.shape[1]
    if m == 0:
        S = GaloisLattice(L.group, 0, tuple(np.zeros((0, 0), dtype=np.int64) for _ in L.group.generators), name=name)
        return S, LatticeMap(S, L, np.zeros((L.rank, 0), dtype=np.int64))
    _, Winv = complete_basis(K)
    P = Winv[:m]
    mats = []
    for g in L.generator_matrices:
        gk = imatmul(g, K)
        a = imatmul(P, gk)
        if not np.array_equal(imatmul(K, a), gk):
            raise LatticeError("sublattice is not stable under the action")
        mats.append(a)
    S = GaloisLattice(L.group, m, tuple(mats), name=name)
    return S, LatticeMap(S, L, K)


def quotient(L: GaloisLattice, K, name: str = "") -> tuple[GaloisLattice, LatticeMap]:
    """``L / span(K)`` for a stable saturated ``K``, with the projection map.

    The quotient basis is the image of standard basis vectors of ``L`` when a
    unimodular completion by standard vectors exists (greedy, in index
    order), otherwise of a Smith-form completion.
    """
    K = as_intmat(K, shape=(L.rank, 0))
    n, m = K.shape
    if not is_saturated(K):
        raise LatticeError("quotient by a non-saturated sublattice has torsion")
    chosen: list[int] = []
    cur = K
    for j in range(n):
        if cur.shape[1] == n:
            break
        e = np.zeros((n, 1), dtype=np.int64)
        e[j, 0] = 1
        trial = np.concatenate([cur, e], axis=1)
        if is_saturated(trial):
            cur = trial
            chosen.append(j)
    if cur.shape[1] == n:
        W, Winv = complete_basis(cur)
    else:
        W, Winv = complete_basis(K)
    C = W[:, m:]
    R = Winv[m:]
    mats = tuple(imatmul(imatmul(R, g), C) for g in L.generator_matrices)
    Qt = GaloisLattice(L.group, n - m, mats, name=name)
    return Qt, LatticeMap(L, Qt, as_intmat(R, shape=(n - m, n)))


def norm_one_torus_lattice(G: FiniteGroup) -> tuple[GaloisLattice, LatticeMap]:
    """Character lattice ``Z[G]/(sum of G)`` of the norm-one torus, and ``Z[G] -> it``."""
    Zg = regular_lattice(G)
    N = np.ones((G.order, 1), dtype=np.int64)
    J, proj = quotient(Zg, N, name="norm_one")
    return J, proj


def augmentation_lattice(G: FiniteGroup, h: Subgroup | None = None) -> GaloisLattice:
    """Kernel of the augmentation ``Z[G/h] -> Z``."""
    P = permutation_lattice(G, h or G.trivial)
    aug = np.ones((1, P.rank), dtype=np.int64)
    I, _ = sublattice(P, kernel_basis(aug), name="augmentation")
    return I


def norm_quotient_lattice(G: FiniteGroup, h: Subgroup) -> GaloisLattice:
    """``Z[G/h] / Z * (sum of cosets)``."""
    P = permutation_lattice(G, h)
    J, _ = quotient(P, np.ones((P.rank, 1), dtype=np.int64), name="norm_quotient")
    return J


def builtin_lattice(G: FiniteGroup, spec: str) -> GaloisLattice:
    """Resolve ``regular``, ``norm_one``, ``perm:<class-id>`` or ``trivial:<n>``."""
    if spec == "regular":
        return regular_lattice(G)
    if spec == "norm_one":
        return norm_one_torus_lattice(G)[0]
    kind, _, arg = spec.partition(":")
    if kind == "perm" and arg.isdigit():
        classes = subgroup_classes(G)
        idx = int(arg)
        if idx >= len(classes):
            raise LatticeError(f"subgroup class id {idx} out of range (have {len(classes)})")
        return permutation_lattice(G, classes[idx])
    if kind == "trivial" and arg.isdigit():
        return trivial_lattice(G, int(arg))
    raise LatticeError(f"unknown builtin lattice {spec!r}")
