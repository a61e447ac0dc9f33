"""Flasque resolutions ``0 -> T^ -> N^ -> S^ -> 0`` of character lattices.

The resolution is the dual of a coflasque cover ``0 -> C -> Q -> T^* -> 0``
with ``Q`` a permutation lattice: ``Q`` is a sum of blocks ``Z[G/h] f``
mapping the identity coset to an ``h``-fixed vector ``f``; once the image of
``Q^h`` is all of ``M^h`` for every subgroup ``h``, ``H^1(h, C) = 0``.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .cohomology import tate
from .groups import FiniteGroup, Subgroup, subgroup_classes
from .intmat import as_intmat, imatmul, is_saturated, kernel_basis, smith
from .lattice import (
    GaloisLattice,
    LatticeMap,
    coset_representatives,
    direct_sum,
    dual,
    fixed_sublattice,
    permutation_lattice,
    sublattice,
)

log = logging.getLogger(__name__)


class CertificationError(RuntimeError):
    """A computed certificate failed; indicates a bug, not a mathematical possibility."""


@dataclass(frozen=True)
class Block:
    subgroup: Subgroup
    vector: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CoflasqueCover:
    C: GaloisLattice
    Q: GaloisLattice
    surjection: LatticeMap
    inclusion: LatticeMap
    blocks: tuple[Block, ...]

    def __iter__(self):
        # unpacks as (C, Q, surjection)
        return iter((self.C, self.Q, self.surjection))


@dataclass
class FlasqueCertificate:
    rows: list[dict] = field(default_factory=list)

    @property
    def flasque(self) -> bool:
        return all(r["trivial"] for r in self.rows)

    def to_json(self) -> dict:
        return {"flasque": self.flasque, "classes": self.rows}


@dataclass(frozen=True, eq=False)
class FlasqueResolutionData:
    T_hat: GaloisLattice
    N_hat: GaloisLattice
    S_hat: GaloisLattice
    inject: LatticeMap
    project: LatticeMap
    certificate: FlasqueCertificate
    cover: CoflasqueCover = field(repr=False)

    def to_json(self) -> dict:
        return {
            "T_hat": self.T_hat.to_json(),
            "N_hat": {**self.N_hat.to_json(), "permutation_basis": list(self.N_hat.basis_tags or ())},
            "S_hat": self.S_hat.to_json(),
            "inject": self.inject.to_json(),
            "project": self.project.to_json(),
            "certificate": self.certificate.to_json(),
            "blocks": [
                {"subgroup": list(b.subgroup.elements), "vector": list(b.vector)} for b in self.cover.blocks
            ],
        }


# ------------------------------------------------------------------ the cover


def _orbit_sum_images(G: FiniteGroup, M: GaloisLattice, blocks: list[Block], h: Subgroup) -> list[np.ndarray]:
    """Images in ``M`` of the ``h``-orbit sums of the coset basis of every block."""
    out = []
    for b in blocks:
        f = np.array(b.vector, dtype=object)
        H = b.subgroup
        seen: set[frozenset[int]] = set()
        for s in coset_representatives(G, H):
            coset = frozenset(G.mul(s, x) for x in H.elements)
            if coset in seen:
                continue
            orbit = {frozenset(G.mul(t, y) for y in coset) for t in h.elements}
            seen |= orbit
            total = np.zeros(M.rank, dtype=object)
            for c in orbit:
                rep = min(c)
                total = total + M.action(rep).astype(object) @ f
            out.append(total)
    return out


def _lattice_measure(vectors: list[np.ndarray], n: int) -> tuple[int, int]:
    if not vectors:
        return 0, 1
    d = smith(as_intmat(np.array(vectors, dtype=object).T, shape=(n, len(vectors)))).diagonal
    prod = 1
    for x in d:
        prod *= x
    return len(d), prod


def coflasque_cover(
    M: GaloisLattice,
    order: list[Subgroup] | None = None,
    basis_change: Callable[[Subgroup, int], np.ndarray] | None = None,
    prune: bool = True,
) -> CoflasqueCover:
    """Permutation lattice ``Q`` onto ``M`` with coflasque kernel ``C``.

    Blocks ``Z[G/h]`` are considered for each subgroup class ``h`` in
    ``order`` (default: decreasing order, then canonical).  With ``prune``
    only fixed vectors that enlarge the image of ``Q^h`` are added; without
    it every basis vector of every ``M^h`` gets a block.  ``basis_change``
    returns, for a class and the rank of its fixed lattice, a unimodular
    matrix applied to the canonical fixed basis.  The coflasque property is certified over every class.
    """
    G = M.group
    classes = subgroup_classes(G)
    if order is None:
        order = sorted(classes, key=lambda h: (-h.order, h.elements))
    blocks: list[Block] = []
    for h in order:
        F = fixed_sublattice(M, h)
        if basis_change is not None and F.shape[1]:
            F = imatmul(F, as_intmat(basis_change(h, F.shape[1])))
        m = F.shape[1]
        if m == 0:
            continue
        if not prune:
            blocks.extend(Block(h, tuple(int(x) for x in F[:, j])) for j in range(m))
            continue
        img = _orbit_sum_images(G, M, blocks, h)
        measure = _lattice_measure(img, M.rank)
        for j in range(m):
            if measure == (m, 1):
                break
            f = F[:, j]
            img_f = img + _orbit_sum_images(G, M, [Block(h, tuple(int(x) for x in f))], h)
            new = _lattice_measure(img_f, M.rank)
            if new != measure:
                blocks.append(Block(h, tuple(int(x) for x in f)))
                img, measure = img_f, new
    return _assemble_cover(M, blocks, classes)


def _assemble_cover(M: GaloisLattice, blocks: list[Block], classes: list[Subgroup]) -> CoflasqueCover:
    G = M.group
    if blocks:
        Q = direct_sum(*[permutation_lattice(G, b.subgroup) for b in blocks])
        cols = []
        for b in blocks:
            f = np.array(b.vector, dtype=object)
            for s in coset_representatives(G, b.subgroup):
                cols.append(M.action(s).astype(object) @ f)
        q = as_intmat(np.array(cols, dtype=object).T, shape=(M.rank, len(cols)))
    else:
        Q = GaloisLattice(G, 0, tuple(np.zeros((0, 0), dtype=np.int64) for _ in G.generators), (), name="0")
        q = np.zeros((M.rank, 0), dtype=np.int64)
    surj = LatticeMap(Q, M, q)
    if M.rank and _lattice_measure(list(q.T), M.rank) != (M.rank, 1):
        raise CertificationError("cover map is not surjective")
    K = kernel_basis(q) if Q.rank else np.zeros((0, 0), dtype=np.int64)
    C, incl = sublattice(Q, K, name="C")
    for h in classes:
        if not tate(1, h, C).is_trivial:
            raise CertificationError(f"H^1 of the cover kernel is nonzero on a subgroup of order {h.order}")
    return CoflasqueCover(C, Q, surj, incl, tuple(blocks))


# ------------------------------------------------------------- the resolution


def certify_flasque(L: GaloisLattice) -> FlasqueCertificate:
    """``H^-1(h, L)`` over every subgroup class."""
    cert = FlasqueCertificate()
    for idx, h in enumerate(subgroup_classes(L.group)):
        H = tate(-1, h, L)
        cert.rows.append(
            {
                "class_id": idx,
                "order": h.order,
                "classification": h.classification,
                "elements": list(h.elements),
                "H^-1": list(H.invariant_factors),
                "trivial": H.is_trivial,
            }
        )
    return cert


def _check_exact(inject: LatticeMap, project: LatticeMap) -> None:
    a, b = inject.matrix, project.matrix
    if a.size and b.size and imatmul(b, a).any():
        raise CertificationError("project o inject != 0")
    if a.shape[1] and not is_saturated(a):
        raise CertificationError("inject is not a saturated embedding")
    if b.shape[0] and not is_saturated(b.T.copy()):
        raise CertificationError("project is not surjective")
    if inject.target.rank != inject.source.rank + project.target.rank:
        raise CertificationError("ranks do not add up")


def flasque_resolution(T_hat: GaloisLattice, **cover_options) -> FlasqueResolutionData:
    """Certified ``0 -> T^ -> N^ -> S^ -> 0`` with ``N^`` permutation and ``S^`` flasque."""
    M = dual(T_hat)
    cover = coflasque_cover(M, **cover_options)
    C, Q, q = cover.C, cover.Q, cover.surjection
    N_hat = dual(Q)
    if not N_hat.same_action(Q):
        raise CertificationError("dual of the permutation block is not itself")
    S_hat = dual(C)
    inject = LatticeMap(T_hat, N_hat, q.matrix.T.copy())
    project = LatticeMap(N_hat, S_hat, cover.inclusion.matrix.T.copy())
    _check_exact(inject, project)
    cert = certify_flasque(S_hat)
    if not cert.flasque:
        raise CertificationError("flasque part has nonzero H^-1")
    log.debug("flasque resolution: rank N=%d S=%d", N_hat.rank, S_hat.rank)
    return FlasqueResolutionData(T_hat, N_hat, S_hat, inject, project, cert, cover)


def variant_options(G: FiniteGroup, seed: int) -> dict:
    """Cover options with a shuffled class ordering and random fixed-basis changes."""
    rng = random.Random(seed)
    order = list(subgroup_classes(G))
    rng.shuffle(order)
    return {"order": order, "basis_change": lambda h, m: random_unimodular(m, rng)}


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> np.ndarray:
    """Product of random elementary matrices (entries stay small)."""
    A = np.eye(n, dtype=np.int64)
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            A[0, 0] = -1
        return A
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        A[i] += c * A[j]
    perm = list(range(n))
    rng.shuffle(perm)
    return A[perm]
