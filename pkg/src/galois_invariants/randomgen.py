"""Random groups and lattices for property checks.

Lattices are direct sums of small building blocks (trivial, permutation,
augmentation and norm-quotient lattices and their duals) written in a
random unimodular basis, so the action matrices are dense but the modules
have interesting cohomology.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .flasque import random_unimodular
from .groups import (
    FiniteGroup,
    Subgroup,
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    klein_four,
    quaternion_group,
    subgroup_classes,
    symmetric_group,
)
from .lattice import (
    GaloisLattice,
    augmentation_lattice,
    conjugate_basis,
    direct_sum,
    dual,
    norm_quotient_lattice,
    permutation_lattice,
    trivial_lattice,
)


def _c(n):
    return lambda: cyclic_group(n)


def _x(*factories):
    def build():
        G = factories[0]()
        for f in factories[1:]:
            G = direct_product(G, f())
        return G

    return build


CATALOG = {
    1: {"C1": _c(1)},
    2: {"C2": _c(2)},
    3: {"C3": _c(3)},
    4: {"C4": _c(4), "V4": klein_four},
    6: {"C6": _c(6), "S3": lambda: symmetric_group(3)},
    8: {
        "C8": _c(8),
        "C2xC4": _x(_c(2), _c(4)),
        "C2^3": _x(_c(2), _c(2), _c(2)),
        "D4": lambda: dihedral_group(4),
        "Q8": quaternion_group,
    },
    12: {
        "C12": _c(12),
        "C2xC6": _x(_c(2), _c(6)),
        "A4": lambda: alternating_group(4),
        "D6": lambda: dihedral_group(6),
    },
    16: {
        "C4xC4": _x(_c(4), _c(4)),
        "C2^4": _x(_c(2), _c(2), _c(2), _c(2)),
        "C2^2xC4": _x(_c(2), _c(2), _c(4)),
        "D8": lambda: dihedral_group(8),
        "C2xD4": _x(_c(2), lambda: dihedral_group(4)),
        "C2xQ8": _x(_c(2), quaternion_group),
    },
    24: {"S4": lambda: symmetric_group(4)},
}


@lru_cache(maxsize=None)
def named_group(name: str) -> FiniteGroup:
    for table in CATALOG.values():
        if name in table:
            return table[name]()
    raise KeyError(name)


def random_group(rng: random.Random, orders=(4, 6, 8, 12, 16)) -> tuple[str, FiniteGroup]:
    order = rng.choice(list(orders))
    name = rng.choice(sorted(CATALOG[order]))
    return name, named_group(name)


def _atoms(G: FiniteGroup, h: Subgroup) -> list[GaloisLattice]:
    idx = G.order // h.order
    out = [permutation_lattice(G, h)]
    if idx > 1:
        out += [augmentation_lattice(G, h), norm_quotient_lattice(G, h)]
    return out


def random_lattice(G: FiniteGroup, rng: random.Random, max_rank: int = 6, min_rank: int = 1) -> GaloisLattice:
    """Sum of random blocks of total rank in ``[min_rank, max_rank]`` in a random basis."""
    classes = subgroup_classes(G)
    target = rng.randint(min_rank, max_rank)
    parts: list[GaloisLattice] = []
    rank = 0
    while rank < target:
        room = target - rank
        choices = [h for h in classes if G.order // h.order <= room + 1 and G.order // h.order > 1]
        if not choices or rng.random() < 0.15:
            parts.append(trivial_lattice(G, 1))
            rank += 1
            continue
        h = rng.choice(choices)
        atoms = [a for a in _atoms(G, h) if 0 < a.rank <= room]
        if not atoms:
            parts.append(trivial_lattice(G, 1))
            rank += 1
            continue
        a = rng.choice(atoms)
        if rng.random() < 0.5:
            a = dual(a)
        parts.append(a)
        rank += a.rank
    L = direct_sum(*parts) if len(parts) > 1 else parts[0]
    P = random_unimodular(L.rank, rng)
    out = conjugate_basis(L, P)
    return GaloisLattice(G, out.rank, out.generator_matrices, name="random:" + "+".join(p.name for p in parts))


def random_noncyclic_places(G: FiniteGroup, rng: random.Random) -> list[Subgroup]:
    """A random subset of the non-cyclic subgroup classes."""
    pool = [h for h in subgroup_classes(G) if h.classification != "cyclic"]
    return [h for h in pool if rng.random() < 0.5]
