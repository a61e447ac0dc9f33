import numpy as np
import pytest

from galois_invariants.groups import cyclic_group, klein_four, subgroup_classes, symmetric_group
from galois_invariants.intmat import invariant_factors
from galois_invariants.lattice import (
    GaloisLattice,
    LatticeError,
    LatticeMap,
    builtin_lattice,
    direct_sum,
    dual,
    fixed_sublattice,
    lattice_from_matrices,
    norm_one_torus_lattice,
    permutation_lattice,
    regular_lattice,
    trivial_lattice,
)
from galois_invariants.randomgen import named_group, random_lattice


def _det(m):
    return round(np.linalg.det(m.astype(float)))


def test_permutation_lattice_examples(s3):
    G = klein_four()
    P = permutation_lattice(G, G.whole)
    assert P.rank == 1 and P.same_action(trivial_lattice(G))
    R = regular_lattice(G)
    assert R.rank == 4 and R.is_permutation
    h2 = [h for h in subgroup_classes(s3) if h.order == 2][0]
    assert permutation_lattice(s3, h2).rank == 3


def test_norm_one_examples():
    J, proj = norm_one_torus_lattice(cyclic_group(1))
    assert J.rank == 0
    J, _ = norm_one_torus_lattice(cyclic_group(2))
    assert J.generator_matrices[0].tolist() == [[-1]]
    G = klein_four()
    J, proj = norm_one_torus_lattice(G)
    assert J.rank == 3
    assert isinstance(proj, LatticeMap) and proj.source.rank == 4
    for s in range(4):
        assert abs(_det(J.action(s))) == 1
        assert (J.action(G.mul(s, s)) == np.eye(3)).all()


def test_dual_examples():
    G = cyclic_group(2)
    sign = lattice_from_matrices(G, [[[-1]]])
    assert dual(sign).same_action(sign)
    T = trivial_lattice(klein_four(), 3)
    assert dual(T).same_action(T)
    P = regular_lattice(klein_four())
    assert dual(P).same_action(P)


def test_fixed_sublattice_examples():
    G = klein_four()
    R = regular_lattice(G)
    assert fixed_sublattice(R, G.trivial).shape == (4, 4)
    F = fixed_sublattice(R, G.whole)
    assert F.T.tolist() == [[1, 1, 1, 1]]
    C2 = cyclic_group(2)
    sign = lattice_from_matrices(C2, [[[-1]]])
    assert fixed_sublattice(sign, C2.whole).shape == (1, 0)


@pytest.mark.parametrize("name", ["V4", "S3", "D4", "Q8", "A4", "C2xD4"])
def test_random_lattice_invariants(name, rng):
    G = named_group(name)
    for _ in range(5):
        L = random_lattice(G, rng)
        for s in range(G.order):
            assert abs(_det(L.action(s))) == 1
            for t in range(G.order):
                assert (L.action(G.mul(s, t)) == L.action(s) @ L.action(t)).all()
        assert dual(dual(L)).same_action(L)
        for h in subgroup_classes(G):
            F = fixed_sublattice(L, h)
            for g in h.elements:
                assert (L.action(g) @ F == F).all()
            if F.shape[1]:
                assert set(invariant_factors(F)) == {1}
            P = permutation_lattice(G, h)
            assert P.rank * h.order == G.order


def test_invalid_action_rejected():
    G = klein_four()
    with pytest.raises(LatticeError):
        GaloisLattice(G, 1, ([[2]], [[1]]))
    with pytest.raises(LatticeError):
        # a 3-cycle cannot act by -1
        GaloisLattice(symmetric_group(3), 1, ([[-1]], [[-1]]))


def test_equivariance_checked():
    G = cyclic_group(2)
    sign = lattice_from_matrices(G, [[[-1]]])
    with pytest.raises(LatticeError):
        LatticeMap(trivial_lattice(G), sign, [[1]])


def test_builtins():
    G = klein_four()
    assert builtin_lattice(G, "regular").rank == 4
    assert builtin_lattice(G, "norm_one").rank == 3
    assert builtin_lattice(G, "trivial:2").rank == 2
    assert builtin_lattice(G, "perm:4").rank == 1
    with pytest.raises(LatticeError):
        builtin_lattice(G, "perm:9")
    with pytest.raises(LatticeError):
        builtin_lattice(G, "bogus")
    assert direct_sum(trivial_lattice(G), regular_lattice(G)).rank == 5
