"""Finite abelian groups in Smith coordinates, homomorphisms, kernels and images."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .intmat import as_intmat, imatmul, kernel_basis, smith


def _mod_rows(X: np.ndarray, moduli) -> np.ndarray:
    if X.shape[0] == 0:
        return X
    d = np.array(moduli, dtype=object).reshape(-1, 1)
    return as_intmat(X.astype(object) % d, shape=X.shape)


def format_factors(factors) -> str:
    """``"Z/2 x Z/4"``; the trivial group is ``"0"``."""
    return " x ".join(f"Z/{d}" for d in factors) or "0"


@dataclass(frozen=True, eq=False)
class FiniteAbelianGroup:
    """``Z/d1 x ... x Z/dt`` with ``d1 | d2 | ...``, realised as a subquotient of ``Z^n``.

    ``witnesses[:, i]`` is an ambient vector generating the ``i``-th cyclic
    factor; ``reduce`` sends an ambient vector (lying in the numerator
    lattice) to its class coordinates.
    """

    invariant_factors: tuple[int, ...]
    witnesses: np.ndarray = field(repr=False)
    projector: np.ndarray = field(repr=False)

    @classmethod
    def from_cokernel(cls, relations, ambient_dim: int | None = None) -> "FiniteAbelianGroup":
        """Torsion subgroup of ``Z^n / span(columns of relations)``."""
        R = as_intmat(relations, shape=(ambient_dim or 0, 0))
        n = R.shape[0] if ambient_dim is None else ambient_dim
        if n == 0:
            return cls.trivial(0)
        if R.shape[1] == 0:
            return cls.trivial(n)
        sf = smith(R)
        idx = [i for i, d in enumerate(sf.diagonal) if d > 1]
        factors = tuple(sf.diagonal[i] for i in idx)
        W = as_intmat(sf.Uinv[:, idx], shape=(n, 0))
        P = _mod_rows(as_intmat(sf.U[idx], shape=(0, n)), factors)
        return cls(factors, W, P)

    @classmethod
    def trivial(cls, ambient_dim: int = 0) -> "FiniteAbelianGroup":
        return cls((), np.zeros((ambient_dim, 0), dtype=np.int64), np.zeros((0, ambient_dim), dtype=np.int64))

    @classmethod
    def from_factors(cls, factors) -> "FiniteAbelianGroup":
        """The group ``Z/d1 x ...`` on its own coordinates (factors need not be normalised)."""
        fs = [int(d) for d in factors]
        return cls.from_cokernel(np.diag(fs).reshape(len(fs), len(fs)), len(fs))

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def ambient_dim(self) -> int:
        return self.witnesses.shape[0]

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def reduce(self, x) -> np.ndarray:
        x = as_intmat(np.asarray(x, dtype=object).reshape(-1, 1), shape=(self.ambient_dim, 1))
        return self.reduce_columns(x)[:, 0]

    def reduce_columns(self, X) -> np.ndarray:
        X = as_intmat(X, shape=(self.ambient_dim, 0))
        return _mod_rows(imatmul(self.projector, X), self.invariant_factors)

    def __str__(self) -> str:
        return format_factors(self.invariant_factors)

    def to_json(self, witnesses: bool = False) -> dict:
        out = {"invariant_factors": list(self.invariant_factors), "order": self.order}
        if witnesses:
            out["witnesses"] = self.witnesses.T.tolist()
        return out


@dataclass(frozen=True, eq=False)
class AbelianHom:
    """Homomorphism in class coordinates: column ``j`` is the image of generator ``j``."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _mod_rows(as_intmat(self.matrix, shape=(self.target.ngens, self.source.ngens)), self.target.invariant_factors)
        if m.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(f"hom matrix has shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        for j, d in enumerate(self.source.invariant_factors):
            if _mod_rows(m[:, j : j + 1].astype(object) * d, self.target.invariant_factors).any():
                raise ValueError("hom does not respect the source relations")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=object).reshape(-1, 1)
        return _mod_rows(as_intmat(self.matrix.astype(object) @ x, shape=(self.target.ngens, 1)), self.target.invariant_factors)[:, 0]

    def compose(self, first: "AbelianHom") -> "AbelianHom":
        """``self o first``."""
        if first.target is not self.target and first.target.invariant_factors != self.source.invariant_factors:
            raise ValueError("homs are not composable")
        return AbelianHom(first.source, self.target, imatmul(self.matrix, first.matrix))

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def is_identity(self) -> bool:
        return self.source.invariant_factors == self.target.invariant_factors and np.array_equal(
            self.matrix, np.eye(self.source.ngens, dtype=self.matrix.dtype)
        )

    def to_json(self) -> dict:
        return {
            "source": list(self.source.invariant_factors),
            "target": list(self.target.invariant_factors),
            "matrix": self.matrix.tolist(),
        }


def direct_sum(groups) -> FiniteAbelianGroup:
    """``G1 x G2 x ...`` on concatenated class coordinates of the summands."""
    factors = [d for g in groups for d in g.invariant_factors]
    return FiniteAbelianGroup.from_factors(factors)


def _relation_lattice(G: np.ndarray, moduli) -> np.ndarray:
    # {y in Z^m : G y = 0 mod moduli}
    t, m = G.shape
    if t == 0:
        return np.eye(m, dtype=np.int64)
    A = np.concatenate([G.astype(object), np.diag(np.array(moduli, dtype=object)).reshape(t, t)], axis=1)
    K = kernel_basis(as_intmat(A))
    return as_intmat(K[:m], shape=(m, K.shape[1]))


def generated_subgroup(A: FiniteAbelianGroup, gens) -> tuple[FiniteAbelianGroup, AbelianHom]:
    """Subgroup of ``A`` generated by the columns ``gens`` (class coordinates).

    Returns the subgroup (on generator coordinates) and its inclusion into ``A``.
    """
    G = as_intmat(gens, shape=(A.ngens, 0))
    m = G.shape[1]
    S = FiniteAbelianGroup.from_cokernel(_relation_lattice(G, A.invariant_factors), m)
    incl = AbelianHom(S, A, imatmul(G, S.witnesses))
    return S, incl


def image(f: AbelianHom) -> FiniteAbelianGroup:
    return generated_subgroup(f.target, f.matrix)[0]


def kernel(f: AbelianHom) -> tuple[FiniteAbelianGroup, AbelianHom]:
    """Kernel of ``f`` with its inclusion into ``f.source``."""
    a = f.source.ngens
    rel = np.concatenate(
        [f.matrix.astype(object), np.diag(np.array(f.target.invariant_factors, dtype=object)).reshape(f.target.ngens, -1)],
        axis=1,
    ) if f.target.ngens else np.zeros((0, a), dtype=np.int64)
    K = kernel_basis(as_intmat(rel, shape=(0, a)))[:a]
    return generated_subgroup(f.source, K)


def quotient(A: FiniteAbelianGroup, gens) -> tuple[FiniteAbelianGroup, AbelianHom]:
    """``A / <gens>`` with the projection ``A -> A/<gens>``."""
    t = A.ngens
    G = as_intmat(gens, shape=(t, 0))
    rel = np.concatenate([np.diag(np.array(A.invariant_factors, dtype=object)).reshape(t, t), G.astype(object)], axis=1)
    Q = FiniteAbelianGroup.from_cokernel(as_intmat(rel, shape=(t, 0)), t)
    return Q, AbelianHom(A, Q, Q.projector)


def subquotient(A: FiniteAbelianGroup, numer, denom) -> FiniteAbelianGroup:
    """``<numer> / <denom>`` inside ``A``; requires ``<denom> <= <numer>``."""
    Q, proj = quotient(A, denom)
    Xn = as_intmat(numer, shape=(A.ngens, 0))
    S, _ = generated_subgroup(Q, imatmul(proj.matrix, Xn))
    return S
