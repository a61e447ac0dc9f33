"""Randomised property suites behind ``invariants verify``."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field

from .arithmetic import PlacesSpec, degree2_kernel, restriction_system, torus_report
from .bar import BarCohomology
from .cohomology import DEGREES, dimension_shift, restriction, tate
from .flasque import flasque_resolution, variant_options
from .groups import all_subgroups, subgroup_classes
from .lattice import dual, permutation_lattice
from .randomgen import random_group, random_lattice, random_noncyclic_places

log = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
        }


def _bar_oracle(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng, orders=(2, 3, 4, 6, 8))
        M = random_lattice(G, rng, max_rank=4)
        h = rng.choice(all_subgroups(G))
        got = tate(1, h, M).invariant_factors
        want = BarCohomology(1, h, M).group.invariant_factors
        yield got == want, f"{name} |h|={h.order} {M.name}: {got} vs bar {want}"


def _periodicity(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        cyc = [h for h in subgroup_classes(G) if h.is_cyclic]
        h = rng.choice(cyc)
        a, b = tate(1, h, M).invariant_factors, tate(-1, h, M).invariant_factors
        yield a == b, f"{name} |h|={h.order} {M.name}: H^1 {a} H^-1 {b}"


def _shapiro(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        classes = subgroup_classes(G)
        hp = rng.choice(classes)
        P = permutation_lattice(G, hp)
        for h in classes:
            H = tate(1, h, P)
            yield H.is_trivial, f"{name} H^1(|h|={h.order}, Z[G/h'], |h'|={hp.order}) = {H}"


def _induced(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng, orders=(2, 3, 4, 6))
        M = random_lattice(G, rng, max_rank=3)
        middle = dimension_shift(M)[1].target
        h = rng.choice(subgroup_classes(G))
        for i in DEGREES:
            H = tate(i, h, middle)
            yield H.is_trivial, f"{name} H^{i}(|h|={h.order}, Z[G] x {M.name}) = {H}"


def _functoriality(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        subs = all_subgroups(G)
        h = rng.choice(subs)
        mid = rng.choice([s for s in subs if s.issubset(h)])
        low = rng.choice([s for s in subs if s.issubset(mid)])
        direct = restriction(h, low, M)
        via = restriction(mid, low, M).compose(restriction(h, mid, M))
        ok = (direct.matrix == via.matrix).all() if direct.matrix.size else True
        yield bool(ok), f"{name} {h.order}>{mid.order}>{low.order} {M.name}"


def _flasque(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        R = flasque_resolution(M)
        yield R.certificate.flasque, f"{name} {M.name}"


def _independence(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        a = flasque_resolution(M)
        b = flasque_resolution(M, **variant_options(G, rng.randrange(1 << 30)))
        for h in subgroup_classes(G):
            x, y = tate(1, h, a.S_hat).invariant_factors, tate(1, h, b.S_hat).invariant_factors
            yield x == y, f"{name} {M.name} |h|={h.order}: {x} vs {y}"


def _places(G, rng):
    return PlacesSpec.from_subgroups(G, [(f"v{i}", h) for i, h in enumerate(random_noncyclic_places(G, rng))])


def _order_identity(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        P = _places(G, rng)
        sys = restriction_system(flasque_resolution(M), P)
        ok = sys.mu_image.order * sys.mu_kernel.order == sys.global_h1.order
        yield ok, f"{name} {M.name} places={P.labels}"


def _sha_cross(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng, orders=(4, 6, 8))
        M = random_lattice(G, rng, max_rank=4)
        P = _places(G, rng)
        res = flasque_resolution(M)
        a = restriction_system(res, P).mu_kernel.invariant_factors
        b = degree2_kernel(M, P).invariant_factors
        yield a == b, f"{name} {M.name} places={P.labels}: ker mu {a} vs degree 2 {b}"


def _dual(rng, cases):
    for _ in range(cases):
        name, G = random_group(rng)
        M = random_lattice(G, rng)
        yield dual(dual(M)).same_action(M), f"{name} {M.name}"


def _cyclic_trivial(rng, cases):
    from .groups import cyclic_group

    for _ in range(cases):
        G = cyclic_group(rng.choice((2, 3, 4, 6, 8)))
        M = random_lattice(G, rng)
        r = torus_report(G, M)
        ok = all(
            g.is_trivial for g in (r.picard_invariant, r.brauer_classes, r.wa_defect, r.sha_T, r.sha_S)
        ) and r.wa_verdict == "holds"
        yield ok, f"C{G.order} {M.name}"


SUITES = {
    "bar_oracle_h1": _bar_oracle,
    "cyclic_periodicity": _periodicity,
    "shapiro_vanishing": _shapiro,
    "induced_acyclicity": _induced,
    "restriction_functoriality": _functoriality,
    "flasque_certification": _flasque,
    "resolution_independence": _independence,
    "order_identity_V": _order_identity,
    "sha_cross_oracle": _sha_cross,
    "dual_involution": _dual,
    "cyclic_triviality": _cyclic_trivial,
}


def run_suites(seed: int = 1, cases: int = 10, names=None) -> list[SuiteResult]:
    """Run the property suites; each suite gets its own generator derived from ``seed``."""
    out = []
    for name in names or SUITES:
        rng = random.Random(f"{seed}:{name}")
        res = SuiteResult(name)
        t0 = time.perf_counter()
        for ok, desc in SUITES[name](rng, cases):
            res.cases += 1
            if not ok:
                res.failures.append(desc)
                log.warning("%s failed: %s", name, desc)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
