"""Connected reductive groups through the torus quotient of a z-extension.

The z-extension ``H -> G`` and the character lattice of ``T = H/[H, H]`` are
inputs; Brauer classes, the weak approximation defect and, under the
hypotheses recorded in :class:`ReductiveDescriptor`, the R-equivalence
classes of ``G`` are read off the torus report of ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import FiniteAbelianGroup
from .arithmetic import PlacesError, PlacesSpec, TorusReport, torus_report
from .groups import FiniteGroup
from .lattice import GaloisLattice

CONDITIONAL_NOTE = (
    "G has an anisotropic trialitarian D4 or E6 factor over a base field with a real place; "
    "G(k)/R ~ T(k)/R is only known under the Thm 4.12 reduction, which depends on a "
    "Platonov-Margulis type statement for the kernel of rho_G. Unconditionally (Thm 4.11) "
    "the image of G(k)/R in prod_v G(k_v)/R has order n_T."
)

REASONS = ("inner_type", "metacyclic_split", "cyclic_decomposition_group", "local_brauer_trivial")


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReductiveDescriptor:
    group: FiniteGroup
    torus_lattice: GaloisLattice
    has_anisotropic_trialitarian_D4_or_E6: bool = False
    base_totally_imaginary: bool = False
    inner_type_places: tuple[str, ...] = ()
    metacyclic_split_places: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.torus_lattice.group is not self.group:
            raise DescriptorError("torus quotient lattice is over a different group")
        object.__setattr__(self, "inner_type_places", tuple(self.inner_type_places))
        object.__setattr__(self, "metacyclic_split_places", tuple(self.metacyclic_split_places))

    def validate(self, places: PlacesSpec) -> None:
        known = set(places.labels)
        for kind, labels in (("inner_type_places", self.inner_type_places), ("metacyclic_split_places", self.metacyclic_split_places)):
            for lab in labels:
                if lab not in known:
                    raise DescriptorError(f"{kind}: unknown place label {lab!r}")

    @property
    def r_classes_unconditional(self) -> bool:
        return not self.has_anisotropic_trialitarian_D4_or_E6 or self.base_totally_imaginary


@dataclass(frozen=True, eq=False)
class GroupReport:
    descriptor: ReductiveDescriptor
    torus: TorusReport
    brauer_classes: FiniteAbelianGroup
    wa_defect: FiniteAbelianGroup
    r_status: str
    r_classes_order: int | None
    r_image_order: int
    sha_S: FiniteAbelianGroup | None = field(default=None)

    def to_json(self, witnesses: bool = False) -> dict:
        r = {
            "status": self.r_status,
            "image_order_in_local_product": self.r_image_order,
        }
        if self.r_classes_order is not None:
            r["order"] = self.r_classes_order
            r["sha_S"] = self.sha_S.to_json(witnesses)
        else:
            r["note"] = CONDITIONAL_NOTE
        return {
            "brauer_classes": self.brauer_classes.to_json(witnesses),
            "wa_defect": self.wa_defect.to_json(witnesses),
            "wa_verdict": self.torus.wa_verdict,
            "r_classes": r,
            "flags": {
                "has_anisotropic_trialitarian_D4_or_E6": self.descriptor.has_anisotropic_trialitarian_D4_or_E6,
                "base_totally_imaginary": self.descriptor.base_totally_imaginary,
            },
            "provenance": {
                "brauer_classes": "Thm 3.7 and Prop 3.6(1): G(k)/Br ~ T(k)/Br",
                "wa_defect": "Lemma 3.8 and Cor 3.9: A(G) ~ A(T)",
                "r_classes": "Thm 4.12(2),(3): G(k)/R ~ T(k)/R; Thm 4.11: image of order n_T",
            },
            "torus_quotient_invariants": self.torus.to_json(witnesses),
        }


def group_report(
    desc: ReductiveDescriptor,
    places: PlacesSpec | None = None,
    *,
    cross_check_sha: bool = False,
    torus: TorusReport | None = None,
) -> GroupReport:
    """Invariants of ``G`` from those of its torus quotient."""
    places = places or PlacesSpec()
    desc.validate(places)
    t = torus or torus_report(desc.group, desc.torus_lattice, places, cross_check_sha=cross_check_sha)
    unconditional = desc.r_classes_unconditional
    return GroupReport(
        descriptor=desc,
        torus=t,
        brauer_classes=t.brauer_classes,
        wa_defect=t.wa_defect,
        r_status="unconditional" if unconditional else "conditional",
        r_classes_order=t.r_classes_order if unconditional else None,
        r_image_order=t.n_T,
        sha_S=t.sha_S if unconditional else None,
    )


@dataclass(frozen=True)
class PlaceVerdict:
    place: str
    local_brauer_trivial: bool
    reason: str | None

    def to_json(self) -> dict:
        return {"place": self.place, "local_brauer_trivial": self.local_brauer_trivial, "reason": self.reason}


@dataclass(frozen=True)
class WACriteria:
    places: tuple[PlaceVerdict, ...]
    verdict: str
    holds_in_S: bool
    picard_trivial: bool
    wa_defect: FiniteAbelianGroup

    def to_json(self) -> dict:
        out = {
            "places": [p.to_json() for p in self.places],
            "verdict": self.verdict,
            "holds_in_S": self.holds_in_S,
            "global_picard_criterion": self.picard_trivial,
            "provenance": {
                "inner_type": "Thm 4.3 / Prop 4.4",
                "metacyclic_split": "Prop 4.7",
                "cyclic_decomposition_group": "Prop 4.7 (cyclic is metacyclic)",
                "local_brauer_trivial": "Thm 1.1(4) and Thm 3.7: G(k_v)/Br ~ H^1(G_v, S^)",
                "holds_in_S": "Prop 4.1",
                "global_picard_criterion": "Thm 4.2.2",
            },
        }
        if self.verdict == "fails":
            out["witness_wa_defect"] = self.wa_defect.to_json()
        return out


def wa_criteria(
    desc: ReductiveDescriptor,
    places: PlacesSpec,
    query_places,
    report: TorusReport | None = None,
) -> WACriteria:
    """Weak approximation verdict for the places in ``query_places``.

    Each place gets the first applicable reason in :data:`REASONS`.  When all
    queried places pass, weak approximation holds in that set; it holds
    globally iff the defect vanishes, otherwise the verdict is
    ``holds_for_listed_places_only``.  A place without any reason only
    matters when the defect is nonzero, in which case the verdict is
    ``fails`` with the defect as witness.
    """
    desc.validate(places)
    t = report or torus_report(desc.group, desc.torus_lattice, places, compute_sha_S=False)
    inner = set(desc.inner_type_places)
    meta = set(desc.metacyclic_split_places)
    verdicts = []
    for lab in query_places:
        try:
            p = places.place(lab)
        except PlacesError as exc:
            raise DescriptorError(str(exc)) from exc
        if lab in inner:
            reason = "inner_type"
        elif lab in meta:
            reason = "metacyclic_split"
        elif p.subgroup.is_cyclic:
            reason = "cyclic_decomposition_group"
        elif t.local_brauer[lab].is_trivial:
            reason = "local_brauer_trivial"
        else:
            reason = None
        verdicts.append(PlaceVerdict(lab, reason is not None, reason))
    holds_in_S = all(v.local_brauer_trivial for v in verdicts)
    if t.wa_defect.is_trivial:
        verdict = "holds"
    elif holds_in_S:
        verdict = "holds_for_listed_places_only"
    else:
        verdict = "fails"
    return WACriteria(tuple(verdicts), verdict, holds_in_S, t.picard_trivial, t.wa_defect)
