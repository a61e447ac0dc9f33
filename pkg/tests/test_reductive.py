import pytest

from galois_invariants.arithmetic import PlacesSpec, torus_report
from galois_invariants.groups import klein_four, subgroup_classes
from galois_invariants.lattice import norm_one_torus_lattice, trivial_lattice
from galois_invariants.randomgen import named_group, random_lattice
from galois_invariants.reductive import DescriptorError, ReductiveDescriptor, group_report, wa_criteria


def test_simply_connected_group():
    G = klein_four()
    desc = ReductiveDescriptor(G, trivial_lattice(G, 0))
    rep = group_report(desc)
    assert rep.brauer_classes.is_trivial and rep.wa_defect.is_trivial
    assert rep.r_status == "unconditional" and rep.r_classes_order == 1


def test_pgl_via_gl():
    G = named_group("S3")
    rep = group_report(ReductiveDescriptor(G, trivial_lattice(G, 1)))
    assert rep.brauer_classes.is_trivial and rep.wa_defect.is_trivial
    assert rep.torus.wa_verdict == "holds" and rep.r_classes_order == 1


def test_biquadratic_torus_quotient():
    G = klein_four()
    J, _ = norm_one_torus_lattice(G)
    rep = group_report(ReductiveDescriptor(G, J))
    assert rep.brauer_classes.is_trivial and rep.wa_defect.is_trivial
    assert rep.r_classes_order == rep.torus.sha_S.order * rep.torus.n_T
    doc = rep.to_json()
    assert doc["torus_quotient_invariants"]["sha_T"]["invariant_factors"] == [2]


def test_conditional_status():
    G = klein_four()
    J, _ = norm_one_torus_lattice(G)
    desc = ReductiveDescriptor(G, J, has_anisotropic_trialitarian_D4_or_E6=True)
    rep = group_report(desc)
    assert rep.r_status == "conditional" and rep.r_classes_order is None
    assert rep.r_image_order == rep.torus.n_T
    doc = rep.to_json()
    assert "order" not in doc["r_classes"] and "4.12" in doc["r_classes"]["note"]
    rep2 = group_report(ReductiveDescriptor(G, J, has_anisotropic_trialitarian_D4_or_E6=True, base_totally_imaginary=True))
    assert rep2.r_status == "unconditional"


def _biquadratic_with_place():
    G = klein_four()
    J, _ = norm_one_torus_lattice(G)
    h2 = [h for h in subgroup_classes(G) if h.order == 2][0]
    places = PlacesSpec.from_subgroups(G, [("v", G.whole), ("w", h2)])
    return G, J, places


def test_wa_criteria_inner_type():
    G, J, places = _biquadratic_with_place()
    wc = wa_criteria(ReductiveDescriptor(G, J, inner_type_places=("v",)), places, ["v"])
    assert wc.places[0].reason == "inner_type"
    assert wc.holds_in_S and wc.verdict == "holds_for_listed_places_only"


def test_wa_criteria_cyclic_and_failure():
    G, J, places = _biquadratic_with_place()
    desc = ReductiveDescriptor(G, J)
    wc = wa_criteria(desc, places, ["w"])
    assert wc.places[0].reason == "cyclic_decomposition_group"
    assert wc.holds_in_S
    wc = wa_criteria(desc, places, ["v", "w"])
    assert not wc.places[0].local_brauer_trivial
    assert wc.verdict == "fails"
    assert wc.wa_defect.invariant_factors == (2,)
    assert wc.to_json()["witness_wa_defect"]["invariant_factors"] == [2]


def test_wa_criteria_reason_priority():
    G, J, places = _biquadratic_with_place()
    desc = ReductiveDescriptor(G, J, inner_type_places=("w",), metacyclic_split_places=("w", "v"))
    wc = wa_criteria(desc, places, ["w", "v"])
    assert [p.reason for p in wc.places] == ["inner_type", "metacyclic_split"]
    assert wc.holds_in_S


def test_wa_criteria_monotone(rng):
    G, J, places = _biquadratic_with_place()
    order = {"fails": 0, "holds_for_listed_places_only": 1, "holds": 2}
    for inner in ((), ("v",)):
        for meta in ((), ("v",), ("w",)):
            base = wa_criteria(ReductiveDescriptor(G, J, inner_type_places=inner, metacyclic_split_places=meta), places, ["v", "w"])
            more = wa_criteria(
                ReductiveDescriptor(G, J, inner_type_places=inner + ("w",), metacyclic_split_places=meta + ("v",)),
                places,
                ["v", "w"],
            )
            assert order[more.verdict] >= order[base.verdict]


def test_unknown_labels():
    G, J, places = _biquadratic_with_place()
    with pytest.raises(DescriptorError):
        wa_criteria(ReductiveDescriptor(G, J), places, ["nowhere"])
    with pytest.raises(DescriptorError):
        group_report(ReductiveDescriptor(G, J, inner_type_places=("nowhere",)), places)
    with pytest.raises(DescriptorError):
        ReductiveDescriptor(G, trivial_lattice(named_group("C4")))


@pytest.mark.parametrize("name", ["V4", "D4", "Q8", "S3"])
def test_group_report_matches_torus_report(name, rng):
    G = named_group(name)
    for _ in range(3):
        L = random_lattice(G, rng, max_rank=4)
        rep = group_report(ReductiveDescriptor(G, L))
        t = torus_report(G, L)
        assert rep.brauer_classes.invariant_factors == t.brauer_classes.invariant_factors
        assert rep.wa_defect.invariant_factors == t.wa_defect.invariant_factors
        assert rep.r_classes_order == t.sha_S.order * t.n_T
