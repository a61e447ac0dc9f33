"""``invariants`` command line: run a JSON job file or the verification suites.

Exit codes: 0 success, 2 unreadable or malformed JSON, 3 invalid job,
4 failed internal certification (or a failing verification suite).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

import numpy as np

from .abelian import format_factors
from .arithmetic import PlacesError, PlacesSpec, TorusReport, torus_report
from .cohomology import DEGREES, tate
from .flasque import CertificationError, certify_flasque, flasque_resolution
from .groups import FiniteGroup, GroupError, build_group, from_table, parse_cycles, subgroup_classes
from .lattice import GaloisLattice, LatticeError, builtin_lattice
from .reductive import DescriptorError, ReductiveDescriptor, group_report, wa_criteria
from .verify import run_suites

log = logging.getLogger("invariants")

TARGETS = ("torus_report", "group_report", "cohomology", "flasque_resolution", "certify", "verify")
EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_CERT = 0, 2, 3, 4


class JobError(ValueError):
    """Invalid job; ``pointer`` is a JSON pointer to the offending value."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class ParseError(ValueError):
    pass


@dataclass
class Job:
    group: FiniteGroup
    lattice: GaloisLattice
    places: PlacesSpec
    target: str
    cross_check_sha: bool = False
    emit_witnesses: bool = False
    seed: int = 1
    cases: int = 10
    reductive: ReductiveDescriptor | None = None
    query_places: tuple[str, ...] = ()
    raw: dict = field(default_factory=dict, repr=False)


# --------------------------------------------------------------------- parsing


def _get(obj: dict, key: str, ptr: str, kind=None, default=...):
    if key not in obj:
        if default is ...:
            raise JobError(ptr, f"missing required key {key!r}")
        return default
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise JobError(f"{ptr}/{key}", f"expected {name}, got {type(val).__name__}")
    return val


def _parse_group(spec, ptr: str) -> tuple[FiniteGroup, list]:
    if not isinstance(spec, dict):
        raise JobError(ptr, "expected an object")
    try:
        if "permutations" in spec:
            perms = _get(spec, "permutations", ptr, list)
            for i, p in enumerate(perms):
                if not isinstance(p, (str, list)):
                    raise JobError(f"{ptr}/permutations/{i}", "expected a cycle string or an image list")
                try:
                    parse_cycles(p) if isinstance(p, str) else None
                except GroupError as exc:
                    raise JobError(f"{ptr}/permutations/{i}", str(exc)) from exc
            G = build_group(perms)
            user = []
            for p in perms:
                q = parse_cycles(p) if isinstance(p, str) else tuple(int(x) for x in p)
                user.append(_element_of(G, q))
            return G, user
        if "table" in spec:
            table = _get(spec, "table", ptr, list)
            gens = _get(spec, "generators", ptr, list, None)
            G = from_table(table, gens)
            return G, list(G.generators)
    except GroupError as exc:
        raise JobError(ptr, str(exc)) from exc
    raise JobError(ptr, "expected 'permutations' or 'table'")


def _element_of(G: FiniteGroup, perm) -> int:
    n = len(G.element_labels[0]) if G.element_labels else 0
    p = tuple(perm) + tuple(range(len(perm), n))
    if len(p) > n:
        if any(p[i] != i for i in range(n, len(p))):
            raise GroupError(f"permutation moves points outside the group's domain: {perm}")
        p = p[:n]
    try:
        return G.element_labels.index(p)
    except ValueError:
        raise GroupError(f"permutation {perm} is not in the group") from None


def _parse_element(G: FiniteGroup, x, ptr: str) -> int:
    if isinstance(x, bool):
        raise JobError(ptr, "expected an element index or a cycle string")
    if isinstance(x, int):
        if not 0 <= x < G.order:
            raise JobError(ptr, f"element index {x} out of range 0..{G.order - 1}")
        return x
    if isinstance(x, str):
        if G.element_labels is None:
            raise JobError(ptr, "cycle notation needs a permutation group")
        try:
            return _element_of(G, parse_cycles(x))
        except GroupError as exc:
            raise JobError(ptr, str(exc)) from exc
    raise JobError(ptr, "expected an element index or a cycle string")


def _parse_lattice(spec, G: FiniteGroup, user_gens: list, ptr: str) -> GaloisLattice:
    if not isinstance(spec, dict):
        raise JobError(ptr, "expected an object")
    if "builtin" in spec:
        name = _get(spec, "builtin", ptr, str)
        try:
            return builtin_lattice(G, name)
        except LatticeError as exc:
            raise JobError(f"{ptr}/builtin", str(exc)) from exc
    rank = _get(spec, "rank", ptr, int)
    if rank < 0:
        raise JobError(f"{ptr}/rank", "rank must be nonnegative")
    mats = _get(spec, "generators", ptr, list)
    if len(mats) != len(user_gens):
        raise JobError(f"{ptr}/generators", f"expected {len(user_gens)} matrices (one per group generator), got {len(mats)}")
    arrays = []
    for i, m in enumerate(mats):
        try:
            a = np.array(m, dtype=object)
            if a.shape != (rank, rank) or not all(isinstance(v, int) and not isinstance(v, bool) for v in a.flat):
                raise ValueError
        except ValueError:
            raise JobError(f"{ptr}/generators/{i}", f"expected a {rank}x{rank} integer matrix") from None
        arrays.append(a)
    by_elem = {}
    for i, (e, a) in enumerate(zip(user_gens, arrays)):
        by_elem.setdefault(e, (i, a))
    try:
        L = GaloisLattice(G, rank, tuple(by_elem[g][1] for g in G.generators), name="input")
    except LatticeError as exc:
        raise JobError(f"{ptr}/generators", str(exc)) from exc
    for i, (e, a) in enumerate(zip(user_gens, arrays)):
        if not np.array_equal(L.action(e).astype(object), a):
            raise JobError(f"{ptr}/generators/{i}", "matrix is inconsistent with the group relations")
    return L


def _parse_places(spec, G: FiniteGroup, ptr: str) -> PlacesSpec:
    if not isinstance(spec, list):
        raise JobError(ptr, "expected a list")
    entries = []
    for i, p in enumerate(spec):
        pp = f"{ptr}/{i}"
        if not isinstance(p, dict):
            raise JobError(pp, "expected an object")
        label = _get(p, "label", pp, str, f"v{i}")
        if "elements" in p:
            els = [_parse_element(G, x, f"{pp}/elements/{j}") for j, x in enumerate(_get(p, "elements", pp, list))]
            try:
                sub = G.subgroup(els)
            except GroupError as exc:
                raise JobError(f"{pp}/elements", f"place {label!r}: {exc}") from exc
        elif "generators" in p:
            gens = [_parse_element(G, x, f"{pp}/generators/{j}") for j, x in enumerate(_get(p, "generators", pp, list))]
            sub = G.generated_subgroup(gens)
        else:
            raise JobError(pp, f"place {label!r}: expected 'elements' or 'generators'")
        entries.append((label, sub))
    try:
        return PlacesSpec.from_subgroups(G, entries)
    except PlacesError as exc:
        raise JobError(ptr, str(exc)) from exc


def _parse_reductive(spec, G: FiniteGroup, L: GaloisLattice, places: PlacesSpec, ptr: str) -> ReductiveDescriptor:
    if not isinstance(spec, dict):
        raise JobError(ptr, "expected an object")
    kw = {}
    for key in ("has_anisotropic_trialitarian_D4_or_E6", "base_totally_imaginary"):
        kw[key] = _get(spec, key, ptr, bool, False)
    for key in ("inner_type_places", "metacyclic_split_places"):
        labels = _get(spec, key, ptr, list, [])
        for j, lab in enumerate(labels):
            if lab not in places.labels:
                raise JobError(f"{ptr}/{key}/{j}", f"unknown place label {lab!r}")
        kw[key] = tuple(labels)
    return ReductiveDescriptor(G, L, name=str(spec.get("name", "")), **kw)


def job_from_dict(doc, max_order: int = 24) -> Job:
    if not isinstance(doc, dict):
        raise JobError("", "job must be a JSON object")
    target = _get(doc, "target", "", str)
    if target not in TARGETS:
        raise JobError("/target", f"unknown target {target!r}; expected one of {', '.join(TARGETS)}")
    opts = _get(doc, "options", "", dict, {})
    seed = _get(opts, "seed", "/options", int, 1)
    cases = _get(opts, "cases", "/options", int, 10)
    cross = _get(opts, "cross_check_sha", "/options", bool, False)
    wit = _get(opts, "emit_witnesses", "/options", bool, False)
    if target == "verify" and "group" not in doc:
        return Job(None, None, PlacesSpec(), target, cross, wit, seed, cases, raw=doc)
    G, user = _parse_group(_get(doc, "group", ""), "/group")
    if G.order > max_order:
        raise JobError("/group", f"group order {G.order} exceeds --max-order {max_order}")
    L = _parse_lattice(_get(doc, "lattice", ""), G, user, "/lattice")
    places = _parse_places(_get(doc, "places", "", list, []), G, "/places")
    red = None
    if "reductive" in doc or target == "group_report":
        red = _parse_reductive(doc.get("reductive", {}), G, L, places, "/reductive")
    query = _get(doc, "query_places", "", list, [])
    for j, lab in enumerate(query):
        if lab not in places.labels:
            raise JobError(f"/query_places/{j}", f"unknown place label {lab!r}")
    return Job(G, L, places, target, cross, wit, seed, cases, red, tuple(query), raw=doc)


def parse_input(source, max_order: int = 24) -> Job:
    """Read a job from a path or text stream; raises :class:`ParseError` or :class:`JobError`."""
    try:
        if hasattr(source, "read"):
            text = source.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        doc = json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    return job_from_dict(doc, max_order)


# ------------------------------------------------------------------------ run


def _cohomology_table(job: Job) -> dict:
    rows = []
    for idx, h in enumerate(subgroup_classes(job.group)):
        row = {"class_id": idx, "order": h.order, "classification": h.classification, "elements": list(h.elements)}
        for i in DEGREES:
            row[f"H^{i}"] = tate(i, h, job.lattice).to_json(job.emit_witnesses)
        rows.append(row)
    return {"lattice_rank": job.lattice.rank, "classes": rows}


def _group_json(G: FiniteGroup) -> dict:
    return {
        "order": G.order,
        "generators": [G.label(g) for g in G.generators],
        "subgroup_classes": len(subgroup_classes(G)),
    }


def run(job: Job) -> dict:
    """Compute the job's target; the result is a JSON-ready dict."""
    out: dict = {"target": job.target}
    if job.target == "verify":
        suites = run_suites(job.seed, job.cases)
        out["result"] = {
            "seed": job.seed,
            "cases": job.cases,
            "all_passed": all(s.passed for s in suites),
            "suites": [s.to_json() for s in suites],
        }
        for s in out["result"]["suites"]:
            s.pop("seconds")
        return out
    out["group"] = _group_json(job.group)
    if job.target == "cohomology":
        out["result"] = _cohomology_table(job)
    elif job.target == "certify":
        out["result"] = certify_flasque(job.lattice).to_json()
    elif job.target == "flasque_resolution":
        out["result"] = flasque_resolution(job.lattice).to_json()
    elif job.target == "torus_report":
        rep = torus_report(job.group, job.lattice, job.places, cross_check_sha=job.cross_check_sha)
        out["result"] = rep.to_json(job.emit_witnesses)
        out["diagnostic_warnings"] = rep.warnings
        if job.query_places and job.reductive is not None:
            out["wa_criteria"] = wa_criteria(job.reductive, job.places, job.query_places, rep).to_json()
    else:
        gr = group_report(job.reductive, job.places, cross_check_sha=job.cross_check_sha)
        out["result"] = gr.to_json(job.emit_witnesses)
        out["diagnostic_warnings"] = gr.torus.warnings
        if job.query_places:
            out["wa_criteria"] = wa_criteria(job.reductive, job.places, job.query_places, gr.torus).to_json()
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------- text


def _fmt(g: dict) -> str:
    return format_factors(g["invariant_factors"])


def render_text(report: dict) -> str:
    res = report.get("result", {})
    lines = [f"target: {report['target']}"]
    if "group" in report:
        lines.append(f"group order {report['group']['order']}, generators {' '.join(report['group']['generators']) or '-'}")
    t = report["target"]
    if t in ("torus_report", "group_report"):
        tr = res if t == "torus_report" else res["torus_quotient_invariants"]
        if t == "group_report":
            lines.append(f"G(k)/Br            {_fmt(res['brauer_classes'])}")
            lines.append(f"A(G)               {_fmt(res['wa_defect'])}")
            rc = res["r_classes"]
            if rc["status"] == "unconditional":
                lines.append(f"|G(k)/R|           {rc['order']}")
            else:
                lines.append(f"|G(k)/R|           conditional; image in local product has order {rc['image_order_in_local_product']}")
            lines.append("torus quotient:")
        lines.append(f"H^1(G, S^)         {_fmt(tr['picard_invariant'])}")
        for lab, g in tr["local_brauer"].items():
            lines.append(f"T(k_v)/Br [{lab}]  {_fmt(g)}")
        lines.append(f"T(k)/Br            {_fmt(tr['brauer_classes'])}")
        lines.append(f"A(T)               {_fmt(tr['wa_defect'])}")
        lines.append(f"Sha(T)             {_fmt(tr['sha_T'])}")
        lines.append(f"Sha(S)             {_fmt(tr['sha_S'])}")
        lines.append(f"|T(k)/R|           {tr['r_classes_order']}")
        lines.append(f"weak approximation {tr['wa_verdict']}")
        for w in tr["diagnostic_warnings"]:
            lines.append(f"warning: {w}")
        if "wa_criteria" in report:
            wc = report["wa_criteria"]
            for p in wc["places"]:
                lines.append(f"  place {p['place']}: {'local Br trivial (' + p['reason'] + ')' if p['local_brauer_trivial'] else 'no criterion applies'}")
            lines.append(f"WA criteria verdict: {wc['verdict']}")
    elif t == "cohomology":
        for row in res["classes"]:
            groups = "  ".join(f"H^{i}={_fmt(row[f'H^{i}'])}" for i in DEGREES)
            lines.append(f"class {row['class_id']} (order {row['order']}, {row['classification']}): {groups}")
    elif t == "certify" or t == "flasque_resolution":
        cert = res if t == "certify" else res["certificate"]
        if t == "flasque_resolution":
            lines.append(f"ranks: T^ {res['T_hat']['rank']}, N^ {res['N_hat']['rank']}, S^ {res['S_hat']['rank']}")
        for row in cert["classes"]:
            lines.append(f"class {row['class_id']} (order {row['order']}): H^-1 = {format_factors(row['H^-1'])}")
        lines.append(f"flasque: {'yes' if cert['flasque'] else 'no'}")
    elif t == "verify":
        for s in res["suites"]:
            lines.append(f"{'PASS' if s['passed'] else 'FAIL'} {s['name']} ({s['cases']} cases)")
            lines.extend(f"    {f}" for f in s["failures"])
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invariants", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a job file")
    r.add_argument("job", help="path to the job JSON ('-' for stdin)")
    r.add_argument("--json-out", metavar="PATH", help="write the JSON report here instead of stdout")
    r.add_argument("--text", action="store_true", help="print a human-readable summary")
    r.add_argument("--cross-check-sha", action="store_true", help="recompute Sha(T) through H^2(G, T^)")
    r.add_argument("--max-order", type=int, default=24, help="refuse groups larger than this (default 24)")
    v = sub.add_parser("verify", help="run the randomised property suites")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--cases", type=int, default=10)
    v.add_argument("--text", action="store_true", help="print a human-readable summary")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            job = Job(None, None, PlacesSpec(), "verify", seed=args.seed, cases=args.cases)
            text_mode, json_out = args.text, None
        else:
            src = sys.stdin if args.job == "-" else args.job
            job = parse_input(src, max_order=args.max_order)
            if args.cross_check_sha:
                job.cross_check_sha = True
            text_mode, json_out = args.text, args.json_out
        report = run(job)
    except ParseError as exc:
        print(f"error: cannot parse job: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except JobError as exc:
        print(f"error: invalid job at {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GroupError, LatticeError, PlacesError, DescriptorError) as exc:
        print(f"error: invalid job: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CertificationError as exc:
        print(f"error: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    body = dumps(report)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(body)
    if text_mode:
        sys.stdout.write(render_text(report))
    elif not json_out:
        sys.stdout.write(body)
    if job.target == "verify" and not report["result"]["all_passed"]:
        return EXIT_CERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
