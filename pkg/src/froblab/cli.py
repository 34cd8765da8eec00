"""Command-line front end: ``froblab <subcommand> ...`` (see ``froblab --help``)."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .actions import build_group, orbit_partition
from .characters import find_generating_character, generating_characters
from .errors import BudgetExceeded, FrobLabError, SpecError, UnknownScenarioError
from .extension import LinearMap, code_closure, extension_search, local_global_scan, preserves_weight
from .linalg import free_module
from .partitions import chi_dual, hamming_partition, is_reflexive
from .posets import HierarchicalShape, Poset, classify_hierarchical, nonhier_counterexample
from .ring import build_ring, double_annihilator_holds, units, validate_ring
from .scenarios import REGISTRY, run_named_scenario
from .weights import parse_weight


class CheckFailed(Exception):
    """An asserted property did not hold (exit code 1)."""


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _vec_label(ring, x):
    return "(" + ",".join(ring.labels[int(v)] for v in x) + ")"


def _block_labels(V, P):
    return [[V.label(V.vectors[r]) for r in b] for b in P.blocks()]


# ---------------------------------------------------------------- subcommands

def cmd_ring_info(args):
    ring = build_ring(args.spec)
    validate_ring(ring)
    chi = find_generating_character(ring)
    ann = double_annihilator_holds(ring)
    payload = {
        "ring": ring.spec, "name": ring.name, "size": ring.size,
        "commutative": bool(ring.is_commutative), "axioms": True,
        "units": [ring.labels[u] for u in units(ring)],
        "frobenius": chi is not None,
        "generating_character": None if chi is None else {
            **chi.to_json(), "m": chi.m, "values": [int(v) for v in chi.table]},
        "double_annihilator": ann.holds,
    }
    lines = [f"ring {ring.spec} ({ring.name}), {ring.size} elements, "
             f"{'commutative' if ring.is_commutative else 'noncommutative'}",
             "axioms: verified",
             f"units: {', '.join(payload['units'])}",
             f"Frobenius: {'yes' if chi is not None else 'no'}"]
    if chi is not None:
        vals = ", ".join(f"{ring.labels[a]}:{int(v)}" for a, v in enumerate(chi.table))
        lines.append(f"generating character (exponents of zeta_{chi.m}): {vals}")
    lines.append(f"double annihilator property: {'holds' if ann.holds else 'fails'}")
    _emit(args, payload, lines)
    return 0


def cmd_orbits(args):
    ring = build_ring(args.ring)
    U = build_group(ring, args.n, args.group)
    V = free_module(ring, args.n)
    sides = ["right", "left"] if args.side == "both" else [args.side]
    payload = {"ring": ring.spec, "n": args.n, "group": args.group, "group_order": U.order}
    lines = [f"group {args.group} of order {U.order} on {ring.name}^{args.n}"]
    for side in sides:
        P = orbit_partition(U, side)
        name = "P_U" if side == "right" else "P_{U^T}"
        payload[side] = {"orbits": len(P), "nonzero_orbits": len(P) - 1,
                         "blocks": _block_labels(V, P) if args.blocks else None}
        lines.append(f"{name} ({side} action): {len(P)} orbits, {len(P) - 1} on nonzero vectors")
        if args.blocks:
            lines.extend("  {" + ", ".join(b) + "}" for b in payload[side]["blocks"])
    _emit(args, payload, lines)
    return 0


def _partition_from_source(ring, n, src):
    head, _, rest = src.partition(":")
    if head == "hamming":
        return hamming_partition(ring, n)
    if head == "orbits":
        return orbit_partition(build_group(ring, n, rest), "right")
    if head == "orbitsT":
        return orbit_partition(build_group(ring, n, rest), "left")
    if head == "weight":
        from .partitions import Partition
        return Partition(parse_weight(rest, ring, n).classes)
    raise SpecError(f"unknown partition source {src!r} (hamming | orbits:<group> | "
                    "orbitsT:<group> | weight:<weight>)")


def cmd_dual(args):
    ring = build_ring(args.ring)
    chars = generating_characters(ring)
    if not chars:
        raise SpecError(f"{ring.spec} has no generating character")
    if not 0 <= args.char < len(chars):
        raise SpecError(f"--char must be in 0..{len(chars) - 1}")
    chi = chars[args.char]
    P = _partition_from_source(ring, args.n, args.partition)
    Q, K = chi_dual(P, chi, args.side, args.n, with_table=True)
    V = free_module(ring, args.n)
    refl = is_reflexive(P, chi, args.n)
    payload = {"ring": ring.spec, "n": args.n, "partition": args.partition, "side": args.side,
               "character": chi.to_json(), "blocks": len(P), "dual_blocks": len(Q),
               "self_dual": Q == P, "reflexive": refl,
               "dual": _block_labels(V, Q), "krawtchouk": K.to_json()}
    lines = [f"P = {args.partition}: {len(P)} blocks; {args.side} chi-dual: {len(Q)} blocks",
             f"dual equals P: {Q == P}; P reflexive: {refl}"]
    lines.extend("  {" + ", ".join(b) + "}" for b in payload["dual"])
    lines.append(f"Krawtchouk coefficients (Z[zeta_{K.m}] coefficient vectors, row per dual block):")
    lines.extend("  " + " ".join(str(list(c)) for c in row) for row in K.entries.tolist())
    _emit(args, payload, lines)
    return 0


def cmd_scan(args):
    ring = build_ring(args.ring)
    U = build_group(ring, args.n, args.group)
    rep = local_global_scan(ring, args.n, U, args.max_gens, args.max_size, args.threads,
                            stop_at_first=True)
    payload = {"ring": ring.spec, "n": args.n, "group": args.group, "holds": rep.holds,
               "codes": rep.codes_checked, "maps": rep.maps_checked, "local_maps": rep.local_maps}
    if rep.counterexample:
        code, f, _ = rep.counterexample
        payload["counterexample"] = {"code": code.labels(),
                                     "generators": [_vec_label(ring, g) for g in code.generators],
                                     "images": [_vec_label(ring, y) for y in f.images]}
    _emit(args, payload, [rep.describe()])
    return 0


def _vector(ring, v):
    return [ring.index_of(t) for t in v]


def cmd_extend(args):
    data = json.loads(Path(args.file).read_text())
    try:
        ring = build_ring(data["ring"])
        n = int(data["n"])
        gens = [_vector(ring, v) for v in data["code_generators"]]
        imgs = [_vector(ring, v) for v in data["image_vectors"]]
    except KeyError as e:
        raise SpecError(f"scenario file lacks {e}") from None
    f = LinearMap(code_closure(ring, n, gens), imgs)
    payload = {"ring": ring.spec, "n": n, "code_size": len(f.domain)}
    if "group" in data:
        found = extension_search(f, group=build_group(ring, n, data["group"]))
        payload["group"] = data["group"]
    else:
        w = parse_weight(data.get("weight", "hamming"), ring, n)
        check = preserves_weight(f, w)
        payload["weight"] = data.get("weight", "hamming")
        payload["weight_preserving"] = check.preserves
        found = extension_search(f, weight=w, method=args.method)
    mats = [[[ring.labels[int(v)] for v in row] for row in M] for M in found]
    payload["extensions"] = mats
    payload["count"] = len(mats)
    lines = [f"code of size {len(f.domain)} in {ring.name}^{n}; {len(mats)} extension(s)"]
    if "weight_preserving" in payload:
        lines.insert(1, f"map preserves {payload['weight']}: {payload['weight_preserving']}")
    for M in mats:
        lines.append("  [" + "; ".join(" ".join(r) for r in M) + "]")
    _emit(args, payload, lines)
    return 0


def _read_poset(path):
    p = Path(path)
    if p.exists():
        return Poset.parse(p.read_text())
    if path.strip().startswith("n="):
        return Poset.parse(path)
    raise SpecError(f"poset file {path!r} not found")


def cmd_poset_classify(args):
    P = _read_poset(args.file)
    res = classify_hierarchical(P)
    if isinstance(res, HierarchicalShape):
        payload = {"poset": P.to_text(), "hierarchical": True, "shape": list(res.sizes)}
        text = f"hierarchical: {res.describe()}"
    else:
        payload = {"poset": P.to_text(), "hierarchical": False,
                   "witness": {"level": res.level, "alpha": res.alpha + 1, "beta": res.beta + 1,
                               "B": sorted(i + 1 for i in res.B),
                               "B_prime": sorted(i + 1 for i in res.B_prime)}}
        text = res.describe()
    _emit(args, payload, [text])
    return 0


def cmd_poset_counterexample(args):
    P = _read_poset(args.file)
    ring = build_ring(args.ring)
    cx = nonhier_counterexample(P, ring)
    payload = {"poset": P.to_text(), "ring": ring.spec, "witness": cx.witness.describe(),
               "code": cx.code.labels(), "image_code": cx.image_code.labels(),
               "weight": cx.weight, "extensions": cx.extension_count}
    lines = [cx.witness.describe(),
             f"C  = {{{', '.join(cx.code.labels())}}}",
             f"C' = {{{', '.join(cx.image_code.labels())}}}",
             f"both generators have poset weight {cx.weight}; extensions found: {cx.extension_count}"]
    _emit(args, payload, lines)
    return 0


def cmd_verify(args):
    names = list(REGISTRY) if args.name == "all" else [args.name]
    reports = []
    for name in names:
        try:
            reports.append(run_named_scenario(name))
        except UnknownScenarioError:
            raise SpecError(f"unknown scenario {name!r}; known: {', '.join(REGISTRY)}") from None
    ok = all(r.passed for r in reports)
    payload = {"passed": ok, "scenarios": [r.to_json(timing=args.timing) for r in reports]}
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        extra = f" ({r.runtime_ms:.0f} ms)" if args.timing else ""
        lines.append(f"{status} {r.scenario}: {r.verdict}{extra}")
        if not r.passed:
            lines.append(f"     failed checks: {', '.join(r.failed_checks())}")
    _emit(args, payload, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker cap for scans")
    common.add_argument("--timing", action="store_true", help="report runtimes")

    p = argparse.ArgumentParser(prog="froblab", parents=[common],
                                description="Finite Frobenius rings, partition duality and "
                                            "extension properties of weights.")
    sub = p.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", parents=[common], help="ring inspection").add_subparsers(dest="ring_cmd", required=True)
    info = ring.add_parser("info", parents=[common], help="axioms, units, Frobenius verdict")
    info.add_argument("spec")
    info.set_defaults(func=cmd_ring_info)

    orb = sub.add_parser("orbits", parents=[common], help="orbit partitions of a matrix group")
    orb.add_argument("ring")
    orb.add_argument("n", type=int)
    orb.add_argument("group")
    orb.add_argument("--side", choices=["right", "left", "both"], default="both")
    orb.add_argument("--blocks", action="store_true", help="list the orbits")
    orb.set_defaults(func=cmd_orbits)

    dual = sub.add_parser("dual", parents=[common], help="chi-dual of a partition of R^n")
    dual.add_argument("ring")
    dual.add_argument("n", type=int)
    dual.add_argument("--partition", default="hamming",
                      help="hamming | orbits:<group> | orbitsT:<group> | weight:<weight>")
    dual.add_argument("--side", choices=["left", "right"], default="left")
    dual.add_argument("--char", type=int, default=0, help="index among generating characters")
    dual.set_defaults(func=cmd_dual)

    scan = sub.add_parser("scan", parents=[common], help="local-global property scan")
    scan.add_argument("ring")
    scan.add_argument("n", type=int)
    scan.add_argument("group")
    scan.add_argument("--max-gens", type=int, default=2)
    scan.add_argument("--max-size", type=int, default=64)
    scan.set_defaults(func=cmd_scan)

    ext = sub.add_parser("extend", parents=[common], help="all extensions of a map in a JSON file")
    ext.add_argument("file")
    ext.add_argument("--method", choices=["rows", "columns"], default="rows")
    ext.set_defaults(func=cmd_extend)

    poset = sub.add_parser("poset", parents=[common], help="poset classification and counterexamples").add_subparsers(dest="poset_cmd", required=True)
    cls = poset.add_parser("classify", parents=[common], help="hierarchical shape or witness")
    cls.add_argument("file")
    cls.set_defaults(func=cmd_poset_classify)
    cx = poset.add_parser("counterexample", parents=[common], help="isometry of small codes with no extension")
    cx.add_argument("file")
    cx.add_argument("ring")
    cx.set_defaults(func=cmd_poset_counterexample)

    ver = sub.add_parser("verify", parents=[common], help="run named scenarios")
    ver.add_argument("name", help="all | " + " | ".join(REGISTRY))
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"froblab: error: {e}", file=sys.stderr)
        return 2
    except BudgetExceeded as e:
        print(f"froblab: budget exceeded: {e}", file=sys.stderr)
        return 1
    except (AssertionError, FrobLabError) as e:
        print(f"froblab: check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
