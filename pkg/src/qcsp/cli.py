"""Command-line front end.

Exit codes: 0 = pass/constructed/found, 1 = fail/refuted/none,
2 = usage or format error.  Every verb prints a short human summary on
standard output; `--report FILE` additionally writes machine-readable
JSON lines with sorted keys, byte-identical across runs for identical
inputs.  The environment variable QCSP_DIM_CAP bounds measurement
dimensions (default 64).  `--jobs N` is accepted for interface
stability; execution is single-threaded either way.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import boolean, catalog, gadgets as gd, qhom, qlinalg
from . import reduce as rd
from .structures import FormatError, read_structure, render_label, write_structure
from .qlinalg import read_qfun


def _render(lab) -> str:
    return render_label(lab)


def _write_report(path, records) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _cert_dict(cert):
    return None if cert is None else cert.as_dict()


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def _cmd_verify(args, records) -> int:
    cand = qhom.QHomCandidate(read_structure(args.source),
                              read_structure(args.target),
                              read_qfun(args.qfun), args.mode)
    rep = qhom.verify(cand)
    records.append({"verb": "verify", **rep.as_dict()})
    if rep.verdict:
        print(f"verify: PASS ({args.mode})")
        return 0
    print(f"verify: FAIL ({args.mode}; {len(rep.qh1_violations)} product "
          f"violations, {len(rep.qh2_violations)} commutation violations)")
    return 1


def _cmd_polymorphism(args, records) -> int:
    A = read_structure(args.target)
    rep = qhom.is_quantum_polymorphism(A, args.power, read_qfun(args.qfun),
                                       args.mode)
    records.append({"verb": "polymorphism", "power": args.power,
                    **rep.as_dict()})
    if rep.verdict:
        print(f"polymorphism: PASS (arity {args.power}, {args.mode})")
        return 0
    print(f"polymorphism: FAIL (arity {args.power}, {args.mode})")
    return 1


def _cmd_contextual(args, records) -> int:
    qf = read_qfun(args.qfun)
    ok, witness = qlinalg.is_noncontextual(qf)
    rec = {"verb": "contextual", "noncontextual": ok}
    if not ok:
        (x, b), (x2, b2) = witness
        rec["witness"] = [[_render(x), _render(b)], [_render(x2), _render(b2)]]
    records.append(rec)
    if ok:
        print("contextual: measurements all commute (noncontextual)")
        return 0
    print(f"contextual: witness {rec['witness']}")
    return 1


def _cmd_bifurcation(args, records) -> int:
    cand = qhom.QHomCandidate(read_structure(args.source),
                              read_structure(args.target),
                              read_qfun(args.qfun), "oracular")
    rep = qhom.verify(cand)
    if not rep.verdict:
        records.append({"verb": "bifurcation", "error": "candidate fails verification"})
        print("bifurcation: candidate fails verification")
        return 1
    bif = qhom.find_bifurcation(cand)
    if bif is None:
        records.append({"verb": "bifurcation", "found": False})
        print("bifurcation: none (candidate is noncontextual)")
        return 1
    records.append({
        "verb": "bifurcation", "found": True, "length": bif.length,
        "path": [_render(x) for x in bif.path],
        "labels": [[_render(b) for b in step] for step in bif.labels]})
    print(f"bifurcation: length {bif.length} along "
          f"{'-'.join(_render(x) for x in bif.path)}")
    return 0


def _relation_arg(A, sym):
    if sym not in A.signature:
        raise ValueError(f"target has no relation named {sym!r}")
    return A.rel_labels(sym)


def _cmd_gadget_check(args, records) -> int:
    spec, _ = gd.read_gadget(args.gadget)
    A = read_structure(args.target)
    check = args.check
    mode = args.mode or ("oracular" if check in ("c1", "c2") else "nonoracular")
    cert = None
    if check in ("c1", "c2"):
        if spec.arity != 2:
            raise ValueError("c1/c2 need exactly two distinguished vertices")
        H = gd.CommGadget(spec.structure, *spec.distinguished)
        if check == "c1":
            result = gd.check_c1(H, A)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cert = gd.check_c2(H, A, mode=mode)
            result = cert is not None and cert.positive
    else:
        S = (_relation_arg(A, args.relation) if args.relation
             else sorted(gd.defined_relation(spec, A)))
        if check == "q1":
            result = gd.check_q1(spec, A, S)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cert = gd.check_q2(spec, A, S, mode=mode)
            result = cert is not None and cert.positive
    records.append({"verb": "gadget-check", "check": check, "mode": mode,
                    "result": bool(result), "certificate": _cert_dict(cert)})
    if check in ("c2", "q2"):
        if cert is None:
            print(f"gadget-check {check}: inconclusive (no certificate route)")
            return 1
        print(f"gadget-check {check}: {'PASS' if result else 'REFUTED'} "
              f"({cert.kind}/{cert.tag})")
        if result and args.out:
            gd.write_gadget(spec, args.out, cert)
        return 0 if result else 1
    if args.out:
        raise ValueError("--out applies to certificate checks (c2, q2)")
    print(f"gadget-check {check}: {'PASS' if result else 'FAIL'}")
    return 0 if result else 1


def _cmd_qdef_build(args, records) -> int:
    spec, _ = gd.read_gadget(args.gadget)
    cspec, _ = gd.read_gadget(args.comm)
    if cspec.arity != 2:
        raise ValueError("commutativity gadget needs exactly two "
                         "distinguished vertices")
    comm = gd.CommGadget(cspec.structure, *cspec.distinguished)
    A = read_structure(args.target) if args.target else None
    S = None
    if args.relation:
        if A is None:
            raise ValueError("--relation needs --target")
        S = _relation_arg(A, args.relation)
    try:
        out = gd.build_qdef(spec, comm, A, S)
    except ValueError as exc:
        records.append({"verb": "qdef-build", "built": False, "error": str(exc)})
        print(f"qdef-build: FAIL ({exc})")
        return 1
    cert = None
    if A is not None:
        want = S if S is not None else sorted(gd.defined_relation(spec, A))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cert = gd.check_q2(out, A, want, mode=args.mode)
    gd.write_gadget(out, args.out, cert if cert is not None and cert.positive
                    else None)
    records.append({"verb": "qdef-build", "built": True,
                    "size": out.structure.size,
                    "certificate": _cert_dict(cert)})
    print(f"qdef-build: wrote {args.out} ({out.structure.size} vertices)")
    return 0


def _cmd_reduce(args, records) -> int:
    X = read_structure(args.instance)
    recipe = rd.load_recipe(args.recipe)
    if args.mode and args.mode != recipe.mode:
        raise ValueError(f"recipe mode is {recipe.mode!r}, not {args.mode!r}")
    target = read_structure(args.target) if args.target else None
    comp = rd.compile_instance(X, recipe, dedupe_pairs=args.dedupe_pairs,
                               target=target)
    write_structure(comp.instance, args.out)
    prov_path = args.out + ".prov.jsonl"
    with open(prov_path, "w", encoding="utf-8") as fh:
        for vertex, tag in comp.provenance:
            fh.write(json.dumps({"vertex": vertex, "origin": _tag_json(tag)},
                                sort_keys=True) + "\n")
    records.append({
        "verb": "reduce", "mode": comp.mode, "size": comp.instance.size,
        "stamp": comp.stamp(),
        "certificates": {name: _cert_dict(c) for name, c in comp.certificates}})
    print(f"reduce: wrote {args.out} ({comp.instance.size} vertices, "
          f"{comp.stamp()})")
    if not comp.certified:
        print("reduce: warning: output is uncertified (missing or refuted "
              "gadget certificates)", file=sys.stderr)
    return 0


def _tag_json(tag):
    kind = tag[0]
    if kind == "x":
        return {"kind": "x", "label": _render(tag[1])}
    if kind == "g":
        return {"kind": "g", "symbol": tag[1], "tuple_index": tag[2],
                "internal": _render(tag[3])}
    if kind == "h":
        return {"kind": "h", "edge": [_render(tag[1][0]), _render(tag[1][1])],
                "internal": _render(tag[2])}
    return {"kind": "y", "index": tag[1]}


def _parse_masks(arity: int, csv: str):
    words = [w.strip() for w in csv.split(",") if w.strip()]
    if not words:
        raise ValueError("no tuples given")
    return boolean.relation(arity, words)


def _cmd_boolean(args, records) -> int:
    op = args.op
    if op == "cover":
        pairs = boolean.forced_commutation_cover(args.n)
        records.append({
            "verb": "boolean", "op": op, "n": args.n,
            "uncovered": [[sorted(s), sorted(t)] for s, t in pairs]})
        if not pairs:
            print(f"boolean cover: all subset pairs covered at n={args.n}")
            return 0
        print(f"boolean cover: {len(pairs)} uncovered pairs at n={args.n}")
        return 1
    if op == "polys100":
        qf = read_qfun(args.qfun)
        sqf = boolean.from_quantum_function(qf)
        failures = boolean.check_polys100(sqf)
        records.append({
            "verb": "boolean", "op": op,
            "failures": [[name, sorted(s), None if t is None else sorted(t)]
                         for name, s, t in failures]})
        if not failures:
            print("boolean polys100: all four identities hold")
            return 0
        print(f"boolean polys100: {len(failures)} identity failures")
        return 1
    rel = _parse_masks(args.arity, args.masks)
    if op == "classify":
        t = boolean.classify_translate(rel)
        rec = {"verb": "boolean", "op": op,
               "translate": None if t is None else format(t, f"0{rel.arity}b")}
        records.append(rec)
        if t is None:
            print("boolean classify: not a one-in-k translate")
            return 1
        print(f"boolean classify: translate of one-in-{rel.arity} by "
              f"{rec['translate']}")
        return 0
    if op == "majority":
        ok, witness = boolean.majority_preserves(rel)
        rec = {"verb": "boolean", "op": op, "preserved": ok}
        if not ok:
            rec["witness"] = [format(m, f"0{rel.arity}b") for m in witness]
        records.append(rec)
        if ok:
            print("boolean majority: preserved")
            return 0
        print(f"boolean majority: violated by {rec['witness']}")
        return 1
    if op == "projection":
        if (args.i is None) != (args.j is None):
            raise ValueError("give both --i and --j or neither")
        if args.i is not None:
            full = boolean.binary_projection_full(rel, args.i, args.j)
            which = f"({args.i},{args.j})"
        else:
            full = boolean.has_full_binary_projection(rel)
            which = "any"
        records.append({"verb": "boolean", "op": op, "pair": which,
                        "full": full})
        print(f"boolean projection {which}: {'full' if full else 'not full'}")
        return 0 if full else 1
    # property-triple
    ok = boolean.property_triple(rel)
    records.append({"verb": "boolean", "op": op, "holds": ok})
    print(f"boolean property-triple: {'holds' if ok else 'does not hold'}")
    return 0 if ok else 1


def _cmd_catalog(args, records) -> int:
    if args.action == "list":
        entries = catalog.list_entries()
        for e in entries:
            flags = ",".join(sorted(e.flags)) or "-"
            print(f"{e.name:24s} {e.kind:10s} {flags}")
        records.append({
            "verb": "catalog", "action": "list",
            "entries": [{"name": e.name, "kind": e.kind,
                         "flags": sorted(e.flags)} for e in entries]})
        return 0
    entry = catalog.get(args.name)
    text = entry.export_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"catalog: wrote {entry.name} to {args.out}")
    else:
        sys.stdout.write(text)
    records.append({"verb": "catalog", "action": "export", "name": entry.name,
                    "kind": entry.kind, "flags": sorted(entry.flags)})
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcsp",
        description="Exact verification of finite-dimensional quantum "
                    "homomorphisms, gadget certificates, and instance "
                    "reductions.",
        epilog="QCSP_DIM_CAP caps measurement dimensions (default 64).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="FILE",
                        help="write JSON-lines machine report")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker budget (accepted; runs single-threaded)")
    sub = p.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", parents=[common],
                       help="check a measurement family as a quantum "
                            "homomorphism")
    v.add_argument("--source", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--qfun", required=True)
    v.add_argument("--mode", choices=qhom.MODES, default="oracular")
    v.set_defaults(func=_cmd_verify)

    v = sub.add_parser("polymorphism", parents=[common],
                       help="check a family as a polymorphism of a power")
    v.add_argument("--target", required=True)
    v.add_argument("--power", type=int, required=True)
    v.add_argument("--qfun", required=True)
    v.add_argument("--mode", choices=qhom.MODES, default="oracular")
    v.set_defaults(func=_cmd_polymorphism)

    v = sub.add_parser("contextual", parents=[common],
                       help="test whether all measurements commute")
    v.add_argument("--qfun", required=True)
    v.set_defaults(func=_cmd_contextual)

    v = sub.add_parser("bifurcation", parents=[common],
                       help="find a bifurcation of a verified candidate")
    v.add_argument("--source", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--qfun", required=True)
    v.set_defaults(func=_cmd_bifurcation)

    v = sub.add_parser("gadget-check", parents=[common],
                       help="run the c1/c2/q1/q2 gadget conditions")
    v.add_argument("--gadget", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--check", choices=("c1", "c2", "q1", "q2"), required=True)
    v.add_argument("--mode", choices=qhom.MODES)
    v.add_argument("--relation", metavar="SYM",
                   help="target relation to compare against (q1/q2); "
                        "defaults to the gadget's own defined relation")
    v.add_argument("--out", help="write the gadget back with a positive "
                                 "certificate attached (c2/q2)")
    v.set_defaults(func=_cmd_gadget_check)

    v = sub.add_parser("qdef-build", parents=[common],
                       help="glue a commutativity gadget onto every vertex "
                            "pair of a gadget")
    v.add_argument("--gadget", required=True)
    v.add_argument("--comm", required=True)
    v.add_argument("--target", help="structure for the defined-relation "
                                    "precheck and certificate")
    v.add_argument("--relation", metavar="SYM",
                   help="intended relation in the target")
    v.add_argument("--mode", choices=qhom.MODES, default="nonoracular")
    v.add_argument("--out", required=True)
    v.set_defaults(func=_cmd_qdef_build)

    v = sub.add_parser("reduce", parents=[common],
                       help="compile an instance through a gadget recipe")
    v.add_argument("--instance", required=True)
    v.add_argument("--recipe", required=True)
    v.add_argument("--mode", choices=qhom.MODES,
                   help="assert the recipe mode")
    v.add_argument("--target", help="target structure for certificate "
                                    "recomputation")
    v.add_argument("--dedupe-pairs", action="store_true",
                   help="one commutativity copy per unordered adjacent pair")
    v.add_argument("--out", required=True)
    v.set_defaults(func=_cmd_reduce)

    v = sub.add_parser("boolean", parents=[common],
                       help="Boolean relation classification helpers")
    v.add_argument("op", choices=("classify", "majority", "projection",
                                  "property-triple", "cover", "polys100"))
    v.add_argument("--arity", type=int, default=0)
    v.add_argument("--masks", default="",
                   help="comma-separated bit words, e.g. 000,110,101")
    v.add_argument("--i", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--n", type=int, default=1, help="power (cover)")
    v.add_argument("--qfun", help="measurement family (polys100)")
    v.set_defaults(func=_cmd_boolean)

    v = sub.add_parser("catalog", parents=[common],
                       help="list or export built-in fixtures")
    v.add_argument("action", choices=("list", "export"))
    v.add_argument("name", nargs="?")
    v.add_argument("--out")
    v.set_defaults(func=_cmd_catalog)
    return p


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    if args.verb == "catalog" and args.action == "export" and not args.name:
        print("error: catalog export needs a name", file=sys.stderr)
        return 2
    if args.verb == "boolean":
        if args.op == "polys100" and not args.qfun:
            print("error: polys100 needs --qfun", file=sys.stderr)
            return 2
        if args.op in ("classify", "majority", "projection", "property-triple") \
                and (args.arity < 1 or not args.masks):
            print("error: this op needs --arity and --masks", file=sys.stderr)
            return 2
    records: list = []
    try:
        code = args.func(args, records)
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_report(getattr(args, "report", None), records)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
