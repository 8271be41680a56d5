"""Command-line front end: ``extcoh <command> [options]``.

Every command emits one document.  With ``--format machine`` it is a JSON
object with fields ``schema``, ``command``, ``instance-digest``, ``results``
and ``timing`` (see OUTPUT.md); ``timing`` only holds deterministic counters.
Wall-clock time and errors go to stderr.

Exit status: 0 success, 1 validation error, 2 size limit, 3 invariant failure
(check-suite only).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from .catalog import catalog, find_instance, instance_from_doc, instance_to_doc
from .cohomology import COCYCLE_BOUND, enumerate_h2, ker_res_indices
from .errors import ExtCohError, ValidationError
from .extensions import (
    EXT_BOUND,
    act_by_center_ext,
    classify_ext,
    phi_batch,
    twist_by_z1,
    twist_orbits,
    validate_one_cocycle,
)
from .galois_model import center_restriction

SCHEMA = "extcoh-output/1"
COMMANDS = ("validate", "h2", "ext", "twist", "act", "reduce", "check-suite")


# -- digests --------------------------------------------------------------------------


def _digest(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def instance_digest(inst) -> str:
    doc = dict(instance_to_doc(inst))
    doc.pop("name", None)
    doc.pop("bounds", None)
    return _digest(doc)


def table_digest(H) -> str:
    return _digest([list(r) for r in H.table])


def ext_id(cls) -> str:
    """Content digest of a canonical Ext representative."""
    e = cls.representative
    return "ext-" + _digest(
        {"H": [list(r) for r in e.H.table], "iota": list(e.iota), "pi": list(e.pi), "psi": [list(p) for p in e.psi]}
    )


def h2_id(cls) -> str:
    """Content digest of an H^2 class representative."""
    w = cls.representative
    return "h2-" + _digest({"f": list(w.f), "g": list(w.g)})


def _lookup(ident: str, ids: list, what: str) -> int:
    """Index of the class whose identifier is ``ident`` or starts with it (unique prefix)."""
    hits = [i for i, x in enumerate(ids) if x == ident]
    if not hits:
        hits = [i for i, x in enumerate(ids) if len(ident) >= 8 and x.startswith(ident)]
    if len(hits) != 1:
        raise ValidationError(f"{ident!r} does not select exactly one {what} class", witness=len(hits))
    return hits[0]


# -- instance loading ----------------------------------------------------------------


def load_instance(source: str, kernel: str | None = None):
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            raise ValidationError(f"no such instance file {source!r}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"instance file is not JSON: {exc.msg}", witness=[exc.lineno, exc.colno]) from None
        return instance_from_doc(doc, kernel)
    try:
        return find_instance(source)
    except KeyError:
        raise ValidationError(f"unknown bundled instance {source!r}") from None


def _bounds(inst, args) -> tuple:
    stored = inst._cache.get("bounds", {})
    if args.bound is not None:
        return args.bound, args.bound
    return int(stored.get("cocycles", COCYCLE_BOUND)), int(stored.get("extensions", EXT_BOUND))


# -- commands -------------------------------------------------------------------------


def cmd_validate(inst, args) -> tuple:
    doc = instance_to_doc(inst)
    doc["name"] = inst.name
    return doc, {}


def cmd_h2(inst, args) -> tuple:
    cb, _ = _bounds(inst, args)
    kappa = inst.kappa()
    h2 = enumerate_h2(kappa, bound=cb)
    ker = set(ker_res_indices(h2))
    rows = []
    for c in h2:
        w = c.representative
        rows.append(
            {
                "index": c.index,
                "id": h2_id(c),
                "neutral": bool(c.neutral),
                "inKerRes": c.index in ker,
                "f": list(w.f),
                "g": list(w.g),
            }
        )
    results = {"classes": rows, "count": len(rows), "neutral": sum(r["neutral"] for r in rows), "inKerRes": len(ker)}
    return results, {"classes": len(rows), "method": h2.method}


def _ext_rows(inst, args) -> tuple:
    cb, eb = _bounds(inst, args)
    kappa = inst.kappa()
    ext = classify_ext(kappa, bound=eb)
    h2 = enumerate_h2(kappa, bound=cb)
    return kappa, ext, h2


def cmd_ext(inst, args) -> tuple:
    kappa, ext, h2 = _ext_rows(inst, args)
    orbits = twist_orbits(ext)
    orbit_of = {i: k for k, orb in enumerate(orbits) for i in orb}
    phis = phi_batch([ext.raw(i) for i in range(len(ext))], kappa)
    rows = []
    for c in ext:
        rows.append(
            {
                "index": c.index,
                "id": ext_id(c),
                "H-digest": table_digest(c.representative.H),
                "H-order": c.representative.H.order,
                "orbit": orbit_of[c.index],
                "phi": h2_id(h2[phis[c.index]]),
            }
        )
    results = {"classes": rows, "count": len(rows), "orbits": [list(o) for o in orbits]}
    return results, {"classes": len(rows), "orbits": len(orbits), "factor_solutions": ext.solutions}


def _ext_ids(ext) -> list:
    return [ext_id(c) for c in ext]


def cmd_twist(inst, args) -> tuple:
    if args.cls is None or args.z is None:
        raise ValidationError("twist needs --class and --z")
    kappa, ext, _ = _ext_rows(inst, args)
    ids = _ext_ids(ext)
    i = _lookup(args.cls, ids, "Ext")
    ck = center_restriction(kappa)
    try:
        vals = [int(v) for v in args.z.split(",")]
    except ValueError:
        raise ValidationError("--z must be a comma separated list of integers") from None
    if any(v not in ck.Z.position for v in vals):
        raise ValidationError("z must take values in the center of G", witness=vals)
    z = validate_one_cocycle(ck.Z_gamma, [ck.Z.position[v] for v in vals])
    j = ext.classify(twist_by_z1(z, ext[i]))
    return {"class": ids[i], "z": vals, "result": ids[j], "result-index": j}, {"classes": len(ext)}


def cmd_act(inst, args) -> tuple:
    if args.cls is None or args.by is None:
        raise ValidationError("act needs --class and --by")
    kappa = inst.kappa()
    ck = center_restriction(kappa)
    cb, eb = _bounds(inst, args)
    if args.cls.startswith("h2-"):
        from .cohomology import center_h2_action

        h2 = enumerate_h2(kappa, bound=cb)
        h2z = enumerate_h2(ck.kappa_z, bound=cb)
        ids = [h2_id(c) for c in h2]
        i = _lookup(args.cls, ids, "H2(F,G)")
        a = _lookup(args.by, [h2_id(c) for c in h2z], "H2(F,Z)")
        j = center_h2_action(h2z[a], h2[i]).index
        return {"level": "h2", "class": ids[i], "by": h2_id(h2z[a]), "result": ids[j], "result-index": j}, {}
    ext = classify_ext(kappa, bound=eb)
    extz = classify_ext(ck.kappa_z, bound=eb)
    ids = _ext_ids(ext)
    zids = _ext_ids(extz)
    i = _lookup(args.cls, ids, "Ext(F,G)")
    a = _lookup(args.by, zids, "Ext(F,Z)")
    j = ext.classify(act_by_center_ext(extz[a], ext[i]))
    return {"level": "ext", "class": ids[i], "by": zids[a], "result": ids[j], "result-index": j}, {}


def _parse_series(text: str) -> list:
    try:
        return [[int(v) for v in part.split(",") if v.strip()] for part in text.split(";")]
    except ValueError:
        raise ValidationError("--series must list integers, ',' within a subgroup and ';' between them") from None


def cmd_reduce(inst, args) -> tuple:
    from .reduction import devissage, lemma_reduce, torsion_reduce_abelian

    if args.cls is None:
        raise ValidationError("reduce needs --class")
    kappa, ext, _ = _ext_rows(inst, args)
    ids = _ext_ids(ext)
    i = _lookup(args.cls, ids, "Ext")
    if args.method == "lemma":
        rep = lemma_reduce(ext[i])
    elif args.method == "torsion":
        rep = torsion_reduce_abelian(ext[i])
    else:
        if args.series is None:
            raise ValidationError("devissage needs --series")
        rep = devissage(ext[i], _parse_series(args.series))
    out = {"class": ids[i], "method": args.method, **rep.to_dict()}
    out["reduced-digest"] = table_digest(rep.reduced.H)
    return out, {}


def cmd_check_suite(args) -> tuple:
    from .suite import run_suite

    only = None
    if args.only:
        only = {int(v) for v in args.only.split(",")}
    if args.instance:
        instances = [load_instance(args.instance, args.kernel)]
    else:
        instances = list(catalog())
    digest = _digest([instance_digest(i) for i in instances])
    res = run_suite(instances, only=only)
    seconds = res.pop("_seconds")
    checks = sum(c["checks"] for c in res["criteria"])
    return digest, res, {"instances": len(instances), "checks": checks}, seconds


# -- output ---------------------------------------------------------------------------


def _emit_text(command: str, results: dict):
    out = sys.stdout
    if command == "h2":
        out.write(f"{results['count']} classes, {results['neutral']} neutral, {results['inKerRes']} in ker Res\n")
        for r in results["classes"]:
            flags = ("neutral " if r["neutral"] else "") + ("inKerRes" if r["inKerRes"] else "")
            out.write(f"  [{r['index']}] {r['id'][:19]}  {flags.strip()}\n")
    elif command == "ext":
        out.write(f"{results['count']} classes in {len(results['orbits'])} twist orbits\n")
        for r in results["classes"]:
            out.write(
                f"  [{r['index']}] {r['id'][:20]}  |H|={r['H-order']}  H {r['H-digest'][:12]}"
                f"  orbit {r['orbit']}  phi {r['phi'][:19]}\n"
            )
    elif command == "check-suite":
        for c in results["criteria"]:
            out.write(
                f"{c['status'].upper():4} {c['criterion']} {c['name']}: {c['checks']} checks on "
                f"{c['instances']} instances, {c['failures']} failures\n"
            )
            for ex in c["examples"]:
                out.write(f"       {ex['instance']}: {ex['failure']}\n")
    else:
        out.write(json.dumps(results, sort_keys=True, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extcoh", description="Extensions of finite Gamma-groups and nonabelian H^2.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--instance", help="instance JSON file or bundled instance name")
    p.add_argument("--kernel", help="kernel name inside the instance document")
    p.add_argument("--bound", type=int, help="enumeration limit for cocycles and extensions")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--class", dest="cls", help="class identifier (or unique prefix of at least 8 characters)")
    p.add_argument("--z", help="twist: comma separated values of z on Gamma, as elements of G")
    p.add_argument("--by", help="act: identifier of the acting class")
    p.add_argument("--method", choices=("lemma", "torsion", "devissage"), default="lemma")
    p.add_argument("--series", help="devissage: subgroups of G separated by ';', elements by ','")
    p.add_argument("--only", help="check-suite: comma separated criterion numbers")
    return p


def _error(exc: ExtCohError) -> int:
    sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
    return exc.exit_status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    status = 0
    try:
        if args.command == "check-suite":
            digest, results, timing, seconds = cmd_check_suite(args)
            for n, s in seconds.items():
                sys.stderr.write(f"criterion {n}: {s:.2f}s\n")
            status = 0 if results["passed"] else 3
        else:
            if not args.instance:
                raise ValidationError("--instance is required")
            inst = load_instance(args.instance, args.kernel)
            digest = instance_digest(inst)
            handler = {
                "validate": cmd_validate,
                "h2": cmd_h2,
                "ext": cmd_ext,
                "twist": cmd_twist,
                "act": cmd_act,
                "reduce": cmd_reduce,
            }[args.command]
            results, timing = handler(inst, args)
    except ExtCohError as exc:
        return _error(exc)
    if args.format == "machine":
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "instance-digest": digest,
            "results": results,
            "timing": timing,
        }
        sys.stdout.write(json.dumps(_plain(doc), sort_keys=True, separators=(",", ":")) + "\n")
    else:
        _emit_text(args.command, results)
    sys.stderr.write(f"wall {time.perf_counter() - start:.3f}s\n")
    return status


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


if __name__ == "__main__":
    raise SystemExit(main())
