"""Command line interface: grading queries, arithmetic, verification, tables.

Subcommands:
    group   closed-form (or oracle) top-level group at one grading
    mackey  the whole four-level diagram with structure maps
    mult    product of two canonical element strings
    verify  batch suites over a grading window, parallel and cached
    table   deterministic table export (json, csv, latex)

Verification results are cached one file per (p, grading, suite) under
the directory named by DIHEDRALHZ_CACHE_DIR (default ~/.cache/dihedralhz)
with a content checksum and atomic writes, so interrupted or parallel
runs never corrupt entries and reruns are incremental.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from multiprocessing import Pool

from . import ring, tate
from .dihedral import Grading, group_spec
from .oracle import ResourceBudget, mackey_axiom_check, pi_mackey

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3

SUITES = ("oracle", "assembly", "ring", "mackey", "groupcoh")


def _parse_grading(text):
    try:
        return Grading.parse(text)
    except Exception as exc:
        raise ValueError(f"bad grading {text!r}: {exc}") from exc


def _parse_window(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("window must be aMin..aMax,bMin..bMax,cMin..cMax")
    bounds = []
    for part in parts:
        lo, sep, hi = part.partition("..")
        if not sep:
            raise ValueError(f"bad range {part!r}")
        bounds.append((int(lo), int(hi)))
    return bounds


def _group_json(group, basis):
    return {
        "free_rank": group.free_rank,
        "torsion": list(group.torsion),
        "basis": list(basis),
    }


def _map_json(f):
    return {"matrix": [list(r) for r in f.matrix], "signature": f.signature()}


MAP_NAMES = {
    ("G", "Cp"): "res_G_Cp",
    ("G", "C2"): "res_G_C2",
    ("Cp", "e"): "res_Cp_e",
    ("C2", "e"): "res_C2_e",
    ("Cp", "G"): "tr_Cp_G",
    ("C2", "G"): "tr_C2_G",
    ("e", "Cp"): "tr_e_Cp",
    ("e", "C2"): "tr_e_C2",
}


def _mackey_json(spec, ans, basis_by_level):
    levels = {
        tag: _group_json(ans.groups[tag], basis_by_level.get(tag, []))
        for tag in ("G", "Cp", "C2", "e")
    }
    maps = {}
    for key, f in list(ans.res.items()) + list(ans.tr.items()):
        maps[MAP_NAMES[key]] = _map_json(f)
    maps["weyl"] = _map_json(ans.weyl)
    maps["e_tau"] = _map_json(ans.e_tau)
    maps["e_xi"] = _map_json(ans.e_xi)
    return {
        "p": spec.p,
        "grading": [ans.grading.a, ans.grading.b, ans.grading.c],
        "levels": levels,
        "maps": maps,
    }


def _closed_basis(spec, g):
    basis = {"G": ring.group_at(spec, g)[1]}
    for level in ("Cp", "C2", "e"):
        x, y = ring.restricted_xy(g, level)
        gen = ring.cyclic_group_at(spec, level, x, y)[1]
        basis[level] = [gen] if gen is not None else []
    return basis


def cmd_group(args):
    spec = group_spec(args.p)
    g = _parse_grading(args.grading)
    if args.oracle:
        ans = pi_mackey(spec, g)
        basis = []
    else:
        group, basis = ring.group_at(spec, g)
        ans = None
    group = ans.groups["G"] if ans else group
    payload = {
        "p": args.p,
        "grading": [g.a, g.b, g.c],
        "levels": {"G": _group_json(group, basis)},
        "source": "oracle" if args.oracle else "closed_form",
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_mackey(args):
    spec = group_spec(args.p)
    g = _parse_grading(args.grading)
    if args.oracle:
        ans = pi_mackey(spec, g)
        basis = {}
    else:
        ans = ring.mackey_at(spec, g)
        basis = _closed_basis(spec, g)
    payload = _mackey_json(spec, ans, basis)
    payload["source"] = "oracle" if args.oracle else "closed_form"
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_mult(args):
    spec = group_spec(args.p)
    try:
        x = ring.parse_element(spec, args.left)
        y = ring.parse_element(spec, args.right)
    except (ring.ElementSyntaxError, ring.GradingMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    product = ring.multiply(spec, x, y)
    print(ring.format_element(product))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


def _suite_oracle(spec, g):
    got = pi_mackey(spec, g)
    want = ring.mackey_at(spec, g)
    report = mackey_axiom_check(got)
    failures = [name for name, ok, _ in report if not ok]
    match = got.signature() == want.signature() and not failures
    out = {"status": "match" if match else "mismatch"}
    if not match:
        out["oracle"] = got.signature()
        out["closed_form"] = want.signature()
        out["axiom_failures"] = failures
    return out


def _suite_assembly(spec, g):
    got = tate.assemble_at(spec, g)[0]
    want = ring.group_at(spec, g)[0]
    seq = tate.kc_sequences(spec, g)
    split = tate.splitting_check(spec, g)
    ok = (
        got == want
        and seq["second_row_exact"]
        and seq["first_row_exact"]
        and seq["second_row_rank"]
        and seq["first_row_rank"]
        and split["match"]
    )
    out = {"status": "match" if ok else "mismatch"}
    if not ok:
        out["assembled"] = str(got)
        out["closed_form"] = str(want)
        out["exactness"] = {k: v for k, v in seq.items() if isinstance(v, bool)}
        out["splitting"] = split
    return out


_RING_PROBES = (
    ring.Monomial(0, 1, 0, 0, 0),
    ring.Monomial(0, 0, 1, 0, 0),
    ring.Monomial(0, 0, 0, 1, 0),
    ring.Monomial(0, 0, 0, 0, 1),
    ring.Monomial(1, 0, -1, 0, -1),
    ring.Monomial(0, -1, 0, 0, 0),
)


def _suite_ring(spec, g):
    problems = []
    monos = ring.monomials_at(spec, g)
    for m in monos:
        x = ring.element(spec, 1, m)
        for pm in _RING_PROBES:
            y = ring.element(spec, 1, pm)
            if y.is_zero:
                continue
            xy = ring.multiply(spec, x, y)
            yx = ring.multiply(spec, y, x)
            if xy.coeff != yx.coeff or (not xy.is_zero and xy.mono != yx.mono):
                problems.append(f"commutativity {m} {pm}")
            if not xy.is_zero:
                want = Grading(
                    g.a + pm.degree().a, g.b + pm.degree().b, g.c + pm.degree().c
                )
                if xy.degree() != want:
                    problems.append(f"degree additivity {m} {pm}")
            for qm in _RING_PROBES[:3]:
                z = ring.element(spec, 1, qm)
                left = ring.multiply(spec, ring.multiply(spec, x, y), z)
                right = ring.multiply(spec, x, ring.multiply(spec, y, z))
                if left.coeff != right.coeff or (
                    not left.is_zero and left.mono != right.mono
                ):
                    problems.append(f"associativity {m} {pm} {qm}")
    out = {"status": "match" if not problems else "mismatch"}
    if problems:
        out["problems"] = problems
    return out


def _suite_mackey(spec, g):
    ans = ring.mackey_at(spec, g)
    report = mackey_axiom_check(ans)
    failures = [(name, detail) for name, ok, detail in report if not ok]
    out = {"status": "match" if not failures else "mismatch"}
    if failures:
        out["failures"] = failures
    return out


_SUITE_FN = {
    "oracle": _suite_oracle,
    "assembly": _suite_assembly,
    "ring": _suite_ring,
    "mackey": _suite_mackey,
}


def cache_dir():
    return os.environ.get(
        "DIHEDRALHZ_CACHE_DIR",
        os.path.join(os.path.expanduser("~"), ".cache", "dihedralhz"),
    )


def _cache_path(p, key, suite):
    return os.path.join(cache_dir(), f"p{p}_{key}_{suite}.json")


def _checksum(payload):
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode()
    ).hexdigest()


def cache_read(p, key, suite):
    path = _cache_path(p, key, suite)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            entry = json.load(fh)
        if entry.get("checksum") == _checksum(entry.get("payload")):
            return entry["payload"]
    except (OSError, ValueError):
        pass
    return None


def cache_write(p, key, suite, payload):
    directory = cache_dir()
    os.makedirs(directory, exist_ok=True)
    entry = {"checksum": _checksum(payload), "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, _cache_path(p, key, suite))
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def _verify_one(task):
    p, key, suite = task
    cached = cache_read(p, key, suite)
    if cached is not None:
        return key, suite, cached, True
    spec = group_spec(p)
    g = Grading.parse(key)
    result = _SUITE_FN[suite](spec, g)
    cache_write(p, key, suite, result)
    return key, suite, result, False


def _groupcoh_results(p, use_cache=True):
    from .groupcoh import closed_form_compare

    key = "degrees0..8"
    cached = cache_read(p, key, "groupcoh") if use_cache else None
    if cached is not None:
        return [(key, "groupcoh", cached, True)]
    rows = closed_form_compare(p, max_degree=8)
    status = "match" if all(r["match"] for r in rows) else "mismatch"
    result = {"status": status, "rows": rows}
    cache_write(p, key, "groupcoh", result)
    return [(key, "groupcoh", result, False)]


def cmd_verify(args):
    spec = group_spec(args.p)
    del spec
    bounds = _parse_window(args.window)
    suites = SUITES if args.suite == "all" else (args.suite,)
    grading_suites = [s for s in suites if s != "groupcoh"]
    tasks = []
    for suite in grading_suites:
        for b in range(bounds[1][0], bounds[1][1] + 1):
            for c in range(bounds[2][0], bounds[2][1] + 1):
                for a in range(bounds[0][0], bounds[0][1] + 1):
                    tasks.append((args.p, Grading(a, b, c).serialize(), suite))
    started = time.time()
    results = []
    try:
        if args.jobs > 1 and tasks:
            with Pool(args.jobs) as pool:
                results = pool.map(_verify_one, tasks)
        else:
            results = [_verify_one(t) for t in tasks]
        if "groupcoh" in suites:
            results.extend(_groupcoh_results(args.p))
    except ResourceBudget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    results.sort(key=lambda r: (r[1], r[0]))
    mismatches = [r for r in results if r[2]["status"] != "match"]
    report = {
        "p": args.p,
        "window": args.window,
        "suites": list(suites),
        "checked": len(results),
        "cache_hits": sum(1 for r in results if r[3]),
        "mismatches": [
            {"grading": key, "suite": suite, "detail": detail}
            for key, suite, detail, _hit in mismatches
        ],
        "elapsed_seconds": round(time.time() - started, 3),
        "status": "match" if not mismatches else "mismatch",
    }
    print(json.dumps(report, sort_keys=True))
    return EXIT_OK if not mismatches else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# tables


def _table_rows(spec, bounds, theory):
    rows = []
    for a in range(bounds[0][0], bounds[0][1] + 1):
        for b in range(bounds[1][0], bounds[1][1] + 1):
            for c in range(bounds[2][0], bounds[2][1] + 1):
                g = Grading(a, b, c)
                if theory == "main":
                    group, basis = ring.group_at(spec, g)
                else:
                    group, basis = tate.theory_group_at(spec, theory, g)
                rows.append(
                    {
                        "grading": [a, b, c],
                        "group": str(group),
                        "basis": basis,
                    }
                )
    return rows


def cmd_table(args):
    spec = group_spec(args.p)
    try:
        parts = args.range.split(",")
        if len(parts) == 1:
            lo, _, hi = parts[0].partition("..")
            bounds = [(int(lo), int(hi)), (0, 0), (0, 0)]
        else:
            bounds = _parse_window(args.range)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    theory = args.theory
    if theory != "main" and theory not in tate.THEORY_TAGS:
        print(f"error: unknown theory {theory!r}", file=sys.stderr)
        return EXIT_BAD_INPUT
    rows = _table_rows(spec, bounds, theory)
    if args.format == "json":
        print(json.dumps({"p": args.p, "theory": theory, "rows": rows},
                         sort_keys=True))
    elif args.format == "csv":
        print("a,b,c,group,basis")
        for r in rows:
            a, b, c = r["grading"]
            basis = ";".join(r["basis"])
            print(f"{a},{b},{c},{r['group']},{basis}")
    else:
        print(r"\begin{tabular}{llll}")
        print(r"a & b & c & group \\")
        for r in rows:
            a, b, c = r["grading"]
            group = r["group"].replace("Z", r"\mathbb{Z}")
            print(f"{a} & {b} & {c} & ${group}$ \\\\")
        print(r"\end{tabular}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dihedralhz",
        description="graded homotopy of the dihedral Eilenberg-MacLane spectrum",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--p", type=int, required=True, help="odd prime")

    sp = sub.add_parser("group", help="top-level group at one grading")
    add_common(sp)
    sp.add_argument("--grading", required=True, help="a,b,c")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(fn=cmd_group)

    sp = sub.add_parser("mackey", help="full four-level diagram at one grading")
    add_common(sp)
    sp.add_argument("--grading", required=True, help="a,b,c")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(fn=cmd_mackey)

    sp = sub.add_parser("mult", help="product of two canonical elements")
    add_common(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(fn=cmd_mult)

    sp = sub.add_parser("verify", help="batch suites over a window")
    add_common(sp)
    sp.add_argument("--window", default="-6..6,-3..3,-3..3")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--suite", default="all", choices=SUITES + ("all",))
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("table", help="deterministic table export")
    add_common(sp)
    sp.add_argument("--format", default="json", choices=("json", "csv", "latex"))
    sp.add_argument("--range", default="-4..4")
    sp.add_argument("--theory", default="main")
    sp.set_defaults(fn=cmd_table)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the contract
        return int(exc.code or 0)
    try:
        spec_probe = group_spec(args.p)
        del spec_probe
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ResourceBudget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
