"""Command line front end: declarative JSON jobs in, tables and verdicts out.

A job document looks like

    {"command": "koszul", "ring": {"kind": "Z"}, "N": 3, "elements": [2, 3]}

Modules are written either as {"gens": g, "relations": [[...], ...]}
(a g x r matrix whose columns are relations), as {"free": r, "factors": [..]},
as a canonical string such as "Z^1 + Z/4" or as a bare rank r for R^r.  Complexes are
{"lo": n, "modules": [...], "differentials": [...]} with one matrix per
consecutive pair of degrees.  Matrix entries are integers or integer strings,
coefficient lists over cyclotomic rings and [num, den] pairs over
localizations.

Exit codes: 0 pass, 1 verification failure or engine error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import cech_telescope as ct
from . import koszul as kz
from . import suites
from . import torsion_completion as tc
from .errors import NCXError, ParseError, SchemaError, Unclassified
from .exact_linalg import FPModule, Matrix
from .ncomplex_core import NComplex, cohomology, cohomology_table, validate
from .rings import ZZ, ring_from_json

COMMANDS = ("validate", "coh", "koszul", "cech", "telescope", "proregular", "localcoh", "complete", "mgm",
            "invariants", "check")

# fields each command needs besides "command"
REQUIRED = {
    "validate": ("complex",),
    "coh": ("complex",),
    "koszul": ("N", "elements"),
    "cech": ("N", "elements"),
    "telescope": ("N", "x", "stage"),
    "proregular": ("N", "elements", "stages"),
    "localcoh": ("N", "ideal", "module"),
    "complete": ("N", "ideal", "module"),
    "mgm": ("N", "ideal", "module"),
    "invariants": ("N", "ideal", "module"),
    "check": ("suite", "seed", "count"),
}


@dataclass
class JobSpec:
    command: str
    ring: object = ZZ
    N: int | None = None
    operands: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"command": self.command, "ring": self.ring.to_json()}
        if self.N is not None:
            doc["N"] = self.N
        doc.update(self.operands)
        doc.update(self.options)
        return doc


OPTION_KEYS = ("stages", "seed", "t", "n", "witness", "stage", "count", "suite")


# parsing ------------------------------------------------------------------

def parse_input(text: str) -> JobSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return job_from_doc(doc)


def job_from_doc(doc) -> JobSpec:
    if not isinstance(doc, dict):
        raise SchemaError("command", "a job must be a JSON object")
    cmd = doc.get("command")
    if cmd not in COMMANDS:
        raise SchemaError("command", f"command must be one of {', '.join(COMMANDS)}")
    try:
        ring = ring_from_json(doc.get("ring", {"kind": "Z"}))
    except (NCXError, KeyError, TypeError, ValueError) as e:
        raise SchemaError("ring", f"bad ring: {e}") from None
    for key in REQUIRED[cmd]:
        if key not in doc:
            raise SchemaError(key)
    N = doc.get("N")
    if "complex" in doc and N is None:
        N = doc["complex"].get("N") if isinstance(doc["complex"], dict) else None
        if N is None:
            raise SchemaError("N")
    if N is not None and (not isinstance(N, int) or isinstance(N, bool) or N < 2):
        raise SchemaError("N", "N must be an integer at least 2")
    for key in ("stages", "stage", "count"):
        if key in doc and (not isinstance(doc[key], int) or doc[key] < 1):
            raise SchemaError(key, f"{key} must be a positive integer")
    if "t" in doc and doc["t"] != "all" and not isinstance(doc["t"], int):
        raise SchemaError("t", "t must be 'all' or an integer")
    operands, options = {}, {}
    for k, v in doc.items():
        if k in ("command", "ring", "N"):
            continue
        (options if k in OPTION_KEYS else operands)[k] = v
    job = JobSpec(cmd, ring, N, operands, options)
    _check_operands(job)
    return job


def _check_operands(job: JobSpec):
    R = job.ring
    ops = job.operands
    if "complex" in ops:
        parse_complex(ops["complex"], R, job.N)
    for key in ("elements", "ideal"):
        if key in ops:
            parse_elements(ops[key], R, key)
    if "module" in ops:
        parse_module(ops["module"], R)
    if job.command == "check" and job.options["suite"] not in suites.SUITES:
        raise SchemaError("suite", f"suite must be one of {', '.join(sorted(suites.SUITES))}")


def parse_matrix(rows, R, nrows, ncols, name) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SchemaError(name, "matrices are lists of rows")
    if nrows == 0 or ncols == 0:
        return Matrix.zeros(R, nrows, ncols)
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise SchemaError(name, f"expected a {nrows} x {ncols} matrix")
    try:
        return Matrix(R, [[R.from_literal(v) for v in r] for r in rows], nrows, ncols)
    except (NCXError, ValueError, TypeError) as e:
        raise SchemaError(name, f"bad entry: {e}") from None


_TERM = re.compile(r"^(?:Z\^(\d+)|Z/(\d+)|Z|0)$")


def parse_module(lit, R=ZZ) -> FPModule:
    if isinstance(lit, str):
        free, factors = 0, []
        for term in lit.replace(" ", "").split("+"):
            m = _TERM.match(term)
            if not m:
                raise SchemaError("module", f"cannot read {term!r}")
            if m.group(1):
                free += int(m.group(1))
            elif m.group(2):
                factors.append(int(m.group(2)))
            elif term == "Z":
                free += 1
        return FPModule.from_factors(R, free, factors)
    if isinstance(lit, int) and not isinstance(lit, bool) and lit >= 0:
        return FPModule(R, lit)
    if not isinstance(lit, dict):
        raise SchemaError("module", "a module is a rank, a string or an object")
    if "gens" in lit:
        g = lit["gens"]
        if not isinstance(g, int) or g < 0:
            raise SchemaError("module.gens", "gens must be a nonnegative integer")
        rel = lit.get("relations", [])
        k = len(rel[0]) if rel else 0
        return FPModule(R, g, parse_matrix(rel, R, g, k, "module.relations") if g else None)
    if "free" in lit or "factors" in lit:
        return FPModule.from_factors(R, int(lit.get("free", 0)), [R.from_literal(f) for f in lit.get("factors", [])])
    raise SchemaError("module", "expected gens/relations or free/factors")


def parse_complex(lit, R, N) -> NComplex:
    if not isinstance(lit, dict):
        raise SchemaError("complex", "a complex is an object")
    for key in ("lo", "modules"):
        if key not in lit:
            raise SchemaError(f"complex.{key}")
    mods = [parse_module(m, R) for m in lit["modules"]]
    if not mods:
        raise SchemaError("complex.modules", "need at least one module")
    diffs = lit.get("differentials", [])
    if len(diffs) != len(mods) - 1:
        raise SchemaError("complex.differentials", "need one differential per consecutive pair")
    mats = [parse_matrix(d, R, mods[i + 1].ngens, mods[i].ngens, f"complex.differentials[{i}]")
            for i, d in enumerate(diffs)]
    return NComplex(N, R, int(lit["lo"]), mods, mats)


def parse_elements(lit, R, name="elements"):
    if isinstance(lit, str):
        lit = [x for x in lit.split(",") if x.strip()]
    if not isinstance(lit, list) or not lit:
        raise SchemaError(name, "need a nonempty list of ring elements")
    try:
        return [R.from_literal(x) for x in lit]
    except (NCXError, ValueError, TypeError) as e:
        raise SchemaError(name, f"bad element: {e}") from None


def _ints(elements):
    return [int(x) for x in elements]


# running --------------------------------------------------------------------

def _table(tab: dict) -> dict:
    return {f"H^{n}_{t}": (v.render() if hasattr(v, "render") else str(v)) for (n, t), v in sorted(tab.items())}


def _t_range(job, N):
    t = job.options.get("t", "all")
    return range(1, N) if t == "all" else [int(t)]


def run(job: JobSpec) -> dict:
    """Dispatch a job; the report carries a verdict block with pass/fail."""
    handler = _HANDLERS[job.command]
    body, ok = handler(job)
    report = {"command": job.command, "ring": job.ring.name(), "result": body,
              "verdict": {"pass": bool(ok), "status": "PASS" if ok else "FAIL"}}
    if job.N is not None:
        report["N"] = job.N
    if "seed" in job.options:
        report["seed"] = job.options["seed"]
    return report


def _do_validate(job):
    X = parse_complex(job.operands["complex"], job.ring, job.N)
    v = validate(X)
    return {"valid": v["valid"], "violations": v["violations"], "first_violation": v["first_violation"]}, v["valid"]


def _do_coh(job):
    X = parse_complex(job.operands["complex"], job.ring, job.N)
    v = validate(X)
    if not v["valid"]:
        return {"valid": False, "first_violation": v["first_violation"], "violations": v["violations"]}, False
    lo, hi = X.lo, X.hi
    if "n" in job.options:
        a, b = str(job.options["n"]).split("..")
        lo, hi = int(a), int(b)
    tab = {(n, t): cohomology(X, n, t) for n in range(lo, hi + 1) for t in _t_range(job, X.N)}
    return {"valid": True, "table": _table(tab)}, True


def _do_koszul(job):
    R, N = job.ring, job.N
    xs = parse_elements(job.operands["elements"], R)
    M = parse_module(job.operands["module"], R) if "module" in job.operands else FPModule(R, 1)
    X = kz.koszul_on(R, xs, N, M)
    K = kz.koszul_ring(R, xs, N)
    v = validate(K)
    tab = {(n, t): cohomology(X, n, t) for n in X.degrees() for t in _t_range(job, N)}
    rep = kz.formula_report(R, xs, M, N)
    body = {"elements": [R.fmt(x) for x in xs], "module": M.classify().render(), "valid": v["valid"],
            "table": _table(tab), "formulas": rep["rows"]}
    if job.options.get("witness"):
        body["differentials"] = {str(n): K.diff(n).to_literal() for n in range(K.lo, K.hi)}
    return body, v["valid"] and rep["agree"]


def _do_cech(job):
    R, N = job.ring, job.N
    xs = parse_elements(job.operands["elements"], R)
    C = ct.cech_ring(xs, N, R)
    body = {"complex": C.to_json()}
    ok = True
    try:
        body["valid"] = validate(C.localized())["valid"]
        ok = body["valid"]
    except NCXError as e:
        body["valid"] = None
        body["note"] = str(e)
    if "module" in job.operands:
        M = parse_module(job.operands["module"], R)
        S = job.options.get("stages", tc.S_DEFAULT)
        body["table"] = _table(ct.cech_table(xs, M, N, S))
        if len(xs) == 1:
            cf = ct.cech_closed_form_d1(int(xs[0]), M, N)
            tab = ct.cech_table(xs, M, N, S)
            body["closed_form_agrees"] = all(tab[k] == cf[k] for k in cf)
            ok = ok and body["closed_form_agrees"]
    return body, ok


def _do_telescope(job):
    R, N = job.ring, job.N
    x = R.from_literal(job.operands["x"])
    s = job.options["stage"]
    T = ct.telescope(int(x), N, s, R)
    v = validate(T)
    comp = ct.telescope_comparison(int(x), N, max(s, 1), R)
    body = {"x": int(x), "stage": s, "valid": v["valid"], "table": _table(cohomology_table(T)),
            "comparison": comp.to_json()}
    return body, v["valid"] and comp.stable_from is not None


def _do_proregular(job):
    R, N = job.ring, job.N
    xs = parse_elements(job.operands["elements"], R)
    rep = ct.proregular_probe(xs, N, job.options["stages"], R)
    return rep.to_json(), True


def _module_job(job):
    R, N = job.ring, job.N
    if R != ZZ:
        raise SchemaError("ring", "this command works over the integers")
    xs = _ints(parse_elements(job.operands["ideal"], R, "ideal"))
    M = parse_module(job.operands["module"], R)
    return xs, M, N, job.options.get("stages", tc.S_DEFAULT)


def _do_localcoh(job):
    xs, M, N, S = _module_job(job)
    tab = tc.local_table(xs, M, N, S)
    body = {"ideal": xs, "module": M.classify().render(), "stages": S, "table": _table(tab)}
    ok = True
    if len(xs) <= 2:
        cech = ct.cech_table(xs, M, N, S)
        body["cech_agrees"] = all(tab[k] == cech[k] for k in tab)
        ok = body["cech_agrees"]
    return body, ok


def _do_complete(job):
    xs, M, N, S = _module_job(job)
    tab = tc.completion_table(xs, M, N, S)
    body = {"ideal": xs, "module": M.classify().render(), "stages": S, "table": _table(tab),
            "adic_completion": tc.adic_completion(M, xs, S).render()}
    ok = True
    if len(xs) == 1 and xs[0] != 0:
        tel = tc.telescope_completion_table(xs[0], M, N, S)
        body["telescope_agrees"] = all(tab[k] == tel[k] for k in tab)
        ok = body["telescope_agrees"]
    return body, ok


def _do_mgm(job):
    xs, M, N, S = _module_job(job)
    rep = tc.mgm_report(xs, M, N, S)
    return rep, rep["pass"]


def _do_invariants(job):
    xs, M, N, S = _module_job(job)
    rows = [tc.invariants(xs, M, t, N, S) for t in _t_range(job, N)]
    return {"ideal": xs, "module": M.classify().render(), "rows": rows}, all(r["pass"] for r in rows)


def _do_check(job):
    rep = suites.SUITES[job.options["suite"]](job.options["seed"], job.options["count"])
    return rep, rep["pass"]


_HANDLERS = {"validate": _do_validate, "coh": _do_coh, "koszul": _do_koszul, "cech": _do_cech,
             "telescope": _do_telescope, "proregular": _do_proregular, "localcoh": _do_localcoh,
             "complete": _do_complete, "mgm": _do_mgm, "invariants": _do_invariants, "check": _do_check}


# rendering ----------------------------------------------------------------------

def render(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    lines = [f"command: {report['command']}", f"ring: {report['ring']}"]
    for key in ("N", "seed"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    _render_text(report["result"], lines, "")
    lines.append(f"verdict: {report['verdict']['status']}")
    return "\n".join(lines)


def _render_text(body, lines, indent):
    if not isinstance(body, dict):
        lines.append(indent + str(body))
        return
    for key in sorted(body):
        val = body[key]
        if key == "table" and isinstance(val, dict):
            lines.append(f"{indent}table:")
            width = max((len(k) for k in val), default=0)
            for k in sorted(val, key=_slot_key):
                lines.append(f"{indent}  {k.ljust(width)} = {val[k]}")
        elif isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            _render_text(val, lines, indent + "  ")
        else:
            lines.append(f"{indent}{key}: {json.dumps(val, sort_keys=True) if isinstance(val, (list, bool)) or val is None else val}")


def _slot_key(label):
    m = re.match(r"H\^(-?\d+)_(\d+)", label)
    return (int(m.group(1)), int(m.group(2))) if m else (0, 0)


# argument handling --------------------------------------------------------------------

def _ring_arg(text):
    """Z, Zmod:m, F:p[:q], cyclotomic:n, localized:a,b or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    kind, _, rest = text.partition(":")
    if kind == "Z":
        return {"kind": "Z"}
    if kind == "Zmod":
        return {"kind": "Zmod", "m": int(rest)}
    if kind == "F":
        p, _, q = rest.partition(":")
        return {"kind": "F", "p": int(p), **({"q": int(q)} if q else {})}
    if kind == "cyclotomic":
        return {"kind": "cyclotomic", "N": int(rest)}
    if kind == "localized":
        return {"kind": "localized", "inverted": [int(v) for v in rest.split(",")]}
    raise argparse.ArgumentTypeError(f"unknown ring {text!r}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise SchemaError("file", f"cannot read {path}: {e.strerror}") from None


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def _module_from_file(path):
    text = _read(path)
    doc = _load_json(text)
    if isinstance(doc, dict) and "module" in doc:
        return doc["module"]
    return doc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncx", description="Exact computations with N-complexes.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ring=True, N=True):
        if ring:
            sp.add_argument("--ring", type=_ring_arg, default={"kind": "Z"})
        if N:
            sp.add_argument("--N", type=int, required=True)
        sp.add_argument("--format", choices=("text", "json"), default=None, dest="fmt")

    for name in ("validate", "coh"):
        sp = sub.add_parser(name)
        sp.add_argument("file")
        sp.add_argument("--format", choices=("text", "json"), default=None, dest="fmt")
        if name == "coh":
            sp.add_argument("--n", default=None)
            sp.add_argument("--t", default="all")
    sp = sub.add_parser("koszul")
    common(sp)
    sp.add_argument("--elements", required=True)
    sp.add_argument("--module", default=None)
    sp.add_argument("--witness", action="store_true")
    sp = sub.add_parser("cech")
    common(sp)
    sp.add_argument("--elements", required=True)
    sp.add_argument("--module", default=None)
    sp.add_argument("--stages", type=int, default=None)
    sp = sub.add_parser("telescope")
    common(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--stage", type=int, required=True)
    sp = sub.add_parser("proregular")
    common(sp)
    sp.add_argument("--elements", required=True)
    sp.add_argument("--stages", type=int, required=True)
    for name in ("localcoh", "complete", "mgm", "invariants"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--ideal", required=True)
        sp.add_argument("--module", required=True)
        if name != "invariants":
            sp.add_argument("--stages", type=int, default=None)
        else:
            sp.add_argument("--t", default="all")
    sp = sub.add_parser("check")
    sp.add_argument("--suite", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--format", choices=("text", "json"), default=None, dest="fmt")
    return p


def job_from_args(args) -> JobSpec:
    cmd = args.command
    if cmd in ("validate", "coh"):
        doc = _load_json(_read(args.file))
        if not isinstance(doc, dict):
            raise SchemaError("complex", "the file must hold a JSON object")
        if doc.get("command", cmd) != cmd:
            raise SchemaError("command", f"file describes a {doc['command']!r} job")
        if "complex" not in doc:
            doc = {"complex": doc, "N": doc.get("N"), "ring": doc.get("ring", {"kind": "Z"})}
        doc.setdefault("command", cmd)
        if cmd == "coh":
            if args.n:
                doc["n"] = args.n
            doc["t"] = "all" if args.t == "all" else int(args.t)
        return job_from_doc(doc)
    doc = {"command": cmd}
    if hasattr(args, "ring"):
        doc["ring"] = args.ring
    if getattr(args, "N", None) is not None:
        doc["N"] = args.N
    for key in ("elements", "ideal"):
        if getattr(args, key, None):
            doc[key] = [v.strip() for v in getattr(args, key).split(",") if v.strip()]
    if getattr(args, "module", None):
        doc["module"] = _module_from_file(args.module)
    for key in ("stages", "stage", "seed", "count", "suite"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    if getattr(args, "x", None) is not None:
        doc["x"] = args.x
    if getattr(args, "witness", False):
        doc["witness"] = True
    if cmd == "invariants" and args.t != "all":
        doc["t"] = int(args.t)
    return job_from_doc(doc)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    fmt = getattr(args, "fmt", None) or args.format
    try:
        job = job_from_args(args)
    except (ParseError, SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        report = run(job)
    except Unclassified as e:
        print(f"error: {e}", file=sys.stderr)
        if e.dump is not None:
            print(json.dumps(e.dump, sort_keys=True), file=sys.stderr)
        return 1
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NCXError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(render(report, fmt))
    return 0 if report["verdict"]["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
