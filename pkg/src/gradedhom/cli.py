"""Command-line front end.

Every command produces a Report with the command echo, a results payload and
an audit section.  Exit codes: 0 success (negative mathematical findings are
successes), 1 when a mathematical hypothesis of the operation fails, 2 on
input errors.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import complex as cx
from . import gmod, gring, sympow
from . import site as st
from .coeff import CoefficientRing
from .errors import CorpusMissing, HypothesisFailed, InputError, UnknownCommand
from .serialize import (
    complex_from_json,
    dumps,
    load,
    module_from_json,
    ring_from_json,
    site_job_from_json,
    theory_from_json,
)

COMMANDS = ("ring", "module", "sym", "young", "homology", "tor", "site", "golden")
DEFAULT_BOUNDS = {"max_power": sympow.MAX_POWER, "max_length": sympow.MAX_LENGTH,
                  "max_words": sympow.MAX_WORDS, "max_objects": st.MAX_OBJECTS, "depth": 0}


@dataclass
class JobSpec:
    command: str
    args: dict = field(default_factory=dict)
    W: int = 10
    bounds: dict = field(default_factory=dict)
    format: str = "json"
    base_dir: str = None

    def bound(self, key):
        return int(self.bounds.get(key, DEFAULT_BOUNDS[key]))


@dataclass
class Report:
    command: str
    results: dict
    audit: dict
    exit_code: int = 0

    def to_json(self):
        status = {0: "ok", 1: "hypothesis_failed", 2: "input_error"}[self.exit_code]
        return {"command": self.command, "status": status, "results": self.results, "audit": self.audit}

    def render(self, fmt="json"):
        if fmt == "text":
            return "\n".join(_text_lines(self.to_json())) + "\n"
        return dumps(self.to_json())


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{prefix}{k}." if isinstance(obj[k], (dict, list)) and obj[k] else f"{prefix}{k}")
        return
    if isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _text_lines(v, f"{prefix}{i}.")
        return
    yield f"{prefix.rstrip('.')}: {obj}"


# -- helpers -----------------------------------------------------------------

def _monomial_list(text):
    """'(x, y^2)' or a list of monomial strings."""
    if isinstance(text, list):
        return [str(t) for t in text]
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    return [p.strip() for p in t.split(",") if p.strip()]


def _type_list(value):
    if isinstance(value, str):
        return [int(x) for x in value.replace(" ", "").split(",") if x]
    return [tuple(v) if isinstance(v, list) else v for v in value]


def _unknowns(cert, label, W, audit):
    if getattr(cert, "verdict", "") in ("UnknownUpTo", "Unknown"):
        audit.setdefault("unknown", []).append({"item": label, "truncation": W})


# -- commands ----------------------------------------------------------------

def cmd_ring(job, audit):
    a = job.args
    ring = ring_from_json(a["ring"], job.base_dir)
    for g in a.get("localize", []):
        ring = gring.localize(ring, g)
    out = {"ring": str(ring)}
    conn = gring.is_connected(ring)
    out["connected"] = {"value": conn.connected, "reason": conn.reason}
    if isinstance(ring, gring.ProductRing):
        out["factors"] = [{"ring": str(f), "profile": f.profile} for f in ring.factors]
        return out
    out["profile"] = ring.profile
    out["primes"] = [{"prime": str(p), "minimal": p.minimal} for p in gring.spec_monomial_primes(ring)]
    if ring.profile not in ("infinite",):
        out["slices"] = {str(w): len(ring.weight_basis(w)) for w in range(0, job.W + 1)}
    if "element" in a:
        out["normal_form"] = str(ring.parse(a["element"]))
    return out


def cmd_module(job, audit):
    a = job.args
    M = module_from_json(a["module"], job.base_dir)
    ops = a.get("ops", ["nakayama", "free"])
    out = {"ring": str(M.ring)}
    if "slice" in ops:
        w = int(a.get("weight", 0))
        out["slice"] = [{"degree": s.degree, "basis": list(s.basis), "dim": s.dim} for s in gmod.slice(M, w)]
    if "nakayama" in ops:
        out["nakayama_is_zero"] = gmod.nakayama_is_zero(M)
    if "free" in ops:
        cert = gmod.free_rank_type(M, job.W)
        _unknowns(cert, "free_rank_type", job.W, audit)
        out["free_rank_type"] = cert.to_json()
    if "spread" in ops:
        p = gring.monomial_prime(M.ring, _monomial_list(a["prime"]))
        so = gmod.spread_out(M, p, job.W)
        out["spread_out"] = {"prime": str(p), "f": str(so.f), "type": [list(s) for s in so.certificate.type]}
    if "witness" in ops:
        w = gmod.locally_free_witness(M, job.W)
        out["locally_free_witness"] = {"cover": [str(f) for f in w.cover], "parity_type": list(w.parity_type),
                                       "local_types": [[p, f, [list(s) for s in t]] for p, f, t in w.local_types],
                                       "collapse_algebra": w.collapse_algebra}
    return out


def cmd_sym(job, audit):
    a = job.args
    coeff = CoefficientRing.parse(a.get("coeff", "Q"))
    t = _type_list(a["type"])
    if "adams" in a:
        rows = sympow.adams_stage_types(t, int(a["adams"]), int(a.get("J", 2)), coeff)
        return {"stages": [{"j": r["j"], "kind": r["kind"], "zero": r["zero"], "type": [list(x) for x in r["type"]]}
                           for r in rows]}
    n = int(a["n"])
    ty = sympow.sym_type(t, n, coeff)
    return {"n": n, "zero": not ty, "type": [list(x) for x in ty]}


def cmd_young(job, audit):
    a = job.args
    X = sympow.SuperSpace.parse(a["space"], [tuple(e) for e in a.get("extra", [])])
    m, n = sympow.parse_shape(a["shape"])
    lim = {"max_length": job.bound("max_length"), "max_words": job.bound("max_words")}
    out = {"space": f"{X.even_dim}|{X.odd_dim}", "shape": f"{m}x{n}"}
    if a.get("word"):
        op = sympow.young_symmetrizer(X, m, n, **lim)
        out["identity_factorization"] = sympow.identity_factorization(X, op, list(a["word"]))
    if a.get("brute"):
        zero = sympow.operator_is_zero(sympow.young_symmetrizer(X, m, n, **lim), X, lim["max_words"])
        out["zero"] = zero
        out["checked_words"] = X.dim ** (m * n)
    else:
        rep = sympow.quasi_idempotence(X, m, n, verify_all=False, **lim)
        out.update(rep.to_json())
    return out


def _apply_algebra(X, a, job):
    alg = a.get("algebra")
    if not alg:
        return X
    H = theory_from_json(alg, X.ring, job.W, job.base_dir)
    return H.apply(X)


def cmd_homology(job, audit):
    a = job.args
    X = complex_from_json(a["complex"], job.base_dir)
    X = _apply_algebra(X, a, job)
    degrees = [int(a["n"])] if "n" in a else None
    rep = cx.homology_report(X, job.W, degrees)
    return rep.to_json()


def cmd_tor(job, audit):
    a = job.args
    ring = ring_from_json(a["ring"], job.base_dir)
    I, J = _monomial_list(a["module"]), _monomial_list(a["module2"])
    n = int(a.get("n", 1))
    e = cx.tor(ring, I, J, n, job.W)
    audit.setdefault("exactness_audits", []).append({"resolution": "R/(" + ",".join(I) + ")", "passed": True,
                                                     "truncation": job.W, "length": n + 1})
    return {"n": n, "module": I, "module2": J, "start": e.start, "dims": list(e.dims)}


def cmd_site(job, audit):
    a = job.args
    op = a.get("op", "classify")
    base, theories, cat, W, _ = site_job_from_json(a["job"], job.base_dir)
    depth = int(a.get("depth", job.bound("depth")))
    if depth:
        cat = st.catalog_closure(cat, depth, job.bound("max_objects"))
    names = a.get("theories")
    if names:
        lookup = {t.name: t for t in theories}
        theories = [lookup[n] for n in names]
    if not theories:
        raise InputError("the site job defines no theories")
    out = {"objects": len(cat.objects), "maps": len(cat.maps)}
    if op == "classify":
        for H in theories:
            duals, epis = st.classify_catalog(H, cat, W)
            for k, c in duals.items():
                _unknowns(c, f"{H.name}:{k}", W, audit)
            out[H.name] = {"duals": {k: c.to_json() for k, c in duals.items()},
                           "epis": {k: c.verdict for k, c in epis.items()}}
    elif op == "compare":
        if len(theories) < 2:
            raise InputError("compare needs two theories")
        rep = st.compare_theories(theories[0], theories[1], cat, W)
        out.update(rep.to_json())
    elif op == "cover":
        H = theories[0]
        if "p" in a:
            p = cat.maps[a["p"]][2]
            f = cat.maps[a.get("f", a["p"])][2]
            cp = st.cover_pullback(H, p, f, W)
            out["pullback"] = cp.to_json()
            out["exactness"] = st.exactness_of_cover(H, p, W).to_json()
        else:
            duals, epis = st.classify_catalog(H, cat, W)
            out["exactness"] = {k: st.exactness_of_cover(H, cat.maps[k][2], W).exact
                                for k, c in epis.items() if c.is_epi}
    else:
        raise UnknownCommand(f"unknown site operation {op!r}")
    return out


def cmd_golden(job, audit):
    reports = emit_golden(job.args.get("corpus"), job.args.get("out"))
    return {"reports": sorted(reports)}


HANDLERS = {"ring": cmd_ring, "module": cmd_module, "sym": cmd_sym, "young": cmd_young,
            "homology": cmd_homology, "tor": cmd_tor, "site": cmd_site, "golden": cmd_golden}


def run(job):
    handler = HANDLERS.get(job.command)
    if handler is None:
        return Report(job.command, {"error": "UnknownCommand", "message": f"unknown command {job.command!r}"},
                      {"W": job.W}, 2)
    audit = {"W": job.W, "bounds": {k: job.bound(k) for k in sorted(DEFAULT_BOUNDS)}}
    try:
        results = handler(job, audit)
        code = 0
    except HypothesisFailed as e:
        results = {"finding": type(e).__name__, "message": str(e)}
        code = 1
    except (InputError, KeyError) as e:
        name = type(e).__name__ if isinstance(e, InputError) else "MissingArgument"
        results = {"error": name, "message": str(e)}
        code = 2
    return Report(job.command, results, audit, code)


# -- golden corpus -----------------------------------------------------------

def corpus_dir():
    return Path(__file__).parent / "corpus"


def _job_files(root):
    jobs = root / "jobs"
    return sorted((jobs if jobs.is_dir() else root).glob("*.json"))


def job_from_json(d, base_dir):
    return JobSpec(d["command"], d.get("args", {}), int(d.get("W", 10)), d.get("bounds", {}),
                   d.get("format", "json"), str(base_dir))


def emit_golden(corpus=None, out=None):
    """Run every job of a corpus; returns name -> rendered report (and writes them when ``out`` is given)."""
    root = Path(corpus) if corpus else corpus_dir()
    files = _job_files(root) if root.is_dir() else []
    if not files:
        raise CorpusMissing(f"no corpus jobs under {root}")
    reports = {}
    for f in files:
        job = job_from_json(load(str(f)), root)
        reports[f.stem] = run(job).render(job.format)
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        for name, text in reports.items():
            (Path(out) / f"{name}.json").write_text(text)
    return reports


# -- argument parsing --------------------------------------------------------

def _bounds(text):
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        k, _, v = part.partition("=")
        k = k.strip()
        if k not in DEFAULT_BOUNDS:
            raise InputError(f"unknown bound {k!r}")
        out[k] = int(v)
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="gradedhom", description="Exact graded homological algebra.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--W", type=int, default=10, help="truncation weight")
    common.add_argument("--bounds", default="", help="e.g. max_length=9,max_objects=64")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command")

    r = sub.add_parser("ring", parents=[common])
    r.add_argument("--ring", required=True)
    r.add_argument("--localize", action="append", default=[])
    r.add_argument("--element")

    m = sub.add_parser("module", parents=[common])
    m.add_argument("--module", required=True)
    m.add_argument("--ops", default="nakayama,free")
    m.add_argument("--prime")
    m.add_argument("--weight", type=int)

    s = sub.add_parser("sym", parents=[common])
    s.add_argument("--type", required=True, help="comma separated degrees")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--coeff", default="Q")
    s.add_argument("--adams", type=int, help="degree i for the Adams stage types")
    s.add_argument("--J", type=int, default=2)

    y = sub.add_parser("young", parents=[common])
    y.add_argument("--space", required=True, help="p|q")
    y.add_argument("--shape", required=True, help="m x n (columns x rows)")
    y.add_argument("--extra", action="append", default=[], help="label:even or label:odd")
    y.add_argument("--word", help="comma separated basis labels")
    y.add_argument("--brute", action="store_true")

    h = sub.add_parser("homology", parents=[common])
    h.add_argument("--complex", required=True)
    h.add_argument("--n", type=int)

    t = sub.add_parser("tor", parents=[common])
    t.add_argument("--ring", required=True)
    t.add_argument("--module", required=True)
    t.add_argument("--module2", required=True)
    t.add_argument("--n", type=int, default=1)

    si = sub.add_parser("site", parents=[common])
    si.add_argument("op", choices=("classify", "compare", "cover"))
    si.add_argument("--job", required=True)
    si.add_argument("--depth", type=int)
    si.add_argument("--theories", help="comma separated theory names, in order")
    si.add_argument("--p")
    si.add_argument("--f")

    g = sub.add_parser("golden", parents=[common])
    g.add_argument("--corpus")
    return p


def job_from_args(ns):
    a = {k: v for k, v in vars(ns).items()
         if v is not None and k not in ("command", "W", "bounds", "format", "out")}
    if ns.command == "module":
        a["ops"] = [o.strip() for o in a["ops"].split(",") if o.strip()]
        if "prime" in a and "spread" not in a["ops"]:
            a["ops"].append("spread")
        if "weight" in a and "slice" not in a["ops"]:
            a["ops"].append("slice")
    if ns.command == "young":
        a["extra"] = [tuple(e.split(":")) for e in a.get("extra", [])]
        if "word" in a:
            a["word"] = [w.strip() for w in a["word"].split(",")]
    if ns.command == "site" and "theories" in a:
        a["theories"] = [t.strip() for t in a["theories"].split(",") if t.strip()]
    if ns.command == "golden" and ns.out:
        a["out"] = ns.out
    return JobSpec(ns.command, a, ns.W, _bounds(ns.bounds), ns.format, str(Path.cwd()))


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    if not ns.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        job = job_from_args(ns)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report = run(job)
    text = report.render(job.format)
    if ns.out and ns.command != "golden":
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
