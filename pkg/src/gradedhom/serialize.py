"""JSON formats for rings, modules, complexes, maps and site jobs.

Output is deterministic: keys sorted, rationals as "num/den" strings.
"""

import json
from fractions import Fraction
from pathlib import Path

from .coeff import CoefficientRing
from .complex import ChainComplex, ChainMap, cone
from .errors import InputError, ParseError
from .gmod import FreeGradedModule, GradedMatrix, PresentedModule
from .gring import AlgebraMap, Generator, GradedRing, GradingSpec, ProductRing, format_monomial
from .site import Catalog, HomologyTheory


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", e.lineno, e.colno) from None


def _resolve(path_or_obj, base_dir=None):
    """(JSON object, directory that relative references inside it are resolved against)."""
    if isinstance(path_or_obj, (dict, list)):
        return path_or_obj, base_dir
    p = Path(path_or_obj)
    if base_dir is not None and not p.is_absolute():
        p = Path(base_dir) / p
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(f"cannot read {p}: {e.strerror}") from None
    return loads(text, str(p)), str(p.parent)


def load(path_or_obj, base_dir=None):
    """A JSON object, or the content of a file when given a path string."""
    return _resolve(path_or_obj, base_dir)[0]


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def dumps(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


# -- rings -------------------------------------------------------------------

def ring_to_json(ring):
    if isinstance(ring, ProductRing):
        return {"product": [ring_to_json(f) for f in ring.factors]}
    return {
        "grading": {"group": ring.grading.group, "parity": ring.grading.parity},
        "coeff": str(ring.coeff),
        "generators": [{"name": g.name, "degree": g.degree, "weight": g.weight} for g in ring.generators],
        "relations": [format_monomial(r, ring.names) for r in ring.relations],
        "inverted": [ring.names[i] for i in sorted(ring.inverted)],
    }


def ring_from_json(d, base_dir=None):
    d, base_dir = _resolve(d, base_dir)
    if not isinstance(d, dict):
        raise InputError("a ring description is a JSON object")
    if "product" in d:
        return ProductRing(tuple(ring_from_json(f, base_dir) for f in d["product"]))
    g = d.get("grading", {})
    grading = GradingSpec(g.get("group", "Z"), g.get("parity", "koszul"))
    gens = []
    for item in d.get("generators", []):
        if isinstance(item, str):
            gens.append(Generator(item))
        else:
            gens.append(Generator(item["name"], int(item.get("degree", 0)), int(item.get("weight", 1))))
    if not gens:
        raise InputError("a ring needs at least one generator")
    return GradedRing.build(gens, d.get("relations", []), d.get("inverted", []),
                            CoefficientRing.parse(d.get("coeff", "Q")), grading)


# -- modules and matrices ----------------------------------------------------

def _shifts(items):
    return tuple((int(s[0]), int(s[1])) for s in items)


def matrix_to_json(m):
    return [[str(a) for a in row] for row in m.entries]


def module_to_json(M):
    P = M.presentation
    return {"over": ring_to_json(M.ring),
            "presentation": {"rows": [list(s) for s in P.target.shifts], "cols": [list(s) for s in P.source.shifts],
                             "entries": matrix_to_json(P)}}


def module_from_json(d, base_dir=None, ring=None):
    d, base_dir = _resolve(d, base_dir)
    ring = ring or ring_from_json(d["over"], base_dir)
    p = d.get("presentation", {})
    rows, cols = _shifts(p.get("rows", [])), _shifts(p.get("cols", []))
    entries = p.get("entries") if cols else [[] for _ in rows]
    if entries is None:
        raise InputError("presentation needs entries")
    return PresentedModule.from_strings(ring, rows, cols, entries)


# -- complexes and maps ------------------------------------------------------

def complex_to_json(X, with_ring=True):
    out = {"terms": {str(n): [list(s) for s in m.shifts] for n, m in sorted(X.terms.items())},
           "differentials": {str(n): matrix_to_json(d) for n, d in sorted(X.differentials.items())}}
    if with_ring:
        out["over"] = ring_to_json(X.ring)
    return out


def complex_from_json(d, base_dir=None, ring=None):
    d, base_dir = _resolve(d, base_dir)
    ring = ring or ring_from_json(d["over"], base_dir)
    terms = {int(n): FreeGradedModule(ring, _shifts(s)) for n, s in d.get("terms", {}).items()}
    maps = {int(n): e for n, e in d.get("differentials", {}).items()}
    return ChainComplex.from_maps(ring, terms, maps)


def map_to_json(f):
    return {"source": complex_to_json(f.source, False), "target": complex_to_json(f.target, False),
            "components": {str(n): matrix_to_json(c) for n, c in sorted(f.components.items())}}


def map_from_json(d, ring, objects=None, base_dir=None):
    d, base_dir = _resolve(d, base_dir)
    objects = objects or {}

    def resolve(x):
        if isinstance(x, str):
            if x not in objects:
                raise InputError(f"unknown catalog object {x!r}")
            return objects[x]
        return complex_from_json(x, base_dir, ring)

    X, Y = resolve(d["source"]), resolve(d["target"])
    comps = {}
    for n, e in d.get("components", {}).items():
        n = int(n)
        comps[n] = GradedMatrix.from_strings(X.term(n), Y.term(n), e)
    f = ChainMap(X, Y, comps)
    f.check()
    return f


# -- site jobs ---------------------------------------------------------------

def theory_from_json(d, base, W, base_dir=None):
    images = d.get("map")
    if images is None:
        raise InputError(f"theory {d.get('name')!r} needs a generator map")
    if "target" in d:
        target = ring_from_json(d["target"], base_dir)
    else:
        killed = []
        for name in base.names:
            img = images.get(name)
            if img is None:
                raise InputError(f"theory {d.get('name')!r} gives no image for {name}")
            if img.strip() == "0":
                killed.append(name)
            elif img.strip() != name:
                raise InputError("without a target ring, images must be the generator itself or 0")
        target = base.with_relations([tuple(1 if n == k else 0 for n in base.names) for k in killed])
    phi = AlgebraMap.from_strings(base, target, images)
    return HomologyTheory(d.get("name", "H"), phi, W, d.get("flat", "undeclared"))


def theory_to_json(H):
    return {"name": H.name, "flat": H.flat, "target": ring_to_json(H.algebra),
            "map": {n: str(img) for n, img in zip(H.base.names, H.phi.images)}}


def catalog_from_json(items, ring, base_dir=None):
    cat = Catalog()
    for item in items:
        name = item.get("name")
        if not name:
            raise InputError("catalog entries need a name")
        if "complex" in item:
            cat.add_object(name, complex_from_json(item["complex"], base_dir, ring))
        elif "cone" in item:
            src, tgt, f = cat.maps[item["cone"]]
            cat.add_object(name, cone(f))
        elif "map" in item:
            m = item["map"]
            f = map_from_json(m, ring, cat.objects, base_dir)
            cat.add_map(name, m["source"], m["target"], f)
        else:
            raise InputError(f"catalog entry {name!r} is neither a complex nor a map")
    return cat


def catalog_to_json(cat):
    items = []
    for name, X in cat.objects.items():
        items.append({"name": name, "complex": complex_to_json(X, False)})
    for name, (s, t, f) in cat.maps.items():
        items.append({"name": name, "map": {"source": s, "target": t,
                                            "components": {str(n): matrix_to_json(c) for n, c in sorted(f.components.items())}}})
    return items


def site_job_from_json(d, base_dir=None):
    d, base_dir = _resolve(d, base_dir)
    base = ring_from_json(d["base"], base_dir)
    W = int(d.get("W", 10))
    theories = [theory_from_json(t, base, W, base_dir) for t in d.get("theories", [])]
    cat = catalog_from_json(d.get("catalog", []), base, base_dir)
    return base, theories, cat, W, list(d.get("ops", ["classify"]))
