"""Command-line driver: ``finspan <area> <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 input error, 3 capacity.
Every option also reads a ``FINSPAN_<OPTION>`` environment variable (for
example ``FINSPAN_CAP_POINTS`` or ``FINSPAN_SEED``); flags win over the
environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from . import battery as bat
from . import bispan as bs
from . import caps as _caps
from . import docs
from . import freealg as fa
from . import groupoid as gpd
from . import gset as gs
from . import spancat as sc
from . import tambara as tb
from .errors import CapacityError, ClassViolation, InvalidStructure, NonIntegralError
from .group import FiniteGroup, by_name
from .groupoid import FiniteGroupoid, GroupoidMap
from .gset import GSet, GSetMap

ENV_PREFIX = "FINSPAN_"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input (exit status 2)."""


class VerificationFailure(Exception):
    """A mathematical check failed (exit status 1)."""


@dataclass
class CommandRequest:
    command: str
    inputs: list = field(default_factory=list)
    options: dict = field(default_factory=dict)

    def validate(self):
        o = self.options
        for name in ("cap_objects", "cap_points", "cap_sections", "max_degree", "cap"):
            v = o.get(name)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise InputError(f"--{name.replace('_', '-')} must be a non-negative integer")
        if o.get("format") not in ("table", "doc"):
            raise InputError("--format must be 'table' or 'doc'")
        for p in self.inputs:
            if not os.path.isfile(p):
                raise InputError(f"input document {p!r} not found")


# -- parsing helpers ---------------------------------------------------------


def _env(name, default=None, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise InputError(f"environment variable {ENV_PREFIX}{name.upper()} is malformed") from None


def parse_group(text: str) -> FiniteGroup:
    if os.path.isfile(text):
        G = docs.read(text)
        if not isinstance(G, FiniteGroup):
            raise InputError(f"{text} is not a group/1 document")
        return G
    try:
        return by_name(text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"unknown group {text!r}: {exc}") from None


def parse_subgroup(G: FiniteGroup, text: str) -> frozenset:
    """``H<i>`` (class representative), ``G``, ``e`` or a comma list of elements."""
    text = text.strip()
    if text == "G":
        return frozenset(G.elements)
    if text == "e":
        return frozenset([G.identity])
    if text[:1] == "H" and text[1:].isdigit():
        i = int(text[1:])
        if i >= len(G.subgroup_classes):
            raise InputError(f"no subgroup class {text}")
        return G.class_rep(i)
    try:
        H = frozenset(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse subgroup {text!r}") from None
    if not all(0 <= h < G.order for h in H) or not G.is_subgroup(H):
        raise InputError(f"{text!r} is not a subgroup")
    return H


def parse_gset(G: FiniteGroup | None, text: str) -> GSet:
    """A ``gset/1`` path, or a sum like ``2*pt + free + H1`` of orbit types."""
    if os.path.isfile(text):
        X = docs.read(text)
        if not isinstance(X, GSet):
            raise InputError(f"{text} is not a gset/1 document")
        return X
    if G is None:
        raise InputError("--group is required for a G-set expression")
    counts = [0] * len(G.subgroup_classes)
    for term in text.replace(" ", "").split("+"):
        if term in ("", "0", "empty"):
            continue
        k, _, name = term.rpartition("*")
        try:
            k = int(k) if k else 1
        except ValueError:
            raise InputError(f"bad multiplicity in {term!r}") from None
        if name == "pt":
            i = len(counts) - 1
        elif name == "free":
            i = 0
        elif name[:1] == "H" and name[1:].isdigit() and int(name[1:]) < len(counts):
            i = int(name[1:])
        else:
            raise InputError(f"unknown orbit type {name!r} (use pt, free or H<i>)")
        counts[i] += k
    return GSet.from_classes(G, counts)


def parse_coeffs(text: str) -> list:
    try:
        return [int(t) for t in text.split(",")] if text.strip() else []
    except ValueError:
        raise InputError(f"cannot parse integer list {text!r}") from None


def _read(path, cls, what):
    obj = docs.read(path)
    if not isinstance(obj, cls):
        raise InputError(f"{path} is not a {what} document")
    return obj


# -- output ------------------------------------------------------------------


class Output:
    def __init__(self, args, stream):
        self.args = args
        self.stream = stream
        self.fmt = args.format

    def header(self):
        if self.fmt == "table":
            cmd = f"{self.args.area} {self.args.command}"
            self.stream.write(f"# finspan {__version__} seed={self.args.seed} command={cmd}\n")

    def row(self, *cells, sep=","):
        if self.fmt == "table":
            self.stream.write(sep.join(str(c) for c in cells) + "\n")

    def line(self, text):
        if self.fmt == "table":
            self.stream.write(text + "\n")

    def doc(self, result: dict):
        if self.fmt == "doc":
            payload = {"schema": "report/1", "command": f"{self.args.area} {self.args.command}",
                       "seed": self.args.seed, "version": __version__, "result": result}
            self.stream.write(docs.dumps(payload))

    def object(self, obj):
        """Emit a finspan object as its own interchange document."""
        if self.fmt == "doc":
            self.stream.write(docs.dumps(docs.dump(obj)))


def _labels(G):
    return [G.class_label(i) for i in range(len(G.subgroup_classes))]


# -- groupoid ------------------------------------------------------------------


def cmd_groupoid_pullback(args, out):
    if args.bg:
        G = parse_group(args.bg)
        BG = FiniteGroupoid.from_group(G)
        f = g = GroupoidMap(FiniteGroupoid.point(), BG, [0], [G.identity])
    else:
        if len(args.maps) != 2:
            raise InputError("pullback needs two groupoidmap/1 documents (or --bg GROUP)")
        f = _read(args.maps[0], GroupoidMap, "groupoidmap/1")
        g = _read(args.maps[1], GroupoidMap, "groupoidmap/1")
    sq = gpd.iso_comma_pullback(f, g)
    P = sq.apex
    comps = gpd.components(P)
    cert = gpd.verify_pullback_up(sq)
    discrete = P.n_morphisms == P.n_objects
    out.header()
    out.row("objects", P.n_objects)
    out.row("morphisms", P.n_morphisms)
    out.row("components", len(comps))
    out.row("automorphism orders", " ".join(str(c.group.order) for c in comps))
    out.row("discrete", discrete)
    out.row("p faithful", gpd.is_faithful(sq.p))
    out.row("q faithful", gpd.is_faithful(sq.q))
    out.row("universal property", "pass" if cert else f"FAIL: {cert.reason}")
    out.doc({"objects": P.n_objects, "morphisms": P.n_morphisms, "discrete": discrete,
             "automorphism_orders": [c.group.order for c in comps],
             "universal_property": cert.passed, "cell": list(sq.cell),
             "p": docs.dump(sq.p), "q": docs.dump(sq.q)})
    if not cert:
        raise VerificationFailure(f"pullback square: {cert.reason}")


def cmd_groupoid_factor(args, out):
    f = _read(args.map, GroupoidMap, "groupoidmap/1")
    e, m = gpd.em_factorize(f)
    ok = gpd.is_em_factorization(f, e, m)
    out.header()
    out.row("middle objects", e.target.n_objects)
    out.row("middle morphisms", e.target.n_morphisms)
    out.row("e in E", gpd.in_left_class(e))
    out.row("m faithful", gpd.is_faithful(m))
    out.row("m∘e = f", e.then(m) == f)
    out.doc({"e": docs.dump(e), "m": docs.dump(m), "verified": ok})
    if not ok:
        raise VerificationFailure("E/O factorization failed its check")


# -- gset ----------------------------------------------------------------------


def cmd_gset_orbits(args, out):
    G = parse_group(args.group) if args.group else None
    X = parse_gset(G, args.gset)
    G = X.group
    out.header()
    out.row("orbit", "size", "stabilizer_class", "stabilizer_order")
    info = []
    for k, orb in enumerate(X.orbit_list):
        H = X.stabilizer(orb[0])
        lab = G.class_label(G.class_index(H))
        out.row(k, len(orb), lab, len(H))
        info.append({"points": list(orb), "stabilizer_class": lab})
    marks = tb.marks(tb.burnside_class(X))
    out.row("orbit_counts", " ".join(map(str, X.orbit_counts)))
    out.row("marks", " ".join(map(str, marks)))
    out.doc({"size": X.size, "orbits": info, "orbit_counts": list(X.orbit_counts),
             "marks": list(marks), "gset": docs.dump(X)})


def cmd_gset_depprod(args, out):
    m = _read(args.m, GSetMap, "gsetmap/1")
    n = _read(args.n, GSetMap, "gsetmap/1")
    d = gs.dependent_product(n, m)
    cert = gs.verify_distributivity_diagram(d, args.verify) if args.verify is not None else None
    out.header()
    out.row("Y points", d.Y.size)
    out.row("Y orbit_counts", " ".join(map(str, d.Y.orbit_counts)))
    out.row("X points", d.X.size)
    if cert is not None:
        out.row("universal property", f"pass ({cert.checked} test maps)" if cert
                else f"FAIL: {cert.reason}")
    out.doc({"m_prime": docs.dump(d.m_prime), "n_prime": docs.dump(d.n_prime),
             "m_dprime": docs.dump(d.m_dprime), "eps": docs.dump(d.eps),
             "verified": None if cert is None else cert.passed})
    if cert is not None and not cert:
        raise VerificationFailure(f"distributivity diagram: {cert.reason}")


def cmd_gset_sigma(args, out):
    G = parse_group(args.group)
    out.header()
    out.row("n", "gset_classes", "hom_classes", "agrees")
    rows = []
    for n in range(args.max_degree + 1):
        c = gs.sigma_classes(G, n)
        out.row(n, len(c.gset_classes), len(c.hom_classes), c.agrees)
        rows.append({"n": n, "gset_classes": len(c.gset_classes),
                     "hom_classes": len(c.hom_classes), "agrees": c.agrees})
    out.doc({"group": G.name, "rows": rows})
    if not all(r["agrees"] for r in rows):
        raise VerificationFailure("G-set census differs from Hom(G, S_n)/conj")


# -- span ----------------------------------------------------------------------


def _apex_size(s):
    return s.apex.size if s.spec.world == "gset" else s.apex.n_objects


def _span_rows(out, s):
    out.row("summand", "apex_size", "multiplicity", "automorphisms")
    for k, (h, mult) in enumerate(sc.summands(s)):
        out.row(k, _apex_size(h.representative), mult, h.automorphisms)


def cmd_span_compose(args, out):
    s = _read(args.first, sc.Span, "span/1")
    t = _read(args.second, sc.Span, "span/1")
    c = sc.canonical_span(sc.compose_spans(s, t))
    out.header()
    _span_rows(out, c)
    out.object(c)


def cmd_span_homs(args, out):
    G = parse_group(args.group)
    X, Y = parse_gset(G, args.source), parse_gset(G, args.target)
    spec = sc.gset_triple(G, args.backwards, args.forwards)
    homs = sc.hom_enumerate(X, Y, spec, args.cap)
    out.header()
    out.row("class", "apex_points", "apex_orbit_counts", "automorphisms")
    rows = []
    for k, h in enumerate(homs):
        A = h.representative.apex
        out.row(k, A.size, " ".join(map(str, A.orbit_counts)), h.automorphisms)
        rows.append({"apex_points": A.size, "automorphisms": h.automorphisms,
                     "span": docs.dump(h.representative)})
    out.line(f"total,{len(homs)}")
    out.doc({"classes": rows})


def cmd_span_factor(args, out):
    s = _read(args.span, sc.Span, "span/1")
    bw, fw = sc.factor_span(s)
    ok = sc.span_iso(sc.compose_spans(bw, fw), s)
    out.header()
    out.row("backwards apex", _apex_size(bw))
    out.row("forwards apex", _apex_size(fw))
    out.row("recomposes", ok)
    out.doc({"backwards": docs.dump(bw), "forwards": docs.dump(fw), "recomposes": ok})
    if not ok:
        raise VerificationFailure("span factorization does not recompose")


# -- bispan --------------------------------------------------------------------


def cmd_bispan_compose(args, out):
    u = _read(args.first, bs.Bispan, "bispan/1")
    v = _read(args.second, bs.Bispan, "bispan/1")
    w = bs.canonical_bispan(bs.compose_bispans(u, v, args.strategy, args.seed))
    out.header()
    out.row("X points", w.X.size)
    out.row("Y points", w.Y.size)
    out.row("X orbit_counts", " ".join(map(str, w.X.orbit_counts)))
    out.row("Y orbit_counts", " ".join(map(str, w.Y.orbit_counts)))
    out.object(w)


class _CorruptedNorm(tb.BurnsideTambara):
    """Burnside functor whose norm adds one extra point at every level."""

    def norm(self, n, value):
        return tuple(x + tb.BurnsideElement.one(x.group) for x in super().norm(n, value))


def cmd_bispan_check(args, out):
    G = parse_group(args.group)
    spec = bs.bispan_triple(G)
    oracles = {"burnside": tb.BurnsideTambara, "constant": lambda G: tb.ConstantOracle(),
               "corrupted": _CorruptedNorm}
    F = oracles[args.oracle](G)
    E = bs.orbit_endpoints(G)
    cert = bs.check_functoriality(F, spec, E, args.cap)
    out.header()
    out.row("oracle", args.oracle)
    out.row("functoriality", "pass" if cert else f"FAIL: {cert.reason}")
    out.row("checks", cert.checked)
    conf = None
    if args.confluence and cert:
        conf = _confluence(E, spec, args.cap, args.seed)
        out.row("confluence", "pass" if conf else f"FAIL: {conf.reason}")
        out.row("pairs", conf.checked)
    out.doc({"oracle": args.oracle, "functoriality": cert.passed, "checks": cert.checked,
             "reason": cert.reason,
             "confluence": None if conf is None else conf.passed})
    if not cert:
        raise VerificationFailure(f"Tambara functoriality: {cert.reason}")
    if conf is not None and not conf:
        raise VerificationFailure(f"rewrite confluence: {conf.reason}")


def _confluence(E, spec, cap, seed):
    homs = {(i, j): bs.bispan_enumerate(A, B, spec, cap)
            for i, A in enumerate(E) for j, B in enumerate(E)}
    pairs = 0
    for (i, j), us in homs.items():
        for k in range(len(E)):
            for u in us:
                for v in homs[(j, k)]:
                    pairs += 1
                    c = bs.check_confluence(u, v, seeds=(seed, seed + 1, seed + 2))
                    if not c:
                        return gs.Certificate(False, pairs, c.witness, c.reason)
    return gs.Certificate(True, pairs)


# -- tambara -------------------------------------------------------------------


def cmd_tambara_marks(args, out):
    G = parse_group(args.group)
    labels = _labels(G)
    out.header()
    if args.element is not None:
        x = tb.BurnsideElement(G, _coeffs_for(G, args.element))
        v = tb.marks(x)
        out.row("element", *labels)
        out.row("marks", *v)
        out.doc({"labels": labels, "coefficients": list(x.coeffs), "marks": list(v)})
        return
    M = tb.table_of_marks(G)
    out.row("subgroup", *labels)
    for lab, row in zip(labels, M):
        out.row(lab, *row)
    out.doc({"labels": labels, "table": [list(r) for r in M], "rank": len(labels)})


def _coeffs_for(G, text):
    c = parse_coeffs(text)
    if len(c) != len(G.subgroup_classes):
        raise InputError(f"expected {len(G.subgroup_classes)} coefficients, got {len(c)}")
    return c


def cmd_tambara_norm(args, out):
    G = parse_group(args.group)
    H = parse_subgroup(G, args.subgroup)
    Hg, inc = G.subgroup_group(H)
    x = tb.BurnsideElement(Hg, _coeffs_for(Hg, args.element))
    y = tb.norm_virtual(inc, x)
    out.header()
    out.row("result", *_labels(G))
    out.row("coefficients", *y.coeffs)
    out.row("marks", *tb.marks(y))
    effective = None
    if x.is_effective():
        effective = tb.burnside_class(tb.norm_effective(inc, tb.to_gset(x)))
        out.row("effective cross-check", "agrees" if effective == y else "DISAGREES")
    out.doc({"coefficients": list(y.coeffs), "marks": list(tb.marks(y)),
             "effective_agrees": None if effective is None else effective == y})
    if effective is not None and effective != y:
        raise VerificationFailure("virtual norm differs from the effective norm")


def parse_value(F: tb.BurnsideTambara, X: GSet, text: str):
    """One comma list of coefficients per orbit of ``X``, separated by ``;``."""
    parts = [p for p in text.split(";")] if text.strip() else []
    if len(parts) != len(X.orbit_list):
        raise InputError(f"expected {len(X.orbit_list)} orbit values, got {len(parts)}")
    out = []
    for orb, p in zip(X.orbit_list, parts):
        H = F.level(X, orb[0]).group
        out.append(tb.BurnsideElement(H, _coeffs_for(H, p)))
    return tuple(out)


def cmd_tambara_eval(args, out):
    b = _read(args.bispan, bs.Bispan, "bispan/1")
    F = tb.BurnsideTambara(b.source.group)
    value = parse_value(F, b.source, args.value)
    res = F.evaluate(b.left, b.norm, b.sum, value)
    out.header()
    out.row("orbit", "stabilizer_order", "coefficients")
    rows = []
    for k, r in enumerate(res):
        out.row(k, r.group.order, " ".join(map(str, r.coeffs)))
        rows.append(list(r.coeffs))
    out.doc({"value": rows})


# -- free ----------------------------------------------------------------------


def cmd_free_check(args, out):
    G = parse_group(args.group) if args.group else None
    X = parse_gset(G, args.gset)
    caps = _caps.current()
    for n in range(args.max_degree + 1):
        caps.check("sections", X.size ** n, f"degree {n} sections |X|^n")
    rep = fa.free_underlying(X, args.max_degree)
    out.header()
    out.row("degree", "sym_points", "pipeline_points", "orbit_counts", "isomorphic")
    rows = []
    for d in rep.degrees:
        oc = " ".join(map(str, d.orbit_counts))
        out.row(d.degree, d.symmetric_power.size, d.pipeline.size, oc, d.isomorphic)
        rows.append({"degree": d.degree, "sym_points": d.symmetric_power.size,
                     "pipeline_points": d.pipeline.size, "orbit_counts": list(d.orbit_counts),
                     "isomorphic": d.isomorphic})
    out.line(f"verdict,{'pass' if rep.passed else 'FAIL'}")
    out.doc({"degrees": rows, "passed": rep.passed})
    if not rep.passed:
        raise VerificationFailure(f"degree {rep.first_failure().degree}: pipelines differ")


def cmd_free_census(args, out):
    G = parse_group(args.group)
    H = parse_subgroup(G, args.generator)
    K = parse_subgroup(G, args.endpoint)
    t = fa.free_tambara_census(G, H, K, args.max_degree, args.cap)
    out.header()
    out.row("degree", "norms", "monomials")
    for r in t.rows:
        out.row(r.degree, r.norms, r.monomials)
    out.line(f"total,{t.total}")
    for c in t.checks:
        tag = "ok" if c.ok else ("MISMATCH" if c.required else "differs (informational)")
        out.line(f"check,{c.name},{c.expected},{c.got},{tag}")
    out.doc({"rows": [[r.degree, r.norms, r.monomials] for r in t.rows], "total": t.total,
             "checks": [{"name": c.name, "expected": c.expected, "got": c.got,
                         "required": c.required} for c in t.checks]})
    if not t.consistent:
        raise VerificationFailure("census consistency check failed")


# -- verify --------------------------------------------------------------------


def cmd_verify_all(args, out):
    only = None
    if args.only:
        only = set(parse_coeffs(args.only))
    out.header()
    results = []
    for n, _ in bat.CRITERIA:
        if only is not None and n not in only:
            continue
        r = bat.run(n, args.battery)
        out.line(r.line())
        out.stream.flush()
        results.append(r)
    out.doc({"battery": args.battery,
             "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                           "checks": r.checked, "detail": r.detail} for r in results]})
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise VerificationFailure(f"criteria failed: {failed}")


# -- parser --------------------------------------------------------------------


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies must not overwrite values given before the subcommand
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("common options")
    g.add_argument("--cap-objects", type=int, default=d(_env("cap_objects", None, int)))
    g.add_argument("--cap-points", type=int, default=d(_env("cap_points", None, int)))
    g.add_argument("--cap-sections", type=int, default=d(_env("cap_sections", None, int)))
    g.add_argument("--seed", type=int, default=d(_env("seed", 0, int)))
    g.add_argument("--format", choices=["table", "doc"], default=d(_env("format", "table")))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    parser = argparse.ArgumentParser(prog="finspan", parents=[_common(False)], allow_abbrev=False,
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"finspan {__version__}")
    areas = parser.add_subparsers(dest="area", required=True)

    def cmd(area, name, fn, help_):
        p = area.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        p.set_defaults(fn=fn)
        return p

    a = areas.add_parser("groupoid", help="finite groupoids").add_subparsers(dest="command", required=True)
    p = cmd(a, "pullback", cmd_groupoid_pullback, "iso-comma pullback of two functors")
    p.add_argument("maps", nargs="*")
    p.add_argument("--bg", help="pull the basepoint of BG back along itself")
    p = cmd(a, "factor", cmd_groupoid_factor, "factor a functor as E then faithful")
    p.add_argument("map")

    a = areas.add_parser("gset", help="finite G-sets").add_subparsers(dest="command", required=True)
    p = cmd(a, "orbits", cmd_gset_orbits, "orbit decomposition and marks")
    p.add_argument("--group")
    p.add_argument("--gset", required=True)
    p = cmd(a, "depprod", cmd_gset_depprod, "distributivity diagram of m: A->B, n: B->C")
    p.add_argument("m")
    p.add_argument("n")
    p.add_argument("--verify", type=int, metavar="CAP")
    p = cmd(a, "sigma", cmd_gset_sigma, "n-element G-sets vs Hom(G, S_n)/conj")
    p.add_argument("--group", required=True)
    p.add_argument("--max-degree", type=int, default=_env("max_degree", 4, int))

    a = areas.add_parser("span", help="spans").add_subparsers(dest="command", required=True)
    p = cmd(a, "compose", cmd_span_compose, "compose two spans (first applied first)")
    p.add_argument("first")
    p.add_argument("second")
    p = cmd(a, "homs", cmd_span_homs, "iso classes of spans between two G-sets")
    p.add_argument("--group", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--cap", type=int, default=_env("cap", 3, int))
    p.add_argument("--backwards", default="all", choices=list(sc.MAP_CLASSES))
    p.add_argument("--forwards", default="all", choices=list(sc.MAP_CLASSES))
    p = cmd(a, "factor", cmd_span_factor, "backwards then forwards factorization")
    p.add_argument("span")

    a = areas.add_parser("bispan", help="bispans").add_subparsers(dest="command", required=True)
    p = cmd(a, "compose", cmd_bispan_compose, "compose two bispans (first applied first)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--strategy", default="leftmost", choices=["leftmost", "rightmost", "random"])
    p = cmd(a, "check-tambara", cmd_bispan_check, "functoriality of a Tambara oracle")
    p.add_argument("--group", required=True)
    p.add_argument("--cap", type=int, default=_env("cap", 2, int))
    p.add_argument("--oracle", default="burnside", choices=["burnside", "constant", "corrupted"])
    p.add_argument("--confluence", action="store_true")

    a = areas.add_parser("tambara", help="Burnside rings").add_subparsers(dest="command", required=True)
    p = cmd(a, "marks", cmd_tambara_marks, "table of marks, or marks of one element")
    p.add_argument("--group", required=True)
    p.add_argument("--element", help="comma list of coefficients")
    p = cmd(a, "norm", cmd_tambara_norm, "norm of a virtual element from a subgroup")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--element", required=True)
    p = cmd(a, "eval", cmd_tambara_eval, "evaluate the Burnside functor on a bispan")
    p.add_argument("bispan")
    p.add_argument("--value", required=True, help="per-orbit coefficient lists separated by ';'")

    a = areas.add_parser("free", help="free algebras").add_subparsers(dest="command", required=True)
    p = cmd(a, "check", cmd_free_check, "pipeline vs symmetric powers per degree")
    p.add_argument("--group")
    p.add_argument("--gset", required=True)
    p.add_argument("--max-degree", type=int, default=_env("max_degree", 3, int))
    p = cmd(a, "census", cmd_free_census, "bispan census of the free Tambara functor")
    p.add_argument("--group", required=True)
    p.add_argument("--generator", default="G")
    p.add_argument("--endpoint", default="G")
    p.add_argument("--max-degree", type=int, default=_env("max_degree", 3, int))
    p.add_argument("--cap", type=int, default=None, help="apex cap for the total count")

    a = areas.add_parser("verify", help="acceptance battery").add_subparsers(dest="command", required=True)
    p = cmd(a, "all", cmd_verify_all, "run the acceptance battery")
    p.add_argument("--battery", choices=["small", "full"], default=_env("battery", "small"))
    p.add_argument("--only", help="comma list of criterion numbers")
    return parser


def _request(args) -> CommandRequest:
    inputs = []
    for name in ("maps", "map", "m", "n", "first", "second", "span", "bispan"):
        v = getattr(args, name, None)
        if isinstance(v, list):
            inputs += v
        elif v:
            inputs.append(v)
    opts = {k: v for k, v in vars(args).items() if k not in ("fn",)}
    return CommandRequest(f"{args.area} {args.command}", inputs, opts)


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return int(exc.code or 0)
    caps = _caps.Caps.from_env()
    overrides = {k: getattr(args, f"cap_{k}") for k in ("objects", "points", "sections")
                 if getattr(args, f"cap_{k}") is not None}
    old = _caps.set_current(caps.but(**overrides))
    try:
        _request(args).validate()
        args.fn(args, Output(args, stream))
        return EXIT_OK
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NonIntegralError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, InvalidStructure, ClassViolation, json.JSONDecodeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        _caps.set_current(old)


def main_exit():
    sys.exit(main())
