"""Versioned JSON interchange documents.

Every document is a JSON object with a ``schema`` field such as
``"gset/1"``. Documents that mention other objects refer to them by content
hash (``sha256:`` of the canonical encoding) and carry the referenced
documents in a ``bundle`` mapping, so each file is self-contained.

Emission is canonical: keys sorted, two-space indentation, trailing newline.
Loading and re-emitting a document reproduces it byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import re

import jsonschema

from .bispan import Bispan, BispanTripleSpec
from .errors import InvalidStructure
from .group import FiniteGroup, by_name, from_permutations
from .groupoid import FiniteGroupoid, GroupoidMap
from .gset import GSet, GSetMap
from .spancat import Span, TripleSpec

_INTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_TABLE = {"type": "array", "items": _INTS}
_REF = {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"}
_BUNDLE = {"type": "object", "additionalProperties": {"type": "object"}}
_CLASS = {"enum": ["all", "iso", "injective", "surjective", "faithful"]}


def _schema(name, props, required):
    return {
        "type": "object",
        "properties": {"schema": {"const": name}, **props},
        "required": ["schema", *required],
        "additionalProperties": False,
    }


SCHEMAS = {
    "group/1": _schema("group/1", {
        "name": {"type": "string"},
        "table": _TABLE,
        "identity": {"type": "integer", "minimum": 0},
        "permutations": _TABLE,
        "generators": _TABLE,
    }, []),
    "gset/1": _schema("gset/1", {"group": _REF, "action": _TABLE, "bundle": _BUNDLE},
                      ["group", "action"]),
    "gsetmap/1": _schema("gsetmap/1", {
        "source": _REF, "target": _REF, "images": _INTS, "bundle": _BUNDLE,
    }, ["source", "target", "images"]),
    "groupoid/1": _schema("groupoid/1", {
        "objects": {"type": "integer", "minimum": 0},
        "arrows": {"type": "array", "items": {
            "type": "array", "items": {"type": "integer", "minimum": 0},
            "minItems": 2, "maxItems": 2}},
        "identities": _INTS,
        "composition": {"type": "array", "items": {
            "type": "array", "items": {"type": "integer", "minimum": 0},
            "minItems": 3, "maxItems": 3}},
    }, ["objects", "arrows", "identities", "composition"]),
    "groupoidmap/1": _schema("groupoidmap/1", {
        "source": _REF, "target": _REF, "on_objects": _INTS, "on_arrows": _INTS,
        "bundle": _BUNDLE,
    }, ["source", "target", "on_objects", "on_arrows"]),
    "span/1": _schema("span/1", {
        "world": {"enum": ["gset", "groupoid"]},
        "backwards": _CLASS, "forwards": _CLASS,
        "left": _REF, "right": _REF, "bundle": _BUNDLE,
    }, ["world", "backwards", "forwards", "left", "right"]),
    "bispan/1": _schema("bispan/1", {
        "norm_class": _CLASS, "sum_class": _CLASS,
        "left": _REF, "norm": _REF, "sum": _REF, "bundle": _BUNDLE,
    }, ["norm_class", "sum_class", "left", "norm", "sum"]),
}


def canonical_bytes(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def content_hash(doc: dict) -> str:
    return "sha256:" + hashlib.sha256(canonical_bytes(doc)).hexdigest()


_INT_ARRAY = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, indented objects, integer arrays on one line."""
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    return _INT_ARRAY.sub(lambda m: "[" + ", ".join(m.group(1).replace(",", " ").split()) + "]",
                          text) + "\n"


def validate(doc) -> str:
    """Check ``doc`` against its published schema; returns the schema name."""
    if not isinstance(doc, dict) or doc.get("schema") not in SCHEMAS:
        raise InvalidStructure(f"unknown or missing schema: {doc.get('schema') if isinstance(doc, dict) else doc!r}")
    try:
        jsonschema.validate(doc, SCHEMAS[doc["schema"]])
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidStructure(f"{doc['schema']} document invalid at {path}: {exc.message}") from None
    return doc["schema"]


# -- encoding ------------------------------------------------------------------


class _Encoder:
    def __init__(self):
        self.bundle = {}

    def ref(self, doc: dict) -> str:
        inner = doc.pop("bundle", {})
        self.bundle.update(inner)
        h = content_hash(doc)
        self.bundle[h] = doc
        return h

    def finish(self, doc: dict) -> dict:
        doc["bundle"] = dict(sorted(self.bundle.items()))
        return doc


def dump(obj) -> dict:
    """The document describing ``obj``."""
    if isinstance(obj, FiniteGroup):
        doc = {"schema": "group/1", "table": [list(r) for r in obj.table],
               "identity": obj.identity}
        if obj.name:
            doc["name"] = obj.name
        if obj.perms is not None:
            doc["permutations"] = [list(p) for p in obj.perms]
        return doc
    if isinstance(obj, GSet):
        enc = _Encoder()
        return enc.finish({"schema": "gset/1", "group": enc.ref(dump(obj.group)),
                           "action": [list(r) for r in obj.act]})
    if isinstance(obj, GSetMap):
        enc = _Encoder()
        return enc.finish({"schema": "gsetmap/1", "source": enc.ref(dump(obj.source)),
                           "target": enc.ref(dump(obj.target)), "images": list(obj.images)})
    if isinstance(obj, FiniteGroupoid):
        comp = sorted([g, f, h] for (g, f), h in obj.comp.items())
        return {"schema": "groupoid/1", "objects": obj.n_objects,
                "arrows": [[a, b] for a, b in zip(obj.src, obj.tgt)],
                "identities": list(obj.identities), "composition": comp}
    if isinstance(obj, GroupoidMap):
        enc = _Encoder()
        return enc.finish({"schema": "groupoidmap/1", "source": enc.ref(dump(obj.source)),
                           "target": enc.ref(dump(obj.target)),
                           "on_objects": list(obj.obj), "on_arrows": list(obj.mor)})
    if isinstance(obj, Span):
        enc = _Encoder()
        return enc.finish({"schema": "span/1", "world": obj.spec.world,
                           "backwards": obj.spec.backwards, "forwards": obj.spec.forwards,
                           "left": enc.ref(dump(obj.left)), "right": enc.ref(dump(obj.right))})
    if isinstance(obj, Bispan):
        enc = _Encoder()
        return enc.finish({"schema": "bispan/1", "norm_class": obj.spec.norm,
                           "sum_class": obj.spec.sum, "left": enc.ref(dump(obj.left)),
                           "norm": enc.ref(dump(obj.norm)), "sum": enc.ref(dump(obj.sum))})
    raise TypeError(f"no document type for {type(obj).__name__}")


# -- decoding ------------------------------------------------------------------


class _Decoder:
    def __init__(self, bundle):
        self.bundle = bundle
        self.cache = {}

    def get(self, ref: str):
        if ref in self.cache:
            return self.cache[ref]
        doc = self.bundle.get(ref)
        if doc is None:
            raise InvalidStructure(f"reference {ref} missing from bundle")
        if content_hash(doc) != ref:
            raise InvalidStructure(f"bundle entry {ref} does not match its content hash")
        obj = _decode(doc, self)
        self.cache[ref] = obj
        return obj


def _decode(doc, dec: _Decoder):
    kind = validate(doc)
    if kind == "group/1":
        if "table" in doc:
            return FiniteGroup(doc["table"], doc.get("identity", 0), perms=doc.get("permutations"),
                               name=doc.get("name"))
        if "generators" in doc:
            return from_permutations(doc["generators"], name=doc.get("name"))
        if "name" in doc:
            return by_name(doc["name"])
        raise InvalidStructure("group/1 needs a table, generators or a name")
    if kind == "gset/1":
        G = dec.get(doc["group"])
        _expect(G, FiniteGroup, "group")
        return GSet(G, doc["action"])
    if kind == "gsetmap/1":
        S, T = dec.get(doc["source"]), dec.get(doc["target"])
        _expect(S, GSet, "source")
        _expect(T, GSet, "target")
        return GSetMap(S, T, doc["images"])
    if kind == "groupoid/1":
        comp = {}
        for g, f, h in doc["composition"]:
            comp[(g, f)] = h
        arrows = doc["arrows"]
        n = doc["objects"]
        for a, b in arrows:
            if a >= n or b >= n:
                raise InvalidStructure("arrow endpoint outside the object range")
        return FiniteGroupoid(n, [a for a, _ in arrows], [b for _, b in arrows], comp,
                              doc["identities"])
    if kind == "groupoidmap/1":
        S, T = dec.get(doc["source"]), dec.get(doc["target"])
        _expect(S, FiniteGroupoid, "source")
        _expect(T, FiniteGroupoid, "target")
        return GroupoidMap(S, T, doc["on_objects"], doc["on_arrows"])
    if kind == "span/1":
        L, R = dec.get(doc["left"]), dec.get(doc["right"])
        want = GSetMap if doc["world"] == "gset" else GroupoidMap
        _expect(L, want, "left")
        _expect(R, want, "right")
        G = L.source.group if doc["world"] == "gset" else None
        return Span(L, R, TripleSpec(doc["world"], doc["backwards"], doc["forwards"], G))
    if kind == "bispan/1":
        f, n, t = dec.get(doc["left"]), dec.get(doc["norm"]), dec.get(doc["sum"])
        for m, name in ((f, "left"), (n, "norm"), (t, "sum")):
            _expect(m, GSetMap, name)
        spec = BispanTripleSpec("gset", doc["norm_class"], doc["sum_class"], f.source.group)
        return Bispan(f, n, t, spec)
    raise InvalidStructure(f"cannot decode {kind}")


def _expect(obj, cls, what):
    if not isinstance(obj, cls):
        raise InvalidStructure(f"{what} reference is not a {cls.__name__}")


def load(doc: dict):
    """Decode a document (already parsed from JSON) into a finspan object."""
    validate(doc)
    return _decode(doc, _Decoder(doc.get("bundle", {})))


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidStructure(f"not a JSON document: {exc}") from None
    return load(doc)


def read(path: str):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(dump(obj)))
