"""JSON encoding of rationals, matrices, representations and instance files.

Rationals are written as strings ``"p/q"`` or ``"p"``; floats are refused.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .linalg import Matrix, format_scalar, parse_scalar
from .reps import GroupPresentation, Representation


class InstanceError(ValueError):
    """Malformed or inconsistent instance data."""


def matrix_to_json(m: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in m.tolist()]


def matrix_from_json(data, where: str = "matrix") -> Matrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InstanceError(f"{where}: expected a list of rows")
    rows = []
    for i, row in enumerate(data):
        out = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise InstanceError(f"{where}[{i}][{j}]: entries must be rational strings like '1/2', got {x!r}")
            try:
                out.append(parse_scalar(x) if isinstance(x, str) else x)
            except (ValueError, ZeroDivisionError) as exc:
                raise InstanceError(f"{where}[{i}][{j}]: {exc}") from None
        rows.append(out)
    try:
        return Matrix(rows)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def blocks_from_json(data, gens, shape, where: str) -> tuple:
    if not isinstance(data, dict):
        raise InstanceError(f"{where}: expected an object keyed by generator")
    out = []
    for g in gens:
        if g not in data:
            raise InstanceError(f"{where}: missing block for generator {g!r}")
        m = matrix_from_json(data[g], f"{where}.{g}")
        if m.shape != shape and not (m.rows == 0 and shape[0] * shape[1] == 0):
            raise InstanceError(f"{where}.{g}: expected shape {shape}, got {m.shape}")
        if m.shape != shape:
            m = Matrix.zeros(*shape)
        out.append(m)
    extra = set(data) - set(gens)
    if extra:
        raise InstanceError(f"{where}: unknown generators {sorted(extra)}")
    return tuple(out)


def blocks_to_json(gens, blocks) -> dict:
    return {g: matrix_to_json(b) for g, b in zip(gens, blocks)}


def presentation_from_json(data) -> GroupPresentation:
    if not isinstance(data, dict) or "generators" not in data:
        raise InstanceError("group: expected {'generators': [...], 'relators': [...]}")
    try:
        return GroupPresentation(tuple(data["generators"]), tuple(data.get("relators", [])))
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"group: {exc}") from None


def representation_from_json(data, pres: GroupPresentation, where: str = "representation") -> Representation:
    if not isinstance(data, dict) or "images" not in data:
        raise InstanceError(f"{where}: expected {{'dim': n, 'images': {{...}}}}")
    dim = data.get("dim")
    images = data["images"]
    if not isinstance(images, dict):
        raise InstanceError(f"{where}.images: expected an object keyed by generator")
    if dim is None:
        first = next(iter(images.values()), [])
        dim = len(first)
    mats = blocks_from_json(images, pres.generators, (dim, dim), f"{where}.images")
    return Representation(pres, dim, mats)


def representation_document(rep: Representation) -> dict:
    """The standalone representation schema: group, dim and images together."""
    doc = rep.to_json()
    doc["group"] = rep.presentation.to_json()
    return doc


def dumps(obj, indent: Optional[int] = None) -> str:
    """Canonical JSON: sorted keys, fixed separators."""
    if indent is None:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return json.dumps(obj, sort_keys=True, indent=indent, ensure_ascii=True)


@dataclass
class Instance:
    group: GroupPresentation
    objects: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)
    blends: dict = field(default_factory=dict)
    duality: Optional[dict] = None
    source: str = ""
    problems: dict = field(default_factory=dict)
    refs: dict = field(default_factory=dict)   # entry name -> object names it was declared with


def load_instance_text(text: str, source: str = "<string>", strict: bool = True) -> Instance:
    """Parse an instance file.

    Shape and syntax errors always raise InstanceError.  Violated relators
    raise too when ``strict``; otherwise they are collected in ``problems``
    and the offending entry is left out.
    """
    from .ext import Cocycle
    from .blend import BlendedExtension, NotABlend

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "group" not in data:
        raise InstanceError(f"{source}: top level must be an object with a 'group' entry")
    pres = presentation_from_json(data["group"])
    inst = Instance(pres, source=source)

    if "images" in data and "objects" not in data:
        # a bare representation document
        data = dict(data, objects={"X": {"dim": data.get("dim"), "images": data["images"]}})

    def invalid(where, reason):
        if strict:
            raise InstanceError(f"{where}: {reason}")
        inst.problems[where] = reason

    for name, rd in (data.get("objects") or {}).items():
        rep = representation_from_json(rd, pres, f"objects.{name}")
        report = rep.validate()
        if report:
            inst.objects[name] = rep
        else:
            invalid(f"objects.{name}", report.reason)

    def obj(name, where):
        if name not in inst.objects:
            raise InstanceError(f"{where}: unresolved object name {name!r}")
        return inst.objects[name]

    for name, ed in (data.get("extensions") or {}).items():
        where = f"extensions.{name}"
        if not isinstance(ed, dict):
            raise InstanceError(f"{where}: expected an object")
        sub = obj(ed.get("sub"), where)
        quot = obj(ed.get("quot"), where)
        blocks = blocks_from_json(ed.get("blocks", {}), pres.generators, (sub.dim, quot.dim), f"{where}.blocks")
        coc = Cocycle(sub, quot, blocks)
        report = coc.total().validate()
        if report:
            inst.extensions[name] = coc
            inst.refs[where] = (ed.get("sub"), ed.get("quot"))
        else:
            invalid(where, f"blocks do not satisfy the relators ({report.reason})")

    for name, bd in (data.get("blends") or {}).items():
        where = f"blends.{name}"
        gr = bd.get("gradeds", {})
        A = obj(gr.get("A"), f"{where}.gradeds.A")
        N = obj(gr.get("N"), f"{where}.gradeds.N")
        B = obj(gr.get("B"), f"{where}.gradeds.B")
        x = blocks_from_json(bd.get("x", {}), pres.generators, (A.dim, N.dim), f"{where}.x")
        y = blocks_from_json(bd.get("y", {}), pres.generators, (N.dim, B.dim), f"{where}.y")
        z = blocks_from_json(bd.get("z", {}), pres.generators, (A.dim, B.dim), f"{where}.z")
        try:
            inst.blends[name] = BlendedExtension(A, N, B, x, y, z)
            inst.refs[where] = (gr.get("A"), gr.get("N"), gr.get("B"))
        except NotABlend as exc:
            invalid(where, str(exc))

    if data.get("duality") is not None:
        dd = data["duality"]
        where = "duality"
        eps = dd.get("epsilon")
        if eps not in (1, -1, "+1", "-1"):
            raise InstanceError(f"{where}.epsilon: must be +1 or -1")
        inst.duality = {
            "phi": matrix_from_json(dd.get("phi"), f"{where}.phi"),
            "lambda": matrix_from_json(dd.get("lambda"), f"{where}.lambda"),
            "epsilon": int(eps),
        }
    return inst


def load_instance(path, strict: bool = True) -> Instance:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InstanceError(f"{path}: {exc.strerror}") from None
    return load_instance_text(text, str(path), strict)


def instance_to_json(inst: Instance) -> dict:
    gens = inst.group.generators
    names = {}
    doc = {"group": inst.group.to_json(), "objects": {}}
    for name, rep in inst.objects.items():
        doc["objects"][name] = rep.to_json()
        names.setdefault(rep, name)

    def name_of(rep):
        if rep not in names:
            raise InstanceError("object not registered in the instance")
        return names[rep]

    if inst.extensions:
        doc["extensions"] = {}
        for n, c in inst.extensions.items():
            sub, quot = inst.refs.get(f"extensions.{n}") or (name_of(c.sub), name_of(c.quot))
            doc["extensions"][n] = {"sub": sub, "quot": quot, "blocks": blocks_to_json(gens, c.blocks)}
    if inst.blends:
        doc["blends"] = {}
        for n, b in inst.blends.items():
            out = blend_to_json(b, name_of)
            ref = inst.refs.get(f"blends.{n}")
            if ref:
                out["gradeds"] = dict(zip("ANB", ref))
            doc["blends"][n] = out
    if inst.duality is not None:
        doc["duality"] = {
            "phi": matrix_to_json(inst.duality["phi"]),
            "lambda": matrix_to_json(inst.duality["lambda"]),
            "epsilon": inst.duality["epsilon"],
        }
    return doc


def blend_to_json(M, name_of=None) -> dict:
    gens = M.A.presentation.generators
    out = {
        "x": blocks_to_json(gens, M.x),
        "y": blocks_to_json(gens, M.y),
        "z": blocks_to_json(gens, M.z),
    }
    if name_of is not None:
        out["gradeds"] = {"A": name_of(M.A), "N": name_of(M.N), "B": name_of(M.B)}
    return out
