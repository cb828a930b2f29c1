"""Command-line front end.

Every subcommand reads an instance file (or a packaged fixture name) and
prints one canonical JSON document. Exit status: 0 success, 1 input error,
2 mathematical negative (not panachable, obstructed, check failed, ...).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from .autodual import (
    IncompatibleDatum,
    ObstructionNonzero,
    autodualize,
    datum_for,
    gamma_obstruction,
    isoaut_find,
)
from .blend import (
    BlendMismatch,
    RigidityError,
    is_isomorphic,
    rigidity_report,
    solve_blend,
    torsor_act,
    torsor_difference,
)
from .ext import class_of, ext_space
from .fixtures import BUILDERS, load_fixture
from .io import InstanceError, blend_to_json, blocks_to_json, dumps, load_instance, matrix_to_json
from .linalg import format_scalar
from .monodromy import FrameError, derived_and_eq4_check, standard_frame, theorem2_verify
from .reps import hom_space
from .verify import FAIL, run_checks

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class Negative(Exception):
    """A well-posed question whose answer is negative; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__(report.get("reason", "negative"))
        self.report = report


def _load(args):
    src = args.instance
    if src is None:
        raise InstanceError("--instance is required")
    if not Path(src).exists() and src in BUILDERS:
        return load_fixture(src)
    return load_instance(src, strict=(args.command != "validate"))


def _names(args, default: tuple) -> list:
    if args.name:
        return [n.strip() for n in args.name.split(",")]
    return list(default)


def _lookup(table: dict, name: str, kind: str):
    if name not in table:
        raise InstanceError(f"unresolved {kind} name {name!r}")
    return table[name]


def _default_blend(inst, args):
    if args.name:
        return _lookup(inst.blends, args.name.split(",")[0], "blend")
    if inst.blends:
        return inst.blends[sorted(inst.blends)[0]]
    if "M1" in inst.extensions and "M2" in inst.extensions:
        M = solve_blend(inst.extensions["M1"], inst.extensions["M2"])
        if M is None:
            raise Negative({"panachable": False, "reason": "M1 and M2 admit no blend"})
        return M
    raise InstanceError("the instance has no blends and no extensions named M1, M2")


def _coords(c) -> list:
    return [format_scalar(x) for x in c.coordinates]


def _datum(inst, M, args):
    if inst.duality is None:
        raise InstanceError("the instance has no duality datum")
    eps = args.epsilon if args.epsilon is not None else inst.duality["epsilon"]
    try:
        return datum_for(M, inst.duality["phi"], inst.duality["lambda"], eps)
    except IncompatibleDatum as exc:
        raise InstanceError(f"duality datum: {exc}") from None


def cmd_validate(inst, args) -> dict:
    out = {
        "objects": {n: {"dim": r.dim, "valid": True} for n, r in inst.objects.items()},
        "extensions": {n: {"valid": True} for n in inst.extensions},
        "blends": {n: {"valid": True, "rigidity": rigidity_report(*M.gradeds)} for n, M in inst.blends.items()},
        "problems": dict(inst.problems),
        "valid": not inst.problems,
    }
    if inst.problems:
        raise Negative(out)
    return out


def cmd_hom(inst, args) -> dict:
    names = _names(args, ())
    if len(names) != 2:
        raise InstanceError("hom needs --name X,Y")
    X, Y = (_lookup(inst.objects, n, "object") for n in names)
    basis = hom_space(X, Y)
    return {"source": names[0], "target": names[1], "dim": len(basis),
            "basis": [matrix_to_json(f.matrix) for f in basis]}


def _space_json(space, gens) -> dict:
    return {
        "dim": space.dim,
        "z1_dim": space.z1_dim,
        "b1_dim": space.b1_dim,
        "basis": [blocks_to_json(gens, c.blocks) for c in space.quotient_basis],
    }


def cmd_ext(inst, args) -> dict:
    gens = inst.group.generators
    names = _names(args, ())
    if len(names) == 1:
        c = _lookup(inst.extensions, names[0], "extension")
        cls = class_of(c)
        return {"extension": names[0], "class": _coords(cls), "split": cls.is_zero(),
                "space": _space_json(cls.space, gens)}
    if len(names) == 2:
        Q, P = (_lookup(inst.objects, n, "object") for n in names)
        return {"quot": names[0], "sub": names[1], "space": _space_json(ext_space(Q, P), gens)}
    raise InstanceError("ext needs --name E (an extension) or --name Q,P (objects)")


def cmd_blend(inst, args) -> dict:
    n1, n2 = _names(args, ("M1", "M2"))[:2]
    c1 = _lookup(inst.extensions, n1, "extension")
    c2 = _lookup(inst.extensions, n2, "extension")
    try:
        M = solve_blend(c1, c2)
    except BlendMismatch as exc:
        raise InstanceError(str(exc)) from None
    rig = rigidity_report(c1.sub, c1.quot, c2.quot)
    if M is None:
        raise Negative({"panachable": False, "rigidity": rig, "reason": "the corner system is inconsistent"})
    return {"panachable": True, "rigidity": rig, "blend": blend_to_json(M), "valid": bool(M.total().validate())}


def _class_arg(inst, args, M):
    if not args.by:
        raise InstanceError("--by <extension of B by A> is required")
    u = _lookup(inst.extensions, args.by, "extension")
    if u.sub != M.A or u.quot != M.B:
        raise InstanceError(f"extension {args.by!r} is not an extension of B by A")
    return u


def cmd_act(inst, args) -> dict:
    M = _default_blend(inst, args)
    u = _class_arg(inst, args, M)
    Mu = torsor_act(M, u)
    return {"blend": blend_to_json(Mu), "class": _coords(class_of(u))}


def cmd_diff(inst, args) -> dict:
    names = _names(args, ())
    if len(names) != 2:
        raise InstanceError("diff needs --name M,M'")
    M, Mp = (_lookup(inst.blends, n, "blend") for n in names)
    try:
        U = torsor_difference(M, Mp)
    except BlendMismatch as exc:
        raise InstanceError(str(exc)) from None
    except RigidityError as exc:
        raise Negative({"reason": str(exc), "rigidity": rigidity_report(*M.gradeds)})
    iso = is_isomorphic(torsor_act(M, U), Mp)
    return {"difference": _coords(U), "isomorphic_after_action": iso is not None}


def cmd_gamma(inst, args) -> dict:
    M = _default_blend(inst, args)
    d = _datum(inst, M, args)
    g = gamma_obstruction(M, d)
    return {
        "gamma": "0" if g.is_zero() else _coords(g),
        "coordinates": _coords(g),
        "epsilon": d.epsilon,
        "ext_dim": g.space.dim,
    }


def cmd_autodualize(inst, args) -> dict:
    M = _default_blend(inst, args)
    d = _datum(inst, M, args)
    res = autodualize(M, d)
    return {"blend": blend_to_json(res.blend), "delta": _coords(res.delta), "shift": _coords(res.shift),
            "already_autodual": res.delta.is_zero()}


def cmd_isoaut(inst, args) -> dict:
    M = _default_blend(inst, args)
    d = _datum(inst, M, args)
    try:
        p = isoaut_find(M, d)
    except ObstructionNonzero as exc:
        raise Negative({"reason": str(exc), "gamma": _coords(gamma_obstruction(M, d))})
    return {"pairing": matrix_to_json(p.matrix), "epsilon": p.epsilon, "checks": p.checks()}


def cmd_frame(inst, args) -> dict:
    M = _default_blend(inst, args)
    d = _datum(inst, M, args)
    try:
        p = isoaut_find(M, d)
    except ObstructionNonzero as exc:
        raise Negative({"reason": str(exc)})
    try:
        fr = standard_frame(p)
    except FrameError as exc:
        raise Negative({"reason": str(exc)})
    return {
        "a": fr.a,
        "h": fr.h,
        "epsilon": fr.epsilon,
        "change_of_basis": matrix_to_json(fr.change_of_basis),
        "j_h": matrix_to_json(fr.j_h),
        "eq4": derived_and_eq4_check(fr),
    }


def cmd_monodromy(inst, args) -> dict:
    M = _default_blend(inst, args)
    d = _datum(inst, M, args)
    rep = theorem2_verify(M, d, args.max_length)
    if rep["conclusion"] != "confirmed":
        raise Negative(rep)
    return rep


def _seed() -> int:
    raw = os.environ.get("PANACHE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InstanceError(f"PANACHE_SEED must be an integer, got {raw!r}") from None


def cmd_verify(inst, args) -> dict:
    only = set(args.checks.split(",")) if args.checks else None
    checks = run_checks(inst, _seed(), args.max_length, args.epsilon, only)
    out = {"seed": _seed(), "checks": checks,
           "passed": sum(c["status"] == "pass" for c in checks.values()),
           "failed": sum(c["status"] == FAIL for c in checks.values()),
           "skipped": sum(c["status"] == "skip" for c in checks.values())}
    if out["failed"]:
        raise Negative(out)
    return out


COMMANDS = {
    "validate": (cmd_validate, "check invertibility and relators of every entry"),
    "hom": (cmd_hom, "basis of Hom(X, Y) for --name X,Y"),
    "ext": (cmd_ext, "Ext^1(Q, P) for --name Q,P, or the class of --name E"),
    "blend": (cmd_blend, "solve for a blend of --name M1,M2"),
    "act": (cmd_act, "act on blend --name M by the class --by U"),
    "diff": (cmd_diff, "difference class of two blends --name M,M'"),
    "gamma": (cmd_gamma, "self-duality obstruction of a blend"),
    "autodualize": (cmd_autodualize, "correct a blend to an autodual one"),
    "isoaut": (cmd_isoaut, "eps-symmetric invariant pairing on an autodual blend"),
    "frame": (cmd_frame, "standard basis for the pairing and the flag"),
    "monodromy": (cmd_monodromy, "W-1 and W-2 of the monodromy from graded-trivial words"),
    "verify": (cmd_verify, "run the named invariant checks"),
}


def _epsilon(s: str) -> int:
    if s in ("+1", "1"):
        return 1
    if s == "-1":
        return -1
    raise argparse.ArgumentTypeError("epsilon must be +1 or -1")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file, or the name of a packaged fixture")
    common.add_argument("--name", help="object, extension or blend name(s), comma separated")
    common.add_argument("--epsilon", type=_epsilon, help="override the sign of the duality datum (+1 or -1)")
    common.add_argument("--max-length", type=int, default=8, help="word length bound for monodromy (default 8)")
    common.add_argument("--json-indent", type=int, default=None, help="pretty-print with this indent")
    parser = argparse.ArgumentParser(prog="panache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "act":
            p.add_argument("--by", help="extension of B by A to act by")
        if name == "verify":
            p.add_argument("--checks", help="comma-separated subset of checks")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    indent = args.json_indent
    if args.max_length < 1:
        print(dumps({"error": "--max-length must be at least 1"}, indent))
        return EXIT_INPUT
    try:
        inst = _load(args)
        out = COMMANDS[args.command][0](inst, args)
    except Negative as neg:
        print(dumps(neg.report, indent))
        return EXIT_NEGATIVE
    except (InstanceError, KeyError, BlendMismatch) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(dumps({"error": str(msg)}, indent))
        return EXIT_INPUT
    print(dumps(out, indent))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
