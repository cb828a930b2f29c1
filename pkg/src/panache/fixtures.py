"""Named example instances, shipped as JSON under ``panache/fixtures``.

The builders here are the source of truth; the JSON files are regenerated
from them with ``write_all`` and compared in the test suite.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .blend import solve_blend
from .ext import Cocycle
from .io import Instance, blocks_to_json, dumps, load_instance_text, matrix_to_json
from .linalg import Matrix
from .autodual import autodualize, datum_for
from .generators import F2, Z2, rotation_rep
from .reps import trivial

ROT4_NAMES = ("rot4-antisym", "rot4-sym-autodual", "rot4-sym-nonautodual")
NAMES = ROT4_NAMES + ("free-blend", "autodual", "not-panachable")


def _rep_json(rep) -> dict:
    return rep.to_json()


def _doc(pres, objects: dict, extensions: dict, blends: dict, duality=None) -> dict:
    gens = pres.generators
    doc = {
        "group": pres.to_json(),
        "objects": {n: _rep_json(r) for n, r in objects.items()},
        "extensions": {
            n: {"sub": s, "quot": q, "blocks": blocks_to_json(gens, c.blocks)}
            for n, (s, q, c) in extensions.items()
        },
    }
    for n, (gr, M) in blends.items():
        doc.setdefault("blends", {})[n] = {
            "gradeds": {"A": gr[0], "N": gr[1], "B": gr[2]},
            "x": blocks_to_json(gens, M.x),
            "y": blocks_to_json(gens, M.y),
            "z": blocks_to_json(gens, M.z),
        }
    if duality is not None:
        phi, lam, eps = duality
        doc["duality"] = {"phi": matrix_to_json(phi), "lambda": matrix_to_json(lam), "epsilon": eps}
    return doc


def rot4_parts(epsilon: int):
    """A = B = 1, N the order-4 rotation; y_b = (1, 0) and x chosen compatible with phi."""
    T = trivial(F2)
    N = rotation_rep(F2)
    phi = Matrix([[0, 1], [-1, 0]]) if epsilon == -1 else Matrix.identity(2)
    y = Cocycle(N, T, (Matrix([[0], [0]]), Matrix([[1], [0]])))
    x = Cocycle(T, N, (Matrix([[0, 0]]), Matrix([[-1, 0]]) @ phi))
    return T, N, x, y, phi, Matrix([[1]])


def rot4(name: str) -> dict:
    if name == "rot4-antisym":
        eps = -1
    elif name in ("rot4-sym-autodual", "rot4-sym-nonautodual"):
        eps = 1
    else:
        raise KeyError(name)
    T, N, x, y, phi, lam = rot4_parts(eps)
    M = solve_blend(x, y)
    if name == "rot4-sym-autodual":
        M = autodualize(M, datum_for(M, phi, lam, eps)).blend
    return _doc(
        F2,
        {"A": T, "N": N, "B": T},
        {"M1": ("A", "N", x), "M2": ("N", "B", y)},
        {"M": (("A", "N", "B"), M)},
        (phi, lam, eps),
    )


def free_blend() -> dict:
    """A rigid blend over the free group with nonsplit M1 and M2."""
    A = trivial(F2)
    N = rotation_rep(F2)
    B = trivial(F2)
    x = Cocycle(A, N, (Matrix([[1, 0]]), Matrix([[0, 1]])))
    y = Cocycle(N, B, (Matrix([[0], [1]]), Matrix([[1], [1]])))
    return _doc(F2, {"A": A, "N": N, "B": B}, {"M1": ("A", "N", x), "M2": ("N", "B", y)}, {})


def autodual() -> dict:
    """rot4 with eps = -1: the split corner already gives an autodual blend."""
    return rot4("rot4-antisym")


def not_panachable() -> dict:
    """Over Z^2 = <a, b | abAB> with trivial gradeds, x = (1, 0) and y = (0, 1) admit no corner."""
    T = trivial(Z2)
    x = Cocycle(T, T, (Matrix([[1]]), Matrix([[0]])))
    y = Cocycle(T, T, (Matrix([[0]]), Matrix([[1]])))
    return _doc(Z2, {"A": T, "N": T, "B": T}, {"M1": ("A", "N", x), "M2": ("N", "B", y)}, {})


BUILDERS = {
    "rot4-antisym": lambda: rot4("rot4-antisym"),
    "rot4-sym-autodual": lambda: rot4("rot4-sym-autodual"),
    "rot4-sym-nonautodual": lambda: rot4("rot4-sym-nonautodual"),
    "free-blend": free_blend,
    "autodual": autodual,
    "not-panachable": not_panachable,
}


def fixture_text(name: str) -> str:
    return dumps(BUILDERS[name](), indent=2) + "\n"


def fixture_dir() -> Path:
    return Path(__file__).resolve().parent / "fixtures"


def load_fixture(name: str) -> Instance:
    if name not in BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    text = resources.files("panache").joinpath("fixtures", f"{name}.json").read_text()
    return load_instance_text(text, f"fixture:{name}")


def write_all(directory: Path = None) -> None:
    d = directory or fixture_dir()
    d.mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        (d / f"{name}.json").write_text(fixture_text(name))
