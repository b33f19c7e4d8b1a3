"""JSON file formats for groups, posets, complexes, witnesses and paths.

A ``"group"`` field may hold an inline group object, a catalog name such as
``"Z2x2"``, or a path to a group file (relative to the referring file).
Writers always inline the group so every file is self-contained.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .complexes import GSimplicialComplex, SimplicialGMap, VertexPath, validate_complex
from .errors import InvalidInputError
from .groups import FiniteGroup, group_from_name
from .posets import GPoset, OrbitPath, PosetGMap, q_poset, transitive_closure, validate_gposet


def dumps(obj) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InvalidInputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from None


# --- groups -----------------------------------------------------------------

def group_to_json(G: FiniteGroup) -> dict:
    return G.to_json()


def resolve_group(ref, base_dir=None) -> FiniteGroup:
    if isinstance(ref, FiniteGroup):
        return ref
    if isinstance(ref, dict):
        return FiniteGroup.from_json(ref)
    if isinstance(ref, str):
        path = Path(base_dir or ".") / ref
        if ref.endswith(".json") or path.is_file():
            return FiniteGroup.from_json(read_json(path))
        return group_from_name(ref)
    raise InvalidInputError(f"cannot interpret group reference {ref!r}")


def load_group(path_or_name) -> FiniteGroup:
    """Catalog name or group file."""
    text = str(path_or_name)
    if Path(text).is_file():
        return FiniteGroup.from_json(read_json(text))
    return group_from_name(text)


# --- posets -----------------------------------------------------------------

def poset_to_json(P: GPoset) -> dict:
    return {
        "group": group_to_json(P.group),
        "elements": list(P.labels),
        "relations": [list(r) for r in P.covers()],
        "action": P.action.tolist(),
    }


def poset_from_json(data: dict, base_dir=None, group: FiniteGroup | None = None,
                    validate: bool = True) -> GPoset:
    """Build, close and (by default) validate a poset; raise InvalidInputError naming the defect."""
    try:
        G = group if group is not None else resolve_group(data["group"], base_dir)
        labels = [str(x) for x in data["elements"]]
        rels = data.get("relations", [])
        action = data["action"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"poset file: missing or malformed field ({exc})") from None
    m = len(labels)
    less = np.zeros((m, m), dtype=bool)
    for pair in rels:
        if len(pair) != 2 or not all(isinstance(x, int) and 0 <= x < m for x in pair):
            raise InvalidInputError(f"poset file: bad relation {pair!r}")
        less[pair[0], pair[1]] = True
    if np.shape(action) != (G.order, m):
        raise InvalidInputError(
            f"poset file: action must list {G.order} permutations of length {m}")
    P = GPoset(G, transitive_closure(less), action, labels)
    if validate:
        validate_gposet(P).raise_if_failed("poset")
    return P


def load_poset(path) -> GPoset:
    return poset_from_json(read_json(path), base_dir=Path(path).parent)


# --- complexes --------------------------------------------------------------

def complex_to_json(K: GSimplicialComplex) -> dict:
    return {
        "group": group_to_json(K.group),
        "vertices": list(K.labels),
        "facets": [list(f) for f in K.facets],
        "action": K.action.tolist(),
    }


def complex_from_json(data: dict, base_dir=None, group: FiniteGroup | None = None) -> GSimplicialComplex:
    try:
        G = group if group is not None else resolve_group(data["group"], base_dir)
        labels = [str(x) for x in data["vertices"]]
        facets = [list(f) for f in data["facets"]]
        action = data["action"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"complex file: missing or malformed field ({exc})") from None
    v = len(labels)
    if np.shape(action) != (G.order, v):
        raise InvalidInputError(
            f"complex file: action must list {G.order} permutations of length {v}")
    for f in facets:
        if not all(isinstance(x, int) and 0 <= x < v for x in f):
            raise InvalidInputError(f"complex file: bad facet {f!r}")
    K = GSimplicialComplex(G, v, facets, action, labels)
    validate_complex(K).raise_if_failed("complex")
    return K


def load_complex(path) -> GSimplicialComplex:
    return complex_from_json(read_json(path), base_dir=Path(path).parent)


def load_poset_or_complex(path):
    """Dispatch on the presence of a ``facets`` field."""
    data = read_json(path)
    base = Path(path).parent
    if isinstance(data, dict) and "facets" in data:
        return complex_from_json(data, base)
    return poset_from_json(data, base)


# --- witnesses and certificates ---------------------------------------------

def witness_to_json(f: PosetGMap) -> dict:
    """Map into Q_n G as ``{"value": n, "map": [[group element, level], ...]}``."""
    s = f.target.group.order
    return {"value": f.target.size // s - 1, "map": [[t % s, t // s] for t in f.map]}


def witness_from_json(data: dict, P: GPoset) -> PosetGMap:
    try:
        n = int(data["value"])
        pairs = data["map"]
        s = P.group.order
        flat = [int(lvl) * s + int(g) for g, lvl in pairs]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"witness: malformed ({exc})") from None
    if n < 0:
        raise InvalidInputError("witness: negative value")
    return PosetGMap(P, q_poset(P.group, n), tuple(flat))


def path_to_json(path: OrbitPath | VertexPath) -> dict:
    return {"path": list(path.vertices), "group_element": int(path.group_element)}


def orbit_path_from_json(data: dict, P: GPoset) -> OrbitPath:
    try:
        return OrbitPath(P, tuple(data["path"]), int(data["group_element"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"orbit path: malformed ({exc})") from None


def vertex_path_from_json(data: dict, K: GSimplicialComplex) -> VertexPath:
    try:
        return VertexPath(K, tuple(int(v) for v in data["path"]), int(data["group_element"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"vertex path: malformed ({exc})") from None


def simplicial_map_to_json(f: SimplicialGMap) -> dict:
    return {"map": list(f.map)}
