"""Report assembly and offline re-validation of embedded certificates.

A report carries an ``objects`` table (posets and complexes, possibly given
as products, order complexes, face posets or subdivisions of other objects)
and a list of certificates that point into it.  ``check_report`` rebuilds
the objects from JSON alone and re-runs the validators; it never calls the
solver.

Certificate kinds:

* ``gmap-q``: a G-map from a poset into Q_n G, proving xind <= n.
* ``orbit-path``: a comparability path from p to g.p, proving xind >= 1.
* ``vertex-path``: an edge path from v to g.v, proving ind >= 1.
* ``complex-map-e0``: a simplicial G-map into E_0 G, proving ind = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import serialize as ser
from .complexes import (
    GSimplicialComplex,
    SimplicialGMap,
    e_space,
    face_poset,
    order_complex,
    subdivide,
    validate_simplicial_map,
    validate_vertex_path,
)
from .errors import GPosetError, InvalidInputError
from .groups import FiniteGroup
from .posets import GPoset, OrbitPath, PosetGMap, product, validate_gmap, validate_orbit_path

SCHEMA = "gposet-report/1"


class ReportBuilder:
    def __init__(self, scenario: str, group: FiniteGroup, parameters: dict | None = None):
        self.scenario = scenario
        self.group = group
        self.parameters = dict(parameters or {})
        self.objects: dict[str, dict] = {}
        self.certificates: list[dict] = []
        self.checks: list[dict] = []
        self.quantities: dict = {}
        self.notes: list[str] = []

    # objects
    def add_poset(self, name: str, P: GPoset) -> str:
        self.objects[name] = {"kind": "poset", "data": _strip_group(ser.poset_to_json(P))}
        return name

    def add_complex(self, name: str, K: GSimplicialComplex) -> str:
        self.objects[name] = {"kind": "complex", "data": _strip_group(ser.complex_to_json(K))}
        return name

    def add_product(self, name: str, first: str, second: str) -> str:
        self.objects[name] = {"kind": "product", "of": [first, second]}
        return name

    def add_order_complex(self, name: str, poset: str) -> str:
        self.objects[name] = {"kind": "order-complex", "of": poset}
        return name

    def add_face_poset(self, name: str, complex_name: str) -> str:
        self.objects[name] = {"kind": "face-poset", "of": complex_name}
        return name

    def add_subdivision(self, name: str, complex_name: str, r: int) -> str:
        self.objects[name] = {"kind": "subdivision", "of": complex_name, "r": int(r)}
        return name

    # certificates
    def witness(self, obj: str, f: PosetGMap, claim: str = "") -> None:
        self.certificates.append({"kind": "gmap-q", "object": obj, "claim": claim,
                                  "witness": ser.witness_to_json(f)})

    def orbit_path(self, obj: str, path: OrbitPath, claim: str = "") -> None:
        self.certificates.append({"kind": "orbit-path", "object": obj, "claim": claim,
                                  "certificate": ser.path_to_json(path)})

    def vertex_path(self, obj: str, path, claim: str = "") -> None:
        self.certificates.append({"kind": "vertex-path", "object": obj, "claim": claim,
                                  "certificate": ser.path_to_json(path)})

    def e0_map(self, obj: str, f: SimplicialGMap, claim: str = "") -> None:
        self.certificates.append({"kind": "complex-map-e0", "object": obj, "claim": claim,
                                  "map": list(f.map)})

    def check(self, name: str, expected, actual) -> bool:
        ok = expected == actual
        self.checks.append({"name": name, "expected": expected, "actual": actual, "ok": ok})
        return ok

    def build(self) -> dict:
        # certificates are validated once here, so the verdict is honest even if
        # nobody runs `check` afterwards
        valid = [r.ok for r in _validate_all(self.group, self.objects, self.certificates)]
        verdict = all(c["ok"] for c in self.checks) and all(valid)
        return {
            "schema": SCHEMA,
            "scenario": self.scenario,
            "group": ser.group_to_json(self.group),
            "parameters": self.parameters,
            "quantities": self.quantities,
            "checks": self.checks,
            "objects": self.objects,
            "certificates": self.certificates,
            "notes": self.notes,
            "verdict": "pass" if verdict else "fail",
        }


def _strip_group(data: dict) -> dict:
    # objects share the report's group
    out = dict(data)
    out.pop("group", None)
    return out


# --- re-validation ----------------------------------------------------------

@dataclass
class CertificateResult:
    index: int
    kind: str
    ok: bool
    message: str = ""


@dataclass
class CheckResult:
    ok: bool
    verdict: str
    certificates: list[CertificateResult] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "verdict": self.verdict,
            "certificates_checked": len(self.certificates),
            "certificates_valid": sum(c.ok for c in self.certificates),
            "problems": self.problems,
        }


class _Objects:
    def __init__(self, group: FiniteGroup, table: dict):
        self.group = group
        self.table = table
        self.cache: dict[str, GPoset | GSimplicialComplex] = {}

    def get(self, name: str, stack=()):
        if name in self.cache:
            return self.cache[name]
        if name not in self.table or name in stack:
            raise InvalidInputError(f"unknown or cyclic object reference {name!r}")
        spec = self.table[name]
        kind = spec.get("kind")
        stack = stack + (name,)
        if kind == "poset":
            obj = ser.poset_from_json(spec["data"], group=self.group)
        elif kind == "complex":
            obj = ser.complex_from_json(spec["data"], group=self.group)
        elif kind == "product":
            a, b = (self.get(x, stack) for x in spec["of"])
            obj = product(a, b)
        elif kind == "order-complex":
            obj = order_complex(self.get(spec["of"], stack))
        elif kind == "face-poset":
            obj = face_poset(self.get(spec["of"], stack))
        elif kind == "subdivision":
            obj = subdivide(self.get(spec["of"], stack), int(spec["r"]))
        else:
            raise InvalidInputError(f"object {name!r}: unknown kind {kind!r}")
        self.cache[name] = obj
        return obj


def _validate_one(objs: _Objects, cert: dict):
    kind = cert.get("kind")
    obj = objs.get(cert["object"])
    if kind == "gmap-q":
        if not isinstance(obj, GPoset):
            return False, "gmap-q certificate must refer to a poset"
        rep = validate_gmap(ser.witness_from_json(cert["witness"], obj))
    elif kind == "orbit-path":
        if not isinstance(obj, GPoset):
            return False, "orbit-path certificate must refer to a poset"
        rep = validate_orbit_path(ser.orbit_path_from_json(cert["certificate"], obj))
    elif kind == "vertex-path":
        if not isinstance(obj, GSimplicialComplex):
            return False, "vertex-path certificate must refer to a complex"
        rep = validate_vertex_path(ser.vertex_path_from_json(cert["certificate"], obj))
    elif kind == "complex-map-e0":
        if not isinstance(obj, GSimplicialComplex):
            return False, "complex-map-e0 certificate must refer to a complex"
        rep = validate_simplicial_map(SimplicialGMap(obj, e_space(obj.group, 0), tuple(cert["map"])))
    else:
        return False, f"unknown certificate kind {kind!r}"
    return rep.ok, "" if rep.ok else f"[{rep.code}] {rep.message}"


def _validate_all(group: FiniteGroup, objects: dict, certificates: list) -> list[CertificateResult]:
    objs = _Objects(group, objects)
    out = []
    for i, cert in enumerate(certificates):
        try:
            ok, msg = _validate_one(objs, cert)
        except (GPosetError, KeyError, TypeError, ValueError) as exc:
            ok, msg = False, f"malformed: {exc}"
        out.append(CertificateResult(i, str(cert.get("kind")), ok, msg))
    return out


def check_report(report: dict) -> CheckResult:
    """Re-validate every certificate and the verdict's consistency.

    ``ok`` is true iff the report claims ``pass``, every check it lists holds
    and every certificate re-validates.
    """
    problems = []
    if not isinstance(report, dict) or report.get("schema") != SCHEMA:
        return CheckResult(False, "unknown", problems=[f"schema is not {SCHEMA}"])
    verdict = report.get("verdict", "missing")
    try:
        G = FiniteGroup.from_json(report["group"])
    except (KeyError, InvalidInputError) as exc:
        return CheckResult(False, verdict, problems=[f"bad group: {exc}"])
    results = _validate_all(G, report.get("objects", {}), report.get("certificates", []))
    for r in results:
        if not r.ok:
            problems.append(f"certificate {r.index} ({r.kind}) invalid: {r.message}")
    for c in report.get("checks", []):
        if (c.get("expected") == c.get("actual")) != c.get("ok"):
            problems.append(f"check {c.get('name')!r}: recorded ok flag is inconsistent")
        elif not c.get("ok"):
            problems.append(f"check {c.get('name')!r} failed")
    if verdict != "pass":
        problems.append(f"verdict is {verdict!r}")
    return CheckResult(not problems, verdict, results, problems)
