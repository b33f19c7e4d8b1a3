"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import SMALL_GROUPS, random_instances  # noqa: E402
from oracles import brute_force_xind  # noqa: E402

from gposet import serialize as ser  # noqa: E402
from gposet.certificates import check_report  # noqa: E402
from gposet.cli import main as cli_main  # noqa: E402
from gposet.complexes import e_space, face_poset, ind_upper, ind_zero, order_complex  # noqa: E402
from gposet.crossindex import lift_witness, xind, xind_zero  # noqa: E402
from gposet.errors import ResourceGuardError  # noqa: E402
from gposet.groups import group_from_name  # noqa: E402
from gposet.harness import RandomPosetSpec, random_free_gposet, verify_hcx1, verify_theorem_main  # noqa: E402
from gposet.posets import (  # noqa: E402
    GPoset,
    orbit_digraph,
    product,
    projection_maps,
    q_poset,
    validate_gmap,
    validate_gposet,
)

_INSTANCES = None


def instances():
    global _INSTANCES
    if _INSTANCES is None:
        _INSTANCES = random_instances()
    return _INSTANCES


# --- criteria ---------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    bad = []
    for name in ["Z2x2", "Z6", "S3", "D8"]:
        rep = verify_theorem_main(group_from_name(name))
        q = rep["quantities"]
        ok = (q["xind_P1"] == q["xind_P2"] == 1 and q["xind_P1xP2"] == 0
              and q["ind_zero_K1"] is False and q["ind_zero_K2"] is False
              and min(q["ind_upper_K1"]) == 1 and min(q["ind_upper_K2"]) == 1
              and q["ind_zero_K12"] is True
              and rep["verdict"] == "pass" and check_report(rep).ok)
        if not ok:
            bad.append(name)
    dt = time.perf_counter() - t0
    return not bad and dt < 30, f"groups Z2x2 Z6 S3 D8, failures {bad}, {dt:.1f} s (< 30 s)"


def criterion_2():
    import tempfile
    G = group_from_name("Z2x2")
    with tempfile.TemporaryDirectory() as d:
        d = Path(d)
        code = cli_main(["counterexample", "Z2xZ2", "--out-dir", str(d), "-o", str(d / "r.json")])
        rep = ser.read_json(d / "r.json")
        posets = [ser.load_poset(d / f"P{i}.json") for i in (1, 2)]
    problems = [] if code == 0 else [f"exit {code}"]
    for i, P in enumerate(posets, start=1):
        h = rep["quantities"][f"h{i}"]
        # g(1) is element g, g(2) is element 4 + g
        want = {(g, 4 + g) for g in range(4)} | {(g, 4 + G.mul(g, h)) for g in range(4)}
        if P.size != 8 or set(P.relations()) != want:
            problems.append(f"P{i} relations")
        paths = [c["certificate"] for c in rep["certificates"]
                 if c["kind"] == "orbit-path" and c["object"] == f"P{i}"]
        if {"path": [0, 4 + h, h], "group_element": h} not in paths:
            problems.append(f"P{i} path")
        if xind(P).value != 1:
            problems.append(f"xind P{i}")
    if not check_report(rep).ok:
        problems.append("check")
    return not problems, f"8 elements each, relation sets and path e(1) h(2) h(1); problems {problems}"


def criterion_3():
    t0 = time.perf_counter()
    mism = [i for i, P in enumerate(instances()) if xind(P).value != brute_force_xind(P)]
    dt = time.perf_counter() - t0
    return not mism and dt < 60, f"200 instances, mismatches {mism}, {dt:.1f} s (< 60 s)"


def criterion_4():
    mism = []
    for i, P in enumerate(instances()):
        a = xind_zero(P)[0]
        b = xind(P).value == 0
        c = ind_zero(order_complex(P))[0]
        if not a == b == c:
            mism.append(i)
    return not mism, f"xind_zero = (xind = 0) = ind_zero(order complex) on 200, mismatches {mism}"


def criterion_5():
    t0 = time.perf_counter()
    problems = []
    for name in ["Z2", "Z3", "Z4", "Z9", "Q8"]:
        rep = verify_hcx1(group_from_name(name), trials=20, seed=0)
        q = rep["quantities"]
        product_paths = [c for c in rep["certificates"] if c["kind"] == "orbit-path"
                         and rep["objects"][c["object"]]["kind"] == "product"]
        res = check_report(rep)
        if (q["pairs"] < 20 or q["product_xind"] != [1] * q["pairs"]
                or len(product_paths) != q["pairs"] or not res.ok
                or not all(r.ok for r in res.certificates)):
            problems.append(name)
    dt = time.perf_counter() - t0
    return not problems and dt < 120, f"Z2 Z3 Z4 Z9 Q8 x 20 pairs, failures {problems}, {dt:.1f} s (< 120 s)"


def criterion_6():
    bad = []
    for name in ["Z2", "Z3", "Z4", "Z2x2"]:
        G = group_from_name(name)
        for n in range(3):
            Q = q_poset(G, n)
            if xind(Q).value != n or e_space(G, n) != order_complex(Q):
                bad.append((name, n))
    return not bad, f"xind Q_n G = n and E_n G = order complex, failures {bad}"


def _small_random_posets(count, seed):
    """Random posets whose order complex has a face poset the solver will take at r = 0."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        G = group_from_name(rng.choice(["Z2", "Z3", "Z4", "Z2x2"]))
        P = random_free_gposet(RandomPosetSpec(G, rng.randint(1, 3), rng.choice([0.2, 0.4, 0.7]),
                                               rng.randrange(10**9)))
        if len(face_poset(order_complex(P)).orbit_data) <= 12:
            out.append(P)
    return out


def criterion_7():
    bad, depth2, seen = [], 0, set()
    for P in _small_random_posets(20, seed=7):
        K = order_complex(P)
        up = ind_upper(K, 1)
        if len(up.values) != 2 or not up.values[0] >= up.values[1]:
            bad.append(up.values)
            continue
        try:
            up2 = ind_upper(K, 2)
        except ResourceGuardError:
            continue
        if len(up2.values) == 3:
            depth2 += 1
            if not up2.values[0] >= up2.values[1] >= up2.values[2]:
                bad.append(up2.values)
        seen.add(tuple(up.values))
    return not bad, f"20 posets u_0 >= u_1 ({depth2} also to r = 2), sequences {sorted(seen)}, failures {bad}"


def criterion_8():
    rng = random.Random(8)
    bad, strict = [], 0
    for _ in range(100):
        G = group_from_name(rng.choice(SMALL_GROUPS))
        P, Q = (random_free_gposet(RandomPosetSpec(G, rng.randint(1, 3), rng.choice([0.2, 0.5, 0.8]),
                                                   rng.randrange(10**9))) for _ in range(2))
        rp, rq = xind(P), xind(Q)
        PQ = product(P, Q)
        pi_p, pi_q = projection_maps(P, Q, PQ)
        hint = lift_witness(pi_p, rp.witness) if rp.value <= rq.value else lift_witness(pi_q, rq.witness)
        # the hint caps the search, so the guard is not needed; every n below is still refuted
        r = xind(PQ, max_orbits=None, hint=hint)
        if not (r.value <= min(rp.value, rq.value) and validate_gmap(r.witness).ok):
            bad.append((G.name, rp.value, rq.value, r.value))
        strict += r.value < min(rp.value, rq.value)
    return not bad, f"100 pairs xind(P x Q) <= min ({strict} strict), failures {bad}"


def _independent_invariants(P: GPoset) -> bool:
    # checked directly, not through the validator
    for g in range(1, P.group.order):
        for p in range(P.size):
            q = P.act(g, p)
            if P.less[p, q] or P.less[q, p]:
                return False
    return nx.is_directed_acyclic_graph(orbit_digraph(P))


def criterion_9():
    problems = []
    G = group_from_name("Z2")
    valid = list(instances()) + [q_poset(group_from_name(n), 2) for n in ["Z2", "Z3", "S3"]]
    inst = instances()
    valid += [product(a, b) for a, b in zip(inst[:40], inst[1:41])
              if a.group == b.group and len(a.orbit_data) * len(b.orbit_data) <= 6]
    for P in valid:
        if not validate_gposet(P).ok or not _independent_invariants(P):
            problems.append("valid instance")
    fixed = GPoset(G, np.zeros((2, 2), bool), [[0, 1], [0, 1]])
    if validate_gposet(fixed).code != "not-free":
        problems.append("fixed point")
    less = np.zeros((4, 4), bool)
    less[0, 2] = less[3, 1] = True  # orbit {0,1} below {2,3} below {0,1}
    cycle = GPoset(G, less, [[0, 1, 2, 3], [1, 0, 3, 2]])
    if validate_gposet(cycle).code != "orbit-cycle":
        problems.append("orbit cycle")
    return not problems, f"{len(valid)} valid instances, fixed point and orbit cycle diagnostics, problems {problems}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(i, ok, detail):
    return f"criterion {i}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("i", range(1, 10))
def test_acceptance_criterion(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
