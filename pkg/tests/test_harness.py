import copy

import pytest

from gposet import serialize as ser
from gposet.certificates import SCHEMA, check_report
from gposet.complexes import e_space
from gposet.crossindex import build_counterexample, xind
from gposet.errors import PreconditionError
from gposet.groups import group_from_name
from gposet.harness import (
    RandomPosetSpec,
    counterexample_report,
    experiment_gap_search,
    experiment_subdivision,
    random_free_gposet,
    verify_hcx1,
    verify_theorem_main,
)
from gposet.posets import q_poset


def test_random_poset_examples():
    G = group_from_name("Z3")
    P = random_free_gposet(RandomPosetSpec(G, 4, 0.0, 3))
    assert xind(P).value == 0
    for seed in range(10):
        full = random_free_gposet(RandomPosetSpec(G, 2, 1.0, seed))
        assert xind(full).value == 1
    spec = RandomPosetSpec(G, 3, 0.5, 7)
    assert random_free_gposet(spec) == random_free_gposet(spec)


@pytest.mark.parametrize("name", ["Z2x2", "Z6", "S3"])
def test_theorem_main_passes(name):
    rep = verify_theorem_main(group_from_name(name))
    assert rep["verdict"] == "pass" and rep["schema"] == SCHEMA
    q = rep["quantities"]
    assert (q["xind_P1"], q["xind_P2"], q["xind_P1xP2"]) == (1, 1, 0)
    assert q["ind_zero_K1"] is False and q["ind_zero_K2"] is False and q["ind_zero_K12"] is True
    assert q["ind_upper_K1"] == [1] and q["ind_K1"] == 1
    assert check_report(rep).ok


def test_theorem_main_rejects_nice():
    with pytest.raises(PreconditionError):
        verify_theorem_main(group_from_name("Q8"))


def test_hcx1_small():
    rep = verify_hcx1(group_from_name("Z2"), trials=5, seed=3)
    assert rep["verdict"] == "pass"
    assert rep["quantities"]["product_xind"] == [1] * 5
    kinds = {c["kind"] for c in rep["certificates"]}
    assert kinds == {"gmap-q", "orbit-path"}
    assert check_report(rep).ok
    with pytest.raises(PreconditionError):
        verify_hcx1(group_from_name("Z6"), trials=1)


def test_reports_are_byte_identical():
    G = group_from_name("Z3")
    a = ser.dumps(verify_hcx1(G, trials=3, seed=5))
    b = ser.dumps(verify_hcx1(G, trials=3, seed=5))
    assert a == b
    c = ser.dumps(experiment_gap_search(G, 2, 4, 1, seed=2))
    assert c == ser.dumps(experiment_gap_search(G, 2, 4, 1, seed=2))


def test_check_detects_tampering():
    rep = verify_theorem_main(group_from_name("Z2x2"))
    bad = copy.deepcopy(rep)
    w = next(c for c in bad["certificates"] if c["kind"] == "gmap-q" and c["object"] == "P1")
    w["witness"]["map"][0] = [1, 0]
    res = check_report(bad)
    assert not res.ok and any("not-equivariant" in p or "not-order" in p for p in res.problems)
    bad = copy.deepcopy(rep)
    bad["checks"][0]["actual"] = 2
    assert not check_report(bad).ok
    bad = copy.deepcopy(rep)
    bad["verdict"] = "fail"
    assert not check_report(bad).ok
    assert not check_report({"schema": "other"}).ok
    bad = copy.deepcopy(rep)
    bad["certificates"][0]["object"] = "missing"
    assert not check_report(bad).ok


def test_counterexample_report_fig1():
    rep = counterexample_report(group_from_name("Z2x2"))
    assert rep["verdict"] == "pass"
    paths = [c["certificate"] for c in rep["certificates"] if c["kind"] == "orbit-path"]
    h1, h2 = rep["quantities"]["h1"], rep["quantities"]["h2"]
    assert paths == [{"path": [0, 4 + h1, h1], "group_element": h1},
                     {"path": [0, 4 + h2, h2], "group_element": h2}]
    P1 = ser.poset_from_json(rep["objects"]["P1"]["data"], group=group_from_name("Z2x2"))
    assert P1 == build_counterexample(group_from_name("Z2x2")).P1


def test_gap_search_examples():
    G = group_from_name("Z2")
    rep = experiment_gap_search(G, 3, 5, 1, seed=0, density=0.0)
    assert rep["verdict"] == "pass" and rep["quantities"]["gaps"] == []
    assert all(i["n"] == 0 and i["u"] == [0, 0] for i in rep["quantities"]["instances"])
    rep = experiment_gap_search(G, 2, 6, 1, seed=4)
    for inst in rep["quantities"]["instances"]:
        assert set(inst) >= {"poset", "n", "u"}
        assert inst["u"][0] <= inst["n"]
    assert check_report(rep).ok


def test_gap_search_on_q_posets_has_no_gap():
    # u_0 for Delta(Q_1 G) equals 1 = xind Q_1 G
    for name in ["Z2", "Z3"]:
        G = group_from_name(name)
        rep = experiment_subdivision(q_poset(G, 1), 1)
        assert rep["quantities"]["u"] == [1, 1]


def test_subdivision_examples(Z2, V4):
    rep = experiment_subdivision(e_space(Z2, 0), 2)
    assert rep["quantities"]["u"] == [0, 0, 0] and rep["quantities"]["ind"] == 0
    rep = experiment_subdivision(e_space(Z2, 1), 2)
    assert rep["quantities"]["u"] == [1, 1, 1] and rep["quantities"]["ind"] == 1
    rep = experiment_subdivision(build_counterexample(V4).P1, 1)
    assert rep["quantities"]["u"][0] <= 1
    assert check_report(rep).ok
