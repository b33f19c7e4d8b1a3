"""Random instances, verification scenarios and experiments.

Every scenario returns a JSON-ready report dict whose certificates can be
re-checked offline with :func:`gposet.certificates.check_report`.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

import numpy as np

from . import certificates as cert
from .complexes import GSimplicialComplex, ind_upper, ind_zero, order_complex
from .crossindex import (
    MAX_SEARCH_ORBITS,
    build_counterexample,
    counterexample_path,
    lift_witness,
    product_path,
    xind,
)
from .errors import PreconditionError, ResourceGuardError
from .groups import FiniteGroup, is_nice
from .posets import GPoset, product, projection_maps, transitive_closure, validate_gposet

log = logging.getLogger(__name__)

SCHEMA = cert.SCHEMA


@dataclass(frozen=True)
class RandomPosetSpec:
    group: FiniteGroup
    orbit_count: int
    density: float
    seed: int


def random_free_gposet(spec: RandomPosetSpec) -> GPoset:
    """Random valid free G-poset.

    Orbits get distinct levels from a random linear order; each candidate
    relation ``r_O < b.r_O'`` (level of O below level of O') is kept with
    probability ``density``; the result is closed under the action and
    transitivity.  Orbit O's element a.r_O is encoded as ``O*|G| + a``.
    """
    if spec.orbit_count < 1:
        raise ValueError("orbit count must be >= 1")
    if not 0.0 <= spec.density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    G = spec.group
    s, k = G.order, spec.orbit_count
    rng = random.Random(spec.seed)
    level = list(range(k))
    rng.shuffle(level)
    m = s * k
    less = np.zeros((m, m), dtype=bool)
    for o in range(k):
        for o2 in range(k):
            if level[o] >= level[o2]:
                continue
            for b in range(s):
                if rng.random() < spec.density:
                    for a in range(s):
                        less[o * s + a, o2 * s + G.table[a][b]] = True
    less = transitive_closure(less)
    action = [[o * s + G.table[g][a] for o in range(k) for a in range(s)] for g in range(s)]
    labels = [f"{a}.x{o}" for o in range(k) for a in range(s)]
    P = GPoset(G, less, action, labels)
    validate_gposet(P).raise_if_failed("random poset")
    return P


def _spec_seed(rng: random.Random) -> int:
    return rng.randrange(2 ** 32)


def _gap_sequence_objects(rb: cert.ReportBuilder, tag: str, K_name: str, report) -> None:
    """Register F(sd^r K) objects and their u_r witnesses."""
    for r, res in enumerate(report.results):
        S = K_name if r == 0 else rb.add_subdivision(f"{tag}sd{r}", K_name, r)
        F = rb.add_face_poset(f"{tag}F{r}", S)
        rb.witness(F, res.witness, f"u_{r} = xind F(sd^{r} K) <= {res.value}")


# --- scenario: the non-nice counterexample ---------------------------------

def counterexample_report(G: FiniteGroup) -> dict:
    """The pair P1, P2 with cross-index witnesses and orbit-mate paths."""
    pair = build_counterexample(G)
    rb = cert.ReportBuilder("counterexample", G)
    rb.quantities.update({"h1": pair.h1, "h2": pair.h2})
    for i, (P, h) in enumerate(((pair.P1, pair.h1), (pair.P2, pair.h2)), start=1):
        name = rb.add_poset(f"P{i}", P)
        res = xind(P)
        rb.quantities[f"xind_P{i}"] = res.value
        rb.witness(name, res.witness, f"xind P{i} <= {res.value}")
        rb.orbit_path(name, counterexample_path(P, h), f"xind P{i} >= 1")
        rb.check(f"xind P{i}", 1, res.value)
    return rb.build()


def verify_theorem_main(G: FiniteGroup) -> dict:
    """Index 1 factors whose product has index 0, for a non-nice group."""
    if G.order < 2 or is_nice(G):
        raise PreconditionError(
            f"group {G.name} is nice; the product statement holds there, so there is no counterexample")
    pair = build_counterexample(G)
    rb = cert.ReportBuilder("thm-main", G)
    rb.quantities.update({"h1": pair.h1, "h2": pair.h2})
    names = [rb.add_poset("P1", pair.P1), rb.add_poset("P2", pair.P2)]
    for i, (P, h, name) in enumerate(zip((pair.P1, pair.P2), (pair.h1, pair.h2), names), start=1):
        res = xind(P)
        rb.quantities[f"xind_P{i}"] = res.value
        rb.check(f"xind P{i}", 1, res.value)
        rb.witness(name, res.witness, f"xind P{i} <= 1")
        rb.orbit_path(name, counterexample_path(P, h), f"xind P{i} >= 1")

        K = order_complex(P)
        kname = rb.add_order_complex(f"K{i}", name)
        zero, zcert = ind_zero(K)
        rb.quantities[f"ind_zero_K{i}"] = zero
        rb.check(f"ind_zero Delta(P{i})", False, zero)
        if zero:
            rb.e0_map(kname, zcert, f"ind K{i} = 0")
        else:
            rb.vertex_path(kname, zcert, f"ind K{i} >= 1")
        up = ind_upper(K, 0)
        rb.quantities[f"ind_upper_K{i}"] = up.values
        rb.check(f"ind_upper Delta(P{i}), r=0", 1, up.best)
        _gap_sequence_objects(rb, f"K{i}", kname, up)
        if not zero and up.best == 1:
            rb.quantities[f"ind_K{i}"] = 1

    PQ = product(pair.P1, pair.P2)
    pq = rb.add_product("P1xP2", "P1", "P2")
    res = xind(PQ)
    rb.quantities["xind_P1xP2"] = res.value
    rb.quantities["orbits_P1xP2"] = len(PQ.orbit_data)
    rb.check("xind P1xP2", 0, res.value)
    rb.witness(pq, res.witness, f"xind P1xP2 <= {res.value}")
    if res.lower_certificate is not None:
        rb.orbit_path(pq, res.lower_certificate, "xind P1xP2 >= 1")

    K12 = order_complex(PQ)
    k12 = rb.add_order_complex("K12", pq)
    zero, zcert = ind_zero(K12)
    rb.quantities["ind_zero_K12"] = zero
    rb.check("ind_zero Delta(P1xP2)", True, zero)
    if zero:
        rb.e0_map(k12, zcert, "ind Delta(P1xP2) = 0")
    else:
        rb.vertex_path(k12, zcert, "ind Delta(P1xP2) >= 1")
    rb.notes.append(
        "The product of complexes is certified through Delta(P1 x P2); its identification "
        "with Delta(P1) x Delta(P2) up to G-homotopy is taken from the literature, not computed.")
    return rb.build()


# --- scenario: cross-index 1 is preserved by products over nice groups -----

def _draw_xind_one(G: FiniteGroup, rng: random.Random, max_orbit_count: int, attempts: int):
    for _ in range(attempts):
        spec = RandomPosetSpec(G, rng.randint(2, max_orbit_count),
                               rng.choice((0.2, 0.35, 0.5, 0.75, 1.0)), _spec_seed(rng))
        P = random_free_gposet(spec)
        res = xind(P)
        if res.value == 1:
            return spec, P, res
    raise RuntimeError(f"no cross-index 1 poset over {G.name} in {attempts} draws")


def verify_hcx1(G: FiniteGroup, trials: int = 50, seed: int = 0,
                max_orbit_count: int = 3, attempts: int = 200) -> dict:
    """For nice G: random pairs with xind 1 have a product with xind 1."""
    if G.order < 2 or not is_nice(G):
        raise PreconditionError(
            f"group {G.name} is not nice; cross-index 1 need not survive products there")
    rng = random.Random(seed)
    rb = cert.ReportBuilder("hcx1", G, {"trials": trials, "seed": seed,
                                        "max_orbit_count": max_orbit_count})
    values, pairs = [], 0
    for t in range(trials):
        (sa, A, ra), (sb, B, rb_) = (_draw_xind_one(G, rng, max_orbit_count, attempts)
                                      for _ in range(2))
        na, nb = rb.add_poset(f"T{t}a", A), rb.add_poset(f"T{t}b", B)
        rb.witness(na, ra.witness, "xind = 1")
        rb.orbit_path(na, ra.lower_certificate, "xind >= 1")
        rb.witness(nb, rb_.witness, "xind = 1")
        rb.orbit_path(nb, rb_.lower_certificate, "xind >= 1")

        AB = product(A, B)
        nab = rb.add_product(f"T{t}ab", na, nb)
        pa, _ = projection_maps(A, B, AB)
        # xind(A x B) <= xind A through the first projection
        res = xind(AB, hint=lift_witness(pa, ra.witness))
        values.append(res.value)
        rb.check(f"trial {t}: xind(P x Q)", 1, res.value)
        rb.check(f"trial {t}: xind(P x Q) <= min", True, res.value <= min(ra.value, rb_.value))
        rb.witness(nab, res.witness, f"xind(P x Q) <= {res.value}")
        path = product_path(A, B, ra.lower_certificate, rb_.lower_certificate, AB)
        rb.orbit_path(nab, path, "xind(P x Q) >= 1, by concatenated orbit paths")
        pairs += 1
        log.debug("hcx1 %s trial %d: orbits %d x %d -> %d", G.name, t,
                  sa.orbit_count, sb.orbit_count, res.value)
    rb.quantities.update({"pairs": pairs, "product_xind": values})
    return rb.build()


# --- experiments ------------------------------------------------------------

def experiment_gap_search(G: FiniteGroup, orbit_count: int, trials: int, r_max: int,
                          seed: int = 0, density: float | None = None,
                          max_orbits: int | None = MAX_SEARCH_ORBITS) -> dict:
    """Look for posets whose subdivision bounds drop below the cross-index.

    A gap (min u_r < xind P) would certify ind Delta(P) < xind P.  The value
    xind P itself rests on the solver's exhausted search when it exceeds 1.
    """
    rng = random.Random(seed)
    rb = cert.ReportBuilder("gap-search", G, {"orbit_count": orbit_count, "trials": trials,
                                              "r_max": r_max, "seed": seed, "density": density})
    instances, gaps = [], []
    for t in range(trials):
        dens = rng.choice((0.1, 0.25, 0.5, 0.75)) if density is None else density
        P = random_free_gposet(RandomPosetSpec(G, orbit_count, dens, _spec_seed(rng)))
        name = rb.add_poset(f"P{t}", P)
        try:
            res = xind(P, max_orbits=max_orbits)
        except ResourceGuardError as exc:
            instances.append({"poset": name, "density": dens, "skipped": str(exc)})
            continue
        rb.witness(name, res.witness, f"xind <= {res.value}")
        if res.lower_certificate is not None:
            rb.orbit_path(name, res.lower_certificate, "xind >= 1")
        kname = rb.add_order_complex(f"K{t}", name)
        try:
            up = ind_upper(order_complex(P), r_max, max_orbits=max_orbits)
        except ResourceGuardError as exc:
            instances.append({"poset": name, "n": res.value, "density": dens, "skipped": str(exc)})
            continue
        _gap_sequence_objects(rb, f"K{t}", kname, up)
        entry = {"poset": name, "n": res.value, "u": up.values, "density": dens}
        if up.truncated:
            entry["truncated"] = up.truncated
        instances.append(entry)
        rb.check(f"trial {t}: u_r decreasing", True, up.is_decreasing())
        rb.check(f"trial {t}: u_0 <= xind", True, up.values[0] <= res.value)
        if up.best < res.value:
            gaps.append(entry)
    rb.quantities.update({"instances": instances, "gaps": gaps})
    return rb.build()


def experiment_subdivision(obj: GPoset | GSimplicialComplex, r_max: int,
                           max_orbits: int | None = MAX_SEARCH_ORBITS) -> dict:
    """The sequence u_r = xind F(sd^r K), r = 0..r_max, with its certificates."""
    if isinstance(obj, GPoset):
        rb = cert.ReportBuilder("subdivision", obj.group, {"r_max": r_max, "input": "poset"})
        pname = rb.add_poset("P", obj)
        kname = rb.add_order_complex("K", pname)
        K = order_complex(obj)
    else:
        rb = cert.ReportBuilder("subdivision", obj.group, {"r_max": r_max, "input": "complex"})
        kname = rb.add_complex("K", obj)
        K = obj
    zero, zcert = ind_zero(K)
    if zero:
        rb.e0_map(kname, zcert, "ind K = 0")
    else:
        rb.vertex_path(kname, zcert, "ind K >= 1")
    up = ind_upper(K, r_max, max_orbits=max_orbits)
    _gap_sequence_objects(rb, "K", kname, up)
    rb.quantities.update({"u": up.values, "best": up.best, "ind_zero": zero})
    if up.truncated:
        rb.quantities["truncated"] = up.truncated
    if zero:
        rb.quantities["ind"] = 0
    elif up.best == 1:
        rb.quantities["ind"] = 1
    rb.check("u_r decreasing", True, up.is_decreasing())
    return rb.build()
