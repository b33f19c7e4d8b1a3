"""Exact cross-index with witnesses, and the two product constructions.

A G-map ``P -> Q_n G`` is fixed by one (level, column) pair per orbit:
``psi(a . r_O) = (a * col_O, level_O)``.  For a comparability
``a . r_O < b . r_O'`` the map must satisfy ``level_O < level_O'`` or
(``level_O == level_O'`` and ``a * col_O == b * col_O'``), i.e.
``col_O = (a^-1 b) * col_O'``.  An edge whose offset set has two or more
elements therefore forces a strict level increase.  The solver is a
backtracking search over these binary constraints that maintains arc
consistency after every assignment.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import InvalidInputError, NoSharedElementError, PreconditionError, ResourceGuardError
from .groups import FiniteGroup, conjugate, cyclic_intersection, element_order, is_nice, minimal_subgroups
from .posets import (
    GPoset,
    OrbitPath,
    PosetGMap,
    comparability_graph,
    orbit_digraph,
    product,
    q_poset,
    validate_gmap,
    validate_orbit_path,
)

log = logging.getLogger(__name__)

MAX_SEARCH_ORBITS = 12


@dataclass(eq=False)
class XindResult:
    value: int
    witness: PosetGMap
    assignment: list[tuple[int, int]]
    lower_certificate: OrbitPath | None = None
    nodes: int = 0

    def to_json(self) -> dict:
        s = self.witness.source.group.order
        return {"value": self.value,
                "map": [[t % s, t // s] for t in self.witness.map]}


@dataclass(eq=False)
class CounterexamplePair:
    group: FiniteGroup
    h1: int
    h2: int
    P1: GPoset
    P2: GPoset


# --- cross-index zero -------------------------------------------------------

def xind_zero(P: GPoset) -> tuple[bool, PosetGMap | OrbitPath]:
    """Decide xind(P) == 0 from the comparability graph.

    Returns ``(True, witness map into Q_0 G)`` built by component propagation,
    or ``(False, OrbitPath)`` joining two distinct members of one orbit.
    """
    orb = P.orbit_data
    G = P.group
    graph = comparability_graph(P)
    comp = [-1] * P.size
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    for i, c in enumerate(components):
        for p in c:
            comp[p] = i
    for c in components:
        first_seen = {}
        for p in c:
            k = orb.orbit_of[p]
            if k in first_seen:
                start = first_seen[k]
                verts = nx.shortest_path(graph, start, p)
                g = G.mul(orb.coset[p], G.inv(orb.coset[start]))
                return False, OrbitPath(P, verts, g)
            first_seen[k] = p

    psi = [-1] * P.size
    for x0 in range(P.size):
        if psi[x0] != -1:
            continue
        for g in G.elements:
            x = P.act(g, x0)
            for y in components[comp[x]]:
                psi[y] = g
    return True, PosetGMap(P, q_poset(G, 0), tuple(psi))


# --- orbit structure used by the solver -----------------------------------

@dataclass
class _OrbitProblem:
    k: int
    order: list[int]
    # nbrs[o] = [(o2, d, o_below)]: o_below means o -> o2; d is the single offset or None (strict)
    nbrs: list[list[tuple[int, int | None, bool]]]
    strict_height: list[int]
    strict_depth: list[int]
    depth: list[int]
    anchors: set[int]


def _offsets(P: GPoset) -> dict[tuple[int, int], set[int]]:
    """For each orbit edge O -> O', the set {a^-1 b : a.r_O < b.r_O'}."""
    G = P.group
    orb = P.orbit_data
    ob = np.asarray(orb.orbit_of)
    cs = np.asarray(orb.coset)
    inv = np.asarray(G.inverse)
    ps, qs = np.nonzero(P.less)
    d = G.array[inv[cs[ps]], cs[qs]]
    out = defaultdict(set)
    for a, b, x in zip(ob[ps].tolist(), ob[qs].tolist(), d.tolist()):
        out[a, b].add(x)
    return out


def _prepare(P: GPoset) -> _OrbitProblem:
    k = len(P.orbit_data)
    dag = orbit_digraph(P)
    order = list(nx.lexicographical_topological_sort(dag))
    nbrs = [[] for _ in range(k)]
    strict = {}
    for (a, b), ds in sorted(_offsets(P).items()):
        d = None if len(ds) > 1 else next(iter(ds))
        strict[a, b] = d is None
        nbrs[a].append((b, d, True))
        nbrs[b].append((a, d, False))
    sh = [0] * k
    for o in reversed(order):
        sh[o] = max((sh[b] + strict[o, b] for b in dag.successors(o)), default=0)
    sd = [0] * k
    depth = [0] * k
    for o in order:
        sd[o] = max((sd[a] + strict[a, o] for a in dag.predecessors(o)), default=0)
        depth[o] = max((depth[a] + 1 for a in dag.predecessors(o)), default=0)
    # right-multiplying every column of a weakly connected component preserves all
    # constraints, so the first orbit of each component may take column e
    pos = {o: i for i, o in enumerate(order)}
    anchors = {min(c, key=pos.__getitem__) for c in nx.weakly_connected_components(dag)}
    return _OrbitProblem(k, order, nbrs, sh, sd, depth, anchors)


class _Search:
    """Maintained-arc-consistency search over orbit values.

    The value of orbit O is psi(r_O) in Q_n G encoded as ``level*|G| + column``,
    so domains are int bitmasks and ascending bit order is (level, column) order.
    """

    def __init__(self, P: GPoset, prob: _OrbitProblem, n: int):
        G = P.group
        self.prob = prob
        self.s = s = G.order
        self.n = n
        self.level_mask = [((1 << s) - 1) << (l * s) for l in range(n + 1)]
        self.below_mask = [(1 << (l * s)) - 1 for l in range(n + 2)]
        # lperm[d][g] = d*g
        self.lperm = G.table
        self.inv = G.inverse
        self.nodes = 0
        self.rank = {o: i for i, o in enumerate(prob.order)}

    def initial(self):
        prob, s = self.prob, self.s
        doms = []
        for o in range(prob.k):
            lo, hi = prob.strict_depth[o], self.n - prob.strict_height[o]
            if lo > hi:
                return None
            mask = 0
            for l in range(lo, hi + 1):
                mask |= 1 << (l * s) if o in prob.anchors else self.level_mask[l]
            doms.append(mask)
        return self.propagate(doms, range(prob.k))

    def revise(self, doms, x, y, d, x_below):
        s = self.s
        dx, dy = doms[x], doms[y]
        if x_below:
            L = (dy.bit_length() - 1) // s
            keep = dx & self.below_mask[L]
            if d is None:
                return keep
            cand = (dx & self.level_mask[L]) >> (L * s) if L <= self.n else 0
            perm = self.lperm[self.inv[d]]
        else:
            L = ((dy & -dy).bit_length() - 1) // s
            keep = dx & ~self.below_mask[L + 1]
            if d is None:
                return keep
            cand = (dx & self.level_mask[L]) >> (L * s)
            perm = self.lperm[d]
        base = L * s
        g = 0
        while cand:
            if cand & 1 and (dy >> (base + perm[g])) & 1:
                keep |= 1 << (base + g)
            cand >>= 1
            g += 1
        return keep

    def propagate(self, doms, changed):
        nbrs = self.prob.nbrs
        queue = list(changed)
        queued = set(queue)
        while queue:
            y = queue.pop()
            queued.discard(y)
            for x, d, y_below in nbrs[y]:
                new = self.revise(doms, x, y, d, not y_below)
                if new != doms[x]:
                    if not new:
                        return None
                    doms[x] = new
                    if x not in queued:
                        queued.add(x)
                        queue.append(x)
        return doms

    def solve(self):
        doms = self.initial()
        if doms is None:
            return None
        return self._dfs(doms)

    def _dfs(self, doms):
        # fail-first: smallest domain, ties broken by topological position
        best, best_key = None, None
        for o in self.prob.order:
            c = doms[o].bit_count() if hasattr(int, "bit_count") else bin(doms[o]).count("1")
            if c > 1:
                key = (c, self.rank[o])
                if best_key is None or key < best_key:
                    best, best_key = o, key
        if best is None:
            return [dom.bit_length() - 1 for dom in doms]
        dom = doms[best]
        while dom:
            bit = dom & -dom
            dom ^= bit
            self.nodes += 1
            trial = list(doms)
            trial[best] = bit
            trial = self.propagate(trial, [best])
            if trial is not None:
                out = self._dfs(trial)
                if out is not None:
                    return out
        return None


def _search(P: GPoset, prob: _OrbitProblem, n: int):
    """Returns ((levels, cols), nodes) for a G-map P -> Q_n G, or (None, nodes)."""
    search = _Search(P, prob, n)
    values = search.solve()
    if values is None:
        return None, search.nodes
    s = P.group.order
    return ([v // s for v in values], [v % s for v in values]), search.nodes


def _assignment_map(P: GPoset, n: int, levels, cols) -> PosetGMap:
    G = P.group
    orb = P.orbit_data
    s = G.order
    psi = [levels[orb.orbit_of[p]] * s + G.mul(orb.coset[p], cols[orb.orbit_of[p]])
           for p in range(P.size)]
    return PosetGMap(P, q_poset(G, n), tuple(psi))


def orbit_dag_bound(P: GPoset) -> int:
    """Longest path (in edges) of the orbit digraph; always an upper bound for xind."""
    dag = orbit_digraph(P)
    return nx.dag_longest_path_length(dag) if dag.number_of_nodes() else 0


def witness_level(f: PosetGMap) -> int:
    """n such that the target of f is Q_n G (checked structurally)."""
    s = f.target.group.order
    n = f.target.size // s - 1
    if f.target.size % s or n < 0 or f.target != q_poset(f.target.group, n):
        raise InvalidInputError("hint target is not a Q_n G poset")
    return n


def xind(P: GPoset, max_orbits: int | None = MAX_SEARCH_ORBITS,
         hint: PosetGMap | None = None) -> XindResult:
    """Exact cross-index of a valid free G-poset, with a witness G-map.

    Every ``n`` below the returned value is refuted by exhaustive search.  A
    ``hint`` (any validated G-map into some Q_m G) caps the search at m.
    ``max_orbits`` bounds the instances on which a search with n >= 1 is run;
    the n = 0 search is polynomial and never guarded.
    """
    prob = _prepare(P)
    upper = max(prob.depth) if prob.k else 0
    upper_map = None
    if hint is not None:
        validate_gmap(hint).raise_if_failed("xind hint")
        m = witness_level(hint)
        if m < upper:
            upper, upper_map = m, hint
    total_nodes = 0
    for n in range(upper):
        if n >= 1 and max_orbits is not None and prob.k > max_orbits:
            raise ResourceGuardError(
                f"exhaustive cross-index search refused: {prob.k} orbits > {max_orbits}")
        found, nodes = _search(P, prob, n)
        total_nodes += nodes
        if found is not None:
            levels, cols = found
            return _result(P, n, _assignment_map(P, n, levels, cols), total_nodes)
    if upper_map is None:
        # longest-path depth levels satisfy every constraint strictly
        upper_map = _assignment_map(P, upper, prob.depth, [0] * prob.k)
    return _result(P, upper, upper_map, total_nodes)


def _result(P: GPoset, n: int, witness: PosetGMap, nodes: int) -> XindResult:
    validate_gmap(witness).raise_if_failed("cross-index witness")
    orb = P.orbit_data
    s = P.group.order
    assignment = [(witness.map[r] // s, witness.map[r] % s) for r in orb.representatives]
    cert = None
    if n > 0:
        zero, cert = xind_zero(P)
        assert not zero
    return XindResult(n, witness, assignment, cert, nodes)


def lift_witness(f: PosetGMap, witness: PosetGMap) -> PosetGMap:
    """witness after f, for a G-map f into the witness' source."""
    if f.target != witness.source:
        raise InvalidInputError("lift_witness: map does not land in the witness source")
    return PosetGMap(f.source, witness.target, tuple(witness.map[x] for x in f.map))


# --- counterexample constructions -----------------------------------------

def counterexample_poset(G: FiniteGroup, h: int) -> GPoset:
    """Two copies G(1), G(2) of G with g(1) < g(2) and g(1) < (g h)(2).

    g(i) is encoded as ``(i-1)*|G| + g``; the action is left multiplication.
    """
    s = G.order
    less = np.zeros((2 * s, 2 * s), dtype=bool)
    for g in range(s):
        less[g, s + g] = True
        less[g, s + G.mul(g, h)] = True
    action = [[G.mul(a, g) + i * s for i in range(2) for g in range(s)] for a in range(s)]
    labels = [f"{g}({i})" for i in (1, 2) for g in range(s)]
    return GPoset(G, less, action, labels)


def build_counterexample(G: FiniteGroup) -> CounterexamplePair:
    if G.order < 2 or is_nice(G):
        raise PreconditionError(
            f"group {G.name} is nice (unique minimal subgroup); the product theorem holds "
            "for cross-index 1, so no counterexample pair exists")
    # Comparability in P_i links x(.) with (x h_i^{+-1})(.), so orbit-mates reached by a
    # path in P1 x P2 differ by an element of x H1 x^-1 and of y H2 y^-1.  The pair must
    # be non-conjugate, not merely trivially intersecting (S3 with two reflections fails).
    # A non-nice group always has such a pair: a p-group's centre holds a normal one.
    mins = minimal_subgroups(G)
    for i, A in enumerate(mins):
        for B in mins[i + 1:]:
            if conjugate(G, A, B):
                continue
            hA, hB = A.elements[1], B.elements[1]
            assert cyclic_intersection(G, hA, hB).is_trivial()
            return CounterexamplePair(G, hA, hB,
                                      counterexample_poset(G, hA), counterexample_poset(G, hB))
    raise AssertionError(f"{G.name}: all minimal subgroups conjugate, yet not nice")


def counterexample_path(P: GPoset, h: int) -> OrbitPath:
    """e(1) < h(2) > h(1): the orbit-mate path in counterexample_poset(G, h)."""
    s = P.group.order
    path = OrbitPath(P, (0, s + h, h), h)
    validate_orbit_path(path).raise_if_failed("counterexample path")
    return path


def extend_path(path: OrbitPath, t: int) -> OrbitPath:
    """Concatenate path, g.path, ..., g^{t-1}.path: a path from p to g^t.p."""
    P = path.poset
    G = P.group
    g = path.group_element
    verts = list(path.vertices)
    shift = g
    for _ in range(t - 1):
        seg = [P.act(shift, v) for v in path.vertices]
        assert seg[0] == verts[-1]
        verts.extend(seg[1:])
        shift = G.mul(shift, g)
    return OrbitPath(P, verts, G.power(g, t))


def product_path(P: GPoset, Q: GPoset, path_p: OrbitPath, path_q: OrbitPath,
                 PQ: GPoset | None = None) -> OrbitPath:
    """Path from (p, q) to (g*.p, g*.q) in P x Q, g* the least non-identity
    element shared by <g> and <h>."""
    G = P.group
    if Q.group != G:
        raise InvalidInputError("product_path: posets over different groups")
    for pth in (path_p, path_q):
        validate_orbit_path(pth).raise_if_failed("orbit path")
    g, h = path_p.group_element, path_q.group_element
    common = cyclic_intersection(G, g, h)
    if common.is_trivial():
        raise NoSharedElementError(f"<{g}> and <{h}> intersect trivially in {G.name}")
    star = common.elements[1]
    t = next(i for i in range(1, element_order(G, g) + 1) if G.power(g, i) == star)
    u = next(i for i in range(1, element_order(G, h) + 1) if G.power(h, i) == star)
    L = extend_path(path_p, t)
    Lq = extend_path(path_q, u)
    PQ = product(P, Q) if PQ is None else PQ
    mq = Q.size
    p0 = L.start
    end_q = Lq.end
    verts = [p0 * mq + y for y in Lq.vertices]
    verts += [x * mq + end_q for x in L.vertices[1:]]
    out = OrbitPath(PQ, verts, star)
    validate_orbit_path(out).raise_if_failed("product path")
    return out
