"""Free G-posets, G-maps between them, and orbit paths.

A :class:`GPoset` stores its strict order as a transitively closed boolean
matrix ``less`` (``less[p, q]`` means p < q) and the action as an integer
array ``action`` of shape ``(|G|, m)`` with ``action[g, p] = g.p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .errors import InvalidInputError
from .groups import FiniteGroup


def _frozen(arr, dtype):
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


class GPoset:
    def __init__(self, group: FiniteGroup, less, action, labels=None):
        self.group = group
        self.less = _frozen(less, bool)
        self.action = _frozen(action, np.int64)
        m = self.less.shape[0] if self.less.ndim == 2 else 0
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(m))

    @property
    def size(self) -> int:
        return self.less.shape[0]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"GPoset({self.group.name}, size={self.size})"

    def __eq__(self, other):
        if not isinstance(other, GPoset):
            return NotImplemented
        return (self.group == other.group and self.labels == other.labels
                and np.array_equal(self.less, other.less)
                and np.array_equal(self.action, other.action))

    __hash__ = None

    @cached_property
    def leq(self) -> np.ndarray:
        out = self.less | np.eye(self.size, dtype=bool)
        out.setflags(write=False)
        return out

    def comparable(self, p: int, q: int) -> bool:
        return bool(self.less[p, q] or self.less[q, p])

    def act(self, g: int, p: int) -> int:
        return int(self.action[g, p])

    def relations(self) -> list[tuple[int, int]]:
        return [(int(p), int(q)) for p, q in np.argwhere(self.less)]

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs (Hasse diagram edges) in lexicographic order."""
        L = self.less.astype(np.float32)
        through = (L @ L) > 0
        return [(int(p), int(q)) for p, q in np.argwhere(self.less & ~through)]

    @cached_property
    def orbit_data(self) -> "Orbits":
        return _compute_orbits(self)


@dataclass(frozen=True)
class Orbits:
    """Orbit decomposition with canonical representatives.

    ``representatives[k]`` is the least index in orbit k, ``orbit_of[p]`` is the
    orbit index of p and ``coset[p]`` the unique group element a with
    ``p = a . representatives[orbit_of[p]]`` (unique by freeness).
    """
    representatives: tuple[int, ...]
    orbit_of: tuple[int, ...]
    coset: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.representatives)


def _compute_orbits(P: GPoset) -> Orbits:
    m = P.size
    orbit_of = [-1] * m
    coset = [-1] * m
    reps, members = [], []
    for p in range(m):
        if orbit_of[p] != -1:
            continue
        k = len(reps)
        reps.append(p)
        for g in range(P.group.order):
            q = int(P.action[g, p])
            if orbit_of[q] == -1:
                orbit_of[q] = k
                coset[q] = g
        members.append(tuple(sorted(q for q in set(int(x) for x in P.action[:, p]))))
    return Orbits(tuple(reps), tuple(orbit_of), tuple(coset), tuple(members))


def orbits(P: GPoset) -> list[tuple[int, ...]]:
    """Orbits as sorted index tuples, in order of their least element."""
    return list(P.orbit_data.members)


# --- validation -------------------------------------------------------------

@dataclass
class Report:
    ok: bool
    code: str = "ok"
    message: str = ""

    def __bool__(self):
        return self.ok

    def raise_if_failed(self, what="input"):
        if not self.ok:
            raise InvalidInputError(f"{what} rejected [{self.code}]: {self.message}")


# Diagnostic codes, in the order they are checked.
GPOSET_CODES = (
    "shape",
    "action-not-permutation",
    "action-identity",
    "action-not-homomorphism",
    "not-free",
    "orbit-cycle",
    "orbit-comparable",
    "not-irreflexive",
    "not-antisymmetric",
    "not-transitive",
    "not-order-preserving",
)


def validate_gposet(P: GPoset) -> Report:
    G = P.group
    m = P.size
    n = G.order
    less, act = P.less, P.action
    if less.ndim != 2 or less.shape != (m, m) or act.shape != (n, m) or len(P.labels) != m:
        return Report(False, "shape", f"expected less {m}x{m}, action {n}x{m}, {m} labels")
    ident = np.arange(m)
    for g in range(n):
        if not np.array_equal(np.sort(act[g]), ident):
            return Report(False, "action-not-permutation", f"action of {g} is not a bijection")
    if not np.array_equal(act[0], ident):
        return Report(False, "action-identity", "the identity does not act trivially")
    for a in range(n):
        for b in range(n):
            if not np.array_equal(act[G.table[a][b]], act[a][act[b]]):
                return Report(False, "action-not-homomorphism",
                              f"action of {a}*{b} differs from action {a} after {b}")
    for g in range(1, n):
        fixed = np.flatnonzero(act[g] == ident)
        if len(fixed):
            return Report(False, "not-free", f"element {g} fixes point {int(fixed[0])}")

    orb = P.orbit_data
    k = len(orb)
    ob = np.asarray(orb.orbit_of)
    # orbit digraph without self-loops
    adj = np.zeros((k, k), dtype=bool)
    ps, qs = np.nonzero(less)
    adj[ob[ps], ob[qs]] = True
    np.fill_diagonal(adj, False)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(k))
    dg.add_edges_from(map(tuple, np.argwhere(adj)))
    if not nx.is_directed_acyclic_graph(dg):
        cyc = [int(u) for u, _ in nx.find_cycle(dg)]
        return Report(False, "orbit-cycle",
                      "orbit digraph has a cycle through orbits of "
                      + ", ".join(str(orb.representatives[c]) for c in cyc))
    same = ob[ps] == ob[qs]
    diff = same & (ps != qs)
    if diff.any():
        i = int(np.flatnonzero(diff)[0])
        return Report(False, "orbit-comparable",
                      f"{int(ps[i])} < {int(qs[i])} but both lie in one orbit")
    if np.diag(less).any():
        p = int(np.flatnonzero(np.diag(less))[0])
        return Report(False, "not-irreflexive", f"{p} < {p}")
    if (less & less.T).any():
        p, q = np.argwhere(less & less.T)[0]
        return Report(False, "not-antisymmetric", f"{p} < {q} and {q} < {p}")
    Lf = less.astype(np.float32)
    missing = ((Lf @ Lf) > 0) & ~less
    if missing.any():
        p, q = np.argwhere(missing)[0]
        return Report(False, "not-transitive", f"{p} < {q} is implied but missing")
    for g in range(1, n):
        moved = less[np.ix_(act[g], act[g])]
        # moved[p, q] = less[g.p, g.q]; must dominate less
        if (less & ~moved).any():
            p, q = np.argwhere(less & ~moved)[0]
            return Report(False, "not-order-preserving",
                          f"{p} < {q} but not {g}.{p} < {g}.{q}")
    return Report(True)


# --- constructors -----------------------------------------------------------

def transitive_closure(less) -> np.ndarray:
    R = np.array(less, dtype=bool)
    for k in range(R.shape[0]):
        col = R[:, k]
        if col.any():
            R[col] |= R[k]
    return R


def q_poset(G: FiniteGroup, n: int) -> GPoset:
    """Q_n G on G x {0..n}; (h, i) is encoded as ``i*|G| + h``."""
    if n < 0:
        raise InvalidInputError(f"level count must be >= 0, got {n}")
    s = G.order
    m = s * (n + 1)
    level = np.arange(m) // s
    less = level[:, None] < level[None, :]
    action = np.array([[i * s + G.table[g][h] for i in range(n + 1) for h in range(s)]
                       for g in range(s)])
    labels = [f"({h},{i})" for i in range(n + 1) for h in range(s)]
    return GPoset(G, less, action, labels)


def antichain_poset(G: FiniteGroup, orbit_count: int = 1) -> GPoset:
    """Disjoint free orbits, no relations."""
    return GPoset(G, np.zeros((G.order * orbit_count,) * 2, dtype=bool),
                  q_poset(G, orbit_count - 1).action,
                  [f"({h},{i})" for i in range(orbit_count) for h in range(G.order)])


def product(P: GPoset, Q: GPoset) -> GPoset:
    """Componentwise order with diagonal action; (p, q) is encoded as ``p*|Q| + q``."""
    if P.group != Q.group:
        raise InvalidInputError("product of G-posets over different groups")
    mq = Q.size
    m = P.size * mq
    leq = np.kron(P.leq, Q.leq).astype(bool)
    less = leq & ~np.eye(m, dtype=bool)
    action = P.action[:, :, None] * mq + Q.action[:, None, :]
    labels = [f"({a},{b})" for a in P.labels for b in Q.labels]
    return GPoset(P.group, less, action.reshape(P.group.order, m), labels)


def comparability_graph(P: GPoset) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(P.size))
    g.add_edges_from((int(p), int(q)) for p, q in np.argwhere(np.triu(P.less | P.less.T)))
    return g


def orbit_digraph(P: GPoset) -> nx.DiGraph:
    """Orbit O -> O' iff some element of O is below some element of O'."""
    orb = P.orbit_data
    dg = nx.DiGraph()
    dg.add_nodes_from(range(len(orb)))
    ob = np.asarray(orb.orbit_of)
    ps, qs = np.nonzero(P.less)
    pairs = {(int(a), int(b)) for a, b in zip(ob[ps], ob[qs]) if a != b}
    dg.add_edges_from(sorted(pairs))
    return dg


# --- G-maps -----------------------------------------------------------------

@dataclass(eq=False)
class PosetGMap:
    source: GPoset
    target: GPoset
    map: tuple[int, ...]

    def __post_init__(self):
        self.map = tuple(int(x) for x in self.map)

    def __call__(self, p: int) -> int:
        return self.map[p]

    def __eq__(self, other):
        if not isinstance(other, PosetGMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.map == other.map

    __hash__ = None


def identity_gmap(P: GPoset) -> PosetGMap:
    return PosetGMap(P, P, tuple(range(P.size)))


def validate_gmap(f: PosetGMap) -> Report:
    P, Q = f.source, f.target
    if P.group != Q.group:
        return Report(False, "group-mismatch", "source and target use different groups")
    if len(f.map) != P.size:
        return Report(False, "shape", f"map has {len(f.map)} entries, source has {P.size}")
    fm = np.asarray(f.map, dtype=np.int64)
    if P.size and (fm.min() < 0 or fm.max() >= Q.size):
        return Report(False, "shape", "map value outside the target")
    for g in range(1, P.group.order):
        bad = np.flatnonzero(fm[P.action[g]] != Q.action[g][fm])
        if len(bad):
            p = int(bad[0])
            return Report(False, "not-equivariant", f"f({g}.{p}) != {g}.f({p})")
    bad = P.less & ~Q.leq[np.ix_(fm, fm)]
    if bad.any():
        p, q = np.argwhere(bad)[0]
        return Report(False, "not-order-preserving",
                      f"{p} < {q} but f({p})={fm[p]} is not <= f({q})={fm[q]}")
    return Report(True)


def compose_gmap(f: PosetGMap, g: PosetGMap) -> PosetGMap:
    """The composite ``g after f`` (first f, then g)."""
    if f.target != g.source:
        raise InvalidInputError("cannot compose: target of the first map is not the source of the second")
    h = PosetGMap(f.source, g.target, tuple(g.map[x] for x in f.map))
    validate_gmap(h).raise_if_failed("composite G-map")
    return h


def projection_maps(P: GPoset, Q: GPoset, PQ: GPoset | None = None) -> tuple[PosetGMap, PosetGMap]:
    PQ = product(P, Q) if PQ is None else PQ
    mq = Q.size
    idx = range(PQ.size)
    return (PosetGMap(PQ, P, tuple(i // mq for i in idx)),
            PosetGMap(PQ, Q, tuple(i % mq for i in idx)))


# --- orbit paths ------------------------------------------------------------

@dataclass(eq=False)
class OrbitPath:
    """Comparability path from p to g.p with g != e; certifies cross-index > 0."""
    poset: GPoset
    vertices: tuple[int, ...]
    group_element: int

    def __post_init__(self):
        self.vertices = tuple(int(v) for v in self.vertices)
        self.group_element = int(self.group_element)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def translate(self, g: int) -> "OrbitPath":
        """The path g.p_1, ..., g.p_k; it ends at (g h g^-1).(g.p_1)."""
        G = self.poset.group
        conj = G.mul(G.mul(g, self.group_element), G.inv(g))
        return OrbitPath(self.poset, tuple(self.poset.act(g, v) for v in self.vertices), conj)


def validate_orbit_path(path: OrbitPath) -> Report:
    P = path.poset
    vs = path.vertices
    g = path.group_element
    if len(vs) < 2:
        return Report(False, "too-short", "a path needs at least two vertices")
    if any(not 0 <= v < P.size for v in vs):
        return Report(False, "shape", "vertex outside the poset")
    if not 0 < g < P.group.order:
        return Report(False, "identity-element", "group element must be a non-identity element")
    for a, b in zip(vs, vs[1:]):
        if not P.comparable(a, b):
            return Report(False, "not-comparable", f"consecutive vertices {a}, {b} are incomparable")
    if P.act(g, vs[0]) != vs[-1]:
        return Report(False, "wrong-endpoint", f"{g}.{vs[0]} != {vs[-1]}")
    return Report(True)
