"""Free G-simplicial complexes and the poset/complex bridges.

Complexes are stored by their facets (sorted vertex tuples, listed in
lexicographic order).  All derived vertex encodings are canonical:

* face poset elements are the simplices sorted by (dimension, vertex tuple);
* the subdivision sd(K) has those simplices as its vertices, in that order;
* the simplicial product K1 ⊠ K2 encodes (v, w) as ``v*|V2| + w``;
* E_n G encodes (h, i) as ``i*|G| + h``, matching :func:`q_poset`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .crossindex import MAX_SEARCH_ORBITS, XindResult, lift_witness, xind
from .errors import InvalidInputError, ResourceGuardError
from .groups import FiniteGroup
from .posets import GPoset, PosetGMap, Report, product, validate_gmap

MAX_SIMPLICES = 200_000
MAX_FACE_POSET = 6_000


class GSimplicialComplex:
    def __init__(self, group: FiniteGroup, n_vertices: int, facets, action, labels=None):
        self.group = group
        self.n_vertices = int(n_vertices)
        self.facets = tuple(sorted(tuple(sorted(int(v) for v in f)) for f in facets))
        arr = np.array(action, dtype=np.int64).reshape(group.order, self.n_vertices)
        arr.setflags(write=False)
        self.action = arr
        self.labels = (tuple(labels) if labels is not None
                       else tuple(str(i) for i in range(self.n_vertices)))

    def __repr__(self):
        return (f"GSimplicialComplex({self.group.name}, vertices={self.n_vertices}, "
                f"facets={len(self.facets)}, dim={self.dim})")

    def __eq__(self, other):
        if not isinstance(other, GSimplicialComplex):
            return NotImplemented
        return (self.group == other.group and self.n_vertices == other.n_vertices
                and self.facets == other.facets and self.labels == other.labels
                and np.array_equal(self.action, other.action))

    __hash__ = None

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def simplex_count(self) -> int:
        return len(self.simplices)

    @cached_property
    def simplices(self) -> tuple[tuple[int, ...], ...]:
        """All non-empty simplices sorted by (dimension, vertex tuple)."""
        bound = sum(2 ** len(f) - 1 for f in self.facets)
        if bound > MAX_SIMPLICES and _count_faces(self.facets) > MAX_SIMPLICES:
            raise ResourceGuardError(f"complex has more than {MAX_SIMPLICES} simplices")
        faces = set()
        for f in self.facets:
            for r in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, r))
        return tuple(sorted(faces, key=lambda s: (len(s), s)))

    @cached_property
    def simplex_index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.simplices)}

    def act_on(self, g: int, simplex) -> tuple[int, ...]:
        a = self.action[g]
        return tuple(sorted(int(a[v]) for v in simplex))

    @cached_property
    def _vertex_facets(self) -> list[set[int]]:
        vf = [set() for _ in range(self.n_vertices)]
        for i, f in enumerate(self.facets):
            for v in f:
                vf[v].add(i)
        return vf

    def is_simplex(self, verts) -> bool:
        verts = set(verts)
        if not verts:
            return False
        it = iter(verts)
        common = set(self._vertex_facets[next(it)])
        for v in it:
            common &= self._vertex_facets[v]
            if not common:
                return False
        return bool(common)


def _count_faces(facets) -> int:
    faces = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            faces.update(itertools.combinations(f, r))
            if len(faces) > MAX_SIMPLICES:
                return len(faces)
    return len(faces)


def from_simplices(group: FiniteGroup, n_vertices: int, simplices, action, labels=None):
    """Complex generated by a list of simplices (non-maximal ones are dropped)."""
    sets = sorted({tuple(sorted(s)) for s in simplices}, key=len, reverse=True)
    facets = []
    for s in sets:
        if not any(set(s) <= set(f) for f in facets):
            facets.append(s)
    return GSimplicialComplex(group, n_vertices, facets, action, labels)


def validate_complex(K: GSimplicialComplex) -> Report:
    G = K.group
    v = K.n_vertices
    if len(K.labels) != v:
        return Report(False, "shape", f"{len(K.labels)} labels for {v} vertices")
    for f in K.facets:
        if not f:
            return Report(False, "facet-empty", "empty facet")
        if len(set(f)) != len(f) or f[0] < 0 or f[-1] >= v:
            return Report(False, "shape", f"facet {list(f)} has repeated or out-of-range vertices")
    if len(set(K.facets)) != len(K.facets):
        return Report(False, "facet-not-maximal", "a facet is listed twice")
    vf = K._vertex_facets
    for i, f in enumerate(K.facets):
        # facets containing every vertex of f, other than f itself
        common = set.intersection(*(vf[v] for v in f)) - {i}
        if common:
            j = min(common)
            return Report(False, "facet-not-maximal", f"{list(f)} lies in {list(K.facets[j])}")
    covered = {v for f in K.facets for v in f}
    if len(covered) != v:
        missing = min(set(range(v)) - covered)
        return Report(False, "vertex-uncovered", f"vertex {missing} lies in no facet")
    act = K.action
    ident = np.arange(v)
    for g in range(G.order):
        if not np.array_equal(np.sort(act[g]), ident):
            return Report(False, "action-not-permutation", f"action of {g} is not a bijection")
    if not np.array_equal(act[0], ident):
        return Report(False, "action-identity", "the identity does not act trivially")
    for a in range(G.order):
        for b in range(G.order):
            if not np.array_equal(act[G.table[a][b]], act[a][act[b]]):
                return Report(False, "action-not-homomorphism", f"action of {a}*{b} is not a composite")
    facet_set = set(K.facets)
    for g in range(1, G.order):
        for f in K.facets:
            if K.act_on(g, f) not in facet_set:
                return Report(False, "action-not-simplicial", f"{g} maps facet {list(f)} to a non-facet")
    for s in K.simplices:
        for g in range(1, G.order):
            if K.act_on(g, s) == s:
                return Report(False, "not-free", f"{g} fixes simplex {list(s)}")
    return Report(True)


# --- maps -------------------------------------------------------------------

@dataclass(eq=False)
class SimplicialGMap:
    source: GSimplicialComplex
    target: GSimplicialComplex
    map: tuple[int, ...]

    def __post_init__(self):
        self.map = tuple(int(x) for x in self.map)


def validate_simplicial_map(f: SimplicialGMap) -> Report:
    K, L = f.source, f.target
    if K.group != L.group:
        return Report(False, "group-mismatch", "source and target use different groups")
    if len(f.map) != K.n_vertices or any(not 0 <= x < L.n_vertices for x in f.map):
        return Report(False, "shape", "vertex map has the wrong length or range")
    fm = np.asarray(f.map, dtype=np.int64)
    for g in range(1, K.group.order):
        bad = np.flatnonzero(fm[K.action[g]] != L.action[g][fm])
        if len(bad):
            return Report(False, "not-equivariant", f"f({g}.{int(bad[0])}) != {g}.f({int(bad[0])})")
    for s in K.facets:
        if not L.is_simplex(fm[list(s)].tolist()):
            return Report(False, "not-simplicial", f"image of {list(s)} is not a simplex")
    return Report(True)


@dataclass(eq=False)
class VertexPath:
    """Edge path in the 1-skeleton from v to g.v, g != e; certifies ind != 0."""
    complex: GSimplicialComplex
    vertices: tuple[int, ...]
    group_element: int


def validate_vertex_path(path: VertexPath) -> Report:
    K = path.complex
    vs = tuple(path.vertices)
    g = int(path.group_element)
    if len(vs) < 2 or any(not 0 <= v < K.n_vertices for v in vs):
        return Report(False, "shape", "path too short or vertex out of range")
    if not 0 < g < K.group.order:
        return Report(False, "identity-element", "group element must be a non-identity element")
    for a, b in zip(vs, vs[1:]):
        if not K.is_simplex((a, b)):
            return Report(False, "not-adjacent", f"{a} and {b} span no simplex")
    if int(K.action[g, vs[0]]) != vs[-1]:
        return Report(False, "wrong-endpoint", f"{g}.{vs[0]} != {vs[-1]}")
    return Report(True)


# --- constructions ----------------------------------------------------------

def order_complex(P: GPoset) -> GSimplicialComplex:
    """Simplices are the non-empty chains of P; facets are the maximal chains."""
    m = P.size
    cover = {p: [] for p in range(m)}
    for p, q in P.covers():
        cover[p].append(q)
    minimal = [p for p in range(m) if not P.less[:, p].any()]
    facets = []
    stack = [(p,) for p in reversed(minimal)]
    while stack:
        chain = stack.pop()
        ups = cover[chain[-1]]
        if not ups:
            facets.append(tuple(sorted(chain)))
        for q in reversed(ups):
            stack.append(chain + (q,))
    return GSimplicialComplex(P.group, m, facets, P.action, P.labels)


def _simplex_label(s) -> str:
    return "{" + ",".join(str(v) for v in s) + "}"


def face_poset(K: GSimplicialComplex, max_size: int = MAX_FACE_POSET) -> GPoset:
    simp = K.simplices
    m = len(simp)
    if m > max_size:
        raise ResourceGuardError(f"face poset would have {m} elements > {max_size}")
    index = K.simplex_index
    less = np.zeros((m, m), dtype=bool)
    for j, s in enumerate(simp):
        for r in range(1, len(s)):
            for sub in itertools.combinations(s, r):
                less[index[sub], j] = True
    action = np.array([[index[K.act_on(g, s)] for s in simp] for g in range(K.group.order)],
                      dtype=np.int64).reshape(K.group.order, m)
    return GPoset(K.group, less, action, [_simplex_label(s) for s in simp])


def _sd_chain_count(K: GSimplicialComplex) -> int:
    # simplices of sd(K) = chains of faces; a k-simplex tops sum_j (ordered set partitions) chains
    fub = [1]
    for n in range(1, K.dim + 2):
        fub.append(sum(math.comb(n, i) * fub[n - i] for i in range(1, n + 1)))
    return sum(fub[len(s)] for s in K.simplices)


def barycentric_subdivision(K: GSimplicialComplex, max_simplices: int = MAX_SIMPLICES) -> GSimplicialComplex:
    """sd(K) = order_complex(face_poset(K)), built directly from facet flags."""
    count = _sd_chain_count(K)
    if count > max_simplices:
        raise ResourceGuardError(f"subdivision would have {count} simplices > {max_simplices}")
    index = K.simplex_index
    facets = []
    for f in K.facets:
        for perm in itertools.permutations(f):
            facets.append(tuple(sorted(index[tuple(sorted(perm[:r]))] for r in range(1, len(f) + 1))))
    simp = K.simplices
    action = [[index[K.act_on(g, s)] for s in simp] for g in range(K.group.order)]
    return GSimplicialComplex(K.group, len(simp), facets, action, [_simplex_label(s) for s in simp])


def subdivide(K: GSimplicialComplex, r: int, max_simplices: int = MAX_SIMPLICES) -> GSimplicialComplex:
    if r < 0:
        raise InvalidInputError(f"subdivision depth must be >= 0, got {r}")
    for _ in range(r):
        K = barycentric_subdivision(K, max_simplices)
    return K


def boxtimes(K1: GSimplicialComplex, K2: GSimplicialComplex) -> GSimplicialComplex:
    """Simplicial product: A is a simplex iff both projections of A are simplices."""
    if K1.group != K2.group:
        raise InvalidInputError("simplicial product of complexes over different groups")
    n2 = K2.n_vertices
    facets = [tuple(v * n2 + w for v in s for w in t) for s in K1.facets for t in K2.facets]
    action = K1.action[:, :, None] * n2 + K2.action[:, None, :]
    labels = [f"({a},{b})" for a in K1.labels for b in K2.labels]
    return GSimplicialComplex(K1.group, K1.n_vertices * n2, facets,
                              action.reshape(K1.group.order, -1), labels)


def e_space(G: FiniteGroup, n: int) -> GSimplicialComplex:
    """E_n G: the (n+1)-fold join of G, one vertex per level in each simplex."""
    if n < 0:
        raise InvalidInputError(f"n must be >= 0, got {n}")
    s = G.order
    facets = [tuple(i * s + h for i, h in enumerate(choice))
              for choice in itertools.product(range(s), repeat=n + 1)]
    action = [[i * s + G.table[g][h] for i in range(n + 1) for h in range(s)] for g in range(s)]
    labels = [f"({h},{i})" for i in range(n + 1) for h in range(s)]
    return GSimplicialComplex(G, s * (n + 1), facets, action, labels)


# --- index bounds -----------------------------------------------------------

def ind_zero(K: GSimplicialComplex) -> tuple[bool, SimplicialGMap | VertexPath]:
    """Decide ind K == 0: no 1-skeleton component contains two points of one orbit."""
    G = K.group
    graph = nx.Graph()
    graph.add_nodes_from(range(K.n_vertices))
    for f in K.facets:
        graph.add_edges_from(zip(f, f[1:]))
    comps = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    comp = [0] * K.n_vertices
    for i, c in enumerate(comps):
        for v in c:
            comp[v] = i
    for c in comps:
        cset = set(c)
        for v in c:
            for g in range(1, G.order):
                w = int(K.action[g, v])
                if w in cset:
                    return False, VertexPath(K, tuple(nx.shortest_path(graph, v, w)), g)
    psi = [-1] * K.n_vertices
    for x0 in range(K.n_vertices):
        if psi[x0] != -1:
            continue
        for g in G.elements:
            for y in comps[comp[int(K.action[g, x0])]]:
                psi[y] = g
    return True, SimplicialGMap(K, e_space(G, 0), tuple(psi))


@dataclass(eq=False)
class IndUpperReport:
    complex: GSimplicialComplex
    values: list[int]
    results: list[XindResult] = field(repr=False, default_factory=list)
    truncated: str | None = None

    @property
    def best(self) -> int:
        return min(self.values)

    def is_decreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))


def ind_upper(K: GSimplicialComplex, r_max: int, max_orbits: int | None = MAX_SEARCH_ORBITS,
              max_simplices: int = MAX_SIMPLICES, max_face_poset: int = MAX_FACE_POSET) -> IndUpperReport:
    """u_r = xind F(sd^r K) for r = 0..r_max; each u_r bounds ind K from above.

    From r = 1 on, the max-chain map F(sd^r K) -> F(sd^{r-1} K) composed with the
    previous witness caps the search, so the sequence is decreasing by construction
    and the cap is itself validated.  A guard hit after r = 0 truncates the report.
    """
    F = face_poset(K, max_face_poset)
    res = xind(F, max_orbits=max_orbits)
    report = IndUpperReport(K, [res.value], [res])
    Kr = K
    for r in range(1, r_max + 1):
        try:
            Kr = barycentric_subdivision(Kr, max_simplices)
            Fr = face_poset(Kr, max_face_poset)
            hint = lift_witness(max_chain_map(F, Fr, Kr), res.witness)
            res = xind(Fr, max_orbits=max_orbits, hint=hint)
        except ResourceGuardError as exc:
            report.truncated = f"r={r}: {exc}"
            break
        report.values.append(res.value)
        report.results.append(res)
        F = Fr
    if not report.is_decreasing():
        raise AssertionError(f"subdivision sequence not decreasing: {report.values}")
    return report


def max_chain_map(P: GPoset, FD: GPoset | None = None,
                  D: GSimplicialComplex | None = None) -> PosetGMap:
    """G-map F(Delta(P)) -> P sending a chain to its maximum.

    ``D`` and ``FD`` may be supplied when Delta(P) and its face poset are already built.
    """
    D = order_complex(P) if D is None else D
    FD = face_poset(D) if FD is None else FD
    simp = D.simplices
    out = []
    for chain in simp:
        top = chain[0]
        for x in chain[1:]:
            if P.less[top, x]:
                top = x
        out.append(top)
    return PosetGMap(FD, P, tuple(out))


def faceposet_product_maps(K1: GSimplicialComplex, K2: GSimplicialComplex):
    """phi: F(K1) x F(K2) -> F(K1 ⊠ K2), (A, B) -> A x B, and psi: C -> (pi1 C, pi2 C)."""
    if K1.group != K2.group:
        raise InvalidInputError("complexes over different groups")
    F1, F2 = face_poset(K1), face_poset(K2)
    F12 = product(F1, F2)
    B = boxtimes(K1, K2)
    FB = face_poset(B)
    n2 = K2.n_vertices
    m2 = F2.size
    bidx = B.simplex_index
    phi = [bidx[tuple(sorted(v * n2 + w for v in a for w in b))]
           for a in K1.simplices for b in K2.simplices]
    i1, i2 = K1.simplex_index, K2.simplex_index
    psi = []
    for c in B.simplices:
        pa = tuple(sorted({v // n2 for v in c}))
        pb = tuple(sorted({v % n2 for v in c}))
        psi.append(i1[pa] * m2 + i2[pb])
    f = PosetGMap(F12, FB, tuple(phi))
    g = PosetGMap(FB, F12, tuple(psi))
    validate_gmap(f).raise_if_failed("phi")
    validate_gmap(g).raise_if_failed("psi")
    return f, g


def induced_simplicial_map(f: PosetGMap) -> SimplicialGMap:
    return SimplicialGMap(order_complex(f.source), order_complex(f.target), f.map)


def projection_simplicial_maps(K1: GSimplicialComplex, K2: GSimplicialComplex):
    B = boxtimes(K1, K2)
    n2 = K2.n_vertices
    p1 = SimplicialGMap(B, K1, tuple(v // n2 for v in range(B.n_vertices)))
    p2 = SimplicialGMap(B, K2, tuple(v % n2 for v in range(B.n_vertices)))
    return p1, p2
