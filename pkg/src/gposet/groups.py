"""Finite groups given by multiplication tables.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Every constructor validates the group axioms exhaustively, so a
:class:`FiniteGroup` instance in hand is known to be a group.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidInputError

CATALOG_MAX_ORDER = 24


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    name: str = "G"
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "inverse", _check_axioms(table))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.table, dtype=np.int64).reshape(self.order, self.order)
        arr.setflags(write=False)
        return arr

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, g: int, t: int) -> int:
        x = 0
        for _ in range(t):
            x = self.table[x][g]
        return x

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def to_json(self) -> dict:
        return {"name": self.name, "order": self.order, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        try:
            table = data["table"]
            name = data.get("name", "G")
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInputError(f"group file: missing field ({exc})") from None
        if "order" in data and data["order"] != len(table):
            raise InvalidInputError(
                f"group file: order {data['order']} does not match table size {len(table)}")
        return cls(table, name=name)


def _check_axioms(table) -> tuple[int, ...]:
    n = len(table)
    if n == 0:
        raise InvalidInputError("group axiom violated (shape): empty table")
    if any(len(row) != n for row in table):
        raise InvalidInputError("group axiom violated (shape): table is not square")
    arr = np.asarray(table, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidInputError("group axiom violated (closure): entry outside [0, n)")
    idx = np.arange(n)
    if not (np.array_equal(arr[0], idx) and np.array_equal(arr[:, 0], idx)):
        raise InvalidInputError("group axiom violated (identity): element 0 is not a two-sided identity")
    # (ab)c == a(bc) for every triple, vectorised over c
    left = arr[arr]            # left[a, b, c] = table[table[a][b]][c]
    right = arr[:, arr]        # right[a, b, c] = table[a][table[b][c]]
    if not np.array_equal(left, right):
        a, b, c = np.argwhere(left != right)[0]
        raise InvalidInputError(
            f"group axiom violated (associativity): ({a}*{b})*{c} != {a}*({b}*{c})")
    inverse = []
    for a in range(n):
        hits = np.flatnonzero(arr[a] == 0)
        if len(hits) != 1 or arr[hits[0], a] != 0:
            raise InvalidInputError(f"group axiom violated (inverse): element {a} has no inverse")
        inverse.append(int(hits[0]))
    return tuple(inverse)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False, compare=False)
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self):
        return len(self.elements)

    def is_trivial(self) -> bool:
        return self.elements == (0,)


# --- constructors -----------------------------------------------------------

def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInputError(f"cyclic group needs n >= 1, got {n}")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


def make_direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """Direct product; the pair (a, b) is encoded as ``a*|B| + b``."""
    m = B.order
    table = [[A.table[a1][a2] * m + B.table[b1][b2]
              for a2 in range(A.order) for b2 in range(m)]
             for a1 in range(A.order) for b1 in range(m)]
    return FiniteGroup(table, name=f"{A.name}x{B.name}")


def make_generalized_quaternion(m: int) -> FiniteGroup:
    """Q_m with m = 4k, k >= 2: <a, b | a^k = b^2, a^{2k} = 1, b^-1 a b = a^-1>.

    The element a^i b^j is encoded as ``j*2k + i``.
    """
    if m < 8 or m % 4:
        raise InvalidInputError(f"generalized quaternion order must be 4k with k >= 2, got {m}")
    k = m // 4
    n = 2 * k

    def mul(x, y):
        i, j = x % n, x // n
        c, l = y % n, y // n
        e = i + (c if j == 0 else -c)
        if j + l == 2:
            e += k
        return (j + l) % 2 * n + e % n

    return FiniteGroup([[mul(x, y) for y in range(m)] for x in range(m)], name=f"Q{m}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; r^i s^j is encoded as ``j*n + i``."""
    if n < 1:
        raise InvalidInputError(f"dihedral group needs n >= 1, got {n}")

    def mul(x, y):
        i, j = x % n, x // n
        c, l = y % n, y // n
        e = i + (c if j == 0 else -c)
        return (j + l) % 2 * n + e % n

    return FiniteGroup([[mul(x, y) for y in range(2 * n)] for x in range(2 * n)], name=f"D{2 * n}")


def make_symmetric(n: int) -> FiniteGroup:
    """S_n on lexicographically ordered permutations, (st)(x) = s(t(x))."""
    if not 1 <= n <= 5:
        raise InvalidInputError(f"symmetric group needs 1 <= n <= 5, got {n}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(s[t[x]] for x in range(n))] for t in perms] for s in perms]
    return FiniteGroup(table, name=f"S{n}")


_NAME_RE = re.compile(r"^([ZDQS])(\d+)$")


def group_from_name(name: str, max_order: int = CATALOG_MAX_ORDER) -> FiniteGroup:
    """Build a catalog group: ``Z<n>``, ``Z<a>x<b>`` (also ``Z2xZ2``), ``D<2n>``, ``Q<4k>``, ``S<n>``.

    Orders above ``max_order`` are refused; pass ``max_order=None`` to lift the bound.
    """
    text = name.strip()
    parts = text.split("x")
    if len(parts) > 1:
        factors = [group_from_name(p if p[:1].isalpha() else "Z" + p, max_order=None)
                   for p in parts]
        G = factors[0]
        for F in factors[1:]:
            G = make_direct_product(G, F)
        G = FiniteGroup(G.table, name=text)
    else:
        match = _NAME_RE.match(text)
        if not match:
            raise InvalidInputError(f"unknown group name {name!r}")
        kind, num = match.group(1), int(match.group(2))
        if kind == "Z":
            G = make_cyclic(num)
        elif kind == "D":
            if num % 2:
                raise InvalidInputError(f"dihedral group order must be even, got {name!r}")
            G = make_dihedral(num // 2)
        elif kind == "Q":
            G = make_generalized_quaternion(num)
        else:
            G = make_symmetric(num)
    if max_order is not None and G.order > max_order:
        raise InvalidInputError(f"group {name!r} has order {G.order} > catalog bound {max_order}")
    return G


def catalog(max_order: int = 16) -> list[FiniteGroup]:
    """Every named catalog group of order <= max_order (duplicates up to isomorphism allowed)."""
    names = [f"Z{n}" for n in range(1, max_order + 1)]
    names += [f"Z{a}x{b}" for a in range(2, max_order + 1) for b in range(a, max_order + 1)
              if a * b <= max_order]
    names += ["Z2x2x2", "Z2x2x4", "Z2x2x2x2"]
    names += [f"D{2 * n}" for n in range(2, max_order // 2 + 1)]
    names += [f"Q{4 * k}" for k in range(2, max_order // 4 + 1)]
    names += [f"S{n}" for n in range(3, 6)]
    out = []
    for name in names:
        try:
            out.append(group_from_name(name, max_order=max_order))
        except InvalidInputError:
            continue
    return out


# --- element and subgroup machinery ----------------------------------------

def element_order(G: FiniteGroup, g: int) -> int:
    t, x = 1, g
    while x != 0:
        x = G.table[x][g]
        t += 1
    return t


def subgroup_generated(G: FiniteGroup, S) -> Subgroup:
    elems = {0}
    frontier = [0]
    gens = list(S)
    for g in gens:
        if not 0 <= g < G.order:
            raise InvalidInputError(f"element {g} is not in {G.name}")
    # finite group: closure under multiplication by generators suffices
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.table[x][g]
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return Subgroup(G, tuple(elems))


def cyclic_subgroup(G: FiniteGroup, g: int) -> Subgroup:
    return subgroup_generated(G, [g])


def minimal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All minimal non-trivial subgroups, i.e. the cyclic subgroups of prime order."""
    if G.order < 2:
        raise InvalidInputError("the trivial group has no minimal non-trivial subgroup")
    seen = {}
    for g in range(1, G.order):
        t = element_order(G, g)
        if _is_prime(t):
            H = cyclic_subgroup(G, g)
            seen.setdefault(H.elements, H)
    return sorted(seen.values(), key=lambda H: (H.order, H.elements))


def is_nice(G: FiniteGroup) -> bool:
    return len(minimal_subgroups(G)) == 1


def cyclic_intersection(G: FiniteGroup, g: int, h: int) -> Subgroup:
    A = cyclic_subgroup(G, g)
    B = cyclic_subgroup(G, h)
    return Subgroup(G, tuple(set(A.elements) & set(B.elements)))


def conjugate(G: FiniteGroup, H: Subgroup, K: Subgroup) -> bool:
    """True iff x H x^-1 == K for some x in G."""
    if H.order != K.order:
        return False
    target = set(K.elements)
    t, inv = G.table, G.inverse
    return any({t[t[x][h]][inv[x]] for h in H.elements} == target for x in G.elements)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def describe(G: FiniteGroup) -> dict:
    """Summary used by ``gposet group info``."""
    orders = [element_order(G, g) for g in G.elements]
    info = {
        "name": G.name,
        "order": G.order,
        "abelian": bool(np.array_equal(G.array, G.array.T)),
        "element_orders": orders,
        "inverse": list(G.inverse),
    }
    if G.order >= 2:
        mins = minimal_subgroups(G)
        info["minimal_subgroups"] = [list(H.elements) for H in mins]
        info["nice"] = len(mins) == 1
    return info
