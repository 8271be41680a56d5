"""Finite groups as dense multiplication tables.

Elements are the integers ``0 .. order-1``.  Every group built by this package
has identity ``0``; :func:`validate_group_table` accepts any identity position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotClosed,
    NotNormal,
    SizeLimitExceeded,
    ValidationError,
)

Perm = tuple  # a permutation of element indices, stored as a tuple of ints

#: largest group whose automorphism group we are willing to enumerate
AUT_ORDER_BOUND = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: tuple
    identity: int
    inverse: tuple
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.order == other.order
            and self.identity == other.identity
            and self.table == other.table
        )

    def __hash__(self):
        h = self._cache.get("hash")
        if h is None:
            h = hash((self.order, self.identity, self.table))
            self._cache["hash"] = h
        return h

    def __len__(self):
        return self.order

    @property
    def arr(self) -> np.ndarray:
        """The table as an integer array (cached)."""
        out = self._cache.get("arr")
        if out is None:
            out = self._cache["arr"] = np.array(self.table, dtype=np.int64)
        return out

    @property
    def inv_arr(self) -> np.ndarray:
        out = self._cache.get("inv_arr")
        if out is None:
            out = self._cache["inv_arr"] = np.array(self.inverse, dtype=np.int64)
        return out

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, *xs: int) -> int:
        r = self.identity
        t = self.table
        for x in xs:
            r = t[r][x]
        return r

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        t = self.table
        return t[t[g][x]][self.inverse[g]]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse[x], -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][x]
        return r

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        from math import lcm

        e = 1
        for x in range(self.order):
            e = lcm(e, self.element_order(x))
        return e

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def generate(self, gens: Iterable[int]) -> tuple:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        t = self.table
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = t[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def generators(self) -> tuple:
        """Greedy generating set: repeatedly add the smallest element not yet reached."""
        cached = self._cache.get("generators")
        if cached is not None:
            return cached
        gens: list[int] = []
        reached = {self.identity}
        for x in range(self.order):
            if x not in reached:
                gens.append(x)
                reached = set(self.generate(gens))
        out = tuple(gens)
        self._cache["generators"] = out
        return out

    def raw(self) -> list:
        return [list(row) for row in self.table]


def _as_table(order: int, table) -> list:
    arr = np.asarray(table)
    if arr.shape != (order, order):
        raise ValidationError(f"table must be {order}x{order}, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValidationError("table entries must be integers")
    return arr


def validate_group_table(order: int, table, identity: int | None = None, label: str = "") -> FiniteGroup:
    """Check a raw multiplication table and return it as a :class:`FiniteGroup`."""
    if order < 1:
        raise ValidationError("order must be positive")
    arr = _as_table(order, table)
    bad = np.argwhere((arr < 0) | (arr >= order))
    if len(bad):
        a, b = (int(v) for v in bad[0])
        raise NotClosed(f"entry ({a},{b}) = {int(arr[a, b])} outside [0,{order})", witness=[a, b])

    cols = np.arange(order)
    candidates = [
        e for e in range(order) if np.array_equal(arr[e], cols) and np.array_equal(arr[:, e], cols)
    ]
    if not candidates:
        raise NoIdentity("no two-sided identity element")
    e = candidates[0]
    if identity is not None and identity != e:
        raise NoIdentity(f"element {identity} is not a two-sided identity", witness=identity)

    inverse = []
    for x in range(order):
        left = np.nonzero(arr[x] == e)[0]
        y = next((int(y) for y in left if arr[y, x] == e), None)
        if y is None:
            raise NoInverse(f"element {x} has no two-sided inverse", witness=x)
        inverse.append(y)

    # (ab)c == a(bc), vectorised one ``a`` at a time
    for a in range(order):
        lhs = arr[arr[a]]  # lhs[b, c] = (ab)c
        rhs = arr[a][arr]  # rhs[b, c] = a(bc)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            b, c = (int(v) for v in diff[0])
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=[a, b, c])

    return FiniteGroup(order, tuple(tuple(int(v) for v in row) for row in arr), e, tuple(inverse), label)


def group_from_table(table, label: str = "", check: bool = False) -> FiniteGroup:
    """Wrap a table produced by a trusted construction (identity must be 0)."""
    order = len(table)
    if check:
        return validate_group_table(order, table, label=label)
    arr = np.asarray(table, dtype=np.int64)
    t = tuple(map(tuple, arr.tolist()))
    inverse = tuple(np.argmax(arr == 0, axis=1).tolist())
    G = FiniteGroup(order, t, 0, inverse, label)
    G._cache["arr"] = arr
    return G


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.order

    def kernel(self) -> tuple:
        e = self.target.identity
        return tuple(x for x in range(self.source.order) if self.map[x] == e)

    def image(self) -> tuple:
        return tuple(sorted(set(self.map)))


def hom_violation(source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int]):
    """First pair ``(x, y)`` with ``m(xy) != m(x)m(y)``, or None."""
    st, tt = source.table, target.table
    for x in range(source.order):
        mx = mapping[x]
        row = st[x]
        trow = tt[mx]
        for y in range(source.order):
            if mapping[row[y]] != trow[mapping[y]]:
                return (x, y)
    return None


def make_hom(source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int]) -> GroupHom:
    mapping = tuple(int(v) for v in mapping)
    if len(mapping) != source.order or any(not 0 <= v < target.order for v in mapping):
        raise NotAHomomorphism("map has wrong length or leaves the target")
    bad = hom_violation(source, target, mapping)
    if bad is not None:
        raise NotAHomomorphism(f"m({bad[0]}*{bad[1]}) != m({bad[0]})*m({bad[1]})", witness=list(bad))
    return GroupHom(source, target, mapping)


def compose_perm(a: Perm, b: Perm) -> Perm:
    """``a o b``: apply ``b`` first."""
    return tuple(a[x] for x in b)


def invert_perm(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def is_automorphism(G: FiniteGroup, perm: Sequence[int]) -> bool:
    return sorted(perm) == list(range(G.order)) and hom_violation(G, G, perm) is None


def inner_automorphism(G: FiniteGroup, g: int) -> Perm:
    return tuple(G.conj(g, x) for x in range(G.order))


# --------------------------------------------------------------------------
# automorphism tower


@dataclass(frozen=True, eq=False)
class AutTower:
    group: FiniteGroup
    aut_group: FiniteGroup
    aut_elems: tuple  # permutations, lexicographically sorted; index 0 is the identity
    aut_index: dict
    inn_indices: tuple
    inn_of: tuple  # g -> index of int(g)
    inner_preimages: dict  # aut index -> tuple of g with int(g) = aut
    out_group: FiniteGroup
    coset_of: tuple  # aut index -> out index
    out_lift: tuple  # out index -> smallest aut index in that coset

    def apply(self, a: int, x: int) -> int:
        return self.aut_elems[a][x]

    def compose(self, a: int, b: int) -> int:
        return self.aut_group.table[a][b]

    def index(self, perm: Sequence[int]) -> int:
        return self.aut_index[tuple(perm)]

    def coset_members(self, o: int) -> tuple:
        return tuple(a for a in range(self.aut_group.order) if self.coset_of[a] == o)


def _automorphisms_backtrack(G: FiniteGroup) -> list:
    gens = G.generators()
    orders = [G.element_order(x) for x in range(G.order)]
    by_order: dict[int, list[int]] = {}
    for x in range(G.order):
        by_order.setdefault(orders[x], []).append(x)
    t = G.table
    results = []

    def extend(images):
        # closure of the partial assignment; None on conflict
        m = {G.identity: G.identity}
        frontier = [G.identity]
        k = len(images)
        while frontier:
            nxt = []
            for x in frontier:
                mx = m[x]
                for i in range(k):
                    y = t[x][gens[i]]
                    my = t[mx][images[i]]
                    old = m.get(y)
                    if old is None:
                        m[y] = my
                        nxt.append(y)
                    elif old != my:
                        return None
            frontier = nxt
        if len(set(m.values())) != len(m):
            return None
        return m

    def rec(images):
        if extend(images) is None:
            return
        if len(images) == len(gens):
            m = extend(images)
            if len(m) == G.order:
                results.append(tuple(m[x] for x in range(G.order)))
            return
        for cand in by_order[orders[gens[len(images)]]]:
            rec(images + [cand])

    rec([])
    return results


def _automorphisms_bruteforce(G: FiniteGroup) -> list:
    others = [x for x in range(G.order) if x != G.identity]
    out = []
    for p in permutations(others):
        perm = [0] * G.order
        perm[G.identity] = G.identity
        for x, y in zip(others, p):
            perm[x] = y
        if hom_violation(G, G, perm) is None:
            out.append(tuple(perm))
    return out


def automorphisms(G: FiniteGroup, method: str = "auto") -> list:
    """All automorphisms of ``G`` as permutation tuples, lexicographically sorted."""
    if method == "bruteforce" or (method == "auto" and G.order < 8):
        auts = _automorphisms_bruteforce(G)
    else:
        auts = _automorphisms_backtrack(G)
    return sorted(auts)


def automorphism_tower(G: FiniteGroup, bound: int = AUT_ORDER_BOUND) -> AutTower:
    cached = G._cache.get("tower")
    if cached is not None:
        return cached
    if G.order > bound:
        raise SizeLimitExceeded(f"|G| = {G.order} exceeds automorphism bound {bound}", witness=G.order)
    auts = automorphisms(G)
    index = {a: i for i, a in enumerate(auts)}
    table = [[index[compose_perm(a, b)] for b in auts] for a in auts]
    aut_group = group_from_table(table, label=f"Aut({G.label})")

    inn_of = tuple(index[inner_automorphism(G, g)] for g in range(G.order))
    pre: dict[int, list[int]] = {}
    for g, a in enumerate(inn_of):
        pre.setdefault(a, []).append(g)
    inner_preimages = {a: tuple(v) for a, v in pre.items()}
    inn = tuple(sorted(set(inn_of)))
    out_group, proj = quotient_by_normal(aut_group, inn)
    coset_of = proj.map
    out_lift = [None] * out_group.order
    for a in range(len(auts)):
        o = coset_of[a]
        if out_lift[o] is None:
            out_lift[o] = a
    out_group = FiniteGroup(out_group.order, out_group.table, 0, out_group.inverse, f"Out({G.label})")
    tower = AutTower(
        G, aut_group, tuple(auts), index, inn, inn_of, inner_preimages, out_group, coset_of, tuple(out_lift)
    )
    G._cache["tower"] = tower
    return tower


# --------------------------------------------------------------------------
# subgroups, centers, quotients


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple  # sorted element indices of the parent
    group: FiniteGroup  # the subgroup relabelled 0..k-1 in the order of ``elements``
    embedding: GroupHom

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.position

    @property
    def position(self) -> dict:
        return self.group._cache.setdefault("position", {x: i for i, x in enumerate(self.elements)})


def subgroup(G: FiniteGroup, elements: Iterable[int], label: str = "") -> Subgroup:
    elems = tuple(sorted(set(int(x) for x in elements)))
    known = G._cache.setdefault("subgroups", {})
    hit = known.get((elems, label))
    if hit is not None:
        return hit
    pos = {x: i for i, x in enumerate(elems)}
    if G.identity not in pos:
        raise ValidationError("subgroup must contain the identity")
    table = []
    for a in elems:
        row = []
        for b in elems:
            c = G.table[a][b]
            if c not in pos:
                raise NotClosed(f"{a}*{b} = {c} leaves the subset", witness=[a, b])
            row.append(pos[c])
        table.append(row)
    # re-base so that the identity is index 0 of the subgroup table when possible
    e = pos[G.identity]
    inverse = tuple(pos[G.inverse[x]] for x in elems)
    sub = FiniteGroup(len(elems), tuple(tuple(r) for r in table), e, inverse, label)
    sub._cache["position"] = pos
    out = known[(elems, label)] = Subgroup(G, elems, sub, GroupHom(sub, G, elems))
    return out


def center(G: FiniteGroup) -> Subgroup:
    cached = G._cache.get("center")
    if cached is not None:
        return cached
    t = G.table
    zs = [z for z in range(G.order) if all(t[z][g] == t[g][z] for g in range(G.order))]
    Z = subgroup(G, zs, label=f"Z({G.label})")
    G._cache["center"] = Z
    return Z


def is_normal(G: FiniteGroup, N: Iterable[int]):
    """Return None if normal, else a witness ``(g, n)`` with ``g n g^-1`` outside N."""
    Nset = set(N)
    for g in range(G.order):
        for n in sorted(Nset):
            if G.conj(g, n) not in Nset:
                return (g, n)
    return None


def quotient_by_normal(G: FiniteGroup, N: Iterable[int] | Subgroup, label: str = ""):
    """Coset group ``G/N`` with cosets ordered by their smallest element."""
    elems = N.elements if isinstance(N, Subgroup) else tuple(sorted(set(N)))
    if set(G.generate(elems)) != set(elems):
        raise ValidationError("N is not a subgroup")
    bad = is_normal(G, elems)
    if bad is not None:
        raise NotNormal(f"{bad[0]} * {bad[1]} * {bad[0]}^-1 not in N", witness=list(bad))
    coset_of = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] == -1:
            idx = len(reps)
            reps.append(g)
            for n in elems:
                coset_of[G.table[g][n]] = idx
    table = [[coset_of[G.table[a][b]] for b in reps] for a in reps]
    Q = group_from_table(table, label=label or f"{G.label}/N")
    return Q, GroupHom(G, Q, tuple(coset_of))


# --------------------------------------------------------------------------
# products


@dataclass(frozen=True, eq=False)
class SemidirectProduct:
    group: FiniteGroup
    N: FiniteGroup
    Q: FiniteGroup
    embed_n: GroupHom
    embed_q: GroupHom
    proj_q: GroupHom

    def pair(self, x: int) -> tuple:
        return x % self.N.order, x // self.N.order

    def index(self, n: int, q: int) -> int:
        return q * self.N.order + n


def semidirect_product(N: FiniteGroup, Q: FiniteGroup, act: Sequence[Sequence[int]], label: str = "") -> SemidirectProduct:
    """``N x| Q`` with law ``(n1,q1)(n2,q2) = (n1 * act[q1](n2), q1 q2)``.

    ``act[q]`` is the automorphism of N (as a permutation) by which q acts.
    Element ``(n, q)`` has index ``q*|N| + n``.
    """
    if N.identity != 0 or Q.identity != 0:
        raise ValidationError("semidirect_product expects identity 0 in both factors")
    act = [tuple(a) for a in act]
    if len(act) != Q.order:
        raise NotAHomomorphism("one automorphism per element of Q is required")
    for q, a in enumerate(act):
        if not is_automorphism(N, a):
            raise NotAHomomorphism(f"act[{q}] is not an automorphism of N", witness=[q])
    for q1 in range(Q.order):
        for q2 in range(Q.order):
            if act[Q.table[q1][q2]] != compose_perm(act[q1], act[q2]):
                raise NotAHomomorphism(f"act is not a homomorphism at ({q1},{q2})", witness=[q1, q2])
    n, m = N.order, Q.order
    Nt, Qt = N.table, Q.table
    table = []
    for x in range(n * m):
        n1, q1 = x % n, x // n
        a = act[q1]
        row = []
        for y in range(n * m):
            n2, q2 = y % n, y // n
            row.append(Qt[q1][q2] * n + Nt[n1][a[n2]])
        table.append(row)
    P = group_from_table(table, label=label or f"{N.label}x|{Q.label}")
    return SemidirectProduct(
        P,
        N,
        Q,
        GroupHom(N, P, tuple(range(n))),
        GroupHom(Q, P, tuple(q * n for q in range(m))),
        GroupHom(P, Q, tuple(x // n for x in range(n * m))),
    )


def direct_product(A: FiniteGroup, B: FiniteGroup, label: str = "") -> FiniteGroup:
    """Index of ``(a, b)`` is ``b*|A| + a`` (same layout as the semidirect product)."""
    ident = tuple(range(A.order))
    return semidirect_product(A, B, [ident] * B.order, label=label or f"{A.label}x{B.label}").group


# --------------------------------------------------------------------------
# standard groups


def cyclic(n: int) -> FiniteGroup:
    return group_from_table([[(a + b) % n for b in range(n)] for a in range(n)], label=f"Z{n}")


def trivial_group() -> FiniteGroup:
    return group_from_table([[0]], label="1")


def permutation_group(gens: Sequence[Sequence[int]], label: str = "") -> FiniteGroup:
    """Group generated by permutations of ``0..d-1``; elements sorted lexicographically.

    Product is composition ``(p*q)(i) = p(q(i))``.
    """
    gens = [tuple(g) for g in gens]
    d = len(gens[0])
    ident = tuple(range(d))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perm(p, g)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    ordered = sorted(elems)
    pos = {p: i for i, p in enumerate(ordered)}
    table = [[pos[compose_perm(p, q)] for q in ordered] for p in ordered]
    return group_from_table(table, label=label)


def symmetric3() -> FiniteGroup:
    return permutation_group([(1, 2, 0), (1, 0, 2)], label="S3")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n, as ``Z/n x| Z/2`` with inversion."""
    N = cyclic(n)
    inv = tuple((-x) % n for x in range(n))
    return semidirect_product(N, cyclic(2), [tuple(range(n)), inv], label=f"D{n}").group


def quaternion() -> FiniteGroup:
    # elements (sign, unit) with unit in 1,i,j,k; index = 4*sign + unit
    mult = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    table = []
    for x in range(8):
        s1, u1 = divmod(x, 4)
        row = []
        for y in range(8):
            s2, u2 = divmod(y, 4)
            s, u = mult[(u1, u2)]
            row.append(4 * ((s1 + s2 + s) % 2) + u)
        table.append(row)
    return group_from_table(table, label="Q8")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    G = cyclic(p)
    out = G
    for _ in range(k - 1):
        out = direct_product(out, G)
    return FiniteGroup(out.order, out.table, 0, out.inverse, f"Z{p}^{k}")


def relabel(G: FiniteGroup, label: str) -> FiniteGroup:
    return FiniteGroup(G.order, G.table, G.identity, G.inverse, label)


# --------------------------------------------------------------------------
# isomorphism (brute force, suite sizes only)


def find_isomorphism(A: FiniteGroup, B: FiniteGroup):
    """An isomorphism ``A -> B`` as a tuple, or None."""
    if A.order != B.order:
        return None
    ordA = sorted(A.element_order(x) for x in range(A.order))
    ordB = sorted(B.element_order(x) for x in range(B.order))
    if ordA != ordB:
        return None
    gens = A.generators()
    border: dict[int, list[int]] = {}
    for y in range(B.order):
        border.setdefault(B.element_order(y), []).append(y)
    choices = [border[A.element_order(g)] for g in gens]
    for imgs in product(*choices):
        m = {A.identity: B.identity}
        frontier = [A.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, h in zip(gens, imgs):
                    y = A.table[x][g]
                    my = B.table[m[x]][h]
                    if y in m:
                        if m[y] != my:
                            ok = False
                            break
                    else:
                        m[y] = my
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and len(m) == A.order and len(set(m.values())) == B.order:
            return tuple(m[x] for x in range(A.order))
    return None


def are_isomorphic(A: FiniteGroup, B: FiniteGroup) -> bool:
    return find_isomorphism(A, B) is not None
