"""Nonabelian 2-cocycles on F_Gamma and the set H^2(F, G, kappa).

Conventions (used throughout the package):

* ``f[x]`` is an automorphism of G (an index into ``tower.aut_elems``), ``g[x, y]``
  an element of G, stored flat as ``g[x*n + y]`` with ``n = |F_Gamma|``;
* relations:  ``f_x mod Inn = kappa(x)``,
  ``f_xy = int(g_xy) o f_x o f_y``,
  ``g_{x,yz} f_x(g_yz) = g_{xy,z} g_{x,y}``;
* a map ``c: F_Gamma -> G`` acts by ``f'_x = int(c_x) o f_x`` and
  ``g'_xy = c_xy g_xy f_x(c_y)^-1 c_x^-1``.

A cocycle is *normalized* when ``g[1, y] = g[x, 1] = 1`` (then ``f_1 = id``).
Enumeration works in a smaller gauge: fix a BFS spanning tree of the Cayley
graph of F_Gamma and additionally require ``g[t, p] = 1`` on every tree edge
``y = t p``.  Any normalized cocycle is equivalent to such a *tree-normal* one,
and tree-normal cocycles in one class differ by a coboundary determined by
its values on the generators, so every class is a small explicit orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from ._search import TableSearch, spanning_tree
from .errors import (
    IncompatibleKernels,
    NotNormalized,
    SizeLimitExceeded,
    ValidationError,
    Violates3,
    Violates4,
    Violates5,
)
from .galois_model import OuterAction, center_restriction, restricted_kernel
from .groups import invert_perm

#: default cap on the number of tree-normal cocycles visited by one enumeration
COCYCLE_BOUND = 2_000_000


@dataclass(frozen=True, eq=False)
class TwoCocycle:
    kappa: OuterAction
    f: tuple
    g: tuple

    @property
    def n(self) -> int:
        return len(self.f)

    def gval(self, x: int, y: int) -> int:
        return self.g[x * len(self.f) + y]

    def key(self) -> tuple:
        return self.f + self.g

    def __eq__(self, other):
        return isinstance(other, TwoCocycle) and self.f == other.f and self.g == other.g and self.kappa == other.kappa

    def __hash__(self):
        return hash((self.f, self.g))

    def is_normalized(self) -> bool:
        n, e = self.n, self.kappa.G.G.identity
        return all(self.g[y] == e and self.g[y * n] == e for y in range(n))

    def is_restricted_normal(self) -> bool:
        """``f_(1,s) = phi_s`` and ``g`` trivial on ``gamma_F(Gamma)^2``."""
        fg = self.kappa.fgamma
        n = self.n
        phi = self.kappa.G.phi_index
        e = self.kappa.G.G.identity
        gam = fg.gamma_f.map
        for s, x in enumerate(gam):
            if self.f[x] != phi[s]:
                return False
            for y in gam:
                if self.g[x * n + y] != e:
                    return False
        return self.is_normalized()

    def g_image(self) -> tuple:
        return tuple(sorted(set(self.g)))


Coboundary = tuple  # c[x] in G for x in F_Gamma


def check_cocycle(kappa: OuterAction, f: Sequence[int], g) -> TwoCocycle:
    """Validate ``(f, g)``; ``g`` may be flat or an ``n x n`` nested sequence."""
    X = kappa.fgamma.group
    n = X.order
    f = tuple(int(v) for v in f)
    if g and isinstance(g[0], (list, tuple)):
        g = tuple(int(v) for row in g for v in row)
    else:
        g = tuple(int(v) for v in g)
    if len(f) != n or len(g) != n * n:
        raise ValidationError(f"f needs {n} entries and g needs {n * n}")
    G = kappa.G.G
    T = kappa.tower
    if any(not 0 <= a < T.aut_group.order for a in f) or any(not 0 <= v < G.order for v in g):
        raise ValidationError("cocycle values out of range")
    fg = kappa.fgamma
    phi = kappa.G.phi_index
    Ainv = T.aut_group.inverse
    for x in range(n):
        fx, s = fg.pair(x)
        if T.coset_of[T.compose(f[x], Ainv[phi[s]])] != kappa.kappa_bar[fx]:
            raise Violates3(f"f at {x} does not lift kappa", witness=[x])
    Xt, Gt = X.table, G.table
    inn = T.inn_of
    for x in range(n):
        for y in range(n):
            if f[Xt[x][y]] != T.compose(inn[g[x * n + y]], T.compose(f[x], f[y])):
                raise Violates4(f"f_xy != int(g_xy) f_x f_y at ({x},{y})", witness=[x, y])
    aut = T.aut_elems
    for x in range(n):
        ax = aut[f[x]]
        for y in range(n):
            xy = Xt[x][y]
            gxy = g[x * n + y]
            for z in range(n):
                lhs = Gt[g[x * n + Xt[y][z]]][ax[g[y * n + z]]]
                rhs = Gt[g[xy * n + z]][gxy]
                if lhs != rhs:
                    raise Violates5(f"cocycle identity fails at ({x},{y},{z})", witness=[x, y, z])
    return TwoCocycle(kappa, f, g)


def coboundary_act(c: Sequence[int], w: TwoCocycle, validate: bool = True) -> TwoCocycle:
    kappa = w.kappa
    X = kappa.fgamma.group
    n = X.order
    G = kappa.G.G
    T = kappa.tower
    Gt, Gi, Xt = G.table, G.inverse, X.table
    aut = T.aut_elems
    f = tuple(T.compose(T.inn_of[c[x]], w.f[x]) for x in range(n))
    g = []
    for x in range(n):
        ax = aut[w.f[x]]
        cxi = Gi[c[x]]
        for y in range(n):
            v = Gt[c[Xt[x][y]]][w.g[x * n + y]]
            v = Gt[Gt[v][Gi[ax[c[y]]]]][cxi]
            g.append(v)
    if validate:
        return check_cocycle(kappa, f, g)
    return TwoCocycle(kappa, f, tuple(g))


def compose_coboundaries(G, c2: Sequence[int], c1: Sequence[int]) -> tuple:
    """The map acting as ``c2`` after ``c1``: pointwise product ``c2_x c1_x``."""
    return tuple(G.table[a][b] for a, b in zip(c2, c1))


def normalize(w: TwoCocycle) -> tuple:
    """Equivalent normalized cocycle and the coboundary used (supported at the identity)."""
    if w.is_normalized():
        return w, tuple([w.kappa.G.G.identity] * w.n)
    c = [w.kappa.G.G.identity] * w.n
    c[w.kappa.fgamma.group.identity] = w.g[0]
    c = tuple(c)
    return coboundary_act(c, w), c


def trivial_cocycle(kappa: OuterAction, f: Sequence[int]) -> TwoCocycle:
    n = kappa.fgamma.group.order
    return check_cocycle(kappa, f, [kappa.G.G.identity] * (n * n))


class CocycleSpace:
    """Gauge-fixing data and searches for one outer action."""

    def __init__(self, kappa: OuterAction):
        self.kappa = kappa
        X = kappa.fgamma.group
        self.X = X
        self.n = X.order
        self.G = kappa.G.G
        self.T = kappa.tower
        self.gens, self.parent, self.gen, self.bfs = spanning_tree(X)
        n = self.n
        self.tree_cells = tuple(
            self.gen[y] * n + self.parent[y] for y in self.bfs if self.parent[y] != X.identity
        )
        self._aut_inv = self.T.aut_group.inverse
        eqs = []
        Xt = X.table
        for x in range(1, n):
            for y in range(1, n):
                for z in range(1, n):
                    eqs.append((x * n + Xt[y][z], y * n + z, Xt[x][y] * n + z, x * n + y, x))
        self.equations = eqs
        gen_rows = [t * n + z for t in self.gens for z in self.bfs]
        rest = [x * n + y for x in range(1, n) for y in range(1, n)]
        seen = set()
        self.cell_order = tuple(c for c in gen_rows + rest if not (c in seen or seen.add(c)))

    # -- f along the tree --------------------------------------------------
    def f_choices(self) -> list:
        """For each generator, the automorphisms lifting kappa there."""
        T = self.T
        lift = self.kappa.lift
        return [sorted({T.compose(a, lift[t]) for a in T.inn_indices}) for t in self.gens]

    def extend_f(self, f_gens: Sequence[int]) -> list:
        f = [0] * self.n
        for t, a in zip(self.gens, f_gens):
            f[t] = a
        for y in self.bfs:
            p = self.parent[y]
            if p != self.X.identity:
                f[y] = self.T.compose(f[self.gen[y]], f[p])
        return f

    def g_domains(self, f: Sequence[int]):
        T, n = self.T, self.n
        Xt = self.X.table
        Ainv = self._aut_inv
        doms: list = [None] * (n * n)
        for x in range(1, n):
            for y in range(1, n):
                alpha = T.compose(f[Xt[x][y]], Ainv[T.compose(f[x], f[y])])
                pre = T.inner_preimages.get(alpha)
                if pre is None:
                    return None
                doms[x * n + y] = pre
        return doms

    # -- enumeration -------------------------------------------------------
    def tree_normal_cocycles(self, limit: int | None = COCYCLE_BOUND):
        """Yield ``(f, g)`` for every tree-normal cocycle."""
        n = self.n
        e = self.G.identity
        Gt = self.G.table
        aut = self.T.aut_elems
        fixed_base = {}
        for x in range(n):
            fixed_base[x] = e
            fixed_base[x * n] = e
        for c in self.tree_cells:
            fixed_base[c] = e
        produced = 0
        for f_gens in product(*self.f_choices()):
            f = self.extend_f(f_gens)
            doms = self.g_domains(f)
            if doms is None:
                continue
            if any(e not in doms[c] for c in self.tree_cells):
                continue

            def check(vals, eq, f=f):
                return Gt[vals[eq[0]]][aut[f[eq[4]]][vals[eq[1]]]] == Gt[vals[eq[2]]][vals[eq[3]]]

            search = TableSearch(n * n, doms, fixed_base, self.equations, check, self.cell_order)
            for g in search.solutions():
                produced += 1
                if limit is not None and produced > limit:
                    raise SizeLimitExceeded(
                        f"more than {limit} tree-normal cocycles for this kernel", witness=limit
                    )
                yield tuple(f), g

    def residual_gauges(self, f: Sequence[int]):
        """Coboundaries preserving tree-normal form, one per choice of values on the generators."""
        Gt = self.G.table
        aut = self.T.aut_elems
        e = self.G.identity
        for cg in product(range(self.G.order), repeat=len(self.gens)):
            c = [e] * self.n
            for t, v in zip(self.gens, cg):
                c[t] = v
            for y in self.bfs:
                p = self.parent[y]
                if p != self.X.identity:
                    t = self.gen[y]
                    c[y] = Gt[c[t]][aut[f[t]][c[p]]]
            yield tuple(c)

    def act(self, c, f, g) -> tuple:
        n = self.n
        T = self.T
        Gt, Gi, Xt = self.G.table, self.G.inverse, self.X.table
        aut = T.aut_elems
        f2 = tuple(T.compose(T.inn_of[c[x]], f[x]) for x in range(n))
        g2 = [0] * (n * n)
        for x in range(n):
            ax = aut[f[x]]
            cxi = Gi[c[x]]
            row = Xt[x]
            base = x * n
            for y in range(n):
                g2[base + y] = Gt[Gt[Gt[c[row[y]]][g[base + y]]][Gi[ax[c[y]]]]][cxi]
        return f2, tuple(g2)

    def to_tree_normal(self, f, g) -> tuple:
        """Coboundary taking a normalized cocycle to tree-normal form (trivial on generators)."""
        n = self.n
        Gt, Gi = self.G.table, self.G.inverse
        aut = self.T.aut_elems
        c = [self.G.identity] * n
        for y in self.bfs:
            p = self.parent[y]
            if p != self.X.identity:
                t = self.gen[y]
                c[y] = Gt[Gt[c[t]][aut[f[t]][c[p]]]][Gi[g[t * n + p]]]
        return tuple(c)

    def find_coboundary(self, w1: TwoCocycle, w2: TwoCocycle):
        """A map ``c`` with ``c . w1 = w2`` (both normalized), or None."""
        if not (w1.is_normalized() and w2.is_normalized()):
            raise NotNormalized("find_coboundary expects normalized cocycles")
        n = self.n
        T = self.T
        Gt, Gi = self.G.table, self.G.inverse
        aut = T.aut_elems
        Ainv = self._aut_inv
        f1, g1, f2, g2 = w1.f, w1.g, w2.f, w2.g
        choices = []
        for t in self.gens:
            pre = T.inner_preimages.get(T.compose(f2[t], Ainv[f1[t]]))
            if pre is None:
                return None
            choices.append(pre)
        for cg in product(*choices):
            c = [self.G.identity] * n
            for t, v in zip(self.gens, cg):
                c[t] = v
            for y in self.bfs:
                p = self.parent[y]
                if p != self.X.identity:
                    t = self.gen[y]
                    c[y] = Gt[Gt[Gt[g2[t * n + p]][c[t]]][aut[f1[t]][c[p]]]][Gi[g1[t * n + p]]]
            c = tuple(c)
            if self.act(c, f1, g1) == (f2, g2):
                return c
        return None

    def hom_lifts(self) -> list:
        """Every homomorphism ``F_Gamma -> Aut(G)`` lifting kappa (the f of neutral cocycles)."""
        out = []
        T, Xt = self.T, self.X.table
        for f_gens in product(*self.f_choices()):
            f = self.extend_f(f_gens)
            if all(f[Xt[x][y]] == T.compose(f[x], f[y]) for x in range(self.n) for y in range(self.n)):
                out.append(tuple(f))
        return out

    def center_one_cocycles(self) -> int:
        """``|Z^1(F_Gamma, Z)|`` for the induced action on the center (brute force on generators)."""
        ck = center_restriction(self.kappa)
        Z = ck.Z.group
        act = ck.action
        Zt = Z.table
        count = 0
        for cg in product(range(Z.order), repeat=len(self.gens)):
            c = [Z.identity] * self.n
            for t, v in zip(self.gens, cg):
                c[t] = v
            for y in self.bfs:
                p = self.parent[y]
                if p != self.X.identity:
                    t = self.gen[y]
                    c[y] = Zt[c[t]][act[t][c[p]]]
            Xt = self.X.table
            if all(
                c[Xt[x][y]] == Zt[c[x]][act[x][c[y]]] for x in range(self.n) for y in range(self.n)
            ):
                count += 1
        return count


@dataclass(frozen=True, eq=False)
class H2Class:
    representative: TwoCocycle
    orbit_size: int
    neutral: bool
    index: int

    @property
    def kappa(self) -> OuterAction:
        return self.representative.kappa


class H2Set:
    """All classes of H^2(F, G, kappa), canonically ordered, with a cocycle -> class lookup.

    Two enumeration methods:

    * ``"orbits"``: backtracking over tree-normal cocycles, merged into orbits
      under the residual gauge; the representative of a class is its least
      tree-normal member.  Works for every G.
    * ``"linear"``: for abelian G the classes are the elements of the abelian
      group H^2(F_Gamma, G) computed by :mod:`abelian`; classes are ordered by
      their coordinates and represented by the matching combination of fixed
      generating cocycles.  Classes are materialized lazily.
    """

    def __init__(self, kappa: OuterAction, method: str, space: CocycleSpace, z1_order: int):
        self.kappa = kappa
        self.method = method
        self.space = space
        self.z1_order = z1_order
        n = space.n
        self.orbit_size = space.G.order ** (n - 1) // z1_order
        self._classes: dict = {}
        self._cache: dict = {}

    # filled by the enumeration routines
    members: dict
    reps: list
    neutral_set: set
    coh: object
    tree_normal_count: int

    def __len__(self):
        return self._len

    def __iter__(self):
        return (self[i] for i in range(self._len))

    def __getitem__(self, i: int) -> H2Class:
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        out = self._classes.get(i)
        if out is None:
            f, g = self._rep(i)
            out = H2Class(TwoCocycle(self.kappa, f, g), self.orbit_size, i in self.neutral_set, i)
            self._classes[i] = out
        return out

    @property
    def classes(self) -> list:
        return list(self)

    def _rep(self, i: int) -> tuple:
        n = self.space.n
        if self.method == "orbits":
            key = self.reps[i]
            return key[:n], key[n:]
        coords = self.coords_of(i)
        g = self.coh.cocycle(coords)
        return tuple(self.kappa.lift), tuple(int(v) for v in g.reshape(-1))

    # coordinates (linear method only)
    def coords_of(self, i: int) -> tuple:
        out = []
        for d in reversed(self.coh.invariants):
            i, r = divmod(i, d)
            out.append(r)
        return tuple(reversed(out))

    def index_of(self, coords) -> int:
        i = 0
        for c, d in zip(coords, self.coh.invariants):
            i = i * d + int(c) % d
        return i

    def classify(self, w: TwoCocycle) -> int:
        w, _ = normalize(w)
        if self.method == "linear":
            if w.f != tuple(self.kappa.lift):
                raise ValidationError("f does not match the action on an abelian kernel")
            g = np.asarray(w.g, dtype=np.int64).reshape(self.space.n, self.space.n)
            return self.index_of(self.coh.classify(g))
        c = self.space.to_tree_normal(w.f, w.g)
        f, g = self.space.act(c, w.f, w.g)
        idx = self.members.get(f + g)
        if idx is None:
            raise ValidationError("cocycle does not belong to any enumerated class")
        return idx

    def classify_g_batch(self, G: np.ndarray) -> np.ndarray:
        """Class indices for a batch of normalized g-tables (linear method, f = the action)."""
        coords = self.coh.classify_batch(np.asarray(G).reshape(-1, self.space.n, self.space.n))
        idx = np.zeros(coords.shape[0], dtype=np.int64)
        for j, d in enumerate(self.coh.invariants):
            idx = idx * d + coords[:, j]
        return idx

    def class_of(self, w: TwoCocycle) -> H2Class:
        return self[self.classify(w)]

    @property
    def neutral_indices(self) -> tuple:
        return tuple(sorted(self.neutral_set))

    def base_point(self) -> H2Class:
        """The class of ``(phi, 1)``: only meaningful when F is trivial (Gamma-level H^2)."""
        kappa = self.kappa
        fg = kappa.fgamma
        phi = kappa.G.phi_index
        f = [phi[fg.pair(x)[1]] for x in range(fg.group.order)]
        return self.class_of(trivial_cocycle(kappa, f))


_H2_CACHE: dict = {}
_SPACE_CACHE: dict = {}


def clear_caches():
    _H2_CACHE.clear()
    _SPACE_CACHE.clear()


def cocycle_space(kappa: OuterAction) -> CocycleSpace:
    out = _SPACE_CACHE.get(kappa)
    if out is None:
        out = _SPACE_CACHE[kappa] = CocycleSpace(kappa)
    return out


def _enumerate_orbits(kappa: OuterAction, bound) -> H2Set:
    space = cocycle_space(kappa)
    members: dict = {}
    orbits = []
    count = 0
    for f, g in space.tree_normal_cocycles(limit=bound):
        count += 1
        key = f + g
        if key in members:
            continue
        orbit = set()
        for c in space.residual_gauges(f):
            f2, g2 = space.act(c, f, g)
            orbit.add(f2 + g2)
        idx = len(orbits)
        for k2 in orbit:
            members[k2] = idx
        orbits.append(min(orbit))

    n = space.n
    order = sorted(range(len(orbits)), key=lambda i: orbits[i])
    renum = {old: new for new, old in enumerate(order)}
    out = H2Set(kappa, "orbits", space, space.center_one_cocycles())
    out.members = {k: renum[v] for k, v in members.items()}
    out.reps = [orbits[i] for i in order]
    out._len = len(orbits)
    out.tree_normal_count = count
    e = space.G.identity
    neutral = set()
    for f in space.hom_lifts():
        c = space.to_tree_normal(f, (e,) * (n * n))
        f2, g2 = space.act(c, f, (e,) * (n * n))
        neutral.add(out.members[f2 + g2])
    out.neutral_set = neutral
    return out


def _enumerate_linear(kappa: OuterAction) -> H2Set:
    from .abelian import AbelianCohomology, AbelianModule

    space = cocycle_space(kappa)
    G = kappa.G.G
    T = kappa.tower
    action = tuple(T.aut_elems[a] for a in kappa.lift)
    coh = AbelianCohomology(AbelianModule(kappa.fgamma.group, G, action), 2)
    out = H2Set(kappa, "linear", space, space.center_one_cocycles())
    out.coh = coh
    out._len = coh.order
    out.neutral_set = {0}
    out.tree_normal_count = None
    return out


def enumerate_h2(kappa: OuterAction, bound: int | None = COCYCLE_BOUND, method: str = "auto") -> H2Set:
    """Every class of H^2(F, G, kappa), canonically ordered.

    ``method="auto"`` uses the linear method for abelian G and orbit
    enumeration otherwise; results are cached per (kappa, method).
    """
    if method == "auto":
        method = "linear" if kappa.G.G.is_abelian() else "orbits"
    if method not in ("orbits", "linear"):
        raise ValueError(f"unknown method {method!r}")
    key = (kappa, method)
    cached = _H2_CACHE.get(key)
    if cached is not None:
        return cached
    if method == "linear":
        if not kappa.G.G.is_abelian():
            raise ValidationError("the linear method needs an abelian kernel")
        out = _enumerate_linear(kappa)
    else:
        out = _enumerate_orbits(kappa, bound)
    _H2_CACHE[key] = out
    return out


def h2_set(kappa: OuterAction) -> H2Set:
    return enumerate_h2(kappa)


def equivalent(w1: TwoCocycle, w2: TwoCocycle):
    """Coboundary taking ``w1`` to ``w2`` (any normalization), or None."""
    if w1.kappa != w2.kappa:
        raise IncompatibleKernels("cocycles for different kernels")
    space = cocycle_space(w1.kappa)
    n1, c1 = normalize(w1)
    n2, c2 = normalize(w2)
    c = space.find_coboundary(n1, n2)
    if c is None:
        return None
    G = w1.kappa.G.G
    # w2 = c2^-1 . n2 = c2^-1 . c . c1 . w1
    c2inv = tuple(G.inverse[v] for v in c2)
    return compose_coboundaries(G, c2inv, compose_coboundaries(G, c, c1))


def is_neutral(cls: H2Class):
    """``(True, c)`` with ``c . representative`` having trivial g, or ``(False, None)``."""
    w = cls.representative
    space = cocycle_space(w.kappa)
    e = w.kappa.G.G.identity
    for f in space.hom_lifts():
        target = TwoCocycle(w.kappa, f, (e,) * (w.n * w.n))
        c = space.find_coboundary(w, target)
        if c is not None:
            return True, c
    return False, None


@dataclass(frozen=True)
class Restriction:
    cls_gamma: H2Class  # class in H^2(Gamma, G, kappa_G)
    in_ker_res: bool
    witness: tuple | None  # c on Gamma with c . (restricted cocycle) = (phi, 1)


def restrict_cocycle(w: TwoCocycle) -> TwoCocycle:
    kappa = w.kappa
    rk = restricted_kernel(kappa)
    gam = kappa.fgamma.gamma_f.map
    n = w.n
    f = tuple(w.f[x] for x in gam)
    g = tuple(w.g[x * n + y] for x in gam for y in gam)
    return TwoCocycle(rk, f, g)


def restrict_to_gamma(cls: H2Class | TwoCocycle) -> Restriction:
    w = cls.representative if isinstance(cls, H2Class) else cls
    wr = restrict_cocycle(w)
    h2g = enumerate_h2(wr.kappa)
    idx = h2g.classify(wr)
    base = h2g.base_point()
    witness = None
    if idx == base.index:
        wr_n, c0 = normalize(wr)
        base_w = trivial_cocycle(wr.kappa, wr.kappa.G.phi_index)
        c = h2g.space.find_coboundary(wr_n, base_w)
        witness = compose_coboundaries(wr.kappa.G.G, c, c0)
    return Restriction(h2g.classes[idx], idx == base.index, witness)


def center_twist(eta: H2Class | TwoCocycle, w: TwoCocycle) -> TwoCocycle:
    """``(f, z g)`` for a center-valued cocycle ``(f|Z, z)``."""
    z = eta.representative if isinstance(eta, H2Class) else eta
    ck = center_restriction(w.kappa)
    if z.kappa != ck.kappa_z:
        raise IncompatibleKernels("eta is not a class for the kernel induced on the center")
    T = w.kappa.tower
    TZ = ck.Z_gamma.tower
    from .galois_model import restrict_to_subgroup

    for x in range(w.n):
        if TZ.aut_elems[z.f[x]] != restrict_to_subgroup(T.aut_elems[w.f[x]], ck.Z):
            raise IncompatibleKernels(f"f differs on the center at {x}", witness=[x])
    G = w.kappa.G.G
    emb = ck.Z.elements
    g = tuple(G.table[emb[a]][b] for a, b in zip(z.g, w.g))
    return check_cocycle(w.kappa, w.f, g)


def center_h2_action(eta: H2Class, cls: H2Class) -> H2Class:
    w2 = center_twist(eta, cls.representative)
    return enumerate_h2(cls.kappa).class_of(w2)


def center_action_table(kappa: OuterAction) -> list:
    """``table[eta][xi]`` = index of ``eta . xi``."""
    h2 = enumerate_h2(kappa)
    h2z = enumerate_h2(center_restriction(kappa).kappa_z)
    return [[center_h2_action(eta, xi).index for xi in h2] for eta in h2z]


def aut_inverse_perm(T, a: int) -> tuple:
    return invert_perm(T.aut_elems[a])


def all_coordinates(invariants: Sequence[int]) -> np.ndarray:
    """Mixed-radix coordinates of every index ``0..prod-1`` (last coordinate fastest)."""
    total = int(np.prod(invariants, dtype=np.int64)) if len(invariants) else 1
    idx = np.arange(total, dtype=np.int64)
    out = np.zeros((total, len(invariants)), dtype=np.int64)
    for j in range(len(invariants) - 1, -1, -1):
        idx, out[:, j] = np.divmod(idx, invariants[j])
    return out


def ker_res_indices(h2: H2Set) -> tuple:
    """Indices of the classes whose restriction to Gamma is the base point."""
    cached = h2._cache.get("ker_res")
    if cached is not None:
        return cached
    kappa = h2.kappa
    if h2.method == "linear":
        rk = restricted_kernel(kappa)
        res = enumerate_h2(rk, method="linear")
        base = res.coords_of(res.base_point().index)
        inv = h2.coh.invariants
        rinv = np.array(res.coh.invariants, dtype=np.int64)
        R = np.zeros((len(inv), len(rinv)), dtype=np.int64)
        for j in range(len(inv)):
            e = [0] * len(inv)
            e[j] = 1
            g = h2.coh.cocycle(tuple(e))
            w = TwoCocycle(kappa, tuple(kappa.lift), tuple(int(v) for v in np.asarray(g).reshape(-1)))
            R[j] = res.coh.classify(np.asarray(restrict_cocycle(w).g, dtype=np.int64).reshape(res.space.n, -1))
        if len(rinv):
            img = (all_coordinates(inv) @ R) % rinv
            hit = np.all(img == np.asarray(base, dtype=np.int64), axis=1)
        else:
            hit = np.ones(len(h2), dtype=bool)
        out = tuple(int(i) for i in np.nonzero(hit)[0])
    else:
        out = tuple(c.index for c in h2 if restrict_to_gamma(c).in_ker_res)
    h2._cache["ker_res"] = out
    return out
