"""Cohomology of a finite group with coefficients in a finite abelian module.

Normalized bar cochains, linear algebra over Z/p^a.  The module is split into
its primary parts and each part is embedded in (Z/q)^r with q = p^a its
exponent (a cyclic factor of order d sits as (q/d) Z/q).  Submodules are kept
in Howell form, which gives membership tests and canonical coset
representatives; H^k = Z^k / B^k is then diagonalized to a list of cyclic
factors with explicit generating cocycles.

Coboundary: (dc)(x_1..x_{k+1}) = x_1 c(x_2..) + sum_i (-1)^i c(.. x_i x_{i+1} ..)
+ (-1)^{k+1} c(x_1..x_k).  In degree 2 this is the abelian case of the
nonabelian identity used in :mod:`cohomology`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Sequence

import numpy as np

from .errors import NotAbelian, ValidationError
from .groups import FiniteGroup


# -- linear algebra over Z/q ---------------------------------------------------


def _unit_for(a: int, q: int) -> int:
    """A unit u mod q with u*a = gcd(a, q) mod q."""
    g = gcd(a, q)
    if g == q:
        return 1
    m = q // g
    u0 = pow((a // g) % m, -1, m) if m > 1 else 0
    for t in range(g):
        u = u0 + t * m
        if gcd(u, q) == 1:
            return u % q
    raise AssertionError("no unit found")


def _xgcd(a: int, b: int) -> tuple:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


class Howell:
    """Row basis of a submodule of (Z/q)^n with the Howell property."""

    def __init__(self, rows, q: int, ncols: int):
        self.q = q
        self.ncols = ncols
        basis: dict = {}
        stack = [np.asarray(r, dtype=np.int64) % q for r in rows]
        while True:
            while stack:
                self._insert(basis, stack.pop(), stack)
            # annihilator multiples must reduce to zero
            extra = []
            for p in sorted(basis):
                r = basis[p]
                d = int(r[p])
                if d != 1:
                    w = self._reduce_with(basis, (q // d) * r % q)
                    if w.any():
                        extra.append(w)
            if not extra:
                break
            stack = extra
        self.pivots = tuple(sorted(basis))
        self.rows = np.array([basis[p] for p in self.pivots], dtype=np.int64).reshape(len(self.pivots), ncols)
        self.pivot_values = tuple(int(basis[p][p]) for p in self.pivots)

    def _insert(self, basis, v, stack):
        q = self.q
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return
            p = int(nz[0])
            a = int(v[p])
            r = basis.get(p)
            if r is None:
                u = _unit_for(a, q)
                v = v * u % q
                basis[p] = v
                d = int(v[p])
                if d != 1:
                    stack.append((q // d) * v % q)
                return
            d = int(r[p])
            if a % d == 0:
                v = (v - (a // d) * r) % q
                continue
            g, s, t = _xgcd(d, a)
            new = (s * r + t * v) % q
            new = new * _unit_for(int(new[p]), q) % q
            g = int(new[p])
            basis[p] = new
            stack.append((r - (d // g) * new) % q)
            stack.append((v - (a // g) * new) % q)
            stack.append((q // g) * new % q)
            return

    def _reduce_with(self, basis, v):
        q = self.q
        v = v.copy()
        for p in sorted(basis):
            r = basis[p]
            c = int(v[p]) // int(r[p])
            if c:
                v = (v - c * r) % q
        return v

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of ``v`` modulo the submodule."""
        q = self.q
        v = np.asarray(v, dtype=np.int64) % q
        for p, d, r in zip(self.pivots, self.pivot_values, self.rows):
            c = int(v[p]) // d
            if c:
                v = (v - c * r) % q
        return v

    def reduce_batch(self, V) -> np.ndarray:
        q = self.q
        V = np.asarray(V, dtype=np.int64) % q
        for p, d, r in zip(self.pivots, self.pivot_values, self.rows):
            c = V[:, p] // d
            if c.any():
                V = (V - c[:, None] * r[None, :]) % q
        return V

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def rows_from(self, col: int) -> np.ndarray:
        """Rows whose pivot is at or after ``col`` (a basis of the vectors vanishing before ``col``)."""
        keep = [i for i, p in enumerate(self.pivots) if p >= col]
        return self.rows[keep]

    def order(self) -> int:
        out = 1
        for d in self.pivot_values:
            out *= self.q // d
        return out


def smith_local(R: np.ndarray, q: int, p: int, m: int):
    """Diagonalize the relation rows ``R`` of (Z/q)^m, q = p^a.

    Returns ``(orders, V, Vinv)``: x -> x V sends (Z/q)^m / rowspan(R) onto
    the direct sum of Z/orders[t] (coordinate t of xV, reduced mod orders[t]).
    """
    if m == 0:
        return [], np.zeros((0, 0), dtype=np.int64), np.zeros((0, 0), dtype=np.int64)
    D = [list(map(int, row)) for row in np.asarray(R).reshape(-1, m) % q]
    V = [[int(i == j) for j in range(m)] for i in range(m)]
    Vinv = [[int(i == j) for j in range(m)] for i in range(m)]

    def val(x):
        if x % q == 0:
            return None
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    nrows = len(D)
    diag = []
    t = 0
    while t < min(nrows, m):
        best = None
        for i in range(t, nrows):
            for j in range(t, m):
                v = val(D[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        D[t], D[i] = D[i], D[t]
        if j != t:
            for row in D:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
            Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        pv = p**v
        u = pow(D[t][t] // pv, -1, q // pv) if q // pv > 1 else 1
        D[t] = [x * u % q for x in D[t]]
        for i2 in range(t + 1, nrows):
            c = D[i2][t] // pv
            if c:
                D[i2] = [(a - c * b) % q for a, b in zip(D[i2], D[t])]
        for j2 in range(t + 1, m):
            c = D[t][j2] // pv
            if c:
                for row in D:
                    row[j2] = (row[j2] - c * row[t]) % q
                for row in V:
                    row[j2] = (row[j2] - c * row[t]) % q
                Vinv[t] = [(a + c * b) % q for a, b in zip(Vinv[t], Vinv[j2])]
        diag.append(pv)
        t += 1
    orders = diag + [q] * (m - len(diag))
    return orders, np.array(V, dtype=np.int64).reshape(m, m), np.array(Vinv, dtype=np.int64).reshape(m, m)


# -- modules ---------------------------------------------------------------------


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primary_decomposition(A: FiniteGroup) -> list:
    """``[(p, [(b, d), ...]), ...]``: A is the direct sum of the cyclic groups <b> of order d."""
    if not A.is_abelian():
        raise NotAbelian("coefficient group must be abelian")
    out = []
    for p in _prime_factors(A.order):
        part = [a for a in range(A.order) if _is_p_power(A.element_order(a), p)]
        size = len(part)
        cands = sorted(part, key=lambda a: (-A.element_order(a), a))
        chosen = _independent_basis(A, cands, size, [])
        out.append((p, chosen))
    return out


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _independent_basis(A, cands, size, chosen):
    span = A.generate([b for b, _ in chosen]) if chosen else (A.identity,)
    if len(span) == size:
        return list(chosen)
    last = A.element_order(chosen[-1][0]) if chosen else None
    sset = set(span)
    for b in cands:
        d = A.element_order(b)
        if last is not None and d > last:
            continue
        if b in sset:
            continue
        new = A.generate([x for x, _ in chosen] + [b])
        if len(new) != len(span) * d:
            continue
        res = _independent_basis(A, cands, size, chosen + [(b, d)])
        if res is not None:
            return res
    return None


@dataclass(eq=False)
class AbelianModule:
    """A finite abelian group A with an action of X given by permutations of A."""

    X: FiniteGroup
    A: FiniteGroup
    action: tuple  # action[x] is a permutation of A (an automorphism)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.A.is_abelian():
            raise NotAbelian("coefficient group must be abelian")
        if len(self.action) != self.X.order:
            raise ValidationError("need one automorphism per element of the acting group")
        self.action = tuple(tuple(int(v) for v in a) for a in self.action)
        A = self.A
        self.add = A.arr
        self.neg = A.inv_arr
        self.act = np.array(self.action, dtype=np.int64)
        self.parts = []
        for p, basis in primary_decomposition(A):
            q = max(d for _, d in basis)
            self.parts.append((p, q, basis))
        # element -> embedded coordinates, per prime part
        self.emb = []
        for p, q, basis in self.parts:
            tab = np.zeros((A.order, len(basis)), dtype=np.int64)
            self.emb.append(tab)
        radix = []
        for p, q, basis in self.parts:
            radix.extend(d for _, d in basis)
        self._radix = radix
        decode = {}
        for coords in product(*[range(d) for d in radix]):
            elems = [b for part in self.parts for b, _ in part[2]]
            a = A.identity
            for b, c in zip(elems, coords):
                a = A.table[a][A.power(b, c)]
            decode[coords] = a
        key_size = int(np.prod(radix)) if radix else 1
        self._decode = np.zeros(key_size, dtype=np.int64)
        weights = []
        w = 1
        for d in reversed(radix):
            weights.append(w)
            w *= d
        self._weights = np.array(list(reversed(weights)), dtype=np.int64)
        for coords, a in decode.items():
            self._decode[int(np.dot(coords, self._weights)) if radix else 0] = a
            pos = 0
            for k, (p, q, basis) in enumerate(self.parts):
                for j, (_, d) in enumerate(basis):
                    self.emb[k][a, j] = coords[pos] * (q // d)
                    pos += 1

    def from_coords(self, coords_per_part: Sequence[np.ndarray]) -> np.ndarray:
        """Elements from embedded coordinates, batched over leading axes."""
        digits = []
        for (p, q, basis), c in zip(self.parts, coords_per_part):
            for j, (_, d) in enumerate(basis):
                digits.append((c[..., j] % q) // (q // d))
        if not digits:
            return np.zeros(coords_per_part[0].shape[:-1] if coords_per_part else (), dtype=np.int64)
        key = sum(dg * w for dg, w in zip(digits, self._weights))
        return self._decode[key]


def cochain_tuples(n: int, k: int, identity: int = 0) -> list:
    others = [x for x in range(n) if x != identity]
    return list(product(others, repeat=k))


def coboundary(M: AbelianModule, c: np.ndarray, k: int) -> np.ndarray:
    """``d c`` for a full (not necessarily normalized) k-cochain given as an array of shape (n,)*k."""
    X = M.X
    n = X.order
    mul = X.arr
    add, neg, act = M.add, M.neg, M.act
    c = np.asarray(c, dtype=np.int64)
    idx = np.indices((n,) * (k + 1)) if k + 1 > 0 else None
    # x_1 . c(x_2..x_{k+1})
    if k == 0:
        total = act[np.arange(n), np.broadcast_to(c, (n,))]
        return add[total, neg[np.broadcast_to(c, (n,))]]
    total = act[idx[0], c[tuple(idx[1:])]]
    for i in range(1, k + 1):
        args = list(idx[: i - 1]) + [mul[idx[i - 1], idx[i]]] + list(idx[i + 1 :])
        term = c[tuple(args)]
        total = add[total, term] if i % 2 == 0 else add[total, neg[term]]
    term = c[tuple(idx[:k])]
    total = add[total, term] if (k + 1) % 2 == 0 else add[total, neg[term]]
    return total


@dataclass(eq=False)
class _PrimeCoh:
    p: int
    q: int
    basis: list
    Z: Howell  # cocycles, as vectors
    B: Howell  # coboundaries
    stacked: Howell  # [[z_i | e_i]; [b | 0]]
    zrows: np.ndarray
    orders: list
    V: np.ndarray
    Vinv: np.ndarray
    gens: np.ndarray  # generating cocycle vectors, one per cyclic factor


class AbelianCohomology:
    """H^k(X, A) as a finite abelian group with explicit cocycles.

    Classes are coordinate tuples with respect to ``invariants`` (prime powers,
    grouped by prime).  ``cocycle(coords)`` gives a fixed normalized representative
    and ``classify(values)`` recovers coordinates from any cocycle.
    """

    def __init__(self, M: AbelianModule, k: int):
        self.M = M
        self.k = k
        X = M.X
        self.n = X.order
        self.tuples = cochain_tuples(self.n, k, X.identity)
        self.tuples_next = cochain_tuples(self.n, k + 1, X.identity)
        self.tuples_prev = cochain_tuples(self.n, k - 1, X.identity) if k > 0 else []
        self.parts = []
        for pi, (p, q, basis) in enumerate(M.parts):
            self.parts.append(self._prime_part(pi, p, q, basis))
        inv = []
        for part in self.parts:
            inv.extend(part.orders)
        self.invariants = tuple(inv)

    # vector <-> cochain conversions for one prime part
    def _to_vec(self, pi: int, values: np.ndarray, tuples: list, k: int) -> np.ndarray:
        emb = self.M.emb[pi]
        if k == 0:
            return emb[int(values)].copy()
        sel = values[tuple(np.array(tuples, dtype=np.int64).T)] if tuples else np.zeros(0, dtype=np.int64)
        return emb[sel].reshape(-1)

    def _basis_cochains(self, pi: int, k: int, tuples: list):
        """Embedded generators of C^k (for this prime) and the cochains they come from."""
        M = self.M
        p, q, basis = M.parts[pi]
        n = self.n
        e = M.A.identity
        out = []
        if k < 0:
            return out
        for t in tuples if k > 0 else [()]:
            for b, d in basis:
                c = np.full((n,) * k, e, dtype=np.int64)
                c[t] = b
                out.append(c)
        return out

    def _prime_part(self, pi: int, p: int, q: int, basis) -> _PrimeCoh:
        k = self.k
        r = len(basis)
        N = r * max(len(self.tuples), 1 if k == 0 else 0)
        if k == 0:
            N = r
        Nn = r * len(self.tuples_next)
        M = self.M
        # Z^k: kernel of d on C^k, from the graph rows [d(gen) | gen]
        graph = []
        for c in self._basis_cochains(pi, k, self.tuples):
            img = self._to_vec(pi, coboundary(M, c, k), self.tuples_next, k + 1)
            src = self._to_vec(pi, c, self.tuples, k)
            graph.append(np.concatenate([img, src]))
        if graph:
            H = Howell(graph, q, Nn + N)
            zrows = H.rows_from(Nn)[:, Nn:]
        else:
            zrows = np.zeros((0, N), dtype=np.int64)
        Z = Howell(zrows, q, N)
        brows = []
        if k > 0:
            for c in self._basis_cochains(pi, k - 1, self.tuples_prev):
                brows.append(self._to_vec(pi, coboundary(M, c, k - 1), self.tuples, k))
        B = Howell(brows, q, N)
        zr = Z.rows
        m = len(zr)
        stacked_rows = [np.concatenate([zr[i], np.eye(m, dtype=np.int64)[i]]) for i in range(m)]
        stacked_rows += [np.concatenate([b, np.zeros(m, dtype=np.int64)]) for b in B.rows]
        S = Howell(stacked_rows, q, N + m)
        rel = S.rows_from(N)[:, N:]
        orders, V, Vinv = smith_local(rel, q, p, m)
        keep = [t for t, o in enumerate(orders) if o != 1]
        gens = (Vinv[keep] @ zr) % q if m else np.zeros((0, N), dtype=np.int64)
        return _PrimeCoh(p, q, basis, Z, B, S, zr, [orders[t] for t in keep], V[:, keep], Vinv[keep], gens)

    # -- public API ------------------------------------------------------------
    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        out = 1
        for d in self.invariants:
            out = lcm(out, d)
        return out

    def elements(self):
        return product(*[range(d) for d in self.invariants])

    def zero(self) -> tuple:
        return (0,) * len(self.invariants)

    def add(self, a, b) -> tuple:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariants))

    def neg(self, a) -> tuple:
        return tuple((-x) % d for x, d in zip(a, self.invariants))

    def scale(self, m: int, a) -> tuple:
        return tuple((m * x) % d for x, d in zip(a, self.invariants))

    def element_order(self, a) -> int:
        from math import lcm

        out = 1
        for x, d in zip(a, self.invariants):
            out = lcm(out, d // gcd(x, d))
        return out

    def _split(self, coords):
        out, pos = [], 0
        for part in self.parts:
            out.append(np.asarray(coords[pos : pos + len(part.orders)], dtype=np.int64))
            pos += len(part.orders)
        return out

    def cocycle(self, coords) -> np.ndarray:
        """Fixed normalized representative as an array of shape (n,)*k of elements of A."""
        return self.cocycle_batch(np.asarray(coords, dtype=np.int64).reshape(1, len(self.invariants)))[0]

    def cocycle_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        if coords.ndim == 1:
            coords = coords.reshape(-1, len(self.invariants)) if len(self.invariants) else coords.reshape(-1, 0)
        Mb = coords.shape[0]
        n, k = self.n, self.k
        per_part = []
        pos = 0
        for part in self.parts:
            r = len(part.basis)
            c = coords[:, pos : pos + len(part.orders)]
            pos += len(part.orders)
            vec = (c @ part.gens) % part.q if len(part.orders) else np.zeros((Mb, r * max(len(self.tuples), 1)), dtype=np.int64)
            per_part.append(vec.reshape(Mb, -1, r))
        elems = self.M.from_coords(per_part) if per_part else np.zeros((Mb, max(len(self.tuples), 1)), dtype=np.int64)
        out = np.full((Mb,) + (n,) * k, self.M.A.identity, dtype=np.int64)
        if k == 0:
            return elems.reshape(Mb)
        if self.tuples:
            idx = tuple(np.array(self.tuples, dtype=np.int64).T)
            out[(slice(None),) + idx] = elems.reshape(Mb, len(self.tuples))
        return out

    def _vectors_batch(self, values: np.ndarray):
        """Per prime part, the embedded vectors of a batch of normalized cochains."""
        values = np.asarray(values, dtype=np.int64)
        Mb = values.shape[0]
        out = []
        for pi, part in enumerate(self.parts):
            emb = self.M.emb[pi]
            if self.k == 0:
                sel = values.reshape(Mb, 1)
            else:
                idx = tuple(np.array(self.tuples, dtype=np.int64).T)
                sel = values[(slice(None),) + idx] if self.tuples else np.zeros((Mb, 0), dtype=np.int64)
            out.append(emb[sel].reshape(Mb, -1))
        return out

    def is_normalized(self, values) -> bool:
        values = np.asarray(values)
        e = self.M.A.identity
        ident = self.M.X.identity
        for axis in range(self.k):
            sl = [slice(None)] * self.k
            sl[axis] = ident
            if (values[tuple(sl)] != e).any():
                return False
        return True

    def is_cocycle(self, values) -> bool:
        d = coboundary(self.M, np.asarray(values, dtype=np.int64), self.k)
        return bool((d == self.M.A.identity).all())

    def classify(self, values) -> tuple:
        return tuple(int(v) for v in self.classify_batch(np.asarray(values)[None, ...])[0])

    def classify_batch(self, values: np.ndarray) -> np.ndarray:
        """Coordinates of a batch of normalized cocycles (shape (M,) + (n,)*k)."""
        vecs = self._vectors_batch(values)
        Mb = np.asarray(values).shape[0]
        cols = []
        for part, v in zip(self.parts, vecs):
            m = len(part.zrows)
            N = v.shape[1]
            if not part.orders:
                continue
            big = np.concatenate([v, np.zeros((Mb, m), dtype=np.int64)], axis=1)
            red = part.stacked.reduce_batch(big)
            if red[:, :N].any():
                raise ValidationError("not a cocycle")
            x = (-red[:, N:]) % part.q
            y = (x @ part.V) % part.q
            cols.append(y % np.array(part.orders, dtype=np.int64)[None, :])
        if not cols:
            return np.zeros((Mb, 0), dtype=np.int64)
        return np.concatenate(cols, axis=1)

    def is_coboundary(self, values) -> bool:
        return not any(self.classify(values))

    def add_table(self) -> list:
        """Addition table on ``list(self.elements())``, for small groups."""
        els = list(self.elements())
        pos = {c: i for i, c in enumerate(els)}
        return [[pos[self.add(a, b)] for b in els] for a in els]


def abelian_cohomology(degree: int, X: FiniteGroup, A: FiniteGroup, action=None) -> AbelianCohomology:
    """``H^degree(X, A)``; ``action=None`` means the trivial action."""
    if action is None:
        action = [tuple(range(A.order))] * X.order
    return AbelianCohomology(AbelianModule(X, A, tuple(action)), degree)
