"""Reducing an extension to a smaller kernel.

Every routine returns a :class:`ReductionReport`: a sub-extension
``1 -> S -> H' -> F -> 1`` of (an extension equivalent to) the original one,
together with the inclusion ``H' -> H`` as a witness.  Pushing the reduced
extension forward along ``S -> G`` gives back the original class.

* :func:`lemma_reduce`: for a cocycle whose g-values lie in an f-stable
  subgroup M, the M-valued cocycle builds an extension by M;
* :func:`torsion_reduce_abelian`: for abelian A and the least m killing the
  class in the Baer-sum group, a Gamma-stable subgroup of H meeting A in A[m];
* :func:`devissage`: the abelian step applied layer by layer along a
  characteristic series with abelian quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .abelian import abelian_cohomology
from .cohomology import TwoCocycle, check_cocycle, enumerate_h2
from .errors import (
    ImageEscapes,
    NotAbelian,
    NotAbelianQuotient,
    NotCharacteristicSeries,
    NotReducible,
    NotStable,
    ValidationError,
)
from .extensions import (
    AbelianExtGroup,
    ExtClass,
    Extension,
    _gamma_subgroup,
    abelian_ext_group,
    build_from_cocycle,
    cocycle_from_extension,
    ext_order,
    extension_key,
    kernel_extension,
    key_isomorphism,
    pushforward_abelian,
    quotient_extension,
    sub_extension,
)
from .galois_model import OuterAction, validate_outer_action
from .groups import Subgroup, subgroup


@dataclass(frozen=True, eq=False)
class ReductionReport:
    original: Extension
    subgroup: Subgroup  # S inside G
    reduced: Extension  # extension of F by S
    witness: tuple  # reduced H -> original H, restricting to the inclusion S -> G
    m_used: int | None = None
    reproduces: bool = True  # the witness lands in the original representative itself
    layers: tuple = field(default=())  # devissage: one record per layer

    def to_dict(self) -> dict:
        out = {
            "subgroup": list(self.subgroup.elements),
            "reduced_order": self.reduced.H.order,
            "witness": list(self.witness),
            "m": self.m_used,
            "reproduces": self.reproduces,
        }
        if self.layers:
            out["layers"] = [dict(x) for x in self.layers]
        return out


def _rep(xi) -> Extension:
    return xi.representative if isinstance(xi, ExtClass) else xi


# -- stable subgroups -------------------------------------------------------------


def stable_closure(w: TwoCocycle) -> Subgroup:
    """Smallest subgroup of G containing the g-values and stable under every f_x."""
    G = w.kappa.G.G
    aut = w.kappa.tower.aut_elems
    perms = [aut[a] for a in sorted(set(w.f))]
    cur = set(G.generate(set(w.g)))
    while True:
        new = set(cur)
        for p in perms:
            new.update(p[x] for x in cur)
        new = set(G.generate(new))
        if new == cur:
            return subgroup(G, cur)
        cur = new


def _restricted_kernel(w: TwoCocycle, M: Subgroup) -> tuple:
    """The outer action of F on M induced by f, and the M-valued cocycle."""
    kappa = w.kappa
    Mg = _gamma_subgroup(kappa.G, M)
    TM = Mg.tower
    aut = kappa.tower.aut_elems
    pos = M.position
    fr = [TM.index(tuple(pos[aut[a][x]] for x in M.elements)) for a in w.f]
    fg = kappa.fgamma
    kb = [TM.coset_of[fr[fg.index(f, kappa.Gamma.identity)]] for f in range(kappa.F.G.order)]
    kM = validate_outer_action(kappa.F, Mg, kb)
    wM = check_cocycle(kM, fr, [pos[v] for v in w.g])
    return kM, wM


def lemma_reduce(xi, w: TwoCocycle | None = None, M: Subgroup | Sequence[int] | None = None) -> ReductionReport:
    """Reduce to M using a restricted-normal cocycle ``w`` of phi(xi) with values in M.

    ``w`` defaults to the cocycle read off ``xi`` and ``M`` to its stable closure.
    """
    ext = _rep(xi)
    own = w is None
    if own:
        w = cocycle_from_extension(ext)
    if not w.is_restricted_normal():
        raise ValidationError("the cocycle must be in restricted-normal form")
    if w.kappa != ext.kernel:
        raise ValidationError("the cocycle is for another outer action")
    if not own:
        h2 = enumerate_h2(w.kappa)
        if h2.classify(w) != h2.classify(cocycle_from_extension(ext)):
            raise ValidationError("the cocycle does not represent phi(xi)")
    G = ext.G.G
    if M is None:
        M = stable_closure(w)
    elif not isinstance(M, Subgroup):
        M = subgroup(G, M)
    aut = w.kappa.tower.aut_elems
    for x, a in enumerate(w.f):
        for m in M.elements:
            if aut[a][m] not in M.position:
                raise NotStable(f"f_{x} moves {m} out of M", witness=[x, m])
    n = w.n
    for i, v in enumerate(w.g):
        if v not in M.position:
            raise ImageEscapes(f"g({i // n},{i % n}) = {v} is not in M", witness=[i // n, i % n])
    _, wM = _restricted_kernel(w, M)
    reduced = build_from_cocycle(wM)
    built = build_from_cocycle(w)
    nM, nG = len(M), G.order
    # (m, f) in the reduced group goes to (m, f) in the group built from w
    into_built = [0] * reduced.H.order
    for f in range(ext.F.G.order):
        for i, m in enumerate(M.elements):
            into_built[f * nM + i] = f * nG + m
    theta = key_isomorphism(built, ext)
    if theta is None:
        return ReductionReport(ext, M, reduced, tuple(into_built), None, False)
    return ReductionReport(ext, M, reduced, tuple(theta[h] for h in into_built), None, True)


# -- the abelian torsion step --------------------------------------------------------


def torsion_subgroup(A, m: int) -> tuple:
    """Elements of the abelian group A killed by m."""
    return tuple(a for a in range(A.order) if A.power(a, m) == A.identity)


def _complement_search(ext: Extension, M: Sequence[int]):
    """Least Gamma-stable subgroup H' of H with H' meeting iota(A) in iota(M) and onto F, or None."""
    from ._search import spanning_tree

    H = ext.H
    Mset = set(M)
    iM = [ext.iota[m] for m in M]
    gens = spanning_tree(ext.F.G)[0]
    # one representative per coset of iota(M) in every fiber over a generator
    fibers = []
    for t in gens:
        seen, reps = set(), []
        for h in ext.preimages(t):
            if h not in seen:
                reps.append(h)
                seen.update(H.table[h][x] for x in iM)
        fibers.append(reps)
    gpos = ext.g_position
    for choice in product(*fibers):
        Hs = set(H.generate(iM + list(choice)))
        if len(Hs) != len(M) * ext.F.G.order:
            continue
        if {int(gpos[h]) for h in Hs if gpos[h] >= 0} != Mset:
            continue
        if any(p[h] not in Hs for p in ext.psi for h in Hs):
            continue
        return sorted(Hs)
    return None


def torsion_reduce_abelian(xi, group: AbelianExtGroup | None = None, m: int | None = None) -> ReductionReport:
    """Reduce an abelian-kernel extension to A[m] for the least m with m.xi = 0.

    ``m`` may be passed when the order of the class is already known.
    """
    ext = _rep(xi)
    A = ext.G.G
    if not A.is_abelian():
        raise NotAbelian("torsion reduction needs an abelian kernel")
    if m is not None:
        pass
    elif group is not None and isinstance(xi, ExtClass):
        m = group.order(xi.index)
    else:
        m = ext_order(ext)
    M = torsion_subgroup(A, m)
    elems = _complement_search(ext, M)
    if elems is None:
        raise NotReducible(f"the class is killed by {m} but does not come from A[{m}]", witness=m)
    reduced, Msub, Hs = sub_extension(ext, elems)
    push = pushforward_abelian(reduced, Msub, ext.kernel)
    if extension_key(push) != extension_key(ext):
        raise AssertionError("pushforward of the reduced extension differs from the original")
    return ReductionReport(ext, Msub, reduced, tuple(Hs.elements), m, True)


# -- devissage ------------------------------------------------------------------------


def _check_series(ext: Extension, series) -> list:
    G = ext.G.G
    T = ext.G.tower
    subs = [tuple(sorted(set(int(x) for x in s.elements if True))) if isinstance(s, Subgroup) else tuple(sorted(set(int(x) for x in s))) for s in series]
    if not subs or subs[0] != (G.identity,) or subs[-1] != tuple(range(G.order)):
        raise NotCharacteristicSeries("the series must run from the trivial subgroup to G")
    perms = [T.aut_elems[a] for a in range(len(T.aut_elems)) if T.coset_of[a] in set(ext.kernel.kappa)]
    perms += list(ext.G.phi)
    for i, s in enumerate(subs):
        ss = set(s)
        if set(G.generate(s)) != ss:
            raise NotCharacteristicSeries(f"member {i} is not a subgroup", witness=[i])
        if i and not set(subs[i - 1]) <= ss:
            raise NotCharacteristicSeries(f"member {i - 1} is not inside member {i}", witness=[i - 1, i])
        for p in perms:
            for x in s:
                if p[x] not in ss:
                    raise NotCharacteristicSeries(f"member {i} is not stable", witness=[i, x])
        if i:
            low = set(subs[i - 1])
            for a in s:
                for b in s:
                    comm = G.table[G.table[a][b]][G.inverse[G.table[b][a]]]
                    if comm not in low:
                        raise NotAbelianQuotient(f"layer {i} is not abelian", witness=[i, a, b])
    return subs


def devissage(xi, series) -> ReductionReport:
    """Apply the abelian step along ``1 = G_0 < G_1 < ... < G_r = G``.

    The top of the series is handled first through the quotient by G_1; the
    bottom layer G_1 is then reduced as an abelian kernel over the preimage.
    A layer whose class does not come from its torsion subgroup is kept whole
    and recorded with ``reduced: False``.
    """
    ext = _rep(xi)
    subs = _check_series(ext, series)
    G = ext.G.G
    layers: list = []
    if len(subs) == 1:
        full = tuple(range(ext.H.order))
        M = subgroup(G, range(G.order))
        return ReductionReport(ext, M, ext, full, 1, True, ())
    if len(subs) == 2:
        try:
            rep = torsion_reduce_abelian(ext)
        except NotReducible as exc:
            layers.append({"layer": 1, "order": G.order, "m": exc.witness, "reduced": False})
            full = tuple(range(ext.H.order))
            return ReductionReport(ext, subgroup(G, range(G.order)), ext, full, None, True, tuple(layers))
        layers.append({"layer": 1, "order": G.order, "m": rep.m_used, "reduced": True})
        return ReductionReport(ext, rep.subgroup, rep.reduced, rep.witness, rep.m_used, True, tuple(layers))
    N = subs[1]
    qext, q = quotient_extension(ext, N)
    gq = {}
    for g in range(G.order):
        gq.setdefault(q[ext.iota[g]], g)
    # images of the series in G/N, as elements of the quotient kernel
    qpos = {h: c for c, h in enumerate(qext.iota)}
    qseries = [sorted({qpos[q[ext.iota[g]]] for g in s}) for s in subs[1:]]
    top = devissage(qext, qseries)
    layers.extend({**x, "layer": x["layer"] + 1} for x in top.layers)
    image = set(top.witness)
    pre = [h for h in range(ext.H.order) if q[h] in image]
    sub1, S1, Hs1 = sub_extension(ext, pre)
    npos = S1.position
    kext, Nsub, _ = kernel_extension(sub1, [npos[x] for x in N])
    try:
        low = torsion_reduce_abelian(kext)
        final = [Hs1.elements[h] for h in low.witness]
        layers.insert(0, {"layer": 1, "order": len(N), "m": low.m_used, "reduced": True})
    except NotReducible as exc:
        final = list(Hs1.elements)
        layers.insert(0, {"layer": 1, "order": len(N), "m": exc.witness, "reduced": False})
    reduced, S, Hs = sub_extension(ext, final)
    return ReductionReport(ext, S, reduced, tuple(Hs.elements), None, True, tuple(layers))


# -- nd-torsion -------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    n: int
    d: int
    orders: tuple  # order of every class, in class order
    ok: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "orders": list(self.orders), "ok": self.ok}


def h1_exponent(kappa: OuterAction) -> int:
    Gg = kappa.G
    return abelian_cohomology(1, Gg.Gamma, Gg.G, Gg.phi).exponent


def nd_torsion_report(kappa: OuterAction) -> TorsionReport:
    if not kappa.G.G.is_abelian():
        raise NotAbelian("the nd bound concerns abelian kernels")
    grp = abelian_ext_group(kappa)
    n = kappa.F.G.order
    d = h1_exponent(kappa)
    orders = tuple(grp.order(c.index) for c in grp.ext)
    return TorsionReport(n, d, orders, all((n * d) % o == 0 for o in orders))
