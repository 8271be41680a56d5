"""Gamma-equivariant extensions 1 -> G -> H -> F -> 1 and the comparison with H^2.

An :class:`Extension` stores H as a table together with ``iota``, ``pi`` and
the Gamma-action ``psi`` (one permutation of H per element of Gamma).
Equivalence of extensions means an isomorphism of H commuting with iota, pi
and the Gamma-actions.

Two independent routes lead to Ext(F, G, kappa):

* the cohomological one, ``phi``: cocycles on F_Gamma read off from the
  semidirect product E = H x| Gamma (:func:`cocycle_from_extension`), and back
  (:func:`build_from_cocycle`, :func:`descend_class_to_extension`);
* the direct one, :func:`classify_ext`: factor systems ``(a, b)`` on F with
  ``s(x)s(y) = b_xy s(xy)``, ``a_x = int(s(x))|G``, together with the data
  ``t`` of a Gamma-action, ``psi_s(s(f)) = t_{s,f} s(s.f)``.  Each solution is
  built as a group table and merged with the others by :func:`extension_key`.

:func:`extension_key` is a complete invariant: the least data triple
``(a on generators, b, t)`` over all sections that are multiplicative along a
fixed spanning tree of F.  Equivalent extensions give the same triples and
the triple rebuilds the extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from ._search import TableSearch, spanning_tree
from .cohomology import (
    H2Class,
    TwoCocycle,
    check_cocycle,
    enumerate_h2,
    normalize,
    restrict_to_gamma,
    coboundary_act,
)
from .errors import (
    BadSection,
    IncompatibleKernels,
    InvalidExtension,
    NotAbelian,
    NotCentral,
    NotDescendable,
    NotNormalized,
    SizeLimitExceeded,
    ValidationError,
)
from .galois_model import (
    GammaGroup,
    OuterAction,
    center_restriction,
    kernel_from_extension,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    compose_perm,
    group_from_table,
    invert_perm,
    quotient_by_normal,
    subgroup,
)

#: default cap on factor-system solutions visited by :func:`classify_ext`
EXT_BOUND = 500_000


@dataclass(frozen=True, eq=False)
class Extension:
    G: GammaGroup
    F: GammaGroup
    H: FiniteGroup
    iota: tuple  # G element -> H element
    pi: tuple  # H element -> F element
    psi: tuple  # Gamma element -> permutation of H
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def Gamma(self) -> FiniteGroup:
        return self.G.Gamma

    @property
    def kernel(self) -> OuterAction:
        out = self._cache.get("kernel")
        if out is None:
            out = self._cache["kernel"] = kernel_from_extension(self, check_all=False)
        return out

    def preimages(self, f: int) -> tuple:
        pre = self._cache.get("pre")
        if pre is None:
            lists = [[] for _ in range(self.F.G.order)]
            for h, v in enumerate(self.pi):
                lists[v].append(h)
            pre = self._cache["pre"] = tuple(tuple(x) for x in lists)
        return pre[f]

    @property
    def g_position(self) -> np.ndarray:
        """H element -> G element (or -1 outside iota(G))."""
        out = self._cache.get("gpos")
        if out is None:
            out = np.full(self.H.order, -1, dtype=np.int64)
            out[list(self.iota)] = np.arange(self.G.G.order)
            self._cache["gpos"] = out
        return out


# -- validation -------------------------------------------------------------------


def validate_extension(G: GammaGroup, F: GammaGroup, H: FiniteGroup, iota, pi, psi) -> Extension:
    if G.Gamma != F.Gamma:
        raise InvalidExtension("G and F must share the same Gamma")
    iota = tuple(int(v) for v in iota)
    pi = tuple(int(v) for v in pi)
    psi = tuple(tuple(int(v) for v in p) for p in psi)
    nG, nF, nH = G.G.order, F.G.order, H.order
    if nH != nG * nF:
        raise InvalidExtension(f"|H| = {nH} is not |G||F| = {nG * nF}", witness=[nH, nG * nF])
    if len(iota) != nG or len(pi) != nH or len(psi) != G.Gamma.order:
        raise InvalidExtension("iota, pi or psi has the wrong length")
    Ht, Gt, Ft = H.table, G.G.table, F.G.table
    for a in range(nG):
        for b in range(nG):
            if iota[Gt[a][b]] != Ht[iota[a]][iota[b]]:
                raise InvalidExtension("iota is not a homomorphism", witness=[a, b])
    if len(set(iota)) != nG:
        raise InvalidExtension("iota is not injective")
    for x in range(nH):
        for y in range(nH):
            if pi[Ht[x][y]] != Ft[pi[x]][pi[y]]:
                raise InvalidExtension("pi is not a homomorphism", witness=[x, y])
    if len(set(pi)) != nF:
        raise InvalidExtension("pi is not surjective")
    ker = {h for h in range(nH) if pi[h] == F.G.identity}
    if ker != set(iota):
        raise InvalidExtension("image(iota) != kernel(pi)")
    ident = tuple(range(nH))
    if psi[G.Gamma.identity] != ident:
        raise InvalidExtension("psi(identity) must be the identity", witness=[G.Gamma.identity])
    Gam = G.Gamma
    for s, p in enumerate(psi):
        if sorted(p) != list(ident):
            raise InvalidExtension(f"psi[{s}] is not a permutation", witness=[s])
        for x in range(nH):
            for y in range(nH):
                if p[Ht[x][y]] != Ht[p[x]][p[y]]:
                    raise InvalidExtension(f"psi[{s}] is not a homomorphism", witness=[s, x, y])
        for g in range(nG):
            if p[iota[g]] != iota[G.phi[s][g]]:
                raise InvalidExtension(f"psi[{s}] does not restrict to the action on G", witness=[s, g])
        for h in range(nH):
            if pi[p[h]] != F.phi[s][pi[h]]:
                raise InvalidExtension(f"psi[{s}] does not induce the action on F", witness=[s, h])
    for s in range(Gam.order):
        for t in range(Gam.order):
            if psi[Gam.table[s][t]] != compose_perm(psi[s], psi[t]):
                raise InvalidExtension("psi is not a homomorphism of Gamma", witness=[s, t])
    return Extension(G, F, H, iota, pi, psi)


def relabel_extension(ext: Extension, labels: Sequence[int]) -> Extension:
    """Same extension with H element ``h`` renamed ``labels[h]`` (a bijection onto 0..|H|-1)."""
    labels = np.asarray(labels, dtype=np.int64)
    nH = ext.H.order
    inv = np.empty(nH, dtype=np.int64)
    inv[labels] = np.arange(nH)
    Ht = ext.H.arr
    new_table = labels[Ht[inv[:, None], inv[None, :]]]
    H = group_from_table(new_table.tolist(), label=ext.H.label)
    iota = tuple(int(labels[h]) for h in ext.iota)
    pi = tuple(int(ext.pi[inv[h]]) for h in range(nH))
    psi = tuple(tuple(int(v) for v in labels[np.asarray(p)[inv]]) for p in ext.psi)
    return Extension(ext.G, ext.F, H, iota, pi, psi)


def standard_labels(ext: Extension, section: Sequence[int] | None = None) -> np.ndarray:
    """Labels putting ``iota(g) s(f)`` at ``f*|G| + g`` (default: least preimage as section)."""
    nG = ext.G.G.order
    if section is None:
        section = [ext.H.identity if f == ext.F.G.identity else min(ext.preimages(f)) for f in range(ext.F.G.order)]
    labels = np.empty(ext.H.order, dtype=np.int64)
    Ht = ext.H.table
    for f, s in enumerate(section):
        for g in range(nG):
            labels[Ht[ext.iota[g]][s]] = f * nG + g
    return labels


def standardize(ext: Extension, section=None) -> Extension:
    if ext.H.identity != 0:
        raise InvalidExtension("H must have identity 0")
    return relabel_extension(ext, standard_labels(ext, section))


# -- data <-> extensions -----------------------------------------------------------


def extension_from_data(kappa: OuterAction, a: Sequence[int], b: np.ndarray, t: np.ndarray, label: str = "H") -> Extension:
    """Extension on pairs ``(g, f)`` (index ``f*|G| + g``) from a factor system and Gamma-data.

    ``a[f]``: automorphism index, ``b[f1, f2]``: element of G with
    ``s(f1)s(f2) = b s(f1 f2)``, ``t[s, f]``: element of G with
    ``psi_s(s(f)) = t s(s.f)``.
    """
    G, F = kappa.G, kappa.F
    nG, nF = G.G.order, F.G.order
    Gt = G.G.arr
    Ft = F.G.arr
    aut = np.array(kappa.tower.aut_elems, dtype=np.int64)
    A = aut[np.asarray(a, dtype=np.int64)]  # (nF, nG)
    b = np.asarray(b, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    g1 = np.arange(nG)[None, :, None, None]
    f1 = np.arange(nF)[:, None, None, None]
    g2 = np.arange(nG)[None, None, None, :]
    f2 = np.arange(nF)[None, None, :, None]
    prod_g = Gt[Gt[g1, A[f1, g2]], b[f1, f2]]
    prod_f = Ft[f1, f2]
    table = (prod_f * nG + prod_g).reshape(nF * nG, nF * nG)
    H = group_from_table(table.tolist(), label=label)
    iota = tuple(range(nG))
    pi = tuple(h // nG for h in range(nG * nF))
    psi = []
    phiG = np.array(G.phi, dtype=np.int64)
    phiF = np.array(F.phi, dtype=np.int64)
    for s in range(G.Gamma.order):
        # psi_s(g s(f)) = phi_s(g) t_{s,f} s(s.f)
        gg = np.arange(nG)[None, :]
        ff = np.arange(nF)[:, None]
        img = phiF[s][ff] * nG + Gt[phiG[s][gg], t[s][ff]]
        psi.append(tuple(int(v) for v in img.reshape(-1)))
    return Extension(G, F, H, iota, pi, tuple(psi))


def _tree_sections(ext: Extension, tree=None) -> np.ndarray:
    """All sections multiplicative along the spanning tree of F, one row per choice on generators."""
    F = ext.F.G
    gens, parent, gen, bfs = tree or spanning_tree(F)
    Ht = ext.H.arr
    choices = list(product(*[ext.preimages(t) for t in gens]))
    combos = np.array(choices, dtype=np.int64).reshape(len(choices), len(gens))
    S = np.empty((combos.shape[0], F.order), dtype=np.int64)
    S[:, F.identity] = ext.H.identity
    for i, t in enumerate(gens):
        S[:, t] = combos[:, i]
    for y in bfs:
        if parent[y] != F.identity:
            S[:, y] = Ht[S[:, gen[y]], S[:, parent[y]]]
    return S


def section_data(ext: Extension, S: np.ndarray) -> tuple:
    """``(A, B, T)`` for a batch of sections ``S`` (rows): conjugation perms, b and t tables."""
    H = ext.H
    Ht = H.arr
    Hinv = H.inv_arr
    pos = ext.g_position
    iota = np.array(ext.iota, dtype=np.int64)
    Ft = ext.F.G.arr
    phiF = np.array(ext.F.phi, dtype=np.int64)
    psi = np.array(ext.psi, dtype=np.int64)
    S = np.asarray(S, dtype=np.int64)
    Sinv = Hinv[S]
    A = pos[Ht[Ht[S[:, :, None], iota[None, None, :]], Sinv[:, :, None]]]
    B = pos[Ht[Ht[S[:, :, None], S[:, None, :]], Sinv[:, Ft]]]
    T = pos[Ht[psi[:, S].transpose(1, 0, 2), Sinv[:, phiF]]]
    return A, B, T


def _key_base(ext: Extension) -> tuple:
    """Tree sections of ext with the (a on generators, b) part of their data (cached)."""
    # shared by all extensions on the same (H, iota, pi), e.g. the Gamma-action variants
    store = ext.H._cache.setdefault("key_base", {})
    tag = (ext.iota, ext.pi)
    out = store.get(tag)
    if out is None:
        tree = spanning_tree(ext.F.G)
        S = _tree_sections(ext, tree)
        A, B, _ = section_data(ext, S)
        M = S.shape[0]
        AB = np.concatenate([A[:, list(tree[0]), :].reshape(M, -1), B.reshape(M, -1)], axis=1)
        out = store[tag] = (S, AB)
    return out


def _t_data(ext: Extension, S: np.ndarray, psi: np.ndarray) -> np.ndarray:
    Ht, Hinv = ext.H.arr, ext.H.inv_arr
    phiF = np.asarray(ext.F.phi, dtype=np.int64)
    Sinv = Hinv[S]
    return ext.g_position[Ht[psi[:, S].transpose(1, 0, 2), Sinv[:, phiF]]]


def _best_row(S: np.ndarray, AB: np.ndarray, T: np.ndarray) -> tuple:
    M = S.shape[0]
    rows = np.concatenate([AB, T.reshape(M, -1)], axis=1)
    if (rows < 0).any():
        raise InvalidExtension("section data leaves iota(G)")
    best = int(np.lexsort(rows.T[::-1])[0])
    return tuple(rows[best].tolist()), tuple(S[best].tolist())


def extension_key(ext: Extension) -> tuple:
    """Complete invariant of the equivalence class of ``ext`` (see module docstring)."""
    out = ext._cache.get("key")
    if out is not None:
        return out
    S, AB = _key_base(ext)
    T = _t_data(ext, S, np.asarray(ext.psi, dtype=np.int64))
    out, sec = _best_row(S, AB, T)
    ext._cache["key"] = out
    ext._cache["key_section"] = sec
    return out


def twisted_psi(ext: Extension, vals: Sequence[int]) -> np.ndarray:
    """``int(iota(z_sigma)) o psi_sigma`` for G-values ``vals`` (unchecked)."""
    Ht, Hinv = ext.H.arr, ext.H.inv_arr
    psi = np.asarray(ext.psi, dtype=np.int64)
    c = np.asarray(ext.iota, dtype=np.int64)[np.asarray(vals, dtype=np.int64)]
    return Ht[Ht[c[:, None], psi], Hinv[c][:, None]]


def twisted_key(ext: Extension, vals: Sequence[int]) -> tuple:
    """``extension_key(twist_by_z1(vals, ext))`` without building the twist."""
    S, AB = _key_base(ext)
    return _best_row(S, AB, _t_data(ext, S, twisted_psi(ext, vals)))[0]


def canonical_extension(ext: Extension) -> Extension:
    """The representative of ``ext``'s class in standard labeling along its key-minimizing section."""
    extension_key(ext)
    out = standardize(ext, ext._cache["key_section"])
    out._cache["key"] = ext._cache["key"]
    out._cache["key_section"] = tuple(f * ext.G.G.order for f in range(ext.F.G.order))
    return out


def key_isomorphism(e1: Extension, e2: Extension):
    """The isomorphism H1 -> H2 matching the key-minimizing sections, or None if the keys differ."""
    if e1.G != e2.G or e1.F != e2.F or extension_key(e1) != extension_key(e2):
        return None
    s1, s2 = e1._cache["key_section"], e2._cache["key_section"]
    H1t, H2t = e1.H.table, e2.H.table
    theta = [0] * e1.H.order
    for f in range(e1.F.G.order):
        for g in range(e1.G.G.order):
            theta[H1t[e1.iota[g]][s1[f]]] = H2t[e2.iota[g]][s2[f]]
    return tuple(theta)


def morphism_violation(src: Extension, dst: Extension, theta: Sequence[int], on_kernel: Sequence[int]):
    """First failure of ``theta: src.H -> dst.H`` being a morphism of extensions, or None.

    ``on_kernel`` maps src.G into dst.G; ``theta`` must be a homomorphism with
    ``theta o iota = iota o on_kernel``, ``pi o theta = pi`` and commute with Gamma.
    """
    H1, H2 = src.H, dst.H
    for x in range(H1.order):
        for y in range(H1.order):
            if theta[H1.table[x][y]] != H2.table[theta[x]][theta[y]]:
                return ("hom", x, y)
    for g in range(src.G.G.order):
        if theta[src.iota[g]] != dst.iota[on_kernel[g]]:
            return ("iota", g)
    for h in range(H1.order):
        if dst.pi[theta[h]] != src.pi[h]:
            return ("pi", h)
        for s in range(src.Gamma.order):
            if theta[src.psi[s][h]] != dst.psi[s][theta[h]]:
                return ("gamma", s, h)
    return None


def find_extension_isomorphism(e1: Extension, e2: Extension):
    """An isomorphism H1 -> H2 commuting with iota, pi and psi (as a tuple), or None.

    Brute force over images of a tree-multiplicative section; independent of
    :func:`extension_key`.
    """
    if e1.G != e2.G or e1.F != e2.F:
        return None
    F = e1.F.G
    tree = spanning_tree(F)
    gens, parent, gen, bfs = tree
    S1 = _tree_sections(e1, tree)[0]
    H1, H2 = e1.H, e2.H
    H2t = H2.table
    nG = e1.G.G.order
    # every h in H1 is iota1(g) s1(f) for exactly one pair
    decomp = {}
    for f in range(F.order):
        for g in range(nG):
            decomp[H1.table[e1.iota[g]][int(S1[f])]] = (g, f)
    for imgs in product(*[e2.preimages(t) for t in gens]):
        s2 = [H2.identity] * F.order
        for t, v in zip(gens, imgs):
            s2[t] = v
        for y in bfs:
            if parent[y] != F.identity:
                s2[y] = H2t[s2[gen[y]]][s2[parent[y]]]
        theta = [0] * H1.order
        for h, (g, f) in decomp.items():
            theta[h] = H2t[e2.iota[g]][s2[f]]
        if len(set(theta)) != H1.order:
            continue
        if any(theta[H1.table[x][y]] != H2t[theta[x]][theta[y]] for x in range(H1.order) for y in range(H1.order)):
            continue
        if any(
            theta[e1.psi[s][h]] != e2.psi[s][theta[h]] for s in range(e1.Gamma.order) for h in range(H1.order)
        ):
            continue
        return tuple(theta)
    return None


# -- sub-extensions, quotients, pushforwards --------------------------------------


def _gamma_subgroup(Gg: GammaGroup, sub: Subgroup) -> GammaGroup:
    from .galois_model import gamma_group, restrict_to_subgroup

    known = Gg._cache.setdefault("sub", {})
    hit = known.get(sub.elements)
    if hit is not None and hit.G is sub.group:
        return hit
    for s, p in enumerate(Gg.phi):
        for x in sub.elements:
            if p[x] not in sub.position:
                raise ValidationError(f"subgroup is not stable under Gamma element {s}", witness=[s, x])
    out = known[sub.elements] = gamma_group(sub.group, Gg.Gamma, [restrict_to_subgroup(p, sub) for p in Gg.phi])
    return out


def sub_extension(ext: Extension, elements) -> tuple:
    """The extension ``1 -> M -> H' -> F -> 1`` for a Gamma-stable subgroup H' of H mapping onto F.

    Returns ``(sub_ext, M, Hsub)`` with M the subgroup ``iota^-1(H')`` of G and
    Hsub the subgroup H' of H (its ``elements`` are the inclusion witness).
    """
    Hs = subgroup(ext.H, elements)
    if len({ext.pi[h] for h in Hs.elements}) != ext.F.G.order:
        raise InvalidExtension("the subgroup does not map onto F")
    gpos = ext.g_position
    M = subgroup(ext.G.G, sorted(int(gpos[h]) for h in Hs.elements if gpos[h] >= 0))
    Mg = _gamma_subgroup(ext.G, M)
    pos = Hs.position
    for s, p in enumerate(ext.psi):
        for h in Hs.elements:
            if p[h] not in pos:
                raise ValidationError(f"subgroup is not stable under Gamma element {s}", witness=[s, h])
    iota = tuple(pos[ext.iota[m]] for m in M.elements)
    pi = tuple(ext.pi[h] for h in Hs.elements)
    psi = tuple(tuple(pos[p[h]] for h in Hs.elements) for p in ext.psi)
    return Extension(Mg, ext.F, Hs.group, iota, pi, psi), M, Hs


def quotient_extension(ext: Extension, N) -> tuple:
    """``1 -> G/N -> H/N -> F -> 1`` for N (elements of G) normal in H and Gamma-stable.

    Returns ``(quotient_ext, q)`` with ``q`` the projection H -> H/N as a tuple.
    """
    from .galois_model import gamma_group

    N = tuple(sorted(set(int(x) for x in N)))
    Gq, gq = quotient_by_normal(ext.G.G, N)
    Q, q = quotient_by_normal(ext.H, [ext.iota[x] for x in N])
    q = q.map
    gq = gq.map
    greps = [None] * Gq.order
    for g in range(ext.G.G.order):
        if greps[gq[g]] is None:
            greps[gq[g]] = g
    phi_q = [tuple(gq[p[greps[c]]] for c in range(Gq.order)) for p in ext.G.phi]
    Gqg = gamma_group(Gq, ext.Gamma, phi_q)
    hreps = [None] * Q.order
    for h in range(ext.H.order):
        if hreps[q[h]] is None:
            hreps[q[h]] = h
    iota = tuple(q[ext.iota[greps[c]]] for c in range(Gq.order))
    pi = tuple(ext.pi[hreps[c]] for c in range(Q.order))
    psi = tuple(tuple(q[p[hreps[c]]] for c in range(Q.order)) for p in ext.psi)
    return Extension(Gqg, ext.F, Q, iota, pi, psi), tuple(q)


def kernel_extension(ext: Extension, N) -> tuple:
    """``1 -> N -> H -> H/N -> 1`` for N (elements of G) normal in H and Gamma-stable.

    Returns ``(ext_N, Nsub, q)``: the new extension, N as a subgroup of G and
    the projection H -> H/N.
    """
    from .galois_model import gamma_group

    Nsub = subgroup(ext.G.G, N)
    Ng = _gamma_subgroup(ext.G, Nsub)
    Q, qh = quotient_by_normal(ext.H, [ext.iota[x] for x in Nsub.elements])
    q = qh.map
    hreps = [None] * Q.order
    for h in range(ext.H.order):
        if hreps[q[h]] is None:
            hreps[q[h]] = h
    phi_Q = [tuple(q[p[hreps[c]]] for c in range(Q.order)) for p in ext.psi]
    Qg = gamma_group(Q, ext.Gamma, phi_Q)
    iota = tuple(ext.iota[x] for x in Nsub.elements)
    return Extension(Ng, Qg, ext.H, iota, tuple(q), ext.psi), Nsub, tuple(q)


def pushforward_abelian(sub_ext: Extension, M: Subgroup, kappa: OuterAction) -> Extension:
    """Pushforward of an extension by M along the inclusion into an abelian A (kernel ``kappa``)."""
    S = _tree_sections(sub_ext)[:1]
    _, B, T = section_data(sub_ext, S)
    emb = np.array(M.elements, dtype=np.int64)
    return extension_from_data(kappa, kappa.canonical_lift, emb[B[0]], emb[T[0]])


def zero_extension(kappa: OuterAction) -> Extension:
    """The semidirect product G x| F with the diagonal Gamma-action (needs a homomorphic lift)."""
    nF = kappa.F.G.order
    return extension_from_data(
        kappa,
        kappa.canonical_lift,
        np.zeros((nF, nF), dtype=np.int64),
        np.zeros((kappa.Gamma.order, nF), dtype=np.int64),
    )


def as_center_extension(ext: Extension) -> Extension:
    """``ext`` read as an extension by the center of G (requires G abelian)."""
    if not ext.G.G.is_abelian():
        raise NotAbelian("only extensions with abelian kernel are extensions by their center")
    ck = center_restriction(ext.kernel)
    iota = tuple(ext.iota[g] for g in ck.Z.elements)
    out = Extension(ck.Z_gamma, ext.F, ext.H, iota, ext.pi, ext.psi)
    out._cache["kernel"] = ck.kappa_z
    return out


def ext_order(ext: Extension) -> int:
    """Order of the class of ``ext`` in the Baer-sum group (abelian kernel), via keys only."""
    if not ext.G.G.is_abelian():
        raise NotAbelian("Ext is a group only for abelian kernels")
    zkey = extension_key(zero_extension(ext.kernel))
    zeta = as_center_extension(ext)
    cur, k = ext, 1
    while extension_key(cur) != zkey:
        cur = act_by_center_ext(zeta, cur)
        k += 1
        if k > ext.H.order ** 2:
            raise AssertionError("Baer multiples do not return to zero")
    return k


# -- cocycles <-> extensions -------------------------------------------------------


def build_from_cocycle(w: TwoCocycle, label: str = "H") -> Extension:
    """The extension H inside E = G x F_Gamma built from a restricted-normal cocycle.

    E has law ``(g1, x)(g2, y) = (g1 f_x(g2) g_xy^-1, xy)`` so that
    ``s(x) = (1, x)`` satisfies ``s(xy) = g_xy s(x) s(y)`` and conjugation by
    ``s(x)`` is ``f_x`` on G.  H is the preimage of F, with Gamma acting by
    conjugation through ``s(1, sigma)``.
    """
    if not w.is_restricted_normal():
        raise NotNormalized("cocycle is not in restricted-normal form")
    kappa = w.kappa
    G, F = kappa.G, kappa.F
    fg = kappa.fgamma
    X = fg.group
    nG, nF, n = G.G.order, F.G.order, X.order
    Gt, Gi, Xt = G.G.arr, G.G.inv_arr, X.arr
    T = kappa.tower
    aut = np.asarray(T.aut_elems, dtype=np.int64)
    fw = np.asarray(w.f, dtype=np.int64)
    A = aut[fw]
    Ainv = aut[np.asarray(T.aut_group.inverse, dtype=np.int64)[fw]]
    gw = np.asarray(w.g, dtype=np.int64).reshape(n, n)

    def emul(g1, x, g2, y):
        return Gt[Gt[g1, A[x, g2]], Gi[gw[x, y]]], Xt[x, y]

    e = F.G.identity
    fidx = np.array([fg.index(f, kappa.Gamma.identity) for f in range(nF)], dtype=np.int64)
    fpos = np.full(n, -1, dtype=np.int64)
    fpos[fidx] = np.arange(nF)
    # H: pairs (g, (f, 1)) at f*|G| + g
    g1 = np.repeat(np.arange(nG)[None, :], nF, axis=0).reshape(-1)
    x1 = np.repeat(fidx, nG)
    g, x = emul(g1[:, None], x1[:, None], g1[None, :], x1[None, :])
    H = group_from_table(fpos[x] * nG + g, label=label)
    psi = []
    for s in range(kappa.Gamma.order):
        xs = fg.index(e, s)
        xi = X.inverse[xs]
        # (1, xs)(h, xs^-1) = (1, 1)  <=>  f_xs(h) = g_{xs, xs^-1}
        hi = Ainv[xs, gw[xs, xi]]
        ga, xa = emul(np.full_like(g1, G.G.identity), np.full_like(x1, xs), g1, x1)
        gb, xb = emul(ga, xa, np.full_like(g1, hi), np.full_like(x1, xi))
        psi.append(tuple((fpos[xb] * nG + gb).tolist()))
    return Extension(G, F, H, tuple(range(nG)), tuple(h // nG for h in range(nG * nF)), tuple(psi))


def default_section(ext: Extension) -> tuple:
    return tuple(
        ext.H.identity if f == ext.F.G.identity else min(ext.preimages(f)) for f in range(ext.F.G.order)
    )


def _check_section(ext: Extension, section) -> tuple:
    H, F = ext.H, ext.F.G
    if section is None:
        return default_section(ext)
    section = tuple(int(v) for v in section)
    if len(section) != F.order:
        raise BadSection("section needs one element per element of F")
    for f, h in enumerate(section):
        if not 0 <= h < H.order or ext.pi[h] != f:
            raise BadSection(f"section[{f}] does not lie over {f}", witness=[f, h])
    if section[F.identity] != H.identity:
        raise BadSection("section must send the identity to the identity", witness=[F.identity])
    return section


def _g_array(ext: Extension, section: Sequence[int], kappa: OuterAction, psi=None) -> np.ndarray:
    """``g_xy = s(xy) (s(x) s(y))^-1`` on F_Gamma x F_Gamma as an ``n x n`` array.

    ``psi`` may replace ``ext.psi``; with a leading batch axis the result has one too.
    """
    fg = kappa.fgamma
    n = fg.group.order
    pairs = np.array([fg.pair(x) for x in range(n)], dtype=np.int64).reshape(n, 2)
    f, s = pairs[:, 0], pairs[:, 1]
    sec = np.asarray(section, dtype=np.int64)
    Ht, Hinv = ext.H.arr, ext.H.inv_arr
    psi = np.asarray(ext.psi if psi is None else psi, dtype=np.int64)
    phiF = np.asarray(ext.F.phi, dtype=np.int64)
    Ft = ext.F.G.arr
    # s(x)s(y) = (s_f1 psi_s1(s_f2), s1 s2); s(xy) = (s_{f1 . s1(f2)}, s1 s2)
    prod_h = Ht[sec[f][:, None], psi[..., s[:, None], sec[f][None, :]]]
    top = sec[Ft[f[:, None], phiF[s[:, None], f[None, :]]]]
    out = ext.g_position[Ht[top, Hinv[prod_h]]]
    if (out < 0).any():
        raise BadSection("section products leave iota(G)")
    return out


def cocycle_from_extension(ext: Extension, section: Sequence[int] | None = None, kappa: OuterAction | None = None, validate: bool = True) -> TwoCocycle:
    """The cocycle of ``E = H x| Gamma`` for the section ``s(f, sigma) = (section[f], sigma)``.

    ``section[f]`` must lie over ``f`` and ``section[1]`` must be the identity.
    """
    if kappa is None:
        kappa = ext.kernel
    section = _check_section(ext, section)
    fg = kappa.fgamma
    n = fg.group.order
    T = kappa.tower
    Ht, Hi = ext.H.table, ext.H.inverse
    pos = ext.g_position
    iota = ext.iota
    nG = ext.G.G.order
    phiG = ext.G.phi
    f_out = []
    for x in range(n):
        f, s = fg.pair(x)
        h = section[f]
        hi = Hi[h]
        perm = tuple(int(pos[Ht[Ht[h][iota[phiG[s][g]]]][hi]]) for g in range(nG))
        f_out.append(T.index(perm))
    g_out = tuple(_g_array(ext, section, kappa).reshape(-1).tolist())
    if validate:
        return check_cocycle(kappa, f_out, g_out)
    return TwoCocycle(kappa, tuple(f_out), g_out)


def phi_batch(exts: Sequence[Extension], kappa: OuterAction) -> list:
    """Indices of phi for many extensions inducing ``kappa``; batched for abelian kernels."""
    h2 = enumerate_h2(kappa)
    if h2.method != "linear" or not exts:
        return [phi(e).index for e in exts]
    # abelian kernel: f_x is the action itself, only g varies
    w0 = cocycle_from_extension(exts[0], kappa=kappa)
    if w0.f != tuple(kappa.lift):
        return [phi(e).index for e in exts]
    g = np.stack([_g_array(e, default_section(e), kappa) for e in exts])
    return h2.classify_g_batch(g).tolist()


def phi_of_twists(ext: Extension, values: Sequence[Sequence[int]], kappa: OuterAction) -> list:
    """phi of ``twist_by_z1(v, ext)`` for each central value list ``v``; batched for abelian kernels."""
    h2 = enumerate_h2(kappa)
    if h2.method != "linear" or not len(values):
        return phi_batch([twist_by_z1(v, ext) for v in values], kappa)
    if cocycle_from_extension(ext, kappa=kappa).f != tuple(kappa.lift):
        return phi_batch([twist_by_z1(v, ext) for v in values], kappa)
    for v in values:
        _center_values(v, ext)
    psis = np.stack([twisted_psi(ext, v) for v in values])
    return h2.classify_g_batch(_g_array(ext, default_section(ext), kappa, psis)).tolist()


def phi(xi) -> H2Class:
    """The class in H^2(F, G, kappa) of an extension (or ExtClass)."""
    ext = xi.representative if isinstance(xi, ExtClass) else xi
    w = cocycle_from_extension(ext)
    return enumerate_h2(w.kappa).class_of(w)


def descend_class_to_extension(cls: H2Class) -> Extension:
    w, _ = normalize(cls.representative)
    res = restrict_to_gamma(w)
    if not res.in_ker_res:
        raise NotDescendable("the class does not restrict to the base point on Gamma", witness=cls.index)
    kappa = w.kappa
    fg = kappa.fgamma
    e = kappa.G.G.identity
    c = [e] * w.n
    for s, x in enumerate(fg.gamma_f.map):
        c[x] = res.witness[s]
    w2 = coboundary_act(tuple(c), w)
    return build_from_cocycle(w2)


# -- twisting by 1-cocycles --------------------------------------------------------


@dataclass(frozen=True)
class OneCocycle:
    module: GammaGroup  # abelian group with Gamma-action
    z: tuple  # Gamma element -> module element


def validate_one_cocycle(module: GammaGroup, z: Sequence[int]) -> OneCocycle:
    Z, Gam = module.G, module.Gamma
    if not Z.is_abelian():
        raise NotAbelian("1-cocycles are taken in an abelian module")
    z = tuple(int(v) for v in z)
    if len(z) != Gam.order:
        raise ValidationError("z needs one value per element of Gamma")
    if z[Gam.identity] != Z.identity:
        raise ValidationError("z must vanish at the identity", witness=[Gam.identity])
    for s in range(Gam.order):
        for t in range(Gam.order):
            if z[Gam.table[s][t]] != Z.table[z[s]][module.phi[s][z[t]]]:
                raise ValidationError(f"cocycle condition fails at ({s},{t})", witness=[s, t])
    return OneCocycle(module, z)


def one_cocycles(module: GammaGroup) -> list:
    """Every 1-cocycle Gamma -> module, by brute force over the generators of Gamma."""
    Z, Gam = module.G, module.Gamma
    gens, parent, gen, bfs = spanning_tree(Gam)
    out = []
    for vals in product(range(Z.order), repeat=len(gens)):
        z = [Z.identity] * Gam.order
        for t, v in zip(gens, vals):
            z[t] = v
        for y in bfs:
            p = parent[y]
            if p != Gam.identity:
                t = gen[y]
                z[y] = Z.table[z[t]][module.phi[t][z[p]]]
        try:
            out.append(validate_one_cocycle(module, z))
        except ValidationError:
            pass
    return out


def one_coboundary(module: GammaGroup, a: int) -> OneCocycle:
    """``sigma -> sigma(a) a^-1``."""
    Z = module.G
    return OneCocycle(module, tuple(Z.table[module.phi[s][a]][Z.inverse[a]] for s in range(module.Gamma.order)))


def cocycle_product(z1: OneCocycle, z2: OneCocycle) -> OneCocycle:
    Z = z1.module.G
    return OneCocycle(z1.module, tuple(Z.table[a][b] for a, b in zip(z1.z, z2.z)))


def _center_values(z, ext: Extension) -> tuple:
    """Values of z in G, checking they are central."""
    G = ext.G.G
    if isinstance(z, OneCocycle):
        ck = center_restriction(ext.kernel)
        if z.module.G == ck.Z.group:
            vals = tuple(ck.Z.elements[v] for v in z.z)
        elif z.module.G == G:
            vals = z.z
        else:
            raise NotCentral("z is not valued in the center of G")
    else:
        vals = tuple(int(v) for v in z)
    for s, v in enumerate(vals):
        if any(G.table[v][x] != G.table[x][v] for x in range(G.order)):
            raise NotCentral(f"z({s}) is not central", witness=[s, v])
    return vals


def twist_by_z1(z, xi) -> Extension:
    """Same H, iota, pi; new action ``sigma -> int(iota(z_sigma)) o psi_sigma``."""
    ext = xi.representative if isinstance(xi, ExtClass) else xi
    vals = _center_values(z, ext)
    psi = tuple(tuple(row) for row in twisted_psi(ext, vals).tolist())
    out = Extension(ext.G, ext.F, ext.H, ext.iota, ext.pi, psi)
    kern = ext._cache.get("kernel")
    if kern is not None:
        out._cache["kernel"] = kern
    return out


# -- the direct classification -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtClass:
    representative: Extension
    kappa: OuterAction
    key: tuple
    index: int


class ExtSet:
    """Classes of Ext(F, G, kappa) in canonical (key) order with a lookup by key.

    ``raw(i)`` is the first extension met for class ``i``; the canonical
    representative (``self[i].representative``) is built on first access.
    """

    def __init__(self, kappa: OuterAction, raw: dict, solutions: int):
        self.kappa = kappa
        self.keys = sorted(raw)
        self._raw = [raw[k] for k in self.keys]
        self.by_key = {k: i for i, k in enumerate(self.keys)}
        self.solutions = solutions
        self._classes: dict = {}
        self._cache: dict = {}

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        out = self._classes.get(i)
        if out is None:
            out = ExtClass(canonical_extension(self._raw[i]), self.kappa, self.keys[i], i)
            self._classes[i] = out
        return out

    def raw(self, i: int) -> Extension:
        return self._raw[i]

    def classify(self, ext: Extension) -> int:
        idx = self.by_key.get(extension_key(ext))
        if idx is None:
            raise ValidationError("extension does not match any enumerated class")
        return idx

    def classify_key(self, key: tuple) -> int:
        idx = self.by_key.get(key)
        if idx is None:
            raise ValidationError("key does not match any enumerated class")
        return idx

    def class_of(self, ext: Extension) -> ExtClass:
        return self[self.classify(ext)]


def _factor_systems(kappa: OuterAction, bound):
    """Yield ``(a, b)``: tree-normal factor systems on F lifting kappa."""
    F = kappa.F.G
    G = kappa.G.G
    T = kappa.tower
    m = F.order
    gens, parent, gen, bfs = spanning_tree(F)
    Ft = F.table
    Gt = G.table
    aut = T.aut_elems
    Ainv = T.aut_group.inverse
    choices = [sorted({T.compose(i, kappa.canonical_lift[t]) for i in T.inn_indices}) for t in gens]
    e = G.identity
    fixed = {}
    for x in range(m):
        fixed[x] = e
        fixed[x * m] = e
    for y in bfs:
        if parent[y] != F.identity:
            fixed[gen[y] * m + parent[y]] = e
    eqs = []
    for x in range(1, m):
        for y in range(1, m):
            for z in range(1, m):
                # b_xy b_{xy,z} = a_x(b_yz) b_{x,yz}
                eqs.append((x * m + y, Ft[x][y] * m + z, y * m + z, x * m + Ft[y][z], x))
    order = [c for c in range(m * m) if c not in fixed]
    count = 0
    for a_gens in product(*choices):
        a = [0] * m
        for t, v in zip(gens, a_gens):
            a[t] = v
        for y in bfs:
            if parent[y] != F.identity:
                a[y] = T.compose(a[gen[y]], a[parent[y]])
        doms = [None] * (m * m)
        ok = True
        for x in range(m):
            for y in range(m):
                pre = T.inner_preimages.get(T.compose(T.compose(a[x], a[y]), Ainv[a[Ft[x][y]]]))
                if pre is None:
                    ok = False
                    break
                doms[x * m + y] = pre
            if not ok:
                break
        if not ok or any(e not in doms[c] for c in fixed):
            continue

        def check(vals, eq, a=a):
            return Gt[vals[eq[0]]][vals[eq[1]]] == Gt[aut[a[eq[4]]][vals[eq[2]]]][vals[eq[3]]]

        for b in TableSearch(m * m, doms, fixed, eqs, check, order).solutions():
            count += 1
            if bound is not None and count > bound:
                raise SizeLimitExceeded(f"more than {bound} factor systems", witness=bound)
            yield tuple(a), np.array(b, dtype=np.int64).reshape(m, m)


def _gamma_actions(kappa: OuterAction, H_table: np.ndarray, H_gens: Sequence[int]):
    """Every Gamma-action on the group (pairs (g, f) at f*|G|+g) compatible with G and F."""
    G, F = kappa.G, kappa.F
    Gam = kappa.Gamma
    nG, nF = G.G.order, F.G.order
    gensF, parentF, genF, bfsF = spanning_tree(F.G)
    gensG, parentG, genG, bfsG = spanning_tree(Gam)
    ident = np.arange(nG * nF)
    Gt = G.G.arr
    per_gen = []
    for s in gensG:
        valid = []
        phiG = np.array(G.phi[s], dtype=np.int64)
        for tv in product(range(nG), repeat=len(gensF)):
            img_s = np.empty(nF, dtype=np.int64)
            img_s[F.G.identity] = 0
            for t, v in zip(gensF, tv):
                img_s[t] = F.phi[s][t] * nG + v
            for y in bfsF:
                if parentF[y] != F.G.identity:
                    img_s[y] = H_table[img_s[genF[y]], img_s[parentF[y]]]
            # psi(g s(f)) = iota(phi(g)) psi(s(f)); iota(g) is the element g
            p = H_table[phiG[np.arange(nG)][None, :], img_s[:, None]].reshape(-1)
            hom = all((p[H_table[h]] == H_table[p[h], p]).all() for h in H_gens)
            if hom and len(set(p.tolist())) == nG * nF:
                valid.append(p)
        per_gen.append(valid)
    for combo in product(*per_gen):
        psi = [None] * Gam.order
        psi[Gam.identity] = ident
        for s, p in zip(gensG, combo):
            psi[s] = p
        for y in bfsG:
            if parentG[y] != Gam.identity:
                psi[y] = psi[genG[y]][psi[parentG[y]]]
        ok = all(
            (psi[Gam.table[s][t]] == psi[s][psi[t]]).all() for s in range(Gam.order) for t in range(Gam.order)
        )
        if ok:
            yield tuple(tuple(int(v) for v in p) for p in psi)


def classify_ext(kappa: OuterAction, bound: int | None = EXT_BOUND) -> ExtSet:
    """Ext(F, G, kappa) by the direct route: factor systems + Gamma-data, merged by key."""
    cache = kappa._cache.setdefault("ext", {})
    if bound in cache or None in cache:
        return cache.get(bound) or cache[None]
    reps = {}
    count = 0
    for a, b in _factor_systems(kappa, bound):
        t0 = np.zeros((kappa.Gamma.order, kappa.F.G.order), dtype=np.int64)
        base = extension_from_data(kappa, a, b, t0)
        H_gens = base.H.generators()
        for psi in _gamma_actions(kappa, base.H.arr, H_gens):
            count += 1
            if bound is not None and count > bound:
                raise SizeLimitExceeded(f"more than {bound} extension data", witness=bound)
            ext = Extension(base.G, base.F, base.H, base.iota, base.pi, psi)
            base.preimages(0)
            ext._cache["pre"] = base._cache["pre"]
            ext._cache["gpos"] = base.g_position
            ext._cache["kernel"] = kappa
            key = extension_key(ext)
            if key not in reps:
                reps[key] = ext
    out = ExtSet(kappa, reps, count)
    cache[bound] = out
    return out


def h1_generator_values(kappa: OuterAction) -> list:
    """G-values of 1-cocycles Gamma -> Z(G) representing generators of H^1(Gamma, Z(G))."""
    from .abelian import abelian_cohomology

    ck = center_restriction(kappa)
    Zg = ck.Z_gamma
    h1 = abelian_cohomology(1, Zg.Gamma, Zg.G, Zg.phi)
    out = []
    for j in range(len(h1.invariants)):
        e = [0] * len(h1.invariants)
        e[j] = 1
        z = np.asarray(h1.cocycle(tuple(e))).reshape(-1)
        out.append(tuple(ck.Z.elements[int(v)] for v in z))
    return out


def twist_orbits(ext_set: ExtSet) -> list:
    """Orbits of H^1(Gamma, Z(G)) on the classes, as sorted index tuples.

    Connected components of the graph joining each class to its twists by
    generators of H^1 (coboundaries never move a class).
    """
    cached = ext_set._cache.get("twist_orbits")
    if cached is not None:
        return cached
    gens = h1_generator_values(ext_set.kappa)
    parent = list(range(len(ext_set)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(ext_set)):
        ext = ext_set.raw(i)
        for vals in gens:
            j = ext_set.classify_key(twisted_key(ext, vals))
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for i in range(len(ext_set)):
        groups.setdefault(find(i), []).append(i)
    out = sorted(tuple(v) for v in groups.values())
    ext_set._cache["twist_orbits"] = out
    return out


# -- the action of Ext(F, Z, kappa|Z) ------------------------------------------------


def act_by_center_ext(zeta, xi) -> Extension:
    """Fiber product of H_xi and H_zeta over F modulo the antidiagonal copy of Z."""
    ez = zeta.representative if isinstance(zeta, ExtClass) else zeta
    ex = xi.representative if isinstance(xi, ExtClass) else xi
    kappa = ex.kernel
    ck = center_restriction(kappa)
    if ez.F != ex.F or ez.G != ck.Z_gamma or ez.kernel != ck.kappa_z:
        raise IncompatibleKernels("zeta is not an extension by the center with the induced kernel")
    Hx, Hz = ex.H, ez.H
    pix = np.asarray(ex.pi, dtype=np.int64)
    piz = np.asarray(ez.pi, dtype=np.int64)
    ph, pk = np.nonzero(pix[:, None] == piz[None, :])
    P = len(ph)
    index = np.full((Hx.order, Hz.order), -1, dtype=np.int64)
    index[ph, pk] = np.arange(P)

    def mul(i, j):
        return index[Hx.arr[ph[i], ph[j]], Hz.arr[pk[i], pk[j]]]

    # antidiagonal {(iota_xi(z)^-1, iota_zeta(z))}
    zx = np.asarray(ex.iota, dtype=np.int64)[np.asarray(ck.Z.elements, dtype=np.int64)]
    N = index[Hx.inv_arr[zx], np.asarray(ez.iota, dtype=np.int64)]
    label = mul(N[:, None], np.arange(P)[None, :]).min(axis=0)
    reps = np.unique(label)
    new = np.searchsorted(reps, label)
    Q = new[mul(reps[:, None], reps[None, :])]
    H = group_from_table(Q, label=f"{Hx.label}*{Hz.label}")
    iota = tuple(new[index[np.asarray(ex.iota, dtype=np.int64), Hz.identity]].tolist())
    pi = tuple(pix[ph[reps]].tolist())
    psx = np.asarray(ex.psi, dtype=np.int64)
    psz = np.asarray(ez.psi, dtype=np.int64)
    psi = tuple(tuple(new[index[psx[s][ph[reps]], psz[s][pk[reps]]]].tolist()) for s in range(ex.Gamma.order))
    out = Extension(ex.G, ex.F, H, iota, pi, psi)
    if H.identity != 0:
        raise InvalidExtension("quotient identity is not labelled 0")
    return standardize(out)


def center_extensions(kappa: OuterAction, bound: int | None = EXT_BOUND) -> ExtSet:
    return classify_ext(center_restriction(kappa).kappa_z, bound)


# -- the abelian group Ext(F, A, kappa) ------------------------------------------------


class AbelianExtGroup:
    """Ext(F, A, kappa) for abelian A with Baer sum, zero, orders and psi."""

    def __init__(self, kappa: OuterAction, bound: int | None = EXT_BOUND):
        if not kappa.G.G.is_abelian():
            raise NotAbelian("Ext is a group only for abelian kernels")
        self.kappa = kappa
        self.ext = classify_ext(kappa, bound)
        self.ck = center_restriction(kappa)
        self._sum: dict = {}
        self.zero = self.ext.classify(zero_extension(kappa))

    def __len__(self):
        return len(self.ext)

    def as_center(self, i: int) -> Extension:
        """Class ``i`` seen as an extension by the center (same tables, center Gamma-group)."""
        return as_center_extension(self.ext[i].representative)

    def add(self, i: int, j: int) -> int:
        key = (i, j)
        out = self._sum.get(key)
        if out is None:
            out = self.ext.classify(act_by_center_ext(self.as_center(i), self.ext[j]))
            self._sum[key] = out
        return out

    def multiple(self, m: int, i: int) -> int:
        out = self.zero
        for _ in range(m):
            out = self.add(i, out)
        return out

    def order(self, i: int) -> int:
        k, cur = 1, i
        while cur != self.zero:
            cur = self.add(i, cur)
            k += 1
            if k > len(self) + 1:
                raise AssertionError("element order exceeds the group order")
        return k

    def neg(self, i: int) -> int:
        return self.multiple(self.order(i) - 1, i)

    def psi_map(self) -> dict:
        """H^1(Gamma, A) -> Ext: coordinates of each class to the index of its twist of zero."""
        from .abelian import abelian_cohomology

        Zg = self.ck.Z_gamma
        h1 = abelian_cohomology(1, Zg.Gamma, Zg.G, Zg.phi)
        out = {}
        for coords in h1.elements():
            z = h1.cocycle(coords)
            oc = OneCocycle(Zg, tuple(int(v) for v in np.asarray(z).reshape(-1)))
            out[coords] = self.ext.classify(twist_by_z1(oc, self.ext[self.zero]))
        return out


def abelian_ext_group(kappa: OuterAction, bound: int | None = EXT_BOUND) -> AbelianExtGroup:
    cache = kappa._cache.setdefault("abelian_ext", {})
    out = cache.get(bound)
    if out is None:
        out = cache[bound] = AbelianExtGroup(kappa, bound)
    return out


def abstract_isomorphism_classes(ext_set: ExtSet) -> int:
    """Diagnostic: number of distinct abstract isomorphism types of H among the classes."""
    from .groups import are_isomorphic

    reps: list = []
    for c in ext_set:
        H = c.representative.H
        if not any(are_isomorphic(H, R) for R in reps):
            reps.append(H)
    return len(reps)
