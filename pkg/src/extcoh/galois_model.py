"""Finite stand-ins for k-groups: groups with an action of a finite group Gamma.

A :class:`GammaGroup` is a finite group together with ``Gamma -> Aut(G)``.
``F_Gamma = F x| Gamma`` plays the role of the acting group for all
2-cocycles, and an :class:`OuterAction` is a Gamma-equivariant homomorphism
``F -> Out(G)``.  Continuity conditions are vacuous for finite Gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotAHomomorphism, NotEquivariant, ValidationError
from .groups import (
    AutTower,
    FiniteGroup,
    GroupHom,
    Subgroup,
    automorphism_tower,
    center,
    compose_perm,
    is_automorphism,
    semidirect_product,
    trivial_group,
)


@dataclass(frozen=True, eq=False)
class GammaGroup:
    G: FiniteGroup
    Gamma: FiniteGroup
    phi: tuple  # phi[sigma] is a permutation of G's elements
    _cache: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return isinstance(other, GammaGroup) and (self.G, self.Gamma, self.phi) == (other.G, other.Gamma, other.phi)

    def __hash__(self):
        return hash((self.G, self.Gamma, self.phi))

    def act(self, sigma: int, x: int) -> int:
        return self.phi[sigma][x]

    @property
    def tower(self) -> AutTower:
        return automorphism_tower(self.G)

    @property
    def phi_index(self) -> tuple:
        """phi as indices into ``tower.aut_elems``."""
        out = self._cache.get("phi_index")
        if out is None:
            out = tuple(self.tower.index(p) for p in self.phi)
            self._cache["phi_index"] = out
        return out

    @property
    def label(self) -> str:
        return self.G.label


def gamma_group(G: FiniteGroup, Gamma: FiniteGroup, phi: Sequence[Sequence[int]] | None = None) -> GammaGroup:
    """Validate ``phi: Gamma -> Aut(G)``; ``phi=None`` means the trivial action."""
    if phi is None:
        ident = tuple(range(G.order))
        return GammaGroup(G, Gamma, tuple(ident for _ in range(Gamma.order)))
    phi = tuple(tuple(int(v) for v in p) for p in phi)
    if len(phi) != Gamma.order:
        raise NotAHomomorphism("phi needs one automorphism per element of Gamma")
    for s, p in enumerate(phi):
        if not is_automorphism(G, p):
            raise NotAHomomorphism(f"phi[{s}] is not an automorphism", witness=[s])
    if phi[Gamma.identity] != tuple(range(G.order)):
        raise NotAHomomorphism("phi(identity) must be the identity automorphism")
    for s in range(Gamma.order):
        for t in range(Gamma.order):
            if phi[Gamma.table[s][t]] != compose_perm(phi[s], phi[t]):
                raise NotAHomomorphism(f"phi is not a homomorphism at ({s},{t})", witness=[s, t])
    return GammaGroup(G, Gamma, phi)


@dataclass(frozen=True, eq=False)
class FGamma:
    F: GammaGroup
    group: FiniteGroup
    gamma_f: GroupHom  # the splitting Gamma -> F_Gamma
    proj_gamma: GroupHom

    def pair(self, x: int) -> tuple:
        """``x = (f, sigma) = f * gamma_F(sigma)``."""
        return x % self.F.G.order, x // self.F.G.order

    def index(self, f: int, sigma: int) -> int:
        return sigma * self.F.G.order + f

    @property
    def f_elements(self) -> range:
        """Indices of ``F(k_s) x {1}`` inside F_Gamma."""
        return range(self.F.G.order)


def build_f_gamma(F: GammaGroup) -> FGamma:
    cached = F._cache.get("fgamma")
    if cached is not None:
        return cached
    sd = semidirect_product(F.G, F.Gamma, F.phi, label=f"{F.G.label}x|{F.Gamma.label}")
    out = FGamma(F, sd.group, sd.embed_q, sd.proj_q)
    F._cache["fgamma"] = out
    return out


@dataclass(frozen=True, eq=False)
class OuterAction:
    F: GammaGroup
    G: GammaGroup
    kappa_bar: tuple  # F element -> Out(G) index
    canonical_lift: tuple  # F element -> Aut(G) index (smallest in the coset)
    _cache: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return isinstance(other, OuterAction) and (self.F, self.G, self.kappa_bar) == (
            other.F,
            other.G,
            other.kappa_bar,
        )

    def __hash__(self):
        return hash((self.F, self.G, self.kappa_bar))

    @property
    def Gamma(self) -> FiniteGroup:
        return self.F.Gamma

    @property
    def tower(self) -> AutTower:
        return self.G.tower

    @property
    def fgamma(self) -> FGamma:
        return build_f_gamma(self.F)

    @property
    def kappa(self) -> tuple:
        """Out(G)-class of kappa at every element of F_Gamma: ``kappa(f, s) = kappaBar(f) [phi_s]``."""
        out = self._cache.get("kappa")
        if out is None:
            T = self.tower
            fg = self.fgamma
            vals = []
            for x in range(fg.group.order):
                f, s = fg.pair(x)
                vals.append(T.coset_of[T.compose(self.canonical_lift[f], self.G.phi_index[s])])
            out = tuple(vals)
            self._cache["kappa"] = out
        return out

    @property
    def lift(self) -> tuple:
        """Canonical (lexicographically least) automorphism lifting kappa at every x in F_Gamma."""
        out = self._cache.get("lift")
        if out is None:
            T = self.tower
            out = tuple(T.out_lift[o] for o in self.kappa)
            self._cache["lift"] = out
        return out

    def is_trivial(self) -> bool:
        return all(o == 0 for o in self.kappa_bar)


def _out_phi(G: GammaGroup) -> tuple:
    T = G.tower
    return tuple(T.coset_of[a] for a in G.phi_index)


def validate_outer_action(F: GammaGroup, G: GammaGroup, kappa_bar: Sequence[int]) -> OuterAction:
    """Check that ``kappa_bar: F -> Out(G)`` is a Gamma-equivariant homomorphism."""
    if F.Gamma != G.Gamma:
        raise ValidationError("F and G must share the same Gamma")
    T = G.tower
    Out = T.out_group
    kb = tuple(int(v) for v in kappa_bar)
    if len(kb) != F.G.order or any(not 0 <= v < Out.order for v in kb):
        raise NotAHomomorphism("kappa_bar must map every element of F into Out(G)")
    if kb[F.G.identity] != Out.identity:
        raise NotAHomomorphism("kappa_bar(identity) must be the identity coset", witness=[F.G.identity])
    ophi = _out_phi(G)
    Ft, Ot = F.G.table, Out.table
    n = F.G.order
    # sigma = identity first so that plain homomorphism failures are reported as such
    sigmas = [F.Gamma.identity] + [s for s in range(F.Gamma.order) if s != F.Gamma.identity]
    for s in sigmas:
        ps, psi = ophi[s], Out.inverse[ophi[s]]
        for f in range(n):
            for f2 in range(n):
                lhs = kb[Ft[f][F.phi[s][f2]]]
                rhs = Ot[Ot[Ot[kb[f]][ps]][kb[f2]]][psi]
                if lhs != rhs:
                    if s == F.Gamma.identity:
                        raise NotAHomomorphism(
                            f"kappa_bar({f}*{f2}) != kappa_bar({f}) kappa_bar({f2})", witness=[f, f2]
                        )
                    raise NotEquivariant(f"equivariance fails at (f, f', sigma) = ({f}, {f2}, {s})", witness=[f, f2, s])
    lift = tuple(T.out_lift[o] for o in kb)
    return OuterAction(F, G, kb, lift)


def trivial_outer_action(F: GammaGroup, G: GammaGroup) -> OuterAction:
    return validate_outer_action(F, G, [0] * F.G.order)


def trivial_f(Gamma: FiniteGroup) -> GammaGroup:
    return gamma_group(trivial_group(), Gamma)


def restricted_kernel(kappa: OuterAction) -> OuterAction:
    """The trivial k-kernel of G: the outer action of the trivial group, so that F_Gamma = Gamma."""
    out = kappa._cache.get("restricted")
    if out is None:
        out = trivial_outer_action(trivial_f(kappa.Gamma), kappa.G)
        kappa._cache["restricted"] = out
    return out


def kernel_from_extension(ext, check_all: bool = True) -> OuterAction:
    """The outer action induced by conjugation in ``ext.H``.

    ``kappaBar(f)`` is the Out-class of ``int(f_hat)|_G`` for a preimage ``f_hat``
    of ``f``.  With ``check_all`` every preimage is tried and must agree.
    """
    G, F, H = ext.G, ext.F, ext.H
    T = G.tower
    pos = {h: g for g, h in enumerate(ext.iota)}
    kb = [None] * F.G.order
    for h in range(H.order):
        f = ext.pi[h]
        if kb[f] is not None and not check_all:
            continue
        perm = tuple(pos[H.conj(h, ext.iota[g])] for g in range(G.G.order))
        o = T.coset_of[T.index(perm)]
        if kb[f] is None:
            kb[f] = o
        elif kb[f] != o:
            raise ValidationError(f"induced kernel depends on the preimage of {f}", witness=[f, h])
    return validate_outer_action(F, G, kb)


@dataclass(frozen=True, eq=False)
class CenterKernel:
    """The action of F_Gamma on the center Z of G induced by an outer action."""

    kappa: OuterAction
    Z: Subgroup
    Z_gamma: GammaGroup
    kappa_z: OuterAction
    action: tuple  # x in F_Gamma -> permutation of Z (indices into Z.group)


def restrict_to_subgroup(perm: Sequence[int], sub: Subgroup) -> tuple:
    pos = sub.position
    return tuple(pos[perm[x]] for x in sub.elements)


def center_restriction(kappa: OuterAction) -> CenterKernel:
    cached = kappa._cache.get("center")
    if cached is not None:
        return cached
    G = kappa.G
    T = G.tower
    Z = center(G.G)
    phi_z = tuple(restrict_to_subgroup(p, Z) for p in G.phi)
    Zg = gamma_group(Z.group, G.Gamma, phi_z)
    TZ = Zg.tower
    kb = [TZ.coset_of[TZ.index(restrict_to_subgroup(T.aut_elems[a], Z))] for a in kappa.canonical_lift]
    kz = validate_outer_action(kappa.F, Zg, kb)
    action = tuple(restrict_to_subgroup(T.aut_elems[a], Z) for a in kappa.lift)
    out = CenterKernel(kappa, Z, Zg, kz, action)
    kappa._cache["center"] = out
    return out
