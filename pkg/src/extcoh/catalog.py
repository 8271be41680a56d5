"""The bundled instance catalog.

Two parts:

* the *zoo*: every (F, G, Gamma, kappa) with |F| <= 4, |G| <= 8, |Gamma| <= 2,
  listed once per isomorphism type.  Gamma-actions are taken up to conjugacy
  in Aut, and kappa up to the action of the Gamma-equivariant automorphisms of
  F and G;
* named *fixtures*: the small hand-picked instances the tests and CLI refer to.

Instances are plain data (tables and permutations) so the CLI can serialize
them; :func:`Instance.kappa` builds and validates the outer action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .galois_model import GammaGroup, OuterAction, gamma_group, validate_outer_action
from .groups import (
    FiniteGroup,
    automorphism_tower,
    compose_perm,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    invert_perm,
    quaternion,
    relabel,
    symmetric3,
    trivial_group,
)


@dataclass(eq=False)
class Instance:
    name: str
    F: FiniteGroup
    G: FiniteGroup
    Gamma: FiniteGroup
    phi_F: tuple  # Gamma -> permutations of F
    phi_G: tuple  # Gamma -> permutations of G
    kappa_bar: tuple  # F -> Out(G) index
    tags: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False)

    def kappa(self) -> OuterAction:
        out = self._cache.get("kappa")
        if out is None:
            Fg = gamma_group(self.F, self.Gamma, self.phi_F)
            Gg = gamma_group(self.G, self.Gamma, self.phi_G)
            out = validate_outer_action(Fg, Gg, self.kappa_bar)
            self._cache["kappa"] = out
        return out

    @property
    def size(self) -> int:
        return self.F.order * self.Gamma.order * self.G.order


# -- the group zoo -------------------------------------------------------------


@lru_cache(maxsize=None)
def f_groups() -> tuple:
    return (
        trivial_group(),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        relabel(elementary_abelian(2, 2), "V4"),
    )


@lru_cache(maxsize=None)
def g_groups() -> tuple:
    return (
        trivial_group(),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        relabel(elementary_abelian(2, 2), "V4"),
        cyclic(5),
        cyclic(6),
        symmetric3(),
        cyclic(7),
        cyclic(8),
        relabel(direct_product(cyclic(4), cyclic(2)), "Z4xZ2"),
        relabel(elementary_abelian(2, 3), "Z2^3"),
        dihedral(4),
        quaternion(),
    )


@lru_cache(maxsize=None)
def gamma_groups() -> tuple:
    return (trivial_group(), cyclic(2))


def gamma_actions(G: FiniteGroup, Gamma: FiniteGroup) -> list:
    """Actions of Gamma (trivial or Z/2) on G, one per Aut(G)-conjugacy class."""
    ident = tuple(range(G.order))
    if Gamma.order == 1:
        return [(ident,)]
    if Gamma.order != 2:
        raise ValueError("zoo actions only for |Gamma| <= 2")
    T = automorphism_tower(G)
    A = T.aut_group
    seen = set()
    reps = []
    for a in range(A.order):
        if A.table[a][a] != A.identity or a in seen:
            continue
        cls = {A.table[A.table[b][a]][A.inverse[b]] for b in range(A.order)}
        seen |= cls
        reps.append(min(cls))
    return [(ident, T.aut_elems[a]) for a in sorted(reps)]


def _equivariant_auts(G: FiniteGroup, phi: tuple) -> list:
    T = automorphism_tower(G)
    out = []
    for a, perm in enumerate(T.aut_elems):
        if all(compose_perm(perm, p) == compose_perm(p, perm) for p in phi):
            out.append(a)
    return out


def _out_homs(F: FiniteGroup, G: FiniteGroup) -> list:
    """All homomorphisms F -> Out(G) as tuples."""
    Out = automorphism_tower(G).out_group
    gens = F.generators()
    out = []
    for imgs in product(range(Out.order), repeat=len(gens)):
        m = {F.identity: Out.identity}
        frontier = [F.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for t, o in zip(gens, imgs):
                    y = F.table[t][x]
                    v = Out.table[o][m[x]]
                    if y in m:
                        if m[y] != v:
                            ok = False
                            break
                    else:
                        m[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and len(m) == F.order:
            out.append(tuple(m[x] for x in range(F.order)))
    return sorted(set(out))


def outer_actions(F: FiniteGroup, G: FiniteGroup, Gamma: FiniteGroup, phi_F: tuple, phi_G: tuple) -> list:
    """Equivariant ``kappa_bar: F -> Out(G)``, one per orbit of Aut_Gamma(F) x Aut_Gamma(G)."""
    Fg = gamma_group(F, Gamma, phi_F)
    Gg = gamma_group(G, Gamma, phi_G)
    TF, TG = automorphism_tower(F), automorphism_tower(G)
    aF = [TF.aut_elems[a] for a in _equivariant_auts(F, Fg.phi)]
    aG = _equivariant_auts(G, Gg.phi)
    OG = TG.out_group
    valid = []
    from .errors import ValidationError

    for kb in _out_homs(F, G):
        try:
            validate_outer_action(Fg, Gg, kb)
        except ValidationError:
            continue
        valid.append(kb)
    seen = set()
    reps = []
    for kb in valid:
        if kb in seen:
            continue
        orbit = set()
        for alpha in aF:
            ainv = invert_perm(alpha)
            for b in aG:
                ob = TG.coset_of[b]
                obi = OG.inverse[ob]
                orbit.add(tuple(OG.table[OG.table[ob][kb[ainv[f]]]][obi] for f in range(F.order)))
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps)


def _action_label(G: FiniteGroup, phi: tuple) -> str:
    if all(p == tuple(range(G.order)) for p in phi):
        return "triv"
    T = automorphism_tower(G)
    return "a" + str(T.index(phi[1]))


@lru_cache(maxsize=None)
def zoo() -> tuple:
    out = []
    for Gamma in gamma_groups():
        for F in f_groups():
            for phi_F in gamma_actions(F, Gamma):
                for G in g_groups():
                    for phi_G in gamma_actions(G, Gamma):
                        for kb in outer_actions(F, G, Gamma, phi_F, phi_G):
                            name = (
                                f"F={F.label}[{_action_label(F, phi_F)}]"
                                f"/G={G.label}[{_action_label(G, phi_G)}]"
                                f"/Gamma={Gamma.label}/k=" + ".".join(map(str, kb))
                            )
                            out.append(Instance(name, F, G, Gamma, phi_F, phi_G, kb, ("zoo",)))
    return tuple(out)


# -- named fixtures ---------------------------------------------------------------


def _kb_from_lifts(F: FiniteGroup, G: FiniteGroup, gen_lifts: dict) -> tuple:
    """kappa_bar from automorphism permutations of G on generators of F (others trivial)."""
    T = automorphism_tower(G)
    Out = T.out_group
    images = {g: Out.identity for g in F.generators()}
    images.update({g: T.coset_of[T.index(p)] for g, p in gen_lifts.items()})
    kb = {F.identity: Out.identity}
    frontier = [F.identity]
    gens = list(images)
    while frontier:
        nxt = []
        for x in frontier:
            for t in gens:
                y = F.table[t][x]
                if y not in kb:
                    kb[y] = Out.table[images[t]][kb[x]]
                    nxt.append(y)
        frontier = nxt
    return tuple(kb[x] for x in range(F.order))


def _ident(G: FiniteGroup) -> tuple:
    return tuple(range(G.order))


def _trivial_actions(G: FiniteGroup, Gamma: FiniteGroup) -> tuple:
    return tuple(_ident(G) for _ in range(Gamma.order))


def _fixture(name, F, G, Gamma, phi_F=None, phi_G=None, gen_lifts=None, tags=()) -> Instance:
    phi_F = phi_F or _trivial_actions(F, Gamma)
    phi_G = phi_G or _trivial_actions(G, Gamma)
    kb = _kb_from_lifts(F, G, gen_lifts or {})
    return Instance(name, F, G, Gamma, tuple(phi_F), tuple(phi_G), kb, ("fixture",) + tuple(tags))


@lru_cache(maxsize=None)
def fixtures() -> tuple:
    one = trivial_group()
    Z2, Z3, Z4, Z6 = cyclic(2), cyclic(3), cyclic(4), cyclic(6)
    V4 = relabel(elementary_abelian(2, 2), "V4")
    klein_gamma = relabel(elementary_abelian(2, 2), "V4")
    inv3 = (0, 2, 1)
    inv4 = (0, 3, 2, 1)
    swap = (0, 2, 1, 3)  # exchanges the two factors of Z2 x Z2
    return (
        _fixture("z2-z2", Z2, Z2, one),
        _fixture("z3-z3", Z3, Z3, one),
        _fixture("z2-z3", Z2, Z3, one),
        _fixture("s3", Z2, Z3, one, gen_lifts={1: inv3}),
        _fixture("d4", Z2, Z4, one, gen_lifts={1: inv4}),
        _fixture("z12", Z2, Z6, one),
        _fixture("gamma-z2-z2", Z2, Z2, Z2),
        _fixture("klein-gamma", one, Z2, klein_gamma),
        _fixture("z3-inversion-gamma", Z2, Z3, Z2, phi_G=(_ident(Z3), inv3)),
        _fixture("f-gamma-s3", Z3, Z2, Z2, phi_F=(_ident(Z3), inv3)),
        _fixture("z4xz2", Z2, relabel(direct_product(Z4, Z2), "Z4xZ2"), one),
        _fixture("v4-swap", Z2, V4, one, gen_lifts={1: swap}),
    )


def catalog() -> tuple:
    """Every bundled instance: the named fixtures, then the zoo."""
    return fixtures() + zoo()


def find_instance(name: str) -> Instance:
    for inst in catalog():
        if inst.name == name:
            return inst
    raise KeyError(name)


# -- JSON documents -----------------------------------------------------------------

FORMAT = "extcoh-instance/1"


def instance_to_doc(inst: Instance) -> dict:
    """Canonical document: tables, actions as permutations, the kernel as lifts on F."""
    kappa = inst.kappa()
    T = kappa.tower
    lift = [list(T.aut_elems[a]) for a in kappa.canonical_lift]
    return {
        "format": FORMAT,
        "name": inst.name,
        "groups": {
            "F": [list(r) for r in inst.F.table],
            "G": [list(r) for r in inst.G.table],
            "Gamma": [list(r) for r in inst.Gamma.table],
        },
        "gamma": "Gamma",
        "actions": {"F": [list(p) for p in inst.phi_F], "G": [list(p) for p in inst.phi_G]},
        "kernels": {"kappa": {"F": "F", "G": "G", "lift": lift}},
        "bounds": {},
    }


def instance_from_doc(doc: dict, kernel: str | None = None) -> Instance:
    """Parse and validate an instance document; raises ValidationError subclasses."""
    from .errors import ValidationError
    from .groups import validate_group_table

    if not isinstance(doc, dict):
        raise ValidationError("instance document must be an object")
    groups_doc = doc.get("groups")
    if not isinstance(groups_doc, dict):
        raise ValidationError("missing 'groups'")
    groups = {}
    for name in sorted(groups_doc):
        table = groups_doc[name]
        if not isinstance(table, list):
            raise ValidationError(f"group {name!r} must be a table")
        groups[name] = validate_group_table(len(table), table, identity=0, label=name)
    gname = doc.get("gamma", "Gamma")
    kernels = doc.get("kernels") or {}
    if not kernels:
        raise ValidationError("missing 'kernels'")
    kname = kernel if kernel is not None else sorted(kernels)[0]
    if kname not in kernels:
        raise ValidationError(f"unknown kernel {kname!r}", witness=sorted(kernels))
    kdoc = kernels[kname]
    try:
        F, G, Gamma = groups[kdoc.get("F", "F")], groups[kdoc.get("G", "G")], groups[gname]
    except KeyError as exc:
        raise ValidationError(f"unresolved group reference {exc.args[0]!r}") from None
    actions = doc.get("actions") or {}

    def action(key, H):
        p = actions.get(kdoc.get(key, key))
        if p is None:
            return _trivial_actions(H, Gamma)
        return tuple(tuple(int(v) for v in row) for row in p)

    phi_F, phi_G = action("F", F), action("G", G)
    T = automorphism_tower(G)
    if "kappa_bar" in kdoc:
        kb = tuple(int(v) for v in kdoc["kappa_bar"])
    elif "lift" in kdoc:
        lift = kdoc["lift"]
        if len(lift) != F.order:
            raise ValidationError("the kernel lift needs one automorphism per element of F")
        kb = []
        for f, p in enumerate(lift):
            p = tuple(int(v) for v in p)
            if p not in T.aut_index:
                from .errors import NotAHomomorphism

                raise NotAHomomorphism(f"lift[{f}] is not an automorphism of G", witness=[f])
            kb.append(T.coset_of[T.index(p)])
        kb = tuple(kb)
    else:
        raise ValidationError("a kernel needs 'lift' or 'kappa_bar'")
    inst = Instance(str(doc.get("name", "instance")), F, G, Gamma, phi_F, phi_G, kb, ("file",))
    inst.kappa()
    inst._cache["bounds"] = dict(doc.get("bounds") or {})
    return inst
