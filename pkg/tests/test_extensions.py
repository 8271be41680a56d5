import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extcoh.catalog import find_instance, zoo
from extcoh.cohomology import enumerate_h2, ker_res_indices
from extcoh.errors import InvalidExtension, NotCentral, NotDescendable
from extcoh.extensions import (
    abelian_ext_group,
    abstract_isomorphism_classes,
    act_by_center_ext,
    build_from_cocycle,
    classify_ext,
    cocycle_from_extension,
    descend_class_to_extension,
    ext_order,
    extension_key,
    find_extension_isomorphism,
    key_isomorphism,
    morphism_violation,
    one_cocycles,
    phi,
    relabel_extension,
    twist_by_z1,
    twist_orbits,
    validate_extension,
    zero_extension,
)
from extcoh.galois_model import center_restriction
from extcoh.groups import are_isomorphic, cyclic, elementary_abelian

from conftest import brute_extensions

# fixture -> (|Ext|, twist orbits, abstract isomorphism types of H)
EXT_VALUES = {
    "z2-z2": (2, 2, 2),
    "z3-z3": (3, 3, 2),
    "z2-z3": (1, 1, 1),
    "s3": (1, 1, 1),
    "d4": (2, 2, 2),
    "z12": (2, 2, 2),
    "gamma-z2-z2": (4, 4, 2),
    "klein-gamma": (1, 1, 1),
    "z3-inversion-gamma": (1, 1, 1),
    "f-gamma-s3": (1, 1, 1),
    "z4xz2": (4, 4, 3),
    "v4-swap": (1, 1, 1),
}


def _brute_count(name):
    inst = find_instance(name)
    kappa = inst.kappa()
    T = kappa.tower
    allowed = {f: {T.aut_elems[a] for a in T.coset_members(kappa.kappa_bar[f])} for f in range(inst.F.order)}
    FT = [list(r) for r in inst.F.table]
    GT = [list(r) for r in inst.G.table]
    if inst.Gamma.order == 1:
        return len(brute_extensions(FT, GT, conj=lambda f: allowed[f]))
    GamT = [list(r) for r in inst.Gamma.table]
    return len(
        brute_extensions(FT, GT, conj=lambda f: allowed[f], phi_F=inst.phi_F, phi_G=inst.phi_G, GamT=GamT)
    )


@pytest.mark.parametrize("name", sorted(EXT_VALUES))
def test_ext_counts_match_table_oracle(name):
    n_ext, n_orbits, n_types = EXT_VALUES[name]
    assert _brute_count(name) == n_ext
    ext = classify_ext(find_instance(name).kappa())
    assert len(ext) == n_ext
    assert len(twist_orbits(ext)) == n_orbits
    assert abstract_isomorphism_classes(ext) == n_types


def test_ext_z2_z2_is_klein_and_z4():
    ext = classify_ext(find_instance("z2-z2").kappa())
    groups = [c.representative.H for c in ext]
    assert sum(are_isomorphic(H, elementary_abelian(2, 2)) for H in groups) == 1
    assert sum(are_isomorphic(H, cyclic(4)) for H in groups) == 1


@pytest.mark.parametrize("name", sorted(EXT_VALUES))
def test_representatives_validate_and_induce_kappa(name):
    kappa = find_instance(name).kappa()
    for c in classify_ext(kappa):
        e = c.representative
        v = validate_extension(e.G, e.F, e.H, e.iota, e.pi, e.psi)
        assert v.kernel == kappa
        assert extension_key(v) == c.key


def test_validate_rejects_broken_psi():
    e = classify_ext(find_instance("gamma-z2-z2").kappa())[1].representative
    bad = list(e.psi)
    bad[1] = tuple([bad[1][1], bad[1][0]] + list(bad[1][2:]))
    with pytest.raises(InvalidExtension):
        validate_extension(e.G, e.F, e.H, e.iota, e.pi, bad)


def _extensions():
    out = []
    for name in sorted(EXT_VALUES):
        for c in classify_ext(find_instance(name).kappa()):
            out.append(c.representative)
    return out


EXTS = _extensions()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(EXTS), st.randoms(use_true_random=False))
def test_key_is_invariant_under_relabelling(ext, rnd):
    rest = list(range(1, ext.H.order))
    rnd.shuffle(rest)
    moved = relabel_extension(ext, [0] + rest)
    assert extension_key(moved) == extension_key(ext)
    theta = key_isomorphism(moved, ext)
    assert morphism_violation(moved, ext, theta, range(ext.G.G.order)) is None
    assert find_extension_isomorphism(moved, ext) is not None


def test_distinct_keys_are_not_isomorphic():
    for name in ["z2-z2", "z3-z3", "d4", "gamma-z2-z2", "z4xz2"]:
        ext = classify_ext(find_instance(name).kappa())
        for i in range(len(ext)):
            for j in range(i + 1, len(ext)):
                assert find_extension_isomorphism(ext[i].representative, ext[j].representative) is None


@pytest.mark.parametrize("ext", EXTS, ids=lambda e: f"{e.F.G.label}-{e.G.G.label}-{e.H.order}")
def test_cocycle_round_trip(ext):
    w = cocycle_from_extension(ext)
    back = build_from_cocycle(w)
    assert find_extension_isomorphism(back, ext) is not None
    assert phi(back).index == phi(ext).index


def test_descend_outside_ker_res():
    kappa = find_instance("klein-gamma").kappa()
    h2 = enumerate_h2(kappa)
    ker = set(ker_res_indices(h2))
    outside = [c for c in h2 if c.index not in ker]
    assert len(outside) == 7
    with pytest.raises(NotDescendable):
        descend_class_to_extension(outside[0])


@pytest.mark.parametrize("name", ["gamma-z2-z2", "z3-inversion-gamma", "f-gamma-s3", "z4xz2"])
def test_descend_hits_its_class(name):
    kappa = find_instance(name).kappa()
    h2 = enumerate_h2(kappa)
    for c in ker_res_indices(h2):
        assert phi(descend_class_to_extension(h2[c])).index == c


def test_twisting_needs_central_values():
    from extcoh.groups import dihedral
    from extcoh.galois_model import gamma_group, validate_outer_action

    Z2, D4 = cyclic(2), dihedral(4)
    Fg = gamma_group(cyclic(2), Z2)
    phiD = tuple(range(8))
    Gg = gamma_group(D4, Z2, [phiD, phiD])
    kappa = validate_outer_action(Fg, Gg, (0, 0))
    xi = zero_extension(kappa)
    central = center_restriction(kappa).Z.elements
    noncentral = next(x for x in range(8) if x not in central)
    with pytest.raises(NotCentral):
        twist_by_z1((0, noncentral), xi)


def test_twist_by_coboundary_is_equivalent():
    kappa = find_instance("z3-inversion-gamma").kappa()
    xi = zero_extension(kappa)
    ck = center_restriction(kappa)
    for z in one_cocycles(ck.Z_gamma):
        tw = twist_by_z1(z, xi)
        assert find_extension_isomorphism(tw, xi) is not None  # H^1(Z2, Z3 with inversion) = 0


# -- the Baer-sum group ---------------------------------------------------------------


@pytest.mark.parametrize("name", ["z2-z2", "z3-z3", "d4", "z12", "gamma-z2-z2", "z4xz2"])
def test_baer_sum_is_an_abelian_group(name):
    grp = abelian_ext_group(find_instance(name).kappa())
    n = len(grp)
    for i in range(n):
        assert grp.add(grp.zero, i) == i
        assert grp.add(i, grp.neg(i)) == grp.zero
        for j in range(n):
            assert grp.add(i, j) == grp.add(j, i)
            for k in range(n):
                assert grp.add(grp.add(i, j), k) == grp.add(i, grp.add(j, k))


def test_z4_class_has_order_two():
    kappa = find_instance("z2-z2").kappa()
    ext = classify_ext(kappa)
    z4 = next(c for c in ext if are_isomorphic(c.representative.H, cyclic(4)))
    assert ext_order(z4.representative) == 2
    grp = abelian_ext_group(kappa)
    assert grp.add(z4.index, z4.index) == grp.zero


def test_z3_z3_group_is_cyclic_of_order_three():
    grp = abelian_ext_group(find_instance("z3-z3").kappa())
    orders = sorted(grp.order(i) for i in range(len(grp)))
    assert orders == [1, 3, 3]


def test_center_action_matches_baer_sum_for_abelian_kernel():
    kappa = find_instance("z12").kappa()
    grp = abelian_ext_group(kappa)
    for i in range(len(grp)):
        for j in range(len(grp)):
            prod = act_by_center_ext(grp.as_center(i), grp.ext[j])
            assert grp.ext.classify(prod) == grp.add(i, j)


def test_psi_vanishes_when_gamma_is_a_retract():
    # F_Gamma = F x Gamma, so every 1-cocycle on Gamma extends and twisting does nothing
    grp = abelian_ext_group(find_instance("gamma-z2-z2").kappa())
    psi = grp.psi_map()
    assert len(psi) == 2  # H^1(Z2, Z2) with trivial action
    assert set(psi.values()) == {grp.zero}
    assert all(len(o) == 1 for o in twist_orbits(grp.ext))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([i for i in zoo() if i.G.is_abelian() and i.F.order * i.G.order * i.Gamma.order <= 16]))
def test_phi_is_a_homomorphism_on_small_abelian_instances(inst):
    kappa = inst.kappa()
    grp = abelian_ext_group(kappa)
    h2 = enumerate_h2(kappa)
    if h2.method != "linear":
        return
    ph = [phi(c).index for c in grp.ext]
    for i in range(len(grp)):
        for j in range(len(grp)):
            a, b = np.array(h2.coords_of(ph[i])), np.array(h2.coords_of(ph[j]))
            assert ph[grp.add(i, j)] == h2.index_of(a + b)
