import pytest

from extcoh.catalog import find_instance, zoo
from extcoh.cohomology import check_cocycle, trivial_cocycle
from extcoh.errors import ImageEscapes, NotAbelianQuotient, NotCharacteristicSeries, NotReducible, NotStable
from extcoh.extensions import (
    abelian_ext_group,
    classify_ext,
    extension_key,
    morphism_violation,
    pushforward_abelian,
)
from extcoh.galois_model import gamma_group, validate_outer_action
from extcoh.groups import are_isomorphic, cyclic, trivial_group
from extcoh.reduction import (
    devissage,
    lemma_reduce,
    nd_torsion_report,
    stable_closure,
    torsion_reduce_abelian,
    torsion_subgroup,
)


def _z12():
    kappa = find_instance("z12").kappa()  # F = Z2 acting trivially on G = Z6
    ext = classify_ext(kappa)
    z12 = next(c for c in ext if are_isomorphic(c.representative.H, cyclic(12)))
    return kappa, ext, z12


def _w_with_three(kappa):
    w = trivial_cocycle(kappa, kappa.lift)
    g = list(w.g)
    g[1 * w.n + 1] = 3
    return check_cocycle(kappa, w.f, g)


def _check_witness(rep):
    """The witness is an injective morphism of extensions restricting to S -> G."""
    red, orig = rep.reduced, rep.original
    theta = rep.witness
    assert len(set(theta)) == red.H.order
    on_kernel = [rep.subgroup.elements[i] for i in range(len(rep.subgroup))]
    assert morphism_violation(red, orig, theta, on_kernel) is None


def test_lemma_with_explicit_cocycle_on_z12():
    kappa, ext, z12 = _z12()
    w = _w_with_three(kappa)
    assert stable_closure(w).elements == (0, 3)
    rep = lemma_reduce(z12, w)
    assert rep.subgroup.elements == (0, 3)
    assert rep.reduced.H.order == 4 and are_isomorphic(rep.reduced.H, cyclic(4))
    assert rep.reproduces
    _check_witness(rep)


def test_lemma_rejects_escaping_values():
    kappa, ext, z12 = _z12()
    w = _w_with_three(kappa)
    with pytest.raises(ImageEscapes) as exc:
        lemma_reduce(z12, w, M=[0, 2, 4])
    assert tuple(exc.value.witness) == (1, 1)


def test_lemma_rejects_unstable_subgroup():
    kappa = find_instance("v4-swap").kappa()  # F = Z2 swapping the factors of V4
    xi = classify_ext(kappa)[0]
    w = trivial_cocycle(kappa, kappa.lift)
    with pytest.raises(NotStable):
        lemma_reduce(xi, w, M=[0, 1])


def test_torsion_step_on_z12():
    kappa, ext, z12 = _z12()
    rep = torsion_reduce_abelian(z12)
    assert rep.m_used == 2
    assert rep.subgroup.elements == torsion_subgroup(kappa.G.G, 2) == (0, 3)
    push = pushforward_abelian(rep.reduced, rep.subgroup, kappa)
    assert extension_key(push) == z12.key
    _check_witness(rep)
    assert torsion_reduce_abelian(z12, m=2).witness == rep.witness


def test_devissage_on_z12_through_z3():
    kappa, ext, z12 = _z12()
    rep = devissage(z12, [[0], [0, 2, 4], list(range(6))])
    assert rep.subgroup.elements == (0, 3)
    assert all(x["reduced"] for x in rep.layers)
    _check_witness(rep)


def test_devissage_checks_the_series():
    kappa, ext, z12 = _z12()
    with pytest.raises(NotCharacteristicSeries):
        devissage(z12, [[0], [0, 3], [0, 2, 4], list(range(6))])
    with pytest.raises(NotCharacteristicSeries):
        devissage(z12, [[0, 3], list(range(6))])


def test_devissage_needs_abelian_layers():
    from extcoh.extensions import zero_extension
    from extcoh.groups import dihedral

    one = trivial_group()
    kappa = validate_outer_action(gamma_group(cyclic(2), one), gamma_group(dihedral(4), one), (0, 0))
    with pytest.raises(NotAbelianQuotient):
        devissage(zero_extension(kappa), [[0], list(range(8))])


def test_split_class_reduces_to_trivial_subgroup():
    kappa = find_instance("z2-z2").kappa()
    grp = abelian_ext_group(kappa)
    rep = torsion_reduce_abelian(grp.ext[grp.zero], grp)
    assert rep.m_used == 1
    assert rep.subgroup.elements == (0,)
    assert rep.reduced.H.order == 2


def test_z4_over_z2_needs_all_of_a():
    kappa = find_instance("z2-z2").kappa()
    ext = classify_ext(kappa)
    z4 = next(c for c in ext if are_isomorphic(c.representative.H, cyclic(4)))
    rep = torsion_reduce_abelian(z4)
    assert rep.m_used == 2 and len(rep.subgroup) == 2


def _z8_over_z4():
    one = trivial_group()
    kappa = validate_outer_action(gamma_group(cyclic(2), one), gamma_group(cyclic(4), one), (0, 0))
    ext = classify_ext(kappa)
    return next(c for c in ext if are_isomorphic(c.representative.H, cyclic(8)))


def test_z8_over_z4_is_not_reducible_to_its_torsion():
    # the class has order 2 but Ext(Z2, Z2) -> Ext(Z2, Z4) is zero
    with pytest.raises(NotReducible) as exc:
        torsion_reduce_abelian(_z8_over_z4())
    assert exc.value.witness == 2


def test_z8_over_z4_still_reduces_by_the_lemma():
    xi = _z8_over_z4()
    rep = lemma_reduce(xi)
    _check_witness(rep)
    assert rep.reproduces


@pytest.mark.parametrize("name", ["z2-z2", "z3-z3", "z12", "gamma-z2-z2", "z4xz2", "d4"])
def test_lemma_default_reproduces_every_fixture_class(name):
    for c in classify_ext(find_instance(name).kappa()):
        rep = lemma_reduce(c)
        assert rep.reproduces
        _check_witness(rep)


def test_nd_bound_on_fixtures():
    for name in ["z2-z2", "z3-z3", "z12", "gamma-z2-z2", "z4xz2", "z3-inversion-gamma"]:
        rep = nd_torsion_report(find_instance(name).kappa())
        assert rep.ok
        assert all((rep.n * rep.d) % o == 0 for o in rep.orders)


def test_nd_bound_on_small_zoo():
    checked = 0
    for inst in zoo():
        if not inst.G.is_abelian() or inst.F.order * inst.G.order * inst.Gamma.order > 16:
            continue
        assert nd_torsion_report(inst.kappa()).ok
        checked += 1
    assert checked > 0


def test_full_subgroup_returns_the_class_itself():
    kappa, ext, z12 = _z12()
    rep = lemma_reduce(z12, M=list(range(6)))
    assert rep.reduced.H.order == 12
    assert extension_key(rep.reduced) == z12.key


def test_trivial_cocycle_has_trivial_closure():
    kappa = find_instance("z4xz2").kappa()
    assert stable_closure(trivial_cocycle(kappa, kappa.lift)).elements == (0,)


def test_reduction_is_idempotent():
    kappa, ext, z12 = _z12()
    once = lemma_reduce(z12)
    twice = lemma_reduce(once.reduced)
    assert len(twice.subgroup) == len(once.subgroup)
    assert twice.reduced.H.order == once.reduced.H.order
    assert extension_key(twice.reduced) == extension_key(once.reduced)


def test_split_devissage_on_z4xz2():
    kappa = find_instance("z4xz2").kappa()
    grp = abelian_ext_group(kappa)
    A = kappa.G.G
    # an order-2 subgroup of Z4 x Z2 that is characteristic: 2 * A
    two_a = sorted({A.power(a, 2) for a in range(A.order)})
    rep = devissage(grp.ext[grp.zero], [[0], two_a, list(range(A.order))])
    assert rep.subgroup.elements == (0,)
    assert rep.reduced.H.order == 2


def test_routes_agree_on_z12_class():
    kappa, ext, z12 = _z12()
    a = lemma_reduce(z12)
    b = torsion_reduce_abelian(z12)
    c = devissage(z12, [[0], list(range(6))])
    pushes = {extension_key(pushforward_abelian(r.reduced, r.subgroup, kappa)) for r in (a, b, c)}
    assert pushes == {z12.key}
