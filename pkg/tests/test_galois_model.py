import pytest

from extcoh.catalog import find_instance
from extcoh.errors import NotAHomomorphism, NotEquivariant
from extcoh.extensions import zero_extension
from extcoh.galois_model import (
    build_f_gamma,
    center_restriction,
    gamma_group,
    kernel_from_extension,
    restricted_kernel,
    validate_outer_action,
)
from extcoh.groups import automorphism_tower, cyclic, dihedral, elementary_abelian, trivial_group


def test_gamma_group_rejects_non_automorphism():
    Z3, Z2 = cyclic(3), cyclic(2)
    with pytest.raises(NotAHomomorphism):
        gamma_group(Z3, Z2, [(0, 1, 2), (1, 0, 2)])


def test_gamma_group_rejects_non_action():
    Z4, Z2 = cyclic(4), cyclic(2)
    # x -> 3x is an automorphism but the identity of Gamma must act trivially
    with pytest.raises(NotAHomomorphism):
        gamma_group(Z4, Z2, [(0, 3, 2, 1), (0, 3, 2, 1)])


def test_f_gamma_index_convention():
    Z3, Z2 = cyclic(3), cyclic(2)
    Fg = gamma_group(Z3, Z2, [(0, 1, 2), (0, 2, 1)])
    fg = build_f_gamma(Fg)
    assert fg.group.order == 6 and not fg.group.is_abelian()
    for x in range(6):
        f, s = fg.pair(x)
        assert fg.index(f, s) == x == s * 3 + f


def test_outer_action_must_be_a_homomorphism():
    Z2 = cyclic(2)
    Z3 = cyclic(3)
    Fg, Gg = gamma_group(Z3, trivial_group()), gamma_group(cyclic(4), trivial_group())
    T = automorphism_tower(Gg.G)
    inversion = T.coset_of[T.index((0, 3, 2, 1))]
    # Z3 -> Out(Z4) = Z2 sending the generator to inversion is not a homomorphism
    with pytest.raises(NotAHomomorphism):
        validate_outer_action(Fg, Gg, (0, inversion, inversion))
    assert Z2.order == 2


def test_outer_action_equivariance():
    Z2 = cyclic(2)
    V4 = elementary_abelian(2, 2)
    swap = (0, 2, 1, 3)
    Fg = gamma_group(Z2, Z2)  # trivial action on F
    Gg = gamma_group(V4, Z2, [(0, 1, 2, 3), swap])
    T = automorphism_tower(V4)
    # an element of Out(V4) = S3 not commuting with the swap
    bad = next(
        o for o in range(T.out_group.order) if T.out_group.table[o][T.coset_of[T.index(swap)]]
        != T.out_group.table[T.coset_of[T.index(swap)]][o] and T.out_group.table[o][o] == T.out_group.identity
    )
    with pytest.raises(NotEquivariant):
        validate_outer_action(Fg, Gg, (0, bad))


@pytest.mark.parametrize("name", ["s3", "d4", "z12", "gamma-z2-z2", "z3-inversion-gamma", "f-gamma-s3", "v4-swap"])
def test_semidirect_product_induces_its_kernel(name):
    kappa = find_instance(name).kappa()
    ext = zero_extension(kappa)
    assert kernel_from_extension(ext, check_all=True) == kappa


def test_center_restriction_of_d4():
    D4 = dihedral(4)
    one = trivial_group()
    Fg, Gg = gamma_group(cyclic(2), one), gamma_group(D4, one)
    kappa = validate_outer_action(Fg, Gg, (0, 0))
    ck = center_restriction(kappa)
    assert len(ck.Z) == 2
    assert ck.kappa_z.F == Fg
    # the induced action on the center of D4 is trivial
    assert all(p == tuple(range(2)) for p in ck.action)


def test_restricted_kernel_is_over_gamma():
    kappa = find_instance("gamma-z2-z2").kappa()
    rk = restricted_kernel(kappa)
    assert rk.F.G.order == 1
    assert rk.fgamma.group.order == kappa.Gamma.order
