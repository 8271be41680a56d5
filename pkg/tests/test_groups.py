import pytest
from hypothesis import given, settings, strategies as st

from extcoh.errors import NoIdentity, NoInverse, NotAssociative, NotClosed, NotNormal
from extcoh.groups import (
    are_isomorphic,
    automorphism_tower,
    center,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    find_isomorphism,
    quaternion,
    quotient_by_normal,
    semidirect_product,
    subgroup,
    symmetric3,
    validate_group_table,
)

from conftest import table_automorphisms

SMALL = {
    "Z2": cyclic(2),
    "Z4": cyclic(4),
    "Z6": cyclic(6),
    "V4": elementary_abelian(2, 2),
    "S3": symmetric3(),
    "D4": dihedral(4),
    "Q8": quaternion(),
    "Z4xZ2": direct_product(cyclic(4), cyclic(2)),
}


def loop5():
    # a Latin square with identity 0 that is not associative
    return [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]


def test_nonassociative_table_reports_triple():
    with pytest.raises(NotAssociative) as exc:
        validate_group_table(5, loop5(), identity=0)
    a, b, c = exc.value.witness
    T = loop5()
    assert T[T[a][b]][c] != T[a][T[b][c]]


def test_table_errors():
    with pytest.raises(NotClosed):
        validate_group_table(2, [[0, 1], [1, 2]])
    with pytest.raises(NoIdentity):
        validate_group_table(2, [[1, 0], [0, 1]], identity=0)
    with pytest.raises((NoInverse, NotAssociative)):
        validate_group_table(3, [[0, 1, 2], [1, 0, 2], [2, 2, 1]], identity=0)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_automorphisms_match_permutation_search(name):
    G = SMALL[name]
    T = automorphism_tower(G)
    brute = table_automorphisms([list(r) for r in G.table])
    assert sorted(T.aut_elems) == sorted(brute)


@pytest.mark.parametrize(
    "name, aut, out",
    [("Z2", 1, 1), ("Z4", 2, 2), ("Z6", 2, 2), ("V4", 6, 6), ("S3", 6, 1), ("D4", 8, 2), ("Q8", 24, 6), ("Z4xZ2", 8, 8)],
)
def test_aut_and_out_orders(name, aut, out):
    T = automorphism_tower(SMALL[name])
    assert len(T.aut_elems) == aut
    assert T.out_group.order == out


def test_center_and_quotient():
    D4 = SMALL["D4"]
    Z = center(D4)
    assert len(Z) == 2
    Q, q = quotient_by_normal(D4, Z)
    assert Q.order == 4 and Q.is_abelian()
    assert all(q.map[D4.table[a][b]] == Q.table[q.map[a]][q.map[b]] for a in range(8) for b in range(8))
    S3 = SMALL["S3"]
    non_normal = [x for x in range(6) if S3.element_order(x) == 2][:1]
    with pytest.raises(NotNormal):
        quotient_by_normal(S3, [S3.identity] + non_normal)


def test_semidirect_product_is_dihedral():
    Z3, Z2 = cyclic(3), cyclic(2)
    sd = semidirect_product(Z3, Z2, [(0, 1, 2), (0, 2, 1)])
    assert sd.group.order == 6 and not sd.group.is_abelian()
    assert are_isomorphic(sd.group, SMALL["S3"])


def test_subgroup_closure():
    Z6 = SMALL["Z6"]
    assert len(subgroup(Z6, Z6.generate([2]))) == 3
    with pytest.raises(NotClosed):
        subgroup(Z6, [0, 1])


def _relabelled(G, perm):
    inv = {p: i for i, p in enumerate(perm)}
    n = G.order
    table = [[perm[G.table[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    return validate_group_table(n, table)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(SMALL)), st.randoms(use_true_random=False))
def test_isomorphism_found_after_random_relabel(name, rnd):
    G = SMALL[name]
    rest = list(range(1, G.order))
    rnd.shuffle(rest)
    perm = [0] + rest
    H = _relabelled(G, perm)
    iso = find_isomorphism(G, H)
    assert iso is not None
    assert all(iso[G.table[a][b]] == H.table[iso[a]][iso[b]] for a in range(G.order) for b in range(G.order))


def test_non_isomorphic_pairs():
    assert not are_isomorphic(SMALL["D4"], SMALL["Q8"])
    assert not are_isomorphic(SMALL["Z4"], SMALL["V4"])
    assert not are_isomorphic(SMALL["Z6"], SMALL["S3"])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(SMALL)), st.data())
def test_power_and_order(name, data):
    G = SMALL[name]
    x = data.draw(st.integers(0, G.order - 1))
    k = G.element_order(x)
    assert G.power(x, k) == G.identity
    assert G.order % k == 0
    assert G.exponent % k == 0
