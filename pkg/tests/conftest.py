"""Brute-force oracles shared by the tests.

They work on raw tables with itertools only and do not call into the
package beyond reading group tables, so agreement with the package is
evidence rather than a tautology.
"""

from itertools import permutations, product

import pytest


def table_automorphisms(T):
    """All automorphisms of the group with table T, by trying every permutation fixing 0."""
    n = len(T)
    out = []
    for rest in permutations(range(1, n)):
        p = (0,) + rest
        if all(p[T[a][b]] == T[p[a]][p[b]] for a in range(n) for b in range(n)):
            out.append(p)
    return out


def is_associative(T):
    n = len(T)
    return all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n))


def brute_extensions(FT, GT, conj=None, phi_F=None, phi_G=None, GamT=None):
    """Equivalence classes of extensions 1 -> G -> H -> F -> 1 (with Gamma-action).

    H is labelled by pairs (g, f) -> f*|G| + g, with iota(g) = (g, 0) and
    pi(g, f) = f; every extension is equivalent to one of this shape.  The
    product is (g1, f1)(g2, f2) = (g1 a_f1(g2) c(f1, f2), f1 f2) for all maps
    a: F -> Aut(G) and normalized c: F x F -> G; associativity is checked on
    the table.  ``conj(f)`` (a set of automorphisms of G, or None for any)
    restricts the outer action.  With Gamma-actions, every psi_sigma
    compatible with iota and pi is tried.  Two extensions are equivalent when
    some h: F -> G makes (g, f) -> (g h(f), f) an isomorphism commuting with
    psi.  Returns a list of class representatives (table, psi).
    """
    nF, nG = len(FT), len(GT)
    auts = table_automorphisms(GT)
    n = nF * nG

    def idx(g, f):
        return f * nG + g

    cands = []
    for a in product(auts, repeat=nF - 1):
        a = (tuple(range(nG)),) + a
        if conj is not None and any(a[f] not in conj(f) for f in range(nF)):
            continue
        for cvals in product(range(nG), repeat=(nF - 1) * (nF - 1)):
            c = {}
            k = 0
            for f1 in range(nF):
                for f2 in range(nF):
                    if f1 == 0 or f2 == 0:
                        c[f1, f2] = 0
                    else:
                        c[f1, f2] = cvals[k]
                        k += 1
            T = [[0] * n for _ in range(n)]
            for f1 in range(nF):
                for g1 in range(nG):
                    for f2 in range(nF):
                        for g2 in range(nG):
                            g = GT[GT[g1][a[f1][g2]]][c[f1, f2]]
                            T[idx(g1, f1)][idx(g2, f2)] = idx(g, FT[f1][f2])
            if not is_associative(T):
                continue
            if any(sorted(row) != list(range(n)) for row in T):
                continue
            cands.append(T)
    nGam = 1 if phi_F is None else len(phi_F)
    full = []
    for T in cands:
        if phi_F is None:
            full.append((T, ()))
            continue
        # Gamma-actions: psi_sigma(g, f) = (phi_G(g) u_sigma(f), phi_F(f)); try all u
        choices = []
        for s in range(nGam):
            opts = []
            for u in product(range(nG), repeat=nF - 1):
                u = (0,) + u
                p = tuple(idx(GT[phi_G[s][g]][u[f]], phi_F[s][f]) for f in range(nF) for g in range(nG))
                if all(p[T[x][y]] == T[p[x]][p[y]] for x in range(n) for y in range(n)):
                    opts.append(p)
            choices.append(opts)
        for psi in product(*choices):
            if psi[0] != tuple(range(n)):
                continue
            if any(psi[GamT[s][t]][x] != psi[s][psi[t][x]] for s in range(nGam) for t in range(nGam) for x in range(n)):
                continue
            full.append((T, psi))
    # union-find over equivalences
    reps = []
    for T, psi in full:
        if not any(_equivalent(T, psi, T2, psi2, nF, nG) for T2, psi2 in reps):
            reps.append((T, psi))
    return reps


def _equivalent(T1, psi1, T2, psi2, nF, nG):
    n = nF * nG
    for h in product(range(nG), repeat=nF - 1):
        h = (0,) + h
        # (g, f) -> (g h(f), f); the kernel's product is the top-left block of T2
        theta = [f * nG + T2[g][h[f]] for f in range(nF) for g in range(nG)]
        if any(theta[T1[x][y]] != T2[theta[x]][theta[y]] for x in range(n) for y in range(n)):
            continue
        if any(theta[p1[x]] != p2[theta[x]] for p1, p2 in zip(psi1, psi2) for x in range(n)):
            continue
        return True
    return False


def brute_h2_abelian_order(XT, AT, action):
    """|H^2(X, A)| for an abelian X-module, as |normalized Z^2| / |normalized B^2|.

    ``action[x]`` is the permutation of A by which x acts.
    """
    nX, nA = len(XT), len(AT)
    pairs = [(x, y) for x in range(1, nX) for y in range(1, nX)]
    cocycles = 0
    for vals in product(range(nA), repeat=len(pairs)):
        g = {(x, y): 0 for x in range(nX) for y in range(nX)}
        g.update(zip(pairs, vals))
        ok = True
        for x in range(nX):
            for y in range(nX):
                for z in range(nX):
                    # x.g(y,z) + g(x,yz) = g(xy,z) + g(x,y)
                    left = AT[action[x][g[y, z]]][g[x, XT[y][z]]]
                    right = AT[g[XT[x][y], z]][g[x, y]]
                    if left != right:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        cocycles += ok
    inv = [next(b for b in range(nA) if AT[a][b] == 0) for a in range(nA)]
    boundaries = set()
    for vals in product(range(nA), repeat=nX - 1):
        c = (0,) + vals
        # (dc)(x, y) = x.c(y) - c(xy) + c(x)
        boundaries.add(tuple(AT[AT[action[x][c[y]]][inv[c[XT[x][y]]]]][c[x]] for x, y in pairs))
    return cocycles // len(boundaries)


@pytest.fixture(scope="session")
def fixture_map():
    from extcoh.catalog import fixtures

    return {f.name: f for f in fixtures()}


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_lines():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
