"""Backtracking with propagation for tables constrained by 4-cell equations.

Both the cohomological route (2-cocycles on F_Gamma) and the direct route
(factor systems on F) reduce to the same problem: fill an ``n x n`` table of
group elements, each cell restricted to a small domain, so that a family of
equations, each touching at most four cells, holds.  Any equation with a
single unknown cell is solved by scanning that cell's domain.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .errors import SizeLimitExceeded


class TableSearch:
    def __init__(
        self,
        ncells: int,
        domains: Sequence[Sequence[int] | None],
        fixed: dict,
        equations: Sequence[tuple],
        check: Callable[[list, tuple], bool],
        order: Sequence[int],
        limit: int | None = None,
    ):
        self.ncells = ncells
        self.domains = domains
        self.fixed = fixed
        self.equations = equations
        self.check = check
        self.order = order
        self.limit = limit
        by_cell: list[list[int]] = [[] for _ in range(ncells)]
        for i, eq in enumerate(equations):
            for c in set(eq[:4]):
                by_cell[c].append(i)
        self.by_cell = by_cell

    def _propagate(self, vals: list, queue: list, trail: list) -> bool:
        eqs, by_cell, check, domains = self.equations, self.by_cell, self.check, self.domains
        while queue:
            cell = queue.pop()
            for ei in by_cell[cell]:
                eq = eqs[ei]
                unknown = None
                several = False
                for c in eq[:4]:
                    if vals[c] < 0:
                        if unknown is None:
                            unknown = c
                        elif unknown != c:
                            several = True
                            break
                if several:
                    continue
                if unknown is None:
                    if not check(vals, eq):
                        return False
                    continue
                found = -1
                for v in domains[unknown]:
                    vals[unknown] = v
                    if check(vals, eq):
                        if found >= 0:
                            found = -2
                            break
                        found = v
                vals[unknown] = -1
                if found == -1:
                    return False
                if found >= 0:
                    vals[unknown] = found
                    trail.append(unknown)
                    queue.append(unknown)
        return True

    def solutions(self) -> Iterator[tuple]:
        vals = [-1] * self.ncells
        for c, v in self.fixed.items():
            vals[c] = v
        for c in range(self.ncells):
            if vals[c] < 0 and self.domains[c] is None:
                raise ValueError(f"cell {c} has neither a value nor a domain")
        trail: list[int] = []
        # every fixed cell triggers its equations once
        if not self._propagate(vals, [c for c in range(self.ncells) if vals[c] >= 0], trail):
            return
        count = 0
        order = self.order

        def rec():
            nonlocal count
            cell = next((c for c in order if vals[c] < 0), None)
            if cell is None:
                count += 1
                if self.limit is not None and count > self.limit:
                    raise SizeLimitExceeded(f"more than {self.limit} solutions", witness=self.limit)
                yield tuple(vals)
                return
            for v in self.domains[cell]:
                mark = len(trail)
                vals[cell] = v
                trail.append(cell)
                if self._propagate(vals, [cell], trail):
                    yield from rec()
                while len(trail) > mark:
                    vals[trail.pop()] = -1

        yield from rec()


def spanning_tree(X) -> tuple:
    """BFS tree of the Cayley graph of ``X`` for left multiplication by its generators.

    Returns ``(gens, parent, gen, bfs)``: every ``y != 1`` satisfies
    ``y = gen[y] * parent[y]``; ``bfs`` lists non-identity elements with parents first.
    """
    gens = X.generators()
    e = X.identity
    parent = [-1] * X.order
    gen = [-1] * X.order
    seen = {e}
    bfs = []
    frontier = [e]
    while frontier:
        nxt = []
        for p in frontier:
            for t in gens:
                y = X.table[t][p]
                if y not in seen:
                    seen.add(y)
                    parent[y] = p
                    gen[y] = t
                    bfs.append(y)
                    nxt.append(y)
        frontier = nxt
    return gens, tuple(parent), tuple(gen), tuple(bfs)
