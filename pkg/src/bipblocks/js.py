"""Hook-pair valuations, the refined dominance order, and the
decomposition-matrix solver for blocks of weight at most three.

Two bipartitions are connected by a hook pair when removing one rim hook
from each leaves the same diagram and the hook hands share a residue.
Each pair carries a sign and an integer valuation, and summing them gives
the coefficient that feeds the column-by-column bound recursion.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .core import (
    Bipartition, Params, RimHook, canonical_sort, diagram, dominates,
    removable_nodes, remove_node, residue, rim_hooks,
)
from .blocks import BlockKey, content_counts, enumerate_block, weight
from .crystal import is_restricted


class CharacteristicWarning(UserWarning):
    """A valuation step whose value depends on the characteristic."""


@dataclass(frozen=True)
class HookPair:
    L: RimHook
    N: RimHook
    epsilon: int
    valuation: int


def _hook_data(b: Bipartition):
    """Per rim hook: the hook, its complement in the diagram, its length."""
    cells = diagram(b)
    return [(h, frozenset(cells - set(h.nodes))) for h in rim_hooks(b)]


def _pair_valuation(L: RimHook, N: RimHook, p: Params) -> int:
    hl, hn = L.hand, N.hand
    if L.component != N.component:
        return 1 if residue(hl, p) == residue(hn, p) else 0
    offset = (hl.col - hl.row) - (hn.col - hn.row)
    if offset % p.e != 0:
        return 0
    k = abs(offset) // p.e
    assert k != 0, "coincident hands would force equal bipartitions"
    if k == 1:
        return 1
    if p.charp == 0:
        return 1
    mult = 1
    while k % p.charp == 0:
        mult *= p.charp
        k //= p.charp
    if mult > 1:
        warnings.warn(
            f"valuation {mult} at offset {offset} depends on the "
            f"characteristic {p.charp}", CharacteristicWarning)
    return mult


def _pairs_from_data(data_l, data_n, p: Params) -> list[HookPair]:
    out = []
    for L, comp_l in data_l:
        for N, comp_n in data_n:
            if L.length != N.length or comp_l != comp_n:
                continue
            if residue(L.hand, p) != residue(N.hand, p):
                continue
            eps = -1 if (L.leg_length - N.leg_length) % 2 else 1
            out.append(HookPair(L, N, eps, _pair_valuation(L, N, p)))
    return out


def hook_pairs(lam: Bipartition, nu: Bipartition, p: Params) -> list[HookPair]:
    """All single-hook exchanges between two bipartitions of equal size."""
    if lam.size != nu.size:
        raise ValueError("sizes must agree")
    return _pairs_from_data(_hook_data(lam), _hook_data(nu), p)


def js_valuation(lam: Bipartition, nu: Bipartition, p: Params) -> int:
    """Signed valuation sum over the hook pairs of a dominating pair."""
    if lam == nu or not dominates(lam, nu):
        raise ValueError("first argument must strictly dominate the second")
    return sum(pair.epsilon * pair.valuation
               for pair in hook_pairs(lam, nu, p))


def _valuation_table(members, p: Params) -> dict:
    data = {m: _hook_data(m) for m in members}
    table = {}
    for a, b in combinations(members, 2):
        # canonical order sorts most dominant first
        if not dominates(a, b):
            continue
        table[(a, b)] = sum(pair.epsilon * pair.valuation
                            for pair in _pairs_from_data(data[a], data[b], p))
    return table


@dataclass(frozen=True)
class JSOrder:
    """Reflexive-transitive closure of valuation-weighted dominance steps."""

    members: tuple[Bipartition, ...]
    strict: frozenset[tuple[Bipartition, Bipartition]]

    def dominates(self, a: Bipartition, b: Bipartition) -> bool:
        return a == b or (a, b) in self.strict


def order_from_members(members, p: Params) -> JSOrder:
    members = canonical_sort(members)
    table = _valuation_table(members, p)
    edges = {m: [] for m in members}
    for (a, b), v in table.items():
        if v != 0:
            edges[a].append(b)
    below = {}
    for m in reversed(members):  # ascending dominance: successors first
        reach = set()
        for b in edges[m]:
            reach.add(b)
            reach |= below[b]
        below[m] = reach
    strict = frozenset((a, b) for a in members for b in below[a])
    assert not any((b, a) in strict for a, b in strict), "order has a cycle"
    return JSOrder(tuple(members), strict)


def js_order(key: BlockKey, p: Params) -> JSOrder:
    return order_from_members(enumerate_block(key, p), p)


def branch_labels(b: Bipartition, i: int, r: int, p: Params):
    """Bipartitions reached by deleting r removable nodes of residue i."""
    nodes = [nd for nd in removable_nodes(b) if residue(nd, p) == i % p.e]
    if r > len(nodes):
        raise ValueError(f"only {len(nodes)} removable nodes of residue {i}")
    out = []
    for subset in combinations(nodes, r):
        smaller = b
        for nd in subset:
            smaller = remove_node(smaller, nd)
        out.append(smaller)
    return canonical_sort(out)


def branch_epsilon(b: Bipartition, i: int, p: Params):
    """The removable-node count for a residue and the full removal."""
    nodes = [nd for nd in removable_nodes(b) if residue(nd, p) == i % p.e]
    smaller = b
    for nd in nodes:
        smaller = remove_node(smaller, nd)
    return len(nodes), smaller


@dataclass(frozen=True)
class DecompMatrix:
    block: BlockKey
    rows: tuple[Bipartition, ...]  # all members, most dominant first
    cols: tuple[Bipartition, ...]  # the restricted members
    entries: tuple[tuple[int, ...], ...]
    jbounds: tuple[tuple[int, ...], ...]
    flags: tuple[tuple[str, ...], ...]

    def _at(self, lam: Bipartition, mu: Bipartition) -> tuple[int, int, str]:
        r, c = self.rows.index(lam), self.cols.index(mu)
        return self.entries[r][c], self.jbounds[r][c], self.flags[r][c]

    def entry(self, lam: Bipartition, mu: Bipartition) -> int:
        return self._at(lam, mu)[0]

    def jbound(self, lam: Bipartition, mu: Bipartition) -> int:
        return self._at(lam, mu)[1]

    def flag(self, lam: Bipartition, mu: Bipartition) -> str:
        return self._at(lam, mu)[2]


def _solve_column(ascending, by_row, mu, p: Params):
    dn, bounds, flags = {}, {}, {}
    for lam in ascending:
        if lam == mu:
            dn[lam], bounds[lam], flags[lam] = 1, 1, "direct"
            continue
        j = sum(v * dn[nu] for nu, v in by_row[lam].items() if dn[nu])
        assert j >= 0, f"negative bound {j} at {lam}"
        if j > 0:
            assert dominates(lam, mu), "nonzero bound off the dominance cone"
        dn[lam] = 1 if j > 0 else 0
        bounds[lam] = j
        flags[lam] = "clamped" if j >= 2 else "direct"
    return dn, bounds, flags


def matrix_from_members(members, p: Params, workers: int | None = None) -> DecompMatrix:
    """Solve the bound recursion over an explicitly given block."""
    rows = tuple(canonical_sort(members))
    wt = weight(rows[0], p)
    if wt > 3:
        raise ValueError(f"unsupported weight {wt}: entries are only "
                         "certified up to weight 3")
    cols = tuple(m for m in rows if is_restricted(m, p)[0])
    table = _valuation_table(rows, p)
    # group the table by dominating member so each column scan is linear
    by_row = {m: {} for m in rows}
    for (a, b), v in table.items():
        if v:
            by_row[a][b] = v
    ascending = tuple(reversed(rows))

    def solve(mu):
        return _solve_column(ascending, by_row, mu, p)

    if workers:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(solve, cols))
    else:
        solved = [solve(mu) for mu in cols]
    entries = tuple(tuple(solved[c][0][lam] for c in range(len(cols)))
                    for lam in rows)
    jbounds = tuple(tuple(solved[c][1][lam] for c in range(len(cols)))
                    for lam in rows)
    flags = tuple(tuple(solved[c][2][lam] for c in range(len(cols)))
                  for lam in rows)
    key = BlockKey(rows[0].size, content_counts(rows[0], p))
    return DecompMatrix(key, rows, cols, entries, jbounds, flags)


def decomposition_matrix(key: BlockKey, p: Params,
                         workers: int | None = None) -> DecompMatrix:
    return matrix_from_members(enumerate_block(key, p), p, workers)
