"""Partitions, bipartitions, Young diagrams, residues, dominance and rim hooks.

Everything here is an immutable value; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Params(NamedTuple):
    """Global parameters: quantum characteristic e, residue pair kappa,
    field characteristic charp (0 for characteristic zero)."""

    e: int
    kappa: tuple[int, int]
    charp: int = 0

    @staticmethod
    def make(e: int, kappa, charp: int = 0) -> "Params":
        if e < 2:
            raise ValueError("e must be at least 2")
        k1, k2 = kappa
        if charp != 0:
            if not _is_prime(charp):
                raise ValueError("charp must be 0 or prime")
            if e % charp == 0:
                raise ValueError("charp must not divide e")
        return Params(e, (k1 % e, k2 % e), charp)

    def swap(self) -> "Params":
        """Same parameters with the two kappa entries exchanged."""
        return Params(self.e, (self.kappa[1], self.kappa[0]), self.charp)


class Partition(tuple):
    """A partition: weakly decreasing positive integers. Zeros are stripped."""

    def __new__(cls, parts=()):
        parts = tuple(int(x) for x in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError("parts must be weakly decreasing")
        if parts and parts[-1] < 0:
            raise ValueError("parts must be non-negative")
        if any(p == 0 for p in parts):
            raise ValueError("zero parts only allowed at the end")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def row(self, r: int) -> int:
        """Part in row r (1-indexed), 0 beyond the last row."""
        return self[r - 1] if 1 <= r <= len(self) else 0

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p >= c) for c in range(1, self[0] + 1))


EMPTY = Partition()


class Bipartition(NamedTuple):
    comp1: Partition
    comp2: Partition

    @property
    def size(self) -> int:
        return self.comp1.size + self.comp2.size

    def comp(self, a: int) -> Partition:
        return self.comp1 if a == 1 else self.comp2

    def __str__(self) -> str:
        fmt = lambda p: "(" + ",".join(map(str, p)) + ")" if p else "()"
        return fmt(self.comp1) + "|" + fmt(self.comp2)


def bip(c1, c2) -> Bipartition:
    return Bipartition(Partition(c1), Partition(c2))


EMPTY_BIP = bip((), ())


class Node(NamedTuple):
    """A cell (row, col) in component 1 or 2, all 1-indexed."""

    row: int
    col: int
    component: int


def residue(node: Node, p: Params) -> int:
    return (node.col - node.row + p.kappa[node.component - 1]) % p.e


def node_is_above(a: Node, b: Node) -> bool:
    """Reading order for signatures: component-major, then row."""
    return (a.component, a.row) < (b.component, b.row)


def conjugate(b: Bipartition, p: Optional[Params] = None) -> Bipartition:
    """Transpose both components and swap them."""
    return Bipartition(b.comp2.conjugate(), b.comp1.conjugate())


def conjugate_node(node: Node) -> Node:
    """Image of a cell under conjugation (transpose, other component)."""
    return Node(node.col, node.row, 3 - node.component)


def _partial_sums(b: Bipartition, count: int) -> list[int]:
    """Interleaved dominance partial sums (2*count entries)."""
    out = []
    s1 = 0
    s2 = b.comp1.size
    for r in range(1, count + 1):
        s1 += b.comp1.row(r)
        s2 += b.comp2.row(r)
        out.append(s1)
        out.append(s2)
    return out


def dominates(a: Bipartition, b: Bipartition) -> bool:
    if a.size != b.size:
        raise ValueError("dominance needs equal sizes")
    n = max(len(a.comp1), len(a.comp2), len(b.comp1), len(b.comp2))
    pa, pb = _partial_sums(a, n), _partial_sums(b, n)
    return all(x >= y for x, y in zip(pa, pb))


def dominance_key(b: Bipartition) -> tuple:
    """Canonical sort key: interleaved partial-sum vector, 2n entries.

    Lexicographic comparison of keys refines dominance: a dominates b
    implies key(a) >= key(b).
    """
    return tuple(_partial_sums(b, b.size))


def canonical_sort(bips) -> list[Bipartition]:
    """Deterministic order, most dominant first."""
    return sorted(bips, key=dominance_key, reverse=True)


def diagram(b: Bipartition) -> set[Node]:
    out = set()
    for a in (1, 2):
        for r, part in enumerate(b.comp(a), start=1):
            for c in range(1, part + 1):
                out.add(Node(r, c, a))
    return out


def addable_nodes(b: Bipartition) -> list[Node]:
    """Addable cells, component 1 first, ascending row."""
    out = []
    for a in (1, 2):
        part = b.comp(a)
        for r in range(1, len(part) + 2):
            c = part.row(r) + 1
            if part.row(r - 1) >= c or r == 1:
                out.append(Node(r, c, a))
    return out


def removable_nodes(b: Bipartition) -> list[Node]:
    """Removable cells, component 1 first, ascending row."""
    out = []
    for a in (1, 2):
        part = b.comp(a)
        for r in range(1, len(part) + 1):
            if part.row(r) > part.row(r + 1):
                out.append(Node(r, part.row(r), a))
    return out


def boundary_nodes(b: Bipartition, p: Params):
    """(addable, removable) node lists, each entry (node, residue)."""
    add = [(nd, residue(nd, p)) for nd in addable_nodes(b)]
    rem = [(nd, residue(nd, p)) for nd in removable_nodes(b)]
    return add, rem


def add_node(b: Bipartition, node: Node) -> Bipartition:
    part = list(b.comp(node.component))
    if node.row == len(part) + 1:
        part.append(0)
    if part[node.row - 1] + 1 != node.col:
        raise ValueError("node is not addable")
    part[node.row - 1] += 1
    new = Partition(part)
    return Bipartition(new, b.comp2) if node.component == 1 else Bipartition(b.comp1, new)


def remove_node(b: Bipartition, node: Node) -> Bipartition:
    part = list(b.comp(node.component))
    if node.row > len(part) or part[node.row - 1] != node.col:
        raise ValueError("node is not removable")
    part[node.row - 1] -= 1
    new = Partition(part)
    return Bipartition(new, b.comp2) if node.component == 1 else Bipartition(b.comp1, new)


@dataclass(frozen=True)
class RimHook:
    """A removable connected rim strip in one component."""

    nodes: tuple[Node, ...]
    hand: Node
    leg_length: int
    component: int

    @property
    def length(self) -> int:
        return len(self.nodes)


def _beta_set(part: Partition, k: int) -> frozenset[int]:
    return frozenset(part.row(r) + k - r for r in range(1, k + 1))


def _partition_from_beta(beta, k: int) -> Partition:
    vals = sorted(beta, reverse=True)
    return Partition(v - k + r for r, v in enumerate(vals, start=1))


def _component_diagram(part: Partition, a: int) -> set[Node]:
    out = set()
    for r, width in enumerate(part, start=1):
        for c in range(1, width + 1):
            out.add(Node(r, c, a))
    return out


def rim_hooks(b: Bipartition, length: Optional[int] = None) -> list[RimHook]:
    """All removable rim hooks of b, optionally filtered by length."""
    out = []
    for a in (1, 2):
        part = b.comp(a)
        if not part:
            continue
        k = len(part)
        beta = _beta_set(part, k)
        cells = _component_diagram(part, a)
        for x in beta:
            lengths = [length] if length else range(1, x + 1)
            for ln in lengths:
                y = x - ln
                if y < 0 or y in beta:
                    continue
                smaller = _partition_from_beta((beta - {x}) | {y}, k)
                hook_nodes = cells - _component_diagram(smaller, a)
                rows = [nd.row for nd in hook_nodes]
                top = min(rows)
                hand = max((nd for nd in hook_nodes if nd.row == top), key=lambda nd: nd.col)
                out.append(RimHook(
                    nodes=tuple(sorted(hook_nodes)),
                    hand=hand,
                    leg_length=max(rows) - top,
                    component=a,
                ))
    out.sort(key=lambda h: (h.component, h.hand.row, h.hand.col, h.length))
    return out


def remove_rim_hook(b: Bipartition, hook: RimHook) -> Bipartition:
    remaining = _component_diagram(b.comp(hook.component), hook.component) - set(hook.nodes)
    rows: dict[int, int] = {}
    for nd in remaining:
        rows[nd.row] = max(rows.get(nd.row, 0), nd.col)
    part = Partition(rows.get(r, 0) for r in range(1, max(rows, default=0) + 1))
    return Bipartition(part, b.comp2) if hook.component == 1 else Bipartition(b.comp1, part)


def is_e_restricted(part: Partition, e: int) -> bool:
    """Consecutive part differences (last part included) all below e."""
    if e < 2:
        raise ValueError("e must be at least 2")
    part = Partition(part)
    return all(part.row(r) - part.row(r + 1) < e for r in range(1, len(part) + 1))


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """All partitions of n with parts bounded by max_part."""
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        yield EMPTY
        return
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + tuple(rest))


def bipartitions(n: int) -> Iterator[Bipartition]:
    """All bipartitions of n."""
    for m in range(n + 1):
        for c1 in partitions(m):
            for c2 in partitions(n - m):
                yield Bipartition(c1, c2)
