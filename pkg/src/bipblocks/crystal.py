"""Signatures, good and antigood nodes, restricted and regular tests.

The i-signature of a bipartition reads its addable and removable i-nodes
from top to bottom. Cancelling "-+" pairs singles out the normal nodes
(and the good node); cancelling "+-" pairs gives the anti variants, which
drive the dual notion of regular bipartitions and the diamond bijection
between the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    Bipartition, EMPTY_BIP, Node, Params, boundary_nodes, conjugate,
    dominates, remove_node, add_node,
)
from .blocks import block_key, enumerate_block, weight


@dataclass(frozen=True)
class SignatureReport:
    residue: int
    # (node, "+" or "-") in reading order, for the raw and both reduced forms
    raw: tuple[tuple[Node, str], ...]
    reduced: tuple[tuple[Node, str], ...]
    antireduced: tuple[tuple[Node, str], ...]
    normal: tuple[Node, ...]
    conormal: tuple[Node, ...]
    antinormal: tuple[Node, ...]
    anticonormal: tuple[Node, ...]
    good: Optional[Node]
    cogood: Optional[Node]
    antigood: Optional[Node]
    anticogood: Optional[Node]

    @property
    def raw_string(self) -> str:
        return "".join(s for _, s in self.raw)

    @property
    def reduced_string(self) -> str:
        return "".join(s for _, s in self.reduced)

    @property
    def nor(self) -> int:
        return len(self.normal)


@dataclass(frozen=True)
class StripTrace:
    residues: tuple[int, ...]
    terminal: Bipartition


def _cancel(raw, first: str, second: str):
    """Delete adjacent (first, second) sign pairs until none remain."""
    out = []
    for item in raw:
        if out and out[-1][1] == first and item[1] == second:
            out.pop()
        else:
            out.append(item)
    return tuple(out)


def signature(b: Bipartition, i: int, p: Params) -> SignatureReport:
    i %= p.e
    add, rem = boundary_nodes(b, p)
    entries = [(nd, "+") for nd, r in add if r == i]
    entries += [(nd, "-") for nd, r in rem if r == i]
    entries.sort(key=lambda item: (item[0].component, item[0].row))
    raw = tuple(entries)
    reduced = _cancel(raw, "-", "+")
    antireduced = _cancel(raw, "+", "-")
    normal = tuple(nd for nd, s in reduced if s == "-")
    conormal = tuple(nd for nd, s in reduced if s == "+")
    antinormal = tuple(nd for nd, s in antireduced if s == "-")
    anticonormal = tuple(nd for nd, s in antireduced if s == "+")
    return SignatureReport(
        residue=i, raw=raw, reduced=reduced, antireduced=antireduced,
        normal=normal, conormal=conormal,
        antinormal=antinormal, anticonormal=anticonormal,
        good=normal[0] if normal else None,
        cogood=conormal[-1] if conormal else None,
        antigood=antinormal[-1] if antinormal else None,
        anticogood=anticonormal[0] if anticonormal else None)


def _next_good(b: Bipartition, p: Params):
    """Good node for the smallest residue that has one, with its residue."""
    for i in range(p.e):
        rep = signature(b, i, p)
        if rep.good is not None:
            return i, rep.good
    return None


def _next_antigood(b: Bipartition, p: Params):
    for i in range(p.e):
        rep = signature(b, i, p)
        if rep.antigood is not None:
            return i, rep.antigood
    return None


def is_restricted(b: Bipartition, p: Params) -> tuple[bool, StripTrace]:
    """Strip good nodes as long as any exist; restricted means the empty
    bipartition is reached."""
    cur = b
    residues = []
    while True:
        found = _next_good(cur, p)
        if found is None:
            break
        i, nd = found
        cur = remove_node(cur, nd)
        residues.append(i)
    return cur == EMPTY_BIP, StripTrace(tuple(residues), cur)


def is_regular(b: Bipartition, p: Params) -> bool:
    """Strip antigood nodes instead; equivalent to the conjugate being
    restricted under the same parameters."""
    cur = b
    while True:
        found = _next_antigood(cur, p)
        if found is None:
            break
        cur = remove_node(cur, found[1])
    return cur == EMPTY_BIP


def _weight_one_diamond(xi: Bipartition, p: Params) -> Bipartition:
    members = enumerate_block(block_key(xi, p)[0], p)
    above = [m for m in members if m != xi and dominates(m, xi)]
    if not above:
        raise ValueError("not restricted: dominance-maximal in its block")
    minimal = [m for m in above
               if not any(c != m and dominates(m, c) for c in above)]
    assert len(minimal) == 1, "weight-1 block not totally ordered above xi"
    return minimal[0]


def mu_diamond(mu: Bipartition, p: Params) -> Bipartition:
    """The regular partner of a restricted bipartition.

    Strip good nodes down to weight at most one, replace the base by its
    own partner (itself at weight 0, the minimal strictly dominating block
    member at weight 1), then add anticogood nodes of the recorded
    residues in reverse order.
    """
    cur = mu
    residues = []
    while weight(cur, p) > 1:
        found = _next_good(cur, p)
        if found is None:
            raise ValueError("not restricted: no normal nodes left")
        i, nd = found
        cur = remove_node(cur, nd)
        residues.append(i)
    if weight(cur, p) == 1:
        cur = _weight_one_diamond(cur, p)
    for i in reversed(residues):
        rep = signature(cur, i, p)
        assert rep.anticogood is not None, "anticogood node must exist"
        cur = add_node(cur, rep.anticogood)
    return cur
