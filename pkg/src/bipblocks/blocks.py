"""Block identity, weights, nuclei and member labelling.

A block is identified by its size and residue content. Its weight comes
from a three-phase abacus reduction. Odd-weight non-core blocks have a
weight-0 nucleus (for a shifted bicharge) from which every member is
rebuilt by prescribed bead moves; those moves are the member labels.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import (
    Bipartition, Params, Partition, bip, bipartitions, boundary_nodes,
    canonical_sort, diagram, residue,
)
from .abacus import (
    AbacusDisplay, Bicharge, canonical_bicharge, display, from_display,
    gamma_vector, push_down_lowest, push_up, s_xy, to_display,
    transfer_bead,
)


class BlockKey(NamedTuple):
    n: int
    content: tuple[int, ...]


def content_counts(b: Bipartition, p: Params) -> tuple[int, ...]:
    counts = [0] * p.e
    for nd in diagram(b):
        counts[residue(nd, p)] += 1
    return tuple(counts)


def delta_vector(b: Bipartition, p: Params) -> tuple[int, ...]:
    """Per residue: removable nodes minus addable nodes."""
    add, rem = boundary_nodes(b, p)
    out = [0] * p.e
    for _, r in rem:
        out[r] += 1
    for _, r in add:
        out[r] -= 1
    return tuple(out)


def block_key(b: Bipartition, p: Params) -> tuple[BlockKey, tuple[int, ...]]:
    return BlockKey(b.size, content_counts(b, p)), delta_vector(b, p)


def same_block(a: Bipartition, b: Bipartition, p: Params) -> bool:
    return a.size == b.size and content_counts(a, p) == content_counts(b, p)


@dataclass(frozen=True)
class WeightTrace:
    start: Bipartition
    hooks_removed: int
    after_slide: Bipartition
    # (x, y, weight gained, resulting bipartition) per cross-component swap
    swaps: tuple[tuple[int, int, int, Bipartition], ...]
    final: Bipartition
    x_set: frozenset[int]
    y_set: frozenset[int]
    total: int


def _swap_candidates(g: dict[int, int]):
    best = None
    for x, gx in g.items():
        for y, gy in g.items():
            if gx - gy >= 3:
                cand = (gx - gy, x, y)
                if best is None or cand > best:
                    best = cand
    return best


def _xy_sets(g: dict[int, int]) -> tuple[frozenset[int], frozenset[int]]:
    xs = {x for x in g for y in g if g[x] - g[y] == 2}
    ys = {y for y in g for x in g if g[x] - g[y] == 2}
    return frozenset(xs), frozenset(ys)


def _reduce_display(d: AbacusDisplay):
    """Phase 1 and 2 of the weight algorithm.

    Among pairs with the largest gamma gap we take the lexicographically
    largest (x, y); any choice gives the same weight, a fixed one gives a
    reproducible trace.
    """
    d, hooks = push_up(d)
    after_slide = d
    swaps = []
    while True:
        best = _swap_candidates(gamma_vector(d))
        if best is None:
            break
        diff, x, y = best
        d = s_xy(d, x, y)
        swaps.append((x, y, 2 * (diff - 2), from_display(d)))
    return d, hooks, after_slide, tuple(swaps)


def weight_trace(b: Bipartition, p: Params) -> WeightTrace:
    d, hooks, after_slide, swaps = _reduce_display(display(b, p))
    xs, ys = _xy_sets(gamma_vector(d))
    total = 2 * hooks + sum(s[2] for s in swaps) + min(len(xs), len(ys))
    return WeightTrace(b, hooks, from_display(after_slide), swaps,
                       from_display(d), xs, ys, total)


def weight(b: Bipartition, p: Params) -> int:
    return weight_trace(b, p).total


@dataclass(frozen=True)
class MemberLabel:
    """A bead-move recipe naming one block member.

    kind "hook", args (z, x, a): runner z moves component 1 to 2, then the
    lowest bead on runner x of component a steps down once.
    kind "down", args (x,): runner x moves component 1 to 2.
    kind "downdownup", args (w, z, y): runners w and z move component 1
    to 2, then runner y moves component 2 to 1.
    """

    kind: str
    args: tuple[int, ...]
    bipartition: Bipartition

    def __str__(self) -> str:
        return f"{self.kind}{self.args}"


@dataclass(frozen=True)
class BlockDescriptor:
    key: BlockKey
    weight: int
    delta: tuple[int, ...]
    is_core: bool
    btype: str  # one of I, II, III, IV, other
    nucleus: Optional[Bipartition]
    z_set: Optional[frozenset[int]]
    type_params: Optional[tuple[int, ...]]
    swapped: bool


@dataclass(frozen=True)
class BlockFamily:
    """Label machinery of an odd-weight block built from its nucleus.

    Bipartitions inside the labels are in the original component order,
    even when the analysis ran with the components swapped.
    """

    params: Params
    swapped: bool
    xi: Bipartition
    xi_display: AbacusDisplay
    z_set: frozenset[int]
    weight: int
    labels: tuple[MemberLabel, ...]

    def bip_of(self, kind: str, args) -> Bipartition:
        e = self.params.e
        if kind == "hook":
            # last entry is the component, not a runner
            args = (args[0] % e, args[1] % e, args[2])
        elif kind == "downdownup":
            w, z, y = (a % e for a in args)
            args = (min(w, z), max(w, z), y)
        else:
            args = tuple(a % e for a in args)
        for lab in self.labels:
            if lab.kind == kind and lab.args == args:
                return lab.bipartition
        raise KeyError(f"no member labelled {kind}{args}")

    def members(self) -> list[Bipartition]:
        return canonical_sort(lab.bipartition for lab in self.labels)

    def key(self) -> BlockKey:
        b = self.labels[0].bipartition
        return BlockKey(b.size, content_counts(b, self.params))


def swap_components(b: Bipartition) -> Bipartition:
    return Bipartition(b.comp2, b.comp1)


def _apply_label(xi_d: AbacusDisplay, kind: str, args) -> AbacusDisplay:
    if kind == "down":
        return transfer_bead(xi_d, 1, args[0])
    if kind == "hook":
        z, x, a = args
        return push_down_lowest(transfer_bead(xi_d, 1, z), a, x)
    if kind == "downdownup":
        w, z, y = args
        d = transfer_bead(transfer_bead(xi_d, 1, w), 1, z)
        return transfer_bead(d, 2, y)
    raise ValueError(f"unknown label kind {kind}")


def _family_labels(xi_d: AbacusDisplay, z_set, wt: int, swapped: bool,
                   e: int) -> tuple[MemberLabel, ...]:
    comp = sorted(set(range(e)) - set(z_set))
    zs = sorted(z_set)
    specs = []
    if wt == 1:
        specs = [("down", (z,)) for z in zs]
    else:
        for z in zs:
            for x in range(e):
                for a in (1, 2):
                    specs.append(("hook", (z, x, a)))
        specs += [("down", (x,)) for x in comp]
        for wi in range(len(zs)):
            for zi in range(wi + 1, len(zs)):
                for y in comp:
                    specs.append(("downdownup", (zs[wi], zs[zi], y)))
    out = []
    for kind, args in specs:
        b = from_display(_apply_label(xi_d, kind, args))
        if swapped:
            b = swap_components(b)
        out.append(MemberLabel(kind, args, b))
    assert len({lab.bipartition for lab in out}) == len(out), \
        "member labels must be pairwise distinct"
    return tuple(out)


def _btype(delta: tuple[int, ...]) -> str:
    e = len(delta)
    pos = {i: d for i, d in enumerate(delta) if d >= 1}
    if not pos:
        return "I"
    if len(pos) == 1:
        ((i, d),) = pos.items()
        return {1: "II", 2: "IV"}.get(d, "other")
    if len(pos) == 2 and set(pos.values()) == {1}:
        a, b = sorted(pos)
        if (a + 1) % e == b or (b + 1) % e == a:
            return "III"
    return "other"


def _shifted(p: Params) -> Params:
    return Params.make(p.e, (p.kappa[0] + 1, p.kappa[1] - 1), p.charp)


def _rep(base: int, t: int, e: int) -> int:
    return base + ((t - base) % e)


def _extract_type_params(xi: Bipartition, p: Params, btype: str):
    """Integers (i, j, k, l[, m]) from the nucleus boundary, or None if
    the orientation convention fails."""
    e = p.e
    ps = _shifted(p)
    add, rem = boundary_nodes(xi, ps)
    rem1 = [r for nd, r in rem if nd.component == 1]
    rem2 = [r for nd, r in rem if nd.component == 2]

    def corner_residues(a):
        # residues just past the top-right and bottom-left corners
        nodes = [nd for nd, _ in add if nd.component == a]
        if len(nodes) != 2:
            return None
        top = min(nodes, key=lambda nd: nd.row)
        bot = max(nodes, key=lambda nd: nd.row)
        return residue(top, ps), residue(bot, ps)

    if btype == "II":
        if len(rem1) != 1 or rem2:
            return None
        i = rem1[0]
        pair = corner_residues(1)
        add2 = [r for nd, r in add if nd.component == 2]
        if pair is None or len(add2) != 1:
            return None
        j, l = _rep(i, pair[0] - 1, e), _rep(i, pair[1] - 1, e)
        k = _rep(i, add2[0] - 1, e)
        if i <= j <= k <= l <= e + i - 2:
            return (i, j, k, l)
        return None

    if btype == "III":
        if len(rem1) != 1 or len(rem2) != 1:
            return None
        i = (rem1[0] - 1) % e
        if rem2[0] != i:
            return None
        p1, p2 = corner_residues(1), corner_residues(2)
        if p1 is None or p2 is None:
            return None
        j, l = _rep(i, p1[0] - 1, e), _rep(i, p1[1] - 1, e)
        k, m = _rep(i, p2[0] - 1, e), _rep(i, p2[1] - 1, e)
        if i + 1 <= j <= k <= l <= m <= e + i - 2:
            return (i, j, k, l, m)
        return None

    if btype == "IV":
        if len(rem1) != 1 or len(rem2) != 1 or rem1 != rem2:
            return None
        i = rem1[0]
        p1, p2 = corner_residues(1), corner_residues(2)
        if p1 is None or p2 is None:
            return None
        j, l = _rep(i, p1[0] - 1, e), _rep(i, p1[1] - 1, e)
        k, m = _rep(i, p2[0] - 1, e), _rep(i, p2[1] - 1, e)
        if i <= j <= k <= l <= m <= e + i - 2:
            return (i, j, k, l, m)
        return None

    return None


def _z_from_params(btype: str, params: tuple[int, ...], e: int) -> frozenset[int]:
    if btype == "II":
        i, j, k, l = params
        ranges = [(i, j), (k + 1, l)]
    elif btype == "III":
        i, j, k, l, m = params
        ranges = [(i + 1, j), (k + 1, l), (m + 1, e + i - 1)]
    else:
        i, j, k, l, m = params
        ranges = [(i, j), (k + 1, l), (m + 1, e + i - 1)]
    out = set()
    for lo, hi in ranges:
        out.update(t % e for t in range(lo, hi + 1))
    return frozenset(out)


_cache_lock = threading.Lock()
_block_cache: dict = {}


def _member_of(key: BlockKey, p: Params) -> Bipartition:
    for b in bipartitions(key.n):
        if content_counts(b, p) == key.content:
            return b
    raise ValueError("empty block: no bipartition has this content")


def enumerate_block(key: BlockKey, p: Params) -> list[Bipartition]:
    """All members of the block, most dominant first (brute force)."""
    cache_key = ("enum", key, p)
    with _cache_lock:
        if cache_key in _block_cache:
            return _block_cache[cache_key]
    out = canonical_sort(b for b in bipartitions(key.n)
                         if content_counts(b, p) == key.content)
    if not out:
        raise ValueError("empty block: no bipartition has this content")
    with _cache_lock:
        _block_cache[cache_key] = out
    return out


def _build_family(member: Bipartition, p: Params, wt: int) -> BlockFamily:
    """Reduce to the underlying weight-1 display, pick the orientation
    with a single low runner, and build the nucleus and labels."""
    attempts = []
    for swapped in (False, True):
        q = p.swap() if swapped else p
        m = swap_components(member) if swapped else member
        d, _, _, _ = _reduce_display(display(m, q, n=member.size))
        xs, ys = _xy_sets(gamma_vector(d))
        if len(ys) == 1:
            attempts.append((swapped, q, d, xs | ys, next(iter(ys))))
    if not attempts:
        raise ValueError("no nucleus: reduction does not reach a single "
                         "low runner")
    out = []
    for swapped, q, d, z_set, y in attempts:
        xi_d = transfer_bead(d, 2, y)
        xi = from_display(xi_d)
        # sanity: the nucleus gamma gaps must read off the Z-set
        g = gamma_vector(xi_d)
        for x in range(q.e):
            for y2 in range(q.e):
                expect = (1 if (x in z_set and y2 not in z_set)
                          else -1 if (x not in z_set and y2 in z_set) else 0)
                assert g[x] - g[y2] == expect, "nucleus gamma law violated"
        labels = _family_labels(xi_d, z_set, wt, swapped, q.e)
        out.append(BlockFamily(p, swapped, xi, xi_d, frozenset(z_set),
                               wt, labels))
    return out if len(out) == 2 else out[0]


def _analyze(key: BlockKey, p: Params):
    cache_key = ("analyze", key, p)
    with _cache_lock:
        if cache_key in _block_cache:
            return _block_cache[cache_key]
    member = _member_of(key, p)
    result = _analyze_member(member, p)
    with _cache_lock:
        _block_cache[cache_key] = result
    return result


def _analyze_member(member: Bipartition, p: Params):
    key = BlockKey(member.size, content_counts(member, p))
    delta = delta_vector(member, p)
    wt = weight(member, p)
    d, _ = push_up(display(member, p))
    core = (d.beads1 == display(member, p).beads1
            and d.beads2 == display(member, p).beads2
            and _swap_candidates(gamma_vector(d)) is None)
    btype = _btype(delta)
    family = None
    type_params = None
    if wt == 1 or (wt == 3 and not core):
        fam = _build_family(member, p, wt)
        candidates = fam if isinstance(fam, list) else [fam]
        if wt == 3 and btype in ("II", "III", "IV"):
            for cand in candidates:
                oriented_p = cand.params.swap() if cand.swapped else cand.params
                tp = _extract_type_params(cand.xi, oriented_p, btype)
                if tp is not None:
                    family, type_params = cand, tp
                    break
            if family is None:
                # the nucleus has the mirrored chirality in both component
                # orders (possible when kappa is symmetric); the labels
                # still work, only the parameter window is unavailable
                family = candidates[0]
        else:
            family = candidates[0]
    desc = BlockDescriptor(
        key=key, weight=wt, delta=delta, is_core=core, btype=btype,
        nucleus=family.xi if family else None,
        z_set=family.z_set if family else None,
        type_params=type_params,
        swapped=family.swapped if family else False)
    return desc, family


def classify_type(key: BlockKey, p: Params) -> BlockDescriptor:
    return _analyze(key, p)[0]


def block_family(key: BlockKey, p: Params) -> BlockFamily:
    fam = _analyze(key, p)[1]
    if fam is None:
        raise ValueError("no nucleus: block is core or of even weight")
    return fam


def nucleus_and_Z(key: BlockKey, p: Params) -> tuple[Bipartition, frozenset[int]]:
    fam = block_family(key, p)
    return fam.xi, fam.z_set


def constructive_members(key: BlockKey, p: Params) -> list[Bipartition]:
    """Members rebuilt from the nucleus labels, most dominant first."""
    fam = block_family(key, p)
    return canonical_sort(lab.bipartition for lab in fam.labels)


def exceptional_labels(fam: BlockFamily) -> list[MemberLabel]:
    """Members with an addable i-node for every residue i of positive
    delta. Empty when no residue has positive delta."""
    p = fam.params
    delta = delta_vector(fam.labels[0].bipartition, p)
    pos = [i for i, dv in enumerate(delta) if dv >= 1]
    if not pos:
        return []
    out = []
    for lab in fam.labels:
        add, _ = boundary_nodes(lab.bipartition, p)
        add_res = {r for _, r in add}
        if all(i in add_res for i in pos):
            out.append(lab)
    return out


def exceptional_bips(key: BlockKey, p: Params) -> list[MemberLabel]:
    """Exceptional members of a weight-3 block, as labels."""
    desc, fam = _analyze(key, p)
    if desc.weight != 3:
        raise ValueError("exceptional members are defined for weight 3 only")
    pos = [i for i, dv in enumerate(desc.delta) if dv >= 1]
    if not pos or desc.is_core:
        return []
    return exceptional_labels(fam)


def _rect(rows: int, width: int) -> Partition:
    return Partition((width,) * rows)


def family_from_type_params(btype: str, e: int, params: tuple[int, ...],
                            charp: int = 0) -> BlockFamily:
    """Build the label machinery of a block directly from its type
    parameters, without enumerating anything.

    Type II takes (i, j, k, l) with i <= j <= k <= l <= e+i-2; types III
    and IV take (i, j, k, l, m). The nucleus is a pair of rectangles
    determined by the parameters, and kappa follows from them.
    """
    if btype == "II":
        i, j, k, l = params
        if not i <= j <= k <= l <= e + i - 2:
            raise ValueError("need i <= j <= k <= l <= e+i-2")
        xi = Bipartition(_rect(j - i + 1, e + i - l - 1), Partition(()))
        kappa = (j + l + 1 - i, k + 2)
    elif btype == "III":
        i, j, k, l, m = params
        if not i + 1 <= j <= k <= l <= m <= e + i - 2:
            raise ValueError("need i+1 <= j <= k <= l <= m <= e+i-2")
        xi = Bipartition(_rect(j - i, e + i - l),
                         _rect(k - i + 1, e + i - m - 1))
        kappa = (j + l - i, k + m + 3 - i)
    elif btype == "IV":
        i, j, k, l, m = params
        if not i <= j <= k <= l <= m <= e + i - 2:
            raise ValueError("need i <= j <= k <= l <= m <= e+i-2")
        xi = Bipartition(_rect(j - i + 1, e + i - l - 1),
                         _rect(k - i + 1, e + i - m - 1))
        kappa = (j + l - i + 1, k + m + 3 - i)
    else:
        raise ValueError("type must be II, III or IV")
    p = Params.make(e, kappa, charp)
    extracted = _extract_type_params(xi, p, btype)
    assert extracted == tuple(params), \
        f"parameter extraction round trip failed: {extracted}"
    ch = canonical_bicharge(xi.size + 6 * e, p)
    xi_d = to_display(xi, p, Bicharge(ch.k1 + 1, ch.k2 - 1))
    z_set = _z_from_params(btype, tuple(params), e)
    if len(z_set) < 2:
        raise ValueError("parameters describe a block of weight below 3")
    labels = _family_labels(xi_d, z_set, 3, False, e)
    return BlockFamily(p, False, xi, xi_d, z_set, 3, labels)
