import pytest
from hypothesis import given, strategies as st

from bipblocks.core import (
    Params, Partition, Node, bip, EMPTY_BIP,
    residue, conjugate, conjugate_node, dominates, dominance_key,
    boundary_nodes, addable_nodes, removable_nodes, rim_hooks,
    remove_rim_hook, is_e_restricted, partitions, bipartitions,
    add_node, remove_node, diagram, canonical_sort,
)


from helpers import small_bips, bip_pairs, params_st


class TestPartition:
    def test_strips_trailing_zeros(self):
        assert Partition((3, 2, 0, 0)) == (3, 2)

    def test_rejects_increase(self):
        with pytest.raises(ValueError):
            Partition((1, 2))

    def test_row_out_of_range(self):
        p = Partition((4, 2))
        assert p.row(1) == 4 and p.row(3) == 0

    def test_conjugate(self):
        assert Partition((3, 2, 1, 1)).conjugate() == (4, 2, 1)
        assert Partition(()).conjugate() == ()


class TestResidue:
    def test_corner_is_kappa(self):
        p = Params.make(4, (1, 3))
        assert residue(Node(1, 1, 1), p) == 1
        assert residue(Node(1, 1, 2), p) == 3

    def test_first_row_component_one(self):
        p = Params.make(3, (0, 1))
        assert residue(Node(1, 4, 1), p) == 0

    def test_direct_evaluation(self):
        p = Params.make(6, (5, 4))
        assert residue(Node(1, 2, 2), p) == 5


class TestConjugate:
    def test_empty(self):
        assert conjugate(EMPTY_BIP) == EMPTY_BIP

    def test_single_node_swaps(self):
        assert conjugate(bip((1,), ())) == bip((), (1,))

    def test_transpose_example(self):
        assert conjugate(bip((3, 2, 1, 1), (2, 2, 2))) == bip((3, 3), (4, 2, 1))

    @given(small_bips())
    def test_involution(self, b):
        assert conjugate(conjugate(b)) == b

    @given(small_bips(6), params_st())
    def test_residue_conjugation_law(self, b, p):
        total = (p.kappa[0] + p.kappa[1]) % p.e
        for nd in diagram(b):
            img = conjugate_node(nd)
            assert img in diagram(conjugate(b))
            assert (residue(nd, p) + residue(img, p)) % p.e == total


class TestDominance:
    def test_reflexive(self):
        b = bip((2, 1), (3,))
        assert dominates(b, b)

    def test_partial_sum_chains(self):
        assert dominates(bip((1,), (1,)), bip((), (2,)))
        assert not dominates(bip((), (2,)), bip((1,), (1,)))

    def test_chain_of_four(self):
        b1 = bip((1, 1), (2, 1))
        b2 = bip((2,), (2, 1))
        b3 = bip((2, 1), (1, 1))
        b4 = bip((2, 1), (2,))
        for hi, lo in [(b4, b3), (b3, b2), (b2, b1)]:
            assert dominates(hi, lo) and not dominates(lo, hi)

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            dominates(bip((1,), ()), bip((2,), ()))

    @given(bip_pairs())
    def test_conjugation_reverses(self, pair):
        a, b = pair
        assert dominates(a, b) == dominates(conjugate(b), conjugate(a))

    @given(bip_pairs())
    def test_key_refines_dominance(self, pair):
        a, b = pair
        if dominates(a, b):
            assert dominance_key(a) >= dominance_key(b)

    def test_canonical_sort_deterministic(self):
        bips = list(bipartitions(4))
        assert canonical_sort(bips) == canonical_sort(reversed(bips))


class TestBoundary:
    def test_empty_bipartition(self):
        add, rem = boundary_nodes(EMPTY_BIP, Params.make(3, (0, 1)))
        assert [nd for nd, _ in add] == [Node(1, 1, 1), Node(1, 1, 2)]
        assert rem == []

    def test_row_partition(self):
        assert removable_nodes(bip((2,), ())) == [Node(1, 2, 1)]
        assert addable_nodes(bip((2,), ())) == [
            Node(1, 3, 1), Node(2, 1, 1), Node(1, 1, 2)]

    def test_signature_read_order(self):
        # merged residue-0 boundary of ((3,2,1,1)|(2,2,2)) at e=3, kappa=(0,1)
        p = Params.make(3, (0, 1))
        b = bip((3, 2, 1, 1), (2, 2, 2))
        add, rem = boundary_nodes(b, p)
        marks = [(nd, "+") for nd, r in add if r == 0]
        marks += [(nd, "-") for nd, r in rem if r == 0]
        marks.sort(key=lambda m: (m[0].component, m[0].row))
        assert "".join(s for _, s in marks) == "+--+-"
        assert [nd for nd, _ in marks] == [
            Node(1, 4, 1), Node(2, 2, 1), Node(4, 1, 1),
            Node(1, 3, 2), Node(3, 2, 2)]

    @given(small_bips(7))
    def test_add_remove_inverse(self, b):
        for nd in addable_nodes(b):
            assert remove_node(add_node(b, nd), nd) == b
        for nd in removable_nodes(b):
            assert add_node(remove_node(b, nd), nd) == b


class TestRimHooks:
    def test_empty_component(self):
        assert rim_hooks(EMPTY_BIP) == []

    def test_two_by_two(self):
        hooks = rim_hooks(bip((2, 2), ()))
        data = sorted((h.length, h.hand.row, h.hand.col, h.leg_length)
                      for h in hooks)
        assert data == [(1, 2, 2, 0), (2, 1, 2, 1), (2, 2, 2, 0), (3, 1, 2, 1)]

    def test_length_filter(self):
        b = bip((2, 1, 1, 1, 1), (4,))
        all_hooks = rim_hooks(b)
        fours = rim_hooks(b, length=4)
        assert fours == [h for h in all_hooks if h.length == 4]

    @given(small_bips(7))
    def test_removal_is_valid(self, b):
        for h in rim_hooks(b):
            smaller = remove_rim_hook(b, h)
            assert smaller.size == b.size - h.length

    @given(small_bips(7))
    def test_hand_is_top_rightmost(self, b):
        for h in rim_hooks(b):
            top = min(nd.row for nd in h.nodes)
            assert h.hand.row == top
            assert h.hand.col == max(nd.col for nd in h.nodes if nd.row == top)
            assert h.leg_length == max(nd.row for nd in h.nodes) - top

    @given(small_bips(7))
    def test_hooks_lie_on_rim(self, b):
        cells = diagram(b)
        for h in rim_hooks(b):
            for nd in h.nodes:
                assert Node(nd.row + 1, nd.col + 1, nd.component) not in cells


class TestERestricted:
    def test_empty(self):
        assert is_e_restricted(Partition(()), 2)

    def test_single_large_part(self):
        assert not is_e_restricted(Partition((3,)), 2)

    def test_small_differences(self):
        assert is_e_restricted(Partition((4, 2, 1)), 3)
        assert not is_e_restricted(Partition((4, 1)), 3)


class TestEnumeration:
    def test_partition_counts(self):
        # 1, 1, 2, 3, 5, 7, 11, 15, 22
        assert [len(list(partitions(n))) for n in range(9)] == [
            1, 1, 2, 3, 5, 7, 11, 15, 22]

    def test_bipartition_counts(self):
        assert len(list(bipartitions(3))) == 10
        assert len(set(bipartitions(5))) == len(list(bipartitions(5)))
