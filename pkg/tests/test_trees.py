"""Tests for ternary-tree construction, rotation calculus, transforms,
and enumeration."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqmap.paulis import CNOT, PauliString
from fqmap.trees import (
    MajoranaMapping,
    TernaryTreeMapping,
    balanced_tree,
    bk_tree,
    enumerate_mappings,
    enumerate_shapes,
    full_transform_sequence,
    is_tree_compatible,
    jw_bk_sequence,
    jw_tree,
    rotate_left,
    rotate_middle,
    shape_transform_sequence,
    single_op_avg_weight,
    tree_from_mapping,
)


def random_tree(n, rng):
    shapes = list(enumerate_shapes(n, max_n=max(n, 6)))
    t = shapes[rng.randrange(len(shapes))]
    qperm = list(range(n))
    rng.shuffle(qperm)
    lperm = list(range(2 * n + 1))
    rng.shuffle(lperm)
    return t.relabel_qubits(qperm).relabel_leaves(lperm)


class TestStandardTrees:
    def test_jw_smallest(self):
        t = jw_tree(1)
        assert t.children == ((1, 2, 3),)  # three leaves gamma 0,1,2
        assert bk_tree(1) == t
        assert balanced_tree(1) == t

    def test_jw_three_qubits_last_parent_leaves(self):
        # third qubit holds the last three Majorana leaves
        t = jw_tree(3)
        assert t.children[2] == (3 + 4, 3 + 5, 3 + 6)

    def test_jw_compiled_strings(self):
        m = jw_tree(2).compile()
        assert [p.to_label() for p in m.paulis] == ["XI", "YI", "ZX", "ZY", "ZZ"]

    def test_jw_string_weights_grow_linearly(self):
        m = jw_tree(5).compile()
        for j in range(5):
            # odd Majorana 2j is Z...ZX with weight j+1
            assert m.paulis[2 * j].weight == j + 1
            label = m.paulis[2 * j].to_label()
            assert label == "Z" * j + "X" + "I" * (4 - j)

    def test_bk_five_matches_reference_layout(self):
        t = bk_tree(5)
        assert t.root == 3  # fourth qubit at the root
        assert t.children[1] == (0, 5 + 3, 2)  # qubit 2: [qubit 1, leaf, qubit 3]
        # middle child of the root is the eighth Majorana: a bare Y there
        assert t.compile().paulis[7].to_label() == "IIIYI"

    def test_bk_two_root_has_left_parent(self):
        t = bk_tree(2)
        assert t.children[t.root][0] == 1 - t.root
        assert t.compile().is_valid()

    def test_balanced_five_matches_reference_layout(self):
        t = balanced_tree(5)
        # bottom parent flushed right: right child of the fourth qubit
        assert t.children[3][2] == 4

    def test_balanced_four_all_depth_two(self):
        t = balanced_tree(4)
        assert t.leaf_depths() == [2] * 9
        assert all(p.weight == 2 for p in t.compile().paulis)

    def test_n_zero_rejected(self):
        for builder in (jw_tree, bk_tree, balanced_tree):
            with pytest.raises(ValueError):
                builder(0)

    @pytest.mark.parametrize("n", range(1, 12))
    def test_compiled_trees_are_valid(self, n):
        for builder in (jw_tree, bk_tree, balanced_tree):
            m = builder(n).compile()
            assert m.is_valid()
            assert is_tree_compatible(m)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_single_op_avg(self, n):
        assert single_op_avg_weight(jw_tree(n)) == Fraction(n + 1, 2)

    def test_single_op_avg_balanced(self):
        assert single_op_avg_weight(balanced_tree(4)) == 2
        assert single_op_avg_weight(balanced_tree(1)) == 1


class TestTreeValidation:
    def test_reused_parent_rejected(self):
        with pytest.raises(ValueError):
            TernaryTreeMapping(2, ((1, 1, 2), (3, 4, 5)))

    def test_duplicate_leaf_rejected(self):
        with pytest.raises(ValueError):
            TernaryTreeMapping(1, ((1, 1, 2),))

    def test_tree_compatibility_counterexample(self):
        # a pair anticommuting on two qubits is not tree-compatible
        strings = [
            PauliString.from_label(s)
            for s in ["XX", "ZZ", "XY", "YI", "ZX"]
        ]
        m = MajoranaMapping(2, tuple(strings))
        assert not is_tree_compatible(m)

    def test_reconstruction_round_trip(self):
        rng = random.Random(3)
        for _ in range(25):
            t = random_tree(rng.randint(1, 6), rng)
            assert tree_from_mapping(t.compile()) == t

    def test_reconstruction_rejects_non_tree(self):
        strings = [
            PauliString.from_label(s)
            for s in ["XX", "ZZ", "XY", "YI", "ZX"]
        ]
        assert tree_from_mapping(MajoranaMapping(2, tuple(strings))) is None


class TestRotations:
    def test_rotate_left_requires_left_child(self):
        t = jw_tree(3)
        with pytest.raises(ValueError):
            rotate_left(t, 1, 0)  # qubit 1 is the right child of 0

    def test_rotate_middle_requires_middle_child(self):
        t = jw_tree(3)
        with pytest.raises(ValueError):
            rotate_middle(t, 1, 0)

    def test_left_rotation_matches_conjugation(self):
        rng = random.Random(11)
        checked = 0
        while checked < 40:
            t = random_tree(rng.randint(2, 7), rng)
            sites = [
                (t.children[k][0], k)
                for k in range(t.n)
                if t.children[k][0] < t.n
            ]
            if not sites:
                continue
            j, k = sites[rng.randrange(len(sites))]
            rotated = rotate_left(t, j, k)
            conj = t.compile().conjugated([CNOT(j, k)])
            assert rotated.compile().keys() == conj.keys()
            # left rotations keep the inorder traversals fixed
            assert rotated.inorder_qubits() == t.inorder_qubits()
            assert rotated.inorder_leaves() == t.inorder_leaves()
            checked += 1

    def test_middle_rotation_matches_conjugation(self):
        rng = random.Random(12)
        checked = 0
        while checked < 40:
            t = random_tree(rng.randint(2, 7), rng)
            sites = [
                (t.children[k][1], k)
                for k in range(t.n)
                if t.children[k][1] < t.n
            ]
            if not sites:
                continue
            j, k = sites[rng.randrange(len(sites))]
            rotated = rotate_middle(t, j, k)
            conj = t.compile().conjugated([CNOT(j, k)])
            assert rotated.compile().keys() == conj.keys()
            checked += 1

    def test_rotation_is_cnot_involution(self):
        t = bk_tree(4)
        j, k = 1, 3  # left-child edge in bk(4)
        assert t.children[k][0] == j
        m = t.compile()
        back = m.conjugated([CNOT(j, k), CNOT(j, k)])
        assert back.paulis == m.paulis


class TestTransforms:
    @pytest.mark.parametrize("n", range(1, 17))
    def test_jw_bk_exact(self, n):
        seq = jw_bk_sequence(n)
        assert len(seq) < n
        assert all(g.kind == "CNOT" for g in seq)
        got = bk_tree(n).compile().conjugated(seq)
        assert got.paulis == jw_tree(n).compile().paulis

    def test_shape_transform_identity(self):
        assert shape_transform_sequence(bk_tree(4), bk_tree(4)) == []

    def test_shape_transform_jw_to_balanced(self):
        seq = shape_transform_sequence(jw_tree(5), balanced_tree(5))
        assert len(seq) <= 8
        got = jw_tree(5).compile().conjugated(seq)
        assert sorted(p.weight for p in got.paulis) == [2] * 8 + [3] * 3

    def test_shape_transform_bound_and_shape(self):
        rng = random.Random(5)
        for _ in range(30):
            n = rng.randint(1, 6)
            t1, t2 = random_tree(n, rng), random_tree(n, rng)
            seq = shape_transform_sequence(t1, t2)
            assert len(seq) <= max(0, 2 * n - 2)
            got = t1.compile().conjugated(seq)
            rec = tree_from_mapping(got)
            assert rec is not None
            assert rec.shape_key() == t2.shape_key()

    def test_full_transform_identity(self):
        t = balanced_tree(3)
        assert full_transform_sequence(t, t) == []

    def test_full_transform_qubit_swap_is_three_cnots(self):
        t1 = bk_tree(4)
        t2 = t1.relabel_qubits([0, 2, 1, 3])
        seq = full_transform_sequence(t1, t2)
        assert len(seq) == 3
        assert all(g.kind == "CNOT" for g in seq)
        assert t1.compile().conjugated(seq).paulis == t2.compile().paulis

    def test_full_transform_leaf_swap_single_qubit_only(self):
        t1 = balanced_tree(4)
        lp = list(range(9))
        a, b = t1.children[2][0] - 4, t1.children[2][2] - 4
        lp[a], lp[b] = lp[b], lp[a]
        t2 = t1.relabel_leaves(lp)
        seq = full_transform_sequence(t1, t2)
        assert seq and all(len(g.qubits) == 1 for g in seq)
        got = t1.compile().conjugated(seq)
        assert got.paulis[:8] == t2.compile().paulis[:8]

    def test_full_transform_random_exact(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 5)
            t1, t2 = random_tree(n, rng), random_tree(n, rng)
            seq = full_transform_sequence(t1, t2)
            got = t1.compile().conjugated(seq)
            want = t2.compile()
            assert got.paulis[: 2 * n] == want.paulis[: 2 * n]
            # redundant string: same string, at most a sign
            assert got.paulis[2 * n].key() == want.paulis[2 * n].key()
            assert (got.paulis[2 * n].phase - want.paulis[2 * n].phase) % 2 == 0


def _ordered_structs(m):
    if m == 1:
        return [((), (), ())]
    out = []
    for a in range(m):
        for b in range(m - a):
            c = m - 1 - a - b
            for sa in _ordered_structs(a) if a else [()]:
                for sb in _ordered_structs(b) if b else [()]:
                    for sc in _ordered_structs(c) if c else [()]:
                        out.append((sa, sb, sc))
    return out


def _canon(struct):
    if struct == ():
        return ()
    return tuple(
        sorted((_canon(ch) for ch in struct), key=lambda k: (k == (), k))
    )


class TestEnumeration:
    def test_shape_counts_against_oracle(self):
        for n in range(1, 5):
            oracle = {_canon(s) for s in _ordered_structs(n)}
            shapes = list(enumerate_shapes(n))
            assert len(shapes) == len(oracle)
            assert {t.shape_key() for t in shapes} == oracle

    def test_four_parents_four_shapes(self):
        assert sum(1 for _ in enumerate_shapes(4)) == 4

    def test_single_parent_shape(self):
        assert sum(1 for _ in enumerate_shapes(1)) == 1

    def test_bound_refusal(self):
        with pytest.raises(ValueError):
            list(enumerate_shapes(7))
        with pytest.raises(ValueError):
            next(enumerate_mappings(5))

    def test_mapping_counts(self):
        assert sum(1 for _ in enumerate_mappings(1)) == 6
        ms = list(enumerate_mappings(2))
        assert len(ms) == 120  # one shape, 5! labelings
        assert all(is_tree_compatible(m) for m in ms)

    def test_mappings_pairwise_distinct_sample(self):
        seen = set()
        for m in enumerate_mappings(2):
            seen.add(m.keys())
        # different labelings of one shape permute the same string set
        assert len(seen) == 120


class TestSerialization:
    @pytest.mark.parametrize("builder", [jw_tree, bk_tree, balanced_tree])
    def test_json_round_trip(self, builder, tmp_path):
        t = builder(6)
        path = tmp_path / "tree.json"
        t.save_json(path)
        assert TernaryTreeMapping.load_json(path) == t

    def test_json_obj_round_trip_via_text(self):
        t = bk_tree(5)
        blob = json.dumps(t.to_json_obj())
        assert TernaryTreeMapping.from_json_obj(json.loads(blob)) == t


@given(st.integers(1, 8), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_compile_always_tree_compatible(n, pyrng):
    t = random_tree(n, pyrng)
    m = t.compile()
    assert len(m.paulis) == 2 * n + 1
    assert len(set(m.keys())) == 2 * n + 1
    assert is_tree_compatible(m)
