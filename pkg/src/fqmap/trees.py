"""Ternary-tree Majorana mappings: construction, compilation, rotation
calculus, transform synthesis, and exhaustive enumeration.

A mapping tree has ``n`` parent nodes (one per qubit) and ``2n+1``
leaves.  Parents are indexed by their qubit label 0..n-1.  The three
child slots of a parent are (left, middle, right); traversing an edge
appends X, Y, or Z on that parent's qubit to the leaf's Pauli string.
Child entries are packed ints: values below ``n`` name a parent, values
``n + g`` name the leaf carrying Majorana index ``g`` (0-based, so the
redundant leaf is ``g = 2n``).

The unified inorder traversal used for labeling visits: left subtree,
node, middle subtree, right subtree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .paulis import CNOT, CliffordGate, H, PauliString, S, invert_sequence

__all__ = [
    "TernaryTreeMapping",
    "MajoranaMapping",
    "jw_tree",
    "bk_tree",
    "balanced_tree",
    "is_tree_compatible",
    "tree_from_mapping",
    "rotate_left",
    "rotate_middle",
    "jw_bk_sequence",
    "shape_transform_sequence",
    "full_transform_sequence",
    "enumerate_shapes",
    "enumerate_mappings",
    "single_op_avg_weight",
]


@dataclass(frozen=True, slots=True)
class TernaryTreeMapping:
    """A full ternary tree with qubit-labeled parents and labeled leaves."""

    n: int
    children: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise ValueError("a mapping tree needs at least one qubit")
        if len(self.children) != n:
            raise ValueError("children must list one triple per qubit")
        seen_parent = [0] * n
        seen_leaf = [0] * (2 * n + 1)
        for triple in self.children:
            if len(triple) != 3:
                raise ValueError("each parent has exactly three child slots")
            for v in triple:
                if 0 <= v < n:
                    seen_parent[v] += 1
                elif n <= v <= 3 * n:
                    seen_leaf[v - n] += 1
                else:
                    raise ValueError(f"child code {v} out of range")
        roots = [q for q in range(n) if seen_parent[q] == 0]
        if len(roots) != 1 or any(c > 1 for c in seen_parent):
            raise ValueError("tree must have exactly one root and no re-use")
        if any(c != 1 for c in seen_leaf):
            raise ValueError("leaf labels must be a bijection with 0..2n")
        # reachability from the root rules out detached cycles
        stack = [roots[0]]
        visited = 0
        while stack:
            q = stack.pop()
            visited += 1
            stack.extend(v for v in self.children[q] if v < n)
        if visited != n:
            raise ValueError("tree is not connected")

    # -- structure ---------------------------------------------------------

    @property
    def root(self) -> int:
        referenced = set()
        for triple in self.children:
            referenced.update(v for v in triple if v < self.n)
        (root,) = set(range(self.n)) - referenced
        return root

    def is_leaf_code(self, v: int) -> bool:
        return v >= self.n

    def gamma_of(self, v: int) -> int:
        return v - self.n

    def parent_slot_of(self, q: int) -> tuple[int, int] | None:
        """(parent, slot) holding parent node q, or None for the root."""
        for p, triple in enumerate(self.children):
            for s, v in enumerate(triple):
                if v == q:
                    return p, s
        return None

    def inorder_events(self) -> Iterator[tuple[str, int]]:
        """Yield ("q", qubit) and ("leaf", gamma) in unified inorder."""
        n = self.n
        stack = [(self.root, 0)]
        while stack:
            key, stage = stack.pop()
            if stage == 0:
                stack.append((key, 1))
                c = self.children[key][0]
                if c >= n:
                    yield ("leaf", c - n)
                else:
                    stack.append((c, 0))
            elif stage == 1:
                yield ("q", key)
                stack.append((key, 2))
            elif stage == 2:
                stack.append((key, 3))
                c = self.children[key][1]
                if c >= n:
                    yield ("leaf", c - n)
                else:
                    stack.append((c, 0))
            else:
                c = self.children[key][2]
                if c >= n:
                    yield ("leaf", c - n)
                else:
                    stack.append((c, 0))

    def inorder_qubits(self) -> list[int]:
        return [v for kind, v in self.inorder_events() if kind == "q"]

    def inorder_leaves(self) -> list[int]:
        return [v for kind, v in self.inorder_events() if kind == "leaf"]

    def leaf_depths(self) -> list[int]:
        """Depth (= compiled weight) of each leaf, indexed by gamma."""
        depths = [0] * (2 * self.n + 1)
        stack = [(self.root, 1)]
        while stack:
            q, d = stack.pop()
            for v in self.children[q]:
                if v >= self.n:
                    depths[v - self.n] = d
                else:
                    stack.append((v, d + 1))
        return depths

    def relabel_qubits(self, perm: Sequence[int]) -> "TernaryTreeMapping":
        """Apply qubit relabeling q -> perm[q]."""
        new = [None] * self.n
        for q, triple in enumerate(self.children):
            new[perm[q]] = tuple(
                perm[v] if v < self.n else v for v in triple
            )
        return TernaryTreeMapping(self.n, tuple(new))

    def relabel_leaves(self, perm: Sequence[int]) -> "TernaryTreeMapping":
        """Apply leaf relabeling gamma -> perm[gamma]."""
        n = self.n
        new = tuple(
            tuple(v if v < n else n + perm[v - n] for v in triple)
            for triple in self.children
        )
        return TernaryTreeMapping(n, new)

    def shape_key(self):
        """Canonical form modulo child order and all labels.

        Children sort with parent subtrees first, then leaves; parent
        subtrees compare by their own canonical key.
        """

        def key(v: int):
            if v >= self.n:
                return ()
            kids = sorted(
                (key(c) for c in self.children[v]),
                key=lambda k: (k == (), k),
            )
            return tuple(kids)

        return key(self.root)

    # -- compilation -------------------------------------------------------

    def compile(self) -> "MajoranaMapping":
        """Root-to-leaf paths as Pauli strings, indexed by Majorana label."""
        n = self.n
        paulis: list[PauliString | None] = [None] * (2 * n + 1)
        stack = [(self.root, 0, 0, 0)]  # (qubit, x, z, y_count)
        while stack:
            q, x, z, ny = stack.pop()
            bit = 1 << q
            steps = ((x | bit, z, ny), (x | bit, z | bit, ny + 1),
                     (x, z | bit, ny))
            for slot, (nx, nz, nny) in enumerate(steps):
                v = self.children[q][slot]
                if v >= n:
                    paulis[v - n] = PauliString(n, nx, nz, nny)
                else:
                    stack.append((v, nx, nz, nny))
        return MajoranaMapping(n, tuple(paulis))

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        def node(q: int) -> dict:
            kids = [
                {"leaf": v - self.n} if v >= self.n else node(v)
                for v in self.children[q]
            ]
            return {"qubit": q, "children": kids}

        return node(self.root)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TernaryTreeMapping":
        rows: dict[int, tuple[int, int, int]] = {}

        def walk(node: dict) -> int:
            q = node["qubit"]
            kids = node["children"]
            if len(kids) != 3:
                raise ValueError("each node needs exactly three children")
            row = []
            for kid in kids:
                if "leaf" in kid:
                    row.append(("leaf", kid["leaf"]))
                else:
                    row.append(("q", walk(kid)))
            rows[q] = tuple(row)
            return q

        walk(obj)
        n = len(rows)
        children = []
        for q in range(n):
            if q not in rows:
                raise ValueError(f"qubit labels must cover 0..{n - 1}")
            children.append(
                tuple(v if kind == "q" else n + v for kind, v in rows[q])
            )
        return cls(n, tuple(children))

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=1, sort_keys=True)

    @classmethod
    def load_json(cls, path) -> "TernaryTreeMapping":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))


@dataclass(frozen=True, slots=True)
class MajoranaMapping:
    """An operator-level fermion-to-qubit mapping: one Pauli string per
    Majorana index, with the redundant (2n+1)-th string last."""

    n: int
    paulis: tuple[PauliString, ...]
    includes_redundant: bool = True

    def __post_init__(self) -> None:
        want = 2 * self.n + 1 if self.includes_redundant else 2 * self.n
        if len(self.paulis) != want:
            raise ValueError(
                f"expected {want} strings for n={self.n}, got {len(self.paulis)}"
            )
        if any(p.n != self.n for p in self.paulis):
            raise ValueError("all strings must act on n qubits")

    def is_valid(self) -> bool:
        """Pairwise anticommutation (odd support) of the first 2n strings,
        plus pairwise distinctness."""
        ps = self.paulis
        if len({p.key() for p in ps}) != len(ps):
            return False
        core = ps[: 2 * self.n]
        for i, p in enumerate(core):
            for q in core[i + 1:]:
                if p.anticommute_mask(q).bit_count() % 2 == 0:
                    return False
        return True

    def conjugated(self, gates: Sequence[CliffordGate]) -> "MajoranaMapping":
        return MajoranaMapping(
            self.n,
            tuple(p.conjugate_all(gates) for p in self.paulis),
            self.includes_redundant,
        )

    def keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(p.key() for p in self.paulis)


def is_tree_compatible(m: MajoranaMapping) -> bool:
    """True iff every pair of distinct strings anticommutes on exactly
    one qubit, the defining property of compiled trees."""
    ps = m.paulis
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            if p.anticommute_mask(q).bit_count() != 1:
                return False
    return True


def tree_from_mapping(m: MajoranaMapping) -> TernaryTreeMapping | None:
    """Reconstruct the tree whose compilation gives ``m`` (phases aside),
    or None when ``m`` is not tree-compatible."""
    n = m.n
    if len(m.paulis) != 2 * n + 1 or not is_tree_compatible(m):
        return None
    rows: dict[int, list[int]] = {}

    def build(gammas: list[int], path_mask: int) -> int | None:
        if len(gammas) == 1:
            g = gammas[0]
            p = m.paulis[g]
            if (p.x | p.z) != path_mask:
                return None
            return n + g
        common = (1 << n) - 1
        for g in gammas:
            p = m.paulis[g]
            common &= (p.x | p.z) & ~path_mask
        if common == 0 or common & (common - 1):
            return None
        q = common.bit_length() - 1
        groups: dict[str, list[int]] = {"X": [], "Y": [], "Z": []}
        for g in gammas:
            axis = m.paulis[g].axis(q)
            if axis == "I":
                return None
            groups[axis].append(g)
        row = []
        for axis in "XYZ":
            sub = groups[axis]
            if not sub:
                return None
            child = build(sub, path_mask | (1 << q))
            if child is None:
                return None
            row.append(child)
        rows[q] = row
        return q

    root = build(list(range(2 * n + 1)), 0)
    if root is None or root >= n or len(rows) != n:
        return None
    children = tuple(tuple(rows[q]) for q in range(n))
    try:
        return TernaryTreeMapping(n, children)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# standard trees
# ---------------------------------------------------------------------------


def _assemble(
    kids: dict,
    root,
    n: int,
    qubit_label: dict | None = None,
) -> TernaryTreeMapping:
    """Build a labeled tree from raw structure.

    ``kids`` maps an arbitrary node key to a triple of child keys or None
    for leaf slots.  Parents take inorder qubit labels unless an explicit
    map is given; leaves always take inorder Majorana labels.
    """
    q_of: dict = {} if qubit_label is None else dict(qubit_label)
    leaf_of: dict = {}
    next_q = 0
    next_leaf = 0
    stack = [(root, 0)]
    while stack:
        key, stage = stack.pop()
        if stage == 0:
            stack.append((key, 1))
            c = kids[key][0]
            if c is None:
                leaf_of[(key, 0)] = next_leaf
                next_leaf += 1
            else:
                stack.append((c, 0))
        elif stage == 1:
            if qubit_label is None:
                q_of[key] = next_q
                next_q += 1
            stack.append((key, 2))
        elif stage == 2:
            stack.append((key, 3))
            c = kids[key][1]
            if c is None:
                leaf_of[(key, 1)] = next_leaf
                next_leaf += 1
            else:
                stack.append((c, 0))
        else:
            c = kids[key][2]
            if c is None:
                leaf_of[(key, 2)] = next_leaf
                next_leaf += 1
            else:
                stack.append((c, 0))
    children: list[tuple[int, int, int] | None] = [None] * n
    for key, triple in kids.items():
        row = []
        for s, c in enumerate(triple):
            if c is None:
                row.append(n + leaf_of[(key, s)])
            else:
                row.append(q_of[c])
        children[q_of[key]] = tuple(row)
    return TernaryTreeMapping(n, tuple(children))


def jw_tree(n: int) -> TernaryTreeMapping:
    """Right-spine tree: the Jordan-Wigner mapping."""
    if n < 1:
        raise ValueError("n must be at least 1")
    kids = {
        i: (None, None, i + 1 if i + 1 < n else None) for i in range(n)
    }
    return _assemble(kids, 0, n)


def bk_tree(n: int) -> TernaryTreeMapping:
    """Bravyi-Kitaev tree: the first n preorder nodes of a perfect binary
    tree of height floor(log2 n), made ternary with leaf middle slots."""
    if n < 1:
        raise ValueError("n must be at least 1")
    height = n.bit_length() - 1
    kept: list[int] = []

    def preorder(i: int, depth: int) -> None:
        if len(kept) >= n:
            return
        kept.append(i)
        if depth < height:
            preorder(2 * i, depth + 1)
            preorder(2 * i + 1, depth + 1)

    preorder(1, 0)
    kept_set = set(kept)
    kids = {
        i: (
            2 * i if 2 * i in kept_set else None,
            None,
            2 * i + 1 if 2 * i + 1 in kept_set else None,
        )
        for i in kept
    }
    return _assemble(kids, 1, n)


def balanced_tree(n: int) -> TernaryTreeMapping:
    """Layer-filled ternary tree with the bottom layer flushed right.

    Qubits are labeled top-to-bottom then left-to-right; leaves inorder.
    Neither choice affects weights, but fixing them keeps runs
    reproducible.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    layers: list[list[int]] = [[0]]
    assigned = 1
    while assigned < n:
        prev = layers[-1]
        capacity = 3 * len(prev)
        take = min(capacity, n - assigned)
        start_slot = capacity - take  # flush right
        layer = list(range(assigned, assigned + take))
        layers.append(layer)
        assigned += take
        # remember which global slots this layer occupies
        layers[-1] = [(start_slot + i, node) for i, node in enumerate(layer)]
    # normalize layer 0 representation
    layers[0] = [(0, 0)]
    kids: dict[int, list] = {q: [None, None, None] for q in range(n)}
    for d in range(1, len(layers)):
        prev_nodes = [node for _, node in layers[d - 1]]
        for slot, node in layers[d]:
            parent = prev_nodes[slot // 3]
            kids[parent][slot % 3] = node
    kids = {q: tuple(row) for q, row in kids.items()}
    return _assemble(kids, 0, n, qubit_label={q: q for q in range(n)})


def single_op_avg_weight(t: TernaryTreeMapping) -> Fraction:
    """Mean compiled weight over the first 2n Majorana strings, i.e. the
    average Pauli weight of lone creation/annihilation operators."""
    depths = t.leaf_depths()
    core = depths[: 2 * t.n]
    return Fraction(sum(core), len(core))


# ---------------------------------------------------------------------------
# CNOT rotations
# ---------------------------------------------------------------------------


def _reroute(t: TernaryTreeMapping, new_rows: dict[int, tuple], j: int,
             k: int) -> TernaryTreeMapping:
    rows = list(t.children)
    for q, row in new_rows.items():
        rows[q] = row
    spot = t.parent_slot_of(k)
    if spot is not None:
        p, s = spot
        row = list(rows[p])
        row[s] = j
        rows[p] = tuple(row)
    return TernaryTreeMapping(t.n, tuple(rows))


def rotate_left(t: TernaryTreeMapping, j: int, k: int) -> TernaryTreeMapping:
    """Tree form of conjugation by CNOT(j, k) when node j is the left
    child of node k: j rotates into k's position."""
    if not (0 <= j < t.n) or t.children[k][0] != j:
        raise ValueError(f"node {j} is not the left child of node {k}")
    cj, ck = t.children[j], t.children[k]
    return _reroute(
        t,
        {j: (cj[0], cj[1], k), k: (cj[2], ck[1], ck[2])},
        j,
        k,
    )


def rotate_middle(t: TernaryTreeMapping, j: int, k: int) -> TernaryTreeMapping:
    """Tree form of conjugation by CNOT(j, k) when node j is the middle
    child of node k: j moves to k's right slot, shuffling children."""
    if not (0 <= j < t.n) or t.children[k][1] != j:
        raise ValueError(f"node {j} is not the middle child of node {k}")
    cj, ck = t.children[j], t.children[k]
    rows = list(t.children)
    rows[k] = (ck[0], cj[2], j)
    rows[j] = (cj[1], cj[0], ck[2])
    return TernaryTreeMapping(t.n, tuple(rows))


def _to_spine_gates(
    t: TernaryTreeMapping,
) -> tuple[list[CliffordGate], TernaryTreeMapping]:
    """Rotate every parent onto the right spine; returns (gates, tree).

    Each emitted CNOT(j, k) grows the spine by one node, so at most n-1
    gates are produced.
    """
    gates: list[CliffordGate] = []
    cur = t
    pos = cur.root
    while True:
        left, mid, right = cur.children[pos]
        if left < cur.n:
            cur = rotate_left(cur, left, pos)
            gates.append(CNOT(left, pos))
            pos = left
        elif mid < cur.n:
            cur = rotate_middle(cur, mid, pos)
            gates.append(CNOT(mid, pos))
        elif right < cur.n:
            pos = right
        else:
            break
    return gates, cur


def jw_bk_sequence(n: int) -> list[CliffordGate]:
    """CNOT sequence conjugating the compiled BK mapping into the compiled
    JW mapping exactly, length < n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    gates, _ = _to_spine_gates(bk_tree(n))
    return gates


def shape_transform_sequence(
    t1: TernaryTreeMapping, t2: TernaryTreeMapping
) -> list[CliffordGate]:
    """CNOT sequence carrying compile(t1) onto a mapping with t2's shape
    (labels unconstrained).  Length is at most 2n - 2."""
    if t1.n != t2.n:
        raise ValueError("trees must have the same qubit count")
    if t1.shape_key() == t2.shape_key():
        return []
    g1, spine1 = _to_spine_gates(t1)
    g2, spine2 = _to_spine_gates(t2)
    # Un-rotating toward t2 references t2's qubit labels; rename them to
    # whatever sits at the same spine position after the first leg, or
    # the rotations would act between non-adjacent nodes.
    rho = {
        b: a for a, b in zip(_spine_labels(spine1), _spine_labels(spine2))
    }
    back = [
        CNOT(rho[g.qubits[0]], rho[g.qubits[1]])
        for g in invert_sequence(g2)
    ]
    return g1 + back


# ---------------------------------------------------------------------------
# exact transform (shape + qubit labels + Majorana labels)
# ---------------------------------------------------------------------------

# Single-qubit words realizing each permutation of the (X, Y, Z) child
# axes, signs not included.  Keyed by the image tuple of slots (0, 1, 2).
_AXIS_WORDS: dict[tuple[int, int, int], tuple[str, ...]] = {
    (0, 1, 2): (),
    (1, 0, 2): ("S",),
    (2, 1, 0): ("H",),
    (0, 2, 1): ("S", "H", "S"),
    (1, 2, 0): ("S", "H"),
    (2, 0, 1): ("H", "S"),
}


def _axis_word_gates(q: int, image: tuple[int, int, int]) -> list[CliffordGate]:
    return [CliffordGate(kind, (q,)) for kind in _AXIS_WORDS[image]]


def _sign_flip_generators(
    t: TernaryTreeMapping,
) -> list[tuple[int, list[CliffordGate]]]:
    """(leaf-flip bitmask, gates) pairs for conjugation by Z_q and X_q.

    Z_q = S^2 negates every string with X or Y on q; X_q = H S^2 H
    negates Y or Z.  Both flip an even number of leaves.
    """
    m = t.compile()
    gens = []
    for q in range(t.n):
        vec_z = 0
        vec_x = 0
        for g, p in enumerate(m.paulis):
            axis = p.axis(q)
            if axis in ("X", "Y"):
                vec_z |= 1 << g
            if axis in ("Y", "Z"):
                vec_x |= 1 << g
        gens.append((vec_z, [S(q), S(q)]))
        gens.append((vec_x, [H(q), S(q), S(q), H(q)]))
    return gens


def _solve_flips(
    target: int, gens: list[tuple[int, list[CliffordGate]]]
) -> list[CliffordGate] | None:
    """GF(2)-solve for a gate combination whose sign flips equal target."""
    # Gaussian elimination keyed by highest set bit; basis kept in
    # decreasing top-bit order so one pass reduces any vector.
    basis: list[tuple[int, set[int]]] = []
    for i, (vec, _) in enumerate(gens):
        v, combo = vec, {i}
        for bvec, bcombo in basis:
            if v and (v >> (bvec.bit_length() - 1)) & 1:
                v ^= bvec
                combo = combo ^ bcombo
        if v:
            basis.append((v, combo))
            basis.sort(key=lambda e: -e[0])
    v, picked = target, set()
    for bvec, bcombo in basis:
        if v and (v >> (bvec.bit_length() - 1)) & 1:
            v ^= bvec
            picked = picked ^ bcombo
    if v:
        return None
    gates: list[CliffordGate] = []
    for i in sorted(picked):
        gates.extend(gens[i][1])
    return gates


def _sign_diff(
    cur: MajoranaMapping, target: MajoranaMapping
) -> int | None:
    """Bitmask of indices where cur = -target; None if strings differ."""
    diff = 0
    for g, (p, q) in enumerate(zip(cur.paulis, target.paulis)):
        if p.key() != q.key():
            return None
        d = (p.phase - q.phase) & 3
        if d == 2:
            diff |= 1 << g
        elif d != 0:
            return None
    return diff


def _fix_signs(
    base: MajoranaMapping,
    gates: list[CliffordGate],
    target: MajoranaMapping,
    tree_now: TernaryTreeMapping,
) -> list[CliffordGate] | None:
    """Extend ``gates`` with sign gadgets so conj(base) matches target,
    allowing one residual flip on the redundant string."""
    cur = base.conjugated(gates)
    diff = _sign_diff(cur, target)
    if diff is None:
        return None
    if diff == 0:
        return gates
    gens = _sign_flip_generators(tree_now)
    extra = _solve_flips(diff, gens)
    if extra is None:
        # The product of all 2n+1 strings is a conjugation invariant, so
        # an odd flip pattern is unreachable; park one flip on the
        # redundant string, which never enters an encoded operator.
        extra = _solve_flips(diff ^ (1 << (2 * base.n)), gens)
    if extra is None:
        return None
    return gates + extra


def _qubit_relabel_perm(
    t1: TernaryTreeMapping, t2: TernaryTreeMapping
) -> list[int] | None:
    """Permutation p with t1.relabel_qubits(p) == t2, if one exists."""
    n = t1.n
    perm = [-1] * n
    stack = [(t1.root, t2.root)]
    while stack:
        a, b = stack.pop()
        if perm[a] not in (-1, b):
            return None
        perm[a] = b
        for va, vb in zip(t1.children[a], t2.children[b]):
            pa, pb = va < n, vb < n
            if pa != pb:
                return None
            if pa:
                stack.append((va, vb))
            elif va != vb:
                return None
    return perm


def _swap_gates(a: int, b: int) -> list[CliffordGate]:
    return [CNOT(a, b), CNOT(b, a), CNOT(a, b)]


def _perm_to_swaps(perm: Sequence[int]) -> list[CliffordGate]:
    gates: list[CliffordGate] = []
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        for other in cycle[1:]:
            gates.extend(_swap_gates(cycle[0], other))
    return gates


def _within_node_transform(
    t1: TernaryTreeMapping, t2: TernaryTreeMapping
) -> list[CliffordGate] | None:
    """Single-qubit synthesis when t1 and t2 differ only by permutations
    of each node's leaf children."""
    n = t1.n
    words: list[CliffordGate] = []
    for q in range(n):
        r1, r2 = t1.children[q], t2.children[q]
        leaf_slots = []
        for s in range(3):
            p1, p2 = r1[s] < n, r2[s] < n
            if p1 != p2:
                return None
            if p1:
                if r1[s] != r2[s]:
                    return None
            else:
                leaf_slots.append(s)
        image = list(range(3))
        for s in leaf_slots:
            if r1[s] not in r2:
                return None
            image[s] = r2.index(r1[s])
        if sorted(image) != [0, 1, 2]:
            return None
        words.extend(_axis_word_gates(q, tuple(image)))
    cur = tree_from_mapping(t1.compile().conjugated(words))
    if cur != t2:
        return None
    return _fix_signs(t1.compile(), words, t2.compile(), t2)


def _spine_labels(t: TernaryTreeMapping) -> list[int]:
    labels = [t.root]
    while t.children[labels[-1]][2] < t.n:
        labels.append(t.children[labels[-1]][2])
    return labels


def _spine_slots(t: TernaryTreeMapping, spine: list[int]) -> list[int]:
    """Majorana label at each leaf slot, in spine order
    (l_0, m_0, l_1, m_1, ..., l_last, m_last, r_last)."""
    out = []
    for q in spine:
        out.append(t.gamma_of(t.children[q][0]))
        out.append(t.gamma_of(t.children[q][1]))
    out.append(t.gamma_of(t.children[spine[-1]][2]))
    return out


def _slot_moves(n: int, spine: list[int]):
    """Elementary leaf-slot transpositions of a right-spine tree.

    Returns {(a, b): gates} for the swappable slot position pairs.
    """
    moves: dict[tuple[int, int], list[CliffordGate]] = {}
    for i, q in enumerate(spine):
        moves[(2 * i, 2 * i + 1)] = [S(q)]
        if i + 1 < n:
            nxt = spine[i + 1]
            moves[(2 * i, 2 * i + 2)] = [CNOT(q, nxt), H(q), CNOT(q, nxt)]
    moves[(2 * n - 2, 2 * n)] = [H(spine[-1])]
    return moves


def _route(a: int, b: int, moves, blocked: set[int]) -> list[tuple[int, int]]:
    """BFS path of elementary swaps from slot a to slot b."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for (u, v) in moves:
        adj.setdefault(u, []).append((u, v))
        adj.setdefault(v, []).append((u, v))
    prev: dict[int, tuple[int, int] | None] = {a: None}
    queue = [a]
    while queue:
        u = queue.pop(0)
        if u == b:
            break
        for edge in adj.get(u, []):
            v = edge[0] if edge[1] == u else edge[1]
            if v in prev or v in blocked:
                continue
            prev[v] = edge
            queue.append(v)
    if b not in prev:
        raise RuntimeError("slot graph is connected; routing cannot fail")
    path = []
    u = b
    while prev[u] is not None:
        edge = prev[u]
        path.append(edge)
        u = edge[0] if edge[1] == u else edge[1]
    path.reverse()
    return path


def full_transform_sequence(
    t1: TernaryTreeMapping, t2: TernaryTreeMapping
) -> list[CliffordGate]:
    """Clifford sequence conjugating compile(t1) onto compile(t2): shape,
    qubit labels, and Majorana labels all match exactly.

    Signs are exact on the 2n encoding strings; the redundant string may
    come out negated when the invariant product of all strings differs
    between the two trees (conjugation cannot change that product).
    """
    if t1.n != t2.n:
        raise ValueError("trees must have the same qubit count")
    if t1 == t2:
        return []
    n = t1.n
    perm = _qubit_relabel_perm(t1, t2)
    if perm is not None:
        return _perm_to_swaps(perm)
    within = _within_node_transform(t1, t2)
    if within is not None:
        return within

    base = t1.compile()
    g2, spine2 = _to_spine_gates(t2)
    target_spine = t2.compile().conjugated(g2)

    gates, cur_tree = _to_spine_gates(t1)
    labels1 = _spine_labels(cur_tree)
    labels2 = _spine_labels(spine2)
    relabel = [0] * n
    for a, b in zip(labels1, labels2):
        relabel[a] = b
    gates = gates + _perm_to_swaps(relabel)
    cur_tree = cur_tree.relabel_qubits(relabel)

    spine = _spine_labels(cur_tree)
    assert spine == labels2
    moves = _slot_moves(n, spine)
    slots = _spine_slots(cur_tree, spine)
    want = _spine_slots(spine2, labels2)
    # fill order keeps finalized pendant slots out of later routes
    order = []
    for i in range(n - 1):
        order += [2 * i + 1, 2 * i]
    order += [2 * n - 1, 2 * n, 2 * n - 2]
    done: set[int] = set()
    for goal in order:
        src = slots.index(want[goal])
        for edge in _route(src, goal, moves, done):
            u, v = edge
            gates.extend(moves[edge])
            slots[u], slots[v] = slots[v], slots[u]
        done.add(goal)
    assert slots == want

    jw_shaped = tree_from_mapping(base.conjugated(gates))
    assert jw_shaped is not None
    fixed = _fix_signs(base, gates, target_spine, jw_shaped)
    assert fixed is not None, "even flip patterns are always solvable here"
    return fixed + invert_sequence(g2)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _child_sort_key(k):
    return (k == (), k)


def _shape_structs(m: int, memo: dict) -> tuple:
    """Canonical shape structures with m parents: nested sorted tuples,
    parents before leaves at every node, () meaning a leaf."""
    if m in memo:
        return memo[m]
    if m == 1:
        memo[1] = (((), (), ()),)
        return memo[1]
    out = set()
    for a in range(m - 1, -1, -1):
        for b in range(min(a, m - 1 - a), -1, -1):
            c = m - 1 - a - b
            if c > b:
                continue
            opts_a = _shape_structs(a, memo) if a else ((),)
            opts_b = _shape_structs(b, memo) if b else ((),)
            opts_c = _shape_structs(c, memo) if c else ((),)
            for sa in opts_a:
                for sb in opts_b:
                    for sc in opts_c:
                        kids = tuple(
                            sorted((sa, sb, sc), key=_child_sort_key)
                        )
                        out.add(kids)
    memo[m] = tuple(sorted(out))
    return memo[m]


def _tree_from_struct(struct, n: int) -> TernaryTreeMapping:
    kids: dict[int, tuple] = {}
    counter = itertools.count()

    def walk(node) -> int:
        key = next(counter)
        row = []
        for child in node:
            row.append(None if child == () else walk(child))
        kids[key] = tuple(row)
        return key

    walk(struct)
    return _assemble(kids, 0, n)


def enumerate_shapes(n: int, max_n: int = 6) -> Iterator[TernaryTreeMapping]:
    """Each child-order-equivalence class of full ternary trees on n
    parents, exactly once, in canonical form with inorder labels."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_n:
        raise ValueError(
            f"shape enumeration for n={n} exceeds the bound {max_n}; "
            "raise max_n explicitly to force it"
        )
    for struct in _shape_structs(n, {}):
        yield _tree_from_struct(struct, n)


def enumerate_mappings(n: int, max_n: int = 4) -> Iterator[MajoranaMapping]:
    """Every (shape, leaf labeling) pair, compiled.  The count is
    (number of shapes) * (2n+1)!; n=4 yields 4 * 9! mappings."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_n:
        raise ValueError(
            f"mapping enumeration for n={n} exceeds the bound {max_n} "
            f"({2 * n + 1}! leaf labelings per shape); raise max_n to force"
        )
    width = 2 * n + 1
    for shape in enumerate_shapes(n, max_n=max(n, 6)):
        slot_strings = shape.compile().paulis
        for perm in itertools.permutations(range(width)):
            paulis: list[PauliString | None] = [None] * width
            for slot, gamma in enumerate(perm):
                paulis[gamma] = slot_strings[slot]
            yield MajoranaMapping(n, tuple(paulis))
