"""Built-in verification suites behind the ``verify`` CLI command.

Each suite returns a :class:`SuiteResult`; a fresh build passes all of
them.  The dense-matrix helpers here are deliberately independent of the
bit-mask algebra they check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .fermions import (
    build_hopping_2d,
    build_hubbard_2d,
    encode,
)
from .paulis import CNOT, CliffordGate, H, PauliString, S
from .trees import (
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
    tree_from_mapping,
)

__all__ = [
    "SuiteResult",
    "TWO_QUBIT_UNIT_TABLE",
    "TWO_QUBIT_UNIT_COLUMNS",
    "run_all_suites",
]

# Conjugation action of the six CNOT-based units on two-qubit Paulis,
# signs omitted; qubit order is (i, j) and the single-qubit member of a
# composite acts first.  Conjugation is injective, so every column must
# be a permutation of the 16 entries; in particular XI under
# CNOT(j,i)S(i) is YZ (the ZY slot in that column belongs to XX).
TWO_QUBIT_UNIT_TABLE: dict[str, tuple[str, ...]] = {
    "II": ("II", "II", "II", "II", "II", "II"),
    "IX": ("IX", "XX", "IX", "XX", "IX", "XX"),
    "IY": ("ZY", "XY", "ZY", "XY", "ZY", "XY"),
    "IZ": ("ZZ", "IZ", "ZZ", "IZ", "ZZ", "IZ"),
    "XI": ("XX", "XI", "ZI", "ZZ", "YX", "YZ"),
    "XX": ("XI", "IX", "ZX", "YY", "YI", "ZY"),
    "XY": ("YZ", "IY", "IY", "YX", "XZ", "ZX"),
    "XZ": ("YY", "XZ", "IZ", "ZI", "XY", "YI"),
    "YI": ("YX", "YZ", "YX", "YZ", "XX", "XI"),
    "YX": ("YI", "ZY", "YI", "ZY", "XI", "IX"),
    "YY": ("XZ", "ZX", "XZ", "ZX", "YZ", "IY"),
    "YZ": ("XY", "YI", "XY", "YI", "YY", "XZ"),
    "ZI": ("ZI", "ZZ", "XX", "XI", "ZI", "ZZ"),
    "ZX": ("ZX", "YY", "XI", "IX", "ZX", "YY"),
    "ZY": ("IY", "YX", "YZ", "IY", "IY", "YX"),
    "ZZ": ("IZ", "ZI", "YY", "XZ", "IZ", "ZI"),
}

TWO_QUBIT_UNIT_COLUMNS: tuple[tuple[str, tuple[CliffordGate, ...]], ...] = (
    ("CNOT(i,j)", (CNOT(0, 1),)),
    ("CNOT(j,i)", (CNOT(1, 0),)),
    ("CNOT(i,j)H(i)", (H(0), CNOT(0, 1))),
    ("CNOT(j,i)H(i)", (H(0), CNOT(1, 0))),
    ("CNOT(i,j)S(i)", (S(0), CNOT(0, 1))),
    ("CNOT(j,i)S(i)", (S(0), CNOT(1, 0))),
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failed: int = 0
    notes: list[str] = field(default_factory=list)

    def record(self, ok: bool, note: str = "") -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if note and len(self.notes) < 16:
                self.notes.append(note)

    @property
    def passed(self) -> bool:
        return self.failed == 0


# ---------------------------------------------------------------------------
# dense 4x4 oracle
# ---------------------------------------------------------------------------

_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
}
_1Q["SDG"] = _1Q["S"].conj().T


def _dense_pauli(p: PauliString) -> np.ndarray:
    coeff, herm = p.sign_split()
    m = np.eye(1, dtype=complex)
    for q in range(p.n):
        m = np.kron(m, _1Q[herm.axis(q)])
    return coeff * m


def _dense_gate(g: CliffordGate, n: int) -> np.ndarray:
    if g.kind != "CNOT":
        m = np.eye(1, dtype=complex)
        for q in range(n):
            m = np.kron(m, _1Q[g.kind] if q == g.qubits[0] else _1Q["I"])
        return m
    c, t = g.qubits
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    p1 = np.array([[0, 0], [0, 1]], dtype=complex)
    a = np.eye(1, dtype=complex)
    b = np.eye(1, dtype=complex)
    for q in range(n):
        a = np.kron(a, p0 if q == c else _1Q["I"])
        b = np.kron(b, p1 if q == c else (_1Q["X"] if q == t else _1Q["I"]))
    return a + b


def _dense_conjugate(p: PauliString, gates) -> np.ndarray:
    u = np.eye(2**p.n, dtype=complex)
    for g in gates:
        u = _dense_gate(g, p.n) @ u
    return u @ _dense_pauli(p) @ u.conj().T


def _plain_label(p: PauliString) -> str:
    return "".join(p.axis(q) for q in range(p.n))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def table_suite() -> SuiteResult:
    """All 96 table entries vs brute-force matrix conjugation, and the
    fast conjugation path vs the matrix oracle with exact phases."""
    res = SuiteResult("two-qubit unit table (96 entries)")
    for row, entries in TWO_QUBIT_UNIT_TABLE.items():
        p = PauliString.from_label(row)
        for (colname, gates), want in zip(TWO_QUBIT_UNIT_COLUMNS, entries):
            dense = _dense_conjugate(p, gates)
            fast = p.conjugate_all(gates)
            ok = np.allclose(_dense_pauli(fast), dense, atol=1e-12)
            label_ok = _plain_label(fast) == want
            sign = fast.sign_split()[0]
            res.record(
                ok and label_ok and sign in (1, -1),
                f"{row} under {colname}: table {want}, computed "
                f"{_plain_label(fast)}",
            )
    return res


def _encoded_majorana_ops(m: MajoranaMapping):
    """Phi(a_k) as {key: coeff} dicts plus the adjoints."""
    ann = []
    for k in range(m.n):
        p, q = m.paulis[2 * k], m.paulis[2 * k + 1]
        ann.append(((p, 0.5), (q, 0.5j)))
    return ann


def _op_product(a, b) -> dict:
    out: dict[tuple[int, int], complex] = {}
    for p, cp in a:
        for q, cq in b:
            r = p * q
            sign, herm = r.sign_split()
            key = herm.key()
            out[key] = out.get(key, 0.0) + sign * cp * cq
    return out


def _dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0) + v
    return out


def car_suite(n_max: int = 8, tol: float = 1e-12) -> SuiteResult:
    """Canonical anticommutation relations of encoded ladder operators,
    checked symbolically for the three standard trees."""
    res = SuiteResult(f"canonical anticommutation (n <= {n_max})")
    builders = {"jw": jw_tree, "bk": bk_tree, "balanced": balanced_tree}
    for name, builder in builders.items():
        for n in range(1, n_max + 1):
            m = builder(n).compile()
            ann = _encoded_majorana_ops(m)

            def adj(op):
                return tuple(
                    (p.adjoint(), complex(c).conjugate()) for p, c in op
                )

            for i in range(n):
                for j in range(n):
                    anti = _dict_add(
                        _op_product(ann[i], ann[j]),
                        _op_product(ann[j], ann[i]),
                    )
                    worst = max(abs(v) for v in anti.values())
                    res.record(
                        worst <= tol,
                        f"{name} n={n}: {{a_{i}, a_{j}}} != 0",
                    )
                    mixed = _dict_add(
                        _op_product(adj(ann[i]), ann[j]),
                        _op_product(ann[j], adj(ann[i])),
                    )
                    target = 1.0 if i == j else 0.0
                    ident = mixed.get((0, 0), 0.0)
                    rest = max(
                        (abs(v) for k, v in mixed.items() if k != (0, 0)),
                        default=0.0,
                    )
                    res.record(
                        abs(ident - target) <= tol and rest <= tol,
                        f"{name} n={n}: {{a_{i}^+, a_{j}}} != "
                        f"{target}*I",
                    )
    return res


def jw_bk_suite(n_max: int = 16) -> SuiteResult:
    """The CNOT-only JW<->BK transform: length < n and exact string
    equality, Majorana index by Majorana index, phases included."""
    res = SuiteResult(f"JW<->BK transforms (n = 2..{n_max})")
    for n in range(2, n_max + 1):
        seq = jw_bk_sequence(n)
        got = bk_tree(n).compile().conjugated(seq)
        want = jw_tree(n).compile()
        res.record(len(seq) < n, f"n={n}: sequence length {len(seq)} >= n")
        res.record(
            got.paulis == want.paulis, f"n={n}: transformed strings differ"
        )
        res.record(
            all(g.kind == "CNOT" for g in seq), f"n={n}: non-CNOT gate"
        )
    return res


def random_tree(n: int, rng: random.Random) -> TernaryTreeMapping:
    shapes = list(enumerate_shapes(n, max_n=max(n, 6)))
    t = shapes[rng.randrange(len(shapes))]
    qperm = list(range(n))
    rng.shuffle(qperm)
    lperm = list(range(2 * n + 1))
    rng.shuffle(lperm)
    return t.relabel_qubits(qperm).relabel_leaves(lperm)


def rotation_suite(
    samples: int = 500, seed: int = 20240901, n_max: int = 8
) -> SuiteResult:
    """Randomized check of both rotation rules: the rotated tree
    compiles to the CNOT-conjugated strings (phase-stripped, label by
    label), and left rotations preserve the inorder traversals."""
    res = SuiteResult(f"tree rotations ({samples} random instances)")
    rng = random.Random(seed)
    done = 0
    while done < samples:
        n = rng.randint(2, n_max)
        t = random_tree(n, rng)
        left_sites = [
            (t.children[k][0], k)
            for k in range(n)
            if t.children[k][0] < n
        ]
        mid_sites = [
            (t.children[k][1], k)
            for k in range(n)
            if t.children[k][1] < n
        ]
        kind = rng.choice(
            (["left"] if left_sites else []) + (["mid"] if mid_sites else [])
        )
        if kind == "left":
            j, k = left_sites[rng.randrange(len(left_sites))]
            rotated = rotate_left(t, j, k)
        else:
            j, k = mid_sites[rng.randrange(len(mid_sites))]
            rotated = rotate_middle(t, j, k)
        conj = t.compile().conjugated([CNOT(j, k)])
        res.record(
            rotated.compile().keys() == conj.keys(),
            f"{kind} rotation ({j},{k}) of n={n} tree: compile mismatch",
        )
        back = conj.conjugated([CNOT(j, k)])
        res.record(
            back.paulis == t.compile().paulis,
            f"{kind} rotation ({j},{k}): CNOT is not an involution",
        )
        if kind == "left":
            res.record(
                rotated.inorder_qubits() == t.inorder_qubits()
                and rotated.inorder_leaves() == t.inorder_leaves(),
                f"left rotation ({j},{k}): inorder changed",
            )
        done += 1
    return res


def shape_transform_suite(
    trials: int = 60, seed: int = 7, n_max: int = 6
) -> SuiteResult:
    res = SuiteResult(f"shape transforms ({trials} random pairs)")
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(1, n_max)
        t1, t2 = random_tree(n, rng), random_tree(n, rng)
        seq = shape_transform_sequence(t1, t2)
        res.record(
            len(seq) <= max(0, 2 * n - 2), f"n={n}: length {len(seq)}"
        )
        res.record(all(g.kind == "CNOT" for g in seq), "non-CNOT gate")
        got = t1.compile().conjugated(seq)
        tree = tree_from_mapping(got)
        res.record(
            tree is not None and tree.shape_key() == t2.shape_key(),
            f"n={n}: wrong shape",
        )
    return res


def full_transform_suite(
    trials: int = 40, seed: int = 11, n_max: int = 5
) -> SuiteResult:
    """Exact mapping-to-mapping transforms.  Signs must match on every
    encoding string; the redundant string may differ by -1 (the ordered
    product of all strings is a conjugation invariant)."""
    res = SuiteResult(f"full transforms ({trials} random pairs)")
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(1, n_max)
        t1, t2 = random_tree(n, rng), random_tree(n, rng)
        seq = full_transform_sequence(t1, t2)
        got = t1.compile().conjugated(seq)
        want = t2.compile()
        res.record(
            got.paulis[: 2 * n] == want.paulis[: 2 * n],
            f"n={n}: encoding strings differ",
        )
        d = (got.paulis[2 * n].phase - want.paulis[2 * n].phase) % 4
        res.record(
            got.paulis[2 * n].key() == want.paulis[2 * n].key()
            and d in (0, 2),
            f"n={n}: redundant string differs beyond sign",
        )
    return res


def _ordered_shape_structs(m: int):
    if m == 1:
        return [((), (), ())]
    out = []
    for a in range(m):
        for b in range(m - a):
            c = m - 1 - a - b
            for sa in _ordered_shape_structs(a) if a else [()]:
                for sb in _ordered_shape_structs(b) if b else [()]:
                    for sc in _ordered_shape_structs(c) if c else [()]:
                        out.append((sa, sb, sc))
    return out


def _canon(struct):
    if struct == ():
        return ()
    kids = sorted(
        (_canon(child) for child in struct), key=lambda k: (k == (), k)
    )
    return tuple(kids)


def enumeration_suite() -> SuiteResult:
    """Shape enumeration against a generate-everything oracle, plus the
    published n=4 shape count and small mapping counts."""
    res = SuiteResult("shape/mapping enumeration")
    for n in range(1, 5):
        oracle = {_canon(s) for s in _ordered_shape_structs(n)}
        shapes = list(enumerate_shapes(n))
        res.record(
            len(shapes) == len(oracle),
            f"n={n}: {len(shapes)} shapes vs oracle {len(oracle)}",
        )
        res.record(
            {t.shape_key() for t in shapes} == oracle,
            f"n={n}: canonical keys differ from oracle",
        )
    res.record(
        sum(1 for _ in enumerate_shapes(4)) == 4, "n=4 shape count != 4"
    )
    for n, want in ((1, 6), (2, 120)):
        ms = list(enumerate_mappings(n))
        res.record(len(ms) == want, f"n={n}: {len(ms)} mappings")
        res.record(
            all(is_tree_compatible(m) for m in ms),
            f"n={n}: enumerated mapping not tree-compatible",
        )
    return res


def term_count_suite() -> SuiteResult:
    """Published encoded term counts for the lattice models."""
    res = SuiteResult("published term counts")
    cases = (
        (build_hopping_2d(6), 36, 120),
        (build_hopping_2d(8), 64, 224),
        (build_hubbard_2d(6), 72, 349),
    )
    for hf, n, want in cases:
        hq = encode(hf, jw_tree(n).compile())
        res.record(len(hq) == want, f"{n} qubits: {len(hq)} != {want}")
    return res


def run_all_suites(quick: bool = False) -> list[SuiteResult]:
    rotation_samples = 100 if quick else 500
    return [
        table_suite(),
        car_suite(4 if quick else 8),
        jw_bk_suite(16),
        rotation_suite(rotation_samples),
        shape_transform_suite(20 if quick else 60),
        full_transform_suite(15 if quick else 40),
        enumeration_suite(),
        term_count_suite(),
    ]
