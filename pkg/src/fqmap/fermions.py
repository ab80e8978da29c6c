"""Fermionic Hamiltonians, model builders, and encoding into Pauli form.

Second-quantized operators are term lists; each term is a coefficient
with an ordered product of creation/annihilation operators.  Encoding
substitutes mode k's operators with Majorana strings from a mapping,

    a_k      -> (P_{2k} + i P_{2k+1}) / 2
    a_k^dag  -> (P_{2k} - i P_{2k+1}) / 2

(0-based Majorana indices), expands, and combines like Pauli strings.
The 1/2 normalization makes the canonical anticommutation relations come
out with exactly delta_ij * I; weight metrics never see it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .paulis import CliffordGate, PauliString
from .trees import MajoranaMapping

__all__ = [
    "DEFAULT_TOL",
    "FermionicTerm",
    "FermionicHamiltonian",
    "QubitHamiltonian",
    "build_hopping_1d",
    "build_hopping_2d",
    "build_hubbard_2d",
    "build_single_ops",
    "build_exchange",
    "load_fermionic_json",
    "save_fermionic_json",
    "majorana_expansion",
    "encode",
    "avg_weight",
    "total_weight",
    "snake_index",
]

DEFAULT_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class FermionicTerm:
    """coeff * product of ladder operators, in the order written."""

    coeff: complex
    ops: tuple[tuple[bool, int], ...]  # (is_creation, mode)

    def dagger(self) -> "FermionicTerm":
        return FermionicTerm(
            complex(self.coeff).conjugate(),
            tuple((not c, m) for c, m in reversed(self.ops)),
        )


@dataclass(frozen=True, slots=True)
class FermionicHamiltonian:
    n_modes: int
    terms: tuple[FermionicTerm, ...]
    hermitian: bool = True

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("need at least one mode")
        for t in self.terms:
            for _, m in t.ops:
                if not 0 <= m < self.n_modes:
                    raise ValueError(
                        f"mode index {m} out of range for {self.n_modes} modes"
                    )

    def hermitian_defect(self) -> float:
        """Largest coefficient violation of H == H^dagger, computed on
        the Majorana expansion (so operator-equal term lists pass even
        when written differently)."""
        exp = majorana_expansion(self, tol=0.0)
        worst = 0.0
        for subset, c in exp.items():
            m = len(subset)
            sign = -1 if (m * (m - 1) // 2) % 2 else 1
            worst = max(worst, abs(c - sign * c.conjugate()))
        return worst

    def to_json_obj(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "hermitian": self.hermitian,
            "terms": [
                {
                    "coeff": [t.coeff.real, t.coeff.imag],
                    "ops": [["c" if c else "a", m] for c, m in t.ops],
                }
                for t in self.terms
            ],
        }


def save_fermionic_json(hf: FermionicHamiltonian, path) -> None:
    with open(path, "w") as fh:
        json.dump(hf.to_json_obj(), fh, indent=1)
        fh.write("\n")


def load_fermionic_json(path, tol: float = DEFAULT_TOL) -> FermionicHamiltonian:
    """Load and validate a fermionic term-list file.

    A ``hermitian: true`` flag is verified against the expansion; a term
    whose conjugate partner is missing fails here.
    """
    with open(path) as fh:
        obj = json.load(fh)
    return fermionic_from_json_obj(obj, tol=tol)


def fermionic_from_json_obj(
    obj: dict, tol: float = DEFAULT_TOL
) -> FermionicHamiltonian:
    try:
        n_modes = obj["n_modes"]
        hermitian = obj["hermitian"]
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"missing field in fermionic file: {exc}") from exc
    if not isinstance(n_modes, int) or n_modes < 1:
        raise ValueError("n_modes must be a positive integer")
    if not isinstance(hermitian, bool) or not isinstance(raw_terms, list):
        raise ValueError("bad types for 'hermitian' or 'terms'")
    terms = []
    for entry in raw_terms:
        try:
            re, im = entry["coeff"]
            ops = entry["ops"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed term entry: {entry!r}") from exc
        parsed = []
        for op in ops:
            kind, mode = op
            if kind not in ("c", "a") or not isinstance(mode, int):
                raise ValueError(f"malformed ladder op: {op!r}")
            parsed.append((kind == "c", mode))
        terms.append(FermionicTerm(complex(re, im), tuple(parsed)))
    hf = FermionicHamiltonian(n_modes, tuple(terms), hermitian)
    if hermitian:
        defect = hf.hermitian_defect()
        if defect > tol:
            raise ValueError(
                "file claims hermitian but the conjugate of some term is "
                f"missing or wrong (defect {defect:.3g})"
            )
    return hf


# ---------------------------------------------------------------------------
# model builders
# ---------------------------------------------------------------------------


def _hopping_pair(i: int, j: int, coeff: float = 1.0) -> list[FermionicTerm]:
    return [
        FermionicTerm(complex(coeff), ((True, i), (False, j))),
        FermionicTerm(complex(coeff), ((True, j), (False, i))),
    ]


def build_hopping_1d(n_sites: int, hop_range: int) -> FermionicHamiltonian:
    """Open chain with unit hopping between all pairs within the range."""
    if not 1 <= hop_range < n_sites:
        raise ValueError(
            f"hop range must satisfy 1 <= r < {n_sites}, got {hop_range}"
        )
    terms: list[FermionicTerm] = []
    for i in range(n_sites):
        for j in range(i + 1, min(i + hop_range, n_sites - 1) + 1):
            terms.extend(_hopping_pair(i, j))
    return FermionicHamiltonian(n_sites, tuple(terms))


def snake_index(row: int, col: int, side: int) -> int:
    """Boustrophedon site enumeration of a square lattice."""
    return row * side + (col if row % 2 == 0 else side - 1 - col)


def _grid_edges(side: int) -> Iterator[tuple[int, int]]:
    for r in range(side):
        for c in range(side):
            if c + 1 < side:
                yield snake_index(r, c, side), snake_index(r, c + 1, side)
            if r + 1 < side:
                yield snake_index(r, c, side), snake_index(r + 1, c, side)


def build_hopping_2d(side: int) -> FermionicHamiltonian:
    """Nearest-neighbor hopping on a side x side grid, snake-enumerated."""
    if side < 2:
        raise ValueError("grid side must be at least 2")
    terms: list[FermionicTerm] = []
    for a, b in _grid_edges(side):
        terms.extend(_hopping_pair(a, b))
    return FermionicHamiltonian(side * side, tuple(terms))


def build_hubbard_2d(
    side: int, t: float = 1.0, u: float = 1.0
) -> FermionicHamiltonian:
    """Spinful Hubbard model: two spin copies of the grid hopping plus
    on-site up/down density products.  Modes interleave as 2*site+spin."""
    if side < 2:
        raise ValueError("grid side must be at least 2")
    terms: list[FermionicTerm] = []
    for a, b in _grid_edges(side):
        for spin in (0, 1):
            terms.extend(_hopping_pair(2 * a + spin, 2 * b + spin, t))
    for site in range(side * side):
        up, dn = 2 * site, 2 * site + 1
        terms.append(
            FermionicTerm(
                complex(u),
                ((True, up), (False, up), (True, dn), (False, dn)),
            )
        )
    return FermionicHamiltonian(2 * side * side, tuple(terms))


def build_single_ops(n_modes: int) -> FermionicHamiltonian:
    """Sum of lone annihilation operators; the average weight of its
    encoding is the classic per-operator cost metric."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    terms = tuple(
        FermionicTerm(1.0 + 0.0j, ((False, i),)) for i in range(n_modes)
    )
    return FermionicHamiltonian(n_modes, terms, hermitian=False)


def build_exchange() -> FermionicHamiltonian:
    """The four-mode exchange interaction a0+ a1+ a2 a3 + h.c."""
    t = FermionicTerm(
        1.0 + 0.0j, ((True, 0), (True, 1), (False, 2), (False, 3))
    )
    return FermionicHamiltonian(4, (t, t.dagger()))


# ---------------------------------------------------------------------------
# Majorana expansion and encoding
# ---------------------------------------------------------------------------


def _mul_gamma(subset: tuple[int, ...], g: int) -> tuple[tuple[int, ...], int]:
    """Right-multiply an ascending Majorana product by gamma_g."""
    greater = sum(1 for s in subset if s > g)
    sign = -1 if greater % 2 else 1
    if g in subset:
        return tuple(s for s in subset if s != g), sign
    return tuple(sorted(subset + (g,))), sign


def majorana_expansion(
    hf: FermionicHamiltonian, tol: float = DEFAULT_TOL
) -> dict[tuple[int, ...], complex]:
    """Expand into sum_S c_S * gamma_S with ascending index subsets.

    Mapping-independent: products of distinct gammas over the first 2n
    indices are linearly independent, so the surviving subsets fix the
    encoded term count for every valid mapping.
    """
    total: dict[tuple[int, ...], complex] = {}
    for term in hf.terms:
        acc: dict[tuple[int, ...], complex] = {(): complex(term.coeff)}
        for is_creation, mode in term.ops:
            g0, g1 = 2 * mode, 2 * mode + 1
            imag = -0.5j if is_creation else 0.5j
            nxt: dict[tuple[int, ...], complex] = {}
            for subset, c in acc.items():
                for g, cc in ((g0, 0.5 * c), (g1, imag * c)):
                    s2, sign = _mul_gamma(subset, g)
                    nxt[s2] = nxt.get(s2, 0.0) + sign * cc
            acc = nxt
        for subset, c in acc.items():
            total[subset] = total.get(subset, 0.0) + c
    return {s: c for s, c in total.items() if abs(c) > tol}


class QubitHamiltonian:
    """A Pauli-basis operator: phase-canonical string -> coefficient.

    Keys are phase-stripped (the Hermitian I/X/Y/Z tensor); any phase is
    folded into the coefficient.  Coefficients below the combine
    tolerance are never stored.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(
        self, n_qubits: int, terms: dict[tuple[int, int], complex]
    ) -> None:
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        self.n_qubits = n_qubits
        self._terms = dict(terms)

    @classmethod
    def from_pairs(
        cls,
        n_qubits: int,
        pairs: Iterable[tuple[PauliString, complex]],
        tol: float = DEFAULT_TOL,
    ) -> "QubitHamiltonian":
        acc: dict[tuple[int, int], complex] = {}
        for p, c in pairs:
            if p.n != n_qubits:
                raise ValueError("string length does not match n_qubits")
            sign, herm = p.sign_split()
            key = herm.key()
            acc[key] = acc.get(key, 0.0) + sign * c
        return cls(
            n_qubits, {k: v for k, v in acc.items() if abs(v) > tol}
        )

    # -- content -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QubitHamiltonian)
            and self.n_qubits == other.n_qubits
            and self._terms == other._terms
        )

    def items(self) -> list[tuple[PauliString, complex]]:
        """(string, coefficient) pairs in a fixed sorted order."""
        out = []
        for (x, z) in sorted(self._terms):
            p = PauliString(self.n_qubits, x, z, (x & z).bit_count())
            out.append((p, self._terms[(x, z)]))
        return out

    def coefficient(self, p: PauliString) -> complex:
        sign, herm = p.sign_split()
        return self._terms.get(herm.key(), 0.0) / sign

    def max_imag(self) -> float:
        return max((abs(c.imag) for c in self._terms.values()), default=0.0)

    def drop_identity(self) -> "QubitHamiltonian":
        terms = {k: v for k, v in self._terms.items() if k != (0, 0)}
        return QubitHamiltonian(self.n_qubits, terms)

    # -- weights -----------------------------------------------------------

    def total_weight(self) -> int:
        if not self._terms:
            raise ValueError("weight of an empty Hamiltonian is undefined")
        return sum((x | z).bit_count() for (x, z) in self._terms)

    def avg_weight(self) -> Fraction:
        return Fraction(self.total_weight(), len(self._terms))

    # -- transformation ----------------------------------------------------

    def conjugated(
        self, gates: Sequence[CliffordGate], tol: float = DEFAULT_TOL
    ) -> "QubitHamiltonian":
        """Exact coefficient-tracking conjugation by a gate sequence."""
        pairs = []
        for (x, z), c in self._terms.items():
            p = PauliString(self.n_qubits, x, z, (x & z).bit_count())
            pairs.append((p.conjugate_all(gates), c))
        return QubitHamiltonian.from_pairs(self.n_qubits, pairs, tol)

    def bit_arrays(self):
        """(x_words, z_words) uint64 arrays of shape (terms, words), rows
        in the same sorted order as :meth:`items`."""
        words = max(1, -(-self.n_qubits // 64))
        keys = sorted(self._terms)
        xw = np.zeros((len(keys), words), dtype=np.uint64)
        zw = np.zeros((len(keys), words), dtype=np.uint64)
        mask = (1 << 64) - 1
        for row, (x, z) in enumerate(keys):
            for w in range(words):
                xw[row, w] = (x >> (64 * w)) & mask
                zw[row, w] = (z >> (64 * w)) & mask
        return xw, zw

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        terms = []
        for p, c in self.items():
            terms.append(
                {"coeff": [c.real, c.imag], "pauli": p.to_label()}
            )
        return {"n_qubits": self.n_qubits, "terms": terms}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QubitHamiltonian":
        try:
            n = obj["n_qubits"]
            raw = obj["terms"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"missing field in qubit file: {exc}") from exc
        pairs = []
        for entry in raw:
            re, im = entry["coeff"]
            pairs.append(
                (PauliString.from_label(entry["pauli"]), complex(re, im))
            )
        return cls.from_pairs(n, pairs)

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load_json(cls, path) -> "QubitHamiltonian":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))


def encode(
    hf: FermionicHamiltonian,
    m: MajoranaMapping,
    tol: float = DEFAULT_TOL,
) -> QubitHamiltonian:
    """Map a fermionic operator through a Majorana mapping."""
    if m.n != hf.n_modes:
        raise ValueError(
            f"mapping has {m.n} qubits but the operator has "
            f"{hf.n_modes} modes"
        )
    if not m.is_valid():
        raise ValueError("mapping fails the anticommutation validity check")
    expansion = majorana_expansion(hf, tol)
    acc: dict[tuple[int, int], complex] = {}
    for subset, c in expansion.items():
        p = PauliString.identity(m.n)
        for g in subset:
            p = p * m.paulis[g]
        sign, herm = p.sign_split()
        key = herm.key()
        acc[key] = acc.get(key, 0.0) + sign * c
    return QubitHamiltonian(
        hf.n_modes, {k: v for k, v in acc.items() if abs(v) > tol}
    )


def avg_weight(hq: QubitHamiltonian) -> Fraction:
    return hq.avg_weight()


def total_weight(hq: QubitHamiltonian) -> int:
    return hq.total_weight()
