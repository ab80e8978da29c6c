"""Phase-exact Pauli-string algebra and Clifford conjugation.

A Pauli string on ``n`` qubits is stored in symplectic form: integer bit
masks ``x`` and ``z`` (bit ``q`` refers to qubit ``q``) together with a
global-phase exponent ``phase``, so that the operator is

    i**phase * X^x * Z^z

where ``X^x`` is the product of Pauli X on every qubit whose bit is set
in ``x``, and likewise ``Z^z``.  A single-qubit Y equals ``i * X * Z``,
so Y on qubit 0 is ``PauliString(1, x=1, z=1, phase=1)``.

Packing the bit vectors into Python integers gives word-wise XOR / AND /
popcount in O(n/64) and makes strings hashable, which the Hamiltonian
containers rely on.  All values here are immutable.

Rendering convention: qubit 0 is the leftmost character of a label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "PauliString",
    "CliffordGate",
    "GateUnit",
    "H",
    "S",
    "SDG",
    "CNOT",
    "cnot_unit",
    "cnot_h_unit",
    "cnot_s_unit",
    "invert_sequence",
]

_AXIS_FROM_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FROM_AXIS = {v: k for k, v in _AXIS_FROM_BITS.items()}
_PREFIX_TO_EXP = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_EXP_TO_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_EXP_TO_COEFF = {0: 1.0 + 0.0j, 1: 1.0j, 2: -1.0 + 0.0j, 3: -1.0j}


@dataclass(frozen=True, slots=True)
class PauliString:
    """An n-qubit Pauli operator with exact global phase.

    Attributes:
        n: number of qubits.
        x: bit mask of X components (bit q set iff qubit q carries X or Y).
        z: bit mask of Z components (bit q set iff qubit q carries Z or Y).
        phase: exponent k of the global phase i**k, reduced mod 4.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.x < 0 or self.z & ~mask or self.z < 0:
            raise ValueError("bit mask outside qubit range")
        object.__setattr__(self, "phase", self.phase & 3)

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, axis: str) -> "PauliString":
        """The Hermitian single-qubit Pauli ``axis`` acting on ``qubit``."""
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _BITS_FROM_AXIS[axis]
        phase = 1 if axis == "Y" else 0
        return cls(n, xb << qubit, zb << qubit, phase)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a text label such as ``"XIZY"`` or ``"-iZZ"``.

        The optional prefix is one of ``+ - +i -i``; the remainder is one
        character per qubit from ``IXYZ`` with qubit 0 leftmost.
        """
        body = label
        prefix = ""
        for p in ("+i", "-i", "+", "-", "i"):
            if body.startswith(p):
                prefix, body = p, body[len(p):]
                break
        if not body or any(c not in "IXYZ" for c in body):
            raise ValueError(f"bad Pauli label {label!r}")
        x = z = 0
        n_y = 0
        for q, c in enumerate(body):
            xb, zb = _BITS_FROM_AXIS[c]
            x |= xb << q
            z |= zb << q
            n_y += c == "Y"
        return cls(len(body), x, z, (_PREFIX_TO_EXP[prefix] + n_y) & 3)

    # -- rendering ---------------------------------------------------------

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def phase_exp(self) -> int:
        """Exponent k with self == i**k * (plain I/X/Y/Z tensor product)."""
        return (self.phase - self.y_count) & 3

    def to_label(self) -> str:
        chars = [self.axis(q) for q in range(self.n)]
        sign = (self.phase - self.y_count) & 3
        return _EXP_TO_PREFIX[sign] + "".join(chars)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.to_label()

    def axis(self, qubit: int) -> str:
        if not 0 <= qubit < self.n:
            raise IndexError(f"qubit {qubit} out of range for n={self.n}")
        return _AXIS_FROM_BITS[(self.x >> qubit) & 1, (self.z >> qubit) & 1]

    # -- basic queries -----------------------------------------------------

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors.  Phase independent."""
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - self.y_count) % 2 == 0

    def sign_split(self) -> tuple[complex, "PauliString"]:
        """Split into (coefficient, Hermitian-canonical string).

        The canonical string carries phase equal to its Y count, i.e. it
        is the plain tensor product of I/X/Y/Z; the returned coefficient
        is one of 1, i, -1, -i.
        """
        n_y = self.y_count & 3
        coeff = _EXP_TO_COEFF[(self.phase - n_y) & 3]
        return coeff, PauliString(self.n, self.x, self.z, n_y)

    def key(self) -> tuple[int, int]:
        """Phase-stripped dictionary key (x, z)."""
        return (self.x, self.z)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Exact operator product self * other."""
        if self.n != other.n:
            raise ValueError(
                f"dimension mismatch: {self.n} vs {other.n} qubits")
        # Move other's X block past self's Z block: each overlap gives -1.
        k = self.phase + other.phase + 2 * (self.z & other.x).bit_count()
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, k)

    def adjoint(self) -> "PauliString":
        k = -self.phase + 2 * self.y_count
        return PauliString(self.n, self.x, self.z, k)

    def anticommute_mask(self, other: "PauliString") -> int:
        """Bit mask of qubits where the single-qubit factors anticommute."""
        if self.n != other.n:
            raise ValueError(
                f"dimension mismatch: {self.n} vs {other.n} qubits")
        return (self.x & other.z) ^ (self.z & other.x)

    def anticommute_support(self, other: "PauliString") -> set[int]:
        mask = self.anticommute_mask(other)
        return {q for q in range(self.n) if (mask >> q) & 1}

    def commutes_with(self, other: "PauliString") -> bool:
        """Operator-level commutation: even anticommuting support."""
        return self.anticommute_mask(other).bit_count() % 2 == 0

    # -- Clifford conjugation ---------------------------------------------

    def conjugate(self, gate: "CliffordGate") -> "PauliString":
        """Return gate * self * gate^dagger with exact phase tracking."""
        x, z, k = self.x, self.z, self.phase
        kind = gate.kind
        if kind == "CNOT":
            c, t = gate.qubits
            if c >= self.n or t >= self.n:
                raise IndexError(f"gate {gate} outside {self.n} qubits")
            if (x >> c) & 1:
                x ^= 1 << t
            if (z >> t) & 1:
                z ^= 1 << c
            return PauliString(self.n, x, z, k)
        q = gate.qubits[0]
        if q >= self.n:
            raise IndexError(f"gate {gate} outside {self.n} qubits")
        bit = 1 << q
        xq = (x >> q) & 1
        zq = (z >> q) & 1
        if kind == "H":
            # X <-> Z; the phase bump accounts for XZ -> ZX.
            x = (x & ~bit) | (zq << q)
            z = (z & ~bit) | (xq << q)
            k += 2 * (xq & zq)
        elif kind == "S":
            z ^= bit if xq else 0
            k += xq
        elif kind == "SDG":
            z ^= bit if xq else 0
            k += 3 * xq
        else:  # pragma: no cover - CliffordGate validates kinds
            raise ValueError(f"unknown gate kind {kind!r}")
        return PauliString(self.n, x, z, k)

    def conjugate_all(
        self, gates: Iterable["CliffordGate"]
    ) -> "PauliString":
        """Fold :meth:`conjugate` over a gate list, first gate first."""
        p = self
        for g in gates:
            p = p.conjugate(g)
        return p


_GATE_KINDS = ("H", "S", "SDG", "CNOT")
_INVERSE_KIND = {"H": "H", "S": "SDG", "SDG": "S", "CNOT": "CNOT"}


@dataclass(frozen=True, slots=True)
class CliffordGate:
    """An elementary Clifford gate: H, S, SDG, or CNOT(control, target).

    SDG exists only so gate sequences can be inverted without expanding
    S^3; search gate sets never sample it.
    """

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in _GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CNOT":
            if len(self.qubits) != 2:
                raise ValueError("CNOT takes (control, target)")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError("CNOT control and target must differ")
        elif len(self.qubits) != 1:
            raise ValueError(f"{self.kind} takes exactly one qubit")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")

    def inverse(self) -> "CliffordGate":
        return CliffordGate(_INVERSE_KIND[self.kind], self.qubits)

    def to_text(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])

    @classmethod
    def from_text(cls, line: str) -> "CliffordGate":
        parts = line.split()
        if not parts:
            raise ValueError("empty gate line")
        return cls(parts[0].upper(), tuple(int(p) for p in parts[1:]))

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.to_text()


def H(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def S(q: int) -> CliffordGate:
    return CliffordGate("S", (q,))


def SDG(q: int) -> CliffordGate:
    return CliffordGate("SDG", (q,))


def CNOT(control: int, target: int) -> CliffordGate:
    return CliffordGate("CNOT", (control, target))


def invert_sequence(gates: Sequence[CliffordGate]) -> list[CliffordGate]:
    """Inverse of a gate list under conjugation order (first gate first)."""
    return [g.inverse() for g in reversed(gates)]


@dataclass(frozen=True, slots=True)
class GateUnit:
    """A single search move: a CNOT, optionally preceded by H or S on its
    control qubit.  ``gates`` is in application order."""

    gates: tuple[CliffordGate, ...]

    def __post_init__(self) -> None:
        gs = self.gates
        ok = (len(gs) == 1 and gs[0].kind == "CNOT") or (
            len(gs) == 2
            and gs[0].kind in ("H", "S")
            and gs[1].kind == "CNOT"
            and gs[0].qubits[0] == gs[1].qubits[0]
        )
        if not ok:
            raise ValueError(
                "a unit is CNOT, H+CNOT, or S+CNOT sharing the control")

    @property
    def control(self) -> int:
        return self.gates[-1].qubits[0]

    @property
    def target(self) -> int:
        return self.gates[-1].qubits[1]

    @property
    def variant(self) -> int:
        """0 for plain CNOT, 1 for H+CNOT, 2 for S+CNOT."""
        if len(self.gates) == 1:
            return 0
        return 1 if self.gates[0].kind == "H" else 2

    def __iter__(self) -> Iterator[CliffordGate]:
        return iter(self.gates)


def cnot_unit(control: int, target: int) -> GateUnit:
    return GateUnit((CNOT(control, target),))


def cnot_h_unit(control: int, target: int) -> GateUnit:
    return GateUnit((H(control), CNOT(control, target)))


def cnot_s_unit(control: int, target: int) -> GateUnit:
    return GateUnit((S(control), CNOT(control, target)))
