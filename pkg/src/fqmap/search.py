"""Search drivers over Clifford conjugations of a qubit Hamiltonian.

Moves are gate units: a CNOT alone (gate set C), or preceded by H or S
on its control (CH and CHS).  Single-qubit gates never change a weight
on their own, which is why they only appear glued to a CNOT.

Runs are deterministic: a seeded splitmix64 stream drives both the unit
choice and the accept draw, and the working state is exact integer bit
arithmetic.  A RunRecord replays exactly from its seed or its move list.
"""

from __future__ import annotations

import csv
import heapq
import itertools
import json
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .fermions import (
    FermionicHamiltonian,
    QubitHamiltonian,
    encode,
    majorana_expansion,
)
from .paulis import (
    CliffordGate,
    GateUnit,
    cnot_h_unit,
    cnot_s_unit,
    cnot_unit,
)
from .trees import (
    TernaryTreeMapping,
    balanced_tree,
    bk_tree,
    enumerate_shapes,
    jw_tree,
)

__all__ = [
    "GateSet",
    "SplitMix64",
    "Schedule",
    "RunRecord",
    "beta",
    "unit_count",
    "sample_unit",
    "unit_from_index",
    "unit_to_index",
    "sa_run",
    "bfs_run",
    "apply_sequence",
    "replay_cost",
    "percent_reduction",
    "compare_conventional",
    "ConventionalComparison",
    "tree_brute_force",
    "BruteForceResult",
    "conventional_tree",
    "save_circuit",
    "load_circuit",
    "save_trace_csv",
]


class GateSet(Enum):
    C = "C"
    CH = "CH"
    CHS = "CHS"

    @property
    def variants(self) -> int:
        return {"C": 1, "CH": 2, "CHS": 3}[self.value]


def unit_count(gate_set: GateSet, n: int) -> int:
    if n < 2:
        raise ValueError("gate units need at least two qubits")
    return gate_set.variants * n * (n - 1)


_UNIT_BUILDERS = (cnot_unit, cnot_h_unit, cnot_s_unit)


def unit_from_index(idx: int, n: int) -> GateUnit:
    variant, c, t = _kernels.decode_unit(idx, n)
    return _UNIT_BUILDERS[variant](c, t)


def unit_to_index(unit: GateUnit, n: int) -> int:
    return _kernels.encode_unit(unit.variant, unit.control, unit.target, n)


class SplitMix64:
    """Seeded, portable 64-bit generator; the one stream every run uses."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & ((1 << 64) - 1)

    def next_uint64(self) -> int:
        self.state, out = _kernels.splitmix_next(self.state)
        return out

    def uniform(self) -> float:
        return (self.next_uint64() >> 11) * 2.0**-53


def sample_unit(gate_set: GateSet, n: int, rng: SplitMix64) -> GateUnit:
    """Uniform draw over the gate set's units: C has n(n-1) of them, CH
    twice, CHS three times that."""
    count = unit_count(gate_set, n)
    return unit_from_index(rng.next_uint64() % count, n)


@dataclass(frozen=True, slots=True)
class Schedule:
    """Inverse-temperature profile log(c1 + c2 t) * c3 / cost, zero for
    the first t_min steps (a pure random walk)."""

    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    t_min: int = 0

    def __post_init__(self) -> None:
        if self.c1 <= 0 or self.c2 < 0 or self.c3 <= 0:
            raise ValueError("need c1 > 0, c2 >= 0, c3 > 0")
        if self.t_min < 0:
            raise ValueError("t_min must be non-negative")

    def to_json_obj(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "t_min": self.t_min,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Schedule":
        return cls(obj["c1"], obj["c2"], obj["c3"], obj["t_min"])


def beta(t: float, schedule: Schedule, current_cost) -> float:
    """Inverse temperature at step t given the current cost."""
    cost = float(current_cost)
    if cost <= 0:
        raise ValueError("current cost must be positive")
    if t <= schedule.t_min:
        return 0.0
    import math

    return math.log(schedule.c1 + schedule.c2 * t) * schedule.c3 / cost


def _fraction_obj(f: Fraction) -> list[int]:
    return [f.numerator, f.denominator]


@dataclass(frozen=True)
class RunRecord:
    """Everything needed to reproduce and audit one search run."""

    algorithm: str
    seed: int
    gate_set: GateSet
    schedule: Schedule | None
    t_max: int
    cost_fn: str
    n_qubits: int
    initial_cost: Fraction
    best_cost: Fraction
    moves: tuple[GateUnit, ...]
    best_prefix_len: int
    cost_trace: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if self.best_cost > self.initial_cost:
            raise ValueError("best cost cannot exceed the initial cost")
        if not 0 <= self.best_prefix_len <= len(self.moves):
            raise ValueError("best prefix length out of range")

    def to_json_obj(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "gate_set": self.gate_set.value,
            "schedule": (
                None if self.schedule is None else self.schedule.to_json_obj()
            ),
            "t_max": self.t_max,
            "cost_fn": self.cost_fn,
            "n_qubits": self.n_qubits,
            "initial_cost": _fraction_obj(self.initial_cost),
            "best_cost": _fraction_obj(self.best_cost),
            "best_prefix_len": self.best_prefix_len,
            "moves": [
                [g.to_text() for g in unit.gates] for unit in self.moves
            ],
            "cost_trace": [
                [t, *_fraction_obj(c)] for t, c in self.cost_trace
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RunRecord":
        moves = tuple(
            GateUnit(tuple(CliffordGate.from_text(g) for g in unit))
            for unit in obj["moves"]
        )
        return cls(
            algorithm=obj["algorithm"],
            seed=obj["seed"],
            gate_set=GateSet(obj["gate_set"]),
            schedule=(
                None
                if obj["schedule"] is None
                else Schedule.from_json_obj(obj["schedule"])
            ),
            t_max=obj["t_max"],
            cost_fn=obj["cost_fn"],
            n_qubits=obj["n_qubits"],
            initial_cost=Fraction(*obj["initial_cost"]),
            best_cost=Fraction(*obj["best_cost"]),
            moves=moves,
            best_prefix_len=obj["best_prefix_len"],
            cost_trace=tuple(
                (t, Fraction(num, den)) for t, num, den in obj["cost_trace"]
            ),
        )

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load_json(cls, path) -> "RunRecord":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))


def save_circuit(moves: Iterable[GateUnit], path) -> None:
    """One gate per line, application order top to bottom."""
    with open(path, "w") as fh:
        for unit in moves:
            for g in unit.gates:
                fh.write(g.to_text() + "\n")


def load_circuit(path) -> list[CliffordGate]:
    gates = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                gates.append(CliffordGate.from_text(line))
    return gates


def save_trace_csv(record: RunRecord, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "cost"])
        for t, c in record.cost_trace:
            writer.writerow([t, repr(float(c))])


# ---------------------------------------------------------------------------
# simulated annealing
# ---------------------------------------------------------------------------


def sa_run(
    hq: QubitHamiltonian,
    gate_set: GateSet,
    schedule: Schedule,
    t_max: int,
    seed: int,
    cost: str = "avg",
    trace_every: int = 1000,
) -> RunRecord:
    """Anneal the working Hamiltonian for t_max proposals.

    Each step samples a unit uniformly, computes the exact integer
    weight change on the two touched qubits, and accepts with
    probability min(1, exp(-beta * dC)).  The full accepted-move list
    (the chain's final state) and the best-so-far prefix are both
    recorded; after a high-temperature excursion the final state is
    typically worse than the best prefix.
    """
    if len(hq) == 0:
        raise ValueError("cannot anneal an empty Hamiltonian")
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if cost not in ("avg", "total"):
        raise ValueError(f"unknown cost function {cost!r}")
    n = hq.n_qubits
    ell = len(hq)
    xw, zw = hq.bit_arrays()
    units, best_total, best_prefix, trace_t, trace_total, _final = (
        _kernels.sa_chain(
            xw,
            zw,
            n,
            unit_count(gate_set, n),
            schedule.c1,
            schedule.c2,
            schedule.c3,
            schedule.t_min,
            t_max,
            seed,
            cost == "avg",
            trace_every,
        )
    )
    denom = ell if cost == "avg" else 1
    return RunRecord(
        algorithm="sa",
        seed=seed,
        gate_set=gate_set,
        schedule=schedule,
        t_max=t_max,
        cost_fn=cost,
        n_qubits=n,
        initial_cost=Fraction(int(trace_total[0]), denom),
        best_cost=Fraction(best_total, denom),
        moves=tuple(unit_from_index(int(u), n) for u in units),
        best_prefix_len=best_prefix,
        cost_trace=tuple(
            (int(t), Fraction(int(c), denom))
            for t, c in zip(trace_t, trace_total)
        ),
    )


def apply_sequence(
    hq: QubitHamiltonian, moves: Iterable[GateUnit | CliffordGate]
) -> QubitHamiltonian:
    """Conjugate a Hamiltonian by units or gates with exact coefficient
    tracking; the term count never changes."""
    gates: list[CliffordGate] = []
    for mv in moves:
        if isinstance(mv, GateUnit):
            gates.extend(mv.gates)
        else:
            gates.append(mv)
    out = hq.conjugated(gates)
    if len(out) != len(hq):  # pragma: no cover - Clifford invariant
        raise AssertionError("conjugation changed the term count")
    return out


def replay_cost(
    hq: QubitHamiltonian, record: RunRecord, prefix_len: int | None = None
) -> Fraction:
    """Cost after replaying the first prefix_len recorded units (default
    the recorded best prefix) on the given initial Hamiltonian."""
    if prefix_len is None:
        prefix_len = record.best_prefix_len
    n = hq.n_qubits
    xw, zw = hq.bit_arrays()
    codes = [unit_to_index(u, n) for u in record.moves[:prefix_len]]
    _kernels.apply_units(xw, zw, codes, n)
    total = int(_kernels.popcount_rows(xw, zw).sum())
    return Fraction(total, len(hq) if record.cost_fn == "avg" else 1)


# ---------------------------------------------------------------------------
# best-first search
# ---------------------------------------------------------------------------


def _conj_keys(
    keys: tuple[tuple[int, int], ...], variant: int, c: int, t: int
) -> tuple[tuple[int, int], ...]:
    out = []
    cb, tb = 1 << c, 1 << t
    for x, z in keys:
        if variant == 1:  # H on the control swaps its x/z bits
            xc, zc = z & cb, x & cb
            x = (x & ~cb) | xc
            z = (z & ~cb) | zc
        elif variant == 2:  # S on the control: z_c ^= x_c
            if x & cb:
                z ^= cb
        if x & cb:  # CNOT: x_t ^= x_c, z_c ^= z_t
            x ^= tb
        if z & tb:
            z ^= cb
        out.append((x, z))
    return tuple(out)


def bfs_run(
    hq: QubitHamiltonian,
    gate_set: GateSet,
    max_nodes: int = 100_000,
    timeout: float | None = None,
    cost: str = "avg",
) -> RunRecord:
    """Best-first search: pop the cheapest Hamiltonian, push every
    strictly improving child.  Deterministic; FIFO among equal costs.

    With a bounded queue budget this can stop mid-search and still
    return the best sequence found so far.
    """
    if len(hq) == 0:
        raise ValueError("cannot search an empty Hamiltonian")
    if cost not in ("avg", "total"):
        raise ValueError(f"unknown cost function {cost!r}")
    n = hq.n_qubits
    ell = len(hq)
    count = unit_count(gate_set, n)
    start = tuple(sorted((x, z) for (x, z) in (p.key() for p, _ in hq.items())))

    def total_of(keys) -> int:
        return sum((x | z).bit_count() for x, z in keys)

    t0 = time.monotonic()
    counter = itertools.count()
    initial_total = total_of(start)
    best_total = initial_total
    best_moves: tuple[int, ...] = ()
    heap = [(initial_total, next(counter), start, ())]
    pops = 0
    trace = [(0, initial_total)]
    while heap and pops < max_nodes:
        if timeout is not None and time.monotonic() - t0 > timeout:
            break
        node_total, _, keys, moves = heapq.heappop(heap)
        pops += 1
        for idx in range(count):
            variant, c, t = _kernels.decode_unit(idx, n)
            child = _conj_keys(keys, variant, c, t)
            child_total = total_of(child)
            if child_total < node_total:
                child_moves = moves + (idx,)
                heapq.heappush(
                    heap, (child_total, next(counter), child, child_moves)
                )
                if child_total < best_total:
                    best_total = child_total
                    best_moves = child_moves
                    trace.append((pops, child_total))
    denom = ell if cost == "avg" else 1
    return RunRecord(
        algorithm="bfs",
        seed=0,
        gate_set=gate_set,
        schedule=None,
        t_max=max_nodes,
        cost_fn=cost,
        n_qubits=n,
        initial_cost=Fraction(initial_total, denom),
        best_cost=Fraction(best_total, denom),
        moves=tuple(unit_from_index(i, n) for i in best_moves),
        best_prefix_len=len(best_moves),
        cost_trace=tuple((t, Fraction(c, denom)) for t, c in trace),
    )


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------


def percent_reduction(opt_weight, conv_weight) -> Fraction:
    """1 - optimized/conventional, exact when fed rationals."""
    conv = Fraction(conv_weight)
    if conv <= 0:
        raise ValueError("conventional weight must be positive")
    return 1 - Fraction(opt_weight) / conv


CONVENTIONAL_BUILDERS = {
    "jw": jw_tree,
    "bk": bk_tree,
    "balanced": balanced_tree,
}


def conventional_tree(name: str, n: int) -> TernaryTreeMapping:
    try:
        return CONVENTIONAL_BUILDERS[name](n)
    except KeyError:
        raise ValueError(
            f"unknown mapping {name!r}; pick from {sorted(CONVENTIONAL_BUILDERS)}"
        ) from None


@dataclass(frozen=True)
class ConventionalComparison:
    cost_fn: str
    costs: dict[str, Fraction]
    best_name: str
    best_cost: Fraction
    optimized_cost: Fraction | None = None
    reduction: Fraction | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "cost_fn": self.cost_fn,
            "costs": {k: _fraction_obj(v) for k, v in self.costs.items()},
            "best_conventional": self.best_name,
            "best_conventional_cost": _fraction_obj(self.best_cost),
        }
        if self.optimized_cost is not None:
            obj["optimized_cost"] = _fraction_obj(self.optimized_cost)
            obj["percent_reduction"] = float(self.reduction)
        return obj


def compare_conventional(
    hf: FermionicHamiltonian,
    cost: str = "avg",
    optimized_cost: Fraction | None = None,
) -> ConventionalComparison:
    """Encode under the three standard trees and report each cost, the
    minimum, and the reduction of a supplied optimized cost against it."""
    costs: dict[str, Fraction] = {}
    for name, builder in CONVENTIONAL_BUILDERS.items():
        hq = encode(hf, builder(hf.n_modes).compile())
        costs[name] = (
            hq.avg_weight() if cost == "avg" else Fraction(hq.total_weight())
        )
    best_name = min(costs, key=lambda k: (costs[k], k))
    reduction = None
    if optimized_cost is not None:
        reduction = percent_reduction(optimized_cost, costs[best_name])
    return ConventionalComparison(
        cost_fn=cost,
        costs=costs,
        best_name=best_name,
        best_cost=costs[best_name],
        optimized_cost=optimized_cost,
        reduction=reduction,
    )


# ---------------------------------------------------------------------------
# exhaustive tree search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    n_mappings: int
    term_count: int
    min_total: int
    min_avg: Fraction
    argmin_tree: TernaryTreeMapping

    def to_json_obj(self) -> dict:
        return {
            "mappings_processed": self.n_mappings,
            "term_count": self.term_count,
            "min_total_weight": self.min_total,
            "min_avg_weight": _fraction_obj(self.min_avg),
            "argmin_tree": self.argmin_tree.to_json_obj(),
        }


def tree_brute_force(
    hf: FermionicHamiltonian,
    max_n: int = 4,
    chunk: int = 1 << 19,
) -> BruteForceResult:
    """Scan every ternary-tree mapping for the minimum encoded weight.

    Iterates all shapes times all (2n+1)! leaf labelings; qubit labels
    are irrelevant to weights and stay fixed.  The per-labeling weight
    sums popcounts over the operator's Majorana subsets, so nothing is
    re-encoded inside the loop.
    """
    n = hf.n_modes
    if n > max_n:
        raise ValueError(
            f"brute force over {2 * n + 1}! labelings per shape is beyond "
            f"the default bound {max_n}; raise max_n to force it"
        )
    if n > 10:
        raise ValueError("bit packing here supports at most 10 modes")
    expansion = majorana_expansion(hf)
    if not expansion:
        raise ValueError("operator expands to zero")
    subsets = sorted(expansion)
    max_len = max((len(s) for s in subsets), default=0)
    sub_idx = np.zeros((len(subsets), max(1, max_len)), dtype=np.int64)
    sub_len = np.zeros(len(subsets), dtype=np.int64)
    for i, s in enumerate(subsets):
        sub_len[i] = len(s)
        sub_idx[i, : len(s)] = s
    width = 2 * n + 1
    shapes = list(enumerate_shapes(n, max_n=max(n, 6)))
    best = None  # (total, shape_index, perm_tuple)
    n_mappings = 0
    for si, shape in enumerate(shapes):
        slot_strings = shape.compile().paulis
        xs = np.array([p.x for p in slot_strings], dtype=np.uint64)
        zs = np.array([p.z for p in slot_strings], dtype=np.uint64)
        perm_iter = itertools.permutations(range(width))
        while True:
            block = list(itertools.islice(perm_iter, chunk))
            if not block:
                break
            perms = np.array(block, dtype=np.uint8)
            totals = _kernels.perm_weight_scan(
                xs, zs, sub_idx, sub_len, perms
            )
            n_mappings += len(block)
            row = int(np.argmin(totals))
            cand = (int(totals[row]), si, block[row])
            if best is None or cand[0] < best[0]:
                best = cand
    min_total, si, perm = best
    # perm places Majorana g at slot perm[g]; the shape's own labels are
    # slot == label, so relabel leaves by the inverse assignment.
    lperm = [0] * width
    for g, slot in enumerate(perm):
        lperm[slot] = g
    argmin_tree = shapes[si].relabel_leaves(lperm)
    return BruteForceResult(
        n_mappings=n_mappings,
        term_count=len(subsets),
        min_total=min_total,
        min_avg=Fraction(min_total, len(subsets)),
        argmin_tree=argmin_tree,
    )
