"""Acceptance suite: the project's go/no-go checks, one test per
criterion, each printing a pass/fail line (visible with -v as the
per-test verdict and with -s as an explicit summary line).

Annealing schedules were tuned once for these workloads and are frozen
here; tolerances and runtime budgets appear inline in each test.
"""

import json
import shutil
import time
from fractions import Fraction
from pathlib import Path

import pytest

from fqmap.cli import CampaignConfig, run_campaign
from fqmap.fermions import (
    build_exchange,
    build_hopping_1d,
    build_hopping_2d,
    build_hubbard_2d,
    build_single_ops,
    encode,
    load_fermionic_json,
    majorana_expansion,
)
from fqmap.paulis import PauliString
from fqmap.search import (
    GateSet,
    RunRecord,
    Schedule,
    compare_conventional,
    percent_reduction,
    replay_cost,
    sa_run,
    tree_brute_force,
)
from fqmap.trees import (
    balanced_tree,
    bk_tree,
    enumerate_mappings,
    jw_bk_sequence,
    jw_tree,
    single_op_avg_weight,
)
from fqmap.verify import (
    TWO_QUBIT_UNIT_COLUMNS,
    TWO_QUBIT_UNIT_TABLE,
    car_suite,
    rotation_suite,
)

from matrix_oracle import conjugate_dense, identify_pauli

H2_FIXTURE = Path(__file__).resolve().parents[1] / "data" / "h2_sto3g_0p735.json"


def report(tag: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{tag}: {detail}"


def test_c01_table_equivalence_against_matrix_oracle():
    """96 two-qubit table entries vs dense conjugation, up to sign."""
    t0 = time.time()
    checked = 0
    for row, entries in TWO_QUBIT_UNIT_TABLE.items():
        p = PauliString.from_label(row)
        for (_, gates), want in zip(TWO_QUBIT_UNIT_COLUMNS, entries):
            dense = conjugate_dense(p, gates)
            found = identify_pauli(dense, 2)
            assert found is not None, (row, want)
            coeff, label = found
            assert label == want, f"{row}: oracle {label} != table {want}"
            assert coeff in (1, -1), f"{row}: phase {coeff} not a sign"
            checked += 1
    elapsed = time.time() - t0
    report(
        "C1",
        checked == 96 and elapsed < 1.0,
        f"{checked} entries exact up to sign in {elapsed:.2f}s (< 1s)",
    )


def test_c02_canonical_anticommutation_suite():
    """CAR for jw/bk/balanced trees, n = 1..8, tolerance 1e-12."""
    t0 = time.time()
    res = car_suite(n_max=8, tol=1e-12)
    elapsed = time.time() - t0
    report(
        "C2",
        res.passed and elapsed < 30.0,
        f"{res.checked} anticommutator checks, {res.failed} failed, "
        f"{elapsed:.1f}s (< 30s); notes={res.notes}",
    )


def test_c03_jw_bk_transform_exactness():
    """n = 2..16: CNOT count < n and exact leaf-string equality."""
    t0 = time.time()
    for n in range(2, 17):
        seq = jw_bk_sequence(n)
        assert len(seq) < n, f"n={n}: {len(seq)} gates"
        got = bk_tree(n).compile().conjugated(seq)
        want = jw_tree(n).compile()
        for g in range(2 * n + 1):
            assert got.paulis[g] == want.paulis[g], f"n={n}, gamma={g}"
    elapsed = time.time() - t0
    report("C3", elapsed < 10.0, f"n=2..16 exact, {elapsed:.1f}s (< 10s)")


def test_c04_rotation_rules_randomized():
    """500 random (tree, j, k) rotation instances, n <= 8: the rotated
    tree compiles to the CNOT conjugation (phase-stripped); left
    rotations preserve the inorder traversals (middle rotations
    provably reorder them)."""
    t0 = time.time()
    res = rotation_suite(samples=500, n_max=8)
    elapsed = time.time() - t0
    report(
        "C4",
        res.passed and elapsed < 60.0,
        f"{res.checked} checks over 500 instances, {res.failed} failed, "
        f"{elapsed:.1f}s (< 60s); notes={res.notes}",
    )


def _cheap_total_weight(mapping, subsets):
    total = 0
    for subset in subsets:
        x = z = 0
        for g in subset:
            p = mapping.paulis[g]
            x ^= p.x
            z ^= p.z
        total += (x | z).bit_count()
    return total


def test_c05_exchange_ground_truth():
    """Enumerate all 4 * 9! mappings (exchange minimum 20), then anneal
    with CH to total weight 16 = 20% reduction over the best tree."""
    hf = build_exchange()
    subsets = sorted(majorana_expansion(hf))

    from fqmap.trees import is_tree_compatible

    t0 = time.time()
    count = 0
    min_total = None
    for m in enumerate_mappings(4):
        count += 1
        if count % 1451 == 0:  # compatibility spot checks along the way
            assert is_tree_compatible(m)
        w = _cheap_total_weight(m, subsets)
        if min_total is None or w < min_total:
            min_total = w
    enum_elapsed = time.time() - t0
    assert count == 1_451_520, count
    assert min_total == 20, min_total

    # the packed-kernel path must agree with the generator scan
    res = tree_brute_force(hf)
    assert res.n_mappings == count and res.min_total == min_total

    t1 = time.time()
    hq = encode(hf, jw_tree(4).compile())
    best = min(
        sa_run(
            hq, GateSet.CH, Schedule(1, 1, 6, 0), 1_000_000, seed=s,
            cost="total",
        ).best_cost
        for s in range(10)
    )
    sa_elapsed = time.time() - t1
    pr = percent_reduction(best, min_total)
    report(
        "C5",
        best == 16
        and pr == Fraction(1, 5)
        and enum_elapsed < 1800
        and sa_elapsed < 600,
        f"{count} mappings, tree min {min_total} "
        f"(enumeration {enum_elapsed:.0f}s < 30min); SA best {best} "
        f"-> PR {float(pr):.0%} (annealing {sa_elapsed:.0f}s < 10min)",
    )


def test_c06_single_operator_optimum():
    """n = 3..9: annealing with CNOTs only from JW reaches the balanced
    tree's per-operator average exactly (best of 10 x 1e5 steps)."""
    t0 = time.time()
    details = []
    for n in range(3, 10):
        hq = encode(build_single_ops(n), jw_tree(n).compile())
        target = single_op_avg_weight(balanced_tree(n))
        best = min(
            sa_run(
                hq, GateSet.C, Schedule(1, 1, float(len(hq)), 0),
                100_000, seed=s,
            ).best_cost
            for s in range(10)
        )
        assert best == target, f"n={n}: best {best} != target {target}"
        details.append(f"n={n}:{best}")
    elapsed = time.time() - t0
    report(
        "C6",
        elapsed < 600,
        f"exact rational matches {', '.join(details)}; "
        f"{elapsed:.0f}s (< 10min)",
    )


def test_c07_dual_chain_rediscovery():
    """N=8 nearest-neighbor chain with CH reaches average weight 10/7
    (8 singles + 6 doubles over 14 terms), best of 20 x 1e6 steps."""
    hq = encode(build_hopping_1d(8, 1), jw_tree(8).compile())
    assert hq.avg_weight() == 2
    t0 = time.time()
    best = min(
        sa_run(
            hq, GateSet.CH, Schedule(1, 1, 14, 0), 1_000_000, seed=s
        ).best_cost
        for s in range(20)
    )
    elapsed = time.time() - t0
    report(
        "C7",
        best <= Fraction(10, 7) and elapsed < 1800,
        f"best average {best} <= 10/7; {elapsed:.0f}s (< 30min)",
    )


def test_c08_published_term_counts():
    t0 = time.time()
    counts = (
        len(encode(build_hopping_2d(6), jw_tree(36).compile())),
        len(encode(build_hopping_2d(8), jw_tree(64).compile())),
        len(encode(build_hubbard_2d(6), jw_tree(72).compile())),
    )
    elapsed = time.time() - t0
    report(
        "C8",
        counts == (120, 224, 349) and elapsed < 5.0,
        f"term counts {counts} == (120, 224, 349); {elapsed:.1f}s (< 5s)",
    )


def test_c09_hydrogen_fixture():
    """Conditional on the externally generated 15-term fixture: tree
    minimum 32 and annealed total 26."""
    if not H2_FIXTURE.exists():
        print("ACCEPTANCE C9: SKIP - hydrogen fixture not present")
        pytest.skip("hydrogen fixture not present")
    hf = load_fermionic_json(H2_FIXTURE)
    assert len(hf.terms) == 15 and hf.n_modes == 4
    hq = encode(hf, jw_tree(4).compile())
    assert len(hq) == 15
    res = tree_brute_force(hf)
    best = min(
        sa_run(
            hq, GateSet.CH, Schedule(1, 1, 6, 0), 1_000_000, seed=s,
            cost="total",
        ).best_cost
        for s in range(10)
    )
    report(
        "C9",
        res.min_total == 32 and best == 26,
        f"tree minimum {res.min_total} == 32; SA best {best} == 26",
    )


def test_c10_two_dimensional_substitute_property():
    """L=4 grid hopping: strictly positive reduction against the best
    conventional mapping (CH, 1e6 steps, best of 10 seeds)."""
    hf = build_hopping_2d(4)
    hq = encode(hf, jw_tree(16).compile())
    comparison = compare_conventional(hf, cost="avg")
    t0 = time.time()
    best = min(
        sa_run(
            hq, GateSet.CH, Schedule(1, 1, float(len(hq)), 0),
            1_000_000, seed=s,
        ).best_cost
        for s in range(10)
    )
    elapsed = time.time() - t0
    pr = percent_reduction(best, comparison.best_cost)
    report(
        "C10",
        pr > 0 and elapsed < 3600,
        f"best {best} vs conventional {comparison.best_name} "
        f"{comparison.best_cost}: PR {float(pr):.3f} > 0; "
        f"{elapsed:.0f}s (< 1h)",
    )


def test_c11_determinism_and_replay(tmp_path):
    """Records replay to their recorded best cost exactly; a campaign
    re-run with the same master seed reproduces every output file
    bit for bit."""
    hq = encode(build_exchange(), jw_tree(4).compile())
    for seed in range(5):
        r = sa_run(
            hq, GateSet.CHS, Schedule(1, 1, 6, 0), 100_000, seed=seed,
            cost="total",
        )
        assert replay_cost(hq, r) == r.best_cost

    out = tmp_path / "campaign"
    cfg = dict(
        model={"kind": "hopping1d", "sites": 6, "range": 2},
        mapping="jw",
        gate_set="CH",
        schedule={"c1": 1.0, "c2": 1.0, "c3": 20.0, "t_min": 0},
        t_max=50_000,
        num_seeds=3,
        master_seed=11,
        out_dir=str(out),
    )
    run_campaign(CampaignConfig(**cfg))
    first = {
        f.name: f.read_bytes() for f in sorted(out.iterdir())
    }
    shutil.rmtree(out)
    run_campaign(CampaignConfig(**cfg))
    second = {
        f.name: f.read_bytes() for f in sorted(out.iterdir())
    }
    identical = first == second
    record = RunRecord.load_json(out / "run_11.json")
    from fqmap.fermions import QubitHamiltonian

    hq0 = QubitHamiltonian.load_json(out / "initial_qubit_hamiltonian.json")
    report(
        "C11",
        identical and replay_cost(hq0, record) == record.best_cost,
        f"campaign re-run identical across {len(first)} files; "
        "records replay to recorded best costs",
    )
