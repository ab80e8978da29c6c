"""Fermion-to-qubit mapping optimization via Clifford-circuit search.

The package turns a second-quantized operator into a Pauli-basis qubit
Hamiltonian through a Majorana mapping, then searches conjugating
Clifford circuits (simulated annealing or best-first search) for a
mapping with lower average Pauli weight.  The ternary-tree calculus
(Jordan-Wigner, Bravyi-Kitaev, balanced trees, CNOT rotations, exact
transforms, exhaustive enumeration) is included both as the source of
starting points and as the baseline the optimizer is judged against.
"""

from .paulis import (
    CNOT,
    SDG,
    CliffordGate,
    GateUnit,
    H,
    PauliString,
    S,
    invert_sequence,
)
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
    single_op_avg_weight,
    tree_from_mapping,
)
from .fermions import (
    FermionicHamiltonian,
    FermionicTerm,
    QubitHamiltonian,
    avg_weight,
    build_exchange,
    build_hopping_1d,
    build_hopping_2d,
    build_hubbard_2d,
    build_single_ops,
    encode,
    load_fermionic_json,
    save_fermionic_json,
    total_weight,
)
from .search import (
    GateSet,
    RunRecord,
    Schedule,
    SplitMix64,
    apply_sequence,
    beta,
    bfs_run,
    compare_conventional,
    percent_reduction,
    replay_cost,
    sa_run,
    sample_unit,
    tree_brute_force,
)

__version__ = "0.1.0"
