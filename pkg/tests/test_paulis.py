"""Unit and property tests for the Pauli-string algebra."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqmap.paulis import (
    CNOT,
    SDG,
    CliffordGate,
    GateUnit,
    H,
    PauliString,
    S,
    cnot_h_unit,
    cnot_s_unit,
    cnot_unit,
    invert_sequence,
)

from matrix_oracle import (
    conjugate_dense,
    identify_pauli,
    pauli_matrix,
)


def all_paulis(n, phases=(0,)):
    for chars in itertools.product("IXYZ", repeat=n):
        base = PauliString.from_label("".join(chars))
        for k in phases:
            yield PauliString(n, base.x, base.z, base.phase + k)


def all_gates(n):
    for q in range(n):
        yield H(q)
        yield S(q)
        yield SDG(q)
    for c in range(n):
        for t in range(n):
            if c != t:
                yield CNOT(c, t)


@st.composite
def pauli_strings(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    mask = (1 << n) - 1
    return PauliString(
        n,
        draw(st.integers(0, mask)),
        draw(st.integers(0, mask)),
        draw(st.integers(0, 3)),
    )


@st.composite
def gate_sequences(draw, n, max_len=8):
    gates = list(all_gates(n))
    idx = draw(st.lists(st.integers(0, len(gates) - 1), max_size=max_len))
    return [gates[i] for i in idx]


class TestWeightAndLabels:
    def test_weight_examples(self):
        assert PauliString.from_label("IIII").weight == 0
        assert PauliString.from_label("XIZY").weight == 3
        # Jordan-Wigner string for the third mode on 3 qubits.
        assert PauliString.from_label("ZZX").weight == 3

    def test_weight_ignores_phase(self):
        p = PauliString.from_label("XY")
        for k in range(4):
            assert PauliString(2, p.x, p.z, k).weight == 2

    @given(pauli_strings())
    def test_label_round_trip(self, p):
        assert PauliString.from_label(p.to_label()) == p

    def test_label_qubit_zero_leftmost(self):
        p = PauliString.single(3, 0, "X")
        assert p.to_label() == "XII"

    def test_bad_labels(self):
        with pytest.raises(ValueError):
            PauliString.from_label("XQ")
        with pytest.raises(ValueError):
            PauliString.from_label("")


class TestMultiply:
    def test_x_times_z(self):
        x = PauliString.from_label("X")
        z = PauliString.from_label("Z")
        assert (x * z).to_label() == "-iY"
        assert (x * z).phase_exp == 3
        assert (x * z).sign_split()[0] == -1j

    def test_involution(self):
        for p in all_paulis(2):
            assert p * p == PauliString.identity(2)

    def test_xx_times_zz(self):
        r = PauliString.from_label("XX") * PauliString.from_label("ZZ")
        assert r == PauliString.from_label("-YY")

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            PauliString.identity(2) * PauliString.identity(3)

    @pytest.mark.parametrize("n", [1, 2])
    def test_against_matrices_exhaustive(self, n):
        paulis = list(all_paulis(n, phases=(0, 1)))
        for p, q in itertools.product(paulis, repeat=2):
            got = pauli_matrix(p * q)
            want = pauli_matrix(p) @ pauli_matrix(q)
            assert np.allclose(got, want, atol=1e-12)

    @given(pauli_strings(max_n=4), pauli_strings(max_n=4), pauli_strings(max_n=4))
    def test_associative(self, a, b, c):
        n = max(a.n, b.n, c.n)
        a, b, c = (PauliString(n, p.x, p.z, p.phase) for p in (a, b, c))
        assert (a * b) * c == a * (b * c)

    @given(pauli_strings(max_n=5), pauli_strings(max_n=5))
    def test_p_pq_is_q(self, p, q):
        n = max(p.n, q.n)
        p = PauliString(n, p.x, p.z, p.phase)
        q = PauliString(n, q.x, q.z, q.phase)
        r = p * (p * q)
        # p*p = i^{2*phase(p) + 2*y_count(p)} I, an exact phase times q.
        assert (r.x, r.z) == (q.x, q.z)
        assert r.phase == (q.phase + 2 * p.phase + 2 * p.y_count) % 4

    def test_adjoint(self):
        for p in all_paulis(2, phases=range(4)):
            assert np.allclose(
                pauli_matrix(p.adjoint()), pauli_matrix(p).conj().T
            )


class TestAnticommuteSupport:
    def test_examples(self):
        xx = PauliString.from_label("XX")
        zz = PauliString.from_label("ZZ")
        assert xx.anticommute_support(zz) == {0, 1}
        assert xx.commutes_with(zz)
        xi = PauliString.from_label("XI")
        zi = PauliString.from_label("ZI")
        assert xi.anticommute_support(zi) == {0}
        assert not xi.commutes_with(zi)
        for p in all_paulis(3):
            assert p.anticommute_support(p) == set()

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            PauliString.identity(2).anticommute_support(PauliString.identity(3))

    @pytest.mark.parametrize("n", [1, 2])
    def test_matches_matrix_commutator(self, n):
        for p, q in itertools.product(all_paulis(n), repeat=2):
            pm, qm = pauli_matrix(p), pauli_matrix(q)
            anti = np.allclose(pm @ qm + qm @ pm, 0, atol=1e-12)
            assert (len(p.anticommute_support(q)) % 2 == 1) == anti


class TestConjugate:
    @pytest.mark.parametrize("n", [1, 2])
    def test_exact_phase_vs_matrix(self, n):
        """Every gate on every phased Pauli reproduces U P U^dag exactly."""
        for p in all_paulis(n, phases=range(4)):
            for g in all_gates(n):
                got = pauli_matrix(p.conjugate(g))
                want = conjugate_dense(p, [g])
                assert np.allclose(got, want, atol=1e-12), (p, g)

    def test_table_examples(self):
        # CNOT_{i,j}: X_i I_j -> X_i X_j  and  I_i Y_j -> Z_i Y_j
        xi = PauliString.from_label("XI")
        assert xi.conjugate(CNOT(0, 1)).to_label() == "XX"
        iy = PauliString.from_label("IY")
        assert iy.conjugate(CNOT(0, 1)).to_label() == "ZY"
        x0 = PauliString.from_label("X")
        assert x0.conjugate(H(0)).to_label() == "Z"

    def test_single_qubit_gates_preserve_weight(self):
        for p in all_paulis(2, phases=range(4)):
            for g in [H(0), H(1), S(0), S(1), SDG(0), SDG(1)]:
                assert p.conjugate(g).weight == p.weight

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            PauliString.identity(2).conjugate(H(2))
        with pytest.raises(IndexError):
            PauliString.identity(2).conjugate(CNOT(0, 2))

    @given(pauli_strings(max_n=4), st.data())
    @settings(max_examples=60)
    def test_commutation_preserved(self, p, data):
        q = data.draw(pauli_strings(max_n=4))
        n = max(p.n, q.n)
        p = PauliString(n, p.x, p.z, p.phase)
        q = PauliString(n, q.x, q.z, q.phase)
        gates = data.draw(gate_sequences(n))
        before = p.anticommute_mask(q).bit_count() % 2
        after = (
            p.conjugate_all(gates)
            .anticommute_mask(q.conjugate_all(gates))
            .bit_count()
            % 2
        )
        assert before == after


class TestSequences:
    def test_empty_sequence_identity(self):
        p = PauliString.from_label("XZ")
        assert p.conjugate_all([]) == p

    def test_cnot_self_inverse(self):
        for p in all_paulis(2, phases=(0, 1)):
            assert p.conjugate_all([CNOT(0, 1), CNOT(0, 1)]) == p

    def test_two_step_table_composition(self):
        zz = PauliString.from_label("ZZ")
        got = zz.conjugate_all([CNOT(0, 1), H(0)])
        want = conjugate_dense(zz, [CNOT(0, 1), H(0)])
        assert np.allclose(pauli_matrix(got), want, atol=1e-12)

    def test_invert_examples(self):
        assert invert_sequence([H(0)]) == [H(0)]
        assert invert_sequence([S(0)]) == [SDG(0)]
        assert invert_sequence([CNOT(0, 1), S(2), H(1)]) == [
            H(1),
            SDG(2),
            CNOT(0, 1),
        ]

    @given(pauli_strings(max_n=4), st.data())
    @settings(max_examples=60)
    def test_invert_round_trip_exact_phase(self, p, data):
        gates = data.draw(gate_sequences(p.n))
        back = p.conjugate_all(gates).conjugate_all(invert_sequence(gates))
        assert back == p


class TestGateTypes:
    def test_cnot_needs_distinct_qubits(self):
        with pytest.raises(ValueError):
            CNOT(1, 1)

    def test_gate_text_round_trip(self):
        for g in [H(3), S(0), SDG(2), CNOT(4, 1)]:
            assert CliffordGate.from_text(g.to_text()) == g

    def test_unit_shapes(self):
        cnot_unit(0, 1)
        u = cnot_h_unit(2, 0)
        assert u.variant == 1 and u.control == 2 and u.target == 0
        assert cnot_s_unit(0, 1).variant == 2
        with pytest.raises(ValueError):
            GateUnit((H(0),))
        with pytest.raises(ValueError):
            GateUnit((H(1), CNOT(0, 1)))  # 1q gate must sit on the control

    def test_unit_action_matches_table(self):
        # The H/S member acts before the CNOT: X_i under S+CNOT -> Y_i X_j.
        xi = PauliString.from_label("XI")
        got = xi.conjugate_all(cnot_s_unit(0, 1).gates)
        assert got.to_label() == "YX"
        got = xi.conjugate_all(cnot_h_unit(0, 1).gates)
        assert got.to_label() == "ZI"


def test_conjugation_never_splits_terms():
    """Clifford conjugation maps one string to one string: closure check."""
    for p in all_paulis(2, phases=(0,)):
        for g in all_gates(2):
            m = conjugate_dense(p, [g])
            assert identify_pauli(m, 2) is not None
