"""Probe families, eigendecompositions, and the operator-basis mixture."""

import numpy as np
import pytest

from switchtest.errors import (
    BadParameter,
    DimensionMismatch,
    EmptyInput,
    InvalidState,
)
from switchtest.gates import clock, heisenberg_weyl_basis
from switchtest.probes import (
    AffineStateMix,
    ProbeSet,
    basis_probes,
    double_register,
    eigendecomposition,
    entangled_probe,
    haar_probes,
    magic_squared_probe,
    magic_state,
    maximally_mixed_probe,
    operator_basis_probes,
    resolve_probe_token,
    single_basis_probe,
)
from switchtest.qmath import QuantumState, random_unitary, tensor


class TestEigendecomposition:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_reconstructs_every_basis_element(self, d):
        """U = sum_j lambda_j |v_j><v_j| with orthonormal v_j."""
        for u in heisenberg_weyl_basis(d):
            pairs = eigendecomposition(u)
            assert len(pairs) == d
            recon = sum(lam * np.outer(s.vector, s.vector.conj()) for lam, s in pairs)
            np.testing.assert_allclose(recon, u.matrix, atol=1e-10)
            vecs = np.column_stack([s.vector for _, s in pairs])
            np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(d), atol=1e-10)

    def test_eigenvalues_on_unit_circle(self):
        for lam, _ in eigendecomposition(random_unitary(4, 5)):
            assert abs(abs(lam) - 1.0) < 1e-10

    def test_phase_convention_first_nonzero_positive(self):
        for lam, s in eigendecomposition(random_unitary(3, 6)):
            lead = s.vector[np.flatnonzero(np.abs(s.vector) > 1e-12)[0]]
            assert lead.imag == pytest.approx(0.0, abs=1e-12)
            assert lead.real > 0

    def test_diagonal_operator_gives_computational_basis(self):
        pairs = eigendecomposition(clock(3))
        vecs = sorted(int(np.argmax(np.abs(s.vector))) for _, s in pairs)
        assert vecs == [0, 1, 2]
        for _, s in pairs:
            k = int(np.argmax(np.abs(s.vector)))
            np.testing.assert_allclose(s.vector[k], 1.0, atol=1e-12)


class TestMagicState:
    def test_flatten_equals_operator_sum(self):
        """The mixture is (1/d^3) sum_i U_i; flattening the eigenpair
        expansion must rebuild exactly that matrix."""
        for d in (2, 3):
            mix = magic_state(d)
            direct = sum(u.matrix for u in heisenberg_weyl_basis(d)) / d**3
            np.testing.assert_allclose(mix.flatten(), direct, atol=1e-12)

    def test_qubit_weights(self):
        """At d = 2 the eight weights are the eigenvalues of I, X, Z, XZ
        over 8: three (+1/8, -1/8) pairs would be wrong because XZ has
        eigenvalues +-i, so the multiset is {1,1,1,1,-1,-1,i,-i}/8."""
        weights = sorted(
            (round(w.real, 12), round(w.imag, 12)) for w, _ in magic_state(2).components
        )
        expected = sorted(
            [(0.125, 0.0)] * 4 + [(-0.125, 0.0)] * 2 + [(0.0, 0.125), (0.0, -0.125)]
        )
        assert weights == expected

    @pytest.mark.parametrize("d", [2, 3])
    def test_weight_sum_is_inverse_dim_squared(self, d):
        """Only the identity element has nonzero trace, so the weights
        sum to tr(I)/d^3 = 1/d^2."""
        total = magic_state(d).weight_sum
        assert total.real == pytest.approx(1.0 / d**2, abs=1e-12)
        assert total.imag == pytest.approx(0.0, abs=1e-12)

    def test_component_count(self):
        assert len(magic_state(2).components) == 8
        assert len(magic_state(3).components) == 27

    def test_not_convertible_to_density(self):
        with pytest.raises(InvalidState):
            magic_state(2).to_density()

    def test_squared_probe_doubles_components(self):
        mix = magic_state(2)
        doubled = magic_squared_probe(mix)
        assert doubled.dim == 4
        assert len(doubled.components) == len(mix.components)
        for (w1, s1), (w2, s2) in zip(mix.components, doubled.components):
            assert w1 == w2
            np.testing.assert_allclose(
                s2.vector, double_register(s1).vector, atol=1e-15
            )


class TestAffineStateMix:
    def test_scaled_multiplies_weights(self):
        mix = AffineStateMix(
            dim=2,
            components=((0.5, QuantumState.basis(2, 0)), (0.5, QuantumState.basis(2, 1))),
        )
        scaled = mix.scaled(2.0)
        assert scaled.weight_sum == pytest.approx(2.0)
        np.testing.assert_allclose(scaled.flatten(), np.eye(2), atol=0)

    def test_physical_mix_converts_to_density(self):
        mix = AffineStateMix(
            dim=2,
            components=((0.25, QuantumState.basis(2, 0)), (0.75, QuantumState.basis(2, 1))),
        )
        state = mix.to_density()
        np.testing.assert_allclose(state.rho, np.diag([0.25, 0.75]), atol=0)

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(EmptyInput):
            AffineStateMix(dim=2, components=())
        with pytest.raises(DimensionMismatch):
            AffineStateMix(dim=2, components=((1.0, QuantumState.basis(3, 0)),))


class TestEntangledProbe:
    def test_matrix_form(self):
        rho = entangled_probe(2).rho
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = 0.5
        np.testing.assert_allclose(rho, expected, atol=0)

    def test_equals_doubled_maximally_mixed(self):
        """(1/d) sum |xx><xx| is CX (I/d x |0><0|) CX^dag."""
        from switchtest.gates import generalized_cx

        d = 3
        cx = generalized_cx(d).matrix
        e0 = np.zeros((d, d))
        e0[0, 0] = 1.0
        doubled = cx @ tensor(np.eye(d) / d, e0) @ cx.conj().T
        np.testing.assert_allclose(entangled_probe(d).rho, doubled, atol=1e-14)

    def test_register_structure(self):
        probe = entangled_probe(4)
        assert probe.dims == (4, 4)
        assert not probe.is_pure


class TestProbeFamilies:
    def test_basis_probes(self):
        ps = basis_probes(3)
        assert ps.label == "basis" and len(ps) == 3
        for k, s in enumerate(ps.states):
            assert s.vector[k] == 1.0

    def test_haar_probes_deterministic(self):
        a = haar_probes(2, 5, 9)
        b = haar_probes(2, 5, 9)
        assert len(a) == 5
        for s, t in zip(a.states, b.states):
            assert np.array_equal(s.vector, t.vector)

    def test_operator_basis_probes_are_eigenvectors(self):
        d = 2
        ps = operator_basis_probes(d)
        assert len(ps) == d**3
        # states arrive grouped per element, d eigenvectors each
        for i, u in enumerate(heisenberg_weyl_basis(d)):
            for s in ps.states[i * d : (i + 1) * d]:
                out = u.matrix @ s.vector
                lam = np.vdot(s.vector, out)
                np.testing.assert_allclose(out, lam * s.vector, atol=1e-10)

    def test_probe_set_validation(self):
        with pytest.raises(EmptyInput):
            ProbeSet("empty")
        with pytest.raises(DimensionMismatch):
            ProbeSet("bad", (QuantumState.basis(2, 0), QuantumState.basis(3, 0)))


class TestResolveProbeToken:
    def test_standard_tokens(self):
        assert len(resolve_probe_token("basis", 3, 0)) == 3
        assert resolve_probe_token("basis:1", 3, 0).states[0].vector[1] == 1.0
        assert resolve_probe_token("mixed", 2, 0).states[0].is_pure is False
        assert len(resolve_probe_token("haar:4", 2, 7)) == 4
        assert resolve_probe_token("entangled", 2, 0).states[0].dims == (2, 2)
        assert len(resolve_probe_token("operator_basis", 2, 0)) == 8

    def test_magic_token_yields_mix(self):
        ps = resolve_probe_token("magic", 2, 0)
        assert ps.mix is not None
        assert ps.mix.dim == 4
        assert len(ps.states) == 0

    def test_single_basis_matches_helper(self):
        a = resolve_probe_token("basis:2", 4, 0)
        b = single_basis_probe(4, 2)
        assert np.array_equal(a.states[0].vector, b.states[0].vector)

    def test_bad_tokens_rejected(self):
        for token in ("nope", "haar:0", "haar:x", "basis:9", "basis:-1"):
            with pytest.raises(BadParameter):
                resolve_probe_token(token, 3, 0)


class TestMaximallyMixedProbe:
    def test_state(self):
        ps = maximally_mixed_probe(4)
        np.testing.assert_allclose(ps.states[0].rho, np.eye(4) / 4, atol=0)
