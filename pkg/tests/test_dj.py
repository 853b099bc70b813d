import numpy as np
import pytest

from quadnmr import (AmbiguousReadoutError, RelaxationParams, acquire,
                     classify_peaks, compile_unitary, conjugate, equilibrium_state,
                     gate_fidelity_global_phase, global_phase, hard_pulse,
                     ideal_state_after_oracle, matrices_close, oracle_class,
                     oracle_matrix, oracle_sequence, pseudopure_00, run_dj,
                     superposition_state)
from quadnmr.dj import ORACLE_IDS, ORACLE_PHASES, SEQUENCE_METHODS
from quadnmr.readout import Peak

SQRT3 = np.sqrt(3.0)
INV_2SQRT2 = 1.0 / (2.0 * np.sqrt(2.0))

# post-oracle wavefunctions in the (00, 01, 11, 10) basis
IDEAL_STATES = {
    "f1": np.array([1, -SQRT3, SQRT3, -1]) * INV_2SQRT2,
    "f2": np.array([-SQRT3, 1, -1, SQRT3]) * INV_2SQRT2,
    "f3": np.array([1, -SQRT3, -1, SQRT3]) * INV_2SQRT2,
    "f4": np.array([-SQRT3, 1, SQRT3, -1]) * INV_2SQRT2,
}


class TestOracleMatrices:
    def test_identity_oracle(self):
        assert matrices_close(oracle_matrix("f1"), np.eye(4))

    def test_lower_cnot_swaps_bottom_block(self):
        u3 = oracle_matrix("f3")
        assert matrices_close(u3[:2, :2], np.eye(2))
        assert matrices_close(u3[2:, 2:], np.array([[0, 1], [1, 0]]))

    @pytest.mark.parametrize("oracle_id", ORACLE_IDS)
    def test_all_are_permutations(self, oracle_id):
        u = oracle_matrix(oracle_id)
        assert np.array_equal(np.abs(u) ** 2, np.abs(u))     # 0/1 entries
        assert matrices_close(u @ u.conj().T, np.eye(4))

    def test_classes(self):
        assert oracle_class("f1") == oracle_class("f2") == "constant"
        assert oracle_class("f3") == oracle_class("f4") == "balanced"
        with pytest.raises(ValueError):
            oracle_class("f9")


class TestOracleSequences:
    @pytest.mark.parametrize("oracle_id", ORACLE_IDS)
    @pytest.mark.parametrize("method", SEQUENCE_METHODS)
    def test_compiles_to_target_with_asserted_phase(self, sys32, oracle_id, method):
        ir = oracle_sequence(oracle_id, method, sys32)
        compiled = compile_unitary(ir, sys32)
        target = oracle_matrix(oracle_id)
        assert gate_fidelity_global_phase(target, compiled) >= 1 - 1e-9
        assert global_phase(target, compiled) == pytest.approx(
            ORACLE_PHASES[oracle_id], abs=1e-9)
        assert matrices_close(compiled, ORACLE_PHASES[oracle_id] * target, atol=1e-9)

    def test_identity_oracle_needs_no_pulse(self, sys32):
        for method in SEQUENCE_METHODS:
            ir = oracle_sequence("f1", method, sys32)
            assert ir.events == ()
            assert matrices_close(compile_unitary(ir, sys32), np.eye(4))

    def test_work_flip_is_method_independent(self, sys32):
        a = oracle_sequence("f2", "selective-z", sys32)
        b = oracle_sequence("f2", "quad-evolution", sys32)
        assert a.events == b.events

    def test_lower_cnot_zcascade_matches_product_oracle(self, sys32):
        """Multiply literal factor matrices by hand and compare."""
        half_cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                              [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex)
        cascade = (np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4), 1, 1])
                   @ np.diag([1, 1, np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
                   @ np.diag([1, np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2), 1]))
        expected = half_cnot @ cascade
        ir = oracle_sequence("f3", "selective-z", sys32)
        assert matrices_close(compile_unitary(ir, sys32), expected, atol=1e-12)

    def test_bad_method_rejected(self, sys32):
        with pytest.raises(ValueError):
            oracle_sequence("f3", "telepathy", sys32)


class TestIdealStates:
    def test_superposition_state(self):
        assert matrices_close(superposition_state(), IDEAL_STATES["f1"], atol=1e-12)

    @pytest.mark.parametrize("oracle_id", ORACLE_IDS)
    def test_wavefunctions(self, oracle_id):
        psi = ideal_state_after_oracle(oracle_id)
        assert matrices_close(psi, IDEAL_STATES[oracle_id], atol=1e-12)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_density_sign_pattern(self):
        """Adjacent coherences: outer pair negative for every oracle, the
        central one negative for the constant pair, positive for the balanced."""
        for oracle_id in ORACLE_IDS:
            psi = ideal_state_after_oracle(oracle_id)
            sigma = 8.0 * np.outer(psi, psi.conj())
            assert sigma[0, 1].real < 0 and sigma[2, 3].real < 0
            central = sigma[1, 2].real
            assert (central < 0) == (oracle_class(oracle_id) == "constant")

    def test_lower_cnot_density_far_coherences(self):
        # frozen from the outer product of the f3 wavefunction: the two
        # double-quantum entries are -3 and -1 in the x8 normalization
        psi = ideal_state_after_oracle("f3")
        sigma = 8.0 * np.outer(psi, psi.conj())
        assert sigma[1, 3].real == pytest.approx(-3.0, abs=1e-12)
        assert sigma[0, 2].real == pytest.approx(-1.0, abs=1e-12)


class TestSimulatedPostOracleStates:
    @pytest.mark.parametrize("oracle_id", ORACLE_IDS)
    def test_traceless_parts_match_pure_state_pattern(self, sys32, oracle_id):
        rho = pseudopure_00(sys32)
        rho = conjugate(rho, hard_pulse(sys32, "-y", np.pi / 2))
        rho = conjugate(rho, oracle_matrix(oracle_id))
        psi = ideal_state_after_oracle(oracle_id)
        pure = np.outer(psi, psi.conj())
        # deviation state = 2 * (pure - 1/4): compare traceless parts
        expected = 2.0 * (pure - np.trace(pure) * np.eye(4) / 4.0)
        traceless = rho - np.trace(rho) * np.eye(4) / 4.0
        assert matrices_close(traceless, expected, atol=1e-10)


class TestClassifier:
    def _peaks(self, a, b, c):
        return [Peak("00-01", 16e3, a, int(np.sign(a)) or 1),
                Peak("01-11", 0.0, b, int(np.sign(b)) or 1),
                Peak("11-10", -16e3, c, int(np.sign(c)) or 1)]

    def test_same_signs_constant(self):
        assert classify_peaks(self._peaks(-1.0, -2.0, -1.0)) == "constant"

    def test_central_flip_balanced(self):
        assert classify_peaks(self._peaks(-1.0, 2.0, -1.0)) == "balanced"

    def test_scale_invariance(self):
        for scale in (1e-6, 1.0, 1e6):
            assert classify_peaks(self._peaks(-scale, 2 * scale, -scale)) == "balanced"

    def test_degenerate_peak_raises(self):
        with pytest.raises(AmbiguousReadoutError):
            classify_peaks(self._peaks(-1.0, 1e-9, -1.0))

    def test_disagreeing_outer_peaks_raise(self):
        with pytest.raises(AmbiguousReadoutError):
            classify_peaks(self._peaks(-1.0, 1.0, 1.0))


class TestRunDJ:
    @pytest.mark.parametrize("oracle_id", ORACLE_IDS)
    @pytest.mark.parametrize("method", ("ideal-matrix",) + SEQUENCE_METHODS)
    def test_ideal_runs_classify_correctly(self, sys32, oracle_id, method):
        outcome = run_dj(oracle_id, sys32, method=method)
        assert outcome.classification == oracle_class(oracle_id)

    def test_methods_agree(self, sys32):
        outcomes = [run_dj("f4", sys32, method=m).classification
                    for m in ("ideal-matrix", "selective-z", "quad-evolution")]
        assert set(outcomes) == {"balanced"}

    def test_relaxation_keeps_classification(self, sys32):
        relax = RelaxationParams()
        for oracle_id in ORACLE_IDS:
            outcome = run_dj(oracle_id, sys32, method="quad-evolution", relax=relax)
            assert outcome.classification == oracle_class(oracle_id)

    def test_relaxation_reduces_outer_peaks(self, sys32):
        for method in ("ideal-matrix", "quad-evolution"):
            ideal = run_dj("f3", sys32, method=method)
            relaxed = run_dj("f3", sys32, method=method, relax=RelaxationParams())
            for k in (0, 2):
                assert abs(relaxed.peak_signs[k]) < abs(ideal.peak_signs[k])

    def test_shaped_pulse_run(self, sys32):
        outcome = run_dj("f3", sys32, method="quad-evolution", shaped_pulses=True)
        assert outcome.classification == "balanced"

    def test_classification_independent_of_state_scale(self, sys32):
        base = run_dj("f2", sys32, method="selective-z")
        scaled = pseudopure_00(sys32, 17.0 * equilibrium_state(sys32))
        rho = conjugate(scaled, hard_pulse(sys32, "-y", np.pi / 2))
        rho = conjugate(rho, oracle_matrix("f2"))
        _, spec = acquire(rho, sys32)
        assert classify_peaks(spec.peaks) == base.classification

    def test_invalid_inputs(self, sys32):
        with pytest.raises(ValueError):
            run_dj("f9", sys32)
        with pytest.raises(ValueError):
            run_dj("f1", sys32, method="astral")
