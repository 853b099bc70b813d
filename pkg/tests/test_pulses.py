import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadnmr import (ForbiddenTransitionError, SpinSystem,
                     gate_fidelity_global_phase, gradient_crush, hard_pulse,
                     is_unitary, matrices_close, quad_evolution, refocus_block,
                     selective_pulse, selective_z_closed_form, selective_z_pulse,
                     shaped_pulse, subspace_operators)
from quadnmr.system import cphase_delay_s

from conftest import HARD_90_MINUS_Y

SQRT3 = np.sqrt(3.0)
PI = np.pi


class TestHardPulse:
    def test_minus_y_90_entrywise(self, sys32):
        assert matrices_close(hard_pulse(sys32, "-y", PI / 2), HARD_90_MINUS_Y,
                              atol=1e-10)

    def test_minus_y_90_on_top_level(self, sys32):
        psi = hard_pulse(sys32, "-y", PI / 2) @ np.array([1, 0, 0, 0], dtype=complex)
        expected = np.array([1, -SQRT3, SQRT3, -1]) / (2 * np.sqrt(2))
        assert matrices_close(psi, expected, atol=1e-10)

    def test_zero_angle_identity(self, sys32):
        assert matrices_close(hard_pulse(sys32, "x", 0.0), np.eye(4))

    def test_square_is_product(self, sys32):
        u = hard_pulse(sys32, "-y", PI / 2)
        assert matrices_close(hard_pulse(sys32, "-y", PI), u @ u, atol=1e-12)

    def test_z_axis_rejected(self, sys32):
        with pytest.raises(ValueError):
            hard_pulse(sys32, "z", PI)

    def test_infinite_angle_rejected(self, sys32):
        with pytest.raises(ValueError):
            hard_pulse(sys32, "x", np.inf)


class TestSelectivePulse:
    def test_work_qubit_flip_composition(self, sys32):
        u2 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                      dtype=complex)
        prod = selective_pulse(sys32, "00-01", "x", PI / SQRT3) \
            @ selective_pulse(sys32, "10-11", "x", PI / SQRT3)
        assert matrices_close(prod, 1j * u2, atol=1e-12)

    def test_half_cnot_block(self, sys32):
        u = selective_pulse(sys32, "10-11", "-y", PI / SQRT3)
        expected = np.eye(4, dtype=complex)
        expected[2, 2] = expected[3, 3] = 0
        expected[2, 3], expected[3, 2] = 1, -1
        assert matrices_close(u, expected, atol=1e-12)

    def test_outer_nutation_rate(self, sys32):
        theta = 0.613
        u = selective_pulse(sys32, "00-01", "x", theta)
        assert u[0, 0] == pytest.approx(np.cos(SQRT3 * theta / 2))
        assert u[0, 1] == pytest.approx(1j * np.sin(SQRT3 * theta / 2))

    def test_central_angle_is_bloch_angle(self, sys32):
        u = selective_pulse(sys32, "01-11", "y", PI)
        rho = np.diag([0, 2.0, 5.0, 0]).astype(complex)
        swapped = u @ rho @ u.conj().T
        assert matrices_close(swapped, np.diag([0, 5.0, 2.0, 0]), atol=1e-12)

    def test_zero_angle_identity(self, sys32):
        assert matrices_close(selective_pulse(sys32, "01-11", "x", 0.0), np.eye(4))

    def test_identity_outside_block(self, sys32, rng):
        for _ in range(10):
            u = selective_pulse(sys32, "00-01", "x", rng.uniform(-PI, PI))
            for idx in (2, 3):
                basis = np.zeros(4, dtype=complex)
                basis[idx] = 1.0
                assert matrices_close(u @ basis, basis, atol=1e-12)

    def test_forbidden_transition_rejected(self, sys32):
        with pytest.raises(ForbiddenTransitionError):
            selective_pulse(sys32, "00-10", "x", PI)


class TestSelectiveZPulse:
    def test_central_quarter_turn(self, sys32):
        u = selective_z_pulse(sys32, "01-11", PI / 2)
        expected = np.diag([1, np.exp(-1j * PI / 2), np.exp(1j * PI / 2), 1])
        assert matrices_close(u, expected, atol=1e-10)

    def test_cascade_controlled_phase(self, sys32):
        casc = selective_z_pulse(sys32, "00-01", PI / 4) \
            @ selective_z_pulse(sys32, "10-11", PI / 4) \
            @ selective_z_pulse(sys32, "01-11", PI / 2)
        expected = np.exp(-1j * PI / 4) * np.diag([1, 1, -1, 1])
        assert matrices_close(casc, expected, atol=1e-10)

    def test_zero_angle_identity(self, sys32):
        assert matrices_close(selective_z_pulse(sys32, "10-11", 0.0), np.eye(4),
                              atol=1e-12)

    def test_composite_matches_closed_form_100_angles(self, sys32, rng):
        for trans in ("00-01", "01-11", "10-11"):
            for phi in rng.uniform(-2 * PI, 2 * PI, size=100):
                assert matrices_close(selective_z_pulse(sys32, trans, phi),
                                      selective_z_closed_form(sys32, trans, phi),
                                      atol=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(phi=st.floats(-10, 10),
           trans=st.sampled_from(["00-01", "01-11", "10-11"]))
    def test_composite_matches_closed_form_property(self, phi, trans):
        sys = SpinSystem()
        assert matrices_close(selective_z_pulse(sys, trans, phi),
                              selective_z_closed_form(sys, trans, phi), atol=1e-10)

    def test_forbidden_rejected(self, sys32):
        with pytest.raises(ForbiddenTransitionError):
            selective_z_pulse(sys32, "00-10", PI)


class TestSubspaceOperators:
    def test_central_pair_entries(self, sys32):
        sub = subspace_operators(sys32, "01-11")
        ix = np.zeros((4, 4), dtype=complex)
        ix[1, 2] = ix[2, 1] = 1.0
        iy = np.zeros((4, 4), dtype=complex)
        iy[1, 2], iy[2, 1] = -1j, 1j
        assert matrices_close(sub.ix_sub, ix, atol=1e-12)
        assert matrices_close(sub.iy_sub, iy, atol=1e-12)

    def test_zero_outside_block(self, sys32):
        sub = subspace_operators(sys32, "00-01")
        assert np.max(np.abs(sub.ix_sub[2:, :])) == 0
        assert np.max(np.abs(sub.ix_sub[:, 2:])) == 0


class TestShapedPulse:
    def test_short_duration_approaches_ideal(self, sys32):
        ideal = selective_pulse(sys32, "10-11", "-y", PI / SQRT3)
        u = shaped_pulse(sys32, "10-11", "-y", PI / SQRT3, 1e-7, 64)
        assert gate_fidelity_global_phase(ideal, u) >= 0.999

    def test_zero_amplitude_is_free_evolution(self, sys32):
        duration = 37e-6
        u = shaped_pulse(sys32, "10-11", "x", 0.0, duration, 128)
        assert matrices_close(u, quad_evolution(sys32, duration), atol=1e-10)

    def test_full_phase_period_matches_ideal(self, sys32):
        duration = 1.0 / (3.0 * sys32.lambda_hz)
        ideal = selective_pulse(sys32, "10-11", "-y", PI / SQRT3)
        u = shaped_pulse(sys32, "10-11", "-y", PI / SQRT3, duration, 512)
        assert gate_fidelity_global_phase(ideal, u) >= 0.99

    def test_quarter_period_ruins_fidelity(self, sys32):
        duration = 1.25 / (3.0 * sys32.lambda_hz)
        ideal = selective_pulse(sys32, "10-11", "-y", PI / SQRT3)
        u = shaped_pulse(sys32, "10-11", "-y", PI / SQRT3, duration, 512)
        assert gate_fidelity_global_phase(ideal, u) < 0.5

    def test_slice_doubling_converged(self, sys32):
        duration = 1.0 / (3.0 * sys32.lambda_hz)
        u1 = shaped_pulse(sys32, "00-01", "x", PI / SQRT3, duration, 1024)
        u2 = shaped_pulse(sys32, "00-01", "x", PI / SQRT3, duration, 2048)
        assert np.max(np.abs(u1 - u2)) < 1e-6

    def test_negative_angle_flips_axis(self, sys32):
        duration = 1.0 / (3.0 * sys32.lambda_hz)
        a = shaped_pulse(sys32, "01-11", "x", -PI / 2, duration, 128)
        b = shaped_pulse(sys32, "01-11", "-x", PI / 2, duration, 128)
        assert matrices_close(a, b, atol=1e-12)

    def test_bad_arguments(self, sys32):
        with pytest.raises(ValueError):
            shaped_pulse(sys32, "01-11", "x", PI, 0.0, 128)
        with pytest.raises(ValueError):
            shaped_pulse(sys32, "01-11", "x", PI, 1e-4, 32)


class TestRefocusBlock:
    def test_offset_independent(self):
        tau = 43e-6
        references = []
        for offset in (0.0, 100.0, 5000.0):
            sys = SpinSystem.from_splitting(16_000.0, offset_hz=offset)
            references.append(refocus_block(sys, tau))
        assert matrices_close(references[0], references[1], atol=1e-9)
        assert matrices_close(references[0], references[2], atol=1e-9)

    def test_zero_delay_is_hard_pi(self, sys32):
        assert matrices_close(refocus_block(sys32, 0.0),
                              hard_pulse(sys32, "-y", PI), atol=1e-12)

    def test_equals_pi_times_quad_evolution(self, sys32):
        tau = cphase_delay_s(sys32)
        expected = hard_pulse(sys32, "-y", PI) @ quad_evolution(sys32, tau)
        assert matrices_close(refocus_block(sys32, tau), expected, atol=1e-10)


class TestGradientCrush:
    def test_kills_coherences_keeps_populations(self):
        p_i, p_j = 0.9, 0.1
        rho = np.array([[(p_i + p_j) / 2, (p_j - p_i) / 2],
                        [(p_j - p_i) / 2, (p_i + p_j) / 2]], dtype=complex)
        out = gradient_crush(rho)
        assert matrices_close(out, np.diag([(p_i + p_j) / 2] * 2), atol=1e-14)

    def test_diagonal_unchanged(self):
        rho = np.diag([1.5, -0.5, -0.5, -0.5]).astype(complex)
        assert matrices_close(gradient_crush(rho), rho)

    def test_trace_preserved_and_idempotent(self, rng):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = (a + a.conj().T) / 2
        out = gradient_crush(rho)
        assert np.trace(out) == pytest.approx(np.trace(rho).real)
        assert matrices_close(gradient_crush(out), out)


@settings(max_examples=60, deadline=None)
@given(axis=st.sampled_from(["x", "-x", "y", "-y"]), angle=st.floats(-10, 10),
       trans=st.sampled_from([None, "00-01", "01-11", "10-11"]))
def test_every_pulse_is_unitary(axis, angle, trans):
    sys = SpinSystem()
    if trans is None:
        u = hard_pulse(sys, axis, angle)
    else:
        u = selective_pulse(sys, trans, axis, angle)
    assert is_unitary(u, atol=1e-9)
