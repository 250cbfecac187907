"""Adiabatic preparation: interpolation family, split steps, sweep fidelity."""
import numpy as np
import pytest

from molphase import asp, molham, qcore
from molphase.errors import DegeneracyError, ValidationError


def sigma_x_target():
    return molham.MolecularHamiltonian(qcore.SIGMA_X, label="sigma_x")


class TestInterpolatedHamiltonian:
    def test_endpoints(self, h2):
        np.testing.assert_allclose(asp.interpolated_hamiltonian(h2, 0.0), qcore.SIGMA_X, atol=0)
        np.testing.assert_allclose(asp.interpolated_hamiltonian(h2, 1.0), h2.matrix, atol=0)

    def test_midpoint_elementwise_average(self, h2):
        expected = np.array([[-0.9155, 0.59065], [0.59065, -0.12685]])
        np.testing.assert_allclose(asp.interpolated_hamiltonian(h2, 0.5), expected, atol=1e-15)

    @pytest.mark.parametrize("s", [-0.1, 1.1])
    def test_range_validation(self, h2, s):
        with pytest.raises(ValidationError):
            asp.interpolated_hamiltonian(h2, s)


class TestTrotterStep:
    def test_endpoint_pure_sigma_x(self, h2):
        delta = 0.7
        got = asp.trotter_step(h2, 0.0, delta)
        np.testing.assert_allclose(got, qcore.expm_herm(qcore.SIGMA_X, delta), atol=1e-12)

    def test_endpoint_pure_target(self, h2):
        delta = 0.7
        got = asp.trotter_step(h2, 1.0, delta)
        np.testing.assert_allclose(got, qcore.expm_herm(h2.matrix, delta), atol=1e-12)

    def test_third_order_error_scaling(self, h2):
        # O(delta^3) per step: halving delta cuts the error by ~8
        for delta in (0.4, 0.2, 0.1):
            exact = lambda d: qcore.expm_herm(asp.interpolated_hamiltonian(h2, 0.5), d)
            err = np.abs(asp.trotter_step(h2, 0.5, delta) - exact(delta)).max()
            err_half = np.abs(asp.trotter_step(h2, 0.5, delta / 2) - exact(delta / 2)).max()
            assert 6.0 <= err / err_half <= 10.0

    def test_unitary(self, h2):
        u = asp.trotter_step(h2, 0.3, 1.7)
        assert np.abs(u.conj().T @ u - np.eye(2)).max() <= 1e-12

    def test_validation(self, h2):
        with pytest.raises(ValidationError):
            asp.trotter_step(h2, 0.5, 0.0)
        with pytest.raises(ValidationError):
            asp.trotter_step(h2, 1.5, 0.1)


class TestRunASP:
    def test_stationary_when_target_is_sigma_x(self):
        schedule = asp.AdiabaticSchedule(steps=6, total_time=5.0, target=sigma_x_target())
        result = asp.run_asp(schedule)
        assert result.fidelity == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(result.per_step_fidelities, 1.0, atol=1e-12)

    def test_dense_long_sweep_reaches_ground_state(self, h2):
        result = asp.run_asp(asp.AdiabaticSchedule(steps=200, total_time=50.0, target=h2))
        assert result.fidelity >= 0.999

    def test_six_step_scan_reaches_high_fidelity(self, h2):
        pairs = asp.scan_total_time(h2, 6, np.arange(1.0, 30.0 + 1e-9, 0.5))
        best = max(f for _, f in pairs)
        assert best >= 0.99

    def test_result_shape_invariants(self, h2):
        schedule = asp.AdiabaticSchedule(steps=6, total_time=9.5, target=h2)
        result = asp.run_asp(schedule)
        assert len(result.per_step_fidelities) == 6
        assert np.all((0.0 <= result.per_step_fidelities) & (result.per_step_fidelities <= 1.0))
        assert result.fidelity == result.per_step_fidelities[-1]

    def test_schedule_endpoints(self, h2):
        sched = asp.AdiabaticSchedule(steps=6, total_time=9.5, target=h2)
        s = sched.s_values()
        assert s[0] == 0.0
        assert s[-1] == 1.0
        assert asp.AdiabaticSchedule(steps=1, total_time=1.0, target=h2).s_values()[0] == 1.0

    @pytest.mark.parametrize("steps,total_time", [(1, 0.3), (6, 9.5), (17, 12.3), (200, 50.0)])
    def test_total_evolution_is_unitary(self, h2, steps, total_time):
        schedule = asp.AdiabaticSchedule(steps=steps, total_time=total_time, target=h2)
        u = np.eye(2, dtype=complex)
        for s_m in schedule.s_values():
            u = asp.trotter_step(h2, s_m, schedule.step_duration) @ u
        assert np.abs(u.conj().T @ u - np.eye(2)).max() <= 1e-9

    def test_monotone_refinement(self, h2):
        coarse = asp.run_asp(asp.AdiabaticSchedule(steps=6, total_time=50.0, target=h2))
        fine = asp.run_asp(asp.AdiabaticSchedule(steps=200, total_time=50.0, target=h2))
        assert fine.fidelity >= coarse.fidelity - 1e-9

    def test_fidelity_invariant_under_reference_global_phase(self, h2):
        result = asp.run_asp(asp.AdiabaticSchedule(steps=6, total_time=9.5, target=h2))
        ground = molham.spectrum(h2).ground_state
        for phase in (0.0, 1.1, np.pi):
            rotated = np.exp(1j * phase) * ground
            fid = abs(np.vdot(rotated, result.final_state)) ** 2
            assert fid == pytest.approx(result.fidelity, abs=1e-12)

    def test_degenerate_path_rejected(self):
        # (1-s) sigma_x - s sigma_x closes the gap exactly at s = 1/2
        target = molham.MolecularHamiltonian(-qcore.SIGMA_X, label="minus_sx")
        schedule = asp.AdiabaticSchedule(steps=3, total_time=3.0, target=target)
        with pytest.raises(DegeneracyError, match="s = 0.5"):
            asp.run_asp(schedule)

    def test_schedule_validation(self, h2):
        with pytest.raises(ValidationError):
            asp.AdiabaticSchedule(steps=0, total_time=1.0, target=h2)
        with pytest.raises(ValidationError):
            asp.AdiabaticSchedule(steps=5, total_time=0.0, target=h2)


class TestScanTotalTime:
    def test_output_length_matches_grid(self, h2):
        pairs = asp.scan_total_time(h2, 6, [1.0, 2.0, 3.0])
        assert len(pairs) == 3
        assert [t for t, _ in pairs] == [1.0, 2.0, 3.0]

    def test_single_point_dense(self, h2):
        pairs = asp.scan_total_time(h2, 200, [50.0])
        assert len(pairs) == 1
        assert pairs[0][1] >= 0.999

    def test_sigma_x_all_times(self):
        pairs = asp.scan_total_time(sigma_x_target(), 4, [0.5, 5.0, 20.0])
        assert all(f == pytest.approx(1.0, abs=1e-12) for _, f in pairs)

    def test_grid_validation(self, h2):
        with pytest.raises(ValidationError):
            asp.scan_total_time(h2, 6, [])
        with pytest.raises(ValidationError):
            asp.scan_total_time(h2, 6, [-1.0, 2.0])
        with pytest.raises(ValidationError):
            asp.scan_total_time(h2, 6, [2.0, 1.0])
