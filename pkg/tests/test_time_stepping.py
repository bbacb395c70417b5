import logging

import numpy as np
import pytest

from exceptions.errors import StabilityError, TimeStepError, ValidationError
from solver.scheme import SchemeConfig
from solver.time_stepping import StepStats, advance_steps, advance_to, finish_stage, ssp_rk3_step
from tests.conftest import make_state


def _decay(rate):
    def operator(state):
        return -rate * state.interior(state.q)
    return operator


def _zero(state):
    return np.zeros_like(state.interior(state.q))


class Recorder:
    def __init__(self, times=None):
        self.times = times
        self.calls = []

    def __call__(self, time, state):
        self.calls.append(time)


class TestSspRk3:
    def test_linear_decay_matches_stability_polynomial(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0, 0.5, -0.25)
        z = 0.1
        out = ssp_rk3_step(state, small_grid, periodic_bc, scheme3, z, _decay(1.0))
        factor = 1.0 - z + z ** 2 / 2.0 - z ** 3 / 6.0
        np.testing.assert_allclose(out.water, factor, rtol=1e-14)
        np.testing.assert_allclose(out.momenta[1], -0.25 * factor, rtol=1e-14)

    def test_zero_step_is_identity(self, small_grid, periodic_bc, scheme3, rng):
        state = make_state(small_grid, periodic_bc, rng.uniform(1.0, 2.0, (8, 6)))
        out = ssp_rk3_step(state, small_grid, periodic_bc, scheme3, 0.0, _decay(3.0))
        np.testing.assert_allclose(out.q, state.q, rtol=1e-15)

    def test_negative_dt(self, small_grid, periodic_bc, scheme3):
        with pytest.raises(ValidationError):
            ssp_rk3_step(make_state(small_grid, periodic_bc, 1.0), small_grid, periodic_bc, scheme3, -0.1, _zero)


class TestFinishStage:
    def test_negative_water_is_clamped(self, small_grid, periodic_bc, scheme3, caplog):
        state = make_state(small_grid, periodic_bc, 1.0, 0.3, 0.2)
        state.water[2, 3] = -1e-3
        stats = StepStats()
        with caplog.at_level(logging.WARNING):
            out = finish_stage(state, small_grid, periodic_bc, scheme3, 2, stats)
        assert stats.clamps == 1
        assert out.water[2, 3] == 0.0
        assert out.momenta[0, 2, 3] == 0.0 and out.momenta[1, 2, 3] == 0.0
        assert "clamped 1" in caplog.text

    def test_non_finite_raises(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0)
        state.momenta[1, 4, 1] = np.nan
        with pytest.raises(StabilityError):
            finish_stage(state, small_grid, periodic_bc, scheme3, 3)

    def test_thin_film_momentum_regularised(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0, 0.3, 0.2)
        state.water[1, 1], state.momenta[0, 1, 1] = 1e-5, 0.4
        state.water[5, 4], state.momenta[1, 5, 4] = 5e-7, 0.1
        out = finish_stage(state, small_grid, periodic_bc, scheme3, 1)
        u = out.momenta[0, 1, 1] / out.water[1, 1]
        assert 0.0 < u <= 1.0 / scheme3.vel_eps
        assert out.momenta[1, 5, 4] == 0.0
        assert out.momenta[0, 2, 2] == 0.3 and out.momenta[1, 2, 2] == 0.2

    def test_halo_refilled(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0)
        state.water[0, 0] = 2.0
        out = finish_stage(state, small_grid, periodic_bc, scheme3, 1)
        assert out.q[0, small_grid.nx + small_grid.halo, small_grid.halo] == 2.0


class TestAdvance:
    def test_lands_on_observer_times(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0)
        scheduled = Recorder([0.05, 0.1])
        every = Recorder()
        final, log = advance_to(state, small_grid, periodic_bc, scheme3, 0.2, [scheduled, every], _zero)
        assert scheduled.calls == [0.05, 0.1]
        assert every.calls[0] == 0.0 and every.calls[-1] == 0.2
        assert len(every.calls) == len(log) + 1
        assert log[-1].time == 0.2
        assert any(rec.time == 0.05 for rec in log)

    def test_step_budget(self, small_grid, periodic_bc):
        cfg = SchemeConfig(max_steps=2)
        with pytest.raises(TimeStepError):
            advance_to(make_state(small_grid, periodic_bc, 1.0), small_grid, periodic_bc, cfg, 1.0, operator=_zero)

    def test_end_before_start(self, small_grid, periodic_bc, scheme3):
        with pytest.raises(ValidationError):
            advance_to(make_state(small_grid, periodic_bc, 1.0), small_grid, periodic_bc, scheme3, 0.5, t0=1.0)

    def test_zero_duration(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0)
        final, log = advance_to(state, small_grid, periodic_bc, scheme3, 0.0, operator=_zero)
        assert log == []
        np.testing.assert_array_equal(final.q, state.q)

    def test_input_field_untouched(self, small_grid, periodic_bc, scheme3):
        state = make_state(small_grid, periodic_bc, 1.0)
        before = state.q.copy()
        advance_steps(state, small_grid, periodic_bc, scheme3, 2, _decay(1.0))
        np.testing.assert_array_equal(state.q, before)

    def test_volume_conserved_with_flat_bottom(self, small_grid, periodic_bc, scheme3, rng):
        shape = (small_grid.nx, small_grid.ny)
        state = make_state(small_grid, periodic_bc, rng.uniform(1.0, 1.2, shape),
                           rng.normal(scale=0.05, size=shape), rng.normal(scale=0.05, size=shape))
        initial = state.total_volume(small_grid)
        _, log = advance_steps(state, small_grid, periodic_bc, scheme3, 5)
        assert [rec.step for rec in log] == [1, 2, 3, 4, 5]
        for rec in log:
            assert rec.volume == pytest.approx(initial, rel=1e-13)
            assert rec.clamps == 0
