import numpy as np
import pytest

from nyqmodes import (
    EigenPair,
    GridError,
    Scheme,
    SechFamily,
    assemble,
    count_localized,
    count_sign_changes,
    demodulate,
    make_grid,
    nyquist_ceiling,
    tail_mass,
    top_k,
)


def _pair(vec, lam=500.0):
    v = np.asarray(vec, dtype=float)
    v = v / np.linalg.norm(v)
    return EigenPair(eigenvalue=lam, vector=v, residual=0.0, rank_from_top=1)


class TestDemodulate:
    def test_carrier_stripping_recovers_envelope(self):
        g = make_grid(-16.0, 32.0, 0.1)
        phi = np.exp(-0.5 * g.x**2)  # smooth positive envelope
        signs = np.where(np.arange(g.N) % 2 == 0, 1.0, -1.0)
        ana = demodulate(_pair(signs * phi), g)
        rec = ana.envelope_signed / ana.envelope_signed.max()
        assert np.abs(rec - phi / phi.max()).max() < 1e-12
        assert np.abs(ana.envelope_abs - phi / phi.max()).max() < 1e-12

    def test_signed_envelope_orientation(self):
        g = make_grid(-16.0, 32.0, 0.1)
        phi = np.exp(-0.5 * g.x**2)
        signs = np.where(np.arange(g.N) % 2 == 0, 1.0, -1.0)
        # flipping the eigenvector must not flip the reported envelope
        a1 = demodulate(_pair(signs * phi), g)
        a2 = demodulate(_pair(-signs * phi), g)
        assert np.array_equal(a1.envelope_signed, a2.envelope_signed)
        assert a1.envelope_signed[np.argmax(np.abs(a1.envelope_signed))] > 0

    def test_delta_lambda_measured_from_ceiling(self):
        g = make_grid(-16.0, 32.0, 0.1)
        assert nyquist_ceiling(g) == pytest.approx(400.0, abs=1e-10)
        ana = demodulate(_pair(np.ones(g.N), lam=401.3), g)
        assert ana.delta_lambda == pytest.approx(1.3, abs=1e-10)

    def test_odd_grid_rejected(self):
        g = make_grid(0.0, 3.0, 1.0)  # N=3
        with pytest.raises(GridError):
            demodulate(_pair(np.ones(3)), g)

    def test_positive_delta_with_small_tail_is_localized(self):
        g = make_grid(-16.0, 32.0, 0.1)
        phi = np.exp(-0.5 * g.x**2)
        signs = np.where(np.arange(g.N) % 2 == 0, 1.0, -1.0)
        ana = demodulate(_pair(signs * phi, lam=401.0), g)
        assert ana.tail_mass < 1e-10
        assert ana.localized

    def test_below_ceiling_never_localized(self):
        # concentrated envelope but eigenvalue under 4/h^2: extended by definition
        g = make_grid(-16.0, 32.0, 0.1)
        phi = np.exp(-0.5 * g.x**2)
        signs = np.where(np.arange(g.N) % 2 == 0, 1.0, -1.0)
        ana = demodulate(_pair(signs * phi, lam=399.0), g)
        assert ana.tail_mass < 1e-10
        assert not ana.localized


class TestTailMass:
    def test_point_mass_at_center(self):
        g = make_grid(-16.0, 32.0, 0.1)
        env = np.zeros(g.N)
        env[37] = 1.0
        assert tail_mass(env, g) == 0.0

    def test_uniform_mass_is_quarter(self):
        # continuum value 0.25; discrete boundary samples shift it by O(1/N)
        g = make_grid(-16.0, 32.0, 0.1)
        assert abs(tail_mass(np.ones(g.N), g) - 0.25) <= 2.0 / g.N

    def test_translation_invariance(self):
        # compact envelope: tail samples carry ~no mass, so the sub-sample
        # wobble of the recentered threshold cannot move the result
        g = make_grid(-16.0, 32.0, 0.1)
        env = np.exp(-0.25 * g.x**2)
        base = tail_mass(env, g)
        for shift in (13, 160, 291):
            assert tail_mass(np.roll(env, shift), g) == pytest.approx(base, abs=1e-12)

    def test_translation_sensitivity_bounded_by_boundary_sample(self):
        # with a pedestal, shifting can flip samples across the sharp 0.375 L
        # threshold; the movement is bounded by a boundary sample's own mass
        g = make_grid(-16.0, 32.0, 0.1)
        env = np.exp(-0.25 * g.x**2) + 0.01
        p_boundary = 0.01**2 / float(env @ env)
        base = tail_mass(env, g)
        for shift in (13, 160, 291):
            moved = tail_mass(np.roll(env, shift), g)
            assert abs(moved - base) <= 2 * p_boundary

    def test_seam_straddling_blob(self):
        # mass concentrated across the periodic boundary still reads as compact
        g = make_grid(-16.0, 32.0, 0.1)
        d = np.minimum(np.abs(g.x - g.x_min), g.L - np.abs(g.x - g.x_min))
        env = np.exp(-(d**2))
        assert tail_mass(env, g) < 1e-6

    def test_zero_envelope_rejected(self):
        g = make_grid(-16.0, 32.0, 0.1)
        with pytest.raises(ValueError):
            tail_mass(np.zeros(g.N), g)

    def test_wrong_length_rejected(self):
        g = make_grid(-16.0, 32.0, 0.1)
        with pytest.raises(ValueError):
            tail_mass(np.ones(7), g)


class TestPipelineClassification:
    """Frozen values from the reference configuration family."""

    def test_repulsive_default_counts_four(self, default_full, default_grid):
        assert count_localized(default_full, default_grid) == 4

    def test_repulsive_tail_profile(self, default_analyses):
        tails = [a.tail_mass for a in default_analyses[:5]]
        assert tails[0] < 1e-12
        assert tails[3] < 2e-4
        assert tails[4] > 0.01  # fifth mode: extended

    def test_attractive_modes_expelled_not_localized(self, default_grid):
        # the attractive case concentrates its top envelopes at the seam
        # (small tails) yet every eigenvalue sits below the ceiling, so the
        # classification must come out extended for all of them
        op = assemble(Scheme.CENTRAL, SechFamily(A=-3.0, w=0.5), default_grid)
        sl = top_k(op, 5)
        for pair in sl.pairs:
            ana = demodulate(pair, default_grid)
            assert ana.delta_lambda < 0.0
            assert not ana.localized
        assert demodulate(sl[0], default_grid).tail_mass < 1e-4
        assert count_localized(sl, default_grid) == 0

    def test_free_case_extended(self, default_grid):
        op = assemble(Scheme.CENTRAL, SechFamily(A=0.0, w=0.5), default_grid)
        sl = top_k(op, 2)
        ana = demodulate(sl[0], default_grid)
        assert ana.pair.eigenvalue == pytest.approx(400.0, abs=1e-9)
        assert ana.tail_mass == pytest.approx(0.25, abs=2.0 / default_grid.N)
        assert count_localized(sl, default_grid) == 0

    def test_count_stops_at_first_extended(self, default_grid):
        # A=6 binds six envelopes; the seventh is extended and ends the run
        op = assemble(Scheme.CENTRAL, SechFamily(A=6.0, w=0.5), default_grid)
        sl = top_k(op, 8)
        assert count_localized(sl, default_grid) == 6


class TestCountSignChanges:
    def test_plain_alternation(self):
        assert count_sign_changes(np.array([1.0, -1.0, 1.0])) == 2

    def test_small_tail_noise_ignored(self):
        assert count_sign_changes(np.array([1.0, 1e-9, -1.0])) == 1
        assert count_sign_changes(np.array([1.0, -1e-9, 1.0])) == 0

    def test_all_zero(self):
        assert count_sign_changes(np.zeros(5)) == 0

    def test_no_wraparound(self):
        assert count_sign_changes(np.array([-1.0, 1.0, 1.0, 1.0])) == 1
