import numpy as np
import pytest

from nyqmodes import (
    ModeAnalysis,
    PotentialError,
    Scheme,
    SechFamily,
    Tabulated,
    assemble,
    compare,
    demodulate,
    make_grid,
    predict,
    sample_potential,
    top_k,
)


@pytest.fixture(scope="module")
def coarse():
    g = make_grid(-16.0, 32.0, 0.1)
    p = SechFamily(A=3.0, w=0.5)
    op = assemble(Scheme.CENTRAL, p, g)
    sl = top_k(op, 5)
    return g, p, [demodulate(q, g) for q in sl.pairs]


class TestPredict:
    def test_unrefined_prediction_equals_demodulated_spectrum(self, coarse):
        """At refine=1 the sign-flipped envelope operator and the demodulated
        coarse operator are the same matrix in a different gauge, so the
        predicted offsets must match the measured ones to solver precision."""
        g, p, analyses = coarse
        pred = predict(p, g, refine=1)
        assert len(pred.bound_states) == 4
        for rank, state in enumerate(pred.bound_states, start=1):
            gap = abs(analyses[rank - 1].delta_lambda - state.delta_lambda_pred)
            assert gap < 1e-10

    def test_refined_reference_values(self, coarse):
        g, p, _ = coarse
        pred = predict(p, g, refine=4)
        expect = [2.4577, 1.5143, 0.8340, 0.3789]  # converged offsets
        assert len(pred.bound_states) == 4
        got = [s.delta_lambda_pred for s in pred.bound_states]
        assert np.abs(np.array(got) - expect).max() < 2e-3

    def test_bound_states_ordered_ground_first(self, coarse):
        g, p, _ = coarse
        pred = predict(p, g, refine=2)
        offsets = [s.delta_lambda_pred for s in pred.bound_states]
        assert offsets == sorted(offsets, reverse=True)
        assert [s.node_count for s in pred.bound_states] == [0, 1, 2, 3]

    def test_attractive_potential_has_no_bound_states(self, coarse):
        g, _, _ = coarse
        assert len(predict(SechFamily(A=-3.0, w=0.5), g, refine=2).bound_states) == 0

    def test_free_potential_has_no_bound_states(self, coarse):
        g, _, _ = coarse
        assert len(predict(SechFamily(A=0.0, w=0.5), g, refine=2).bound_states) == 0

    def test_memoized_for_analytic_potentials(self, coarse):
        g, _, _ = coarse
        a = predict(SechFamily(A=3.0, w=0.5), g, refine=2)
        b = predict(SechFamily(A=3.0, w=0.5), g, refine=2)
        assert a is b

    def test_tabulated_cannot_refine(self, coarse):
        g, p, _ = coarse
        tab = Tabulated(values=sample_potential(p, g), grid=g)
        with pytest.raises(PotentialError):
            predict(tab, g, refine=2)
        assert len(predict(tab, g, refine=1).bound_states) == 4

    @pytest.mark.parametrize("refine", [0, -1])
    def test_refine_validated(self, coarse, refine):
        g, p, _ = coarse
        with pytest.raises(ValueError):
            predict(p, g, refine=refine)


class TestCompare:
    def test_reference_agreement(self, coarse):
        g, p, analyses = coarse
        pred = predict(p, g, refine=4)
        for rank in range(1, 5):
            rep = compare(pred, analyses[rank - 1], rank)
            assert rep.delta_gap < 1e-3
            assert rep.correlation > 0.9999
            assert rep.node_count == rank - 1
            assert rep.nodes_match

    def test_alignment_handles_translated_envelopes(self, coarse):
        g, p, analyses = coarse
        pred = predict(p, g, refine=2)
        a = analyses[0]
        rolled = ModeAnalysis(
            pair=a.pair,
            envelope_signed=np.roll(a.envelope_signed, 57),
            envelope_abs=np.roll(a.envelope_abs, 57),
            delta_lambda=a.delta_lambda,
            tail_mass=a.tail_mass,
            localized=a.localized,
        )
        rep = compare(pred, rolled, 1)
        assert rep.correlation > 0.9999

    @pytest.mark.parametrize("rank", [0, 5, -1])
    def test_rank_range(self, coarse, rank):
        g, p, analyses = coarse
        pred = predict(p, g, refine=2)
        with pytest.raises(ValueError):
            compare(pred, analyses[0], rank)


class TestSelfConvergence:
    def test_refinement_settles(self, coarse):
        # refine 2 -> 4 movement is already tiny compared to the offsets
        g, p, _ = coarse
        p2 = predict(p, g, refine=2)
        p4 = predict(p, g, refine=4)
        moves = [
            abs(a.delta_lambda_pred - b.delta_lambda_pred)
            for a, b in zip(p2.bound_states, p4.bound_states)
        ]
        top = p4.bound_states[0].delta_lambda_pred
        assert max(moves) < 1e-3 * top
