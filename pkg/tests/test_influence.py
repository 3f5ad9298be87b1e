import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fashion_abm.influence import (KernelParams, ParameterRangeError, blend, fatigue_step, gov_feedback,
                                   peer_update, sm_feedback, sm_feedback_raw)

unit = st.floats(0.0, 1.0, allow_nan=False)
sus = st.floats(0.1, 0.9, allow_nan=False)


class TestPeerUpdate:
    def test_hand_evaluated_example(self):
        got = peer_update(0.4, 0.5, [(0.8, 0.6, 0.2)])
        assert got == pytest.approx(0.5 * 0.4 + 0.5 * (0.8 / 3 + 1.2 / 3), rel=1e-12)
        assert got == pytest.approx(0.5333, abs=5e-5)

    def test_tolerance_flip_worked_example(self):
        # friend at 0.9 is more than 0.2 away from 0.5: it is heard as 0.1
        behavior = 0.5
        got = peer_update(0.5, 1.0, [(0.9, behavior, 0.0)], tau=0.2)
        assert got == pytest.approx((1 - 0.9) / 3 + 2 * (1 - behavior) / 3, rel=1e-12)

    def test_within_tolerance_is_not_flipped(self):
        assert peer_update(0.5, 1.0, [(0.6, 0.3, 0.0)], tau=0.2) == pytest.approx(0.6 / 3 + 0.6 / 3)

    def test_only_less_susceptible_peers_count(self):
        assert peer_update(0.3, 0.4, [(0.9, 0.9, 0.4), (0.9, 0.9, 0.7)]) == 0.3
        assert peer_update(0.3, 0.4, [(0.9, 0.9, 0.4), (0.0, 0.0, 0.1)]) == pytest.approx(0.6 * 0.3)

    def test_no_peers(self):
        assert peer_update(0.42, 0.9, []) == 0.42

    @given(unit, sus, st.lists(st.tuples(unit, unit, sus), max_size=14),
           st.one_of(st.none(), st.floats(0.05, 0.5)))
    def test_bounded(self, x, s, peers, tau):
        assert 0.0 <= peer_update(x, s, peers, tau) <= 1.0

    @given(unit, sus, unit, st.integers(1, 14))
    def test_between_self_and_shared_peer_view(self, x, s, o, k):
        got = peer_update(x, s, [(o, o, 0.0)] * k)
        assert min(x, o) - 1e-12 <= got <= max(x, o) + 1e-12


class TestSocialMedia:
    @given(sus)
    def test_midpoint_is_fixed(self, s):
        assert sm_feedback(0.5, s, 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_caps(self):
        assert sm_feedback_raw(1.0, 0.5) == pytest.approx(3.625)
        assert sm_feedback(1.0, 0.5, 0.0) == 0.95
        assert sm_feedback_raw(0.0, 0.1) == pytest.approx(-0.125)
        assert sm_feedback(0.0, 0.1, 0.0) == 0.05

    def test_values_inside_unit_interval_pass_through(self):
        # raw 0.97 is left alone; only outputs above 1 are replaced
        x = 0.5 + (0.47 / 5.0) ** (1 / 3)
        assert sm_feedback(x, 0.1, 0.0) == pytest.approx(0.97)

    @given(unit, sus)
    def test_point_symmetry_before_capping(self, x, s):
        assert sm_feedback_raw(x, s) + sm_feedback_raw(1 - x, s) == pytest.approx(1.0, abs=1e-9)

    def test_bias_shifts_output(self):
        assert sm_feedback(0.5, 0.3, 0.2) == pytest.approx(0.7)

    def test_array_matches_scalar(self):
        x = np.linspace(0, 1, 41)
        s = np.linspace(0.1, 0.9, 41)
        assert sm_feedback(x, s, -0.15).tolist() == [sm_feedback(a, b, -0.15) for a, b in zip(x, s)]


class TestBlend:
    @given(unit, unit, st.floats(0.0, 10.0))
    def test_zero_susceptibility_is_identity(self, p, q, gamma):
        assert blend(p, q, 0.0, gamma) == p

    @given(unit, unit, st.floats(0.0, 10.0))
    def test_fixed_point(self, p, s, gamma):
        assert blend(p, p, s, gamma) == p

    @given(unit, unit, st.floats(0.0, 10.0))
    def test_full_susceptibility_jumps_to_promoted(self, p, q, gamma):
        assert blend(p, q, 1.0, gamma) == q

    @given(unit, unit, unit, st.floats(0.0, 10.0))
    def test_never_overshoots_linear_reference(self, p, q, s, gamma):
        assert abs(blend(p, q, s, gamma) - p) <= s * abs(q - p) + 1e-15

    @given(unit, unit, unit, unit)
    def test_monotone_in_promoted(self, p, q1, q2, s):
        assume(q1 <= q2)
        assert blend(p, q1, s) <= blend(p, q2, s) + 1e-15

    def test_damping_flattens_far_from_intersection(self):
        # slope w.r.t. promoted shrinks with distance from the prior
        h = 1e-6
        slope = [(blend(0.0, q + h, 0.5) - blend(0.0, q, 0.5)) / h for q in (0.1, 0.5, 0.9)]
        assert slope[0] > slope[1] > slope[2] >= 0

    def test_array_matches_scalar(self):
        p = np.linspace(0, 1, 23)
        q = p[::-1].copy()
        s = np.linspace(0, 1, 23)
        assert blend(p, q, s).tolist() == [blend(a, b, c) for a, b, c in zip(p, q, s)]


class TestGovernment:
    @pytest.mark.parametrize("mean, zeta, expected", [(0.62, 1.0, 0.62), (0.80, 1.5, 0.95), (0.06, 0.5, 0.05)])
    def test_examples(self, mean, zeta, expected):
        assert gov_feedback(mean, zeta) == pytest.approx(expected, rel=1e-12)

    @given(st.floats(0.05, 0.95))
    def test_neutral_stance_is_identity(self, m):
        assert gov_feedback(m, 1.0) == m


class TestFatigue:
    @pytest.mark.parametrize("tick", range(7))
    def test_first_week_identity(self, tick):
        assert fatigue_step(0.6, tick) == 0.6

    def test_tenth_week(self):
        assert fatigue_step(0.8, 70) == pytest.approx(0.8 * math.exp(-0.0125), rel=1e-12)
        assert fatigue_step(0.8, 70) == pytest.approx(0.79006, abs=5e-6)

    @given(st.integers(0, 10_000))
    def test_zero_absorbs(self, tick):
        assert fatigue_step(0.0, tick) == 0.0

    def test_repeated_application_is_non_increasing(self):
        s, seq = 0.9, []
        for t in range(500):
            s = fatigue_step(s, t)
            seq.append(s)
        assert all(b <= a for a, b in zip(seq, seq[1:]))


class TestKernelParams:
    def test_defaults(self):
        k = KernelParams()
        assert (k.gov_exposure_prob, k.blend_gamma, k.fatigue_rate) == (0.5, 2.0, 0.00125)
        assert not k.polarized and k.zeta is None

    @pytest.mark.parametrize("key, value", [("zeta", 2.0), ("delta", 0.6), ("beta", -0.31), ("tau", 0.01),
                                            ("sigma", 0.0)])
    def test_range_errors(self, key, value):
        with pytest.raises(ParameterRangeError, match=key):
            KernelParams(**{key: value})

    def test_range_error_cites_bounds(self):
        with pytest.raises(ParameterRangeError, match=r"\[0\.5, 1\.5\]"):
            KernelParams(zeta=2.0)
