from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fashion_abm.model import (ATTRIBUTE_NAMES, DEFAULT_COEFFICIENTS, AgentAttributes, AgentState,
                               Susceptibilities, behavior_proxy, linear_predictor, purchase_probability,
                               purchase_probability_array)

TABLE = ["0.7450", "-0.0101", "0.0200", "-0.0179", "-0.0488", "-0.1783", "-0.1414", "0.0320", "0.0360", "0.2181"]

unit = st.floats(0.0, 1.0, allow_nan=False)
attrs_st = st.builds(AgentAttributes, *[unit] * 9)


def attrs(**values):
    base = dict.fromkeys(ATTRIBUTE_NAMES, 0.0)
    base.update(values)
    return AgentAttributes(**base)


def test_default_coefficients_match_table():
    got = [DEFAULT_COEFFICIENTS.b0, *DEFAULT_COEFFICIENTS.slopes]
    assert got == [float(t) for t in TABLE]


def test_all_zero_is_constant_term():
    assert purchase_probability(attrs()) == 0.7450


def test_all_one_sums_every_coefficient():
    expected = float(sum(Fraction(t) for t in TABLE))
    assert expected == pytest.approx(0.6546, abs=1e-12)
    assert purchase_probability(attrs(**dict.fromkeys(ATTRIBUTE_NAMES, 1.0))) == pytest.approx(expected, rel=1e-12)


def test_env_only():
    assert purchase_probability(attrs(env=1.0)) == pytest.approx(0.7271, rel=1e-12)


def test_clamps_above_point_99():
    # every positive-coefficient attribute at 1 gives 1.0511 before clamping
    a = attrs(age=1.0, trust=1.0, access=1.0, freq=1.0)
    assert linear_predictor(a) == pytest.approx(1.0511)
    assert purchase_probability(a) == 0.99


def test_rejects_out_of_range_attribute():
    with pytest.raises(ValueError):
        attrs(env=1.2)


@given(attrs_st, st.sampled_from(ATTRIBUTE_NAMES))
def test_affine_in_each_attribute(a, name):
    idx = ATTRIBUTE_NAMES.index(name)
    slope = DEFAULT_COEFFICIENTS.slopes[idx]
    diff = linear_predictor(a.with_values(**{name: 1.0})) - linear_predictor(a.with_values(**{name: 0.0}))
    assert diff == pytest.approx(slope, abs=1e-12)


@given(attrs_st)
def test_output_always_clamped(a):
    assert 0.01 <= purchase_probability(a) <= 0.99


@given(st.lists(attrs_st, min_size=1, max_size=20))
def test_vectorized_matches_scalar_bitwise(agents):
    cols = {k: np.array([getattr(a, k) for a in agents]) for k in ATTRIBUTE_NAMES}
    got = purchase_probability_array(cols)
    assert got.tolist() == [purchase_probability(a) for a in agents]


@pytest.mark.parametrize("p, expected", [(1.0, 0.0), (0.7450, 0.2550), (0.5, 0.5)])
def test_behavior_proxy(p, expected):
    assert behavior_proxy(p) == pytest.approx(expected, abs=1e-15)


def test_behavior_proxy_accepts_agent():
    agent = AgentState(0, attrs(), Susceptibilities(0.5, 0.5, 0.5), 0.7450)
    assert behavior_proxy(agent) == pytest.approx(0.2550)


@given(unit)
def test_behavior_proxy_is_an_involution(p):
    assert behavior_proxy(behavior_proxy(p)) == pytest.approx(p, abs=1e-15)
