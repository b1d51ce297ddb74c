"""Iterated log/exp calibration, envelopes, growth classification, and the
Osgood tail integral."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdlab import nonlinearity as nl
from rdlab.errors import DomainError, NotOsgoodError, SignError, UnboundedEnvelope


# --------------------------------------------------------------------------
# iterated logarithm / exponential
# --------------------------------------------------------------------------

class TestIteratedMaps:
    def test_iter_log_identity_m0(self):
        assert nl.iter_log(0, 7.25) == 7.25

    def test_iter_log_single(self):
        assert nl.iter_log(1, math.e) == pytest.approx(1.0, rel=1e-15)

    def test_iter_log_double(self):
        assert nl.iter_log(2, math.exp(math.e)) == pytest.approx(1.0, rel=1e-14)

    def test_iter_log_product_empty_is_one(self):
        assert nl.iter_log_product(0, 123.0) == 1.0

    def test_iter_log_product_two_factors(self):
        u = math.exp(math.exp(2.0))
        expected = nl.iter_log(1, u) * nl.iter_log(2, u)
        assert nl.iter_log_product(2, u) == pytest.approx(expected, rel=1e-12)

    def test_iter_exp_tower(self):
        assert nl.iter_exp(2, 0.0) == pytest.approx(math.e, rel=1e-15)

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            nl.iter_log(3, 1.5)  # log(log(1.5)) < 0, next log undefined

    @given(st.floats(min_value=-2.0, max_value=4.0),
           st.integers(min_value=0, max_value=3))
    @settings(max_examples=200, deadline=None)
    def test_iter_exp_then_log_roundtrip(self, x, m):
        from hypothesis import assume
        assume(m < 3 or x <= 1.3)  # keep the tower inside double range
        u = nl.iter_exp(m, x)
        assert nl.iter_log(m, u) == pytest.approx(x, rel=1e-9, abs=1e-9)

    @given(st.floats(min_value=1e2, max_value=1e12),
           st.integers(min_value=1, max_value=2))
    @settings(max_examples=200, deadline=None)
    def test_iter_log_monotone(self, u, m):
        assert nl.iter_log(m, 2.0 * u) > nl.iter_log(m, u)


# --------------------------------------------------------------------------
# reaction terms and envelopes
# --------------------------------------------------------------------------

class TestEnvelope:
    def test_x_independent_closed_form(self):
        term = nl.linear_minus_power(0.0, 1.0, 2.0)
        env = nl.envelope(term, 5.0)
        assert env.method is nl.EnvelopeMethod.ClosedForm
        assert env(3.0) == pytest.approx(-9.0, rel=1e-15)

    def test_grid_sup_dominates_samples(self):
        term = nl.custom_term(lambda x, u: -(1.0 + x * x) * u * u)
        env = nl.envelope(term, 2.0)
        for u in (0.5, 1.0, 10.0):
            assert env(u) == pytest.approx(-u * u, rel=1e-6)

    def test_unbounded_envelope_rejected(self):
        grows = nl.custom_term(lambda x, u: u ** 3, x_independent=True)
        with pytest.raises(UnboundedEnvelope):
            nl.envelope(grows, 1.0)

    @given(st.floats(min_value=0.1, max_value=100.0))
    @settings(max_examples=100, deadline=None)
    def test_envelope_dominates_pointwise(self, u):
        term = nl.custom_term(lambda x, u: -u * u + math.sin(x) * u)
        env = nl.envelope(term, 3.0)
        for x in (-3.0, -1.0, 0.0, 0.5, 2.0):
            assert env(u) >= term.evaluator(x, u) - 1e-9


class TestCheckF2:
    def test_quadratic_satisfies(self):
        spec = nl.check_F2(lambda u: -u * u, 0, 1.0)
        assert spec.verdict is nl.Verdict.SatisfiesF2

    def test_model_term_with_room_to_spare(self):
        # ratio -(log u)^(1/2) -> -inf when the denominator power is 2.5
        term = nl.shifted_log_power(1.0, 3.0)
        spec = nl.check_F2(nl.envelope(term, math.inf), 0, 0.5)
        assert spec.verdict is nl.Verdict.SatisfiesF2

    def test_threshold_power_fails(self):
        # -u (log u)^2 against the (2+eps)-denominator: ratio tends to 0.
        term = nl.shifted_log_power(1.0, 2.0)
        spec = nl.check_F2(nl.envelope(term, math.inf), 0, 1.0)
        assert spec.verdict is nl.Verdict.FailsF2

    def test_iterlog_term_deeper_level(self):
        term = nl.linear_minus_iterlog(0.0, 1.0, 1, 1.0)
        spec = nl.check_F2(nl.envelope(term, math.inf), 1, 0.5)
        assert spec.verdict is nl.Verdict.SatisfiesF2

    def test_f2_monotone_under_pointwise_domination(self):
        # any envelope below a certified one certifies too
        base = lambda u: -u * u
        spec = nl.check_F2(base, 0, 1.0)
        assert spec.verdict is nl.Verdict.SatisfiesF2
        lower = lambda u: -u * u * (1.0 + math.log(1.0 + u))
        assert nl.check_F2(lower, 0, 1.0).verdict is nl.Verdict.SatisfiesF2

    def test_json_record_fields(self):
        import json
        term = nl.shifted_log_power(1.0, 3.0)
        spec = nl.check_F2(nl.envelope(term, math.inf), 0, 0.5)
        rec = json.loads(spec.to_json_record("model"))
        assert rec["verdict"] == "SatisfiesF2"
        assert rec["term_id"] == "model"
        assert len(rec["probes"]) >= 6


# --------------------------------------------------------------------------
# Osgood tail integral
# --------------------------------------------------------------------------

class TestTailIntegral:
    def test_quadratic_closed_form(self):
        # int_c^inf du/u^2 = 1/c
        res = nl.tail_integral(lambda u: -u * u, 10.0)
        assert res.convergent
        assert res.value == pytest.approx(0.1, rel=1e-6)

    def test_log_squared_closed_form(self):
        # int_c^inf du/(u log^2 u) = 1/log(c)
        res = nl.tail_integral(lambda u: -u * math.log(u) ** 2, math.exp(2.0))
        assert res.convergent
        assert res.value == pytest.approx(0.5, rel=1e-4)

    def test_linear_diverges(self):
        res = nl.tail_integral(lambda u: -u, 10.0)
        assert not res.convergent

    def test_log_product_diverges(self):
        res = nl.tail_integral(lambda u: -u * math.log(u), 100.0)
        assert not res.convergent

    def test_sign_guard(self):
        with pytest.raises(SignError):
            nl.tail_integral(lambda u: u, 10.0)

    def test_osgood_test_wrapper(self):
        assert nl.osgood_test(lambda u: -u * u, 10.0).convergent
        assert not nl.osgood_test(lambda u: -u, 10.0).convergent

    @given(st.floats(min_value=1.5, max_value=1e6))
    @settings(max_examples=60, deadline=None)
    def test_quadratic_tail_matches_closed_form_everywhere(self, c):
        res = nl.tail_integral(lambda u: -u * u, c)
        assert res.convergent
        assert res.value == pytest.approx(1.0 / c, rel=1e-5)


# --------------------------------------------------------------------------
# shift envelopes
# --------------------------------------------------------------------------

class TestShiftEnvelopes:
    def test_concave_shortcut(self):
        term = nl.linear_minus_power(0.0, 2.0, 2.0)
        sh = nl.shift_envelopes(term, concave_hint=True)
        assert sh.method is nl.ShiftMethod.ConcaveShortcut
        # G(u) = f(u) - f(0) = -2u^2 for the concave absorption
        assert sh.G_eval(3.0) == pytest.approx(-18.0, rel=1e-12)

    def test_concave_hint_rejected_for_convex_kink(self):
        from rdlab.errors import ConcavityMismatch
        from rdlab.catalog import ex3_regularized_term
        with pytest.raises(ConcavityMismatch):
            nl.shift_envelopes(ex3_regularized_term(), concave_hint=True)

    @given(st.floats(min_value=0.01, max_value=50.0),
           st.floats(min_value=0.0, max_value=50.0))
    @settings(max_examples=100, deadline=None)
    def test_G_dominates_shift_differences(self, u, v_extra):
        term = nl.linear_minus_power(0.0, 1.0, 2.0)
        sh = nl.shift_envelopes(term, concave_hint=True)
        v = u + v_extra
        diff = term.evaluator(0.0, v) - term.evaluator(0.0, v - u)
        assert sh.G_eval(u) >= diff - 1e-9 * max(1.0, abs(diff))


# --------------------------------------------------------------------------
# catalog construction sanity
# --------------------------------------------------------------------------

class TestCatalog:
    def test_unknown_names_raise_config_error(self):
        from rdlab import catalog
        from rdlab.errors import ConfigError
        with pytest.raises(ConfigError):
            catalog.get_term("no_such_term")
        with pytest.raises(ConfigError):
            catalog.get_operator("no_such_operator")
        with pytest.raises(ConfigError):
            catalog.get_G("no_such_G")
        with pytest.raises(ConfigError):
            catalog.get_witness("no_such_witness")

    def test_every_catalog_term_evaluates(self):
        from rdlab import catalog
        for name in catalog.TERM_NAMES:
            term = catalog.get_term(name)
            val = term.evaluator(0.5, 2.0)
            assert math.isfinite(val)
