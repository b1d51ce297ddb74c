"""Decay-from-infinity profiles, root identification, and the
bounded/unbounded dichotomy for v' = G(v)."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdlab import ode_oracle as oo
from rdlab.errors import NoRootError, NotOsgoodError


def neg_sq(u):
    return -u * u


def log_cubed(u):
    return -u * math.log(u) ** 3 if u > 1.0 else -u * math.log(u) ** 3 \
        if u > 0 else 0.0


# --------------------------------------------------------------------------
# IVP solutions
# --------------------------------------------------------------------------

class TestSolveIvp:
    def test_quadratic_exact(self):
        # v' = -v^2 from c: v(t) = c / (1 + c t)
        sol = oo.solve_ivp(neg_sq, 2.0, 3.0, tol=1e-10,
                           t_grid=[0.0, 1.0, 3.0])
        assert sol.values[0] == pytest.approx(2.0)
        assert sol.values[1] == pytest.approx(2.0 / 3.0, rel=1e-7)
        assert sol.values[2] == pytest.approx(2.0 / 7.0, rel=1e-7)

    def test_linear_exact(self):
        sol = oo.solve_ivp(lambda u: -u, 5.0, 2.0, tol=1e-10,
                           t_grid=[0.0, 2.0])
        assert sol.values[-1] == pytest.approx(5.0 * math.exp(-2.0), rel=1e-7)

    def test_callable_interpolation(self):
        sol = oo.solve_ivp(neg_sq, 1.0, 1.0, tol=1e-10)
        assert sol(0.5) == pytest.approx(1.0 / 1.5, rel=1e-6)

    @given(st.floats(min_value=0.5, max_value=1e4),
           st.floats(min_value=0.05, max_value=5.0))
    @settings(max_examples=60, deadline=None)
    def test_quadratic_family_closed_form(self, c, t):
        sol = oo.solve_ivp(neg_sq, c, t, tol=1e-10, t_grid=[0.0, t])
        assert sol.values[-1] == pytest.approx(c / (1.0 + c * t), rel=1e-6)


# --------------------------------------------------------------------------
# largest root
# --------------------------------------------------------------------------

class TestLargestRoot:
    def test_cubic(self):
        rep = oo.largest_root(lambda u: -u * (u - 1.0) * (u - 2.0))
        assert rep.c0 == pytest.approx(2.0, abs=1e-10)

    def test_one_minus_u(self):
        rep = oo.largest_root(lambda u: 1.0 - u)
        assert rep.c0 == pytest.approx(1.0, abs=1e-10)

    def test_strictly_negative_root_at_zero(self):
        rep = oo.largest_root(neg_sq)
        assert rep.c0 == pytest.approx(0.0, abs=1e-10)

    def test_no_root_when_positive(self):
        with pytest.raises(NoRootError):
            oo.largest_root(lambda u: 1.0 + u)


# --------------------------------------------------------------------------
# v_infinity closed forms
# --------------------------------------------------------------------------

class TestVInfinity:
    @pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
    def test_log_cubed_closed_form(self, t):
        # v' = -v (log v)^3 from infinity: v(t) = exp(1/sqrt(2 t))
        v = oo.v_infinity(lambda u: -u * math.log(u) ** 3, t)
        assert v == pytest.approx(math.exp(1.0 / math.sqrt(2.0 * t)),
                                  rel=1e-6)

    @pytest.mark.parametrize("t", [0.01, 0.1, 1.0, 10.0])
    def test_quadratic_closed_form(self, t):
        # v' = -v^2 from infinity: v(t) = 1/t
        v = oo.v_infinity(neg_sq, t)
        assert v == pytest.approx(1.0 / t, rel=1e-8)

    def test_monotone_decreasing_in_t(self):
        vals = [oo.v_infinity(neg_sq, t) for t in (0.25, 0.5, 1.0, 2.0)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_not_osgood_raises(self):
        with pytest.raises(NotOsgoodError):
            oo.v_infinity(lambda u: -u, 1.0)

    def test_dominates_every_finite_start(self):
        # universal property: v_infinity(t) >= v_c(t) for any c
        t = 0.7
        vinf = oo.v_infinity(neg_sq, t)
        for c in (1.0, 1e2, 1e4, 1e6):
            vc = oo.solve_ivp(neg_sq, c, t, tol=1e-10,
                              t_grid=[0.0, t]).values[-1]
            assert vc <= vinf * (1.0 + 1e-6)


# --------------------------------------------------------------------------
# dichotomy and long-time limits
# --------------------------------------------------------------------------

CS = [10.0 ** k for k in range(1, 7)]


class TestDichotomy:
    def test_bounded_quadratic(self):
        d = oo.dichotomy(neg_sq, 1.0, CS, tol=1e-4)
        assert d.bounded
        assert d.limit == pytest.approx(1.0, rel=1e-3)

    def test_bounded_model_term(self):
        d = oo.dichotomy(lambda u: -u * math.log(u) ** 3
                         if u > 1 else -u * 0.1, 1.0, CS, tol=1e-4)
        assert d.bounded

    def test_unbounded_linear(self):
        d = oo.dichotomy(lambda u: -u, 1.0, CS, tol=1e-4)
        assert not d.bounded

    def test_requires_six_decades(self):
        with pytest.raises(ValueError):
            oo.dichotomy(neg_sq, 1.0, [1.0, 10.0, 100.0])


class TestLongtimeLimit:
    def test_quadratic_goes_to_zero(self):
        assert oo.longtime_limit(neg_sq) == pytest.approx(0.0, abs=1e-4)

    def test_cubic_goes_to_largest_root(self):
        G = lambda u: -u * (u - 1.0) * (u - 2.0)
        assert oo.longtime_limit(G) == pytest.approx(2.0, abs=1e-4)

    def test_ivp_fallback_for_non_osgood(self):
        # 1 - u has a divergent tail integral; limit comes from the IVP
        assert oo.longtime_limit(lambda u: 1.0 - u) == pytest.approx(
            1.0, abs=1e-4)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def test_solution_csv_roundtrip_values():
    sol = oo.solve_ivp(neg_sq, 1.0, 1.0, tol=1e-10, t_grid=[0.0, 0.5, 1.0])
    text = sol.to_csv("neg_u_sq")
    lines = [ln for ln in text.strip().splitlines()
             if not ln.startswith("#")]
    assert lines[0].split(",")[0] == "t"
    assert len(lines) == 4
    assert "# G=neg_u_sq" in text
    t, v = lines[-1].split(",")[:2]
    assert float(t) == pytest.approx(1.0)
    assert float(v) == pytest.approx(sol.values[-1])
