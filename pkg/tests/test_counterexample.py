"""Centered-annulus family: exact perimeter excess, quadrature energy excess,
and the sign of the perimeter-plus-energy deficit."""

import json
import math

import numpy as np
import pytest

from shapestab import ball_reference as ball
from shapestab import counterexample as cex


class TestClosedForms:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_perimeter_difference_positive(self, d):
        for eps in (1e-4, 1e-2, 0.3):
            assert cex.perimeter_difference(d, eps) > 0.0

    def test_perimeter_difference_formula_d3(self):
        eps = 0.1
        mu = (1.0 - eps**3) ** (-1.0 / 3.0)
        expect = (mu**2 * (1.0 + eps**2) - 1.0) * 4.0 * math.pi
        assert cex.perimeter_difference(3, eps) == pytest.approx(expect, rel=1e-13)

    def test_energy_difference_positive(self):
        # cutting a hole raises the energy toward zero
        for d in (2, 3):
            assert cex.energy_difference(d, 0.05) > 0.0

    def test_l1_distance(self):
        eps = 0.1
        mu = (1.0 - eps**3) ** (-1.0 / 3.0)
        w = ball.unit_ball_volume(3)
        expect = w * (mu**3 - 1.0) + w * (mu * eps) ** 3
        assert cex.l1_distance(3, eps) == pytest.approx(expect, rel=1e-13)
        # the family preserves volume: annulus volume equals ball volume
        assert mu**3 * (1.0 - eps**3) == pytest.approx(1.0, rel=1e-15)


class TestRun:
    def test_d3_deficit_negative_small_eps(self):
        exp = cex.run(3, -0.1, np.geomspace(1e-5, 0.3, 12))
        for row in exp.rows:
            if row.eps <= 1e-3:
                assert row.deficit < 0.0

    def test_d3_crossover_brackets_sign_change(self):
        exp = cex.run(3, -0.1, np.geomspace(1e-5, 0.3, 12))
        c = exp.crossover_eps
        assert c is not None
        assert cex.deficit(3, -0.1, c * 0.99) < 0.0 < cex.deficit(3, -0.1, c * 1.01)

    def test_d2_negative_deficit_with_small_l1(self):
        exp = cex.run(2, -0.1, np.geomspace(1e-6, 0.3, 12))
        good = [r for r in exp.rows
                if r.deficit < 0.0 and r.l1_distance < 0.05 * math.pi]
        assert good

    def test_closed_form_diagnostics(self):
        exp = cex.run(3, -0.1, np.geomspace(1e-4, 0.3, 6))
        assert exp.diagnostics["closed_form_rel_gap_at_smallest_eps"] <= 1e-10
        exp2 = cex.run(2, -0.1, np.geomspace(1e-4, 0.3, 6))
        assert exp2.diagnostics["closed_form_rel_gap_at_smallest_eps"] > 0.5

    def test_positive_gamma_no_crossover(self):
        exp = cex.run(3, 0.1, np.geomspace(1e-3, 0.3, 6))
        assert exp.largest_negative_eps is None
        assert exp.crossover_eps is None

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            cex.run(3, -0.1, [0.7])
        with pytest.raises(ValueError):
            cex.run(3, -0.1, [])


class TestSlopes:
    def test_d3_orders(self):
        sl = cex.asymptotic_slopes(3, (5e-4, 1e-3))
        assert sl.p_order == pytest.approx(2.0, abs=0.1)
        assert sl.e_order == pytest.approx(1.0, abs=0.1)
        assert sl.log_model_residual is None

    def test_d4_orders(self):
        sl = cex.asymptotic_slopes(4, (5e-4, 1e-3))
        assert sl.p_order == pytest.approx(3.0, abs=0.1)
        assert sl.e_order == pytest.approx(2.0, abs=0.1)

    def test_d2_log_model(self):
        sl = cex.asymptotic_slopes(2, (5e-6, 1e-5))
        # energy excess follows 1/|log eps|: far from any power law
        assert sl.e_order == pytest.approx(0.0, abs=0.2)
        assert sl.log_model_residual < 0.05

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            cex.asymptotic_slopes(3, (1e-3, 3e-3))


class TestSerialization:
    def test_csv(self):
        exp = cex.run(3, -0.1, [1e-3, 1e-2])
        lines = exp.to_csv().strip().split("\n")
        assert lines[0] == "eps,dP,dE,deficit,l1_distance"
        assert len(lines) == 3

    def test_json_deterministic(self):
        a = cex.run(3, -0.1, [1e-3, 1e-2]).to_json()
        b = cex.run(3, -0.1, [1e-3, 1e-2]).to_json()
        assert a == b
        doc = json.loads(a)
        assert doc["d"] == 3 and len(doc["rows"]) == 2
