"""Finite-difference adjudication layer: FD versus spectral predictions."""

import math

import numpy as np
import pytest

from shapestab import verification as ver
from shapestab.hessian_spectra import FunctionalCombo
from shapestab.perturbed_disk import BoundaryPerturbation


class TestEvaluateFunctional:
    def test_volume_and_perimeter(self):
        h = BoundaryPerturbation()
        assert ver.evaluate_functional(
            FunctionalCombo.single("Vol"), h) == pytest.approx(math.pi)
        assert ver.evaluate_functional(
            FunctionalCombo.single("P"), h) == pytest.approx(2.0 * math.pi)

    def test_affine_combination(self):
        h = BoundaryPerturbation(cos_coeffs=[0.0, 0.05])
        combo = FunctionalCombo(terms=(("Vol", 2.0), ("P", -1.0)))
        expect = (2.0 * ver.evaluate_functional(FunctionalCombo.single("Vol"), h)
                  - ver.evaluate_functional(FunctionalCombo.single("P"), h))
        assert ver.evaluate_functional(combo, h) == pytest.approx(expect, rel=1e-13)


class TestFirstDerivative:
    def test_gradient_density(self):
        # j'(0) = g * int h for each functional; h = a0 gives g * 2 pi a0
        h = BoundaryPerturbation(a0=0.05)
        from shapestab.hessian_spectra import gradient_density
        for tag, tol in [("Vol", 1e-9), ("P", 1e-9), ("E", 1e-7), ("Lambda1", 1e-5)]:
            combo = FunctionalCombo.single(tag)
            fd = ver.first_derivative_fd(combo, h)
            expect = gradient_density(combo, 2) * 2.0 * math.pi * 0.05
            assert fd == pytest.approx(expect, rel=tol)


class TestSecondDerivative:
    def test_volume_exact(self):
        # Vol along t*cos(2 theta) is exactly quadratic: j''(0) = pi
        rep = ver.second_derivative_fd(
            FunctionalCombo.single("Vol"),
            BoundaryPerturbation(cos_coeffs=[0.0, 1.0]))
        assert rep.j0pp_fd == pytest.approx(math.pi, rel=1e-7)
        assert rep.rel_gap <= 1e-6
        assert rep.order_saturated and rep.richardson_order == 2.0

    def test_perimeter_mode3(self):
        rep = ver.second_derivative_fd(
            FunctionalCombo.single("P"),
            BoundaryPerturbation(cos_coeffs=[0.0, 0.0, 1.0]))
        assert rep.j0pp_analytic == pytest.approx(9.0 * math.pi, rel=1e-13)
        assert rep.rel_gap <= 1e-6

    def test_dilation_checks(self):
        h = BoundaryPerturbation(a0=1.0)
        rep_e = ver.second_derivative_fd(FunctionalCombo.single("E"), h)
        assert rep_e.j0pp_analytic == pytest.approx(-3.0 * math.pi / 4.0, rel=1e-13)
        assert rep_e.rel_gap <= 1e-6
        rep_l = ver.second_derivative_fd(FunctionalCombo.single("Lambda1"), h)
        assert rep_l.j0pp_analytic == pytest.approx(
            6.0 * 2.404825557695773 ** 2, rel=1e-13)
        assert rep_l.rel_gap <= 1e-6

    def test_report_serialization(self):
        rep = ver.second_derivative_fd(
            FunctionalCombo.single("Vol"), BoundaryPerturbation(a0=0.05))
        doc = rep.to_dict()
        assert set(doc) >= {"functional", "h", "fd", "analytic", "rel_gap"}
        text = ver.reports_to_csv([rep])
        assert text.startswith("functional,h,fd,analytic,rel_gap,order")


class TestLagrangian:
    def test_mode1_checks_vanish(self):
        out = ver.mode1_lagrangian_checks()
        for tag, val in out.items():
            assert abs(val) <= 1e-4, tag

    def test_lagrangian_combo_structure(self):
        lag = ver.lagrangian_combo(FunctionalCombo.single("P"))
        terms = dict(lag.terms)
        assert terms["P"] == 1.0
        assert terms["Vol"] == -1.0  # gradient density of P at d = 2

    def test_path_scan_bounded_modulus(self):
        h = BoundaryPerturbation(cos_coeffs=[0.0, 0.05])
        lag = ver.lagrangian_combo(FunctionalCombo.single("P"))
        vals, modulus = ver.lagrangian_path_scan(lag, h, samples=3)
        assert len(vals) == 3
        assert modulus < 10.0


class TestThresholdScan:
    def test_pl_scan(self):
        scan = ver.threshold_scan_PL()
        # FD root and spectral threshold agree; printed constant does not
        assert scan["fd_vs_spectral_rel"] <= 0.02
        assert scan["literature_inconsistent"]
        assert scan["spectral"] == pytest.approx(-0.4307708232284593, rel=1e-10)
        assert scan["literature_closed_form"] == pytest.approx(-0.41877096, rel=1e-7)


class TestQuadraticGrowth:
    def test_suite_passes(self):
        out = ver.quadratic_growth_suite(n=5)
        assert out["all_satisfied"]
        assert out["coercivity_constant"] == pytest.approx(0.2, rel=1e-12)

    def test_deterministic_given_seed(self):
        a = ver.quadratic_growth_suite(n=3, seed=11)
        b = ver.quadratic_growth_suite(n=3, seed=11)
        assert [r["deficit"] for r in a["rows"]] == [r["deficit"] for r in b["rows"]]
