"""Diagonal spectra of shape Hessians at the unit ball, Lagrange multipliers,
and Lagrangian / penalized Lagrangian spectra.

A spectrum is the sequence c_0..c_K such that the quadratic form evaluates to
sum_k c_k * sum_l alpha_{k,l}^2 on the spherical-harmonic coefficients of the
normal perturbation.

Conventions.  The eigenvalue spectrum uses the coefficient 3*gamma_d^2 at
mode 0: this is what the dilation identity lambda''(0) = 6*lambda_1 forces
for an L^2-normalized constant mode (the printed variant 3*P(B_1)^2 is kept
in the diagnostics).  For modes k >= 1 the adopted eigenvalue coefficient is

    c_k = gamma_d^2 * (2k - 2 j b_k + (d - 1)),

twice the value printed in the literature plus the (d-1) offset.  Direct
perturbation theory on the disk gives lambda''(0) = 2 j^3 J_k'(j)/J_k(j) +
j^2 for a unit cos(k t) graph, which reduces to the formula above via the
three-term recurrence; the independent eigenvalue solver confirms it to
1e-7 on modes 2..5, whereas the printed c_k = gamma_d^2 (k - j b_k) is off
by roughly a factor of two there.  Both variants vanish on the translation
mode after the volume multiplier is subtracted, so the translation check
alone cannot tell them apart; the finite-difference adjudication can, and
the printed variant is kept in the diagnostics.  Multipliers are reported
in both sign conventions; the Lagrangian spectrum itself is convention-free
since it subtracts the exact gradient density.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import ball_reference as ball
from .errors import InvariantViolationError
from .special_functions import ratio_sequence

__all__ = [
    "TAGS",
    "FunctionalCombo",
    "QuadraticFormSpectrum",
    "PenaltySpec",
    "raw_spectrum",
    "gradient_density",
    "lagrange_multiplier",
    "lagrangian_spectrum",
    "penalized_spectrum",
]

TAGS = ("Vol", "P", "E", "Lambda1")

PAIR_CODES = {
    "PE": ("P", "E"),
    "PL": ("P", "Lambda1"),
    "EL": ("E", "Lambda1"),
    "LE": ("Lambda1", "E"),
}

#: absolute tolerance on the translation mode of Lagrangian spectra
C1_TOL = 1e-8


@dataclass(frozen=True)
class FunctionalCombo:
    """Affine combination of shape functionals, e.g. P + t*E."""

    terms: tuple  # of (tag, coefficient)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("combo needs at least one term")
        tags = [tag for tag, _ in self.terms]
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate functional tags in combo")
        for tag in tags:
            if tag not in TAGS:
                raise ValueError(f"unknown functional tag {tag!r}")

    @classmethod
    def single(cls, tag: str) -> "FunctionalCombo":
        return cls(terms=((tag, 1.0),))

    @classmethod
    def from_pair(cls, code: str, t: float) -> "FunctionalCombo":
        """Map a two-letter code to base + t * second functional."""
        base, second = PAIR_CODES[code]
        return cls(terms=((base, 1.0), (second, float(t))))

    def label(self) -> str:
        return " + ".join(f"{coef:g}*{tag}" for tag, coef in self.terms)


@dataclass(frozen=True)
class QuadraticFormSpectrum:
    """Coefficients c_0..c_K of a diagonal quadratic form on modes."""

    d: int
    K: int
    c: np.ndarray
    label: str
    convention: str = ""
    diagnostics: dict = field(default_factory=dict)

    def evaluate_masses(self, rho) -> float:
        """Apply the form to per-mode squared-coefficient masses rho_0..rho_K."""
        rho = np.asarray(rho, dtype=float)
        if rho.shape[0] != self.K + 1:
            raise ValueError("mass vector length must be K+1")
        return float(np.dot(self.c, rho))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "c_k"])
        for k, ck in enumerate(self.c):
            w.writerow([k, format(float(ck), ".17g")])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "K": self.K,
            "label": self.label,
            "convention": self.convention,
            "c": [float(x) for x in self.c],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class PenaltySpec:
    """Quadratic penalty weight for the volume and barycenter constraints."""

    C: float
    volume_target: float = 0.0
    barycenter_target: tuple = ()

    def __post_init__(self):
        if self.C < 0:
            raise ValueError("penalty weight must be >= 0")


def raw_spectrum(tag: str, d: int, K: int) -> QuadraticFormSpectrum:
    """Spectrum of the shape Hessian of one functional at the unit ball."""
    _check(d, K)
    k = np.arange(K + 1, dtype=float)
    if tag == "Vol":
        c = np.full(K + 1, float(d - 1))
    elif tag == "P":
        c = k * k + (d - 2) * k + (d - 1) * (d - 2)
    elif tag == "E":
        c = k / d**2 - (d + 1) / (2.0 * d**2)
    elif tag == "Lambda1":
        g2 = ball.gamma_sq(d)
        seq = ratio_sequence(d, K if K >= 1 else 1)
        c = np.empty(K + 1)
        c[0] = 3.0 * g2
        c[1:] = g2 * (2.0 * (k[1:] - seq.j * seq.b[1:K + 1]) + (d - 1))
        return QuadraticFormSpectrum(
            d=d, K=K, c=c, label="Lambda1",
            diagnostics={
                # literature prints 3*P(B_1)^2*gamma_d^2 at mode 0; the
                # dilation identity forces 3*gamma_d^2 instead
                "mode0_literature": 3.0 * ball.surface_area(d, 1.0) ** 2 * g2,
                "mode0_adopted": 3.0 * g2,
                # printed k >= 1 coefficient, half the adjudicated value
                # up to the (d-1) offset (see module docstring)
                "literature_c_k": g2 * (k[1:] - seq.j * seq.b[1:K + 1]),
            })
    else:
        raise ValueError(f"unknown functional tag {tag!r}")
    return QuadraticFormSpectrum(d=d, K=K, c=c, label=tag)


#: shape-gradient density at the unit ball (gradient = density * int(phi))
_GRAD_DENSITY = {
    "Vol": lambda d: 1.0,
    "P": lambda d: float(d - 1),
    "E": lambda d: -1.0 / (2.0 * d**2),
    "Lambda1": lambda d: -ball.gamma_sq(d),
}


def gradient_density(combo: FunctionalCombo, d: int) -> float:
    """g with l_1[combo](B_1).phi = g * int(phi)."""
    return sum(coef * _GRAD_DENSITY[tag](d) for tag, coef in combo.terms)


def lagrange_multiplier(combo: FunctionalCombo, d: int,
                        convention: str = "subtract") -> float:
    """Volume-constraint multiplier at the unit ball.

    ``subtract``: mu with l_1[combo] - mu * l_1[Vol] = 0 (so Vol alone -> 1).
    ``add``: mu with l_1[combo] + mu * l_1[Vol] = 0, the sign used in the
    printed per-family formulas such as mu(t) = t/(2 d^2) - (d-1).
    """
    g = gradient_density(combo, d)
    if convention == "subtract":
        return g
    if convention == "add":
        return -g
    raise ValueError("convention must be 'subtract' or 'add'")


def combo_spectrum(combo: FunctionalCombo, d: int, K: int) -> np.ndarray:
    """Raw spectrum of an affine combination (no volume multiplier)."""
    c = np.zeros(K + 1)
    for tag, coef in combo.terms:
        c += coef * raw_spectrum(tag, d, K).c
    return c


def lagrangian_spectrum(combo: FunctionalCombo, d: int, K: int) -> QuadraticFormSpectrum:
    """Spectrum of combo - g*Vol with g the exact gradient density.

    Mode 1 must vanish (translation invariance); a violation beyond C1_TOL
    signals a formula regression and raises.
    """
    _check(d, K)
    g = gradient_density(combo, d)
    c = combo_spectrum(combo, d, K) - g * float(d - 1)
    if abs(c[1]) > C1_TOL:
        raise InvariantViolationError(
            f"translation mode c_1 = {c[1]:.3e} for {combo.label()} (d={d})")
    return QuadraticFormSpectrum(
        d=d, K=K, c=c,
        label=f"Lagrangian[{combo.label()}]",
        convention="combo - mu*Vol with mu = gradient density "
                   f"(mu = {g:.17g})")


def penalized_spectrum(base: QuadraticFormSpectrum,
                       pen: PenaltySpec) -> QuadraticFormSpectrum:
    """Add the quadratic volume/barycenter penalties to a unit-ball spectrum.

    At a feasible critical point the squared constraints contribute
    2C*(first derivative)^2: 2C*P(B_1) on mode 0 and 2C*P(B_1)/d on each
    mode-1 direction; modes k >= 2 are untouched.
    """
    P1 = ball.surface_area(base.d, 1.0)
    c = base.c.copy()
    c[0] += 2.0 * pen.C * P1
    if base.K >= 1:
        c[1] += 2.0 * pen.C * P1 / base.d
    return QuadraticFormSpectrum(
        d=base.d, K=base.K, c=c,
        label=f"{base.label} + penalty(C={pen.C:g})",
        convention=base.convention)


def _check(d, K):
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if K < 2:
        raise ValueError("truncation K must be >= 2")
