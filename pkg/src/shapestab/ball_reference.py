"""Exact reference quantities on balls B_R in dimension d >= 2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .special_functions import first_zero

__all__ = [
    "BallReference",
    "ball_reference",
    "unit_ball_volume",
    "volume",
    "surface_area",
    "mean_curvature",
    "lambda1_ball",
    "dirichlet_energy_ball",
    "gamma_sq",
    "harmonic_dim",
]


def _gamma_half(twice_arg: int) -> float:
    """Gamma(twice_arg / 2) by recursion from Gamma(1) = 1, Gamma(1/2) = sqrt(pi).

    Exact (to round-off) for the integer and half-integer arguments that occur
    in unit-ball measures.
    """
    if twice_arg <= 0:
        raise ValueError("argument must be positive")
    if twice_arg % 2 == 0:
        val, n = 1.0, twice_arg // 2          # Gamma(1) = 1
    else:
        val, n = math.sqrt(math.pi), None     # Gamma(1/2) = sqrt(pi)
        val_arg = 0.5
        while val_arg + 1 <= twice_arg / 2:
            val *= val_arg
            val_arg += 1.0
        return val
    for m in range(1, n):
        val *= m
    return val


@lru_cache(maxsize=None)
def unit_ball_volume(d: int) -> float:
    """omega_d = pi^(d/2) / Gamma(d/2 + 1)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return math.pi ** (d / 2.0) / _gamma_half(d + 2)


def volume(d: int, R: float = 1.0) -> float:
    _check(d, R)
    return unit_ball_volume(d) * R**d


def surface_area(d: int, R: float = 1.0) -> float:
    """P(B_R) = d * omega_d * R^(d-1)."""
    _check(d, R)
    return d * unit_ball_volume(d) * R ** (d - 1)


def mean_curvature(d: int, R: float = 1.0) -> float:
    """Sum of principal curvatures of the sphere of radius R."""
    _check(d, R)
    return (d - 1) / R


@lru_cache(maxsize=None)
def _j_first(d: int) -> float:
    return first_zero(d / 2.0 - 1.0)


def lambda1_ball(d: int, R: float = 1.0) -> float:
    """First Dirichlet eigenvalue j_{d/2-1}^2 / R^2."""
    _check(d, R)
    return _j_first(d) ** 2 / R**2


def dirichlet_energy_ball(d: int, R: float = 1.0) -> float:
    """E(B_R) = -P(B_1) / (2 d^2 (d+2)) * R^(d+2).

    Fixed by direct integration of -1/2 * int u with u = (R^2-|x|^2)/(2d);
    in particular E(B_1) = -pi/16 at d = 2.
    """
    _check(d, R)
    return -surface_area(d, 1.0) / (2.0 * d * d * (d + 2)) * R ** (d + 2)


@lru_cache(maxsize=None)
def gamma_sq(d: int) -> float:
    """gamma_d^2 = 2 * lambda1(B_1) / P(B_1) (squared normal derivative of the
    L^2-normalized first eigenfunction on the unit sphere)."""
    _check(d, 1.0)
    return 2.0 * lambda1_ball(d, 1.0) / surface_area(d, 1.0)


def harmonic_dim(d: int, k: int) -> int:
    """Dimension of the space of spherical harmonics of degree k on S^{d-1}."""
    if d < 2 or k < 0:
        raise ValueError("need d >= 2 and k >= 0")
    first = math.comb(d + k - 1, k)
    second = math.comb(d + k - 3, k - 2) if k >= 2 else 0
    return first - second


@dataclass(frozen=True)
class BallReference:
    d: int
    R: float
    surface: float
    volume: float
    mean_curvature: float
    lambda1: float
    energy: float
    gamma_sq: float  # defined at R = 1


def ball_reference(d: int, R: float = 1.0) -> BallReference:
    return BallReference(
        d=d,
        R=R,
        surface=surface_area(d, R),
        volume=volume(d, R),
        mean_curvature=mean_curvature(d, R),
        lambda1=lambda1_ball(d, R),
        energy=dirichlet_energy_ball(d, R),
        gamma_sq=gamma_sq(d),
    )


def _check(d, R):
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if R <= 0:
        raise ValueError("radius must be positive")
