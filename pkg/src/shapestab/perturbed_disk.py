"""Radial-graph perturbations of the unit disk: exact geometry, Sobolev
norms, volume rescaling and the linear deformation path.

A perturbation h(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)
describes the domain {r < 1 + h(theta)}.  On the unit circle the outward
normal is radial, so the normal graph coincides with the radial graph and
mode masses feed the diagonal Hessian spectra directly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDomainError

__all__ = [
    "BoundaryPerturbation",
    "DeformationPath",
    "volume",
    "perimeter",
    "sobolev_norm",
    "rescale_to_volume",
    "path_domain",
    "mode_masses",
]


def _as_array(x):
    a = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BoundaryPerturbation:
    """Fourier data of the boundary graph r = 1 + h(theta)."""

    a0: float = 0.0
    cos_coeffs: np.ndarray = ()
    sin_coeffs: np.ndarray = ()

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", _as_array(self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", _as_array(self.sin_coeffs))
        n = max(len(self.cos_coeffs), len(self.sin_coeffs))
        if len(self.cos_coeffs) != n:
            object.__setattr__(self, "cos_coeffs",
                               _as_array(np.pad(self.cos_coeffs, (0, n - len(self.cos_coeffs)))))
        if len(self.sin_coeffs) != n:
            object.__setattr__(self, "sin_coeffs",
                               _as_array(np.pad(self.sin_coeffs, (0, n - len(self.sin_coeffs)))))

    @classmethod
    def from_modes(cls, modes: dict) -> "BoundaryPerturbation":
        """Build from {k: coefficient} for cosine modes (k=0 is the mean)."""
        kmax = max(modes) if modes else 0
        cos = np.zeros(kmax)
        a0 = 0.0
        for k, v in modes.items():
            if k == 0:
                a0 = v
            else:
                cos[k - 1] = v
        return cls(a0=a0, cos_coeffs=cos)

    @property
    def K(self) -> int:
        return len(self.cos_coeffs)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        h = np.full(theta.shape, self.a0)
        for k in range(1, self.K + 1):
            h += (self.cos_coeffs[k - 1] * np.cos(k * theta)
                  + self.sin_coeffs[k - 1] * np.sin(k * theta))
        return h

    def derivative(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        hp = np.zeros(theta.shape)
        for k in range(1, self.K + 1):
            hp += k * (-self.cos_coeffs[k - 1] * np.sin(k * theta)
                       + self.sin_coeffs[k - 1] * np.cos(k * theta))
        return hp

    def radius(self, theta) -> np.ndarray:
        return 1.0 + self.evaluate(theta)

    def max_abs(self) -> float:
        return abs(self.a0) + float(np.sum(np.abs(self.cos_coeffs))
                                    + np.sum(np.abs(self.sin_coeffs)))

    def scaled(self, factor: float) -> "BoundaryPerturbation":
        return BoundaryPerturbation(a0=factor * self.a0,
                                    cos_coeffs=factor * self.cos_coeffs,
                                    sin_coeffs=factor * self.sin_coeffs)

    def to_json(self) -> str:
        return json.dumps({"a0": self.a0,
                           "cos": [float(x) for x in self.cos_coeffs],
                           "sin": [float(x) for x in self.sin_coeffs]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BoundaryPerturbation":
        data = json.loads(text)
        return cls(a0=float(data["a0"]), cos_coeffs=data.get("cos", ()),
                   sin_coeffs=data.get("sin", ()))

    @classmethod
    def from_csv(cls, text: str) -> "BoundaryPerturbation":
        """Rows (k, a_k, b_k); k = 0 row carries the mean in the a column."""
        rows = list(csv.reader(io.StringIO(text)))
        if rows and not rows[0][0].strip().isdigit():
            rows = rows[1:]  # header
        a0 = 0.0
        entries = {}
        for row in rows:
            if not row or not row[0].strip():
                continue
            k = int(row[0])
            ak = float(row[1]) if len(row) > 1 and row[1].strip() else 0.0
            bk = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
            if k == 0:
                a0 = ak
            else:
                entries[k] = (ak, bk)
        kmax = max(entries) if entries else 0
        cos = np.zeros(kmax)
        sin = np.zeros(kmax)
        for k, (ak, bk) in entries.items():
            cos[k - 1] = ak
            sin[k - 1] = bk
        return cls(a0=a0, cos_coeffs=cos, sin_coeffs=sin)


@dataclass(frozen=True)
class DeformationPath:
    """Linear path t -> boundary graph 1 + t*h, t in [0, 1]."""

    h: BoundaryPerturbation
    t: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("path parameter t must lie in [0, 1]")
        check_star_shaped(self.h.scaled(self.t))


def check_star_shaped(h: BoundaryPerturbation) -> None:
    """Certify min(1 + h) > 0.

    Sufficient coefficient bound first; otherwise a dense grid check whose
    size scales with the truncation.
    """
    margin = 1.0 + h.a0 - (float(np.sum(np.abs(h.cos_coeffs)))
                           + float(np.sum(np.abs(h.sin_coeffs))))
    if margin > 0.0:
        return
    n = 4 * max(h.K, 64)
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    if np.min(h.radius(theta)) <= 0.0:
        raise InvalidDomainError(
            f"boundary graph reaches the origin (min radius "
            f"{np.min(h.radius(theta)):.3e})")


def volume(h: BoundaryPerturbation) -> float:
    """Exact polar area pi * [(1+a0)^2 + (1/2) sum (a_k^2 + b_k^2)]."""
    check_star_shaped(h)
    return np.pi * ((1.0 + h.a0) ** 2
                    + 0.5 * (float(np.dot(h.cos_coeffs, h.cos_coeffs))
                             + float(np.dot(h.sin_coeffs, h.sin_coeffs))))


def perimeter(h: BoundaryPerturbation, rtol: float = 1e-12) -> float:
    """Arc length by periodic trapezoid, refined until stationary.

    Spectrally accurate for smooth h, so the doubling loop terminates fast.
    """
    check_star_shaped(h)
    n = max(64, 8 * (h.K + 1))
    prev = _perimeter_on_grid(h, n)
    for _ in range(16):
        n *= 2
        cur = _perimeter_on_grid(h, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


def _perimeter_on_grid(h: BoundaryPerturbation, n: int) -> float:
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    r = h.radius(theta)
    rp = h.derivative(theta)
    return float(np.sum(np.sqrt(r * r + rp * rp)) * (2.0 * np.pi / n))


def mode_masses(h: BoundaryPerturbation, K: int) -> np.ndarray:
    """Per-mode squared-coefficient masses rho_k = sum_l alpha_{k,l}^2 in the
    L^2-orthonormal circular-harmonic basis: rho_0 = 2 pi a0^2 and
    rho_k = pi (a_k^2 + b_k^2)."""
    rho = np.zeros(K + 1)
    rho[0] = 2.0 * np.pi * h.a0**2
    m = min(K, h.K)
    rho[1:m + 1] = np.pi * (h.cos_coeffs[:m] ** 2 + h.sin_coeffs[:m] ** 2)
    return rho


def sobolev_norm(h: BoundaryPerturbation, s: float) -> float:
    """H^s norm sqrt(sum_k (1+k^2)^s rho_k)."""
    rho = mode_masses(h, h.K)
    k = np.arange(h.K + 1, dtype=float)
    return float(np.sqrt(np.sum((1.0 + k * k) ** s * rho)))


def rescale_to_volume(h: BoundaryPerturbation, V: float) -> BoundaryPerturbation:
    """h' with 1 + h' = mu (1 + h) and volume exactly V."""
    mu = float(np.sqrt(V / volume(h)))
    return BoundaryPerturbation(a0=mu * (1.0 + h.a0) - 1.0,
                                cos_coeffs=mu * h.cos_coeffs,
                                sin_coeffs=mu * h.sin_coeffs)


def path_domain(path: DeformationPath) -> BoundaryPerturbation:
    """Domain at parameter t along the path: the scaled perturbation t*h."""
    return path.h.scaled(path.t)
