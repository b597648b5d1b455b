"""Equal-area binning and uniform sampling on the unit sphere.

Cells are the product of nz slabs uniform in z = cos(theta) with nphi
azimuth sectors uniform in phi; the slab area element 2*pi*dz makes every
cell cover exactly 4*pi / (nz * nphi) of solid angle.  This grid is the
substrate for the histogram entropy estimator and the total-variation
distribution tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

FULL_SOLID_ANGLE = 4.0 * np.pi


def sample_uniform_sphere(u: np.ndarray) -> np.ndarray:
    """Map uniforms u of shape (n, 2) to points uniform on S^2.

    Equal-area construction: z = 2*u0 - 1, phi = 2*pi*u1.
    """
    u = np.asarray(u, dtype=float)
    z = 2.0 * u[:, 0] - 1.0
    phi = 2.0 * np.pi * u[:, 1]
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))


def bin_index(points: np.ndarray, nz: int, nphi: int) -> np.ndarray:
    """Flat cell index in [0, nz*nphi) for unit vectors of shape (n, 3)."""
    points = np.asarray(points, dtype=float)
    iz = np.minimum((0.5 * (points[:, 2] + 1.0) * nz).astype(np.int64), nz - 1)
    iz = np.maximum(iz, 0)
    phi = np.arctan2(points[:, 1], points[:, 0])
    phi = np.where(phi < 0, phi + 2.0 * np.pi, phi)
    iphi = np.minimum((phi / (2.0 * np.pi) * nphi).astype(np.int64), nphi - 1)
    return iz * nphi + iphi


@dataclass
class SphereHistogram:
    """Counts over the nz x nphi equal-area grid."""

    nz: int
    nphi: int
    counts: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.nz < 1 or self.nphi < 1:
            raise InvalidArgumentError("nz and nphi must be >= 1")
        if self.counts is None:
            self.counts = np.zeros((self.nz, self.nphi), dtype=np.int64)
        else:
            self.counts = np.asarray(self.counts, dtype=np.int64)
            if self.counts.shape != (self.nz, self.nphi):
                raise InvalidArgumentError(
                    f"counts shape {self.counts.shape} != ({self.nz}, {self.nphi})"
                )

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def n_bins(self) -> int:
        return self.nz * self.nphi

    @property
    def cell_area(self) -> float:
        return FULL_SOLID_ANGLE / self.n_bins

    def add(self, points: np.ndarray) -> "SphereHistogram":
        """Accumulate unit vectors of shape (n, 3); returns self."""
        flat = bin_index(points, self.nz, self.nphi)
        self.counts += np.bincount(flat, minlength=self.n_bins).reshape(self.nz, self.nphi)
        return self

    def merge(self, other: "SphereHistogram") -> "SphereHistogram":
        """Add another histogram's counts (same binning); order-independent."""
        self._check_same_binning(other)
        self.counts += other.counts
        return self

    def probabilities(self) -> np.ndarray:
        total = self.total
        if total == 0:
            raise InvalidArgumentError("histogram is empty")
        return self.counts.astype(float) / total

    def _check_same_binning(self, other: "SphereHistogram") -> None:
        if (self.nz, self.nphi) != (other.nz, other.nphi):
            raise InvalidArgumentError(
                f"binning mismatch: {(self.nz, self.nphi)} vs {(other.nz, other.nphi)}"
            )

    @classmethod
    def from_points(cls, points: np.ndarray, nz: int, nphi: int) -> "SphereHistogram":
        return cls(nz, nphi).add(points)


def entropy_estimate(samples: np.ndarray, nz: int, nphi: int) -> float:
    """Plug-in differential entropy (nats) of a sample of unit vectors.

    -sum(p ln p) over occupied cells plus ln(cell area); converges to
    -integral rho ln rho for a density rho on the sphere.  The uniform
    density scores ln(4*pi) ~ 2.5310.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise InvalidArgumentError("need at least one sample")
    return histogram_entropy(SphereHistogram.from_points(samples, nz, nphi))


def histogram_entropy(hist: SphereHistogram) -> float:
    """Plug-in entropy (nats) of an accumulated histogram."""
    p = hist.probabilities()
    occupied = p[p > 0]
    return float(-(occupied * np.log(occupied)).sum() + np.log(hist.cell_area))


def tv_distance(h1: SphereHistogram, h2: SphereHistogram) -> float:
    """Total-variation distance (1/2) sum |p - q| between binned distributions."""
    h1._check_same_binning(h2)
    return float(0.5 * np.abs(h1.probabilities() - h2.probabilities()).sum())


def multinomial_noise_threshold(h1: SphereHistogram, h2: SphereHistogram) -> float:
    """Conservative TV threshold for equal-process histograms.

    3 x sum_i sqrt(p_i (1 - p_i) / n) with p pooled from both histograms and
    n the smaller sample count; an upper envelope on the expected TV of two
    independent multinomial draws from one distribution.
    """
    h1._check_same_binning(h2)
    n = min(h1.total, h2.total)
    pooled = (h1.counts + h2.counts).astype(float)
    pooled /= pooled.sum()
    return float(3.0 * np.sqrt(pooled * (1.0 - pooled) / n).sum())
