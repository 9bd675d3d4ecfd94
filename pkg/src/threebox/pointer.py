"""Exact post-selected pointer dynamics for displacement and polarization pointers.

The transverse pointer is a Gaussian amplitude

    G(x) = (2 pi sigma^2)^(-1/4) exp(-x^2 / (4 sigma^2)),

so that the intensity |G|^2 has rms width sigma.  Coupling a rail with
strength K translates that rail's pointer by K; post-selection onto
<post| leaves the unnormalized pointer sum_r conj(post_r) pre_r G(x - d_r).
All moments below are exact closed forms in the branch weights; nothing
is expanded in K.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .railspace import RailState

PRUNE_TOL = 1e-15

V, H = "V", "H"


class PostSelectionError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianPointer:
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class DisplacementCoupling:
    rail: str | int
    K: float

    def __post_init__(self):
        if not np.isfinite(self.K):
            raise ValueError(f"coupling strength must be finite, got {self.K}")


@dataclass(frozen=True)
class PolarizationCoupling:
    """Rotation of a rail's polarization by ``theta`` radians from V toward H."""

    rail: str | int
    theta: float

    def __post_init__(self):
        if not abs(self.theta) < np.pi / 2:
            raise ValueError(f"|theta| must be below pi/2, got {self.theta}")


@dataclass(frozen=True)
class Branch:
    weight: complex
    displacement: float
    pol: str
    rail: str


@dataclass(frozen=True)
class PostSelectedPointer:
    """Unnormalized conditional pointer state as a list of displaced Gaussian branches.

    ``visibility`` scales interference between branches of different rails; when
    ``partial_rails`` is given, only pairs that involve at least one of those
    rails are scaled.
    """

    branches: tuple[Branch, ...]
    sigma: float = 1.0
    visibility: float = 1.0
    partial_rails: Optional[frozenset] = None

    def __post_init__(self):
        if not self.branches:
            raise PostSelectionError("post-selection never succeeds: no surviving branches")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {self.visibility}")

    def coherence(self, j: int, k: int) -> float:
        """Interference factor between branches j and k."""
        bj, bk = self.branches[j], self.branches[k]
        if bj.rail == bk.rail or self.visibility == 1.0:
            return 1.0
        if self.partial_rails is not None and not ({bj.rail, bk.rail} & self.partial_rails):
            return 1.0
        return self.visibility

    def displacements(self) -> np.ndarray:
        return np.array([b.displacement for b in self.branches], dtype=float)

    def scaled(self, lam: float) -> "PostSelectedPointer":
        """Rescale sigma and every displacement by ``lam``."""
        branches = tuple(replace(b, displacement=b.displacement * lam) for b in self.branches)
        return replace(self, branches=branches, sigma=self.sigma * lam)


@dataclass(frozen=True)
class ShiftResult:
    mean_shift: float
    success_probability: float
    inferred: float = float("nan")

    def __post_init__(self):
        if not 0.0 < self.success_probability <= 1.0 + 1e-12:
            raise PostSelectionError(
                f"success probability {self.success_probability!r} outside (0, 1]")


def _check_sigma(sigma):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def gaussian_overlap(d1: float, d2: float, sigma: float = 1.0) -> float:
    """<G(x - d1)|G(x - d2)> for real Gaussian amplitudes of intensity rms width sigma."""
    _check_sigma(sigma)
    return float(np.exp(-((d1 - d2) ** 2) / (8.0 * sigma**2)))


def gaussian_x_moment(d1: float, d2: float, sigma: float = 1.0) -> float:
    """<G(x - d1)| x |G(x - d2)>."""
    _check_sigma(sigma)
    return 0.5 * (d1 + d2) * float(np.exp(-((d1 - d2) ** 2) / (8.0 * sigma**2)))


def evolve_and_postselect(
    pre: RailState,
    post: RailState,
    disp: Iterable[DisplacementCoupling] = (),
    pol: Optional[PolarizationCoupling] = None,
    pointer: GaussianPointer = GaussianPointer(),
) -> PostSelectedPointer:
    """Couple rails to the pointers, then project the rail degree of freedom onto ``post``."""
    if pre.dim != post.dim:
        raise ValueError(f"dimension mismatch: {pre.dim} vs {post.dim}")
    shifts = np.zeros(pre.dim)
    for c in disp:
        shifts[pre.index(c.rail)] += c.K
    pol_rail = pre.index(pol.rail) if pol is not None else None

    branches = []
    for r, label in enumerate(pre.labels):
        w = post.amplitudes[r].conjugate() * pre.amplitudes[r]
        if r == pol_rail:
            parts = [(w * np.cos(pol.theta), V), (w * np.sin(pol.theta), H)]
        else:
            parts = [(w, V)]
        for wp, p in parts:
            if abs(wp) >= PRUNE_TOL:
                branches.append(Branch(complex(wp), float(shifts[r]), p, label))
    if not branches:
        raise PostSelectionError("post-selection never succeeds: all branch weights vanish")
    return PostSelectedPointer(tuple(branches), sigma=pointer.sigma)


def _pair_sums(ps: PostSelectedPointer, pols: Sequence[str] = (V, H)) -> tuple[float, float]:
    """Closed-form norm and first moment, restricted to the given polarization blocks."""
    norm = 0.0
    first = 0.0
    bs = ps.branches
    for j, bj in enumerate(bs):
        if bj.pol not in pols:
            continue
        for k, bk in enumerate(bs):
            if bk.pol != bj.pol:
                continue
            c = ps.coherence(j, k) * (bj.weight.conjugate() * bk.weight).real
            if c == 0.0:
                continue
            norm += c * gaussian_overlap(bj.displacement, bk.displacement, ps.sigma)
            first += c * gaussian_x_moment(bj.displacement, bk.displacement, ps.sigma)
    return norm, first


def success_probability(ps: PostSelectedPointer) -> float:
    return _pair_sums(ps)[0]


def pointer_moments(ps: PostSelectedPointer) -> ShiftResult:
    """Mean shift and success probability without an inferred probability (valid at K = 0)."""
    norm, first = _pair_sums(ps)
    if norm <= 0.0:
        raise PostSelectionError("post-selection never succeeds: zero norm")
    return ShiftResult(mean_shift=first / norm, success_probability=norm)


def mean_shift(ps: PostSelectedPointer, K: float) -> ShiftResult:
    """Exact post-selected mean shift; ``inferred`` is the shift in units of K."""
    if K == 0:
        raise ValueError("inferred probability undefined at zero coupling; use pointer_moments")
    res = pointer_moments(ps)
    return replace(res, inferred=res.mean_shift / K)


def intensity_profile(ps: PostSelectedPointer, x: np.ndarray) -> np.ndarray:
    """Pointer intensity |phi(x)|^2 summed over polarizations, built explicitly on ``x``."""
    x = np.asarray(x, dtype=float)
    sigma = ps.sigma
    amp = lambda d: (2 * np.pi * sigma**2) ** -0.25 * np.exp(-((x - d) ** 2) / (4 * sigma**2))
    out = np.zeros_like(x)
    if ps.visibility == 1.0:
        for p in (V, H):
            phi = np.zeros_like(x, dtype=complex)
            for b in ps.branches:
                if b.pol == p:
                    phi += b.weight * amp(b.displacement)
            out += np.abs(phi) ** 2
        return out
    # Partial coherence is not a pure state; accumulate the pairwise mixture instead.
    gs = [amp(b.displacement) for b in ps.branches]
    for j, bj in enumerate(ps.branches):
        for k, bk in enumerate(ps.branches):
            if bj.pol == bk.pol:
                c = ps.coherence(j, k) * (bj.weight.conjugate() * bk.weight).real
                out += c * gs[j] * gs[k]
    return out


def mean_shift_numeric(ps: PostSelectedPointer, K: float, grid_halfwidth: float = 15.0,
                       points: int = 6001) -> ShiftResult:
    """Grid-integration counterpart of ``mean_shift`` (trapezoidal rule)."""
    if points < 1001:
        raise ValueError(f"need at least 1001 grid points, got {points}")
    d = ps.displacements()
    if np.max(np.abs(d)) + 10 * ps.sigma > grid_halfwidth:
        raise ValueError(
            f"grid half-width {grid_halfwidth} does not cover displacements +/- 10 sigma")
    x = np.linspace(-grid_halfwidth, grid_halfwidth, points)
    dens = intensity_profile(ps, x)
    norm = np.trapezoid(dens, x)
    first = np.trapezoid(x * dens, x)
    if norm <= 0.0:
        raise PostSelectionError("post-selection never succeeds: zero norm")
    inferred = first / norm / K if K != 0 else float("nan")
    return ShiftResult(mean_shift=float(first / norm), success_probability=float(norm),
                       inferred=float(inferred))


def polarization_rotation(ps: PostSelectedPointer) -> float:
    """Polarization angle of the post-selected light, arctan(||H|| / ||V||), in radians."""
    nv, _ = _pair_sums(ps, (V,))
    nh, _ = _pair_sums(ps, (H,))
    if nv <= 0.0:
        raise PostSelectionError("fully rotated state: V component has zero norm")
    return float(np.arctan(np.sqrt(max(nh, 0.0) / nv)))


def apply_polarizer(ps: PostSelectedPointer, block: str) -> PostSelectedPointer:
    """Remove every branch with polarization ``block``; no renormalization."""
    block = block.upper()
    if block not in (V, H):
        raise ValueError(f"polarizer blocks V or H, got {block!r}")
    kept = tuple(b for b in ps.branches if b.pol != block)
    if not kept:
        raise PostSelectionError("polarizer extinguishes output")
    return replace(ps, branches=kept)
