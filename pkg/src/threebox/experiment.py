"""Coupling-strength scans and beam profiles for the three experiments."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import pointer as ptr
from .pointer import (
    DisplacementCoupling,
    GaussianPointer,
    PolarizationCoupling,
    PostSelectedPointer,
)
from .railspace import RailState, generalized_states

WEAK_REGIME_LIMIT = 0.5  # |K| below this many sigma counts as weak
DEFAULT_PIXELS_PER_SIGMA = 11.1 / 0.69


@dataclass(frozen=True)
class VisibilityModel:
    v: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise ValueError(f"visibility out of range: {self.v}")


@dataclass(frozen=True)
class PixelScale:
    pixels_per_sigma: float = DEFAULT_PIXELS_PER_SIGMA

    def __post_init__(self):
        if not self.pixels_per_sigma > 0:
            raise ValueError(f"pixel scale must be positive, got {self.pixels_per_sigma}")


@dataclass(frozen=True)
class ScanSpec:
    rail: str | int
    k_min: float
    k_max: float
    steps: int
    visibility: VisibilityModel = VisibilityModel()

    def __post_init__(self):
        if not self.k_min < self.k_max:
            raise ValueError(f"k_min must be below k_max, got {self.k_min} >= {self.k_max}")
        if self.steps < 2:
            raise ValueError(f"a scan needs at least 2 steps, got {self.steps}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.steps)


@dataclass(frozen=True)
class ScanRow:
    K: float
    mean_shift: float
    inferred: float
    success_probability: float
    inferred_p_c: float = float("nan")
    error: Optional[str] = None

    @property
    def weak_regime(self) -> bool:
        return abs(self.K) < WEAK_REGIME_LIMIT


@dataclass
class DataSeries:
    rows: list[ScanRow] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def apply_visibility(ps: PostSelectedPointer, v: VisibilityModel | float,
                     rails: Optional[Sequence[str]] = None) -> PostSelectedPointer:
    """Scale cross terms between different rails by the fringe visibility.

    With ``rails`` given, only pairs involving one of those rails lose
    coherence; the remaining rails stay mutually coherent.
    """
    vis = v.v if isinstance(v, VisibilityModel) else VisibilityModel(v).v
    partial = frozenset(rails) if rails is not None else None
    return replace(ps, visibility=vis, partial_rails=partial)


def _shift_row(ps: PostSelectedPointer, K: float, **extra) -> ScanRow:
    res = ptr.pointer_moments(ps)
    inferred = res.mean_shift / K if K != 0 else float("nan")
    return ScanRow(K=float(K), mean_shift=res.mean_shift, inferred=inferred,
                   success_probability=res.success_probability, **extra)


def shift_at(pre: RailState, post: RailState, rail, K: float,
             visibility: VisibilityModel | float = 1.0,
             pointer: GaussianPointer = GaussianPointer()) -> ScanRow:
    """Single-rail coupling at one strength K."""
    label = pre.labels[pre.index(rail)]
    ps = ptr.evolve_and_postselect(pre, post, [DisplacementCoupling(label, K)], pointer=pointer)
    ps = apply_visibility(ps, visibility, rails=[label])
    return _shift_row(ps, K)


def scan_single_rail(spec: ScanSpec, pre: RailState, post: RailState) -> DataSeries:
    """Mean post-selected shift vs coupling strength of one rail."""
    rows = []
    for K in spec.grid():
        try:
            rows.append(shift_at(pre, post, spec.rail, K, spec.visibility))
        except ValueError as exc:
            raise type(exc)(f"at K = {K!r}: {exc}") from exc
    return DataSeries(rows)


def two_pointer_scan(k_b: Sequence[float], theta: float, pre: RailState, post: RailState,
                     polarizer: Optional[str] = None, disp_rail="B", pol_rail="C",
                     visibility: VisibilityModel | float = 1.0) -> DataSeries:
    """Displacement on one rail and polarization rotation on another, measured together.

    ``polarizer`` is None or the polarization to block ("V" or "H").  Rows where
    the polarizer extinguishes the output carry NaN values and an error string.
    """
    if theta == 0:
        raise ValueError("two-pointer scan needs a nonzero polarization rotation")
    rows = []
    for K in k_b:
        ps = ptr.evolve_and_postselect(
            pre, post, [DisplacementCoupling(disp_rail, K)], PolarizationCoupling(pol_rail, theta))
        ps = apply_visibility(ps, visibility)
        try:
            if polarizer is not None:
                ps = ptr.apply_polarizer(ps, polarizer)
            p_c = float(ptr.polarization_rotation(ps) / theta) if polarizer is None else float("nan")
            rows.append(_shift_row(ps, K, inferred_p_c=p_c))
        except ptr.PostSelectionError as exc:
            nan = float("nan")
            rows.append(ScanRow(float(K), nan, nan, nan, nan, error=str(exc)))
    return DataSeries(rows)


def profile_mean(x: np.ndarray, intensity: np.ndarray) -> float:
    return float(np.trapezoid(x * intensity, x) / np.trapezoid(intensity, x))


def fig2_profiles(K_C: float, scale: PixelScale = PixelScale(), points: int = 801,
                  visibility: VisibilityModel | float = 1.0, halfwidth_sigma: float = 6.0,
                  states: Optional[tuple[RailState, RailState]] = None) -> dict[str, np.ndarray]:
    """Unit-peak intensity profiles of each rail alone and of the post-selected beam.

    Only rail C is displaced (by ``K_C`` sigma).  The x axis is in pixels.
    """
    if not np.isfinite(K_C):
        raise ValueError("K_C must be finite")
    pre, post = states if states is not None else generalized_states()
    x_sigma = np.linspace(-halfwidth_sigma, halfwidth_sigma, points)
    ps = ptr.evolve_and_postselect(pre, post, [DisplacementCoupling("C", K_C)])
    ps = apply_visibility(ps, visibility, rails=["C"])

    def alone(d):
        single = PostSelectedPointer((ptr.Branch(1.0 + 0j, d, ptr.V, "X"),))
        return ptr.intensity_profile(single, x_sigma)

    profiles = {
        "x_pixels": x_sigma * scale.pixels_per_sigma,
        "i_rail_a": alone(0.0),
        "i_rail_b": alone(0.0),
        "i_rail_c": alone(K_C),
        "i_postselected": ptr.intensity_profile(ps, x_sigma),
    }
    for key in ("i_rail_a", "i_rail_b", "i_rail_c", "i_postselected"):
        profiles[key] = profiles[key] / profiles[key].max()
    return profiles
