"""Weak values, ABL probabilities and beamsplitter-network state preparation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .railspace import RailProjector, RailState, inner, make_state

OVERLAP_TOL = 1e-12


class ZeroOverlapError(ValueError):
    pass


class PostSelectionImpossibleError(ValueError):
    pass


@dataclass(frozen=True)
class WeakValueResult:
    value: complex
    overlap: complex

    def __post_init__(self):
        if abs(self.overlap) <= OVERLAP_TOL:
            raise ZeroOverlapError("undefined weak value (zero overlap)")

    @property
    def real(self) -> float:
        return self.value.real


@dataclass(frozen=True)
class BeamsplitterSpec:
    """Reflection and transmission amplitudes r, t (with phases) of one beamsplitter."""

    r: float
    t: float
    phase_r: float = 0.0
    phase_t: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.r <= 1.0 and 0.0 <= self.t <= 1.0):
            raise ValueError(f"amplitudes must lie in [0, 1], got r={self.r}, t={self.t}")
        if abs(self.r**2 + self.t**2 - 1.0) > 1e-12:
            raise ValueError(f"lossless beamsplitter needs r^2 + t^2 = 1, got {self.r**2 + self.t**2!r}")

    @classmethod
    def from_reflectivity(cls, r: float) -> "BeamsplitterSpec":
        return cls(r=r, t=float(np.sqrt(max(0.0, 1.0 - r * r))))


FIFTY_FIFTY = BeamsplitterSpec(r=2**-0.5, t=2**-0.5)


def _overlap(pre: RailState, post: RailState) -> complex:
    ov = inner(post, pre)
    if abs(ov) <= OVERLAP_TOL:
        raise ZeroOverlapError("undefined weak value (zero overlap)")
    return ov


def weak_value(pre: RailState, post: RailState, proj: RailProjector | str | int) -> WeakValueResult:
    """Weak value of the rail projector |r><r|: <post|r><r|pre> / <post|pre>."""
    ov = _overlap(pre, post)
    r = pre.index(proj)
    num = post.amplitudes[r].conjugate() * pre.amplitudes[r]
    return WeakValueResult(value=complex(num / ov), overlap=ov)


def weak_probabilities(pre: RailState, post: RailState) -> list[complex]:
    """Weak values of every rail projector, in rail order."""
    ov = _overlap(pre, post)
    weights = np.conj(post.vector()) * pre.vector()
    return [complex(w / ov) for w in weights]


def abl_probability(pre: RailState, post: RailState, proj: RailProjector | str | int) -> float:
    """Probability that a strong {Pi, 1 - Pi} measurement finds the rail occupied,
    conditioned on successful post-selection."""
    if post.dim != pre.dim:
        raise ValueError(f"dimension mismatch: {post.dim} vs {pre.dim}")
    r = pre.index(proj)
    weights = np.conj(post.vector()) * pre.vector()
    inside = abs(weights[r]) ** 2
    outside = abs(weights.sum() - weights[r]) ** 2
    total = inside + outside
    if total == 0.0:
        raise PostSelectionImpossibleError("post-selection impossible: both outcome branches vanish")
    return float(inside / total)


def joint_weak_probability(pre: RailState, post: RailState, rail_x, rail_y) -> complex:
    """Weak value of |X><X|Y><Y|, which vanishes identically for X != Y."""
    ov = _overlap(pre, post)
    x, y = pre.index(rail_x), pre.index(rail_y)
    if x != y:
        return 0j
    return complex(post.amplitudes[x].conjugate() * pre.amplitudes[x] / ov)


def pre_state_from_bs(bs1: BeamsplitterSpec, bs2: BeamsplitterSpec) -> RailState:
    """State prepared by the input pair of beamsplitters; path phases are assumed compensated."""
    return make_state([bs1.r, bs1.t * bs2.r, bs1.t * bs2.t])


def post_state_from_bs(bs3: BeamsplitterSpec, bs4: BeamsplitterSpec) -> RailState:
    """State selected by the output beamsplitters into the camera port."""
    return make_state([bs3.t * bs4.r, bs3.r * bs4.r, -bs4.t])


def balance_pre_state(post: RailState) -> RailState:
    """Real positive pre-state whose rails all contribute equal intensity after post-selection.

    Choosing pre_r proportional to 1/|post_r| makes |pre_r post_r| rail-independent.
    """
    mags = np.abs(post.vector())
    if np.any(mags == 0.0):
        raise ValueError("unbalanceable: post-state has a zero amplitude")
    return make_state(1.0 / mags, post.labels)


def balanced_bs_settings(bs3: BeamsplitterSpec, bs4: BeamsplitterSpec) -> tuple[BeamsplitterSpec, BeamsplitterSpec]:
    """Input beamsplitters that prepare the balanced pre-state for the given output pair."""
    a, b, c = balance_pre_state(post_state_from_bs(bs3, bs4)).vector().real
    bs1 = BeamsplitterSpec.from_reflectivity(a)
    t1 = bs1.t
    bs2 = BeamsplitterSpec(r=b / t1, t=c / t1) if t1 > 0 else BeamsplitterSpec(r=1.0, t=0.0)
    return bs1, bs2
