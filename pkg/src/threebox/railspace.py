"""Complex amplitude vectors over interferometer rails."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

NORM_TOL = 1e-12


class DegenerateStateError(ValueError):
    pass


@dataclass(frozen=True)
class RailState:
    """Normalized pure state over a set of labelled rails.

    Amplitudes are stored as an immutable tuple of complex numbers, in the
    same order as ``labels``.
    """

    amplitudes: tuple[complex, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.amplitudes) < 2:
            raise ValueError("a rail state needs at least 2 rails")
        if len(self.labels) != len(self.amplitudes):
            raise ValueError("labels and amplitudes differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"rail labels must be unique, got {self.labels}")
        norm2 = sum(abs(a) ** 2 for a in self.amplitudes)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r}); use make_state")

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def index(self, rail: Union[str, int, "RailProjector"]) -> int:
        """Resolve a rail name, integer index or projector to an index."""
        if isinstance(rail, RailProjector):
            rail = rail.rail
        if isinstance(rail, (int, np.integer)) and not isinstance(rail, bool):
            if not 0 <= rail < self.dim:
                raise IndexError(f"rail index {rail} out of range for {self.dim} rails")
            return int(rail)
        try:
            return self.labels.index(rail)
        except ValueError:
            raise KeyError(f"unknown rail {rail!r}; rails are {self.labels}") from None

    def scaled(self, phase: complex) -> "RailState":
        """The same state multiplied by a unit-modulus global phase."""
        return RailState(tuple(complex(phase * a) for a in self.amplitudes), self.labels)

    def __str__(self):
        terms = ", ".join(f"{lab}: {a:.6g}" for lab, a in zip(self.labels, self.amplitudes))
        return f"RailState({terms})"


@dataclass(frozen=True)
class RailProjector:
    """The projector |r><r| onto a single rail."""

    rail: Union[str, int]


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("A") + i) for i in range(n))
    return tuple(f"R{i}" for i in range(n))


def make_state(amplitudes: Sequence[complex], labels: Sequence[str] | None = None) -> RailState:
    """Normalize ``amplitudes`` into a RailState, keeping relative phases.

    >>> make_state([2, 2, -2 * 2 ** 0.5]).amplitudes[2]
    (-0.7071067811865475+0j)
    """
    vec = np.asarray(amplitudes, dtype=complex).ravel()
    if vec.size < 2:
        raise ValueError("a rail state needs at least 2 amplitudes")
    if not np.all(np.isfinite(vec)):
        raise ValueError("amplitudes must be finite")
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise DegenerateStateError("degenerate state: all amplitudes are zero")
    # Skip the division for already-normalized input so that normalization is idempotent.
    if abs(norm - 1.0) > 1e-15:
        vec = vec / norm
    labels = tuple(labels) if labels is not None else default_labels(vec.size)
    return RailState(tuple(complex(a) for a in vec), labels)


def inner(post: RailState, pre: RailState) -> complex:
    """<post|pre> = sum_r conj(post_r) pre_r."""
    if post.dim != pre.dim:
        raise ValueError(f"dimension mismatch: {post.dim} vs {pre.dim}")
    return complex(np.vdot(post.vector(), pre.vector()))


def three_box_states() -> tuple[RailState, RailState]:
    """Pre- and post-selected states of the original three-box problem."""
    s = 1 / np.sqrt(3)
    return make_state([s, s, s]), make_state([s, s, -s])


def generalized_states() -> tuple[RailState, RailState]:
    """Unequal-weight pre-state and the post-state of two 50/50 output beamsplitters."""
    pre = make_state([np.sqrt(2 / 5), np.sqrt(2 / 5), np.sqrt(1 / 5)])
    post = make_state([0.5, 0.5, -1 / np.sqrt(2)])
    return pre, post


def swapped_states() -> tuple[RailState, RailState]:
    """Generalized pre-state with a post-state that exchanges the roles of rails A and C."""
    pre, _ = generalized_states()
    post = make_state([-0.5, 0.5, 1 / np.sqrt(2)])
    return pre, post


PRESETS = {
    "original": three_box_states,
    "generalized": generalized_states,
    "swapped": swapped_states,
}


def preset(name: str) -> tuple[RailState, RailState]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown state preset {name!r}; choose from {sorted(PRESETS)}") from None
