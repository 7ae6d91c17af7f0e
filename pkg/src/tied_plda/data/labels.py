"""Per-frame state labels, hard or soft."""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DataFormatError, DimensionMismatchError

MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LabelsSummary:
    """What initialisation and the EM driver need to know about the labelled data.

    Attributes:
        state_counts: posterior mass per state, shape (J,)
        data_variance: global per-dimension variance of the features, shape (d,)
        frames: number of frames
    """

    state_counts: np.ndarray
    data_variance: np.ndarray
    frames: int

    @property
    def empty_states(self) -> List[int]:
        return [int(j) for j in np.flatnonzero(self.state_counts <= 0.0)]


class LabelSequence:
    """State posteriors P(j | y_t) stored as sparse (frame, state, mass) entries.

    Hard labels are the special case of exactly one entry of mass 1 per frame.
    Entries are ordered by frame, then by the order they were given in.
    """

    def __init__(self, frames: np.ndarray, states: np.ndarray, masses: np.ndarray, num_frames: int, hard: bool):
        self.frames = np.asarray(frames, dtype=np.int64)
        self.states = np.asarray(states, dtype=np.int64)
        self.masses = np.asarray(masses, dtype=np.float64)
        self.num_frames = int(num_frames)
        self.is_hard = bool(hard)
        if not (self.frames.shape == self.states.shape == self.masses.shape) or self.frames.ndim != 1:
            raise DataFormatError("label entries must be parallel one-dimensional arrays")
        if self.frames.size and (self.frames.min() < 0 or self.frames.max() >= self.num_frames):
            raise DataFormatError("label entry refers to a frame outside the sequence")
        if np.any(np.diff(self.frames) < 0):
            raise DataFormatError("label entries must be ordered by frame")
        if np.any(self.states < 0):
            raise DataFormatError("negative state index in labels")
        if not np.all(np.isfinite(self.masses)) or np.any(self.masses < 0.0) or np.any(self.masses > 1.0):
            bad = int(np.flatnonzero(~((self.masses >= 0.0) & (self.masses <= 1.0)))[0])
            raise DataFormatError(f"label mass {self.masses[bad]!r} of frame {self.frames[bad]} outside [0, 1]")
        totals = self.frame_mass()
        over = np.flatnonzero(totals > 1.0 + MASS_TOLERANCE)
        if over.size:
            raise DataFormatError(f"label masses of frame {over[0]} sum to {totals[over[0]]!r} > 1")

    @classmethod
    def from_hard(cls, states: Iterable[int]) -> "LabelSequence":
        states = np.asarray(list(states), dtype=np.int64)
        T = states.shape[0]
        return cls(np.arange(T), states, np.ones(T), T, hard=True)

    @classmethod
    def from_soft(cls, posteriors: Sequence[Sequence[Tuple[int, float]]]) -> "LabelSequence":
        frames, states, masses = [], [], []
        for t, entries in enumerate(posteriors):
            for state, mass in entries:
                frames.append(t)
                states.append(int(state))
                masses.append(float(mass))
        return cls(np.array(frames, dtype=np.int64), np.array(states, dtype=np.int64),
                   np.array(masses, dtype=np.float64), len(posteriors), hard=False)

    def __len__(self) -> int:
        return self.num_frames

    @property
    def num_entries(self) -> int:
        return self.frames.shape[0]

    @property
    def max_state(self) -> int:
        return int(self.states.max()) if self.states.size else -1

    def hard_states(self) -> np.ndarray:
        """Per-frame state index; for soft labels the state with the largest mass (-1 if none)."""
        if self.is_hard:
            return self.states.copy()
        best = np.full(self.num_frames, -1, dtype=np.int64)
        best_mass = np.full(self.num_frames, -np.inf)
        for f, s, w in zip(self.frames, self.states, self.masses):
            if w > best_mass[f]:
                best[f], best_mass[f] = s, w
        return best

    def frame_mass(self) -> np.ndarray:
        return np.bincount(self.frames, weights=self.masses, minlength=self.num_frames)

    def entries(self) -> List[List[Tuple[int, float]]]:
        out: List[List[Tuple[int, float]]] = [[] for _ in range(self.num_frames)]
        for f, s, w in zip(self.frames, self.states, self.masses):
            out[int(f)].append((int(s), float(w)))
        return out

    def validate(self, num_states: int, num_frames: Optional[int] = None, source: str = "labels") -> None:
        """Check state indices against ``J`` and the frame count against the features."""
        if num_frames is not None and num_frames != self.num_frames:
            raise DimensionMismatchError("frame count", num_frames, self.num_frames, source)
        if self.max_state >= num_states:
            raise DataFormatError(f"{source}: state index {self.max_state} out of range for {num_states} states")

    def summary(self, num_states: int, features: np.ndarray) -> LabelsSummary:
        self.validate(num_states, features.shape[0])
        counts = np.bincount(self.states, weights=self.masses, minlength=num_states)
        variance = features.var(axis=0) if features.shape[0] else np.ones(features.shape[1])
        return LabelsSummary(state_counts=counts, data_variance=variance, frames=self.num_frames)

    def subset(self, frame_indices: np.ndarray) -> "LabelSequence":
        """Labels of the given (sorted, unique) frames, renumbered from zero."""
        frame_indices = np.asarray(frame_indices, dtype=np.int64)
        remap = np.full(self.num_frames, -1, dtype=np.int64)
        remap[frame_indices] = np.arange(frame_indices.shape[0])
        keep = remap[self.frames] >= 0
        new_frames = remap[self.frames[keep]]
        order = np.argsort(new_frames, kind="stable")
        return LabelSequence(new_frames[order], self.states[keep][order], self.masses[keep][order],
                             frame_indices.shape[0], self.is_hard)

    def equals(self, other: "LabelSequence") -> bool:
        return (
            self.num_frames == other.num_frames
            and self.is_hard == other.is_hard
            and np.array_equal(self.frames, other.frames)
            and np.array_equal(self.states, other.states)
            and np.array_equal(self.masses, other.masses)
        )
