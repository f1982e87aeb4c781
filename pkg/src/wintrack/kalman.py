"""Constant-velocity Kalman filter over bounding-box motion state.

The state is the 8-vector (cx, cy, w, h, vcx, vcy, vw, vh): box center,
width and height, and their per-frame velocities.  Carrying width and
height directly (rather than scale/aspect) means one filter serves every
tracker in the package.  All operations are pure: they take a state and
return a new one.

Noise is scale-adaptive: standard deviations are proportional to the box
height, with weights h/20 for measured components and h/160 for velocities
(a common convention for this family of filters).  Every constant is a
constructor parameter, and predict/update accept explicit noise overrides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import BoundingBox

STATE_DIM = 8
MEASUREMENT_DIM = 4

DEFAULT_POSITION_WEIGHT = 1.0 / 20.0
DEFAULT_VELOCITY_WEIGHT = 1.0 / 160.0

# Constant-velocity transition: position += velocity, size += size velocity.
_F = np.eye(STATE_DIM)
_F[:MEASUREMENT_DIM, MEASUREMENT_DIM:] = np.eye(MEASUREMENT_DIM)
# Measurement picks out (cx, cy, w, h).
_H = np.eye(MEASUREMENT_DIM, STATE_DIM)


class DegenerateStateError(ValueError):
    """Raised when a state's width or height is not positive."""


@dataclass(frozen=True)
class KalmanState:
    mean: np.ndarray        # shape (8,)
    covariance: np.ndarray  # shape (8, 8), symmetric PSD


def box_to_measurement(box: BoundingBox) -> np.ndarray:
    return np.array([box.cx, box.cy, box.w, box.h], dtype=float)


def state_to_box(state: KalmanState) -> BoundingBox:
    """Inverse of the center-form conversion.

    Raises DegenerateStateError when the state's width or height is not
    positive; callers decide whether to drop or retire the track.
    """
    cx, cy, w, h = state.mean[:MEASUREMENT_DIM]
    if w <= 0 or h <= 0:
        raise DegenerateStateError(f"state has non-positive size w={w}, h={h}")
    return BoundingBox(cx - w / 2.0, cy - h / 2.0, w, h)


def _symmetrized(p: np.ndarray) -> np.ndarray:
    return (p + p.T) / 2.0


class MotionFilter:
    """Predict/update engine; holds only the noise weights, no track state."""

    def __init__(
        self,
        position_weight: float = DEFAULT_POSITION_WEIGHT,
        velocity_weight: float = DEFAULT_VELOCITY_WEIGHT,
    ):
        self.position_weight = position_weight
        self.velocity_weight = velocity_weight

    def _noise_diag(self, h: float) -> np.ndarray:
        pos = (self.position_weight * h) ** 2
        vel = (self.velocity_weight * h) ** 2
        return np.array([pos] * 4 + [vel] * 4, dtype=float)

    def init_state(self, box: BoundingBox) -> KalmanState:
        """State centered on the measurement with zero initial velocity."""
        mean = np.zeros(STATE_DIM)
        mean[:MEASUREMENT_DIM] = box_to_measurement(box)
        covariance = np.diag(self._noise_diag(box.h))
        return KalmanState(mean=mean, covariance=covariance)

    def predict(
        self, state: KalmanState, process_noise: Optional[np.ndarray] = None
    ) -> KalmanState:
        """One constant-velocity step: F x, F P Fᵀ + Q.

        Q defaults to the height-scaled diagonal computed from the prior
        mean; pass process_noise (8x8) to override.
        """
        if process_noise is None:
            q = np.diag(self._noise_diag(float(state.mean[3])))
        else:
            q = np.asarray(process_noise, dtype=float)
        mean = _F @ state.mean
        covariance = _symmetrized(_F @ state.covariance @ _F.T + q)
        return KalmanState(mean=mean, covariance=covariance)

    def update(
        self,
        state: KalmanState,
        box: BoundingBox,
        measurement_noise: Optional[np.ndarray] = None,
    ) -> KalmanState:
        """Standard measurement update against (cx, cy, w, h).

        R defaults to the height-scaled diagonal from the measurement; pass
        measurement_noise (4x4) to override.  The posterior covariance is
        formed in Joseph form and re-symmetrized, so symmetry and positive
        semidefiniteness hold by construction.
        """
        if measurement_noise is None:
            r = np.diag(self._noise_diag(box.h)[:MEASUREMENT_DIM])
        else:
            r = np.asarray(measurement_noise, dtype=float)
        z = box_to_measurement(box)
        p = state.covariance
        innovation = z - _H @ state.mean
        s = _H @ p @ _H.T + r
        gain = np.linalg.solve(s, _H @ p).T
        mean = state.mean + gain @ innovation
        i_kh = np.eye(STATE_DIM) - gain @ _H
        covariance = _symmetrized(i_kh @ p @ i_kh.T + gain @ r @ gain.T)
        return KalmanState(mean=mean, covariance=covariance)
