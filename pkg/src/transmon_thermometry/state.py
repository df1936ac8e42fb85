"""Diagonal three-level state of the transmon.

Only the populations of |g>, |e>, |f> are tracked; coherences are never
modeled.  The vector must stay on the probability simplex: a sum drifting
away from one signals a bug upstream, so no renormalization is performed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SUM_TOLERANCE = 1e-9
COMPONENT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PopulationVector:
    """Populations (p_g, p_e, p_f) of the three lowest transmon levels."""

    p_g: float
    p_e: float
    p_f: float

    def __post_init__(self):
        vals = (self.p_g, self.p_e, self.p_f)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite population in {vals}")
        for v in vals:
            if v < -COMPONENT_TOLERANCE or v > 1.0 + COMPONENT_TOLERANCE:
                raise ValueError(f"population {v} outside [0, 1]")
        total = self.p_g + self.p_e + self.p_f
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"populations sum to {total}, not 1")

    @classmethod
    def from_array(cls, arr) -> "PopulationVector":
        a = np.asarray(arr, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"expected 3 populations, got shape {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.p_g, self.p_e, self.p_f])
