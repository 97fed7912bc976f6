"""Physical constants of an ideal 1D transmission line."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LineParams:
    """Per-length constants of the line, in natural units by default.

    Parameters
    ----------
    c : float
        Capacitance per unit length.
    ell : float
        Inductance per unit length.
    hbar : float
        Reduced Planck constant (sets the photon-number scale).

    The wave velocity ``v = 1/sqrt(ell*c)`` and impedance
    ``z0 = sqrt(ell/c)`` are derived, never stored.
    """

    c: float = 1.0
    ell: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("c", "ell", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and strictly positive, got {value!r}")

    @property
    def v(self) -> float:
        """Wave velocity."""
        return 1.0 / math.sqrt(self.ell * self.c)

    @property
    def z0(self) -> float:
        """Wave impedance."""
        return math.sqrt(self.ell / self.c)

    @classmethod
    def from_velocity(cls, c: float = 1.0, v: float = 1.0, hbar: float = 1.0) -> "LineParams":
        """Build from capacitance and velocity (the pulse-file parametrization)."""
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"v must be finite and strictly positive, got {v!r}")
        return cls(c=c, ell=1.0 / (c * v * v), hbar=hbar)


NATURAL_UNITS = LineParams()
