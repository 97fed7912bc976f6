"""Classical pulse profiles and their mapping to line fields.

Three waveform representations are supported: exact piecewise-constant and
piecewise-linear profiles (preferred; every downstream transform has a closed
form), and uniformly sampled data for ingestion of AWG-style exports.
Values exactly at breakpoints are measure-zero and irrelevant to every
computed functional; evaluation there returns the right-hand value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr


def _maybe_scalar(values, x):
    if np.ndim(x) == 0:
        return float(values)
    return values


@dataclass(frozen=True)
class PiecewiseConstantWaveform:
    """Sum of disjoint rectangular segments, zero outside all of them.

    ``segments`` is an ordered tuple of ``(start, end, amplitude)``.
    Segments must be sorted and non-overlapping; shared endpoints are fine.
    An empty tuple is the identically-zero waveform.
    """

    segments: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        segs = tuple(
            (float(s), float(e), float(a)) for (s, e, a) in self.segments
        )
        object.__setattr__(self, "segments", segs)
        prev_end = -math.inf
        for s, e, a in segs:
            if not (math.isfinite(s) and math.isfinite(e) and math.isfinite(a)):
                raise ValueError("segment endpoints and amplitudes must be finite")
            if not s < e:
                raise ValueError(f"segment start {s} must be < end {e}")
            if s < prev_end - 1e-15 * max(1.0, abs(prev_end)):
                raise ValueError("segments must be sorted and non-overlapping")
            prev_end = max(prev_end, e)

    def __call__(self, x):
        xa = _as_float_array(x)
        out = np.zeros_like(xa)
        for s, e, a in self.segments:
            out = np.where((xa >= s) & (xa < e), out + a, out)
        return _maybe_scalar(out, x)

    @property
    def support(self) -> tuple[float, float] | None:
        if not self.segments:
            return None
        return (self.segments[0][0], self.segments[-1][1])

    def net_area(self) -> float:
        return float(sum(a * (e - s) for s, e, a in self.segments))

    def abs_area(self) -> float:
        return float(sum(abs(a) * (e - s) for s, e, a in self.segments))

    def moment(self, n: int) -> float:
        """Exact n-th moment of the profile, integral of x**n * w(x)."""
        total = 0.0
        for s, e, a in self.segments:
            total += a * (e ** (n + 1) - s ** (n + 1)) / (n + 1)
        return float(total)

    def square_area(self) -> float:
        """Integral of w(x)**2."""
        return float(sum(a * a * (e - s) for s, e, a in self.segments))

    def jumps(self) -> tuple[np.ndarray, np.ndarray]:
        """Consolidated jump set: positions and signed value changes.

        Shared endpoints of equal-amplitude neighbours cancel and are dropped,
        so the returned set is exactly the set of actual discontinuities.
        """
        deltas: dict[float, float] = {}
        for s, e, a in self.segments:
            deltas[s] = deltas.get(s, 0.0) + a
            deltas[e] = deltas.get(e, 0.0) - a
        xs = sorted(x for x, d in deltas.items() if abs(d) > 0.0)
        return np.array(xs), np.array([deltas[x] for x in xs])

    def cumulative(self) -> "PiecewiseLinearWaveform":
        """Running integral from the far left; exact piecewise-linear result."""
        if not self.segments:
            return PiecewiseLinearWaveform(((0.0, 0.0), (1.0, 0.0)))
        pts: list[tuple[float, float]] = []
        acc = 0.0
        cursor = self.segments[0][0]
        pts.append((cursor, 0.0))
        for s, e, a in self.segments:
            if s > cursor:
                pts.append((s, acc))  # flat gap between segments
            acc += a * (e - s)
            pts.append((e, acc))
            cursor = e
        # deduplicate identical abscissae (shared endpoints)
        dedup: list[tuple[float, float]] = []
        for x, y in pts:
            if dedup and x == dedup[-1][0]:
                dedup[-1] = (x, y)
            else:
                dedup.append((x, y))
        return PiecewiseLinearWaveform(tuple(dedup))

    def shifted(self, dx: float) -> "PiecewiseConstantWaveform":
        return PiecewiseConstantWaveform(
            tuple((s + dx, e + dx, a) for s, e, a in self.segments)
        )

    def scaled_x(self, lam: float) -> "PiecewiseConstantWaveform":
        """Dilate the abscissa, x -> lam*x, keeping amplitudes."""
        if lam == 0:
            raise ValueError("scale factor must be nonzero")
        segs = [(s * lam, e * lam, a) for s, e, a in self.segments]
        if lam < 0:
            segs = [(e, s, a) for s, e, a in reversed(segs)]
        return PiecewiseConstantWaveform(tuple(segs))

    def __mul__(self, factor: float) -> "PiecewiseConstantWaveform":
        return PiecewiseConstantWaveform(
            tuple((s, e, a * factor) for s, e, a in self.segments)
        )

    __rmul__ = __mul__

    def __neg__(self) -> "PiecewiseConstantWaveform":
        return self * (-1.0)

    def __add__(self, other: "PiecewiseConstantWaveform") -> "PiecewiseConstantWaveform":
        if not isinstance(other, PiecewiseConstantWaveform):
            return NotImplemented
        edges = sorted(
            {s for s, _, _ in self.segments}
            | {e for _, e, _ in self.segments}
            | {s for s, _, _ in other.segments}
            | {e for _, e, _ in other.segments}
        )
        segs = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (lo + hi)
            amp = self(mid) + other(mid)
            if amp != 0.0:
                segs.append((lo, hi, amp))
        return PiecewiseConstantWaveform(tuple(segs))

    def __sub__(self, other: "PiecewiseConstantWaveform") -> "PiecewiseConstantWaveform":
        return self + (-other)


@dataclass(frozen=True)
class PiecewiseLinearWaveform:
    """Continuous piecewise-linear profile.

    Linear between breakpoints, constant outside equal to the terminal values.
    """

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        xs = [x for x, _ in pts]
        if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
            raise ValueError("breakpoint positions must be strictly increasing")
        if not all(math.isfinite(x) and math.isfinite(y) for x, y in pts):
            raise ValueError("breakpoints must be finite")

    @property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.breakpoints])

    @property
    def ys(self) -> np.ndarray:
        return np.array([y for _, y in self.breakpoints])

    def __call__(self, x):
        values = np.interp(_as_float_array(x), self.xs, self.ys)
        return _maybe_scalar(values, x)

    @property
    def support(self) -> tuple[float, float]:
        return (self.breakpoints[0][0], self.breakpoints[-1][0])

    def terminal_values(self) -> tuple[float, float]:
        return (self.breakpoints[0][1], self.breakpoints[-1][1])

    def terminal_value(self) -> float:
        return self.breakpoints[-1][1]

    def derivative(self) -> PiecewiseConstantWaveform:
        """Segment-wise slope; zero outside the breakpoint span."""
        segs = []
        pts = self.breakpoints
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
            slope = (y1 - y0) / (x1 - x0)
            if slope != 0.0:
                segs.append((x0, x1, slope))
        return PiecewiseConstantWaveform(tuple(segs))

    def slope_jumps(self) -> tuple[np.ndarray, np.ndarray]:
        """Positions and changes of the slope, counting the flat outside."""
        pts = self.breakpoints
        slopes = [0.0]
        for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
            slopes.append((y1 - y0) / (x1 - x0))
        slopes.append(0.0)
        xs, ds = [], []
        for i, (x, _) in enumerate(pts):
            d = slopes[i + 1] - slopes[i]
            if d != 0.0:
                xs.append(x)
                ds.append(d)
        return np.array(xs), np.array(ds)

    def net_area(self) -> float:
        """Integral over the breakpoint span (trapezoid rule is exact here).

        Meaningful as a total integral only when the terminal values vanish;
        callers that need decay enforce it themselves.
        """
        xs, ys = self.xs, self.ys
        return float(np.trapezoid(ys, xs))

    def abs_max(self) -> float:
        return float(np.max(np.abs(self.ys)))

    def shifted(self, dx: float) -> "PiecewiseLinearWaveform":
        return PiecewiseLinearWaveform(tuple((x + dx, y) for x, y in self.breakpoints))

    def scaled_x(self, lam: float) -> "PiecewiseLinearWaveform":
        if lam == 0:
            raise ValueError("scale factor must be nonzero")
        pts = [(x * lam, y) for x, y in self.breakpoints]
        if lam < 0:
            pts = list(reversed(pts))
        return PiecewiseLinearWaveform(tuple(pts))

    def __mul__(self, factor: float) -> "PiecewiseLinearWaveform":
        return PiecewiseLinearWaveform(tuple((x, y * factor) for x, y in self.breakpoints))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SampledWaveform:
    """Uniformly sampled data: value samples[i] at origin + i*spacing."""

    origin: float
    spacing: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", arr)
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError("spacing must be finite and positive")
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("need a 1-D array of at least two samples")

    @property
    def positions(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.samples.size)

    @property
    def support(self) -> tuple[float, float]:
        return (self.origin, self.origin + self.spacing * (self.samples.size - 1))

    def __call__(self, x):
        values = np.interp(_as_float_array(x), self.positions, self.samples,
                           left=0.0, right=0.0)
        return _maybe_scalar(values, x)

    def net_area(self) -> float:
        return float(np.trapezoid(self.samples, dx=self.spacing))

    def abs_area(self) -> float:
        return float(np.trapezoid(np.abs(self.samples), dx=self.spacing))

    def cumulative(self) -> "SampledWaveform":
        acc = np.concatenate([[0.0], np.cumsum(
            0.5 * (self.samples[1:] + self.samples[:-1]) * self.spacing)])
        return SampledWaveform(self.origin, self.spacing, acc)

    def shifted(self, dx: float) -> "SampledWaveform":
        return SampledWaveform(self.origin + dx, self.spacing, self.samples)

    def __mul__(self, factor: float) -> "SampledWaveform":
        return SampledWaveform(self.origin, self.spacing, self.samples * factor)

    __rmul__ = __mul__

    def __add__(self, other: "SampledWaveform") -> "SampledWaveform":
        if not isinstance(other, SampledWaveform):
            return NotImplemented
        same_grid = (
            self.samples.size == other.samples.size
            and abs(self.origin - other.origin) < 1e-12 * max(1.0, abs(self.origin))
            and abs(self.spacing - other.spacing) < 1e-12 * self.spacing
        )
        if not same_grid:
            raise ValueError("sampled waveforms must share the same grid to be added")
        return SampledWaveform(self.origin, self.spacing, self.samples + other.samples)


Waveform = Union[PiecewiseConstantWaveform, PiecewiseLinearWaveform, SampledWaveform]


def net_area(w: Waveform) -> float:
    """Total integral of the waveform (exact for piecewise types)."""
    return w.net_area()


def cumulative(w: PiecewiseConstantWaveform) -> PiecewiseLinearWaveform:
    """Running integral of a piecewise-constant waveform, from the far left."""
    return w.cumulative()


@dataclass(frozen=True)
class Bipolarity:
    """Outcome of the zero-net-area test."""

    bipolar: bool
    net_area: float
    abs_area: float

    def __bool__(self) -> bool:
        return self.bipolar


def bipolarity_check(V: Waveform, tol: float = 1e-9) -> Bipolarity:
    """Classify a voltage pulse as bipolar (zero net area) or unipolar.

    A pulse counts as bipolar when |integral of V| <= tol * integral of |V|.
    Only on bipolar pulses does the finite single-mode photon description
    exist; an AWG produces unipolar pulses just as easily, which is why this
    check sits in front of every photon-content computation.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    area = V.net_area()
    scale = V.abs_area()
    bipolar = abs(area) <= tol * scale or scale == 0.0
    return Bipolarity(bipolar, area, scale)


@dataclass(frozen=True)
class FieldPair:
    """Expectation fields of the line: charge density q(x) and flux phi(x).

    ``charge_neutral`` records whether q integrates to zero and
    ``flux_decays`` whether phi vanishes at both ends; both must hold for the
    single-mode photonic representation to exist.  phi is anchored so that
    phi(-inf) = 0; the right end then vanishes exactly when the pulse is
    bipolar, and the flag records the violation otherwise.
    """

    q: Waveform
    phi: Waveform
    charge_neutral: bool = True
    flux_decays: bool = True

    @staticmethod
    def create(q: Waveform, phi: Waveform, tol: float = 1e-9) -> "FieldPair":
        q_area = q.net_area()
        q_scale = q.abs_area() if hasattr(q, "abs_area") else 1.0
        neutral = abs(q_area) <= tol * q_scale or q_scale == 0.0
        if isinstance(phi, PiecewiseLinearWaveform):
            left, right = phi.terminal_values()
            scale = max(phi.abs_max(), 1e-300)
        else:
            samples = phi.samples if isinstance(phi, SampledWaveform) else None
            if samples is None:
                left = right = 0.0
                scale = 1.0
            else:
                left, right = float(samples[0]), float(samples[-1])
                scale = max(float(np.max(np.abs(samples))), 1e-300)
        decays = max(abs(left), abs(right)) <= tol * scale
        return FieldPair(q=q, phi=phi, charge_neutral=neutral, flux_decays=decays)


def right_mover_fields(V: Waveform, line, tol: float = 1e-9) -> FieldPair:
    """Fields of a purely right-moving pulse, determined by V alone.

    q = c*V and phi = -(1/v) * cumulative(V), anchored at phi(-inf) = 0.
    """
    q = V * line.c
    C = V.cumulative()
    phi = C * (-1.0 / line.v)
    return FieldPair.create(q, phi, tol=tol)


@dataclass(frozen=True)
class MoverDecomposition:
    """Right- and left-moving components of a (V, I) snapshot."""

    f_R: Waveform
    f_L: Waveform


def decompose_lr(V: Waveform, I: Waveform, line) -> MoverDecomposition:
    """Split a voltage/current snapshot into counter-propagating movers.

    f_R = (V + Z0*I)/2 and f_L = (V - Z0*I)/2; the snapshot is recovered as
    V = f_R + f_L, I = (f_R - f_L)/Z0.
    """
    z0 = line.z0
    f_R = (V + I * z0) * 0.5
    f_L = (V + I * (-z0)) * 0.5
    return MoverDecomposition(f_R=f_R, f_L=f_L)


def evolve(d: MoverDecomposition, t: float, line) -> tuple[Waveform, Waveform]:
    """Snapshot at time t: movers translate rigidly at speed +/- v.

    Returns (V(.,t), I(.,t)) with V = f_R(x - v t) + f_L(x + v t) and
    I = (f_R(x - v t) - f_L(x + v t))/Z0.
    """
    shift = line.v * t
    fr = d.f_R.shifted(shift)
    fl = d.f_L.shifted(-shift)
    V = fr + fl
    I = (fr + (-1.0) * fl) * (1.0 / line.z0)
    return V, I


def fields_from_snapshot(V: Waveform, I: Waveform, line, tol: float = 1e-9) -> FieldPair:
    """Expectation fields for a general (V, I) snapshot.

    q = c*V; phi = -ell * cumulative(I), anchored at phi(-inf) = 0.
    """
    q = V * line.c
    phi = I.cumulative() * (-line.ell)
    return FieldPair.create(q, phi, tol=tol)
