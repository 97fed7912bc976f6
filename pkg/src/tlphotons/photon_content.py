"""Mean photon number of a pulse by three independent routes, the mode
amplitude over wavevectors, and brightness diagnostics.

For a right-moving bipolar voltage pulse the displacement amplitude obeys

    beta^2 = (1/(2 pi hbar)) (c/v) integral dk |F[V](k)|^2 / |k|
           = -(1/(pi hbar)) (c/v) double-integral V(x) V(y) ln|x-y| dx dy,

and for general fields

    beta^2 = (1/(4 pi hbar)) integral dk [ c v |k| |F[phi]|^2
                                           + |F[q]|^2 / (c v |k|) ].

The log-kernel sign deserves a note: the quadratic form with kernel
+ln|x-y| is negative on zero-mean functions, so the positive-definite
k-space form fixes the kernel as ln(1/|x-y|); the two routes agreeing is a
normative test of this package.  Unipolar pulses (nonzero net area) make the
k-integral diverge logarithmically at k -> 0: the photon number is
unbounded, which the API reports as a typed ``DIVERGENT`` outcome rather
than an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .errors import OverlappingSubPulses, QuadratureFailure, RepresentationDoesNotExist, UnipolarPulse
from .kgrid import KGrid
from .line import LineParams
from .transforms import fourier, fourier_pcw
from .waveform import (
    FieldPair,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    SampledWaveform,
    bipolarity_check,
)


class Divergent:
    """Typed outcome: the photon number is unbounded (infrared divergence)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"


class NotApplicable:
    """Typed outcome: the method's preconditions do not hold for this input."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotApplicable"


DIVERGENT = Divergent()
NOT_APPLICABLE = NotApplicable()

Beta2Outcome = Union[float, Divergent, NotApplicable]


def canonical_pulse(v0: float = 1.0, x0: float = 1.0) -> PiecewiseConstantWaveform:
    """Bipolar three-level square pulse used throughout the test suite.

    +v0 on (-x0, x0), flanked by -v0 on (-2x0, -x0) and (x0, 2x0).  Even,
    bipolar, with jumps at +/-x0 and +/-2x0.
    """
    return PiecewiseConstantWaveform((
        (-2.0 * x0, -x0, -v0),
        (-x0, x0, v0),
        (x0, 2.0 * x0, -v0),
    ))


def split_pulse(w: float, v0: float = 1.0, x0: float = 1.0) -> PiecewiseConstantWaveform:
    """Two short square sub-pulses whose leading edges are w*x0 apart.

    Each sub-pulse spans three intervals of length x0 with amplitudes
    (+v0, -v0, +v0); the second sub-pulse is negated.  Neither integrates to
    zero on its own (each carries net area +/- v0*x0), so the pair must be
    analyzed together; the total is bipolar.  Requires w > 3.
    """
    if not w > 3.0:
        raise OverlappingSubPulses(
            f"leading-edge separation w = {w:g} must exceed 3 sub-pulse widths")
    a = [(0.0, 1.0, v0), (1.0, 2.0, -v0), (2.0, 3.0, v0)]
    b = [(w, w + 1.0, -v0), (w + 1.0, w + 2.0, v0), (w + 2.0, w + 3.0, -v0)]
    return PiecewiseConstantWaveform(
        tuple((s * x0, e * x0, amp) for s, e, amp in a + b))


# ---------------------------------------------------------------------------
# closed-form log-kernel route
# ---------------------------------------------------------------------------

def _g(u):
    """Second antiderivative of ln|u|: g(u) = (u^2/2)(ln|u| - 3/2), g(0) = 0."""
    u = np.asarray(u, dtype=float)
    safe = np.where(u == 0.0, 1.0, np.abs(u))
    return np.where(u == 0.0, 0.0, 0.5 * u * u * (np.log(safe) - 1.5))


def _segment_pair_kernel(seg_i, seg_j) -> float:
    """Double integral of ln|x-y| over a pair of segments."""
    a, b = seg_i
    c, d = seg_j
    return float(_g(b - c) + _g(a - d) - _g(a - c) - _g(b - d))


def beta2_logkernel(V: PiecewiseConstantWaveform, line: LineParams,
                    tol: float = 1e-9) -> float:
    """Photon number from the translationally invariant log kernel, exact.

    beta^2 = -(1/(pi hbar)) (c/v) sum_ij a_i a_j J(seg_i, seg_j) with
    J the pairwise double integral of ln|x-y|.  Scale invariant and exact
    to roundoff for piecewise-constant bipolar pulses.
    """
    if not isinstance(V, PiecewiseConstantWaveform):
        raise TypeError("log-kernel route needs a piecewise-constant pulse")
    check = bipolarity_check(V, tol=tol)
    if not check.bipolar:
        raise UnipolarPulse(check.net_area)
    total = 0.0
    segs = V.segments
    for si, ei, ai in segs:
        for sj, ej, aj in segs:
            if ai == 0.0 or aj == 0.0:
                continue
            total += ai * aj * _segment_pair_kernel((si, ei), (sj, ej))
    return -(line.c / line.v) * total / (math.pi * line.hbar)


# ---------------------------------------------------------------------------
# k-space quadrature routes with exact ultraviolet tails
# ---------------------------------------------------------------------------

def _i3(s):
    """integral_s^inf cos(u)/u^3 du for s > 0."""
    s = np.asarray(s, dtype=float)
    si, ci = sici(s)
    return np.cos(s) / (2.0 * s * s) - np.sin(s) / (2.0 * s) + 0.5 * ci


def _pair_tail(positions: np.ndarray, weights: np.ndarray, K: float) -> float:
    """Exact integral_K^inf sum_ij w_i w_j cos(k (x_i - x_j)) / k^3 dk.

    This is the ultraviolet tail of |sum_j w_j e^{-i k x_j}|^2 / k^3, the
    universal large-k form of both |F[q]|^2/k and k|F[phi]|^2 for piecewise
    profiles (w = value jumps resp. slope jumps).
    """
    if positions.size == 0:
        return 0.0
    d = positions[:, None] - positions[None, :]
    ww = weights[:, None] * weights[None, :]
    out = np.sum(ww[d == 0.0]) / (2.0 * K * K)
    mask = d != 0.0
    if np.any(mask):
        dd = np.abs(d[mask])
        out += np.sum(ww[mask] * dd * dd * _i3(dd * K))
    return float(out)


def _quad_checked(fn, lo, hi, what, epsabs=1e-13, epsrel=1e-11, limit=800):
    value, abserr, *rest = quad(fn, lo, hi, epsabs=epsabs, epsrel=epsrel,
                                limit=limit, full_output=1)
    if rest and len(rest) > 1:  # infodict plus warning message
        raise QuadratureFailure(abserr, max(epsabs, epsrel * abs(value)), what)
    if abserr > 100.0 * max(epsabs, epsrel * max(abs(value), 1e-300)):
        raise QuadratureFailure(abserr, max(epsabs, epsrel * abs(value)), what)
    return value


_SPLIT_K = 12.0  # arbitrary split between adaptive quadrature and exact tail


def _split_point(*waveforms) -> float:
    """Quadrature/tail split, lowered for wide pulses.

    The exact jump-pair tail holds for any split point, so the only job of
    the quadrature segment is the non-asymptotic part near k = 0; keeping
    K * span bounded keeps the number of integrand oscillations (and hence
    the adaptive subdivision count) independent of the pulse width.
    """
    span = 0.0
    for w in waveforms:
        s = w.support
        if s is not None:
            span = max(span, s[1] - s[0])
    if span <= 0.0:
        return _SPLIT_K
    return min(_SPLIT_K, max(0.05, 128.0 * math.pi / span))


def beta2_rightmover(V: PiecewiseConstantWaveform, line: LineParams,
                     tol: float = 1e-9) -> float:
    """Photon number of a right-moving bipolar pulse by k-space quadrature.

    (1/(2 pi hbar)) (c/v) integral dk |F[V]|^2/|k|, evaluated adaptively on
    [0, K] and with the exact jump-pair tail beyond K (the split point is
    arbitrary; the tail is not an approximation).
    """
    if not isinstance(V, PiecewiseConstantWaveform):
        raise TypeError("right-mover route needs a piecewise-constant pulse")
    check = bipolarity_check(V, tol=tol)
    if not check.bipolar:
        raise UnipolarPulse(check.net_area)
    if not V.segments:
        return 0.0

    def integrand(k):
        F = fourier_pcw(V, k)
        return (F.real * F.real + F.imag * F.imag) / k

    split = _split_point(V)
    body = _quad_checked(integrand, 0.0, split, "beta2 right-mover")
    xs, deltas = V.jumps()
    tail = _pair_tail(xs, deltas, split)
    return (line.c / line.v) * (body + tail) / (math.pi * line.hbar)


def beta2_ir_cutoff(V: PiecewiseConstantWaveform, line: LineParams,
                    k_min: float) -> float:
    """Photon number with the |k| < k_min modes excised.

    Finite for any pulse; for unipolar pulses it grows like
    A*ln(1/k_min) + B as the cutoff is lowered, with A given by
    ``ir_divergence_coefficient``.
    """
    if not isinstance(V, PiecewiseConstantWaveform):
        raise TypeError("cutoff route needs a piecewise-constant pulse")
    if not V.segments:
        return 0.0
    split = _split_point(V)
    if not 0.0 < k_min < split:
        raise ValueError(f"k_min must lie in (0, {split:g})")

    def integrand(k):
        F = fourier_pcw(V, k)
        return (F.real * F.real + F.imag * F.imag) / k

    body = _quad_checked(integrand, k_min, split, "beta2 with IR cutoff")
    xs, deltas = V.jumps()
    tail = _pair_tail(xs, deltas, split)
    return (line.c / line.v) * (body + tail) / (math.pi * line.hbar)


def ir_divergence_coefficient(V, line: LineParams) -> float:
    """Coefficient A of the ln(1/k_min) divergence of the photon number.

    A = (1/(pi hbar)) (c/v) (net area)^2; zero exactly for bipolar pulses.
    """
    area = V.net_area()
    return (line.c / line.v) * area * area / (math.pi * line.hbar)


def check_representation(fields: FieldPair, tol: float = 1e-9) -> str | None:
    """Name of the violated existence condition, or None when both hold."""
    q, phi = fields.q, fields.phi
    q_scale = q.abs_area()
    if q_scale > 0 and abs(q.net_area()) > tol * q_scale:
        return "charge_neutrality"
    if isinstance(phi, PiecewiseLinearWaveform):
        lo, hi = phi.terminal_values()
        scale = max(phi.abs_max(), 1e-300)
    elif isinstance(phi, SampledWaveform):
        lo, hi = float(phi.samples[0]), float(phi.samples[-1])
        scale = max(float(np.max(np.abs(phi.samples))), 1e-300)
    else:
        return None
    if max(abs(lo), abs(hi)) > tol * scale:
        return "flux_decay"
    return None


def beta2_general(fields: FieldPair, line: LineParams,
                  tol: float = 1e-9) -> float | Divergent:
    """Photon number from general (q, phi) fields; detects divergence.

    Returns ``DIVERGENT`` when the k -> 0 integrand behaves as 1/|k|, i.e.
    when q has nonzero net area or phi fails to vanish at the ends.
    """
    q, phi = fields.q, fields.phi
    if not isinstance(q, PiecewiseConstantWaveform):
        raise TypeError("general route needs piecewise-constant q")
    if not isinstance(phi, PiecewiseLinearWaveform):
        raise TypeError("general route needs piecewise-linear phi")
    if check_representation(fields, tol=tol) is not None:
        return DIVERGENT
    cv = line.c * line.v
    phi_zero = phi.abs_max() == 0.0

    def integrand(k):
        Fq = fourier(q, k)
        total = (Fq.real * Fq.real + Fq.imag * Fq.imag) / (cv * k)
        if not phi_zero:
            Fp = fourier(phi, k)
            total += cv * k * (Fp.real * Fp.real + Fp.imag * Fp.imag)
        return total

    split = _split_point(q, phi)
    body = _quad_checked(integrand, 0.0, split, "beta2 general")
    xs, deltas = q.jumps()
    tail = _pair_tail(xs, deltas, split) / cv
    if not phi_zero:
        xs, slopes = phi.slope_jumps()
        tail += cv * _pair_tail(xs, slopes, split)
    return (body + tail) / (2.0 * math.pi * line.hbar)


def naive_photon_estimate(V, line: LineParams) -> float:
    """Textbook E*T/hbar estimate, reported to expose its failure modes.

    E = c * integral V^2 dx (the classical energy of a right-moving pulse)
    and T = support width / v.  For stretched-out pulses this grows with the
    width while the true photon number grows only logarithmically.
    """
    support = V.support
    if support is None:
        return 0.0
    width = support[1] - support[0]
    if isinstance(V, PiecewiseConstantWaveform):
        e = line.c * V.square_area()
    else:
        raise TypeError("naive estimate needs a piecewise-constant pulse")
    return (e / line.hbar) * (width / line.v)


# ---------------------------------------------------------------------------
# mode amplitude over wavevectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeAmplitude:
    """Displacement density alpha(k) of the pulse mode on a wavevector grid.

    norm_sq is the grid quadrature of |alpha|^2, i.e. beta^2; the normalized
    spectrum xi = alpha/beta then integrates to one on the same grid by
    construction.
    """

    kgrid: KGrid
    values: np.ndarray
    norm_sq: float

    @property
    def xi_values(self) -> np.ndarray:
        return self.values / math.sqrt(self.norm_sq)

    def spectral_weights(self) -> np.ndarray:
        """|xi(k)|^2 times the quadrature weights; sums to one."""
        xi = self.xi_values
        return (xi.real**2 + xi.imag**2) * self.kgrid.weights

    def mean_abs_k(self) -> float:
        return float(np.sum(np.abs(self.kgrid.nodes) * self.spectral_weights()))

    def median_abs_k(self) -> float:
        k = np.abs(self.kgrid.nodes)
        order = np.argsort(k)
        cdf = np.cumsum(self.spectral_weights()[order])
        idx = int(np.searchsorted(cdf, 0.5 * cdf[-1]))
        return float(k[order][min(idx, k.size - 1)])


def mode_amplitude_function(fields: FieldPair, line: LineParams):
    """Closed-form evaluator k -> alpha(k) for piecewise fields."""
    q, phi = fields.q, fields.phi
    cv = line.c * line.v
    norm = 1.0 / (2.0 * math.sqrt(math.pi * line.hbar))
    phi_zero = isinstance(phi, PiecewiseLinearWaveform) and phi.abs_max() == 0.0

    def alpha(k):
        ka = np.asarray(k, dtype=float)
        root = np.sqrt(cv * np.abs(ka))
        Fq = fourier(q, -ka)
        out = 1j * Fq / root
        if not phi_zero:
            out = out + root * fourier(phi, -ka)
        return norm * out

    return alpha


def mode_amplitude(fields: FieldPair, line: LineParams,
                   kgrid: KGrid | None = None, tol: float = 1e-9) -> ModeAmplitude:
    """Evaluate alpha(k) on a grid and form the photon-number norm.

    Raises RepresentationDoesNotExist when the fields violate either
    existence condition (nonzero net charge, non-decaying flux).
    """
    violated = check_representation(fields, tol=tol)
    if violated is not None:
        raise RepresentationDoesNotExist(violated)
    if kgrid is None:
        # widen the default grid when the pulse span squeezes spectral
        # structure below the default bin size
        k_max, n_side = 256.0, 32768
        spans = [w.support for w in (fields.q, fields.phi) if w.support is not None]
        if spans:
            width = max(s[1] for s in spans) - min(s[0] for s in spans)
            while n_side < 8.0 * width * k_max / math.pi:
                n_side <<= 1
        kgrid = KGrid.uniform_symmetric(k_max, n_side)
    alpha = mode_amplitude_function(fields, line)
    values = alpha(kgrid.nodes)
    norm_sq = float(kgrid.integrate(values.real**2 + values.imag**2))
    return ModeAmplitude(kgrid=kgrid, values=values, norm_sq=norm_sq)


# ---------------------------------------------------------------------------
# split-pulse brightness sweep
# ---------------------------------------------------------------------------

def split_pulse_sweep(separations, line: LineParams,
                      v0: float = 1.0, x0: float = 1.0) -> list[tuple[float, float]]:
    """beta^2 of the two-sub-pulse train for each leading-edge separation w.

    Each sub-pulse alone is unipolar; together they are bipolar, and the
    brightness grows logarithmically with the separation.
    """
    rows = []
    for w in separations:
        V = split_pulse(float(w), v0=v0, x0=x0)
        rows.append((float(w), beta2_logkernel(V, line)))
    return rows


def fit_log_slope(rows) -> tuple[float, float]:
    """Least-squares fit of beta2 = slope*ln(w) + intercept over sweep rows."""
    w = np.array([r[0] for r in rows], dtype=float)
    b = np.array([r[1] for r in rows], dtype=float)
    slope, intercept = np.polyfit(np.log(w), b, 1)
    return float(slope), float(intercept)


# ---------------------------------------------------------------------------
# aggregated report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhotonReport:
    """Everything the analysis front end reports about one pulse."""

    beta2_general: Beta2Outcome
    beta2_rightmover: Beta2Outcome
    beta2_logkernel: Beta2Outcome
    ir_coefficient: float
    naive_estimate: float
    mean_abs_k: float | None
    median_abs_k: float | None
    charge_neutral: bool
    flux_decays: bool
    bipolar: bool

    @property
    def divergent(self) -> bool:
        return self.beta2_general is DIVERGENT


def analyze_pulse(V: PiecewiseConstantWaveform, line: LineParams,
                  current: PiecewiseConstantWaveform | None = None,
                  kgrid: KGrid | None = None, tol: float = 1e-9) -> PhotonReport:
    """Run every applicable beta^2 method on a pulse and collect diagnostics.

    With ``current=None`` the pulse is taken to be the right-moving output of
    a generator.  With an explicit current the snapshot is decomposed; the
    right-mover-only routes apply only when the left-moving part vanishes.
    """
    from .waveform import decompose_lr, fields_from_snapshot, right_mover_fields

    if current is None:
        fields = right_mover_fields(V, line, tol=tol)
        pure_right = True
    else:
        fields = fields_from_snapshot(V, current, line, tol=tol)
        movers = decompose_lr(V, current, line)
        left_scale = movers.f_L.abs_area()
        pure_right = left_scale <= tol * max(movers.f_R.abs_area(), 1e-300)

    check = bipolarity_check(V, tol=tol) if V.segments else None
    bipolar = bool(check.bipolar) if check is not None else True

    general = beta2_general(fields, line, tol=tol)
    if pure_right and bipolar:
        rightmover: Beta2Outcome = beta2_rightmover(V, line, tol=tol)
        logkernel: Beta2Outcome = beta2_logkernel(V, line, tol=tol)
    else:
        rightmover = NOT_APPLICABLE
        logkernel = NOT_APPLICABLE

    mean_k = median_k = None
    if general is not DIVERGENT and V.abs_area() > 0.0:
        modes = mode_amplitude(fields, line, kgrid=kgrid, tol=tol)
        mean_k = modes.mean_abs_k()
        median_k = modes.median_abs_k()

    return PhotonReport(
        beta2_general=general,
        beta2_rightmover=rightmover,
        beta2_logkernel=logkernel,
        ir_coefficient=ir_divergence_coefficient(V, line),
        naive_estimate=naive_photon_estimate(V, line),
        mean_abs_k=mean_k,
        median_abs_k=median_k,
        charge_neutral=fields.charge_neutral,
        flux_decays=fields.flux_decays,
        bipolar=bipolar,
    )
