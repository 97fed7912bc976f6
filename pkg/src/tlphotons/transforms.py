"""Hilbert and Fourier transforms of pulse profiles, and the complex
coefficient functions that define the pulse's single photon mode.

Convention
----------
The Hilbert transform used throughout is the Fourier-multiplier form

    H[f] = Finv[ -i * sgn(k) * F[f] ],   F[f](k) = integral f(x) e^{-ikx} dx,

equivalently H[f](y) = (1/pi) PV integral f(x)/(y - x) dx.  Under it
H[sin] = -cos and H maps even functions to odd ones.  For a piecewise-
constant input with value jumps D_j at x_j the closed form is

    H[f](y) = (1/pi) * sum_j D_j * ln|y - x_j|,

with logarithmic singularities exactly at the jump set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EvaluationAtSingularity,
    NonDecayingInput,
    RepresentationDoesNotExist,
    TooShort,
    UnipolarPulse,
)
from .waveform import (
    FieldPair,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    SampledWaveform,
    bipolarity_check,
)


def _maybe_scalar(values, x):
    if np.ndim(x) == 0:
        return complex(values) if np.iscomplexobj(values) else float(values)
    return values


def _check_off_singularities(y, positions, tol=1e-14):
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    if positions.size == 0 or ya.size == 0:
        return
    dist = np.min(np.abs(ya[:, None] - positions[None, :]), axis=1)
    scale = max(1.0, float(np.max(np.abs(positions))))
    if np.any(dist <= tol * scale):
        bad = ya[dist <= tol * scale][0]
        raise EvaluationAtSingularity(
            f"Hilbert transform diverges logarithmically at x = {bad:g}"
        )


def hilbert_pcw(w: PiecewiseConstantWaveform, y):
    """Hilbert transform of a piecewise-constant waveform, exact.

    Raises EvaluationAtSingularity when y hits a jump of the input within
    1e-14 (relative); the transform has a log divergence there.
    """
    xs, deltas = w.jumps()
    _check_off_singularities(y, xs)
    ya = np.asarray(y, dtype=float)
    if xs.size == 0:
        return _maybe_scalar(np.zeros_like(ya), y)
    vals = np.tensordot(np.log(np.abs(ya[..., None] - xs)), deltas, axes=([-1], [0]))
    return _maybe_scalar(vals / np.pi, y)


def hilbert_plw(w: PiecewiseLinearWaveform, y):
    """Hilbert transform of a continuous piecewise-linear waveform, exact.

    Requires zero terminal values (the transform of a non-decaying input does
    not exist classically).  The result is continuous everywhere: the
    would-be log singularities at breakpoints are multiplied by (y - x_j).
    """
    lo, hi = w.terminal_values()
    scale = max(w.abs_max(), 1e-300)
    if max(abs(lo), abs(hi)) > 1e-9 * scale:
        raise NonDecayingInput(
            f"terminal values ({lo:g}, {hi:g}) are nonzero; Hilbert transform undefined"
        )
    xs, dslopes = w.slope_jumps()
    ya = np.asarray(y, dtype=float)
    if xs.size == 0:
        return _maybe_scalar(np.zeros_like(ya), y)
    diff = ya[..., None] - xs
    # (y - x_j) * ln|y - x_j| extended by continuity to 0 at y = x_j
    term = np.where(diff == 0.0, 0.0, diff * np.log(np.abs(np.where(diff == 0.0, 1.0, diff))))
    vals = np.tensordot(term, dslopes, axes=([-1], [0]))
    return _maybe_scalar(vals / np.pi, y)


def hilbert_sampled(w: SampledWaveform, pad_factor: int = 8) -> SampledWaveform:
    """Discrete Hilbert transform via the DFT multiplier -i*sgn(k).

    The DC and Nyquist bins are annihilated.  With ``pad_factor > 1`` the
    data is zero-padded symmetrically to at least ``pad_factor`` times its
    length to control periodic wraparound, and a short cosine taper is
    applied to the outermost 5% of samples when the data does not already
    decay to zero at its ends.  For signals that are genuinely periodic over
    the sampled span (e.g. sinusoids over whole periods) use
    ``pad_factor=1``: the periodic DFT is then exact.
    """
    n = w.samples.size
    if n < 4:
        raise TooShort(f"need at least 4 samples, got {n}")
    if pad_factor < 1:
        raise ValueError("pad_factor must be >= 1")
    data = w.samples.astype(float).copy()
    if pad_factor > 1:
        peak = np.max(np.abs(data))
        edge = max(abs(data[0]), abs(data[-1]))
        if peak > 0 and edge > 1e-12 * peak:
            m = max(2, n // 20)
            ramp = 0.5 * (1.0 - np.cos(np.pi * np.arange(m) / m))
            data[:m] *= ramp
            data[-m:] *= ramp[::-1]
        total = 1 << int(np.ceil(np.log2(n * pad_factor)))
        left = (total - n) // 2
    else:
        total = n
        left = 0
    buf = np.zeros(total)
    buf[left:left + n] = data
    spectrum = np.fft.fft(buf)
    freq = np.fft.fftfreq(total)
    mult = -1j * np.sign(freq)
    mult[0] = 0.0
    if total % 2 == 0:
        mult[total // 2] = 0.0
    out = np.fft.ifft(spectrum * mult).real[left:left + n]
    return SampledWaveform(w.origin, w.spacing, out)


def _stable_sinc(z):
    """sin(z)/z, stable at 0."""
    return np.sinc(z / np.pi)


def _psi(z):
    """(sin z - z cos z)/z**2, stable near 0."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    direct = (np.sin(zs) - zs * np.cos(zs)) / zs**2
    series = z / 3.0 - z**3 / 30.0
    return np.where(small, series, direct)


def fourier_pcw(w: PiecewiseConstantWaveform, k):
    """F[w](k) = integral w(x) e^{-ikx} dx, exact and stable for all k.

    Each segment contributes amp * len * e^{-ik m} * sinc(k len / 2)
    with m the segment midpoint; the k -> 0 limit is the net area.
    """
    ka = np.asarray(k, dtype=float)
    out = np.zeros(ka.shape, dtype=complex)
    for s, e, a in w.segments:
        half = 0.5 * (e - s)
        mid = 0.5 * (s + e)
        out += a * (e - s) * np.exp(-1j * ka * mid) * _stable_sinc(ka * half)
    return _maybe_scalar(out, k)


def fourier_plw(w: PiecewiseLinearWaveform, k):
    """F[w](k) for a continuous piecewise-linear waveform with zero terminals."""
    lo, hi = w.terminal_values()
    scale = max(w.abs_max(), 1e-300)
    if max(abs(lo), abs(hi)) > 1e-9 * scale:
        raise NonDecayingInput(
            "Fourier transform undefined: waveform does not decay at infinity"
        )
    ka = np.asarray(k, dtype=float)
    out = np.zeros(ka.shape, dtype=complex)
    pts = w.breakpoints
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        half = 0.5 * (x1 - x0)
        mid = 0.5 * (x0 + x1)
        slope = (y1 - y0) / (x1 - x0)
        value_mid = 0.5 * (y0 + y1)
        phase = np.exp(-1j * ka * mid)
        out += phase * (
            value_mid * 2.0 * half * _stable_sinc(ka * half)
            - 2.0j * slope * half**2 * _psi(ka * half)
        )
    return _maybe_scalar(out, k)


def fourier_sampled(w: SampledWaveform, k, chunk: int = 4096):
    """Trapezoid-rule Fourier transform of sampled data (ingestion grade)."""
    ka = np.atleast_1d(np.asarray(k, dtype=float))
    xs = w.positions
    weights = np.full(xs.size, w.spacing)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    fw = w.samples * weights
    out = np.empty(ka.size, dtype=complex)
    for i in range(0, ka.size, chunk):
        kk = ka[i:i + chunk]
        out[i:i + chunk] = np.exp(-1j * np.outer(kk, xs)) @ fw
    out = out.reshape(np.shape(k)) if np.ndim(k) else out[0]
    return _maybe_scalar(out, k)


def fourier(w, k):
    """Fourier transform dispatching on the waveform representation."""
    if isinstance(w, PiecewiseConstantWaveform):
        return fourier_pcw(w, k)
    if isinstance(w, PiecewiseLinearWaveform):
        return fourier_plw(w, k)
    if isinstance(w, SampledWaveform):
        return fourier_sampled(w, k)
    raise TypeError(f"unsupported waveform type {type(w).__name__}")


@dataclass(frozen=True)
class HilbertEvaluation:
    """Evaluable Hilbert transform of a piecewise waveform.

    Carries the convention marker and the positions of the logarithmic
    singularities (exactly the jump set of the input; empty for continuous
    inputs).
    """

    waveform: object
    convention: str = "fourier multiplier -i*sgn(k)"

    @property
    def singularities(self) -> tuple[float, ...]:
        if isinstance(self.waveform, PiecewiseConstantWaveform):
            xs, _ = self.waveform.jumps()
            return tuple(float(x) for x in xs)
        return ()

    def __call__(self, y):
        if isinstance(self.waveform, PiecewiseConstantWaveform):
            return hilbert_pcw(self.waveform, y)
        if isinstance(self.waveform, PiecewiseLinearWaveform):
            return hilbert_plw(self.waveform, y)
        raise TypeError("closed-form Hilbert evaluation needs a piecewise waveform")


@dataclass(frozen=True)
class CoefficientFunctions:
    """The complex pair (theta_q, theta_phi) defining the pulse mode.

    The imaginary parts are the physical fields themselves, q(x) and phi(x);
    the real parts are Hilbert transforms with the structure

        Re theta_q(x)   = sum_j  c_j * ln|x - x_j|
        Re theta_phi(x) = sum_j  d_j * (x - x_j) * ln|x - x_j|

    stored here as explicit coefficient/position arrays so that detection
    and windowed-transform code can integrate them in closed form.  The
    imaginary parts vanish outside the field support; the real parts do not
    (they carry power-law tails over all space).
    """

    log_coeffs: np.ndarray
    log_positions: np.ndarray
    xlog_coeffs: np.ndarray
    xlog_positions: np.ndarray
    q: object
    phi: object
    provenance: str

    @property
    def singularities(self) -> np.ndarray:
        """Positions where theta_q diverges logarithmically."""
        return self.log_positions[np.abs(self.log_coeffs) > 0.0]

    def re_theta_q(self, x):
        xa = np.asarray(x, dtype=float)
        _check_off_singularities(xa, self.singularities)
        if self.log_positions.size == 0:
            return _maybe_scalar(np.zeros(xa.shape), x)
        vals = np.tensordot(
            np.log(np.abs(xa[..., None] - self.log_positions)),
            self.log_coeffs, axes=([-1], [0]))
        return _maybe_scalar(vals, x)

    def re_theta_phi(self, x):
        xa = np.asarray(x, dtype=float)
        if self.xlog_positions.size == 0:
            return _maybe_scalar(np.zeros(xa.shape), x)
        diff = xa[..., None] - self.xlog_positions
        term = np.where(diff == 0.0, 0.0,
                        diff * np.log(np.abs(np.where(diff == 0.0, 1.0, diff))))
        vals = np.tensordot(term, self.xlog_coeffs, axes=([-1], [0]))
        return _maybe_scalar(vals, x)

    def theta_q(self, x):
        re = self.re_theta_q(x)
        return re + 1j * self.q(x)

    def theta_phi(self, x):
        re = self.re_theta_phi(x)
        return re + 1j * self.phi(x)


def coefficient_functions_rightmover(V: PiecewiseConstantWaveform, line,
                                     tol: float = 1e-9) -> CoefficientFunctions:
    """Coefficient functions of a right-moving pulse, from V alone.

    theta_q = -H[c V] + i c V and theta_phi = H[(1/v) C] - (i/v) C with
    C the running integral of V.  Requires a bipolar pulse; otherwise the
    photonic representation does not exist and UnipolarPulse is raised.
    """
    if not isinstance(V, PiecewiseConstantWaveform):
        raise TypeError("closed-form coefficient functions need a piecewise-constant V")
    check = bipolarity_check(V, tol=tol)
    if not check.bipolar:
        raise UnipolarPulse(check.net_area)
    xs, deltas = V.jumps()
    q = V * line.c
    phi = V.cumulative() * (-1.0 / line.v)
    return CoefficientFunctions(
        log_coeffs=-line.c * deltas / np.pi,
        log_positions=xs,
        xlog_coeffs=deltas / (np.pi * line.v),
        xlog_positions=xs,
        q=q,
        phi=phi,
        provenance="right_mover",
    )


def coefficient_functions_general(fields: FieldPair, line,
                                  tol: float = 1e-9) -> CoefficientFunctions:
    """Coefficient functions for arbitrary (q, phi) fields.

    theta_q = H[c v dphi/dx] + i q and theta_phi = H[(1/(c v)) Q] + i phi,
    where Q is the running integral of q and the derivative of the
    piecewise-linear phi is taken segment-wise.  Both existence conditions
    are enforced: q must integrate to zero and phi must vanish at both ends.
    """
    q, phi = fields.q, fields.phi
    if not isinstance(q, PiecewiseConstantWaveform) or not isinstance(phi, PiecewiseLinearWaveform):
        raise TypeError("closed-form path needs piecewise-constant q and piecewise-linear phi")
    q_area = q.net_area()
    q_scale = q.abs_area()
    if q_scale > 0 and abs(q_area) > tol * q_scale:
        raise RepresentationDoesNotExist(
            "charge_neutrality", f"charge density integrates to {q_area:g}")
    lo, hi = phi.terminal_values()
    phi_scale = max(phi.abs_max(), 1e-300)
    if max(abs(lo), abs(hi)) > tol * phi_scale:
        raise RepresentationDoesNotExist(
            "flux_decay", f"flux field tends to ({lo:g}, {hi:g}) at the ends")
    slope_xs, slope_jumps = phi.slope_jumps()
    q_xs, q_deltas = q.jumps()
    cv = line.c * line.v
    return CoefficientFunctions(
        log_coeffs=cv * slope_jumps / np.pi,
        log_positions=slope_xs,
        xlog_coeffs=q_deltas / (np.pi * cv),
        xlog_positions=q_xs,
        q=q,
        phi=phi,
        provenance="general",
    )
