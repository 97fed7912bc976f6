"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import time
from contextlib import contextmanager

import numpy as np

from tlphotons import (
    FieldPair,
    KGrid,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    SampledWaveform,
    beta2_general,
    beta2_ir_cutoff,
    beta2_logkernel,
    beta2_rightmover,
    bogoliubov_components,
    capture_scan,
    coefficient_functions_rightmover,
    decompose_lr,
    default_energy_grid,
    energy_classical,
    energy_modes,
    evolve,
    fields_from_snapshot,
    fit_exponential,
    fit_log_slope,
    fit_power_law,
    hilbert_pcw,
    hilbert_plw,
    hilbert_sampled,
    integrate_norm_density,
    mode_amplitude,
    oracle_beta2,
    oracle_hilbert,
    oracle_time_invariance,
    right_mover_fields,
    split_pulse_sweep,
)
from tlphotons.line import LineParams
from tlphotons.photon_content import canonical_pulse, split_pulse

from conftest import random_bipolar_pulses

LINE = LineParams()
CANONICAL = canonical_pulse()
TARGET = 12.0 * math.log(27.0 / 16.0) / math.pi


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {label}")
        raise
    print(f"[PASS] criterion {number}: {label}")


def standing_fields(V, line):
    lo, hi = V.support
    return FieldPair.create(V * line.c,
                            PiecewiseLinearWaveform(((lo, 0.0), (hi, 0.0))))


def test_criterion_1_paper_value_reproduction():
    with criterion(1, "canonical beta^2 = 12 ln(27/16)/pi by all routes, < 1 s"):
        start = time.perf_counter()
        closed = beta2_logkernel(CANONICAL, LINE)
        quadr = beta2_rightmover(CANONICAL, LINE)
        fields = right_mover_fields(CANONICAL, LINE)
        general = beta2_general(fields, LINE)
        grid_oracle = oracle_beta2(fields, LINE)
        elapsed = time.perf_counter() - start
        assert abs(closed - TARGET) < 1e-12
        assert abs(quadr - TARGET) / TARGET < 1e-6
        assert abs(general - TARGET) / TARGET < 1e-6
        assert abs(grid_oracle - TARGET) / TARGET < 1e-3
        assert elapsed < 1.0, f"took {elapsed:.2f} s"


def test_criterion_2_split_pulse_brightness():
    with criterion(2, "split-pulse slope d(beta^2)/d(ln w) = 2/pi within 2%, < 10 s"):
        start = time.perf_counter()
        ws = np.geomspace(1e2, 1e4, 25)
        rows = split_pulse_sweep(ws, LINE)
        slope, _ = fit_log_slope(rows)
        elapsed = time.perf_counter() - start
        assert abs(slope - 2.0 / math.pi) / (2.0 / math.pi) < 0.02
        assert elapsed < 10.0, f"took {elapsed:.2f} s"


def test_criterion_3_unipolar_divergence():
    with criterion(3, "infrared cutoff fit A ln(1/k_min)+B with A=(net area)^2/pi within 1%"):
        kmins = np.geomspace(1e-6, 1e-2, 9)
        for V, area in ((PiecewiseConstantWaveform(((0.0, 1.0, 1.0),)), 1.0),
                        (PiecewiseConstantWaveform(((-0.5, 1.0, 2.0),)), 3.0)):
            values = [beta2_ir_cutoff(V, LINE, km) for km in kmins]
            A, _ = np.polyfit(np.log(1.0 / kmins), values, 1)
            predicted = area**2 / math.pi
            assert abs(A - predicted) / predicted < 0.01


def test_criterion_4_method_equivalence_suite():
    with criterion(4, "50 random bipolar pulses: routes agree, quadratic-form laws hold"):
        family = random_bipolar_pulses(50)
        for V in family:
            closed = beta2_logkernel(V, LINE)
            assert closed > 0.0
            assert abs(beta2_rightmover(V, LINE) - closed) / closed < 1e-6
            fields = right_mover_fields(V, LINE)
            assert abs(beta2_general(fields, LINE) - closed) / closed < 1e-6
            assert abs(mode_amplitude(fields, LINE).norm_sq - closed) / closed < 1e-3
            assert abs(oracle_beta2(fields, LINE) - closed) / closed < 1e-3
        # parallelogram law of the underlying quadratic form
        for V1, V2 in zip(family[:10], family[10:20]):
            lhs = beta2_logkernel(V1 + V2, LINE) + beta2_logkernel(V1 - V2, LINE)
            rhs = 2.0 * beta2_logkernel(V1, LINE) + 2.0 * beta2_logkernel(V2, LINE)
            assert abs(lhs - rhs) / rhs < 1e-9
        # scale invariance: same pulse measured in rescaled length units
        for V in family[:10]:
            base = beta2_logkernel(V, LINE)
            for lam in (0.1, 3.0, 42.0):
                rescaled = LineParams(c=LINE.c / lam, ell=LINE.ell / lam)
                assert abs(beta2_logkernel(V.scaled_x(lam), rescaled) - base) / base < 1e-9
        # additivity over counter-propagating movers
        for VR, VL in zip(family[:8], family[8:16]):
            parts = beta2_logkernel(VR, LINE) + beta2_logkernel(VL, LINE)
            snapshot = fields_from_snapshot(
                VR + VL, (VR + (-1.0) * VL) * (1.0 / LINE.z0), LINE)
            assert abs(beta2_general(snapshot, LINE) - parts) / parts < 1e-6
        # time invariance: closed form at 1e-6, discretized oracle at 1e-3
        for V in family[:5]:
            base = beta2_logkernel(V, LINE)
            movers = decompose_lr(V, V * (1.0 / LINE.z0), LINE)
            for t in (0.7, 3.0):
                Vt, It = evolve(movers, t, LINE)
                drift = beta2_general(fields_from_snapshot(Vt, It, LINE), LINE)
                assert abs(drift - base) / base < 1e-6
        assert oracle_time_invariance(standing_fields(CANONICAL, LINE),
                                      LINE, [0.5, 2.0]) < 1e-3


def test_criterion_5_energy_identity():
    with criterion(5, "mode-side energy equals classical field energy within 1e-3"):
        suite = [right_mover_fields(CANONICAL, LINE),
                 standing_fields(CANONICAL, LINE),
                 right_mover_fields(split_pulse(8.0), LINE)]
        suite += [right_mover_fields(V, LINE) for V in random_bipolar_pulses(12)]
        for fields in suite:
            classical = energy_classical(fields, LINE)
            modes = mode_amplitude(fields, LINE, kgrid=default_energy_grid())
            assert abs(energy_modes(modes, LINE) - classical) < 1e-3 * classical
        # canonical right-mover: both sides equal 4 in natural units
        rm = right_mover_fields(CANONICAL, LINE)
        assert abs(energy_classical(rm, LINE) - 4.0) < 1e-12
        modes = mode_amplitude(rm, LINE, kgrid=default_energy_grid())
        assert abs(energy_modes(modes, LINE) - 4.0) < 1e-3 * 4.0


def test_criterion_6_hilbert_convention_lock():
    with criterion(6, "closed-form, principal-value and DFT Hilbert transforms agree"):
        corpus = [CANONICAL] + random_bipolar_pulses(4, seed=7)
        for V in corpus:
            lo, hi = V.support
            for y in (lo - 1.234, hi + 0.777, hi + 9.1):
                assert abs(hilbert_pcw(V, y) - oracle_hilbert(V, y)) < 1e-10
        C = CANONICAL.cumulative()
        assert abs(hilbert_plw(C, 0.4321) - oracle_hilbert(C, 0.4321)) < 1e-10
        # DFT route on a dense wide grid
        n = 65536
        dx = 64.0 / n
        xs = -32.0 + (np.arange(n) + 0.5) * dx
        dft = hilbert_sampled(SampledWaveform(xs[0], dx, np.asarray(CANONICAL(xs))))
        for probe in (-0.5, 0.5, 3.0):
            idx = int(round((probe - xs[0]) / dx))
            assert abs(dft.samples[idx] - hilbert_pcw(CANONICAL, xs[idx])) < 1e-3
        # multiplier convention: H[sin] = -cos, exact on whole periods
        m = 512
        grid = np.arange(m) * (6 * 2 * math.pi / m)
        got = hilbert_sampled(SampledWaveform(0.0, grid[1], np.sin(grid)), pad_factor=1)
        assert np.max(np.abs(got.samples + np.cos(grid))) < 1e-6
        # parity: even -> odd and odd -> even
        ys = np.array([0.31, 1.27, 2.9])
        assert np.max(np.abs(hilbert_pcw(CANONICAL, ys)
                             + hilbert_pcw(CANONICAL, -ys))) < 1e-13
        odd = PiecewiseConstantWaveform(((-2.0, 0.0, -1.0), (0.0, 2.0, 1.0)))
        assert np.max(np.abs(hilbert_pcw(odd, ys) - hilbert_pcw(odd, -ys))) < 1e-13


def test_criterion_7_paley_wiener_suite():
    with criterion(7, "power-law tails outside the support; no exponential localization"):
        for V in random_bipolar_pulses(10):
            theta = coefficient_functions_rightmover(V, LINE)
            lo, hi = V.support
            ys = hi + np.linspace(5.0, 50.0, 12)
            assert np.min(np.abs(theta.re_theta_q(ys))) > 0.0
            assert np.min(np.abs(theta.re_theta_phi(ys))) > 0.0
        theta = coefficient_functions_rightmover(CANONICAL, LINE)
        ys = np.geomspace(10.0, 1000.0, 30)
        slope_q, _ = np.polyfit(np.log(ys), np.log(np.abs(theta.re_theta_q(ys))), 1)
        slope_phi, _ = np.polyfit(np.log(ys), np.log(np.abs(theta.re_theta_phi(ys))), 1)
        assert abs(slope_q + 3.0) < 0.1   # first nonvanishing moment is M2
        assert abs(slope_phi + 2.0) < 0.1
        kgrid = KGrid.uniform_symmetric(256.0, 16384)
        reports = capture_scan(theta, [4, 8, 16, 32, 64, 128, 256, 512], LINE, kgrid)
        halfwidths = [r.halfwidth for r in reports]
        eps = [r.epsilon for r in reports]
        assert all(b < a for a, b in zip(eps[:-1], eps[1:]))
        _, r2_pow = fit_power_law(halfwidths[-4:], eps[-4:])
        _, r2_exp = fit_exponential(halfwidths[-4:], eps[-4:])
        assert r2_pow >= 0.99
        assert r2_exp < r2_pow


def test_criterion_8_detection_identities():
    with criterion(8, "norm density, full-window coupler and RWA contamination"):
        kgrid = KGrid.uniform_symmetric(256.0, 16384)
        for V in [CANONICAL] + random_bipolar_pulses(3, seed=31):
            theta = coefficient_functions_rightmover(V, LINE)
            beta2 = beta2_logkernel(V, LINE)
            assert abs(integrate_norm_density(theta, LINE) - beta2) < 1e-6
        theta = coefficient_functions_rightmover(CANONICAL, LINE)
        beta2 = beta2_logkernel(CANONICAL, LINE)
        full = bogoliubov_components(theta, None, LINE, kgrid)
        modes = mode_amplitude(right_mover_fields(CANONICAL, LINE), LINE, kgrid=kgrid)
        assert np.max(np.abs(full.u - modes.values)) < 1e-6
        _, vv = full.residual_norms()
        assert vv < 1e-6 * beta2
        limited = bogoliubov_components(theta, (-2.0123, 2.0123), LINE, kgrid)
        _, vv = limited.residual_norms()
        assert vv > 0.0  # support-limited coupler has counter-rotating content
