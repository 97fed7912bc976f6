import math

import numpy as np
import pytest

from tlphotons import (
    DIVERGENT,
    FieldPair,
    OverlappingSubPulses,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    RepresentationDoesNotExist,
    UnipolarPulse,
    beta2_general,
    beta2_ir_cutoff,
    beta2_logkernel,
    beta2_rightmover,
    decompose_lr,
    evolve,
    fields_from_snapshot,
    ir_divergence_coefficient,
    mode_amplitude,
    naive_photon_estimate,
    right_mover_fields,
    split_pulse,
    split_pulse_sweep,
)
from tlphotons.photon_content import _g, analyze_pulse, fit_log_slope

CANONICAL_BETA2 = 12.0 * math.log(27.0 / 16.0) / math.pi


def test_log_kernel_antiderivative_identity():
    # trust the closed form only after checking g''(u) = ln|u| numerically
    h = 1e-4
    for u in (0.3, 1.0, 2.7, -1.4, 11.0):
        second = (_g(u + h) - 2.0 * _g(u) + _g(u - h)) / h**2
        assert abs(second - math.log(abs(u))) < 1e-5


def test_beta2_logkernel_canonical(canonical, line):
    got = beta2_logkernel(canonical, line)
    assert abs(got - CANONICAL_BETA2) < 1e-12


def test_beta2_logkernel_zero(line):
    assert beta2_logkernel(PiecewiseConstantWaveform(()), line) == 0.0


def test_beta2_logkernel_distant_copies(canonical, line):
    one = beta2_logkernel(canonical, line)
    both = beta2_logkernel(canonical + canonical.shifted(1e4), line)
    assert abs(both - 2.0 * one) / (2.0 * one) < 1e-3


def test_beta2_rightmover_canonical(canonical, line):
    got = beta2_rightmover(canonical, line)
    assert abs(got - CANONICAL_BETA2) / CANONICAL_BETA2 < 1e-6


def _rescaled_units(line, lam):
    """The same physical line with the length unit scaled by lam.

    Per-length constants change as c -> c/lam, ell -> ell/lam; a pulse whose
    profile stretches as x -> lam x in the new unit is then physically
    identical, and bipolarity keeps beta2 free of a ln(lam) anomaly.
    """
    from tlphotons import LineParams
    return LineParams(c=line.c / lam, ell=line.ell / lam, hbar=line.hbar)


def test_beta2_rightmover_scalings(canonical, line):
    base = beta2_rightmover(canonical, line)
    doubled = beta2_rightmover(canonical * 2.0, line)
    assert abs(doubled - 4.0 * base) / base < 1e-9
    # same shape, x stretched by 3, measured in correspondingly scaled units
    stretched = beta2_rightmover(canonical.scaled_x(3.0), _rescaled_units(line, 3.0))
    assert abs(stretched - base) / base < 1e-9


def test_beta2_rightmover_unipolar(unit_square, line):
    with pytest.raises(UnipolarPulse):
        beta2_rightmover(unit_square, line)


def test_beta2_general_rightmover_fields(canonical, line):
    fields = right_mover_fields(canonical, line)
    got = beta2_general(fields, line)
    assert abs(got - CANONICAL_BETA2) / CANONICAL_BETA2 < 1e-6


def test_beta2_general_standing_is_half(canonical, line):
    standing = FieldPair.create(canonical * line.c,
                                PiecewiseLinearWaveform(((-2.0, 0.0), (2.0, 0.0))))
    got = beta2_general(standing, line)
    assert abs(got - 0.5 * CANONICAL_BETA2) / CANONICAL_BETA2 < 1e-6


def test_beta2_general_divergent(unit_square, line):
    fields = right_mover_fields(unit_square, line)
    assert beta2_general(fields, line) is DIVERGENT


def test_ir_divergence_coefficient(canonical, unit_square, line):
    assert abs(ir_divergence_coefficient(unit_square, line) - 1.0 / math.pi) < 1e-14
    assert ir_divergence_coefficient(canonical, line) == 0.0
    assert ir_divergence_coefficient(unit_square * -1.0, line) == \
        ir_divergence_coefficient(unit_square, line)


def test_ir_cutoff_slope(unit_square, line):
    # beta2(k_min) = A ln(1/k_min) + B with A the divergence coefficient
    kmins = np.geomspace(1e-6, 1e-2, 9)
    values = [beta2_ir_cutoff(unit_square, line, km) for km in kmins]
    A, _ = np.polyfit(np.log(1.0 / kmins), values, 1)
    assert abs(A - 1.0 / math.pi) / (1.0 / math.pi) < 0.01


def test_naive_estimate(canonical, line):
    assert abs(naive_photon_estimate(canonical, line) - 16.0) < 1e-12
    assert naive_photon_estimate(PiecewiseConstantWaveform(()), line) == 0.0
    # the naive estimate grows linearly with separation, beta2 only as log w
    w1, w2 = 1e3, 2e3
    n1 = naive_photon_estimate(split_pulse(w1), line)
    n2 = naive_photon_estimate(split_pulse(w2), line)
    assert n2 / n1 > 1.9
    b1 = beta2_logkernel(split_pulse(w1), line)
    b2 = beta2_logkernel(split_pulse(w2), line)
    assert b2 - b1 < 0.5  # roughly (2/pi) ln 2


def test_mode_amplitude_canonical(canonical, line):
    fields = right_mover_fields(canonical, line)
    modes = mode_amplitude(fields, line)
    assert abs(modes.norm_sq - CANONICAL_BETA2) / CANONICAL_BETA2 < 1e-3
    weights = modes.spectral_weights()
    assert abs(np.sum(weights) - 1.0) < 1e-6
    assert modes.mean_abs_k() > 0.0
    assert modes.median_abs_k() > 0.0


def test_mode_amplitude_standing_spectrum_symmetric(canonical, line):
    # with only the charge field present, reality makes |xi(-k)| = |xi(k)|
    standing = FieldPair.create(canonical * line.c,
                                PiecewiseLinearWaveform(((-2.0, 0.0), (2.0, 0.0))))
    modes = mode_amplitude(standing, line)
    mags = np.abs(modes.xi_values)
    assert np.max(np.abs(mags - mags[::-1])) < 1e-12


def test_mode_amplitude_cross_term_vanishes(canonical, line):
    # the q-phi cross term of |alpha|^2 is odd in k and integrates away
    fields = right_mover_fields(canonical, line)
    modes = mode_amplitude(fields, line)
    k = modes.kgrid.nodes
    from tlphotons import fourier
    Fq = fourier(fields.q, -k)
    Fphi = fourier(fields.phi, -k)
    cross = 2.0 * np.real(1j * np.conj(Fq) * Fphi) / (4.0 * math.pi * line.hbar)
    total = modes.kgrid.integrate(cross)
    assert abs(total) < 1e-10


def test_mode_amplitude_refuses_unipolar(unit_square, line):
    with pytest.raises(RepresentationDoesNotExist):
        mode_amplitude(right_mover_fields(unit_square, line), line)


def test_split_pulse_examples(line):
    with pytest.raises(OverlappingSubPulses):
        split_pulse(2.5)
    with pytest.raises(UnipolarPulse):
        sub = PiecewiseConstantWaveform(((0.0, 1.0, 1.0), (1.0, 2.0, -1.0), (2.0, 3.0, 1.0)))
        beta2_rightmover(sub, line)


def test_split_pulse_sweep_slope(line):
    ws = np.geomspace(1e2, 1e4, 13)
    rows = split_pulse_sweep(ws, line)
    slope, _ = fit_log_slope(rows)
    assert abs(slope - 2.0 / math.pi) / (2.0 / math.pi) < 0.02
    # doubling the separation adds about (2/pi) ln 2 photons
    b1 = beta2_logkernel(split_pulse(4e3), line)
    b2 = beta2_logkernel(split_pulse(8e3), line)
    assert abs((b2 - b1) - (2.0 / math.pi) * math.log(2.0)) < 0.01


def test_method_agreement_family(bipolar_family, line):
    for V in bipolar_family:
        closed = beta2_logkernel(V, line)
        quadr = beta2_rightmover(V, line)
        general = beta2_general(right_mover_fields(V, line), line)
        assert abs(quadr - closed) / closed < 1e-6
        assert abs(general - closed) / closed < 1e-6
        assert closed > 0.0  # positivity for nonzero bipolar pulses


def test_mode_norm_agreement_family(bipolar_family, line):
    for V in bipolar_family[:12]:
        closed = beta2_logkernel(V, line)
        modes = mode_amplitude(right_mover_fields(V, line), line)
        assert abs(modes.norm_sq - closed) / closed < 1e-3


def test_additivity(bipolar_family, line):
    # beta2 of a two-mover snapshot is the sum of the movers' photon numbers
    for VR, VL in zip(bipolar_family[:6], bipolar_family[6:12]):
        right = beta2_logkernel(VR, line)
        left = beta2_logkernel(VL, line)
        V = VR + VL
        I = (VR + (-1.0) * VL) * (1.0 / line.z0)
        fields = fields_from_snapshot(V, I, line)
        total = beta2_general(fields, line)
        assert abs(total - (right + left)) / (right + left) < 1e-6


def test_time_invariance_closed_form(bipolar_family, line):
    for V in bipolar_family[:4]:
        base = beta2_logkernel(V, line)
        I = V * (1.0 / line.z0)
        movers = decompose_lr(V, I, line)
        for t in (0.7, 3.0):
            Vt, It = evolve(movers, t, line)
            bt = beta2_general(fields_from_snapshot(Vt, It, line), line)
            assert abs(bt - base) / base < 1e-6
    # a standing snapshot mixes q into phi nontrivially as it evolves
    V = bipolar_family[4]
    base = beta2_general(fields_from_snapshot(V, PiecewiseConstantWaveform(()), line), line)
    movers = decompose_lr(V, PiecewiseConstantWaveform(()), line)
    for t in (0.5, 2.0):
        Vt, It = evolve(movers, t, line)
        bt = beta2_general(fields_from_snapshot(Vt, It, line), line)
        assert abs(bt - base) / base < 1e-6


def test_scale_invariance(bipolar_family, line):
    for V in bipolar_family[:10]:
        base = beta2_logkernel(V, line)
        for lam in (0.1, 3.0, 42.0):
            scaled = beta2_logkernel(V.scaled_x(lam), _rescaled_units(line, lam))
            assert abs(scaled - base) / base < 1e-9


def test_parallelogram_law(bipolar_family, line):
    for V1, V2 in zip(bipolar_family[:8], bipolar_family[8:16]):
        lhs = beta2_logkernel(V1 + V2, line) + beta2_logkernel(V1 - V2, line)
        rhs = 2.0 * beta2_logkernel(V1, line) + 2.0 * beta2_logkernel(V2, line)
        assert abs(lhs - rhs) / rhs < 1e-9


def test_analyze_pulse_report(canonical, unit_square, line):
    report = analyze_pulse(canonical, line)
    assert abs(report.beta2_logkernel - CANONICAL_BETA2) < 1e-12
    assert report.charge_neutral and report.flux_decays and report.bipolar
    assert report.mean_abs_k is not None
    divergent = analyze_pulse(unit_square, line)
    assert divergent.beta2_general is DIVERGENT
    assert divergent.beta2_logkernel is not DIVERGENT  # typed as not-applicable
    assert abs(divergent.ir_coefficient - 1.0 / math.pi) < 1e-14
    # a snapshot with a genuine left-moving part disables the right-mover routes
    from tlphotons.photon_content import NOT_APPLICABLE
    mixed = analyze_pulse(canonical, line, current=PiecewiseConstantWaveform(()))
    assert mixed.beta2_rightmover is NOT_APPLICABLE
    assert abs(mixed.beta2_general - 0.5 * CANONICAL_BETA2) / CANONICAL_BETA2 < 1e-6
