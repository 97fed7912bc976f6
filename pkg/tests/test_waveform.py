import math

import numpy as np
import pytest

from tlphotons import (
    LineParams,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    SampledWaveform,
    bipolarity_check,
    decompose_lr,
    evolve,
    right_mover_fields,
)
from tlphotons.photon_content import split_pulse


def test_line_params_relations():
    line = LineParams(c=2.5, ell=0.4)
    assert abs(line.z0 - math.sqrt(0.4 / 2.5)) < 1e-12 * line.z0
    assert abs(line.v - 1.0 / math.sqrt(0.4 * 2.5)) < 1e-12 * line.v


def test_line_params_rejects_nonpositive():
    with pytest.raises(ValueError):
        LineParams(c=-1.0)
    with pytest.raises(ValueError):
        LineParams(ell=0.0)


def test_line_params_from_velocity_roundtrip():
    line = LineParams.from_velocity(c=2.0, v=3.0)
    assert abs(line.v - 3.0) < 1e-12


def test_segment_validation():
    with pytest.raises(ValueError):
        PiecewiseConstantWaveform(((1.0, 0.0, 1.0),))  # start >= end
    with pytest.raises(ValueError):
        PiecewiseConstantWaveform(((0.0, 2.0, 1.0), (1.0, 3.0, 1.0)))  # overlap


def test_breakpoint_validation():
    with pytest.raises(ValueError):
        PiecewiseLinearWaveform(((0.0, 1.0),))
    with pytest.raises(ValueError):
        PiecewiseLinearWaveform(((0.0, 1.0), (0.0, 2.0)))


def test_sampled_validation():
    with pytest.raises(ValueError):
        SampledWaveform(0.0, -0.1, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SampledWaveform(0.0, 0.1, np.array([1.0]))


def test_net_area_examples(canonical, unit_square):
    assert canonical.net_area() == 0.0
    assert unit_square.net_area() == 1.0
    # one sub-pulse of the split pair does not integrate to zero on its own
    sub = PiecewiseConstantWaveform(((0.0, 1.0, 1.0), (1.0, 2.0, -1.0), (2.0, 3.0, 1.0)))
    assert sub.net_area() == 1.0


def test_cumulative_examples(canonical, unit_square):
    C = canonical.cumulative()
    assert abs(C(-1.0) - (-1.0)) < 1e-14
    assert abs(C(0.0)) < 1e-14
    assert abs(C(1.0) - 1.0) < 1e-14
    assert abs(C(2.0)) < 1e-14
    assert abs(C(5.0)) < 1e-14
    zero = PiecewiseConstantWaveform(())
    assert zero.cumulative().abs_max() == 0.0
    Cu = unit_square.cumulative()
    assert abs(Cu(1.0) - 1.0) < 1e-14
    assert abs(Cu(7.0) - 1.0) < 1e-14  # nonzero terminal value


def test_cumulative_exactness_invariants(canonical, bipolar_family):
    for V in [canonical] + bipolar_family[:6]:
        C = V.cumulative()
        # derivative recovers the amplitudes segment by segment
        for s, e, a in V.segments:
            mid = 0.5 * (s + e)
            h = 0.25 * (e - s)
            slope = (C(mid + h) - C(mid - h)) / (2 * h)
            assert abs(slope - a) < 1e-12 * max(1.0, abs(a))
        # terminal value identity
        assert abs(C.terminal_value() - V.net_area()) < 1e-12


def test_right_mover_fields_canonical(canonical, line):
    fields = right_mover_fields(canonical, line)
    xs = np.linspace(-3.0, 3.0, 101)
    assert np.allclose(np.asarray(fields.q(xs)), np.asarray(canonical(xs)), atol=1e-14)
    assert abs(fields.phi(0.0)) < 1e-14
    assert abs(fields.phi(-1.0) - 1.0) < 1e-14
    assert abs(fields.phi(2.0)) < 1e-14
    assert fields.charge_neutral and fields.flux_decays


def test_right_mover_fields_zero(line):
    fields = right_mover_fields(PiecewiseConstantWaveform(()), line)
    assert fields.q.net_area() == 0.0
    assert fields.phi.abs_max() == 0.0


def test_right_mover_fields_unipolar_flag(unit_square, line):
    fields = right_mover_fields(unit_square, line)
    assert abs(fields.phi(3.0) - (-1.0)) < 1e-14
    assert not fields.flux_decays


def test_right_mover_relation(canonical, line):
    # V = Z0 * I with I reconstructed as -(1/ell) dphi/dx, at segment interiors
    fields = right_mover_fields(canonical, line)
    dphi = fields.phi.derivative()
    for s, e, _ in canonical.segments:
        mid = 0.5 * (s + e)
        I = -dphi(mid) / line.ell
        assert abs(canonical(mid) - line.z0 * I) < 1e-12


def test_decompose_lr_cases(canonical, line):
    # pure right mover: I = V/Z0
    I = canonical * (1.0 / line.z0)
    d = decompose_lr(canonical, I, line)
    assert d.f_L.abs_area() < 1e-14
    xs = np.linspace(-2.5, 2.5, 41)
    assert np.allclose(np.asarray(d.f_R(xs)), np.asarray(canonical(xs)), atol=1e-14)
    # standing pulse: I = 0
    d2 = decompose_lr(canonical, PiecewiseConstantWaveform(()), line)
    assert np.allclose(np.asarray(d2.f_R(xs)), 0.5 * np.asarray(canonical(xs)), atol=1e-14)
    assert np.allclose(np.asarray(d2.f_L(xs)), 0.5 * np.asarray(canonical(xs)), atol=1e-14)
    # V = 0: movers are opposite
    d3 = decompose_lr(PiecewiseConstantWaveform(()), canonical, line)
    assert np.allclose(np.asarray(d3.f_R(xs)), -np.asarray(d3.f_L(xs)), atol=1e-14)
    assert np.allclose(np.asarray(d3.f_R(xs)), 0.5 * line.z0 * np.asarray(canonical(xs)),
                       atol=1e-14)


def test_evolve_identity_and_translation(canonical, line):
    I = canonical * (1.0 / line.z0)
    d = decompose_lr(canonical, I, line)
    xs = np.linspace(-6.0, 6.0, 201)
    V0, I0 = evolve(d, 0.0, line)
    assert np.max(np.abs(np.asarray(V0(xs)) - np.asarray(canonical(xs)))) < 1e-12
    assert np.max(np.abs(np.asarray(I0(xs)) - np.asarray(I(xs)))) < 1e-12
    V1, _ = evolve(d, 1.0, line)
    assert np.max(np.abs(np.asarray(V1(xs)) - np.asarray(canonical(xs - 1.0)))) < 1e-12


def test_evolve_standing_splits(canonical, line):
    d = decompose_lr(canonical, PiecewiseConstantWaveform(()), line)
    Vt, _ = evolve(d, 3.0, line)
    xs = np.linspace(-6.0, 6.0, 241)
    expected = 0.5 * (np.asarray(canonical(xs - 3.0)) + np.asarray(canonical(xs + 3.0)))
    assert np.max(np.abs(np.asarray(Vt(xs)) - expected)) < 1e-12


def test_roundtrip_random_snapshots(bipolar_family, line):
    xs = np.linspace(-8.0, 8.0, 321)
    for V, I in zip(bipolar_family[:5], bipolar_family[5:10]):
        d = decompose_lr(V, I, line)
        V0, I0 = evolve(d, 0.0, line)
        assert np.max(np.abs(np.asarray(V0(xs)) - np.asarray(V(xs)))) < 1e-12
        assert np.max(np.abs(np.asarray(I0(xs)) - np.asarray(I(xs)))) < 1e-12


def test_bipolarity_examples(canonical, unit_square):
    assert bipolarity_check(canonical, 1e-12).bipolar
    res = bipolarity_check(unit_square, 1e-12)
    assert not res.bipolar
    assert abs(res.net_area - 1.0) < 1e-14
    assert bipolarity_check(split_pulse(10.0), 1e-12).bipolar


def test_pcw_algebra_consistency(bipolar_family):
    V1, V2 = bipolar_family[0], bipolar_family[1]
    xs = np.linspace(-7.0, 7.0, 501)
    total = V1 + V2
    assert np.max(np.abs(np.asarray(total(xs))
                         - np.asarray(V1(xs)) - np.asarray(V2(xs)))) < 1e-12
    assert np.max(np.abs(np.asarray((-V1)(xs)) + np.asarray(V1(xs)))) < 1e-14
    scaled = V1.scaled_x(3.0)
    assert abs(scaled.net_area() - 3.0 * V1.net_area()) < 1e-9
