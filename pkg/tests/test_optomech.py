import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbarlink.circuit import DeviceParams, motional_elements
from fbarlink.errors import DegenerateLoadingError, DomainError
from fbarlink.optomech import (
    SidebandAmplitudes,
    Topology,
    device_loading,
    one_ring_loading,
    sideband_amplitudes,
    two_ring_loading,
)

KAPPA = 150e6
F_M = 3.285e9
J = 1.7e9
BRANCH = motional_elements(4.3e-3, 200e-15, F_M, 2.6e6)


def test_sidebands_red_detuned():
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    assert sb.upper == 1.0
    assert sb.lower == pytest.approx(1.303e-4, rel=1e-3)
    assert sb.lower == pytest.approx(75e6**2 / (75e6**2 + (2 * F_M) ** 2), rel=1e-12)


def test_sidebands_symmetric_and_flipped():
    sb = sideband_amplitudes(KAPPA, F_M, 0.0)
    assert sb.upper == sb.lower
    flipped = sideband_amplitudes(KAPPA, F_M, F_M)
    red = sideband_amplitudes(KAPPA, F_M, -F_M)
    assert flipped.upper == pytest.approx(red.lower, rel=1e-12)
    assert flipped.lower == 1.0
    with pytest.raises(DomainError):
        sideband_amplitudes(0.0, F_M, 0.0)


@given(k=st.floats(1e3, 1e10), f=st.floats(1e6, 2e10), d=st.floats(-3e10, 3e10))
def test_sideband_difference_bounded(k, f, d):
    sb = sideband_amplitudes(k, f, d)
    assert 0 <= sb.lower <= 1 and 0 <= sb.upper <= 1
    assert -1 <= sb.difference <= 1


@given(k=st.floats(1e3, 1e10), f=st.floats(1e6, 2e10))
def test_red_detuned_difference_nonnegative(k, f):
    assert sideband_amplitudes(k, f, -f).difference >= 0


def test_one_ring_table_point(device, branch):
    ld = device_loading(device)
    assert ld.c_om == pytest.approx(1.026, rel=1e-3)
    assert ld.r_om_plus == pytest.approx(45.732, rel=1e-4)
    assert ld.r_om_minus == pytest.approx(5.959e-3, rel=1e-3)
    assert ld.r_em_opt == pytest.approx(90.314, rel=1e-4)
    assert ld.r_em_opt == pytest.approx(branch.r_m + ld.r_om_plus - ld.r_om_minus, rel=1e-15)
    assert ld.c_om_effective == ld.c_om


def test_one_ring_zero_coupling(branch):
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    ld = one_ring_loading(branch, 0.0, 2.6e6, KAPPA, sb)
    assert ld.c_om == 0.0
    assert ld.r_em_opt == branch.r_m


def test_one_ring_1mhz(branch):
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    ld = one_ring_loading(branch, 1e6, 2.6e6, KAPPA, sb)
    assert ld.c_om == pytest.approx(1.0256e-2, rel=1e-4)
    assert ld.r_om_plus == pytest.approx(0.45732, rel=1e-4)


@given(g1=st.floats(0, 1e8), g2=st.floats(0, 1e8))
def test_one_ring_monotone_in_coupling(g1, g2):
    branch = BRANCH
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    lo, hi = sorted((g1, g2))
    a = one_ring_loading(branch, lo, 2.6e6, KAPPA, sb).r_em_opt
    b = one_ring_loading(branch, hi, 2.6e6, KAPPA, sb).r_em_opt
    assert a <= b


def test_two_ring_table_point(device, branch):
    ld = device_loading(device, Topology.TWO_RING)
    assert ld.c_oo == pytest.approx(513.778, rel=1e-5)
    assert ld.r_oo_plus == pytest.approx(22.908e3, rel=1e-4)
    assert ld.r_oo_minus == pytest.approx(2.985, rel=1e-3)
    assert ld.r_om_eq == pytest.approx(45.656, rel=1e-3)
    assert ld.r_em_opt == pytest.approx(90.229, rel=1e-4)
    assert ld.r_om_plus is None
    assert ld.c_om_effective == ld.c_om_eq


def test_two_ring_half_coupling(branch):
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    ld = two_ring_loading(branch, 10e6, 2.6e6, KAPPA, 0.85e9, sb)
    assert ld.c_oo == pytest.approx(128.44, rel=1e-4)
    leg = ld.r_oo_plus - ld.r_oo_minus
    r_om = branch.r_m * 4 * 10e6**2 / (2.6e6 * KAPPA)
    assert ld.r_om_eq == pytest.approx(r_om * leg / (r_om + leg), rel=1e-3)


def test_two_ring_large_j_recovers_one_ring(branch):
    ideal = SidebandAmplitudes(1.0, 0.0)
    one = one_ring_loading(branch, 10e6, 2.6e6, KAPPA, ideal)
    prev = None
    for j in (1e10, 1e11, 1e12, 1e13):
        two = two_ring_loading(branch, 10e6, 2.6e6, KAPPA, j, ideal)
        err = abs(two.r_em_opt - one.r_em_opt) / one.r_em_opt
        if prev is not None:
            assert err < prev
        prev = err
    assert prev < 1e-8
    assert two.c_om_eq == pytest.approx(one.c_om, rel=1e-8)


@given(g=st.floats(1e5, 1e8), j=st.floats(1e7, 1e11))
def test_two_ring_harmonic_mean_bound(g, j):
    branch = BRANCH
    sb = sideband_amplitudes(KAPPA, F_M, -F_M)
    ld = two_ring_loading(branch, g, 2.6e6, KAPPA, j, sb)
    leg = ld.r_oo_plus - ld.r_oo_minus
    assert ld.r_om_eq <= ld.r_om * (1 + 1e-12)
    assert ld.r_om_eq <= leg * (1 + 1e-12)
    assert ld.r_om_eq <= min(ld.r_om, leg) * (1 + 1e-12)


def test_two_ring_degenerate(branch):
    # blue-detuned pump makes the ring-ring leg negative
    sb = sideband_amplitudes(KAPPA, F_M, F_M)
    with pytest.raises(DegenerateLoadingError):
        two_ring_loading(branch, 0.0, 2.6e6, KAPPA, J, sb)


def test_device_loading_frequency_override(device):
    base = device_loading(device)
    shifted = device_loading(device, f_m=device.f_m + 10e6)
    # the upper sideband moves off resonance when the acoustic mode shifts
    assert shifted.sidebands.upper < base.sidebands.upper
    assert math.isclose(base.r_m, shifted.r_m)


def test_topology_accepts_strings(device):
    assert device_loading(device, "two_ring").topology is Topology.TWO_RING
    with pytest.raises(ValueError):
        device_loading(device, "three_ring")


def test_detuning_none_means_red(device):
    d = DeviceParams(detuning=None)
    assert device_loading(d).sidebands.upper == 1.0
