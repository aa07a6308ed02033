import math

import numpy as np
import pytest

from qcpdetect.coherence import (
    AXES,
    EPS_DIVERGENCE,
    coherence_entropy,
    log_spectrum,
    qc_scalar,
    spectrum_eigenvalues,
    spectrum_eigenvalues_oracle,
)
from qcpdetect.xstate import (
    Correlators,
    build_xstate,
    dense_matrix,
    make_xstate,
    sample_random_xstate,
)

SEED = 424242
N_RANDOM = 500
ORACLE_TOL = 1e-10


def test_closed_form_matches_dense_oracle():
    rng = np.random.default_rng(SEED)
    for _ in range(N_RANDOM):
        x = sample_random_xstate(rng)
        for axis in AXES:
            closed = np.sort(np.asarray(spectrum_eigenvalues(x, axis).alphas))
            dense = np.sort(spectrum_eigenvalues_oracle(x, axis))
            assert np.max(np.abs(closed - dense)) < ORACLE_TOL


def test_spectrum_is_negative_semidefinite_and_paired():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(N_RANDOM):
        x = sample_random_xstate(rng)
        for axis in AXES:
            alphas = spectrum_eigenvalues(x, axis).alphas
            assert alphas.max() <= 0.0
            # double degeneracy is exact in the closed form
            assert alphas[0] == alphas[1]
            assert alphas[2] == alphas[3]


def test_bell_state_spectrum():
    # Phi+ commutator spectrum is {-1, -1, 0, 0} for every axis
    bell = make_xstate(0.5, 0.0, 0.0, 0.5, 0.5)
    for axis in AXES:
        got = sorted(spectrum_eigenvalues(bell, axis).alphas)
        assert got == pytest.approx([-1.0, -1.0, 0.0, 0.0], abs=1e-14)
        dense = sorted(spectrum_eigenvalues_oracle(bell, axis))
        assert dense == pytest.approx([-1.0, -1.0, 0.0, 0.0], abs=1e-12)
        res = log_spectrum(bell, axis)
        assert res.divergent
        # S_QC = -(1 ln 1 + 1 ln 1 + 0 + 0) = 0
        assert coherence_entropy(bell, axis) == pytest.approx(0.0, abs=1e-14)


def test_z_axis_closed_form():
    x = make_xstate(0.4, 0.15, 0.05, 0.3, 0.1)
    alphas = spectrum_eigenvalues(x, "z").alphas
    assert alphas[0] == pytest.approx(-4 * 0.05**2)
    assert alphas[2] == pytest.approx(-4 * 0.1**2)


def test_diagonal_state_commutes_with_z():
    # c = e = 0: [rho, 1 x sz] = 0, so the z spectrum vanishes identically
    x = make_xstate(0.4, 0.2, 0.0, 0.2, 0.0)
    assert np.all(spectrum_eigenvalues(x, "z").alphas == 0.0)
    assert log_spectrum(x, "z").divergent
    assert coherence_entropy(x, "z") == 0.0
    assert qc_scalar(x, "z") == 0.0


def test_entropy_hand_value():
    # all |alpha| = 1/4: S = -4 (1/4) ln(1/4) = 2 ln 2
    # alpha_z = -4 c^2 = -1/4 at c = 1/4 and -4 e^2 = -1/4 at e = 1/4,
    # but e^2 <= a d forces a = d = 1/4 too; b = (1 - a - d)/2 = 1/4, c <= b ok
    x = make_xstate(0.25, 0.25, 0.25, 0.25, 0.25)
    alphas = spectrum_eigenvalues(x, "z").alphas
    assert np.allclose(alphas, -0.25)
    assert coherence_entropy(x, "z") == pytest.approx(2 * math.log(2), abs=1e-12)
    assert log_spectrum(x, "z").value == pytest.approx(4 * math.log(4), abs=1e-12)
    assert not log_spectrum(x, "z").divergent


def test_log_spectrum_divergence_threshold():
    # alpha_z pair is -4c^2 and -4e^2; push e under the epsilon threshold
    tiny = 0.4e-6  # alpha = -4e-13 * 1.6 < 1e-12
    x = make_xstate(0.35, 0.15, 0.1, 0.35, tiny)
    res = log_spectrum(x, "z")
    assert res.divergent
    assert res.min_abs_alpha < EPS_DIVERGENCE
    # value stays finite: the zero eigenvalue is clamped at EPS_DIVERGENCE
    assert math.isfinite(res.value)
    assert res.value >= -2.0 * math.log(4 * 0.1**2) - 1e-9

    solid = make_xstate(0.35, 0.15, 0.1, 0.35, 0.05)
    assert not log_spectrum(solid, "z").divergent


def test_qc_scalar_is_quarter_trace():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(100):
        x = sample_random_xstate(rng)
        for axis in AXES:
            want = -0.25 * float(np.sum(spectrum_eigenvalues_oracle(x, axis)))
            assert qc_scalar(x, axis) == pytest.approx(want, abs=1e-12)
            assert qc_scalar(x, axis) >= -1e-15


def test_xxz_symmetry_degenerates_x_and_y():
    # xx = yy makes e = 0, so the x and y spectra coincide
    x = build_xstate(Correlators(z=0.1, xx=-0.3, yy=-0.3, zz=0.3))
    ax = spectrum_eigenvalues(x, "x").alphas
    ay = spectrum_eigenvalues(x, "y").alphas
    assert np.allclose(ax, ay, atol=1e-15)
    assert coherence_entropy(x, "x") == pytest.approx(coherence_entropy(x, "y"))


def test_invalid_axis_raises():
    x = make_xstate(0.25, 0.25, 0.0, 0.25, 0.0)
    with pytest.raises(ValueError):
        spectrum_eigenvalues(x, "w")
    with pytest.raises(ValueError):
        spectrum_eigenvalues_oracle(x, "q")
