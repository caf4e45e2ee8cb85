import cmath
import math

import pytest

import mkdv_ist as m


def test_phase_functions():
    assert abs(m.lambda_(2.0) - 1.25) < 1e-15
    assert abs(m.zeta(1j) - 1j) < 1e-15
    assert abs(m.theta(1j, -4.0) + 2j) < 1e-14
    assert m.classify_phase_points(-4.0) == m.PhaseClass.NoRealPhasePoints
    assert abs(m.xi0(-4.0) - math.sqrt(0.5)) < 1e-12
    with pytest.raises(ValueError):
        m.xi0(-1.0)
    part = m.partition_spectrum([cmath.exp(1j * math.pi / 6), cmath.exp(1j * math.pi / 3)], -4.0)
    assert part["delta"] == [0] and part["nabla"] == [1]


def test_kink_scattering():
    pot = m.Potential.from_function(math.tanh, -30.0, 30.0, 4001)
    sd = m.scatter(pot)
    assert len(sd.discrete) == 1
    assert abs(sd.discrete[0].z - 1j) < 1e-6
    assert sd.max_abs_r() < 1e-5
    a, b = m.scattering_coefficients(2.0, pot)
    assert abs(abs(a) ** 2 - abs(b) ** 2 - 1.0) < 1e-7


def test_trace_formula_single_eigenvalue():
    inputs = m.TraceInputs.reflectionless([1j])
    z = 0.3 + 0.4j
    assert abs(m.trace_formula_a(z, inputs) - (z - 1j) / (z + 1j)) < 1e-13


def test_exact_and_prediction():
    sol = m.Solitons.from_polar([1.0], [1.0])
    assert len(sol) == 1
    t = 40.0
    xs = [-5.0 * t + 0.5 * k for k in range(200)]
    exact = m.exact(sol, xs, t, threads=2)
    pred = m.Predictor(sol, m.TraceInputs.reflectionless(sol.zeros))(xs, t)
    assert max(abs(a - b) for a, b in zip(exact, pred)) < 1e-8
    assert abs(m.soliton_velocity(1j) + 2.0) < 1e-15


def test_simulation_moves_the_kink():
    pot = m.Potential.from_function(math.tanh, -64.0, 64.0, 1281)
    snaps = m.simulate(pot, L=64.0, N=1281, dt=0.01, t_end=1.0, times=[1.0])
    s = snaps[0]
    err = max(abs(q - math.tanh(x + 2.0)) for x, q in zip(s.x, s.q))
    assert err < 1e-3
    assert s.boundary_drift < 1e-6


def test_config_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        m.Potential([0.0, 1.0], [-1.0, 1.0])
