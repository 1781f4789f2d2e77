import numpy as np
import pytest

from lrwp.classical import ClassicalState, KineticActionTable, kinetic_action, p_c, x_c
from lrwp.forcing import ConstantForce, Quadratures, SinusoidalForce, ZeroForce

# frozen oracle values for Sinusoidal(amplitude=1, omega=2): nested adaptive
# quadrature for G1 and a 2e6-point trapezoid rule for the action integral
G1_SIN_1 = 0.2726756432935796
G_SIN_1 = 0.7080734182735712
ACTION_SIN_1 = 0.8346884259511830  # m=1, p0=1, t=1

Q_ZERO = Quadratures.closed_form(ZeroForce())
Q_CONST = Quadratures.closed_form(ConstantForce(1.0))
Q_SIN = Quadratures.closed_form(SinusoidalForce(1.0, 2.0))


def test_x_c_trivia():
    assert x_c(ClassicalState(1.0), Q_ZERO, 4.0) == 0.0
    assert x_c(ClassicalState(1.0), Q_CONST, 2.0) == pytest.approx(2.0, abs=1e-14)


def test_x_c_derived():
    state = ClassicalState(m=2.0, x0=1.0, p0=3.0)
    assert x_c(state, Q_SIN, 1.0) == pytest.approx(1.0 + (3.0 + G1_SIN_1) / 2.0, abs=1e-13)


def test_p_c_trivia():
    assert p_c(ClassicalState(1.0), Q_ZERO, 7.0) == 0.0
    assert p_c(ClassicalState(1.0, p0=1.0), Q_CONST, 2.0) == pytest.approx(3.0, abs=1e-14)


def test_p_c_derived():
    assert p_c(ClassicalState(1.0), Q_SIN, 1.0) == pytest.approx(G_SIN_1, abs=1e-14)


def test_kinetic_action_zero_and_constant():
    assert kinetic_action(ClassicalState(1.0), Q_ZERO, 5.0) == 0.0
    st = ClassicalState(1.0, p0=2.0)
    assert kinetic_action(st, Q_ZERO, 3.0) == pytest.approx(6.0, abs=1e-14)
    assert kinetic_action(ClassicalState(1.0), Q_CONST, 2.0) == pytest.approx(
        4.0 / 3.0, abs=1e-14
    )


def test_kinetic_action_sinusoidal_vs_trapezoid_oracle():
    st = ClassicalState(1.0, p0=1.0)
    val = kinetic_action(st, Q_SIN, 1.0)
    assert val == pytest.approx(ACTION_SIN_1, abs=1e-12)
    tau = np.linspace(0.0, 1.0, 200_001)
    oracle = np.trapezoid(np.asarray(p_c(st, Q_SIN, tau)) ** 2 / 2.0, tau)
    assert abs(val - oracle) < 1e-9


@pytest.mark.parametrize("q", [Q_ZERO, Q_CONST, Q_SIN])
def test_ehrenfest_closed_forms(q):
    st = ClassicalState(m=1.7, x0=0.4, p0=-0.9)
    h = 1e-5
    for t in np.linspace(0.1, 6.0, 9):
        dxdt = (x_c(st, q, t + h) - x_c(st, q, t - h)) / (2 * h)
        assert abs(dxdt - p_c(st, q, t) / st.m) < 1e-8
        dpdt = (p_c(st, q, t + h) - p_c(st, q, t - h)) / (2 * h)
        assert abs(dpdt - q.profile.force(t)) < 1e-8


def test_affine_in_initial_conditions():
    base = ClassicalState(m=2.0, x0=0.3, p0=1.1)
    shifted = ClassicalState(m=2.0, x0=0.3 + 0.25, p0=1.1)
    t = 1.7
    assert x_c(shifted, Q_SIN, t) - x_c(base, Q_SIN, t) == pytest.approx(0.25, abs=0)
    boosted = ClassicalState(m=2.0, x0=0.3, p0=1.1 + 0.5)
    assert p_c(boosted, Q_SIN, t) - p_c(base, Q_SIN, t) == pytest.approx(0.5, abs=0)
    assert x_c(boosted, Q_SIN, t) - x_c(base, Q_SIN, t) == pytest.approx(
        0.5 * t / 2.0, abs=1e-14
    )


def test_mass_must_be_positive():
    with pytest.raises(ValueError):
        ClassicalState(m=0.0)


def test_action_table_matches_direct():
    st = ClassicalState(1.0, p0=1.0)
    table = KineticActionTable(st, Q_SIN, t_max=2.0, step=2e-3 / 4)
    for t in (0.0, 0.5e-3, 0.25, 1.0, 1.33321, 2.0):
        assert table(t) == pytest.approx(kinetic_action(st, Q_SIN, t), abs=1e-11)


def test_action_table_exact_for_constant_force():
    st = ClassicalState(1.0)
    table = KineticActionTable(st, Q_CONST, t_max=2.0, step=1e-3)
    assert table(2.0) == pytest.approx(4.0 / 3.0, abs=1e-13)
