import numpy as np
import pytest
from conftest import gap

from formalframes import (
    BottData,
    FoliationTransition,
    FrameCoords,
    PolyField,
    ShapeMismatchError,
    SmoothMapSpec,
    bott_gauge_transform,
    bott_residual,
    deformation_equation_residual,
    transition_is_foliated,
    transition_jet,
    transverse_pushforward,
)


def test_transition_is_foliated():
    # (x, y) -> (x + xy, y + y^2): transverse part depends only on y
    good = SmoothMapSpec.polynomial(2, 2, {
        (1, 0): (1.0, 0.0),
        (1, 1): (1.0, 0.0),
        (0, 1): (0.0, 1.0),
        (0, 2): (0.0, 1.0),
    })
    assert transition_is_foliated(good, 1)
    # (x, y) -> (x, y + x): transverse part leaks leaf dependence
    bad = SmoothMapSpec.polynomial(2, 2, {
        (1, 0): (1.0, 1.0),
        (0, 1): (0.0, 1.0),
    })
    assert not transition_is_foliated(bad, 1)


def test_foliation_transition_rejects_leaky_map():
    gamma = SmoothMapSpec.polynomial_1d([0.0, 1.0, 1.0])
    good = SmoothMapSpec.polynomial(2, 2, {
        (1, 0): (1.0, 0.0),
        (0, 1): (0.0, 1.0),
        (0, 2): (0.0, 1.0),
    })
    FoliationTransition("c0", "c1", 1, good, gamma)
    bad = SmoothMapSpec.polynomial(2, 2, {
        (1, 0): (1.0, 1.0),
        (0, 1): (0.0, 1.0),
        (0, 2): (0.0, 1.0),
    })
    with pytest.raises(ShapeMismatchError):
        FoliationTransition("c0", "c1", 1, bad, gamma)


def bott_field(dx_coeff, dy_coeff):
    # one foliated chart with m = 2, leaf_dim = q = 1
    table = np.array([[[dx_coeff, dy_coeff]]])
    return BottData(1, 1, {"c": PolyField(2, (1, 1, 2), {(0, 0): table})})


def test_bott_residual_pins():
    clean = bott_field(0.0, 7.0)
    assert gap(bott_residual(clean, "c", [0.3, -0.2], [1.0]),
               np.zeros((1, 1))) == 0.0
    dirty = bott_field(3.0, 7.0)
    res = bott_residual(dirty, "c", [0.3, -0.2], [1.0])
    assert res.item() == pytest.approx(3.0)


def test_bott_gauge_covariance():
    # a frame change whose differential has no leafwise components
    # preserves the defining property: no dx-slots in the transformed form
    rng = np.random.default_rng(0)
    q, leaf = 2, 2
    m = q + leaf
    theta = rng.uniform(-1, 1, (q, q, m))
    theta[:, :, :leaf] = 0.0
    e = rng.normal(size=(q, q)) + 2 * np.eye(q)
    de = rng.uniform(-1, 1, (q, q, m))
    de[:, :, :leaf] = 0.0
    out = bott_gauge_transform(theta, e, de)
    assert np.max(np.abs(out[:, :, :leaf])) < 1e-12
    # and with leafwise components present it generically does not
    de2 = de.copy()
    de2[0, 0, 0] = 1.0
    out2 = bott_gauge_transform(theta, e, de2)
    assert np.max(np.abs(out2[:, :, :leaf])) > 1e-3


def test_bott_gauge_transform_trivial_frame():
    rng = np.random.default_rng(1)
    theta = rng.uniform(-1, 1, (2, 2, 3))
    out = bott_gauge_transform(theta, np.eye(2), np.zeros((2, 2, 3)))
    assert gap(out, theta) == 0.0


def test_transverse_pushforward_moebius_pin():
    # holonomy y -> 1/y at y = 2: base moves to 0.5, scale by -1/4
    u = FrameCoords.from_arrays([2.0], [np.array([[1.0]])])
    moved = transverse_pushforward(u, SmoothMapSpec.moebius(0.0, 1.0, 1.0, 0.0))
    assert moved.base == pytest.approx([0.5])
    assert moved.arrays[0].item() == pytest.approx(-0.25)


def test_transverse_pushforward_cocycle():
    rng = np.random.default_rng(2)
    from test_charts import rand_poly

    for _ in range(10):
        u = FrameCoords.from_arrays(
            rng.uniform(-0.3, 0.3, 1),
            [rng.uniform(1, 2, (1, 1)), rng.uniform(-1, 1, (1, 1, 1))],
        )
        g1, g2 = rand_poly(rng, 1), rand_poly(rng, 1)
        two = transverse_pushforward(transverse_pushforward(u, g1), g2)
        one = transverse_pushforward(u, SmoothMapSpec.composite(g1, g2))
        assert gap(two.base, one.base) < 1e-10
        assert all(gap(x, y) < 1e-9 for x, y in zip(two.arrays, one.arrays))


def test_deformation_equation_zero_data():
    rng = np.random.default_rng(3)
    zero2 = PolyField.constant(np.zeros((2, 2)), 2)
    zero3 = PolyField.constant(np.zeros((2, 2, 2)), 2)
    omega = PolyField.constant(np.eye(2), 2)
    res = deformation_equation_residual(
        omega, zero3, zero2, zero3,
        rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2),
    )
    assert gap(res, np.zeros(2)) == 0.0


def test_deformation_equation_scalar_case():
    # q = m = 1: every 2-form vanishes, so any pair is a valid deformation
    rng = np.random.default_rng(4)
    omega = PolyField(1, (1, 1), {(0,): np.array([[1.0]]),
                                  (1,): np.array([[0.5]])})
    theta = PolyField(1, (1, 1, 1), {(1,): np.array([[[0.3]]])})
    od = PolyField(1, (1, 1), {(2,): np.array([[0.7]])})
    td = PolyField(1, (1, 1, 1), {(0,): np.array([[[1.1]]])})
    res = deformation_equation_residual(
        omega, theta, od, td,
        rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1),
    )
    assert np.max(np.abs(res)) < 1e-12


def valid_pair_q2():
    omega = PolyField.constant(np.eye(2), 2)
    theta = PolyField.constant(np.zeros((2, 2, 2)), 2)
    # first component deforms by y^2 dy^1
    omega_dot = PolyField(2, (2, 2), {(0, 1): np.array([[1.0, 0.0],
                                                        [0.0, 0.0]])})
    theta_dot_tab = np.zeros((2, 2, 2))
    theta_dot_tab[0, 1, 0] = 1.0
    theta_dot = PolyField.constant(theta_dot_tab, 2)
    return omega, theta, omega_dot, theta_dot


def test_deformation_equation_valid_pair():
    rng = np.random.default_rng(5)
    omega, theta, od, td = valid_pair_q2()
    worst = 0.0
    for _ in range(20):
        res = deformation_equation_residual(
            omega, theta, od, td,
            rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2),
        )
        worst = max(worst, float(np.max(np.abs(res))))
    assert worst < 1e-12


def test_deformation_equation_detects_invalid_pair():
    omega, theta, od, _ = valid_pair_q2()
    zero_td = PolyField.constant(np.zeros((2, 2, 2)), 2)
    res = deformation_equation_residual(
        omega, theta, od, zero_td, [0.2, 0.4], [1.0, 0.0], [0.0, 1.0],
    )
    assert np.max(np.abs(res)) > 1e-3
    # flipping the sign of the correct compensator also fails
    bad_tab = np.zeros((2, 2, 2))
    bad_tab[0, 1, 1] = -1.0
    bad_td = PolyField.constant(bad_tab, 2)
    res2 = deformation_equation_residual(
        omega, theta, od, bad_td, [0.2, 0.4], [1.0, 0.0], [0.0, 1.0],
    )
    assert np.max(np.abs(res2)) > 1e-3
