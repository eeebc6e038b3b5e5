import numpy as np
import pytest
from conftest import gap, rand_frame, rand_group, rand_tangent

from formalframes import (
    BundleTangent,
    FrameCoords,
    JetAlgebraElement,
    SmoothMapSpec,
    change_chart,
    fundamental_vector,
    jet_identity,
    jet_inverse,
    right_action,
    tangent_iso,
    transition_jet,
)


def frame1d(base, *vals):
    return FrameCoords.from_arrays(
        [base], [np.full((1,) * (k + 2), v) for k, v in enumerate(vals)]
    )


def test_right_action_pin():
    # base carried along unchanged; tensors compose like the group product
    u = frame1d(1.0, 2.0, 3.0)
    a = np.array([[5.0]]), np.array([[[7.0]]])
    from formalframes import JetGroupElement

    moved = right_action(u, JetGroupElement.from_arrays(list(a)))
    assert moved.base == pytest.approx([1.0])
    assert moved.arrays[0].item() == pytest.approx(10.0)
    assert moved.arrays[1].item() == pytest.approx(3 * 25 + 2 * 7)


def test_right_action_laws():
    rng = np.random.default_rng(0)
    for n, r in [(1, 2), (2, 3), (3, 4)]:
        u = rand_frame(rng, n, r)
        a, b = rand_group(rng, n, r), rand_group(rng, n, r)
        from formalframes import jet_compose

        lhs = right_action(right_action(u, a), b)
        rhs = right_action(u, jet_compose(a, b))
        assert all(gap(x, y) < 1e-9 for x, y in zip(lhs.arrays, rhs.arrays))
        e = jet_identity(n, r)
        assert all(gap(x, y) == 0.0
                   for x, y in zip(right_action(u, e).arrays, u.arrays))
        back = right_action(right_action(u, a), jet_inverse(a))
        assert all(gap(x, y) < 1e-9 for x, y in zip(back.arrays, u.arrays))


def test_change_chart_pin():
    # second-order slot picks up the Hessian term of the transition
    u = frame1d(0.0, 2.0, 0.0)
    T = transition_jet(SmoothMapSpec.polynomial_1d([0.0, 1.0, 0.5]), [0.0], 2)
    moved = change_chart(u, T)
    assert moved.base == pytest.approx([0.0])
    assert moved.arrays[0].item() == pytest.approx(2.0)
    assert moved.arrays[1].item() == pytest.approx(4.0)


def test_change_chart_cocycle_and_equivariance():
    rng = np.random.default_rng(1)
    from test_charts import rand_poly

    for n, r in [(1, 2), (2, 3)]:
        for _ in range(10):
            u = rand_frame(rng, n, r)
            f, g = rand_poly(rng, n), rand_poly(rng, n)
            T1 = transition_jet(f, u.base, r)
            T2 = transition_jet(g, T1.value, r)
            Tc = transition_jet(SmoothMapSpec.composite(f, g), u.base, r)
            two = change_chart(change_chart(u, T1), T2)
            one = change_chart(u, Tc)
            assert gap(two.base, one.base) < 1e-9
            assert all(gap(x, y) < 1e-9 for x, y in zip(two.arrays, one.arrays))
            a = rand_group(rng, n, r)
            lhs = change_chart(right_action(u, a), T1)
            rhs = right_action(change_chart(u, T1), a)
            assert all(gap(x, y) < 1e-9 for x, y in zip(lhs.arrays, rhs.arrays))


def test_tangent_iso_pin():
    # translating (1, 0) by the scalar frame (2, 6) gives (2, 6)
    u = frame1d(0.0, 2.0, 6.0)
    L = tangent_iso(u)
    Y = JetAlgebraElement.from_arrays([np.array([1.0]), np.array([[0.0]])])
    X = L.apply(Y)
    assert X.d_base == pytest.approx([2.0])
    assert X.arrays[0].item() == pytest.approx(6.0)


def test_tangent_iso_identity_frame():
    u = FrameCoords.identity_frame(2, 2)
    L = tangent_iso(u)
    assert np.allclose(L.matrix, np.eye(2 + 4))


def test_tangent_iso_roundtrip():
    rng = np.random.default_rng(2)
    for n, r in [(1, 2), (2, 3), (3, 4)]:
        u = rand_frame(rng, n, r)
        L = tangent_iso(u)
        X = rand_tangent(rng, n, r)
        Y = L.solve(X)
        back = L.apply(Y)
        assert gap(back.d_base, X.d_base) < 1e-9
        # the top-order slot is outside the one-order-down tangent space
        assert all(gap(x, y) < 1e-9
                   for x, y in zip(back.arrays[: r - 1], X.arrays[: r - 1]))


def test_fundamental_vector_is_vertical():
    rng = np.random.default_rng(3)
    u = rand_frame(rng, 2, 3)
    Y = [rng.uniform(-1, 1, (2,) * (k + 1)) for k in range(1, 4)]
    X = fundamental_vector(u, Y)
    assert not X.d_base.any()


def test_frame_json_roundtrip():
    rng = np.random.default_rng(4)
    u = rand_frame(rng, 2, 3)
    back = FrameCoords.from_json(u.to_json())
    assert gap(back.base, u.base) == 0.0
    assert all(gap(x, y) == 0.0 for x, y in zip(back.arrays, u.arrays))


def test_tangent_flat_roundtrip():
    rng = np.random.default_rng(5)
    X = rand_tangent(rng, 2, 2)
    back = BundleTangent.from_flat(2, 2, X.flat())
    assert gap(back.d_base, X.d_base) == 0.0
    assert all(gap(x, y) == 0.0 for x, y in zip(back.arrays, X.arrays))
