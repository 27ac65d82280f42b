import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ltensor.errors import DimensionError, ZeroDivisorError
from ltensor.scalar import (
    is_zero_divisor,
    ts_abs,
    ts_add,
    ts_inv,
    ts_mul,
    ts_order_geq,
    ts_sign,
    ts_sqrt,
    unity,
    zero,
)
from ltensor.transforms import make_transform

KINDS = ["dft", "dct", "dwt", "id"]
entries = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
scalar44 = arrays(float, (4, 4), elements=entries)


def _close(a, b, tol=1e-10):
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    return np.abs(np.asarray(a) - np.asarray(b)).max() <= tol * scale


def test_add_examples():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(ts_add(a, np.array([[4.0, 3.0], [2.0, 1.0]])), [[5, 5], [5, 5]])
    np.testing.assert_array_equal(ts_add(a, -a), 0)
    with pytest.raises(DimensionError):
        ts_add(a, np.zeros((2, 3)))


def test_zero_divisor_pair_multiplies_to_zero():
    t = make_transform("dft", 2, 2)
    for a in (1.0, -3.5, 1e3):
        alpha = np.full((2, 2), a)
        beta = np.array([[1.0, 1.0], [-1.0, -1.0]])
        assert np.abs(ts_mul(t, alpha, beta)).max() <= 1e-12 * max(1.0, abs(a))
        assert is_zero_divisor(t, alpha) and is_zero_divisor(t, beta)


def test_identity_transform_is_elementwise():
    t = make_transform("id", 2, 2)
    out = ts_mul(t, np.array([[2.0, 0], [0, 0]]), np.array([[3.0, 0], [0, 0]]))
    np.testing.assert_array_equal(out, [[6, 0], [0, 0]])
    np.testing.assert_allclose(ts_inv(t, np.array([[2.0, 4], [5, 10]])), [[0.5, 0.25], [0.2, 0.1]])
    np.testing.assert_array_equal(ts_abs(t, np.array([[-3.0, 2], [0, -1]])), [[3, 2], [0, 1]])
    np.testing.assert_allclose(ts_sqrt(t, np.array([[4.0, 9], [16, 25]])), [[2, 3], [4, 5]])
    np.testing.assert_array_equal(unity(t), np.ones((2, 2)))


def test_dft_unity_is_impulse():
    t = make_transform("dft", 2, 2)
    e = unity(t)
    assert e.dtype == float
    np.testing.assert_allclose(e, [[1, 0], [0, 0]], atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_unity_properties(kind):
    t = make_transform(kind, 4, 4)
    e = unity(t)
    assert _close(ts_mul(t, e, e), e)
    assert _close(ts_inv(t, e), e)
    assert _close(ts_abs(t, e), e)
    assert _close(ts_sign(t, e), e)
    assert _close(ts_sqrt(t, e), e)


def test_dft_negative_impulse_abs_and_sign():
    t = make_transform("dft", 2, 2)
    a = np.array([[-1.0, 0.0], [0.0, 0.0]])
    np.testing.assert_allclose(ts_abs(t, a), unity(t), atol=1e-15)
    np.testing.assert_allclose(ts_sign(t, a), a, atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_sign_of_zero_is_unity(kind):
    t = make_transform(kind, 4, 4)
    assert _close(ts_sign(t, zero(t)), unity(t))


def test_inverse_of_zero_divisor_raises():
    t = make_transform("dft", 2, 2)
    with pytest.raises(ZeroDivisorError):
        ts_inv(t, np.array([[1.0, 1.0], [-1.0, -1.0]]))


def test_order_examples():
    t = make_transform("id", 2, 2)
    a, b = np.array([[2.0, 1], [1, 1]]), np.array([[1.0, 2], [1, 1]])
    assert not ts_order_geq(t, a, b) and not ts_order_geq(t, b, a)
    assert ts_order_geq(t, a, a)


def test_zero_divisor_classification():
    t = make_transform("dft", 2, 2)
    assert not is_zero_divisor(t, unity(t))
    assert not is_zero_divisor(t, zero(t))


@pytest.mark.parametrize("kind", KINDS)
@given(a=scalar44, b=scalar44, c=scalar44)
def test_ring_laws(kind, a, b, c):
    t = make_transform(kind, 4, 4)
    assert _close(ts_mul(t, ts_mul(t, a, b), c), ts_mul(t, a, ts_mul(t, b, c)), 1e-9)
    assert _close(ts_mul(t, a, b), ts_mul(t, b, a))
    assert _close(ts_mul(t, a, unity(t)), a)
    assert _close(ts_mul(t, a, ts_add(b, c)), ts_mul(t, a, b) + ts_mul(t, a, c), 1e-9)


@pytest.mark.parametrize("kind", KINDS)
@given(a=scalar44)
def test_inverse_when_invertible(kind, a):
    t = make_transform(kind, 4, 4)
    if is_zero_divisor(t, a) or not np.any(a):
        with pytest.raises(ZeroDivisorError):
            ts_inv(t, a)
        return
    a_hat = np.abs(t.forward(a))
    if a_hat.min() < 1e-6 * a_hat.max():
        return  # too ill-conditioned for a 1e-10 product check
    assert _close(ts_mul(t, a, ts_inv(t, a)), unity(t), 1e-8)


@pytest.mark.parametrize("kind", KINDS)
@given(a=scalar44)
def test_sign_magnitude_factorization(kind, a):
    t = make_transform(kind, 4, 4)
    assert _close(ts_mul(t, ts_sign(t, a), ts_abs(t, a)), a)
    assert _close(ts_abs(t, ts_abs(t, a)), ts_abs(t, a))
    assert ts_order_geq(t, ts_abs(t, 2 * a), ts_abs(t, a))


@pytest.mark.parametrize("kind", KINDS)
@given(a=scalar44)
def test_sqrt_squares_back(kind, a):
    t = make_transform(kind, 4, 4)
    r = ts_sqrt(t, a)
    assert _close(ts_mul(t, r, r), a)


def test_sqrt_principal_branch():
    t = make_transform("id", 1, 2)
    np.testing.assert_allclose(ts_sqrt(t, np.array([[-4.0, 4.0]])), [[2j, 2.0]])


@pytest.mark.parametrize("kind", ["dct", "dwt", "id"])
def test_real_transforms_give_real_results(rng, kind):
    t = make_transform(kind, 4, 4)
    a = rng.standard_normal((4, 4))
    for out in (ts_mul(t, a, a), ts_inv(t, a), ts_abs(t, a), ts_sign(t, a)):
        assert not np.iscomplexobj(out)


def test_stacked_scalars(rng):
    t = make_transform("dct", 4, 4)
    a = rng.standard_normal((3, 2, 4, 4))
    b = rng.standard_normal((3, 2, 4, 4))
    stacked = ts_mul(t, a, b)
    np.testing.assert_allclose(stacked[1, 0], ts_mul(t, a[1, 0], b[1, 0]), atol=1e-14)
