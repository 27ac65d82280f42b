"""Arithmetic in the ring of tensor-scalars.

A tensor-scalar is an ``(n3, n4)`` array. Products, inverses, magnitudes,
signs and square roots are all elementwise in the transform domain of a
:class:`~ltensor.transforms.Transform`. Every function also accepts stacks
of scalars with extra leading axes.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, ZeroDivisorError
from .transforms import as_real, is_real

__all__ = [
    "inv_tolerance",
    "ts_add",
    "ts_mul",
    "unity",
    "zero",
    "ts_inv",
    "ts_abs",
    "ts_sign",
    "ts_sqrt",
    "ts_order_geq",
    "is_zero_divisor",
]

INV_RELATIVE = 1e-12
INV_FLOOR = 1e-300


def _same_shape(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"tensor-scalar shapes differ: {a.shape} vs {b.shape}")
    return a, b


def inv_tolerance(alpha_hat):
    """Zero threshold for transform-domain entries: 1e-12 * max|entry|, floored.

    Computed per tensor-scalar (over the two trailing axes) and returned in a
    shape that broadcasts against ``alpha_hat``.
    """
    scale = np.max(np.abs(alpha_hat), axis=(-2, -1), keepdims=True)
    return np.maximum(INV_RELATIVE * scale, INV_FLOOR)


def _realify(x, real_input):
    # real transforms keep real input real already; this catches dft round-off
    if real_input and np.iscomplexobj(x) and is_real(x):
        return as_real(x)
    return x


def ts_add(alpha, beta):
    alpha, beta = _same_shape(alpha, beta)
    return alpha + beta


def ts_mul(t, alpha, beta):
    """``alpha . beta = L^-1(L(alpha) * L(beta))``."""
    alpha, beta = _same_shape(alpha, beta)
    return t.inverse(t.forward(alpha) * t.forward(beta))


def unity(t):
    """Multiplicative unity ``e = L^-1(1)``."""
    return _realify(t.inverse(np.ones(t.shape)), True)


def zero(t):
    return np.zeros(t.shape)


def ts_inv(t, alpha):
    """Multiplicative inverse ``L^-1(1 / L(alpha))``.

    Raises
    ------
    ZeroDivisorError
        If any transform-domain entry is at or below :func:`inv_tolerance`.
    """
    a_hat = t.forward(alpha)
    mags = np.abs(a_hat)
    tol = inv_tolerance(a_hat)
    if np.any(mags <= tol):
        bad = int(np.count_nonzero(mags <= tol))
        raise ZeroDivisorError(f"{bad} transform-domain entries are zero; tensor-scalar is not invertible")
    return t.inverse(1.0 / a_hat)


def ts_abs(t, alpha):
    """Magnitude ``L^-1(|L(alpha)|)``; real whenever ``alpha`` is real."""
    out = t.inverse(np.abs(t.forward(alpha)))
    return _realify(out, not np.iscomplexobj(alpha))


def _unit_phase(a_hat):
    mags = np.abs(a_hat)
    tol = inv_tolerance(a_hat)
    safe = np.where(mags > tol, mags, 1.0)
    return np.where(mags > tol, a_hat / safe, 1.0)


def ts_sign(t, alpha):
    """Sign with ``ts_sign(a) . ts_abs(a) == a``; zero entries get sign 1."""
    out = t.inverse(_unit_phase(t.forward(alpha)))
    return _realify(out, not np.iscomplexobj(alpha))


def ts_sqrt(t, alpha):
    """Principal square root taken entrywise in the transform domain."""
    a_hat = t.forward(alpha)
    return t.inverse(np.sqrt(a_hat.astype(complex)))


def ts_order_geq(t, alpha, beta):
    """Partial order on magnitude scalars: ``|L(alpha)| >= |L(beta)|`` everywhere."""
    alpha, beta = _same_shape(alpha, beta)
    a, b = np.abs(t.forward(alpha)), np.abs(t.forward(beta))
    slack = 1e-12 * max(float(np.max(a)), float(np.max(b)), 1.0)
    return bool(np.all(a >= b - slack))


def is_zero_divisor(t, alpha):
    a_hat = t.forward(alpha)
    if not np.any(a_hat):
        return False
    return bool(np.any(np.abs(a_hat) <= inv_tolerance(a_hat)))
