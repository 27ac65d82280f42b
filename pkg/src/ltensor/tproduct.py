"""Brute-force circulant t-product, kept as an oracle for the dft2 L-product.

Everything here materializes block-circulant matrices explicitly, so memory
grows with the square of the tube length.  Size guards refuse inputs that
would blow up instead of trying anyway.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, UnsupportedSizeError

__all__ = [
    "circ",
    "circular_convolve",
    "circular_convolve_dft",
    "bcirc3",
    "unfold3",
    "fold3",
    "t_product_3",
    "t_product_3_routes",
    "bcirc4",
    "unfold4",
    "fold4",
    "t_product_4",
    "MAX_T3_WORK",
    "MAX_T4_MODE",
]

MAX_T3_WORK = 10**6
MAX_T4_MODE = 8


def circ(x):
    """Circulant matrix whose first column is ``x`` and each next column is its cyclic shift."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise DimensionError(f"circ expects a vector, got shape {x.shape}")
    n = x.size
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return x[idx]


def circular_convolve(x, y):
    """Direct O(n^2) circular convolution ``z[i] = sum_j x[j] y[(i - j) mod n]``."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"need two vectors of equal length, got {x.shape} and {y.shape}")
    return circ(x) @ y


def circular_convolve_dft(x, y):
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"need two vectors of equal length, got {x.shape} and {y.shape}")
    z = np.fft.ifft(np.fft.fft(x) * np.fft.fft(y))
    if not (np.iscomplexobj(x) or np.iscomplexobj(y)):
        z = z.real
    return z


def bcirc3(A):
    """Block-circulant matrix of a third-order tensor; block ``(r, c)`` is ``A[:, :, (r - c) mod n3]``."""
    A = np.asarray(A)
    if A.ndim != 3:
        raise DimensionError(f"bcirc3 expects a third-order tensor, got shape {A.shape}")
    n1, n2, n3 = A.shape
    out = np.zeros((n1 * n3, n2 * n3), dtype=A.dtype)
    for r in range(n3):
        for c in range(n3):
            out[r * n1:(r + 1) * n1, c * n2:(c + 1) * n2] = A[:, :, (r - c) % n3]
    return out


def unfold3(A):
    """Stack frontal slices vertically: ``(n1, n2, n3) -> (n1 * n3, n2)``."""
    A = np.asarray(A)
    if A.ndim != 3:
        raise DimensionError(f"unfold3 expects a third-order tensor, got shape {A.shape}")
    return np.concatenate([A[:, :, k] for k in range(A.shape[2])], axis=0)


def fold3(M, n3):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] % n3:
        raise DimensionError(f"cannot fold {M.shape} into {n3} frontal slices")
    n1 = M.shape[0] // n3
    return np.stack([M[k * n1:(k + 1) * n1] for k in range(n3)], axis=2)


def _check_pair(A, B, order):
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim != order or B.ndim != order:
        raise DimensionError(f"expected order-{order} tensors, got {A.shape} and {B.shape}")
    if A.shape[1] != B.shape[0] or A.shape[2:] != B.shape[2:]:
        raise DimensionError(f"tensors are not conformable: {A.shape} and {B.shape}")
    return A, B


def _guard3(A, B):
    n1, m, n3 = A.shape
    n2 = B.shape[1]
    work = n1 * m * n2 * n3
    if work > MAX_T3_WORK:
        raise UnsupportedSizeError(
            f"t-product oracle refuses n1*n'*n2*n3 = {work} > {MAX_T3_WORK}; "
            "block-circulant storage grows quadratically in n3"
        )


def _t3_bcirc(A, B):
    return fold3(bcirc3(A) @ unfold3(B), A.shape[2])


def _t3_convolution(A, B):
    n1, m, n3 = A.shape
    n2 = B.shape[1]
    C = np.zeros((n1, n2, n3), dtype=np.result_type(A, B))
    for i in range(n1):
        for j in range(n2):
            for p in range(m):
                C[i, j] += circular_convolve(A[i, p], B[p, j])
    return C


def _t3_dft(A, B):
    Ah, Bh = np.fft.fft(A, axis=2), np.fft.fft(B, axis=2)
    C = np.fft.ifft(np.einsum("ipk,pjk->ijk", Ah, Bh), axis=2)
    if not (np.iscomplexobj(A) or np.iscomplexobj(B)):
        C = C.real
    return C


def t_product_3_routes(A, B):
    """The t-product computed three ways: bcirc/unfold/fold, tube convolutions, and the DFT.

    Returns
    -------
    dict
        ``{"bcirc": C1, "convolution": C2, "dft": C3}``.
    """
    A, B = _check_pair(A, B, 3)
    _guard3(A, B)
    return {"bcirc": _t3_bcirc(A, B), "convolution": _t3_convolution(A, B), "dft": _t3_dft(A, B)}


def t_product_3(A, B):
    """Third-order t-product ``fold(bcirc(A) @ unfold(B))``."""
    A, B = _check_pair(A, B, 3)
    _guard3(A, B)
    return _t3_bcirc(A, B)


def bcirc4(A):
    """Block-circulant third-order tensor over the last mode.

    Block ``(r, c)`` is ``A[:, :, :, (r - c) mod n4]``; the result has shape
    ``(n1 * n4, n2 * n4, n3)``.
    """
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"bcirc4 expects a fourth-order tensor, got shape {A.shape}")
    n1, n2, n3, n4 = A.shape
    out = np.zeros((n1 * n4, n2 * n4, n3), dtype=A.dtype)
    for r in range(n4):
        for c in range(n4):
            out[r * n1:(r + 1) * n1, c * n2:(c + 1) * n2] = A[:, :, :, (r - c) % n4]
    return out


def unfold4(A):
    """``(n1, n2, n3, n4) -> (n1 * n4, n2, n3)`` by stacking the last-mode slices."""
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"unfold4 expects a fourth-order tensor, got shape {A.shape}")
    return np.concatenate([A[:, :, :, l] for l in range(A.shape[3])], axis=0)


def fold4(M, n4):
    M = np.asarray(M)
    if M.ndim != 3 or M.shape[0] % n4:
        raise DimensionError(f"cannot fold {M.shape} into {n4} last-mode slices")
    n1 = M.shape[0] // n4
    return np.stack([M[l * n1:(l + 1) * n1] for l in range(n4)], axis=3)


def t_product_4(A, B):
    """Fourth-order t-product ``fold(bcirc(A) *_t unfold(B))``, recursing into the third-order one."""
    A, B = _check_pair(A, B, 4)
    biggest = max(A.shape + B.shape)
    if biggest > MAX_T4_MODE:
        raise UnsupportedSizeError(
            f"fourth-order t-product oracle supports modes <= {MAX_T4_MODE}, got {biggest}"
        )
    return fold4(t_product_3(bcirc4(A), unfold4(B)), A.shape[3])
