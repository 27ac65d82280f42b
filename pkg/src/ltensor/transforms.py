"""Invertible 2-D discrete transforms applied to tensor-scalars.

A tensor-scalar is an ``(n3, n4)`` grid. Every function here acts on the two
trailing axes of its argument, so the same call transforms one scalar, a
tensor-column, or a whole ``(n1, n2, n3, n4)`` tensor.

Real-valued transforms (``dct2``, ``dwt2_db4``, ``identity``) keep real input
real; ``dft2`` always produces complex output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from .errors import DimensionError

__all__ = [
    "Kind",
    "Transform",
    "make_transform",
    "forward",
    "inverse",
    "forward_tensor",
    "inverse_tensor",
    "daubechies4_matrix",
    "as_real",
    "is_real",
]


class Kind(str, enum.Enum):
    DFT2 = "dft2"
    DCT2 = "dct2"
    DWT2_DB4 = "dwt2_db4"
    IDENTITY = "identity"


# CLI/config spellings
_ALIASES = {
    "dft": Kind.DFT2,
    "dft2": Kind.DFT2,
    "fft": Kind.DFT2,
    "dct": Kind.DCT2,
    "dct2": Kind.DCT2,
    "dwt": Kind.DWT2_DB4,
    "dwt2": Kind.DWT2_DB4,
    "dwt2_db4": Kind.DWT2_DB4,
    "id": Kind.IDENTITY,
    "identity": Kind.IDENTITY,
}

_SQRT3 = np.sqrt(3.0)
DB4_LOWPASS = np.array([1 + _SQRT3, 3 + _SQRT3, 3 - _SQRT3, 1 - _SQRT3]) / (4 * np.sqrt(2.0))
DB4_HIGHPASS = np.array([DB4_LOWPASS[3], -DB4_LOWPASS[2], DB4_LOWPASS[1], -DB4_LOWPASS[0]])


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def daubechies4_matrix(n, levels):
    """Orthogonal analysis matrix of a periodic multi-level D4 wavelet transform.

    Each level splits the current approximation band (the leading block of
    the coefficient vector) into approximation and detail halves using the
    4-tap Daubechies filters with circular wrap-around.

    Parameters
    ----------
    n : int
        Signal length, a power of two.
    levels : int
        Number of dyadic levels, ``2**levels <= n``.

    Returns
    -------
    numpy.ndarray
        ``(n, n)`` real orthogonal matrix ``W`` with ``coeffs = W @ signal``.
    """
    if not _is_pow2(n) or (1 << levels) > n:
        raise DimensionError(f"D4 wavelet needs a power-of-two length >= 2**levels, got n={n}, levels={levels}")
    W = np.eye(n)
    m = n
    for _ in range(levels):
        step = np.zeros((m, m))
        half = m // 2
        for i in range(half):
            for k in range(4):
                step[i, (2 * i + k) % m] += DB4_LOWPASS[k]
                step[half + i, (2 * i + k) % m] += DB4_HIGHPASS[k]
        full = np.eye(n)
        full[:m, :m] = step
        W = full @ W
        m = half
    return W


@dataclass(frozen=True)
class Transform:
    """An invertible 2-D transform on ``n3 x n4`` tensor-scalars.

    Instances are immutable; the wavelet matrices are built lazily and then
    only read, so a transform can be shared between threads.
    """

    kind: Kind
    n3: int
    n4: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n3 < 1 or self.n4 < 1:
            raise DimensionError(f"transform dims must be positive, got ({self.n3}, {self.n4})")
        if self.kind is Kind.DWT2_DB4:
            for n in (self.n3, self.n4):
                if not _is_pow2(n) or n < 4:
                    raise DimensionError(
                        f"dwt2_db4 needs n3 and n4 to be powers of two >= 4, got ({self.n3}, {self.n4})"
                    )

    @property
    def shape(self):
        return (self.n3, self.n4)

    @property
    def parseval_constant(self):
        """``c`` with ``sum |L(a)|^2 == c * sum |a|^2``."""
        if self.kind is Kind.DFT2:
            return float(self.n3 * self.n4)
        return 1.0

    @property
    def is_real(self):
        """True when the transform maps real scalars to real scalars."""
        return self.kind is not Kind.DFT2

    @cached_property
    def _wavelet(self):
        levels = int(np.log2(min(self.n3, self.n4)))
        return daubechies4_matrix(self.n3, levels), daubechies4_matrix(self.n4, levels)

    def _check(self, x):
        x = np.asarray(x)
        if x.ndim < 2 or x.shape[-2:] != (self.n3, self.n4):
            raise DimensionError(
                f"expected trailing dims ({self.n3}, {self.n4}) for {self.kind.value}, got {x.shape}"
            )
        return x

    def forward(self, x):
        x = self._check(x)
        if self.kind is Kind.DFT2:
            return np.fft.fft2(x, axes=(-2, -1))
        if self.kind is Kind.DCT2:
            return scipy.fft.dctn(x, type=2, norm="ortho", axes=(-2, -1))
        if self.kind is Kind.DWT2_DB4:
            w3, w4 = self._wavelet
            return w3 @ x @ w4.T
        return np.array(x, copy=True)

    def inverse(self, x):
        x = self._check(x)
        if self.kind is Kind.DFT2:
            return np.fft.ifft2(x, axes=(-2, -1))
        if self.kind is Kind.DCT2:
            return scipy.fft.idctn(x, type=2, norm="ortho", axes=(-2, -1))
        if self.kind is Kind.DWT2_DB4:
            w3, w4 = self._wavelet
            return w3.T @ x @ w4
        return np.array(x, copy=True)

    def conjugate_partner(self):
        """Slice index map ``p -> p'`` pairing conjugate transform entries.

        Only meaningful for ``dft2`` where the transform of a real scalar
        satisfies ``a[k, l] == conj(a[-k, -l])``; for the real transforms
        every slice is its own partner.
        """
        k = np.arange(self.n3)[:, None]
        l = np.arange(self.n4)[None, :]
        if self.kind is Kind.DFT2:
            kk, ll = (-k) % self.n3, (-l) % self.n4
        else:
            kk, ll = np.broadcast_to(k, (self.n3, self.n4)), np.broadcast_to(l, (self.n3, self.n4))
        return (kk * self.n4 + ll).ravel()


def make_transform(kind, n3, n4):
    """Build a transform from a kind or one of its string spellings.

    >>> make_transform("dct", 4, 4).kind.value
    'dct2'
    """
    if isinstance(kind, str) and not isinstance(kind, Kind):
        try:
            kind = _ALIASES[kind.lower()]
        except KeyError:
            raise ValueError(f"unknown transform {kind!r}; expected one of dft, dct, dwt, id") from None
    return Transform(kind, int(n3), int(n4))


def forward(t, alpha):
    return t.forward(alpha)


def inverse(t, alpha_hat):
    return t.inverse(alpha_hat)


def forward_tensor(t, A):
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"expected a 4-D tensor, got shape {A.shape}")
    return t.forward(A)


def inverse_tensor(t, A_hat):
    A_hat = np.asarray(A_hat)
    if A_hat.ndim != 4:
        raise DimensionError(f"expected a 4-D tensor, got shape {A_hat.shape}")
    return t.inverse(A_hat)


def is_real(x, tol=1e-9):
    """Realness test with absolute imaginary tolerance ``tol * (1 + max|x|)``."""
    x = np.asarray(x)
    if not np.iscomplexobj(x) or x.size == 0:
        return True
    return float(np.max(np.abs(x.imag))) <= tol * (1.0 + float(np.max(np.abs(x))))


def as_real(x, tol=1e-9):
    """Drop a negligible imaginary part; raise if it is not negligible."""
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        return x
    if not is_real(x, tol):
        raise ValueError(f"array has non-negligible imaginary part (max {np.max(np.abs(x.imag)):.3e})")
    return np.ascontiguousarray(x.real)
