"""Fourth-order tensors as matrices of tensor-scalars.

A tensor is an ``(n1, n2, n3, n4)`` array: an ``n1 x n2`` matrix whose
entries are ``(n3, n4)`` tensor-scalars. Products, transposes and inverses
are evaluated slice by slice in the transform domain, where the tensor is a
stack of ``P = n3 * n4`` ordinary ``n1 x n2`` matrices (see :func:`mat_view`).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, SingularSliceError, UnsupportedSizeError
from .scalar import INV_RELATIVE, ts_mul, unity
from .transforms import as_real, is_real

__all__ = [
    "check_tensor",
    "mat_view",
    "ten_view",
    "to_slices",
    "from_slices",
    "l_product",
    "l_product_definitional",
    "hermitian_transpose",
    "identity_tensor",
    "tensor_inverse",
    "is_orthogonal",
    "is_l_diagonal",
    "t_linear_combine",
    "fro_norm",
    "spectrum_norm",
    "determinant",
    "MAX_DET_ORDER",
]

MAX_DET_ORDER = 4


def check_tensor(A, t=None):
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"expected a 4-D tensor, got shape {A.shape}")
    if t is not None and A.shape[2:] != t.shape:
        raise DimensionError(f"tensor-scalar dims {A.shape[2:]} do not match transform {t.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("tensor has non-finite entries")
    return A


def mat_view(A):
    """Slice stack ``(P, n1, n2)`` with slice ``p = k * n4 + l`` (0-based)."""
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"expected a 4-D tensor, got shape {A.shape}")
    n1, n2, n3, n4 = A.shape
    return np.moveaxis(A.reshape(n1, n2, n3 * n4), -1, 0)


def ten_view(S, dims):
    """Inverse of :func:`mat_view`."""
    S = np.asarray(S)
    n1, n2, n3, n4 = dims
    if S.shape != (n3 * n4, n1, n2):
        raise DimensionError(f"slice stack {S.shape} incompatible with dims {tuple(dims)}")
    return np.moveaxis(S, 0, -1).reshape(n1, n2, n3, n4)


def to_slices(t, A):
    """Transform-domain slice stack of ``A``."""
    return mat_view(t.forward(check_tensor(A, t)))


def from_slices(t, S, real=False):
    """Time-domain tensor from a transform-domain slice stack.

    With ``real=True`` a dft result whose imaginary part is round-off is
    returned as a real array.
    """
    P, n1, n2 = S.shape
    X = t.inverse(ten_view(S, (n1, n2, t.n3, t.n4)))
    if real and np.iscomplexobj(X) and is_real(X):
        return as_real(X)
    return X


def _real(*arrays):
    return not any(np.iscomplexobj(a) for a in arrays)


def l_product(t, A, B):
    """Tensor product ``C(i, j) = sum_k A(i, k) . B(k, j)``.

    Computed as one matrix product per transform-domain slice.
    """
    A, B = check_tensor(A, t), check_tensor(B, t)
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"inner dimensions differ: {A.shape} . {B.shape}")
    return from_slices(t, to_slices(t, A) @ to_slices(t, B), real=_real(A, B))


def l_product_definitional(t, A, B):
    """Same product, summed entry by entry with tensor-scalar multiplication.

    Slow; kept as an independent check of :func:`l_product`.
    """
    A, B = check_tensor(A, t), check_tensor(B, t)
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"inner dimensions differ: {A.shape} . {B.shape}")
    n1, m, n2 = A.shape[0], A.shape[1], B.shape[1]
    C = np.zeros((n1, n2) + t.shape, dtype=complex)
    for i in range(n1):
        for j in range(n2):
            for k in range(m):
                C[i, j] += ts_mul(t, A[i, k], B[k, j])
    return C


def hermitian_transpose(t, A):
    """``A^H``: every transform-domain slice is conjugate-transposed."""
    S = to_slices(t, A)
    return from_slices(t, np.conj(np.swapaxes(S, -1, -2)), real=_real(A))


def identity_tensor(t, n):
    if n < 1:
        raise DimensionError(f"identity order must be >= 1, got {n}")
    e = unity(t)
    eye = np.zeros((n, n) + t.shape, dtype=e.dtype)
    for i in range(n):
        eye[i, i] = e
    return eye


def tensor_inverse(t, A):
    """Inverse under the L-product, via per-slice LU solves.

    Raises
    ------
    SingularSliceError
        Naming the first transform slice whose condition number exceeds
        ``1 / 1e-12``.
    """
    A = check_tensor(A, t)
    n1, n2 = A.shape[:2]
    if n1 != n2:
        raise DimensionError(f"only square tensors have inverses, got {n1} x {n2}")
    S = to_slices(t, A)
    cond = np.linalg.cond(S)
    for p, c in enumerate(cond):
        if not np.isfinite(c) or c * INV_RELATIVE >= 1.0:
            raise SingularSliceError(p, f"condition number {c:.3e}")
    eye = np.broadcast_to(np.eye(n1), S.shape)
    return from_slices(t, np.linalg.solve(S, eye), real=_real(A))


def is_orthogonal(t, Q, tol=1e-10):
    Q = check_tensor(Q, t)
    n = Q.shape[0]
    if Q.shape[1] != n:
        return False
    S = to_slices(t, Q)
    Sh = np.conj(np.swapaxes(S, -1, -2))
    eye = identity_tensor(t, n)
    left = fro_norm(from_slices(t, Sh @ S) - eye)
    right = fro_norm(from_slices(t, S @ Sh) - eye)
    return bool(max(left, right) <= tol * n)


def is_l_diagonal(A, tol=1e-10):
    A = np.asarray(A)
    n1, n2 = A.shape[:2]
    norms = np.sqrt(np.sum(np.abs(A) ** 2, axis=(2, 3)))
    off = ~np.eye(n1, n2, dtype=bool)
    if not off.any():
        return True
    return bool(np.max(norms[off]) <= tol * fro_norm(A))


def t_linear_combine(t, columns, coeffs):
    """``sum_j columns[j] . coeffs[j]`` for tensor-columns and tensor-scalars."""
    if len(columns) != len(coeffs):
        raise DimensionError(f"{len(columns)} columns but {len(coeffs)} coefficients")
    if not columns:
        raise DimensionError("need at least one column")
    cols = [check_tensor(c, t) for c in columns]
    if any(c.shape != cols[0].shape or c.shape[1] != 1 for c in cols):
        raise DimensionError("columns must share shape (n, 1, n3, n4)")
    out = np.zeros(cols[0].shape, dtype=np.result_type(*cols, *coeffs))
    for col, c in zip(cols, coeffs):
        c = np.asarray(c)
        if c.shape != t.shape:
            raise DimensionError(f"coefficient shape {c.shape} does not match {t.shape}")
        out = out + ts_mul(t, col, np.broadcast_to(c, col.shape))
    return out


def fro_norm(A):
    return float(np.sqrt(np.sum(np.abs(np.asarray(A)) ** 2)))


def spectrum_norm(t, A):
    """``max ||A . x||_F / ||x||_F``, equal to the largest slice singular value.

    The identity holds because every supported transform scales energy by
    the same Parseval constant for ``x`` and ``A . x``.
    """
    S = to_slices(t, A)
    if S.size == 0:
        return 0.0
    return float(np.max(np.linalg.svd(S, compute_uv=False), initial=0.0))


def _det(t, A):
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    total = 0
    for j in range(n):
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        term = ts_mul(t, A[0, j], _det(t, minor))
        total = total + term if j % 2 == 0 else total - term
    return total


def determinant(t, A):
    """Cofactor-expansion determinant in tensor-scalar arithmetic (order <= 4)."""
    A = check_tensor(A, t)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionError(f"determinant needs a square tensor, got {A.shape[:2]}")
    if n > MAX_DET_ORDER:
        raise UnsupportedSizeError(f"determinant supports order <= {MAX_DET_ORDER}, got {n}")
    return _det(t, A)
