"""Factorizations in the L-product algebra.

All of them reduce to ordinary per-slice matrix factorizations of the
transform-domain slice stack, assembled back into time-domain tensors:

* :func:`l_svd` and :func:`truncate_l_svd` -- SVD and global top-r truncation
* :func:`symmetric_eig` and :func:`tensor_diagonalize` -- eigen-decompositions
* :func:`householder_l_qr` -- QR by tensor Householder reflections

Under ``dft2`` with real input the slice stack is conjugate-symmetric.  The
per-slice solvers then run on one slice of each conjugate pair and the
partner receives the conjugate, so real input yields real factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DefectiveSliceError,
    DimensionError,
    NotPSDError,
    NotSymmetricError,
    SliceSVDError,
    ZeroColumnError,
)
from .scalar import inv_tolerance, ts_mul
from .tensor import (
    check_tensor,
    fro_norm,
    from_slices,
    hermitian_transpose,
    identity_tensor,
    l_product,
    to_slices,
)
from .transforms import Kind, Transform, as_real, is_real

__all__ = [
    "LSvdFactors",
    "LQrFactors",
    "EigenPair",
    "l_svd",
    "l_rank",
    "truncation_mask",
    "truncate_l_svd",
    "symmetric_eig",
    "tensor_diagonalize",
    "eig_residual",
    "canonical_unique",
    "householder_vector",
    "householder_reflector",
    "householder_l_qr",
]

PHASE_TOL = 1e-12
CANONICAL_GAP = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True)
class LSvdFactors:
    """``A = U . S . Vh`` plus the transform-domain pieces it came from.

    ``sigma[p]`` holds the descending singular values of slice ``p``;
    ``u_hat`` and ``vh_hat`` are the per-slice unitary factors.
    """

    U: np.ndarray
    S: np.ndarray
    Vh: np.ndarray
    transform: Transform
    sigma: np.ndarray = field(repr=False)
    u_hat: np.ndarray = field(repr=False)
    vh_hat: np.ndarray = field(repr=False)
    canonical: bool = False

    @property
    def dims(self):
        return (self.U.shape[0], self.Vh.shape[0]) + self.transform.shape

    def reconstruct(self):
        t = self.transform
        return l_product(t, l_product(t, self.U, self.S), self.Vh)


@dataclass(frozen=True)
class LQrFactors:
    Q: np.ndarray
    R: np.ndarray
    transform: Transform
    rank_deficient: bool = False


@dataclass(frozen=True)
class EigenPair:
    lam: np.ndarray
    x: np.ndarray


def _conjugate_pairs(t, A):
    """Partner map when the slice stack of ``A`` is conjugate-symmetric, else None."""
    if t.kind is not Kind.DFT2 or np.iscomplexobj(A):
        return None
    return t.conjugate_partner()


def _per_slice(t, A, S, solve):
    """Apply ``solve`` to every slice of ``S``, exploiting conjugate symmetry.

    ``solve(stack, indices)`` returns a tuple of per-slice arrays.  Returns
    the same tuple stacked over all ``P`` slices.
    """
    P = S.shape[0]
    partner = _conjugate_pairs(t, A)
    if partner is None:
        return solve(S, np.arange(P))
    idx = np.arange(P)
    self_conj = idx[partner == idx]
    paired = idx[partner > idx]
    parts = []
    if self_conj.size:
        parts.append((self_conj, solve(np.ascontiguousarray(S[self_conj].real), self_conj)))
    if paired.size:
        parts.append((paired, solve(S[paired], paired)))
    out = None
    for rows, res in parts:
        if out is None:
            out = [np.zeros((P,) + r.shape[1:], dtype=complex) for r in res]
        for full, r in zip(out, res):
            full[rows] = r
            full[partner[rows]] = np.conj(r)
    return tuple(out)


def _first_significant(vectors, axis):
    """Entry of largest index-priority with magnitude above PHASE_TOL, per vector."""
    mags = np.abs(vectors)
    mask = mags > PHASE_TOL
    first = np.argmax(mask, axis=axis)
    picked = np.take_along_axis(vectors, np.expand_dims(first, axis), axis=axis)
    picked = np.squeeze(picked, axis=axis)
    has = mask.any(axis=axis)
    mag = np.abs(picked)
    return np.where(has & (mag > 0), picked / np.where(mag > 0, mag, 1.0), 1.0)


def _normalize_svd_phase(u, vh):
    """Make the first significant entry of each left singular vector real >= 0.

    The compensating phase goes into the matching row of ``vh``; rows of
    ``vh`` without a partner column in ``u`` are normalized on their own.
    """
    k = min(u.shape[-1], vh.shape[-2])
    d = _first_significant(u, axis=-2)  # (B, n1)
    u = u * np.conj(d)[:, None, :]
    vh = vh.copy()
    vh[:, :k, :] *= d[:, :k, None]
    if vh.shape[-2] > k:
        dv = _first_significant(vh[:, k:, :], axis=-1)
        vh[:, k:, :] *= np.conj(dv)[:, :, None]
    return u, vh


def _svd_stack(stack, indices):
    try:
        u, s, vh = np.linalg.svd(stack, full_matrices=True)
    except np.linalg.LinAlgError:
        for i, M in zip(indices, stack):
            try:
                np.linalg.svd(M)
            except np.linalg.LinAlgError as exc:
                raise SliceSVDError(i, f"SVD did not converge ({exc})") from None
        raise
    u, vh = _normalize_svd_phase(u, vh)
    return u, s, vh


def _pooled_values_distinct(values, gap=CANONICAL_GAP):
    v = np.sort(np.abs(np.ravel(values)))
    if v.size < 2:
        return bool(v.size == 0 or v[0] > 0)
    diffs = np.diff(v)
    return bool(np.all(diffs > gap * v[1:]))


def l_svd(t, A):
    """L-SVD ``A = U . S . Vh`` from one matrix SVD per transform slice.

    Singular values are descending within every slice, and each left
    singular vector has its first significant entry real and non-negative,
    which makes the output deterministic.

    Parameters
    ----------
    t : Transform
    A : array_like, shape (n1, n2, n3, n4)

    Returns
    -------
    LSvdFactors

    Raises
    ------
    SliceSVDError
        If LAPACK fails to converge on a slice.
    """
    A = check_tensor(A, t)
    n1, n2 = A.shape[:2]
    S_hat = to_slices(t, A)
    u, s, vh = _per_slice(t, A, S_hat, _svd_stack)
    s = np.real(s)
    k = min(n1, n2)
    diag = np.zeros(S_hat.shape, dtype=s.dtype)
    diag[:, np.arange(k), np.arange(k)] = s
    real = not np.iscomplexobj(A)
    return LSvdFactors(
        U=from_slices(t, u, real=real),
        S=from_slices(t, diag, real=real),
        Vh=from_slices(t, vh, real=real),
        transform=t,
        sigma=s,
        u_hat=u,
        vh_hat=vh,
        canonical=_pooled_values_distinct(s),
    )


def l_rank(factors, tol=RANK_TOL):
    """Number of diagonal tensor-scalars of ``S`` that are not (numerically) zero."""
    S = factors.S
    k = min(S.shape[:2])
    total = fro_norm(S)
    norms = np.array([fro_norm(S[i, i]) for i in range(k)])
    return int(np.count_nonzero(norms > tol * total))


def truncation_mask(sigma, r2):
    """Boolean mask of the ``r2`` globally largest singular values.

    Ties are resolved by lexicographic ``(p, i)`` order.
    """
    sigma = np.asarray(sigma)
    P, k = sigma.shape
    if not 1 <= r2 <= P * k:
        raise ValueError(f"r2 must be in [1, {P * k}], got {r2}")
    flat = sigma.ravel()
    # lexsort: last key is primary; ravel order is already (p, i)
    order = np.lexsort((np.arange(flat.size), -flat))
    mask = np.zeros(flat.size, dtype=bool)
    mask[order[:r2]] = True
    return mask.reshape(P, k)


def truncate_l_svd(factors, r2):
    """Approximation keeping the ``r2`` largest singular values over all slices.

    Dropped values take their left singular column and right singular row
    with them, slice by slice.
    """
    t = factors.transform
    mask = truncation_mask(factors.sigma, r2)
    k = factors.sigma.shape[1]
    kept = factors.sigma * mask
    slices = (factors.u_hat[:, :, :k] * kept[:, None, :]) @ factors.vh_hat[:, :k, :]
    return from_slices(t, slices, real=not np.iscomplexobj(factors.U))


def symmetric_eig(t, A, sym_tol=1e-8, psd_tol=1e-8):
    """Eigendecomposition ``A . Q = Q . D`` of a tensor of the form ``X . X^H``.

    Returns
    -------
    Q : ndarray
        Orthogonal tensor of tensor-eigenvectors.
    D : ndarray
        L-diagonal tensor; every slice diagonal is real, non-negative and
        descending.

    Raises
    ------
    NotSymmetricError
        If ``||A - A^H||_F > sym_tol * ||A||_F``.
    NotPSDError
        If some slice has an eigenvalue below ``-psd_tol * sigma_max``.
    """
    A = check_tensor(A, t)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionError(f"symmetric_eig needs a square tensor, got {A.shape[:2]}")
    norm = fro_norm(A)
    violation = fro_norm(A - hermitian_transpose(t, A))
    if violation > sym_tol * norm:
        raise NotSymmetricError(violation / norm if norm else np.inf)

    S_hat = to_slices(t, A)
    S_hat = 0.5 * (S_hat + np.conj(np.swapaxes(S_hat, -1, -2)))

    def solve(stack, indices):
        w, v = np.linalg.eigh(stack)
        # stable descending sort keeps the solver's order among ties
        order = np.argsort(-w, axis=1, kind="stable")
        w = np.take_along_axis(w, order, axis=1)
        v = np.take_along_axis(v, order[:, None, :], axis=2)
        d = _first_significant(v, axis=-2)
        return w, v * np.conj(d)[:, None, :]

    w, v = _per_slice(t, A, S_hat, solve)
    w = np.real(w)
    top = float(np.max(np.abs(w), initial=0.0))
    worst = np.unravel_index(np.argmin(w), w.shape) if w.size else (0, 0)
    if w.size and w[worst] < -psd_tol * top:
        raise NotPSDError(w[worst], worst[0])
    w = np.clip(w, 0.0, None)
    diag = np.zeros(S_hat.shape)
    diag[:, np.arange(n), np.arange(n)] = w
    real = not np.iscomplexobj(A)
    return from_slices(t, v, real=real), from_slices(t, diag, real=real)


def tensor_diagonalize(t, A, cond_limit=1e10):
    """``A . X = X . D`` from per-slice eigendecompositions.

    Eigenvalues keep the order returned by the slice solver, so a
    diagonal tensor comes back with ``X`` the identity and ``D == A``.

    Raises
    ------
    DefectiveSliceError
        If a slice's eigenvector matrix has condition number above
        ``cond_limit``.
    """
    A = check_tensor(A, t)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionError(f"tensor_diagonalize needs a square tensor, got {A.shape[:2]}")
    S_hat = to_slices(t, A)
    w, v = np.linalg.eig(S_hat)
    cond = np.linalg.cond(v)
    for p, c in enumerate(cond):
        if not np.isfinite(c) or c > cond_limit:
            raise DefectiveSliceError(p, f"eigenvector matrix condition number {c:.3e}")
    diag = np.zeros(S_hat.shape, dtype=w.dtype)
    diag[:, np.arange(n), np.arange(n)] = w
    real = not np.iscomplexobj(A)
    return from_slices(t, v, real=real), from_slices(t, diag, real=real)


def _scale_column(t, lam, x):
    return ts_mul(t, np.broadcast_to(lam, x.shape), x)


def eig_residual(t, A, pair):
    """``||A . x - lam . x||_F / (||A||_F ||x||_F)``; 0 for a zero ``x``."""
    A = check_tensor(A, t)
    x = check_tensor(pair.x, t)
    denom = fro_norm(A) * fro_norm(x)
    if denom == 0:
        return 0.0
    return fro_norm(l_product(t, A, x) - _scale_column(t, np.asarray(pair.lam), x)) / denom


def canonical_unique(t, A):
    """True when all slice singular values, pooled over slices, are distinct.

    Under ``dft2`` with real data conjugate slices share their singular
    values, so this is never true there.
    """
    S_hat = to_slices(t, check_tensor(A, t))
    return _pooled_values_distinct(np.linalg.svd(S_hat, compute_uv=False))


def householder_vector(t, x):
    """House vector ``u = x - sign(x_1) . ||x|| . e_1`` for a tensor-column.

    ``||x||`` is the tensor-scalar whose transform entry ``p`` is the
    Euclidean norm of slice ``p`` of ``x``.  The first entry of ``u`` is
    formed as ``-sign(x_1) ||x'||^2 / (|x_1| + ||x||)`` per slice, which is
    the same quantity without the cancellation.  Slices whose norm is
    negligible get ``u = 0`` there (identity reflector).

    Returns
    -------
    u : ndarray, shape (m, 1, n3, n4)
    tsnorm : ndarray, shape (n3, n4)

    Raises
    ------
    ZeroColumnError
        If ``x`` is identically zero.
    """
    x = check_tensor(x, t)
    if x.shape[1] != 1:
        raise DimensionError(f"expected a tensor-column, got {x.shape}")
    if not np.any(x):
        raise ZeroColumnError("cannot build a House vector for the zero column")
    X = to_slices(t, x)[:, :, 0]  # (P, m)
    nu = np.sqrt(np.sum(np.abs(X) ** 2, axis=1))
    x1 = X[:, 0]
    a1 = np.abs(x1)
    tol1 = float(np.ravel(inv_tolerance(x1.reshape(1, -1)))[0])
    phase = np.where(a1 > tol1, x1 / np.where(a1 > 0, a1, 1.0), 1.0)
    rest2 = np.sum(np.abs(X[:, 1:]) ** 2, axis=1)
    live = nu > float(np.ravel(inv_tolerance(nu.reshape(1, -1)))[0])
    u1 = np.where(live, -phase * rest2 / np.where(live, a1 + nu, 1.0), 0.0)
    U = np.where(live[:, None], X, 0.0).astype(np.result_type(X, u1))
    U[:, 0] = u1
    real = not np.iscomplexobj(x)
    u = from_slices(t, U[:, :, None], real=real)
    tsnorm = t.inverse(nu.reshape(t.shape))
    if real and np.iscomplexobj(tsnorm):
        tsnorm = tsnorm.real
    return u, tsnorm


def householder_reflector(t, u):
    """``I - 2 (u^H . u)^+ . u . u^H`` with the identity on slices where ``u`` vanishes.

    ``(.)^+`` inverts the nonzero transform entries of ``u^H . u`` and leaves
    zero entries at zero.  ``u`` is rescaled slice by slice before the Gram
    scalar is formed, which leaves the reflector unchanged.
    """
    u = check_tensor(u, t)
    m = u.shape[0]
    Us = to_slices(t, u)[:, :, 0]
    scale = np.max(np.abs(Us), axis=1)
    live = scale > 0
    Us = Us / np.where(live, scale, 1.0)[:, None]
    gram = np.sum(np.abs(Us) ** 2, axis=1)
    pinv = np.where(live, 1.0 / np.where(live, gram, 1.0), 0.0)
    H = np.eye(m) - 2.0 * pinv[:, None, None] * (Us[:, :, None] * np.conj(Us[:, None, :]))
    return from_slices(t, H, real=not np.iscomplexobj(u))


def householder_l_qr(t, A):
    """Householder L-QR ``A = Q . R`` for ``n1 >= n2``.

    Column ``j`` is reduced by the reflector built from ``A(j:, j)``; the
    reflectors are accumulated as ``Q^H = H_n2 ... H_1`` and ``Q`` is its
    Hermitian transpose.  A zero column is skipped (identity reflector) and
    recorded as rank deficiency.
    """
    A = check_tensor(A, t)
    n1, n2 = A.shape[:2]
    if n1 < n2:
        raise DimensionError(f"L-QR needs n1 >= n2, got {n1} x {n2}")
    real = not np.iscomplexobj(A)
    work_dtype = complex if (t.kind is Kind.DFT2 or not real) else float
    R = A.astype(work_dtype)
    Qh = identity_tensor(t, n1).astype(work_dtype)
    rank_deficient = False
    for j in range(n2):
        x = R[j:, j:j + 1]
        m = n1 - j
        try:
            u, _ = householder_vector(t, x)
            H = householder_reflector(t, u)
        except ZeroColumnError:
            H = identity_tensor(t, m)
            rank_deficient = True
        R[j:, j:] = l_product(t, H, R[j:, j:])
        G = identity_tensor(t, n1).astype(work_dtype)
        G[j:, j:] = H
        Qh = l_product(t, G, Qh)
    Q = hermitian_transpose(t, Qh)
    if real:
        R = _realify(R)
        Q = _realify(Q)
    R_hat = to_slices(t, R)
    diag = np.abs(R_hat[:, np.arange(n2), np.arange(n2)])
    if np.any(diag <= 1e-12 * max(fro_norm(R_hat), 1e-300)):
        rank_deficient = True
    return LQrFactors(Q=Q, R=R, transform=t, rank_deficient=rank_deficient)


def _realify(X):
    return as_real(X) if np.iscomplexobj(X) and is_real(X) else X
