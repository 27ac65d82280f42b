"""Compression sweeps, one-shot recognition and synthetic test data.

Compression keeps the ``r`` largest singular values of a factorization and
reports the relative square error in dB alongside the storage ratio.
Recognition subtracts the mean training video, projects on a truncated
left singular basis and picks the nearest gallery column in l1.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .decomp import l_svd, truncate_l_svd
from .errors import DimensionError
from .tensor import check_tensor, fro_norm, hermitian_transpose, identity_tensor, l_product
from .transforms import Kind, make_transform

__all__ = [
    "METHODS",
    "RSE_FLOOR_DB",
    "CompressionReport",
    "RecognitionModel",
    "rse_db",
    "ratio_svd",
    "ratio_lsvd",
    "method_transform",
    "compress_sweep",
    "reports_to_csv",
    "arrange_video",
    "disassemble_video",
    "pad_to_dyadic",
    "synth_lowrank",
    "synth_gallery",
    "add_noise_snr",
    "train_recognizer",
    "classify",
]

log = logging.getLogger(__name__)

RSE_FLOOR_DB = -300.0

METHODS = {
    "svd": None,
    "tsvd_dft": Kind.DFT2,
    "dct_svd": Kind.DCT2,
    "dwt_svd": Kind.DWT2_DB4,
}


@dataclass(frozen=True)
class CompressionReport:
    method: str
    r: int
    ratio: float
    rse_db: float
    runtime_ms: float


@dataclass(frozen=True)
class RecognitionModel:
    mean: np.ndarray
    basis: np.ndarray
    gallery: np.ndarray
    r: int
    transform: object
    degenerate: bool = False

    @property
    def n_classes(self):
        return self.gallery.shape[1]


def rse_db(A, A_r):
    """``20 log10(||A - A_r||_F / ||A||_F)``, floored at ``RSE_FLOOR_DB``."""
    A, A_r = np.asarray(A), np.asarray(A_r)
    if A.shape != A_r.shape:
        raise DimensionError(f"shapes differ: {A.shape} vs {A_r.shape}")
    norm = fro_norm(A)
    if norm == 0:
        raise ValueError("RSE is undefined for a zero reference tensor")
    rel = fro_norm(A - A_r) / norm
    if rel == 0:
        return RSE_FLOOR_DB
    return max(20.0 * np.log10(rel), RSE_FLOOR_DB)


def ratio_svd(n1, n2, r1):
    """Storage ratio of rank-``r1`` matrix factors, ``(n1 + n2 + 1) r1 / (n1 n2)``."""
    if not 1 <= r1 <= min(n1, n2):
        raise ValueError(f"r1 must be in [1, {min(n1, n2)}], got {r1}")
    return Fraction((n1 + n2 + 1) * r1, n1 * n2)


def ratio_lsvd(n1, n2, n3, n4, r2):
    """Storage ratio ``(n1 + n2 + 1) r2 / (n1 n2 n3 n4)`` of an r2-term L-SVD; may exceed 1."""
    top = n3 * n4 * min(n1, n2)
    if not 1 <= r2 <= top:
        raise ValueError(f"r2 must be in [1, {top}], got {r2}")
    return Fraction((n1 + n2 + 1) * r2, n1 * n2 * n3 * n4)


def method_transform(method, n3, n4):
    """Transform used by a compression method, or None for the per-frame SVD baseline."""
    try:
        kind = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(METHODS)}") from None
    return None if kind is None else make_transform(kind, n3, n4)


def _frame_svd(A):
    # frames are the (n1, n2) matrices A[:, :, k, l]
    frames = np.moveaxis(A, (2, 3), (0, 1))
    return np.linalg.svd(frames, full_matrices=False)


def _frame_truncate(svd, r1):
    u, s, vh = svd
    approx = (u[..., :r1] * s[..., None, :r1]) @ vh[..., :r1, :]
    return np.moveaxis(approx, (0, 1), (2, 3))


def compress_sweep(A, method, r_grid, threads=1, crop=None):
    """Truncate ``A`` at every rank in ``r_grid`` and report ratio and RSE.

    ``method`` is ``svd`` (every frame ``A[:, :, k, l]`` cut to rank ``r``)
    or one of ``tsvd_dft``, ``dct_svd``, ``dwt_svd`` (L-SVD keeping the ``r``
    globally largest singular values).  The factorization runs once; each
    report's ``runtime_ms`` is factorization plus truncation time.

    For real ``A`` the RSE is that of the real part of the approximation;
    under dft the cut can split a conjugate slice pair and leave an
    imaginary residue.

    ``crop`` gives the original ``(n3, n4)`` of a zero-padded tensor; the RSE
    is then measured on that leading block only.
    """
    A = check_tensor(A)
    r_grid = [int(r) for r in r_grid]
    if not r_grid or any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError(f"r_grid must be non-empty and strictly ascending, got {r_grid}")
    n1, n2, n3, n4 = A.shape
    t = method_transform(method, n3, n4)

    start = time.perf_counter()
    if t is None:
        for r in r_grid:
            ratio_svd(n1, n2, r)
        factors = _frame_svd(A)
        truncate = lambda r: _frame_truncate(factors, r)  # noqa: E731
        ratio = lambda r: ratio_svd(n1, n2, r)  # noqa: E731
    else:
        for r in r_grid:
            ratio_lsvd(n1, n2, n3, n4, r)
        factors = l_svd(t, A)
        truncate = lambda r: truncate_l_svd(factors, r)  # noqa: E731
        ratio = lambda r: ratio_lsvd(n1, n2, n3, n4, r)  # noqa: E731
    factor_ms = 1e3 * (time.perf_counter() - start)
    log.debug("%s factorization of %s took %.1f ms", method, A.shape, factor_ms)

    ref = A if crop is None else A[:, :, :crop[0], :crop[1]]
    real = not np.iscomplexobj(A)

    def point(r):
        t0 = time.perf_counter()
        approx = truncate(r)
        if real and np.iscomplexobj(approx):
            # a dft cut through a conjugate pair; the stored video is the real part
            approx = approx.real
        ms = factor_ms + 1e3 * (time.perf_counter() - t0)
        if crop is not None:
            approx = approx[:, :, :crop[0], :crop[1]]
        return CompressionReport(method, r, float(ratio(r)), rse_db(ref, approx), ms)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(point, r_grid))
    return [point(r) for r in r_grid]


def reports_to_csv(reports):
    lines = ["method,r,ratio,rse_db,runtime_ms"]
    for rep in reports:
        lines.append(f"{rep.method},{rep.r},{rep.ratio:.6g},{rep.rse_db:.6g},{rep.runtime_ms:.6g}")
    return "\n".join(lines) + "\n"


def arrange_video(frames):
    """Stack ``(rows, cols, 3)`` frames into a ``(rows, n_frames, 3, cols)`` tensor."""
    frames = [np.asarray(f) for f in frames]
    if not frames:
        raise DimensionError("no frames given")
    shape = frames[0].shape
    if len(shape) != 3 or shape[2] != 3:
        raise DimensionError(f"frames must be (rows, cols, 3), got {shape}")
    for j, f in enumerate(frames):
        if f.shape != shape:
            raise DimensionError(f"frame {j} has shape {f.shape}, expected {shape}")
    return np.stack(frames, axis=0).transpose(1, 0, 3, 2).copy()


def disassemble_video(A):
    """Inverse of :func:`arrange_video`."""
    A = np.asarray(A)
    if A.ndim != 4:
        raise DimensionError(f"expected a 4-D tensor, got {A.shape}")
    return [frame.copy() for frame in A.transpose(1, 0, 3, 2)]


def _next_dyadic(n, minimum=4):
    m = minimum
    while m < n:
        m *= 2
    return m


def pad_to_dyadic(A):
    """Zero-pad the two trailing modes up to powers of two (at least 4)."""
    A = np.asarray(A)
    n3, n4 = A.shape[-2:]
    m3, m4 = _next_dyadic(n3), _next_dyadic(n4)
    out = np.zeros(A.shape[:-2] + (m3, m4), dtype=A.dtype)
    out[..., :n3, :n4] = A
    return out


def _envelope(t, decay):
    """Decaying weights over transform-domain positions (frequency distance for dft)."""
    k = np.arange(t.n3)
    l = np.arange(t.n4)
    if t.kind is Kind.DFT2:
        k = np.minimum(k, t.n3 - k)
        l = np.minimum(l, t.n4 - l)
    return np.exp(-decay * (k[:, None] + l[None, :]))


def _random_orthogonal(t, n, rng):
    return l_svd(t, rng.standard_normal((n, n) + t.shape)).U


def synth_lowrank(t, dims, k, noise_sigma=0.0, seed=0, decay=0.0):
    """Seeded ``U0 . S0 . V0^H + noise`` with ``k`` nonzero diagonal tensor-scalars.

    ``U0`` and ``V0`` are random orthogonal tensors under ``t``.  Diagonal
    scalar ``i`` has transform entries ``|g~| * exp(-decay * (k + l))`` for a
    Gaussian scalar ``g``, so a positive ``decay`` concentrates the energy in
    the low transform positions of ``t``.
    """
    n1, n2, n3, n4 = (int(d) for d in dims)
    if min(n1, n2, n3, n4) < 1:
        raise DimensionError(f"dims must be positive, got {dims}")
    if (n3, n4) != t.shape:
        raise DimensionError(f"dims {dims} do not match transform {t.shape}")
    if not 0 <= k <= min(n1, n2):
        raise ValueError(f"k must be in [0, {min(n1, n2)}], got {k}")
    rng = np.random.default_rng(seed)
    U0 = _random_orthogonal(t, n1, rng)
    V0 = _random_orthogonal(t, n2, rng)
    env = _envelope(t, decay)
    S_hat = np.zeros((n1, n2, n3, n4))
    for i in range(k):
        S_hat[i, i] = np.abs(t.forward(rng.standard_normal((n3, n4)))) * env
    S0 = t.inverse(S_hat)
    if np.iscomplexobj(S0):
        S0 = S0.real  # |dft| and the folded envelope are conjugate-symmetric
    A = l_product(t, l_product(t, U0, S0), hermitian_transpose(t, V0))
    if noise_sigma:
        A = A + noise_sigma * rng.standard_normal(A.shape)
    return A


def synth_gallery(dims, n_classes, seed=0):
    """``n_classes`` random unit-energy videos of shape ``(n1, 1, n3, n4)``."""
    n1, n3, n4 = dims
    rng = np.random.default_rng(seed)
    videos = []
    for _ in range(n_classes):
        v = rng.standard_normal((n1, 1, n3, n4))
        videos.append(v / fro_norm(v))
    return videos


def add_noise_snr(x, snr_db, rng):
    """``x`` plus white Gaussian noise at the given signal-to-noise ratio."""
    x = np.asarray(x)
    power = np.mean(np.abs(x) ** 2)
    sigma = np.sqrt(power / 10 ** (snr_db / 10.0))
    return x + sigma * rng.standard_normal(x.shape)


def train_recognizer(t, videos, r):
    """Mean-subtracted L-SVD basis of the training videos plus their projections.

    ``videos`` are ``(n1, 1, n3, n4)`` tensor-columns, one per class.
    """
    if len(videos) < 2:
        raise ValueError("need at least two training classes")
    cols = [check_tensor(v, t) for v in videos]
    shape = cols[0].shape
    for j, c in enumerate(cols):
        if c.shape != shape or shape[1] != 1:
            raise DimensionError(f"video {j} has shape {c.shape}, expected {shape} with n2 == 1")
    n1 = shape[0]
    if not 1 <= r <= n1:
        raise ValueError(f"r must be in [1, {n1}], got {r}")
    F = np.concatenate(cols, axis=1)
    mean = F.mean(axis=1, keepdims=True)
    A = F - mean
    degenerate = fro_norm(A) == 0
    if degenerate:
        log.warning("training videos are identical; recognition model is degenerate")
        basis = identity_tensor(t, n1)[:, :r]
    else:
        basis = l_svd(t, A).U[:, :r]
    gallery = l_product(t, hermitian_transpose(t, basis), A)
    return RecognitionModel(mean=mean, basis=basis, gallery=gallery, r=r, transform=t, degenerate=degenerate)


def classify(model, T):
    """Nearest gallery class in time-domain l1; ties go to the smallest index.

    Returns
    -------
    (int, ndarray)
        Predicted class and the distance to every class.
    """
    t = model.transform
    T = check_tensor(T, t)
    if T.shape != model.mean.shape:
        raise DimensionError(f"probe shape {T.shape} does not match model {model.mean.shape}")
    c = l_product(t, hermitian_transpose(t, model.basis), T - model.mean)
    dist = np.sum(np.abs(model.gallery - c), axis=(0, 2, 3))
    return int(np.argmin(dist)), dist
