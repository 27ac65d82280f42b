from fractions import Fraction

import numpy as np
import pytest

from ltensor.decomp import l_rank, l_svd, truncate_l_svd
from ltensor.errors import DimensionError
from ltensor.pipelines import (
    RSE_FLOOR_DB,
    add_noise_snr,
    arrange_video,
    classify,
    compress_sweep,
    disassemble_video,
    pad_to_dyadic,
    ratio_lsvd,
    ratio_svd,
    reports_to_csv,
    rse_db,
    synth_gallery,
    synth_lowrank,
    train_recognizer,
)
from ltensor.transforms import make_transform

from oracles import best_rank_k, ratio_numer_denom_lsvd, ratio_numer_denom_svd


def test_rse_examples(rng):
    A = rng.standard_normal((3, 3, 2, 2))
    assert rse_db(A, A) == RSE_FLOOR_DB == -300.0
    assert rse_db(A, np.zeros_like(A)) == pytest.approx(0.0)
    # error at 0.707 of the signal norm is the familiar 3 dB
    assert rse_db(A, A * (1 - 0.707)) == pytest.approx(-3.01, abs=0.005)
    with pytest.raises(ValueError):
        rse_db(np.zeros_like(A), A)
    with pytest.raises(DimensionError):
        rse_db(A, A[:2])


def test_ratio_examples():
    assert ratio_svd(4, 4, 1) == Fraction(9, 16)
    assert float(ratio_lsvd(4, 4, 2, 2, 16)) == 2.25
    with pytest.raises(ValueError):
        ratio_svd(4, 4, 0)
    with pytest.raises(ValueError):
        ratio_lsvd(4, 4, 2, 2, 17)


def test_ratio_formulas_against_integers():
    for n1 in (1, 3, 8):
        for n2 in (2, 5):
            for r1 in range(1, min(n1, n2) + 1):
                num, den = ratio_numer_denom_svd(n1, n2, r1)
                assert ratio_svd(n1, n2, r1) * den == num
            for n3, n4 in ((1, 1), (3, 4)):
                for r2 in (1, n3 * n4, n3 * n4 * min(n1, n2)):
                    num, den = ratio_numer_denom_lsvd(n1, n2, n3, n4, r2)
                    assert ratio_lsvd(n1, n2, n3, n4, r2) * den == num


@pytest.mark.parametrize("method", ["svd", "tsvd_dft", "dct_svd", "dwt_svd"])
def test_full_rank_sweep_is_perfect(rng, method):
    A = rng.standard_normal((5, 4, 4, 4))
    top = 4 if method == "svd" else 64
    (rep,) = compress_sweep(A, method, [top])
    assert rep.rse_db <= -290
    assert rep.method == method and rep.r == top


@pytest.mark.parametrize("method", ["svd", "tsvd_dft", "dct_svd", "dwt_svd"])
def test_sweep_monotone(rng, method):
    A = rng.standard_normal((6, 5, 4, 4))
    grid = [1, 2, 3, 4, 5] if method == "svd" else [1, 5, 10, 20, 40, 80]
    reps = compress_sweep(A, method, grid)
    rse = [r.rse_db for r in reps]
    assert all(b <= a + 1e-9 for a, b in zip(rse, rse[1:]))
    assert [r.r for r in reps] == grid


def test_sweep_rejects_bad_grid(rng):
    A = rng.standard_normal((3, 3, 4, 4))
    with pytest.raises(ValueError):
        compress_sweep(A, "dct_svd", [4, 2])
    with pytest.raises(ValueError):
        compress_sweep(A, "dct_svd", [49])
    with pytest.raises(ValueError):
        compress_sweep(A, "wavelet", [1])


def test_svd_baseline_truncates_each_frame(rng):
    A = rng.standard_normal((5, 4, 2, 3))
    (rep,) = compress_sweep(A, "svd", [2])
    approx = np.zeros_like(A)
    for k in range(2):
        for l in range(3):
            approx[:, :, k, l] = best_rank_k(A[:, :, k, l], 2)
    assert rep.rse_db == pytest.approx(rse_db(A, approx), abs=1e-9)
    assert rep.ratio == pytest.approx(float(ratio_svd(5, 4, 2)))


def test_dft_sweep_matches_direct_per_slice_truncation(rng):
    # third-order data embedded with n4 = 1
    A = rng.standard_normal((5, 4, 6, 1))
    grid = [3, 7, 12]
    reps = compress_sweep(A, "tsvd_dft", grid)
    F = np.fft.fft(A[:, :, :, 0], axis=2)
    sv = [np.linalg.svd(F[:, :, k]) for k in range(6)]
    pool = sorted(((-s[i], k, i) for k, (_, s, _) in enumerate(sv) for i in range(4)))
    for rep, r in zip(reps, grid):
        keep = {(k, i) for _, k, i in pool[:r]}
        approx = np.zeros_like(F)
        for k, (u, s, vh) in enumerate(sv):
            for i in range(4):
                if (k, i) in keep:
                    approx[:, :, k] += s[i] * np.outer(u[:, i], vh[i])
        direct = np.fft.ifft(approx, axis=2).real[..., None]
        assert rep.rse_db == pytest.approx(rse_db(A, direct), abs=1e-9)


def test_threads_do_not_change_results(rng):
    A = rng.standard_normal((4, 4, 4, 4))
    a = compress_sweep(A, "dct_svd", [1, 8, 16, 32], threads=1)
    b = compress_sweep(A, "dct_svd", [1, 8, 16, 32], threads=4)
    assert [x.rse_db for x in a] == [x.rse_db for x in b]


def test_crop_measures_original_block(rng):
    A = rng.standard_normal((4, 3, 3, 5))
    P = pad_to_dyadic(A)
    assert P.shape == (4, 3, 4, 8)
    np.testing.assert_array_equal(P[:, :, :3, :5], A)
    (rep,) = compress_sweep(P, "dwt_svd", [96], crop=(3, 5))
    assert rep.rse_db <= -290


def test_csv_format():
    from ltensor.pipelines import CompressionReport

    text = reports_to_csv([CompressionReport("dct_svd", 4, 0.5625, -12.3456789, 1.0)])
    assert text == "method,r,ratio,rse_db,runtime_ms\ndct_svd,4,0.5625,-12.3457,1\n"


def test_arrange_video(rng):
    frame = rng.random((2, 2, 3))
    assert arrange_video([frame]).shape == (2, 1, 3, 2)
    frames = [rng.random((6, 10, 3)) for _ in range(4)]
    A = arrange_video(frames)
    assert A.shape == (6, 4, 3, 10)
    np.testing.assert_array_equal(A[1, 2, 0, 7], frames[2][1, 7, 0])
    for a, b in zip(disassemble_video(A), frames):
        np.testing.assert_array_equal(a, b)
    with pytest.raises(DimensionError):
        arrange_video([frames[0], frames[1][:5]])
    with pytest.raises(DimensionError):
        arrange_video([])


@pytest.mark.parametrize("kind", ["dft", "dct", "dwt", "id"])
def test_synth_lowrank(kind):
    t = make_transform(kind, 4, 4)
    A = synth_lowrank(t, (5, 4, 4, 4), 3, seed=7)
    assert A.dtype == float
    assert l_rank(l_svd(t, A)) == 3
    np.testing.assert_array_equal(A, synth_lowrank(t, (5, 4, 4, 4), 3, seed=7))
    assert not np.array_equal(A, synth_lowrank(t, (5, 4, 4, 4), 3, seed=8))
    B = synth_lowrank(t, (5, 4, 4, 4), 1, seed=3)
    assert rse_db(B, truncate_l_svd(l_svd(t, B), 16)) <= -290
    with pytest.raises(ValueError):
        synth_lowrank(t, (5, 4, 4, 4), 5)
    with pytest.raises(DimensionError):
        synth_lowrank(t, (5, 4, 2, 4), 1)


def test_matched_transform_beats_dft_on_exact_low_rank():
    t = make_transform("dct", 4, 4)
    A = synth_lowrank(t, (6, 6, 4, 4), 2, seed=1, decay=0.6)
    r = 2 * 16
    (matched,) = compress_sweep(A, "dct_svd", [r])
    (dft,) = compress_sweep(A, "tsvd_dft", [r])
    assert matched.rse_db <= -200
    assert dft.rse_db >= matched.rse_db + 3


def test_recognizer_degenerate_and_shapes(rng):
    t = make_transform("dct", 4, 4)
    v = rng.standard_normal((5, 1, 4, 4))
    model = train_recognizer(t, [v, v.copy()], 5)
    assert model.degenerate
    model = train_recognizer(t, synth_gallery((5, 4, 4), 3, seed=1), 1)
    assert model.basis.shape == (5, 1, 4, 4)
    assert model.gallery.shape == (1, 3, 4, 4)
    with pytest.raises(ValueError):
        train_recognizer(t, [v], 1)
    with pytest.raises(ValueError):
        train_recognizer(t, [v, v], 6)
    with pytest.raises(DimensionError):
        train_recognizer(t, [v, rng.standard_normal((4, 1, 4, 4))], 2)


@pytest.mark.parametrize("kind", ["dft", "dct", "dwt", "id"])
def test_recognizer_exact_match(kind):
    t = make_transform(kind, 4, 4)
    videos = synth_gallery((6, 4, 4), 4, seed=2)
    model = train_recognizer(t, videos, 6)
    G = model.gallery
    for i in range(4):
        for j in range(i + 1, 4):
            assert np.sum(np.abs(G[:, i] - G[:, j])) > 0
    for j, v in enumerate(videos):
        label, dist = classify(model, v)
        assert label == j and dist[j] <= 1e-9


def test_classify_mean_probe_gives_gallery_norms():
    t = make_transform("dct", 4, 4)
    model = train_recognizer(t, synth_gallery((6, 4, 4), 3, seed=4), 6)
    label, dist = classify(model, model.mean)
    np.testing.assert_allclose(dist, np.sum(np.abs(model.gallery), axis=(0, 2, 3)), atol=1e-12)
    assert label == int(np.argmin(dist))
    with pytest.raises(DimensionError):
        classify(model, np.zeros((5, 1, 4, 4)))


def test_classify_tie_goes_to_smallest_index():
    t = make_transform("id", 1, 1)
    v0 = np.array([1.0, 0.0]).reshape(2, 1, 1, 1)
    v1 = np.array([-1.0, 0.0]).reshape(2, 1, 1, 1)
    model = train_recognizer(t, [v0, v1], 2)
    label, dist = classify(model, model.mean)
    assert dist[0] == dist[1] and label == 0


def test_noisy_recognition_accuracy():
    t = make_transform("dct", 8, 8)
    videos = synth_gallery((12, 8, 8), 6, seed=5)
    model = train_recognizer(t, videos, 12)
    r = np.random.default_rng(11)
    hits = 0
    for trial in range(200):
        j = trial % 6
        label, _ = classify(model, add_noise_snr(videos[j], 20.0, r))
        hits += label == j
    assert hits >= 180


def test_noise_snr_level():
    r = np.random.default_rng(0)
    x = np.ones((100, 1, 10, 10))
    noisy = add_noise_snr(x, 20.0, r)
    snr = 10 * np.log10(np.mean(x**2) / np.mean((noisy - x) ** 2))
    assert snr == pytest.approx(20.0, abs=0.2)
