import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from ltensor.cli import main
from ltensor.io import write_lt4d, write_ppm
from ltensor.pipelines import synth_gallery


@pytest.fixture
def frames_dir(tmp_path, rng):
    d = tmp_path / "frames"
    d.mkdir()
    for j in range(4):
        write_ppm(d / f"f{j:03d}.ppm", rng.random((8, 4, 3)))
    return d


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_compress_ppm_dir(frames_dir, tmp_path):
    out = tmp_path / "report.csv"
    assert main(["compress", "--transform", "dct", "--in", str(frames_dir), "--r", "1,4,16", "--out", str(out)]) == 0
    text = out.read_text()
    assert "\r" not in text
    rows = _rows(text)
    assert [r["r"] for r in rows] == ["1", "4", "16"]
    assert list(rows[0]) == ["method", "r", "ratio", "rse_db", "runtime_ms"]
    assert all(r["method"] == "dct_svd" for r in rows)
    rse = [float(r["rse_db"]) for r in rows]
    assert rse == sorted(rse, reverse=True)


def test_compress_lt4d_to_stdout(tmp_path, rng, capsys):
    write_lt4d(tmp_path / "a.lt4d", rng.standard_normal((4, 3, 4, 4)))
    assert main(["compress", "--transform", "id", "--in", str(tmp_path / "a.lt4d"), "--r", "1,3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["method"] for r in rows] == ["svd", "svd"]


def test_compress_missing_input(tmp_path, capsys):
    assert main(["compress", "--in", str(tmp_path / "nope"), "--r", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_compress_dwt_needs_dyadic(frames_dir, capsys):
    # frames arranged as (8, 4, 3, 4): n3 = 3 colour channels is not dyadic
    assert main(["compress", "--transform", "dwt", "--in", str(frames_dir), "--r", "1"]) == 2
    assert "power" in capsys.readouterr().err
    assert main(["compress", "--transform", "dwt", "--pad", "--in", str(frames_dir), "--r", "1,8"]) == 0


def test_compress_bad_magic(tmp_path):
    (tmp_path / "bad.lt4d").write_bytes(b"NOPE" + bytes(40))
    assert main(["compress", "--in", str(tmp_path / "bad.lt4d"), "--r", "1"]) == 2


def test_compress_r_out_of_range(tmp_path, rng):
    write_lt4d(tmp_path / "a.lt4d", rng.standard_normal((2, 2, 2, 2)))
    assert main(["compress", "--in", str(tmp_path / "a.lt4d"), "--r", "9"]) == 2


def test_bad_r_list_rejected():
    with pytest.raises(SystemExit) as err:
        main(["compress", "--in", "x", "--r", "4,2"])
    assert err.value.code == 2


def test_recognize_training_set(tmp_path, capsys):
    d = tmp_path / "train"
    d.mkdir()
    for j, v in enumerate(synth_gallery((6, 4, 4), 3, seed=1)):
        write_lt4d(d / f"class{j}.lt4d", v)
    model_dir = tmp_path / "model"
    assert main(["recognize", "--transform", "dct", "--in", str(d), "--out", str(model_dir)]) == 0
    out = capsys.readouterr().out
    assert "accuracy 100.0% (3/3)" in out
    assert (model_dir / "gallery.lt4d").exists() and (model_dir / "manifest.txt").exists()


def test_recognize_probe_file(tmp_path, capsys):
    videos = synth_gallery((6, 4, 4), 3, seed=1)
    write_lt4d(tmp_path / "train.lt4d", np.concatenate(videos, axis=1))
    write_lt4d(tmp_path / "probe.lt4d", videos[2])
    argv = ["recognize", "--transform", "dft", "--in", str(tmp_path / "train.lt4d"), "--probe", str(tmp_path / "probe.lt4d")]
    assert main(argv) == 0
    assert "probe 0: class 2" in capsys.readouterr().out


def test_verify_default_passes(capsys):
    assert main(["verify"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_filter(capsys):
    assert main(["verify", "--suite", "tproduct", "--max-dim", "4"]) == 0
    out = capsys.readouterr().out
    assert "tproduct" in out and "lsvd" not in out


def test_verify_injected_fault(capsys):
    assert main(["verify", "--inject-fault"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "nonsense"]) == 2


def test_bench_csv(capsys):
    assert main(["bench", "--dims", "4,4,4,4", "--repeats", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["method"] for r in rows] == ["tsvd_dft", "dct_svd", "dwt_svd", "svd"]
    assert all(r["dims"] == "4x4x4x4" and float(r["runtime_ms"]) > 0 for r in rows)


def test_bench_skips_dwt_for_odd_sizes(capsys):
    assert main(["bench", "--dims", "3,3,3,5", "--repeats", "1"]) == 0
    assert "dwt_svd" not in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ltensor", "verify", "--suite", "group"],
        capture_output=True, text=True, env={"LTENSOR_LOG": "debug", "PATH": ""},
    )
    assert proc.returncode == 0, proc.stderr
