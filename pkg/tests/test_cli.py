import json
import os

import numpy as np
import pytest

from frisr.cli import main, ResultsStore
from frisr.formats import read_kspace, read_image, read_sweep, write_kspace, write_mask, write_image, sha256
from frisr.mask import EdgeMask
from frisr.recon import adjoint_op, scale_samples
from conftest import curve_dirac_grid


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("FRISR_SEED", "FRISR_THREADS", "FRISR_MANIFEST_DIR", "FRISR_RESULTS_DB"):
        monkeypatch.delenv(name, raising=False)


def run_cli(tmp_path, *argv) -> int:
    return main([*argv, "--manifest-dir", str(tmp_path), "--quiet"])


def load_manifest(tmp_path, output, command) -> dict:
    with open(tmp_path / f"{os.path.basename(output)}.{command}.manifest.json") as f:
        return json.load(f)


def acquire(tmp_path, name="d.ksp", *extra) -> str:
    out = str(tmp_path / name)
    assert run_cli(tmp_path, "acquire", "--kx", "8", "--ky", "8", "--out", out, *extra) == 0
    return out


def test_acquire_grid_shape(tmp_path):
    out = str(tmp_path / "d.ksp")
    assert run_cli(tmp_path, "acquire", "--phantom", "shepp-logan", "--kx", "32", "--ky", "24", "--snr-db", "inf", "--out", out) == 0
    assert read_kspace(out).shape == (49, 65)


def test_acquire_inf_snr_equals_noiseless(tmp_path):
    explicit = acquire(tmp_path, "a.ksp", "--snr-db", "inf")
    implicit = acquire(tmp_path, "b.ksp")
    assert open(explicit, 'rb').read() == open(implicit, 'rb').read()


def test_acquire_seed_reproducible(tmp_path):
    first = acquire(tmp_path, "a.ksp", "--snr-db", "20", "--seed", "3")
    second = acquire(tmp_path, "b.ksp", "--snr-db", "20", "--seed", "3")
    other = acquire(tmp_path, "c.ksp", "--snr-db", "20", "--seed", "4")
    assert sha256(first) == sha256(second)
    assert sha256(first) != sha256(other)


def test_manifest_records_digests_and_seed(tmp_path):
    out = acquire(tmp_path, "d.ksp", "--snr-db", "20", "--seed", "11")
    manifest = load_manifest(tmp_path, out, "acquire")
    assert manifest["command"] == "acquire"
    assert manifest["seed"] == 11
    assert manifest["outputs"][out] == sha256(out)
    assert manifest["config"]["snr_db"] == 20.0
    assert "numpy" in manifest["versions"]
    assert manifest["metrics"]["exit_code"] == 0


def test_mask_missing_filter_is_usage_error(tmp_path, capsys):
    ksp = acquire(tmp_path)
    assert run_cli(tmp_path, "mask", "--input", ksp, "--out", str(tmp_path / "m.img")) == 2
    assert "usage" in capsys.readouterr().err


def test_mask_filter_larger_than_window(tmp_path):
    ksp = acquire(tmp_path)
    out = str(tmp_path / "m.img")
    assert run_cli(tmp_path, "mask", "--input", ksp, "--filter", "9x1", "--render", "32x32", "--out", out) == 4
    assert not os.path.exists(out)
    assert load_manifest(tmp_path, out, "mask")["metrics"]["exit_code"] == 4


def test_bad_magic_is_io_error(tmp_path):
    bad = tmp_path / "bad.ksp"
    bad.write_bytes(b"NOPE{}\n")
    assert run_cli(tmp_path, "mask", "--input", str(bad), "--filter", "1x1", "--out", str(tmp_path / "m.img")) == 3


def test_mask_zero_order_on_exact_model_data(tmp_path):
    ksp = str(tmp_path / "curve.ksp")
    write_kspace(ksp, curve_dirac_grid(10, 10))
    out = str(tmp_path / "m.img")
    coeffs = str(tmp_path / "basis.json")
    assert run_cli(tmp_path, "mask", "--input", ksp, "--filter", "2x2", "--order", "0", "--render", "32x32",
                   "--out", out, "--coeffs-out", coeffs) == 0
    metrics = load_manifest(tmp_path, out, "mask")["metrics"]
    assert metrics["P"] == 9
    assert metrics["residual"] < 1e-6
    assert read_image(out).shape == (32, 32)
    assert os.path.exists(str(tmp_path / "m.sv.csv"))
    assert os.path.exists(coeffs)


def test_eval_prints_snr(tmp_path, capsys):
    ref, same, scaled, small = (str(tmp_path / name) for name in ("ref.img", "same.img", "scaled.img", "small.img"))
    write_image(ref, np.ones((8, 8)))
    write_image(same, np.ones((8, 8)))
    write_image(scaled, 1.1 * np.ones((8, 8)))
    write_image(small, np.ones((4, 4)))

    assert run_cli(tmp_path, "eval", "--image", same, "--reference", ref) == 0
    assert capsys.readouterr().out.strip() == "inf"
    assert run_cli(tmp_path, "eval", "--image", scaled, "--reference", ref) == 0
    assert capsys.readouterr().out.strip() == "20.0"
    assert run_cli(tmp_path, "eval", "--image", small, "--reference", ref) == 2


def test_eval_appends_csv_rows(tmp_path):
    ref = str(tmp_path / "ref.img")
    write_image(ref, np.ones((8, 8)))
    table = str(tmp_path / "scores.csv")
    for label in ("a", "b"):
        assert run_cli(tmp_path, "eval", "--image", ref, "--reference", ref, "--csv", table, "--label", label) == 0
    lines = open(table).read().splitlines()
    assert lines[0] == "label,image,reference,snr_db"
    assert [line.split(',')[0] for line in lines[1:]] == ["a", "b"]


def test_recon_lambda_zero_is_zero_filled(tmp_path):
    ksp = acquire(tmp_path)
    out = str(tmp_path / "x.img")
    assert run_cli(tmp_path, "recon", "--input", ksp, "--lambda", "0", "--size", "32x32", "--out", out) == 0
    expected = adjoint_op(scale_samples(read_kspace(ksp), (32, 32)), (32, 32))
    assert np.allclose(read_image(out), expected)


def test_recon_without_mask_equals_unit_mask(tmp_path):
    ksp = acquire(tmp_path)
    ones = str(tmp_path / "ones.img")
    write_mask(ones, EdgeMask(np.ones((32, 32))))
    plain, weighted = str(tmp_path / "tv.img"), str(tmp_path / "wtv.img")
    common = ["--input", ksp, "--lambda", "0.01", "--iters", "30"]
    assert run_cli(tmp_path, "recon", *common, "--size", "32x32", "--out", plain) == 0
    assert run_cli(tmp_path, "recon", *common, "--mask", ones, "--out", weighted) == 0
    assert np.array_equal(read_image(plain), read_image(weighted))


def test_recon_mask_grid_mismatch(tmp_path):
    ksp = acquire(tmp_path)
    mask = str(tmp_path / "m.img")
    write_mask(mask, EdgeMask(np.ones((32, 32))))
    assert run_cli(tmp_path, "recon", "--input", ksp, "--mask", mask, "--size", "64x64", "--out", str(tmp_path / "x.img")) == 2


def test_config_precedence(tmp_path, monkeypatch):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"kx": 8, "ky": 8, "seed": 5, "snr-db": "20"}))

    def recorded_seed(name, *argv):
        out = str(tmp_path / name)
        assert run_cli(tmp_path, "acquire", "--config", str(config), "--out", out, *argv) == 0
        return load_manifest(tmp_path, out, "acquire")["seed"]

    monkeypatch.setenv("FRISR_SEED", "3")
    assert recorded_seed("a.ksp") == 5
    assert recorded_seed("b.ksp", "--seed", "7") == 7
    config.write_text(json.dumps({"kx": 8, "ky": 8}))
    assert recorded_seed("c.ksp") == 3


def test_config_unknown_key(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"kx": 8, "ky": 8, "colour": "blue"}))
    assert run_cli(tmp_path, "acquire", "--config", str(config), "--out", str(tmp_path / "d.ksp")) == 2
    assert "colour" in capsys.readouterr().err


def test_compare_single_lambda(tmp_path, capsys):
    out_dir = tmp_path / "cmp"
    out_dir.mkdir()
    db = str(tmp_path / "results.db")
    assert run_cli(tmp_path, "compare", "--kx", "8", "--ky", "8", "--size", "32x32", "--lambdas", "0.01",
                   "--iters", "30", "--out-dir", str(out_dir), "--results-db", db, "--run-tag", "small") == 0
    out = capsys.readouterr().out
    for method in ("tv", "wtv"):
        rows = read_sweep(str(out_dir / f"{method}.csv")).rows
        assert len(rows) == 1
        assert f"{method}: best SNR {rows[0].snr_db:.1f} dB at lambda=0.01" in out
    assert read_image(str(out_dir / "mask.img")).shape == (32, 32)

    store = ResultsStore(db)
    assert store.get_num_rows("small") == 2
    assert [method for method, _, _ in store.best_per_method("small")] == ["tv", "wtv"]
    store.close()


def test_compare_closes_results_store_on_failure(tmp_path, monkeypatch):
    closed = []

    class FailingStore(ResultsStore):
        def add_sweep(self, run_tag, method, sweep):
            raise OSError("disk full")

        def close(self):
            closed.append(True)
            super().close()

    monkeypatch.setattr("frisr.cli._compare.ResultsStore", FailingStore)
    out_dir = tmp_path / "cmp"
    out_dir.mkdir()
    assert run_cli(tmp_path, "compare", "--kx", "8", "--ky", "8", "--size", "32x32", "--lambdas", "0.01",
                   "--iters", "10", "--out-dir", str(out_dir), "--results-db", str(tmp_path / "results.db")) == 3
    assert closed == [True]


def test_mask_negative_tail_is_usage_error(tmp_path):
    ksp = acquire(tmp_path, "d.ksp", "--snr-db", "20")
    out = str(tmp_path / "m.img")
    assert run_cli(tmp_path, "mask", "--input", ksp, "--filter", "2x2", "--snr-db", "20", "--tail", "-1", "--out", out) == 2
