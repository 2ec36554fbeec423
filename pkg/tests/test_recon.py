import math

import numpy as np
import pytest

from frisr import GeometryError, KSpaceGrid, SolverDivergenceError, TruthMode, MaskMethod
from frisr.annihilation import FilterSupport
from frisr.mask import MaskParams, estimate_pipeline
from frisr.phantom import shepp_logan_spec, ellipse_kspace, rasterize, add_noise, trig_region_kspace
from conftest import cross_mu
from frisr.recon import (
    ReconConfig, WeightMap, weights_from_mask, forward_op, adjoint_op, scale_samples, gradient, divergence,
    wtv_recon, tv_recon, objective, penalty, snr, lambda_sweep, ground_truth, SweepRow, SweepResult,
)


def random_image(rng, size):
    nx, ny = size
    return rng.standard_normal((ny, nx)) + 1j * rng.standard_normal((ny, nx))


def random_grid(rng, kx_max, ky_max):
    shape = (2 * ky_max + 1, 2 * kx_max + 1)
    return KSpaceGrid(kx_max, ky_max, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def admm_wtv(b, weights, lam, size, rho=1.0, iters=10000):
    """Weighted TV by ADMM on the split z = grad x; both quadratic terms are diagonal in the plain DFT."""
    nx, ny = size
    kx = np.fft.fftfreq(nx, 1.0 / nx)
    ky = np.fft.fftfreq(ny, 1.0 / ny)
    window = np.outer(np.abs(ky) <= b.ky_max, np.abs(kx) <= b.kx_max).astype(float)
    laplacian = np.add.outer(4 * np.sin(np.pi * ky / ny) ** 2, 4 * np.sin(np.pi * kx / nx) ** 2)
    denominator = 2 * window + rho * laplacian
    atb = 2 * adjoint_op(b, size)
    x = adjoint_op(b, size)
    z = gradient(x)
    u = np.zeros_like(z)
    bound = lam * weights / rho
    for _ in range(iters):
        rhs = atb - rho * divergence(z - u)
        x = np.fft.ifft2(np.fft.fft2(rhs) / denominator)
        v = gradient(x) + u
        mag = np.sqrt(np.abs(v[0]) ** 2 + np.abs(v[1]) ** 2)
        z = v * np.maximum(0.0, 1 - bound / np.maximum(mag, 1e-300))
        u = v - z
    return x


def test_forward_adjoint_identity(rng):
    size = (12, 10)
    x = random_image(rng, size)
    y = random_grid(rng, 4, 3)
    lhs = np.vdot(forward_op(x, 4, 3).values, y.values)
    rhs = np.vdot(x, adjoint_op(y, size))
    assert abs(lhs - rhs) < 1e-12 * abs(lhs)


def test_forward_of_adjoint_is_identity_on_window(rng):
    y = random_grid(rng, 5, 5)
    assert np.allclose(forward_op(adjoint_op(y, (16, 16)), 5, 5).values, y.values, atol=1e-12)


def test_gradient_divergence_adjoint(rng):
    x = random_image(rng, (9, 7))
    p = np.stack([random_image(rng, (9, 7)), random_image(rng, (9, 7))])
    assert abs(np.vdot(gradient(x), p) + np.vdot(x, divergence(p))) < 1e-12 * np.linalg.norm(x) * np.linalg.norm(p)


def test_gradient_norm_bound(rng):
    x = random_image(rng, (16, 16))
    for _ in range(30):
        x = -divergence(gradient(x))
        x = x / np.linalg.norm(x)
    assert np.linalg.norm(gradient(x)) ** 2 <= 8.0 + 1e-9


def test_window_too_large_for_grid():
    with pytest.raises(GeometryError):
        adjoint_op(KSpaceGrid.zeros(8, 2), (16, 16))


def test_forward_op_approximates_continuous_samples():
    spec = shepp_logan_spec()
    size = (256, 256)
    b = scale_samples(ellipse_kspace(spec, 8, 8), size)
    ax = forward_op(rasterize(spec, size, supersample=4), 8, 8)
    assert np.linalg.norm(ax.values - b.values) < 0.02 * np.linalg.norm(b.values)


def test_recon_config_validation():
    with pytest.raises(ValueError):
        ReconConfig(lam=-1)
    with pytest.raises(ValueError):
        ReconConfig(tau=1.0, sigma=1.0)
    tau, sigma = ReconConfig().steps()
    assert tau * sigma * 8 < 1


def test_weights_from_mask():
    mask = np.array([[0.0, 0.25], [1.0, 0.5]])
    assert np.allclose(weights_from_mask(mask, gamma=2.0).pixels, mask ** 2)
    assert np.allclose(weights_from_mask(mask, floor=0.3).pixels, np.maximum(mask, 0.3))
    with pytest.raises(ValueError):
        WeightMap(np.full((2, 2), 1.5))


def test_weights_vanish_on_edges_of_exact_model_phantom(cross_phantom):
    size = (128, 128)
    ksp = trig_region_kspace(cross_phantom, 10, 10, oversample=1024)
    estimate = estimate_pipeline(ksp, MaskMethod.NULLAVG, FilterSupport(1, 1), MaskParams(size=size))
    W = weights_from_mask(estimate.mask)
    centers = (np.arange(size[0]) + 0.5) / size[0]
    inside = cross_mu().evaluate(*np.meshgrid(centers, centers)).real > 0
    edges = np.zeros(size, dtype=bool)
    for axis in (0, 1):
        for shift in (1, -1):
            edges |= inside != np.roll(inside, shift, axis=axis)
    assert W.pixels[edges].mean() < 0.15
    assert W.pixels[~edges].mean() > 3 * W.pixels[edges].mean()


def test_penalty_dominated_by_larger_weights(rng):
    x = random_image(rng, (12, 10))
    low = rng.random((10, 12))
    high = np.minimum(low + rng.random((10, 12)), 1.0)
    assert penalty(x, WeightMap(low)) <= penalty(x, WeightMap(high))
    assert penalty(x, WeightMap(np.zeros((10, 12)))) == 0.0


def test_lambda_zero_returns_zero_filled(rng):
    b = random_grid(rng, 3, 3)
    result = wtv_recon(b, WeightMap.ones((12, 12)), ReconConfig(lam=0.0))
    assert np.allclose(result.image, adjoint_op(b, (12, 12)))
    assert result.iters == 0


def test_tv_equals_unit_weights(rng):
    b = random_grid(rng, 3, 3)
    cfg = ReconConfig(lam=0.5, max_iters=50)
    assert np.array_equal(tv_recon(b, cfg, (12, 12)).image, wtv_recon(b, WeightMap.ones((12, 12)), cfg).image)


def test_zero_weights_give_zero_filled(rng):
    b = random_grid(rng, 3, 3)
    result = wtv_recon(b, WeightMap(np.zeros((12, 12))), ReconConfig(lam=1.0, max_iters=100))
    assert np.allclose(result.image, adjoint_op(b, (12, 12)), atol=1e-10)


def test_result_not_worse_than_baselines(rng):
    b = random_grid(rng, 4, 4)
    W = WeightMap(rng.random((16, 16)))
    result = wtv_recon(b, W, ReconConfig(lam=2.0, max_iters=5))
    for candidate in (np.zeros((16, 16)), adjoint_op(b, (16, 16))):
        assert result.objective <= objective(candidate, b, W, 2.0) + 1e-12


def test_divergence_detected(rng):
    b = random_grid(rng, 3, 3)
    cfg = ReconConfig(lam=1.0, max_iters=200, check_every=1, divergence_patience=1, tol=0.0)
    # step sizes far beyond tau * sigma * 8 < 1, bypassing validation
    object.__setattr__(cfg, "tau", 10.0)
    object.__setattr__(cfg, "sigma", 10.0)
    with pytest.raises(SolverDivergenceError):
        wtv_recon(b, WeightMap.ones((8, 8)), cfg)


@pytest.mark.parametrize("seed", range(20))
def test_matches_admm_oracle(seed):
    rng = np.random.default_rng(seed)
    nx, ny = int(rng.integers(8, 17)), int(rng.integers(8, 17))
    kx_max, ky_max = int(rng.integers(1, (nx - 1) // 2 + 1)), int(rng.integers(1, (ny - 1) // 2 + 1))
    b = random_grid(rng, kx_max, ky_max)
    W = WeightMap(rng.random((ny, nx)))
    lam = float(rng.uniform(0.1, 2.0))
    result = wtv_recon(b, W, ReconConfig(lam=lam, max_iters=20000, tol=1e-11))
    reference = objective(admm_wtv(b, W.pixels, lam, (nx, ny)), b, W, lam)
    assert abs(result.objective - reference) <= 1e-4 * reference


def test_snr_definition():
    x0 = np.ones((4, 4))
    assert math.isinf(snr(x0, x0))
    assert snr(x0 * 1.1, x0) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        snr(np.ones((4, 5)), x0)


def test_sweep_best_and_single_row():
    rows = (SweepRow(0.1, 10.0, 1.0, 5), SweepRow(0.2, 12.0, 1.1, 6), SweepRow(0.3, 12.0, 1.2, 7))
    assert SweepResult(rows).best_lambda == 0.2
    assert SweepResult(rows[:1]).best == rows[0]


def test_lambda_sweep_deterministic_across_workers():
    spec = shepp_logan_spec()
    size = (32, 32)
    b = scale_samples(ellipse_kspace(spec, 8, 8), size)
    x0 = rasterize(spec, size, 2)
    cfg = ReconConfig(max_iters=40)
    serial = lambda_sweep(b, WeightMap.ones(size), [0.01, 0.1, 1.0], x0, cfg, workers=1)
    threaded = lambda_sweep(b, WeightMap.ones(size), [0.01, 0.1, 1.0], x0, cfg, workers=3)
    assert [row.lam for row in threaded.rows] == [0.01, 0.1, 1.0]
    assert serial.rows == threaded.rows


def noisy_shepp_logan(size=(32, 32), snr_db=20.0):
    spec = shepp_logan_spec()
    b = scale_samples(add_noise(ellipse_kspace(spec, 8, 8), snr_db, seed=0).ksp, size)
    return b, rasterize(spec, size, 2)


def test_total_variation_decreases_along_lambda_path():
    size = (32, 32)
    b, _ = noisy_shepp_logan(size)
    tv = [penalty(tv_recon(b, ReconConfig(lam=lam, max_iters=2000, tol=1e-9), size).image, WeightMap.ones(size))
          for lam in (1e-3, 1e-2, 1e-1, 1.0, 10.0)]
    assert all(cur <= prev * (1 + 1e-3) for prev, cur in zip(tv, tv[1:]))
    assert tv[-1] < tv[0]


def test_sweep_best_lambda_is_interior():
    size = (32, 32)
    b, x0 = noisy_shepp_logan(size)
    lambdas = [1e-6, 1e-2, 1e-1, 1e3]
    sweep = lambda_sweep(b, WeightMap.ones(size), lambdas, x0, ReconConfig(max_iters=300))
    assert sweep.best_lambda not in (lambdas[0], lambdas[-1])


def test_ground_truth_modes():
    spec = shepp_logan_spec()
    raster = ground_truth(spec, (32, 32), TruthMode.RASTER)
    assert raster.shape == (32, 32)
    full = ground_truth(spec, (32, 32), TruthMode.FULL_TV, cfg=ReconConfig(lam=1e-3, max_iters=50))
    assert full.shape == (32, 32)
    assert snr(full, raster) > 5


def _best_snr_gap(snr_db):
    spec = shepp_logan_spec()
    size = (256, 256)
    ksp = add_noise(ellipse_kspace(spec, 32, 24), snr_db, seed=0).ksp
    x0 = ground_truth(spec, size)
    estimate = estimate_pipeline(ksp, MaskMethod.NULLAVG, FilterSupport(16, 12), MaskParams(delta=0.1, size=size, snr_db=snr_db))
    b = scale_samples(ksp, size)
    lambdas = [3e-3, 1e-2, 3e-2, 1e-1, 3e-1]
    cfg = ReconConfig(max_iters=500)
    tv = lambda_sweep(b, WeightMap.ones(size), lambdas, x0, cfg, workers=2)
    wtv = lambda_sweep(b, weights_from_mask(estimate.mask), lambdas, x0, cfg, workers=2)
    return wtv.best.snr_db - tv.best.snr_db


@pytest.mark.slow
@pytest.mark.parametrize("snr_db", [math.inf, 25.0])
def test_weighted_tv_beats_tv_on_shepp_logan(snr_db):
    assert _best_snr_gap(snr_db) >= 2.0
