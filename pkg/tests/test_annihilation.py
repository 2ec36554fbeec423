import numpy as np
import pytest

from frisr import GeometryError, KSpaceGrid
from frisr.annihilation import (
    DerivativeKind, FIRST_ORDER, SECOND_ORDER, FilterSupport, FilterCoefficients,
    derivative_weight, build_system, weighted_system, annihilation_residual, block_residuals, square_coeffs,
    convolution_indices, toeplitz_block,
)
from frisr.phantom import TrigRegionPhantom, trig_region_kspace, shepp_logan_spec, ellipse_kspace
from frisr.mask import null_basis
from conftest import cross_mu, wide_mu, curve_dirac_grid


def nested_loop_system(values, kx_max, ky_max, support):
    rows = []
    for ky in range(-(ky_max - support.l1), ky_max - support.l1 + 1):
        for kx in range(-(kx_max - support.k1), kx_max - support.k1 + 1):
            row = []
            for ly in range(-support.l1, support.l1 + 1):
                for lx in range(-support.k1, support.k1 + 1):
                    row.append(values[ky - ly + ky_max, kx - lx + kx_max])
            rows.append(row)
    return np.array(rows)


@pytest.mark.parametrize("kx_max, ky_max, k1, l1", [(4, 3, 1, 1), (6, 6, 2, 3), (5, 2, 0, 2), (3, 3, 3, 3)])
def test_convolution_matrix_matches_nested_loops(rng, kx_max, ky_max, k1, l1):
    ksp = KSpaceGrid(kx_max, ky_max, rng.standard_normal((2 * ky_max + 1, 2 * kx_max + 1)) + 1j * rng.standard_normal((2 * ky_max + 1, 2 * kx_max + 1)))
    support = FilterSupport(k1, l1)
    T = toeplitz_block(ksp, support)
    assert T.shape == (support.valid_shape(kx_max, ky_max)[0] * support.valid_shape(kx_max, ky_max)[1], support.size)
    assert np.max(np.abs(T - nested_loop_system(ksp.values, kx_max, ky_max, support))) < 1e-12


def test_matrix_product_is_valid_convolution(rng):
    ksp = KSpaceGrid(5, 4, rng.standard_normal((9, 11)) + 1j * rng.standard_normal((9, 11)))
    c = FilterCoefficients(FilterSupport(2, 1), rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5)))
    from scipy.signal import convolve2d
    expected = convolve2d(ksp.values, c.coeffs, mode='valid')
    assert np.allclose(toeplitz_block(ksp, c.support) @ c.vector, expected.ravel(), atol=1e-12)


def test_support_exceeding_window_is_geometry_error():
    with pytest.raises(GeometryError):
        convolution_indices(3, 3, FilterSupport(4, 1))
    with pytest.raises(GeometryError):
        convolution_indices(3, 3, FilterSupport(0, 0))


def test_single_valid_shift():
    sys = weighted_system(KSpaceGrid(2, 2, np.ones((5, 5))), FilterSupport(2, 2), FIRST_ORDER)
    assert sys.n_valid_shifts == 1
    assert sys.matrix.shape == (2, 25)


def test_derivative_weights():
    ksp = KSpaceGrid(2, 1, np.ones((3, 5)))
    kx, ky = ksp.frequencies()
    assert np.allclose(derivative_weight(ksp, DerivativeKind.DX).values, -2j * np.pi * kx)
    assert np.allclose(derivative_weight(ksp, DerivativeKind.DY).values, -2j * np.pi * ky)
    lap = derivative_weight(ksp, DerivativeKind.LAPLACIAN).values
    assert np.allclose(lap, derivative_weight(ksp, DerivativeKind.DXX).values + derivative_weight(ksp, DerivativeKind.DYY).values)
    assert derivative_weight(ksp, DerivativeKind.DXY).at(0, 1) == 0


def test_stacked_blocks_and_provenance(rng):
    ksp = KSpaceGrid(6, 5, rng.standard_normal((11, 13)) + 0j)
    sys = weighted_system(ksp, FilterSupport(2, 2), SECOND_ORDER, row_normalize=True)
    assert sys.n_blocks == 3
    assert np.allclose(np.linalg.norm(sys.matrix, axis=1), 1.0)
    prov = sys.provenance()
    assert prov["kinds"] == ["dxx", "dxy", "dyy"]
    assert prov["row_normalize"] is True


def test_block_residuals_split_the_stacked_residual(rng):
    ksp = KSpaceGrid(6, 5, rng.standard_normal((11, 13)) + 1j * rng.standard_normal((11, 13)))
    sys = weighted_system(ksp, FilterSupport(2, 2), SECOND_ORDER)
    c = FilterCoefficients(FilterSupport(2, 2), rng.standard_normal((5, 5)))
    per_block = block_residuals(sys, c)
    assert len(per_block) == 3
    weighted = sum((r * np.linalg.norm(sys.block(j))) ** 2 for j, r in enumerate(per_block))
    assert weighted == pytest.approx((annihilation_residual(sys, c) * np.linalg.norm(sys.matrix)) ** 2)
    assert np.array_equal(np.vstack([sys.block(j) for j in range(sys.n_blocks)]), sys.matrix)


def test_mismatched_windows_rejected():
    with pytest.raises(ValueError):
        build_system([KSpaceGrid.zeros(4, 4), KSpaceGrid.zeros(5, 4)], FilterSupport(1, 1))


def test_residual_scale_invariant_and_zero_system(rng):
    ksp = KSpaceGrid(4, 4, rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9)))
    sys = weighted_system(ksp, FilterSupport(1, 1))
    c = FilterCoefficients(FilterSupport(1, 1), rng.standard_normal((3, 3)))
    assert annihilation_residual(sys, c) == pytest.approx(annihilation_residual(sys, FilterCoefficients(c.support, 7 * c.coeffs)))
    assert annihilation_residual(weighted_system(KSpaceGrid.zeros(4, 4), FilterSupport(1, 1)), c) == 0.0


def test_residual_rejects_wrong_support(rng):
    sys = weighted_system(KSpaceGrid(4, 4, rng.standard_normal((9, 9))), FilterSupport(1, 1))
    with pytest.raises(ValueError):
        annihilation_residual(sys, FilterCoefficients(FilterSupport(2, 1), np.ones((3, 5))))


def test_curve_dirac_data_annihilated_exactly():
    ksp = curve_dirac_grid(10, 10)
    sys = build_system([ksp], FilterSupport(1, 1))
    assert annihilation_residual(sys, cross_mu()) < 1e-13


def test_null_space_dimension_is_shift_count():
    # mu on 3x3 inside a 5x5 support: mu * h for every 3x3 h annihilates
    grids = [curve_dirac_grid(10, 10, seed=s) for s in (0, 1)]
    sys = build_system(grids, FilterSupport(2, 2))
    basis = null_basis(sys, 1e-8)
    assert basis.P == 9
    assert sys.matrix.shape[1] - np.linalg.matrix_rank(sys.matrix) == 9
    assert not basis.fallback


def test_true_filter_annihilates_trig_region_samples():
    mu = wide_mu()
    ph = TrigRegionPhantom(mu, name="wide")
    residuals = []
    for oversample in (512, 2048):
        ksp = trig_region_kspace(ph, 16, 16, oversample)
        residuals.append(annihilation_residual(weighted_system(ksp, mu.support), mu))
    assert residuals[1] < 1e-3
    assert residuals[1] < 0.75 * residuals[0]


def test_wrong_filter_does_not_annihilate(cross_phantom):
    ksp = trig_region_kspace(cross_phantom, 16, 16, 1024)
    other = FilterCoefficients.from_dict({(0, 0): -0.2, (1, 0): -0.5, (-1, 0): -0.5, (0, 1): -0.5, (0, -1): -0.5})
    sys = weighted_system(ksp, other.support)
    assert annihilation_residual(sys, other) > 10 * annihilation_residual(sys, cross_mu())


def test_square_coeffs_is_pointwise_square(rng):
    mu = wide_mu()
    sq = square_coeffs(mu)
    assert sq.support == FilterSupport(4, 4)
    x, y = rng.random(20), rng.random(20)
    assert np.allclose(sq.evaluate(x, y), mu.evaluate(x, y) ** 2, atol=1e-12)


def _second_order_residual(profile, kinds, oversample):
    mu = cross_mu()
    ph = TrigRegionPhantom(mu, profile=profile, name="profiled")
    ksp = trig_region_kspace(ph, 12, 12, oversample)
    sq = square_coeffs(mu)
    return annihilation_residual(weighted_system(ksp, sq.support, kinds), sq)


def test_squared_filter_annihilates_affine_profile_second_derivatives():
    affine = lambda x, y: 1.0 + 0.5 * x - 0.3 * y
    coarse = _second_order_residual(affine, SECOND_ORDER, 512)
    fine = _second_order_residual(affine, SECOND_ORDER, 2048)
    assert fine < 1e-2
    assert fine < coarse


def test_squared_filter_annihilates_harmonic_profile_laplacian():
    harmonic = lambda x, y: 1.0 + (x - 0.5) ** 2 - (y - 0.5) ** 2
    coarse = _second_order_residual(harmonic, (DerivativeKind.LAPLACIAN,), 512)
    fine = _second_order_residual(harmonic, (DerivativeKind.LAPLACIAN,), 2048)
    assert fine < 1e-2
    assert fine < coarse


def test_square_coeffs_examples():
    delta = square_coeffs(FilterCoefficients.from_dict({(0, 0): 1.0}))
    assert delta.support == FilterSupport(0, 0)
    assert delta.at(0, 0) == 1.0
    # (z - 1)^2 = z^2 - 2 z + 1
    sq = square_coeffs(FilterCoefficients.from_dict({(1, 0): 1.0, (0, 0): -1.0}))
    assert sq.support == FilterSupport(2, 0)
    assert [sq.at(k, 0) for k in range(-2, 3)] == [0, 0, 1, -2, 1]


@pytest.mark.parametrize("kind", list(FIRST_ORDER) + list(SECOND_ORDER))
def test_derivative_weights_keep_conjugate_symmetry(kind):
    ksp = ellipse_kspace(shepp_logan_spec(), 12, 10)
    values = derivative_weight(ksp, kind).values
    assert np.allclose(values[::-1, ::-1], np.conj(values), atol=1e-12 * np.abs(values).max())
