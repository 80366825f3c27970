import math

import numpy as np
import pytest

from larseg import (
    DOG_SIGMA_PAIRS,
    FEATURE_NAMES,
    N_FEATURES,
    EventImage,
    difference_of_gaussians,
    extract_descriptor,
    feature_planes,
    gaussian_blur,
    hessian_eigen_features,
    prewitt_gradient,
    sliding_stats,
    tensor_eigen_features,
)
from larseg.features import feature_order_checksum, gaussian_kernel_1d

import oracles


def random_image(rng, h=16, w=16, scale=1.0):
    return rng.random((h, w)) * scale


def test_feature_name_audit():
    assert len(FEATURE_NAMES) == N_FEATURES == 42
    # 1 amplitude + 15 stats + 9 DoG + 1 gradient + 4 Hessian + 12 tensor
    assert FEATURE_NAMES[0] == "pixel amplitude"
    assert sum(1 for n in FEATURE_NAMES if "kernel" in n and "tensor" not in n) == 15
    assert sum(1 for n in FEATURE_NAMES if n.startswith("difference of Gaussians")) == 9
    assert FEATURE_NAMES[25] == "gradient magnitude (Prewitt)"
    assert sum(1 for n in FEATURE_NAMES if n.startswith("Hessian")) == 4
    assert sum(1 for n in FEATURE_NAMES if n.startswith("tensor")) == 12
    assert len(feature_order_checksum()) == 64


# ---------------------------------------------------------------- sliding stats

def test_sliding_stats_constant_image():
    img = np.full((9, 9), 4.0)
    for k in (3, 5, 7):
        stats = sliding_stats(img, k)
        for name in ("min", "max", "median", "mean"):
            assert np.all(stats[name] == 4.0)
        assert np.all(stats["std"] == 0.0)


def test_sliding_stats_center_pixel_3x3():
    img = np.arange(1.0, 10.0).reshape(3, 3)
    stats = sliding_stats(img, 3)
    assert stats["min"][1, 1] == 1.0
    assert stats["max"][1, 1] == 9.0
    assert stats["median"][1, 1] == 5.0
    assert stats["mean"][1, 1] == 5.0
    assert abs(stats["std"][1, 1] - math.sqrt(60.0 / 9.0)) < 1e-12


def test_sliding_stats_rejects_bad_kernel():
    img = np.zeros((4, 4))
    for k in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            sliding_stats(img, k)


def test_sliding_stats_matches_naive_exactly():
    rng = np.random.default_rng(101)
    img = random_image(rng, 32, 32, scale=100.0)
    for k in (3, 5, 7):
        fast = sliding_stats(img, k)
        slow = oracles.naive_window_stats(img, k)
        for name in ("min", "max", "median", "mean", "std"):
            assert np.array_equal(fast[name], slow[name]), (k, name)


# ---------------------------------------------------------------- gaussian blur

def test_blur_constant_is_constant():
    img = np.full((8, 8), 3.25)
    for sigma in (0.5, 1.0, 4.0):
        out = gaussian_blur(img, sigma)
        assert np.allclose(out, 3.25, atol=1e-12)


def test_blur_impulse_center_weight():
    sigma = 1.0
    radius = math.ceil(3 * sigma)
    # independent recomputation of the normalized center weight
    offs = np.arange(-radius, radius + 1, dtype=float)
    kern = np.exp(-offs**2 / (2 * sigma**2))
    center_weight = 1.0 / kern.sum()

    img = np.zeros((25, 25))
    img[12, 12] = 1.0
    out = gaussian_blur(img, sigma)
    assert abs(out[12, 12] - center_weight**2) < 1e-12


def test_blur_matches_full_2d_convolution():
    rng = np.random.default_rng(55)
    img = random_image(rng, 20, 17)
    for sigma in (0.5, 1.0, 2.0):
        fast = gaussian_blur(img, sigma)
        slow = oracles.naive_gaussian_blur(img, sigma)
        assert np.max(np.abs(fast - slow)) < 1e-6


def test_blur_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        gaussian_blur(np.zeros((3, 3)), 0.0)
    with pytest.raises(ValueError):
        gaussian_kernel_1d(-1.0)


# ---------------------------------------------------------------- DoG

def test_dog_constant_is_zero():
    img = np.full((10, 10), 42.0)
    out = difference_of_gaussians(img, (0.5, 2.0))
    assert np.allclose(out, 0.0, atol=1e-12)


def test_dog_antisymmetry_and_composition():
    rng = np.random.default_rng(9)
    img = random_image(rng, 14, 14)
    for pair in DOG_SIGMA_PAIRS:
        dog = difference_of_gaussians(img, pair)
        flipped = gaussian_blur(img, pair[1]) - gaussian_blur(img, pair[0])
        assert np.max(np.abs(dog + flipped)) < 1e-15
        recomposed = gaussian_blur(img, pair[0]) - gaussian_blur(img, pair[1])
        assert np.max(np.abs(dog - recomposed)) < 1e-9


def test_dog_rejects_bad_pairs():
    img = np.zeros((4, 4))
    with pytest.raises(ValueError):
        difference_of_gaussians(img, (2.0, 0.5))
    with pytest.raises(ValueError):
        difference_of_gaussians(img, (1.0, 1.0))


# ---------------------------------------------------------------- prewitt

def test_prewitt_constant_zero():
    _, _, mag = prewitt_gradient(np.full((6, 6), 2.0))
    assert np.allclose(mag, 0.0, atol=1e-15)


def test_prewitt_ramps():
    h = w = 8
    cols = np.tile(np.arange(w, dtype=float), (h, 1))
    gx, gy, mag = prewitt_gradient(cols)
    interior = (slice(1, -1), slice(1, -1))
    assert np.allclose(gx[interior], 1.0, atol=1e-12)
    assert np.allclose(gy[interior], 0.0, atol=1e-12)
    assert np.allclose(mag[interior], 1.0, atol=1e-12)

    diag = cols + np.arange(h, dtype=float)[:, None]
    _, _, mag = prewitt_gradient(diag)
    assert np.allclose(mag[interior], math.sqrt(2.0), atol=1e-12)


def test_prewitt_matches_naive():
    rng = np.random.default_rng(77)
    img = random_image(rng, 15, 11)
    gx, gy, mag = prewitt_gradient(img)
    ngx, ngy, nmag = oracles.naive_prewitt(img)
    assert np.max(np.abs(gx - ngx)) < 1e-12
    assert np.max(np.abs(gy - ngy)) < 1e-12
    assert np.max(np.abs(mag - nmag)) < 1e-12


# ---------------------------------------------------------------- hessian

def test_hessian_on_quadratic():
    h = w = 9
    cols = np.tile(np.arange(w, dtype=float) ** 2, (h, 1))
    out = hessian_eigen_features(cols)
    interior = (slice(1, -1), slice(1, -1))
    assert np.allclose(out["lam1"][interior], 2.0, atol=1e-12)
    assert np.allclose(out["lam2"][interior], 0.0, atol=1e-12)
    assert np.allclose(out["sum"][interior], 2.0, atol=1e-12)
    assert np.allclose(out["product"][interior], 0.0, atol=1e-12)


def test_hessian_constant_zero():
    out = hessian_eigen_features(np.full((5, 5), 7.0))
    for plane in out.values():
        assert np.allclose(plane, 0.0, atol=1e-15)


def test_hessian_trace_det_identities():
    rng = np.random.default_rng(13)
    for _ in range(5):
        img = random_image(rng, 12, 12)
        out = hessian_eigen_features(img)
        assert np.all(out["lam1"] >= out["lam2"])
        # recompute trace/det from the raw difference planes
        naive = oracles.naive_hessian(img)
        assert np.max(np.abs(out["lam1"] - naive["lam1"])) < 1e-9
        assert np.max(np.abs(out["lam2"] - naive["lam2"])) < 1e-9
        assert np.max(np.abs(out["sum"] - (naive["lam1"] + naive["lam2"]))) < 1e-9
        assert np.max(np.abs(out["product"] - naive["lam1"] * naive["lam2"])) < 1e-9


# ---------------------------------------------------------------- tensor

def test_tensor_constant_zero():
    out = tensor_eigen_features(np.full((8, 8), 1.0), 3)
    for plane in out.values():
        assert np.allclose(plane, 0.0, atol=1e-15)


def test_tensor_on_column_ramp():
    h = w = 12
    cols = np.tile(np.arange(w, dtype=float), (h, 1))
    for k in (3, 5, 7):
        out = tensor_eigen_features(cols, k)
        margin = k // 2 + 1
        inner = (slice(margin, -margin), slice(margin, -margin))
        assert np.allclose(out["lam1"][inner], 1.0, atol=1e-12)
        assert np.allclose(out["lam2"][inner], 0.0, atol=1e-12)


def test_tensor_psd_and_matches_naive():
    rng = np.random.default_rng(21)
    img = random_image(rng, 13, 14)
    for k in (3, 5, 7):
        out = tensor_eigen_features(img, k)
        assert np.all(out["lam2"] >= -1e-9)
        assert np.all(out["lam1"] >= out["lam2"])
        naive = oracles.naive_tensor(img, k)
        for name in ("lam1", "lam2", "sum", "product"):
            assert np.max(np.abs(out[name] - naive[name])) < 1e-9


def test_tensor_rejects_bad_kernel():
    with pytest.raises(ValueError):
        tensor_eigen_features(np.zeros((5, 5)), 4)


# ---------------------------------------------------------------- descriptor

def test_descriptor_shape_and_provenance():
    rng = np.random.default_rng(1)
    img = EventImage(rng.random((6, 5)).astype(np.float32))
    fm = extract_descriptor(img, image_id="ev1")
    assert fm.values.shape == (30, 42)
    assert fm.n_features == 42
    assert fm.image_id == "ev1"
    # row-major ordering of provenance
    assert fm.pixel_rows[0] == 0 and fm.pixel_cols[0] == 0
    assert fm.pixel_rows[5] == 1 and fm.pixel_cols[5] == 0
    assert fm.pixel_cols[4] == 4


def test_descriptor_constant_image():
    img = np.full((7, 7), 9.0)
    fm = extract_descriptor(img)
    vals = fm.values
    assert np.allclose(vals[:, 0], 9.0)
    for idx, name in enumerate(FEATURE_NAMES):
        col = vals[:, idx]
        if any(s in name for s in ("minimum", "maximum", "median", "mean")) and "tensor" not in name:
            assert np.allclose(col, 9.0), name
        elif name == "pixel amplitude":
            continue
        else:
            assert np.allclose(col, 0.0, atol=1e-9), name


def test_descriptor_columns_match_standalone_ops():
    rng = np.random.default_rng(50)
    img = random_image(rng, 16, 16)
    fm = extract_descriptor(img)
    get = lambda idx: fm.values[:, idx].reshape(16, 16)

    assert np.array_equal(get(0), img)
    col = 1
    for k in (3, 5, 7):
        stats = sliding_stats(img, k)
        for name in ("min", "max", "median", "mean", "std"):
            assert np.array_equal(get(col), stats[name]), (k, name)
            col += 1
    for pair in DOG_SIGMA_PAIRS:
        assert np.allclose(get(col), difference_of_gaussians(img, pair), atol=1e-12)
        col += 1
    _, _, mag = prewitt_gradient(img)
    assert np.array_equal(get(col), mag)
    col += 1
    hess = hessian_eigen_features(img)
    for name in ("lam1", "lam2", "sum", "product"):
        assert np.array_equal(get(col), hess[name])
        col += 1
    for k in (3, 5, 7):
        tens = tensor_eigen_features(img, k)
        for name in ("lam1", "lam2", "sum", "product"):
            assert np.array_equal(get(col), tens[name]), (k, name)
            col += 1
    assert col == 42


def test_descriptor_against_naive_oracle():
    rng = np.random.default_rng(4242)
    img = random_image(rng, 16, 16, scale=10.0)
    fast = feature_planes(img)
    slow = oracles.naive_descriptor(img)
    for idx in range(42):
        diff = np.abs(fast[idx] - slow[idx])
        tol = 1e-6 * np.maximum(1.0, np.abs(slow[idx]))
        assert np.all(diff <= tol), FEATURE_NAMES[idx]


def test_translation_equivariance():
    rng = np.random.default_rng(31)
    patch = rng.random((36, 36))
    base = np.zeros((64, 64))
    shifted = np.zeros((64, 64))
    base[10:46, 10:46] = patch
    shifted[11:47, 10:46] = patch

    planes_a = feature_planes(base)
    planes_b = feature_planes(shifted)
    # margin covers the widest support: blur radius ceil(3*4)=12, plus 1
    m = 13
    region_a = planes_a[:, 10 + m : 46 - m, 10 + m : 46 - m]
    region_b = planes_b[:, 11 + m : 47 - m, 10 + m : 46 - m]
    assert np.max(np.abs(region_a - region_b)) < 1e-12
