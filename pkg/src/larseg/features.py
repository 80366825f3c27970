"""Per-pixel feature descriptor for event images.

Each pixel of an image is summarized by 42 numbers describing the amplitude
distribution in the pixel and its neighbourhood:

* the amplitude itself;
* min / max / median / mean / population std over 3x3, 5x5 and 7x7 windows;
* nine differences of Gaussians for sigma pairs (0.5,2) (0.5,3) (0.5,4)
  (0.75,2) (0.75,3) (0.75,4) (1,2) (1,3) (1,4);
* Prewitt gradient magnitude;
* the ordered eigenvalues of the local Hessian plus their sum and product;
* the ordered eigenvalues of the structure tensor, sum and product, for
  3x3, 5x5 and 7x7 averaging windows.

The column order of the descriptor matrix is frozen (see FEATURE_NAMES);
trained models and dataset files all assume it. Every windowed operation
uses replicate padding at the image border. All arithmetic is float64.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image import EventImage

STAT_KERNELS = (3, 5, 7)
DOG_SIGMA_PAIRS = (
    (0.5, 2.0),
    (0.5, 3.0),
    (0.5, 4.0),
    (0.75, 2.0),
    (0.75, 3.0),
    (0.75, 4.0),
    (1.0, 2.0),
    (1.0, 3.0),
    (1.0, 4.0),
)
TENSOR_KERNELS = (3, 5, 7)
N_FEATURES = 42


def _sigma_label(s: float) -> str:
    return f"{s:g}"


def _build_feature_names() -> tuple[str, ...]:
    names = ["pixel amplitude"]
    for k in STAT_KERNELS:
        names += [
            f"minimum in {k}x{k} kernel",
            f"maximum in {k}x{k} kernel",
            f"median in {k}x{k} kernel",
            f"mean in {k}x{k} kernel",
            f"standard deviation in {k}x{k} kernel",
        ]
    for s1, s2 in DOG_SIGMA_PAIRS:
        names.append(f"difference of Gaussians ({_sigma_label(s1)}, {_sigma_label(s2)})")
    names.append("gradient magnitude (Prewitt)")
    names += [
        "Hessian 1st eigenvalue",
        "Hessian 2nd eigenvalue",
        "Hessian eigenvalue sum",
        "Hessian eigenvalue product",
    ]
    for k in TENSOR_KERNELS:
        names += [
            f"tensor 1st eigenvalue in {k}x{k} kernel",
            f"tensor 2nd eigenvalue in {k}x{k} kernel",
            f"tensor eigenvalue sum in {k}x{k} kernel",
            f"tensor eigenvalue product in {k}x{k} kernel",
        ]
    assert len(names) == N_FEATURES
    return tuple(names)


FEATURE_NAMES: tuple[str, ...] = _build_feature_names()


def feature_order_checksum() -> str:
    """SHA-256 over the canonical feature-name list; embedded in model files."""
    blob = "\n".join(FEATURE_NAMES).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class FeatureMatrix:
    """N x 42 per-pixel descriptors plus pixel provenance.

    rows[i] comes from pixel (pixel_rows[i], pixel_cols[i]) of image_id.
    """

    values: np.ndarray
    pixel_rows: np.ndarray
    pixel_cols: np.ndarray
    image_id: str = ""

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != N_FEATURES:
            raise ValueError(f"descriptor matrix must be (N, {N_FEATURES}), got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("descriptor matrix contains non-finite entries")
        if len(self.pixel_rows) != len(self.values) or len(self.pixel_cols) != len(self.values):
            raise ValueError("provenance arrays must match the number of rows")

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


def _as_float64(image) -> np.ndarray:
    if isinstance(image, EventImage):
        return image.pixels.astype(np.float64)
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2D image")
    return arr


def _check_kernel(kernel: int) -> int:
    if kernel not in STAT_KERNELS:
        raise ValueError(f"kernel size must be one of {STAT_KERNELS}, got {kernel}")
    return kernel


def _windows(img: np.ndarray, kernel: int) -> np.ndarray:
    """(H, W, k*k) copy of every kernel-sized window, replicate-padded."""
    r = kernel // 2
    padded = np.pad(img, r, mode="edge")
    view = sliding_window_view(padded, (kernel, kernel))
    return view.reshape(img.shape[0], img.shape[1], kernel * kernel)


def sliding_stats(image, kernel: int) -> dict[str, np.ndarray]:
    """Per-pixel window statistics: min, max, median, mean, population std."""
    img = _as_float64(image)
    k = _check_kernel(kernel)
    win = _windows(img, k)
    return {
        "min": win.min(axis=-1),
        "max": win.max(axis=-1),
        "median": np.median(win, axis=-1),
        "mean": win.mean(axis=-1),
        "std": win.std(axis=-1),
    }


def gaussian_kernel_1d(sigma: float) -> np.ndarray:
    """Discrete Gaussian sampled at integer offsets, truncated at ceil(3*sigma),
    renormalized to sum exactly 1."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kern = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return kern / kern.sum()


def _correlate_axis(img: np.ndarray, kern: np.ndarray, axis: int) -> np.ndarray:
    radius = (len(kern) - 1) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(img, pad, mode="edge")
    out = np.zeros_like(img)
    n = img.shape[axis]
    for tap, weight in enumerate(kern):
        if axis == 0:
            out += weight * padded[tap : tap + n, :]
        else:
            out += weight * padded[:, tap : tap + n]
    return out


def gaussian_blur(image, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing with replicate borders."""
    img = _as_float64(image)
    kern = gaussian_kernel_1d(sigma)
    return _correlate_axis(_correlate_axis(img, kern, axis=0), kern, axis=1)


def difference_of_gaussians(image, sigma_pair: tuple[float, float]) -> np.ndarray:
    """Band-pass plane: blur(sigma1) - blur(sigma2), requiring sigma1 < sigma2."""
    s1, s2 = sigma_pair
    if not (0 < s1 < s2):
        raise ValueError(f"need 0 < sigma1 < sigma2, got ({s1}, {s2})")
    img = _as_float64(image)
    return gaussian_blur(img, s1) - gaussian_blur(img, s2)


def prewitt_gradient(image) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Prewitt gradients normalized by 1/6 so a unit ramp has derivative 1.

    Returns (gx, gy, magnitude); x increases with column index, y with row.
    """
    img = _as_float64(image)
    p = np.pad(img, 1, mode="edge")
    gx = (
        p[:-2, 2:] + p[1:-1, 2:] + p[2:, 2:] - p[:-2, :-2] - p[1:-1, :-2] - p[2:, :-2]
    ) / 6.0
    gy = (
        p[2:, :-2] + p[2:, 1:-1] + p[2:, 2:] - p[:-2, :-2] - p[:-2, 1:-1] - p[:-2, 2:]
    ) / 6.0
    return gx, gy, np.sqrt(gx * gx + gy * gy)


def _central_diff(img: np.ndarray, axis: int) -> np.ndarray:
    p = np.pad(img, [(1, 1) if a == axis else (0, 0) for a in range(2)], mode="edge")
    if axis == 0:
        return (p[2:, :] - p[:-2, :]) / 2.0
    return (p[:, 2:] - p[:, :-2]) / 2.0


def _second_diff(img: np.ndarray, axis: int) -> np.ndarray:
    p = np.pad(img, [(1, 1) if a == axis else (0, 0) for a in range(2)], mode="edge")
    if axis == 0:
        return p[2:, :] - 2.0 * img + p[:-2, :]
    return p[:, 2:] - 2.0 * img + p[:, :-2]


def _eig2x2_symmetric(a: np.ndarray, b: np.ndarray, c: np.ndarray):
    """Ordered eigenvalues of [[a, b], [b, c]] per pixel, lam1 >= lam2."""
    half_trace = 0.5 * (a + c)
    disc = np.sqrt(np.maximum((0.5 * (a - c)) ** 2 + b * b, 0.0))
    return half_trace + disc, half_trace - disc


def hessian_eigen_features(image) -> dict[str, np.ndarray]:
    """Eigenvalues of the local Hessian from central differences.

    f_xx and f_yy are exact second central differences; the mixed term is two
    chained first central differences. Keys: lam1, lam2, sum, product.
    """
    img = _as_float64(image)
    f_xx = _second_diff(img, axis=1)
    f_yy = _second_diff(img, axis=0)
    f_xy = _central_diff(_central_diff(img, axis=1), axis=0)
    lam1, lam2 = _eig2x2_symmetric(f_xx, f_xy, f_yy)
    return {"lam1": lam1, "lam2": lam2, "sum": lam1 + lam2, "product": lam1 * lam2}


def _box_mean(img: np.ndarray, kernel: int) -> np.ndarray:
    return _windows(img, kernel).mean(axis=-1)


def tensor_eigen_features(image, kernel: int) -> dict[str, np.ndarray]:
    """Eigenvalues of the structure tensor: the gradient outer product
    box-averaged over a kernel x kernel window. Keys as for the Hessian."""
    img = _as_float64(image)
    k = _check_kernel(kernel)
    gx, gy, _ = prewitt_gradient(img)
    jxx = _box_mean(gx * gx, k)
    jxy = _box_mean(gx * gy, k)
    jyy = _box_mean(gy * gy, k)
    lam1, lam2 = _eig2x2_symmetric(jxx, jxy, jyy)
    return {"lam1": lam1, "lam2": lam2, "sum": lam1 + lam2, "product": lam1 * lam2}


def feature_planes(image) -> np.ndarray:
    """All 42 feature planes of an image, stacked as (42, H, W) in canonical order."""
    img = _as_float64(image)
    planes = [img]
    for k in STAT_KERNELS:
        stats = sliding_stats(img, k)
        planes += [stats["min"], stats["max"], stats["median"], stats["mean"], stats["std"]]
    blur_cache = {}
    for s1, s2 in DOG_SIGMA_PAIRS:
        for s in (s1, s2):
            if s not in blur_cache:
                blur_cache[s] = gaussian_blur(img, s)
        planes.append(blur_cache[s1] - blur_cache[s2])
    gx, gy, magnitude = prewitt_gradient(img)
    planes.append(magnitude)
    hess = hessian_eigen_features(img)
    planes += [hess["lam1"], hess["lam2"], hess["sum"], hess["product"]]
    gxx, gxy, gyy = gx * gx, gx * gy, gy * gy
    for k in TENSOR_KERNELS:
        lam1, lam2 = _eig2x2_symmetric(_box_mean(gxx, k), _box_mean(gxy, k), _box_mean(gyy, k))
        planes += [lam1, lam2, lam1 + lam2, lam1 * lam2]
    return np.stack(planes)


def extract_descriptor(image, image_id: str = "") -> FeatureMatrix:
    """One 42-entry descriptor row per pixel, rows in row-major pixel order."""
    img = _as_float64(image)
    h, w = img.shape
    stack = feature_planes(img)
    values = stack.reshape(N_FEATURES, h * w).T.copy()
    rows, cols = np.divmod(np.arange(h * w, dtype=np.int32), w)
    return FeatureMatrix(values=values, pixel_rows=rows.astype(np.int32),
                         pixel_cols=cols.astype(np.int32), image_id=image_id)
