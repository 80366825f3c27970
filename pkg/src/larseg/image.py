"""2D event images and label masks: containers, file I/O, resampling, padding.

File formats
------------
Image file:  magic ``LARIMG1\\n``, u32 LE width, u32 LE height, then
             width*height float32 LE amplitudes, row-major.
Mask file:   magic ``LARMSK1\\n``, u32 LE width, u32 LE height, then
             width*height uint8 label codes, row-major.

Label codes: 0 = noise, 1 = track, 255 = unlabeled.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import BadMagicError, FormatError, NonFiniteDataError, TruncatedPayloadError

IMAGE_MAGIC = b"LARIMG1\n"
MASK_MAGIC = b"LARMSK1\n"

LABEL_NOISE = 0
LABEL_TRACK = 1
LABEL_UNKNOWN = 255
VALID_LABELS = (LABEL_NOISE, LABEL_TRACK, LABEL_UNKNOWN)


class EventImage:
    """One wire-plane view of one event: a grid of float32 amplitudes.

    Immutable: the pixel array is made read-only at construction and every
    operation returns a new instance.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels, dtype=np.float32)
        if arr.ndim != 2:
            raise ValueError(f"pixels must be 2D (height, width), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image dimensions must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteDataError("image contains NaN or infinite amplitudes")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.pixels = arr

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other) -> bool:
        return isinstance(other, EventImage) and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"EventImage({self.width}x{self.height})"


class LabelMask:
    """Per-pixel ground-truth classes paired with an EventImage.

    Codes: 0 noise, 1 track, 255 unlabeled. Immutable like EventImage.
    """

    __slots__ = ("labels",)

    def __init__(self, labels: np.ndarray):
        arr = np.asarray(labels, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError(f"labels must be 2D (height, width), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"mask dimensions must be >= 1, got {arr.shape}")
        bad = ~np.isin(arr, VALID_LABELS)
        if bad.any():
            codes = sorted(np.unique(arr[bad]).tolist())
            raise ValueError(f"mask contains invalid codes {codes}; allowed: 0, 1, 255")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.labels = arr

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    def counts(self) -> tuple[int, int, int]:
        """(n_noise, n_track, n_unlabeled) pixel counts."""
        flat = self.labels.ravel()
        return (
            int(np.count_nonzero(flat == LABEL_NOISE)),
            int(np.count_nonzero(flat == LABEL_TRACK)),
            int(np.count_nonzero(flat == LABEL_UNKNOWN)),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelMask) and np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"LabelMask({self.width}x{self.height})"


def _read_header(f, path, magic) -> tuple[int, int]:
    head = f.read(len(magic))
    if len(head) < len(magic) or head != magic:
        raise BadMagicError(f"{path}: expected magic {magic!r}, got {head!r}")
    dims = f.read(8)
    if len(dims) < 8:
        raise TruncatedPayloadError(f"{path}: header truncated")
    width, height = struct.unpack("<II", dims)
    if width < 1 or height < 1:
        raise FormatError(f"{path}: invalid dimensions {width}x{height}")
    return width, height


def load_image(path) -> EventImage:
    """Load an EventImage from an image file, bit-exactly."""
    path = Path(path)
    with open(path, "rb") as f:
        width, height = _read_header(f, path, IMAGE_MAGIC)
        payload = f.read(4 * width * height)
        if len(payload) < 4 * width * height:
            raise TruncatedPayloadError(
                f"{path}: expected {4 * width * height} payload bytes, got {len(payload)}"
            )
    arr = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteDataError(f"{path}: payload contains non-finite amplitudes")
    return EventImage(arr)


def save_image(image: EventImage, path) -> None:
    """Write an EventImage so that load_image returns it bit-exactly."""
    path = Path(path)
    payload = np.ascontiguousarray(image.pixels, dtype="<f4").tobytes()
    with open(path, "wb") as f:
        f.write(IMAGE_MAGIC)
        f.write(struct.pack("<II", image.width, image.height))
        f.write(payload)


def load_mask(path) -> LabelMask:
    """Load a LabelMask from a mask file."""
    path = Path(path)
    with open(path, "rb") as f:
        width, height = _read_header(f, path, MASK_MAGIC)
        payload = f.read(width * height)
        if len(payload) < width * height:
            raise TruncatedPayloadError(
                f"{path}: expected {width * height} payload bytes, got {len(payload)}"
            )
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return LabelMask(arr)


def save_mask(mask: LabelMask, path, atomic: bool = False) -> None:
    """Write a LabelMask; with atomic=True the file is replaced in one rename."""
    path = Path(path)
    blob = (
        MASK_MAGIC
        + struct.pack("<II", mask.width, mask.height)
        + np.ascontiguousarray(mask.labels).tobytes()
    )
    if atomic:
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        tmp.write_bytes(blob)
        os.replace(tmp, path)
    else:
        path.write_bytes(blob)


def resize_bilinear(image: EventImage, new_width: int, new_height: int) -> EventImage:
    """Resample with bilinear interpolation, align-corners-false.

    Output pixel centers sit at (i + 0.5) in output coordinates; the matching
    source coordinate is (i + 0.5) * old/new - 0.5, clamped to the image.
    """
    if new_width < 1 or new_height < 1:
        raise ValueError(f"target dimensions must be >= 1, got {new_width}x{new_height}")
    src = image.pixels.astype(np.float64)
    h, w = src.shape
    if (new_height, new_width) == (h, w):
        return EventImage(image.pixels)

    def _axis_coords(n_out, n_in):
        centers = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        centers = np.clip(centers, 0.0, n_in - 1.0)
        i0 = np.floor(centers).astype(np.intp)
        i1 = np.minimum(i0 + 1, n_in - 1)
        frac = centers - i0
        return i0, i1, frac

    r0, r1, fr = _axis_coords(new_height, h)
    c0, c1, fc = _axis_coords(new_width, w)
    top = src[r0][:, c0] * (1 - fc) + src[r0][:, c1] * fc
    bot = src[r1][:, c0] * (1 - fc) + src[r1][:, c1] * fc
    out = top * (1 - fr[:, None]) + bot * fr[:, None]
    return EventImage(out.astype(np.float32))


def pad_replicate(image: EventImage, radius: int) -> EventImage:
    """Grow the image by `radius` on every side, replicating edge pixels."""
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if radius == 0:
        return EventImage(image.pixels)
    return EventImage(np.pad(image.pixels, radius, mode="edge"))


def to_png(array: np.ndarray, path) -> None:
    """Export a 2D array as a 16-bit grayscale PNG, linearly min-max scaled.

    Display only: amplitudes are not recoverable from the PNG.
    """
    from PIL import Image

    arr = np.asarray(array, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("PNG export expects a 2D array")
    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        scaled = (arr - lo) / (hi - lo)
    else:
        scaled = np.zeros_like(arr)
    u16 = np.round(scaled * 65535.0).astype(np.uint16)
    Image.fromarray(u16).save(Path(path))
