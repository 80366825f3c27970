import numpy as np
import pytest

from larseg import EventImage, LabelMask, load_image, load_mask, pad_replicate, resize_bilinear, save_image, save_mask, to_png
from larseg.errors import BadMagicError, NonFiniteDataError, TruncatedPayloadError
from larseg.image import IMAGE_MAGIC, load_mask as _load_mask


def test_event_image_validation():
    img = EventImage(np.arange(6, dtype=np.float32).reshape(2, 3))
    assert img.width == 3 and img.height == 2
    with pytest.raises(ValueError):
        EventImage(np.zeros((0, 3), dtype=np.float32))
    with pytest.raises(NonFiniteDataError):
        EventImage(np.array([[1.0, np.nan]], dtype=np.float32))
    with pytest.raises(NonFiniteDataError):
        EventImage(np.array([[np.inf, 0.0]], dtype=np.float32))


def test_event_image_is_read_only():
    img = EventImage(np.zeros((2, 2), dtype=np.float32))
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1.0


def test_mask_rejects_bad_codes():
    LabelMask(np.array([[0, 1], [255, 0]], dtype=np.uint8))
    with pytest.raises(ValueError):
        LabelMask(np.array([[0, 2]], dtype=np.uint8))


def test_round_trip_small(tmp_path):
    img = EventImage(np.array([[0.0, 1.0], [2.0, 3.0]], dtype=np.float32))
    path = tmp_path / "a.larimg"
    save_image(img, path)
    back = load_image(path)
    assert back == img


def test_file_layout_exact(tmp_path):
    img = EventImage(np.array([[7.5]], dtype=np.float32))
    path = tmp_path / "one.larimg"
    save_image(img, path)
    blob = path.read_bytes()
    assert blob[:8] == IMAGE_MAGIC
    assert len(blob) == 8 + 8 + 4
    assert np.frombuffer(blob[16:], dtype="<f4")[0] == np.float32(7.5)


def test_round_trip_random_images(tmp_path):
    rng = np.random.default_rng(7)
    for i in range(100):
        h, w = rng.integers(1, 40, size=2)
        img = EventImage(rng.normal(scale=50, size=(h, w)).astype(np.float32))
        path = tmp_path / f"r{i}.larimg"
        save_image(img, path)
        assert load_image(path) == img


def test_mask_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    labels = rng.choice([0, 1, 255], size=(17, 9)).astype(np.uint8)
    mask = LabelMask(labels)
    path = tmp_path / "m.larmsk"
    save_mask(mask, path)
    assert load_mask(path) == mask
    save_mask(mask, path, atomic=True)
    assert load_mask(path) == mask


def test_load_errors_are_distinct(tmp_path):
    missing = tmp_path / "nope.larimg"
    with pytest.raises(FileNotFoundError):
        load_image(missing)

    bad = tmp_path / "bad.larimg"
    bad.write_bytes(b"XXXXXXXX" + b"\x00" * 12)
    with pytest.raises(BadMagicError):
        load_image(bad)

    img = EventImage(np.ones((4, 4), dtype=np.float32))
    good = tmp_path / "good.larimg"
    save_image(img, good)
    trunc = tmp_path / "trunc.larimg"
    trunc.write_bytes(good.read_bytes()[:-5])
    with pytest.raises(TruncatedPayloadError):
        load_image(trunc)

    blob = bytearray(good.read_bytes())
    blob[16:20] = np.array([np.nan], dtype="<f4").tobytes()
    nonfin = tmp_path / "nan.larimg"
    nonfin.write_bytes(bytes(blob))
    with pytest.raises(NonFiniteDataError):
        load_image(nonfin)


def test_mask_load_errors(tmp_path):
    bad = tmp_path / "bad.larmsk"
    bad.write_bytes(b"LARIMG1\n" + b"\x00" * 8)
    with pytest.raises(BadMagicError):
        _load_mask(bad)


def test_resize_constant_stays_constant():
    img = EventImage(np.full((5, 7), 5.0, dtype=np.float32))
    out = resize_bilinear(img, 13, 3)
    assert out.shape == (3, 13)
    assert np.all(out.pixels == 5.0)


def test_resize_hand_checked_values():
    # 2x1 row [0, 2] -> 4x1 under align-corners-false with clamped sampling
    img = EventImage(np.array([[0.0, 2.0]], dtype=np.float32))
    out = resize_bilinear(img, 4, 1)
    assert np.allclose(out.pixels, [[0.0, 0.5, 1.5, 2.0]])


def test_resize_identity_is_exact():
    rng = np.random.default_rng(0)
    img = EventImage(rng.normal(size=(6, 8)).astype(np.float32))
    out = resize_bilinear(img, 8, 6)
    assert np.array_equal(out.pixels, img.pixels)


def test_resize_rejects_bad_dims():
    img = EventImage(np.zeros((2, 2), dtype=np.float32))
    with pytest.raises(ValueError):
        resize_bilinear(img, 0, 4)


def test_pad_replicate():
    img = EventImage(np.array([[3.0]], dtype=np.float32))
    out = pad_replicate(img, 1)
    assert out.shape == (3, 3)
    assert np.all(out.pixels == 3.0)

    rng = np.random.default_rng(11)
    img = EventImage(rng.normal(size=(5, 6)).astype(np.float32))
    assert pad_replicate(img, 0) == img
    padded = pad_replicate(img, 2)
    assert np.array_equal(padded.pixels[2:-2, 2:-2], img.pixels)
    assert padded.pixels[0, 0] == img.pixels[0, 0]
    assert padded.pixels[-1, -1] == img.pixels[-1, -1]


def test_png_export(tmp_path):
    from PIL import Image

    rng = np.random.default_rng(5)
    arr = rng.normal(size=(12, 10))
    path = tmp_path / "img.png"
    to_png(arr, path)
    with Image.open(path) as im:
        assert im.size == (10, 12)
        back = np.array(im)
    assert back.dtype == np.uint16 or back.dtype == np.int32
    assert back.max() == 65535 and back.min() == 0

    to_png(np.zeros((4, 4)), tmp_path / "flat.png")
    with Image.open(tmp_path / "flat.png") as im:
        assert np.array(im).max() == 0
