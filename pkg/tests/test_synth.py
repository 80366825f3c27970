import json

import numpy as np
import pytest

from larseg.classifiers import train_stump
from larseg.eval import pr_curve
from larseg.synth import MANIFEST_NAME, SynthConfig, generate_corpus, generate_event, load_corpus


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(width=0)
    with pytest.raises(ValueError):
        SynthConfig(tracks_min=3, tracks_max=1)
    with pytest.raises(ValueError):
        SynthConfig(track_sigma=0.0)
    with pytest.raises(ValueError):
        SynthConfig(vertex_prob=1.5)


def test_event_determinism():
    cfg = SynthConfig(seed=1)
    a_img, a_mask = generate_event(cfg, 12345)
    b_img, b_mask = generate_event(cfg, 12345)
    c_img, _ = generate_event(cfg, 54321)
    assert a_img == b_img and a_mask == b_mask
    assert a_img != c_img


def test_noiseless_track_pixels_have_signal():
    cfg = SynthConfig(noise_sigma=0.0, hot_pixel_rate=0.0, tracks_min=1, tracks_max=1)
    img, mask = generate_event(cfg, 7)
    track = mask.labels == 1
    assert track.any()
    assert np.all(img.pixels[track] > 0)
    assert np.all(mask.labels[img.pixels == 0] == 0)


def test_zero_tracks_gives_pure_noise():
    cfg = SynthConfig(tracks_min=0, tracks_max=0, hot_pixel_rate=0.0)
    img, mask = generate_event(cfg, 3)
    assert mask.labels.sum() == 0
    assert img.pixels.std() > 0  # noise present


def test_noiseless_amplitude_stump_is_perfect():
    # sanity ceiling: without noise and hot pixels, thresholding the raw
    # amplitude separates track from background exactly
    cfg = SynthConfig(noise_sigma=0.0, hot_pixel_rate=0.0)
    img, mask = generate_event(cfg, 11)
    amps = img.pixels.ravel().astype(np.float64)
    labels = (mask.labels.ravel() == 1).astype(int)
    assert labels.sum() > 0
    model = train_stump(amps, labels)
    scores = np.where(
        model.polarity > 0,
        (amps - amps.min()) / (amps.max() - amps.min()),
        1 - (amps - amps.min()) / (amps.max() - amps.min()),
    )
    assert pr_curve(scores, labels).auc > 0.999


def test_corpus_files_and_manifest(tmp_path):
    cfg = SynthConfig(seed=5, width=24, height=24)
    out = tmp_path / "corpus"
    manifest = generate_corpus(cfg, n_events=10, out_dir=out)
    assert len(list(out.glob("*.larimg"))) == 10
    assert len(list(out.glob("*.larmsk"))) == 10
    assert (out / MANIFEST_NAME).exists()
    assert len(manifest["split"]["train"]) == 8
    assert len(manifest["split"]["test"]) == 2

    pairs, split, loaded = load_corpus(out)
    assert len(pairs) == 10
    assert loaded["prevalence"] == manifest["prevalence"]

    # manifest counts equal a recount from the masks on disk
    pos = sum(int((m.labels == 1).sum()) for _, _, m in pairs)
    neg = sum(int((m.labels == 0).sum()) for _, _, m in pairs)
    assert manifest["prevalence"]["positives"] == pos
    assert manifest["prevalence"]["negatives"] == neg


def test_corpus_byte_identical_for_same_seed(tmp_path):
    cfg = SynthConfig(seed=9, width=20, height=20)
    a = tmp_path / "a"
    b = tmp_path / "b"
    generate_corpus(cfg, n_events=6, out_dir=a)
    generate_corpus(cfg, n_events=6, out_dir=b)
    for fa in sorted(a.iterdir()):
        fb = b / fa.name
        assert fa.read_bytes() == fb.read_bytes(), fa.name


def test_event_seeds_are_prefix_stable(tmp_path):
    cfg = SynthConfig(seed=2, width=16, height=16)
    small = generate_corpus(cfg, n_events=3)
    big = generate_corpus(cfg, n_events=6)
    for ev_a, ev_b in zip(small["events"], big["events"][:3]):
        assert ev_a["seed"] == ev_b["seed"]


def test_default_prevalence_in_band():
    manifest = generate_corpus(SynthConfig(seed=123), n_events=50)
    ratio = manifest["prevalence"]["negatives_per_positive"]
    assert 50 <= ratio <= 400


def test_manifest_json_is_sorted_and_stable(tmp_path):
    cfg = SynthConfig(seed=4, width=16, height=16)
    out = tmp_path / "c"
    generate_corpus(cfg, n_events=2, out_dir=out)
    text = (out / MANIFEST_NAME).read_text()
    doc = json.loads(text)
    assert json.dumps(doc, indent=1, sort_keys=True) == text
