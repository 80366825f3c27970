"""Synthetic labeled events: line tracks with a Gaussian cross-profile over
Gaussian noise, plus isolated hot pixels that defeat plain amplitude
thresholding. Stands in for real hand-labeled detector data.

Ground truth is decided before noise: a pixel is a track pixel when some
track's analytic contribution exceeds 10% of that track's peak amplitude,
i.e. when the pixel lies within sigma*sqrt(2*ln 10) of the track segment.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .dataset import SplitSpec
from .image import EventImage, LabelMask, save_image, save_mask

MANIFEST_NAME = "manifest.json"
LABEL_FRACTION = 0.1  # of the per-track peak amplitude


@dataclass(frozen=True)
class SynthConfig:
    width: int = 64
    height: int = 64
    tracks_min: int = 1
    tracks_max: int = 2
    amplitude_min: float = 25.0
    amplitude_max: float = 90.0
    track_sigma: float = 0.55
    track_length_min: float = 6.0
    track_length_max: float = 22.0
    noise_sigma: float = 8.0
    hot_pixel_rate: float = 0.003
    vertex_prob: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if not (0 <= self.tracks_min <= self.tracks_max):
            raise ValueError("need 0 <= tracks_min <= tracks_max")
        if not (0 < self.amplitude_min <= self.amplitude_max):
            raise ValueError("amplitude range must be positive")
        if self.track_sigma <= 0 or self.noise_sigma < 0:
            raise ValueError("track_sigma must be > 0 and noise_sigma >= 0")
        if not (0 <= self.vertex_prob <= 1) or not (0 <= self.hot_pixel_rate < 1):
            raise ValueError("probabilities must lie in [0, 1]")


def _segment_distance(rows, cols, p0, p1):
    """Distance from every pixel center to the segment p0-p1 (row, col space)."""
    d = p1 - p0
    denom = float(d @ d)
    if denom == 0:
        return np.hypot(rows - p0[0], cols - p0[1])
    t = ((rows - p0[0]) * d[0] + (cols - p0[1]) * d[1]) / denom
    t = np.clip(t, 0.0, 1.0)
    return np.hypot(rows - (p0[0] + t * d[0]), cols - (p0[1] + t * d[1]))


def _random_segment(rng, config, start=None):
    h, w = config.height, config.width
    if start is None:
        start = np.array([rng.uniform(0, h - 1), rng.uniform(0, w - 1)])
    theta = rng.uniform(0, 2 * math.pi)
    length = rng.uniform(config.track_length_min, config.track_length_max)
    end = start + length * np.array([math.sin(theta), math.cos(theta)])
    end[0] = min(max(end[0], 0.0), h - 1)
    end[1] = min(max(end[1], 0.0), w - 1)
    return start, end


def generate_event(config: SynthConfig, event_seed: int) -> tuple[EventImage, LabelMask]:
    """One deterministic synthetic event. The mask is fully labeled (0/1)."""
    h, w = config.height, config.width
    rng = np.random.default_rng(event_seed)
    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)

    signal = np.zeros((h, w))
    track = np.zeros((h, w), dtype=bool)
    label_radius = config.track_sigma * math.sqrt(2.0 * math.log(1.0 / LABEL_FRACTION))

    n_tracks = int(rng.integers(config.tracks_min, config.tracks_max + 1))
    vertex = None
    if n_tracks >= 2 and rng.random() < config.vertex_prob:
        vertex = np.array([rng.uniform(0, h - 1), rng.uniform(0, w - 1)])
    for _ in range(n_tracks):
        p0, p1 = _random_segment(rng, config, start=None if vertex is None else vertex.copy())
        amplitude = rng.uniform(config.amplitude_min, config.amplitude_max)
        dist = _segment_distance(rows, cols, p0, p1)
        signal += amplitude * np.exp(-(dist**2) / (2.0 * config.track_sigma**2))
        track |= dist < label_radius

    if config.hot_pixel_rate > 0:
        hot = rng.random((h, w)) < config.hot_pixel_rate
        hot &= ~track  # hot pixels are noise by construction
        amps = rng.uniform(config.amplitude_min, config.amplitude_max, size=int(hot.sum()))
        signal[hot] += amps

    noise = rng.normal(0.0, config.noise_sigma, size=(h, w)) if config.noise_sigma > 0 else 0.0
    image = EventImage((signal + noise).astype(np.float32))
    mask = LabelMask(track.astype(np.uint8))
    return image, mask


def event_seed(master_seed: int, index: int) -> int:
    """Stable per-event seed, independent of how many events are generated."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def generate_corpus(
    config: SynthConfig,
    n_events: int = 50,
    out_dir=None,
    train_fraction: float = 0.8,
) -> dict:
    """Generate n_events image/mask pairs plus a manifest.

    The manifest records per-event seeds and class counts and a whole-event
    train/test split (first 80% / last 20%, so 50 events -> 40/10). With
    out_dir=None nothing is written and the pairs ride along in the result
    under "pairs".
    """
    if n_events < 1:
        raise ValueError("n_events must be >= 1")
    events = []
    pairs = []
    total_pos = 0
    total_neg = 0
    for i in range(n_events):
        eid = f"event_{i:03d}"
        seed = event_seed(config.seed, i)
        image, mask = generate_event(config, seed)
        n_noise, n_track, _ = mask.counts()
        total_pos += n_track
        total_neg += n_noise
        events.append(
            {
                "id": eid,
                "image": f"{eid}.larimg",
                "mask": f"{eid}.larmsk",
                "seed": seed,
                "n_track_px": n_track,
                "n_noise_px": n_noise,
            }
        )
        pairs.append((eid, image, mask))

    n_train = max(1, min(n_events - 1, round(train_fraction * n_events))) if n_events > 1 else 1
    manifest = {
        "format": 1,
        "config": asdict(config),
        "n_events": n_events,
        "events": events,
        "split": {
            "train": [e["id"] for e in events[:n_train]],
            "test": [e["id"] for e in events[n_train:]],
        },
        "prevalence": {
            "positives": total_pos,
            "negatives": total_neg,
            "negatives_per_positive": (total_neg / total_pos) if total_pos else None,
        },
    }

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for (eid, image, mask), record in zip(pairs, events):
            save_image(image, out_dir / record["image"])
            save_mask(mask, out_dir / record["mask"])
        (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=1, sort_keys=True))
    else:
        manifest["pairs"] = pairs
    return manifest


def load_corpus(dir_path) -> tuple[list, SplitSpec, dict]:
    """Read back a generated corpus: (pairs, split, manifest)."""
    from .image import load_image, load_mask

    dir_path = Path(dir_path)
    manifest = json.loads((dir_path / MANIFEST_NAME).read_text())
    pairs = [
        (e["id"], load_image(dir_path / e["image"]), load_mask(dir_path / e["mask"]))
        for e in manifest["events"]
    ]
    split = SplitSpec(
        train_event_ids=frozenset(manifest["split"]["train"]),
        test_event_ids=frozenset(manifest["split"]["test"]),
    )
    return pairs, split, manifest
