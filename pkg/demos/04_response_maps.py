"""Per-pixel probability response maps of a trained forest on held-out
events, plus the binary masks at a 0.5 threshold. The map PNGs show tracks
as bright ridges; the forest's vote granularity is 1/n_trees.
"""

from pathlib import Path

import numpy as np

from larseg import (
    SplitSpec,
    SynthConfig,
    TrainConfig,
    build_dataset,
    downsample_negatives,
    generate_corpus,
    response_map,
    save_mask,
    threshold_mask,
    to_png,
    train_forest,
)

out = Path(__file__).parent / "output" / "maps"
out.mkdir(parents=True, exist_ok=True)
SEED = 1

manifest = generate_corpus(SynthConfig(seed=SEED), n_events=20)
split = SplitSpec(
    train_event_ids=frozenset(manifest["split"]["train"]),
    test_event_ids=frozenset(manifest["split"]["test"]),
)
train, _ = build_dataset(manifest["pairs"], split)
forest = train_forest(downsample_negatives(train, 100, SEED), TrainConfig(n_trees=50, seed=SEED))

test_pairs = [p for p in manifest["pairs"] if p[0] in split.test_event_ids]
for event_id, image, mask in test_pairs:
    prob = response_map(forest, image)
    assert prob.min() >= 0.0 and prob.max() <= 1.0
    predicted = threshold_mask(prob, 0.5)
    agree = float(np.mean(predicted.labels == mask.labels))
    print(f"{event_id}: mean prob {prob.mean():.3f}, pixel agreement {agree:.3f}")
    to_png(image.pixels, out / f"{event_id}_raw.png")
    to_png(prob, out / f"{event_id}_response.png")
    save_mask(predicted, out / f"{event_id}_predicted.larmsk")

print(f"\nmaps in {out}")
