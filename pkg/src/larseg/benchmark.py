"""The full experiment grid: class-ratio sweep for all three classifiers,
tree-count sweep for the forest, and the forest's importance ranking.

Defaults mirror the reported experiments: ratios 1:1 / 1:10 / 1:20 / 1:50 /
1:100 with a constant positive set, forests of 100 trees, a tree sweep over
{10, 20, 50, 100, 200, 500, 1000} at the 1:100 operating ratio, and a
top-ten importance table.

All artifacts are CSV plus one model file per training run is avoided on
purpose: benchmark outputs are curves and tables, reproducible byte-for-byte
from the same seed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .classifiers import TrainConfig, importance_ranking, train_forest, train_logreg, train_stump
from .dataset import build_dataset, downsample_negatives
from .eval import pr_curve, save_pr_curve
from .synth import SynthConfig, generate_corpus, load_corpus

DEFAULT_RATIOS = (1, 10, 20, 50, 100)
DEFAULT_TREE_GRID = (10, 20, 50, 100, 200, 500, 1000)
OPERATING_RATIO = 100
MODELS = ("stump", "logreg", "forest")


def run_benchmark(
    out_dir,
    seed: int = 0,
    corpus_dir=None,
    n_events: int = 50,
    width: int = 64,
    height: int = 64,
    ratios=DEFAULT_RATIOS,
    tree_grid=DEFAULT_TREE_GRID,
    n_trees: int = 100,
    recorder=None,
) -> dict:
    """Run the grid; returns {"summary": rows, "importance": rows, ...}.

    With corpus_dir=None a synthetic corpus is generated under out_dir/corpus.
    Everything downstream is deterministic given the seed and the corpus.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ratios = sorted(set(int(r) for r in ratios))
    tree_grid = sorted(set(int(t) for t in tree_grid))

    if corpus_dir is None:
        corpus_dir = out_dir / "corpus"
        generate_corpus(SynthConfig(width=width, height=height, seed=seed), n_events=n_events,
                        out_dir=corpus_dir)
    pairs, split, _ = load_corpus(corpus_dir)
    if recorder is not None:
        recorder.add_input(corpus_dir)

    train, test = build_dataset(pairs, split)
    test_X64 = test.X.astype(np.float64)

    artifacts = []
    summary = []

    def emit_curve(name, curve):
        path = out_dir / name
        save_pr_curve(curve, path)
        artifacts.append(path)

    operating_ratio = max(r for r in ratios) if OPERATING_RATIO not in ratios else OPERATING_RATIO
    forest_at_operating = None

    for ratio in ratios:
        sampled = downsample_negatives(train, ratio=ratio, seed=seed)
        full_trees = max(max(tree_grid), n_trees)
        cfg = TrainConfig(n_trees=full_trees if ratio == operating_ratio else n_trees,
                          seed=seed, ratio_seed=seed)

        stump = train_stump(sampled.X[:, 0], sampled.y)
        curve = pr_curve(stump.predict_proba(test_X64), test.y)
        emit_curve(f"pr_stump_r{ratio}.csv", curve)
        summary.append(("stump", ratio, 1, curve.auc))

        logreg = train_logreg(sampled, cfg)
        curve = pr_curve(logreg.predict_proba(test_X64), test.y)
        emit_curve(f"pr_logreg_r{ratio}.csv", curve)
        summary.append(("logreg", ratio, 1, curve.auc))

        forest = train_forest(sampled, cfg)
        if ratio == operating_ratio:
            forest_at_operating = forest
            forest = forest.truncate(n_trees)
        curve = pr_curve(forest.predict_proba(test.X), test.y)
        emit_curve(f"pr_forest_r{ratio}.csv", curve)
        summary.append(("forest", ratio, forest.n_trees, curve.auc))

    # tree sweep at the operating ratio: prefixes of one big forest are
    # identical to separately trained smaller forests (seed-per-tree)
    for k in tree_grid:
        sub = forest_at_operating.truncate(k)
        curve = pr_curve(sub.predict_proba(test.X), test.y)
        emit_curve(f"pr_forest_r{operating_ratio}_t{k}.csv", curve)
        summary.append(("forest", operating_ratio, k, curve.auc))

    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w", newline="") as f:
        f.write("model,ratio,trees,auc_pr\n")
        for model, ratio, trees, auc in summary:
            f.write(f"{model},{ratio},{trees},{float(auc)!r}\n")
    artifacts.append(summary_path)

    ranking = importance_ranking(forest_at_operating.truncate(n_trees), top=10)
    importance_path = out_dir / "importance_top10.csv"
    with open(importance_path, "w", newline="") as f:
        f.write("rank,feature_index,feature_name,importance\n")
        for rank, (idx, name, value) in enumerate(ranking, start=1):
            f.write(f'{rank},{idx},"{name}",{float(value)!r}\n')
    artifacts.append(importance_path)

    if recorder is not None:
        for p in artifacts:
            recorder.add_artifact(p)

    return {
        "summary": summary,
        "importance": ranking,
        "artifacts": [str(p) for p in artifacts],
        "corpus_dir": str(corpus_dir),
    }
