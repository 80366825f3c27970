"""Command-line entry point.

Subcommands: synth, extract, train, predict, eval, importance, serve,
benchmark. Every artifact-producing run writes one run_manifest.json next to
its outputs; any failure exits nonzero with a single machine-parsable line
on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import DEFAULT_RATIOS, DEFAULT_TREE_GRID, run_benchmark
from .classifiers import TrainConfig, train_forest, train_logreg, train_stump
from .dataset import build_dataset, downsample_negatives, load_dataset, save_dataset
from .eval import pr_curve, response_map, save_pr_curve, threshold_mask
from .image import load_image, save_image, save_mask, to_png, EventImage
from .manifest import RunRecorder
from .model_io import load_model, save_model
from .synth import SynthConfig, generate_corpus, load_corpus


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="larseg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"larseg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--events", type=int, default=50)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--hot-pixel-rate", type=float, default=None)

    p = sub.add_parser("extract", help="compute descriptors for a corpus split")
    p.add_argument("--dir", required=True, type=Path, help="corpus directory")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--split", choices=("train", "test", "all"), default="train")
    p.add_argument("--ratio", type=int, default=None, help="downsample negatives to 1:R")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("binary", "csv"), default="binary")

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("--model", required=True,
                   choices=("stump", "logreg", "forest", "ds", "lr", "rf"),
                   help="ds/lr/rf are aliases for stump/logreg/forest")
    p.add_argument("--out", required=True, type=Path)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dir", type=Path, help="corpus directory (train split)")
    src.add_argument("--data", type=Path, help="dataset file from `extract`")
    p.add_argument("--ratio", type=int, default=None, help="downsample negatives to 1:R")
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("predict", help="response map for one event image")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--image", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--threshold", type=float, default=None, help="also write a binary mask")

    p = sub.add_parser("resize", help="bilinear-resample an event image")
    p.add_argument("--image", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--width", required=True, type=int, help="target width (no aspect policy is implied)")
    p.add_argument("--height", required=True, type=int)

    p = sub.add_parser("eval", help="precision-recall curve of a model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dir", type=Path, help="corpus directory (test split)")
    src.add_argument("--data", type=Path, help="dataset file from `extract`")
    p.add_argument("--split", choices=("train", "test", "all"), default="test")

    p = sub.add_parser("importance", help="forest variable importance ranking")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("serve", help="run the hand-labeling service")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--port", type=int, default=8601)
    p.add_argument("--static", type=Path, default=None, help="built UI bundle directory")

    p = sub.add_parser("benchmark", help="ratio sweep, classifier comparison, tree sweep")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dir", type=Path, default=None, help="reuse an existing corpus")
    p.add_argument("--events", type=int, default=50)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--ratios", type=_int_list, default=list(DEFAULT_RATIOS))
    p.add_argument("--trees", type=_int_list, default=list(DEFAULT_TREE_GRID))
    return parser


def _corpus_datasets(corpus_dir, split_name):
    pairs, split, _ = load_corpus(corpus_dir)
    train, test = build_dataset(pairs, split)
    if split_name == "train":
        return train
    if split_name == "test":
        return test
    from .dataset import LabeledDataset

    return LabeledDataset(
        X=np.vstack([train.X, test.X]),
        y=np.concatenate([train.y, test.y]),
        event_ids=np.concatenate([train.event_ids, test.event_ids]),
    )


def cmd_synth(args) -> int:
    rec = RunRecorder("synth", vars(args))
    overrides = {"width": args.width, "height": args.height, "seed": args.seed}
    if args.noise_sigma is not None:
        overrides["noise_sigma"] = args.noise_sigma
    if args.hot_pixel_rate is not None:
        overrides["hot_pixel_rate"] = args.hot_pixel_rate
    manifest = generate_corpus(SynthConfig(**overrides), n_events=args.events, out_dir=args.out)
    for e in manifest["events"]:
        rec.add_artifact(args.out / e["image"])
        rec.add_artifact(args.out / e["mask"])
    rec.add_artifact(args.out / "manifest.json")
    rec.write(args.out)
    prev = manifest["prevalence"]["negatives_per_positive"]
    print(f"wrote {args.events} events to {args.out} (prevalence 1:{prev:.0f})")
    return 0


def cmd_extract(args) -> int:
    rec = RunRecorder("extract", vars(args))
    rec.add_input(args.dir)
    data = _corpus_datasets(args.dir, args.split)
    if args.ratio is not None:
        data = downsample_negatives(data, ratio=args.ratio, seed=args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    suffix = "csv" if args.format == "csv" else "lards"
    path = args.out / f"dataset_{args.split}.{suffix}"
    save_dataset(data, path, format=args.format)
    rec.add_artifact(path)
    rec.write(args.out)
    print(f"wrote {path} ({data.n_samples} samples, {data.n_positive} positive)")
    return 0


MODEL_ALIASES = {"ds": "stump", "lr": "logreg", "rf": "forest"}


def cmd_train(args) -> int:
    args.model = MODEL_ALIASES.get(args.model, args.model)
    rec = RunRecorder("train", vars(args))
    if args.data is not None:
        rec.add_input(args.data)
        data = load_dataset(args.data)
    else:
        rec.add_input(args.dir)
        data = _corpus_datasets(args.dir, "train")
    if args.ratio is not None:
        data = downsample_negatives(data, ratio=args.ratio, seed=args.seed)
    cfg = TrainConfig(n_trees=args.trees, seed=args.seed, ratio_seed=args.seed)
    if args.model == "stump":
        model = train_stump(data.X[:, 0], data.y)
    elif args.model == "logreg":
        model = train_logreg(data, cfg)
    else:
        model = train_forest(data, cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"model_{args.model}.json"
    save_model(model, path)
    rec.add_artifact(path)
    rec.write(args.out)
    print(f"trained {args.model} on {data.n_samples} samples -> {path}")
    return 0


def cmd_predict(args) -> int:
    rec = RunRecorder("predict", vars(args))
    rec.add_input(args.model)
    rec.add_input(args.image)
    model = load_model(args.model)
    image = load_image(args.image)
    prob = response_map(model, image)
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.image.stem
    map_path = args.out / f"{stem}_response.larimg"
    save_image(EventImage(prob.astype(np.float32)), map_path)
    rec.add_artifact(map_path)
    png_path = args.out / f"{stem}_response.png"
    to_png(prob, png_path)
    rec.add_artifact(png_path)
    if args.threshold is not None:
        mask_path = args.out / f"{stem}_mask.larmsk"
        save_mask(threshold_mask(prob, args.threshold), mask_path)
        rec.add_artifact(mask_path)
    rec.write(args.out)
    print(f"wrote response map {map_path}")
    return 0


def cmd_resize(args) -> int:
    from .image import resize_bilinear

    rec = RunRecorder("resize", vars(args))
    rec.add_input(args.image)
    image = load_image(args.image)
    resized = resize_bilinear(image, args.width, args.height)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{args.image.stem}_{args.width}x{args.height}.larimg"
    save_image(resized, path)
    rec.add_artifact(path)
    rec.write(args.out)
    print(f"resized {image.width}x{image.height} -> {resized.width}x{resized.height}: {path}")
    return 0


def cmd_eval(args) -> int:
    rec = RunRecorder("eval", vars(args))
    rec.add_input(args.model)
    model = load_model(args.model)
    if args.data is not None:
        rec.add_input(args.data)
        data = load_dataset(args.data)
    else:
        rec.add_input(args.dir)
        data = _corpus_datasets(args.dir, args.split)
    X = data.X if type(model).__name__ == "ForestModel" else data.X.astype(np.float64)
    curve = pr_curve(model.predict_proba(X), data.y)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "pr_curve.csv"
    save_pr_curve(curve, path)
    rec.add_artifact(path)
    rec.write(args.out)
    print(f"auc_pr={curve.auc!r} ({data.n_samples} samples) -> {path}")
    return 0


def cmd_importance(args) -> int:
    from .classifiers import importance_ranking
    from .forest import ForestModel

    rec = RunRecorder("importance", vars(args))
    rec.add_input(args.model)
    model = load_model(args.model)
    if not isinstance(model, ForestModel):
        raise ValueError("importance requires a forest model")
    ranking = importance_ranking(model, top=args.top)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "importance.csv"
    with open(path, "w", newline="") as f:
        f.write("rank,feature_index,feature_name,importance\n")
        for rank, (idx, name, value) in enumerate(ranking, start=1):
            f.write(f'{rank},{idx},"{name}",{float(value)!r}\n')
    rec.add_artifact(path)
    rec.write(args.out)
    print(f"{'rank':>4}  {'importance':>10}  feature")
    for rank, (idx, name, value) in enumerate(ranking, start=1):
        print(f"{rank:>4}  {value:>10.4f}  {name}")
    return 0


def cmd_serve(args) -> int:
    import json as _json

    from .service import serve

    # long-running service: the run manifest goes to stdout, not the data dir
    print(_json.dumps({"command": "serve", "args": {k: str(v) for k, v in vars(args).items()
                                                    if k != "command"}}), flush=True)
    serve(args.dir, args.port, static_dir=args.static)
    return 0


def cmd_benchmark(args) -> int:
    rec = RunRecorder("benchmark", vars(args))
    result = run_benchmark(
        out_dir=args.out,
        seed=args.seed,
        corpus_dir=args.dir,
        n_events=args.events,
        width=args.width,
        height=args.height,
        ratios=args.ratios,
        tree_grid=args.trees,
        recorder=rec,
    )
    rec.write(args.out)
    print("model,ratio,trees,auc_pr")
    for model, ratio, trees, auc in result["summary"]:
        print(f"{model},{ratio},{trees},{auc:.4f}")
    print(f"artifacts in {args.out}")
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "extract": cmd_extract,
    "train": cmd_train,
    "predict": cmd_predict,
    "resize": cmd_resize,
    "eval": cmd_eval,
    "importance": cmd_importance,
    "serve": cmd_serve,
    "benchmark": cmd_benchmark,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        return 130
    except Exception as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
