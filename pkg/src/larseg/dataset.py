"""Labeled per-pixel datasets: assembly from image/mask pairs, event-level
splitting, negative downsampling, and CSV/binary serialization.

Binary dataset file: magic ``LARDS1\\n``, u32 LE n_samples, u32 LE n_features
(always 42), then one record per sample: 42 float32 LE features + 1 uint8
label. CSV: header ``feat_00,...,feat_41,label``. Neither format stores event
ids; they exist only in memory for split bookkeeping.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadMagicError, SchemaError, TruncatedPayloadError
from .features import N_FEATURES, extract_descriptor
from .image import LABEL_TRACK, LABEL_UNKNOWN, EventImage, LabelMask

DATASET_MAGIC = b"LARDS1\n"
CSV_COLUMNS = [f"feat_{i:02d}" for i in range(N_FEATURES)] + ["label"]


@dataclass
class LabeledDataset:
    """Feature rows with binary labels (1 = track, 0 = noise) and, when known,
    the originating event of each row."""

    X: np.ndarray
    y: np.ndarray
    event_ids: np.ndarray

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float32)
        self.y = np.ascontiguousarray(self.y, dtype=np.uint8)
        self.event_ids = np.asarray(self.event_ids)
        if self.X.ndim != 2 or self.X.shape[1] != N_FEATURES:
            raise ValueError(f"features must be (N, {N_FEATURES}), got {self.X.shape}")
        if len(self.y) != len(self.X) or len(self.event_ids) != len(self.X):
            raise ValueError("labels/event ids must match the number of feature rows")
        if not np.all(np.isin(self.y, (0, 1))):
            raise ValueError("labels must be 0 or 1")

    @property
    def n_samples(self) -> int:
        return len(self.X)

    @property
    def n_positive(self) -> int:
        return int(self.y.sum())

    @property
    def n_negative(self) -> int:
        return self.n_samples - self.n_positive

    def class_ratio(self) -> float:
        """Negatives per positive (the r of a 1:r composition)."""
        if self.n_positive == 0:
            return float("inf")
        return self.n_negative / self.n_positive


@dataclass(frozen=True)
class SplitSpec:
    """Event-level train/test assignment. Ids must be disjoint."""

    train_event_ids: frozenset
    test_event_ids: frozenset

    def __post_init__(self):
        object.__setattr__(self, "train_event_ids", frozenset(self.train_event_ids))
        object.__setattr__(self, "test_event_ids", frozenset(self.test_event_ids))
        overlap = self.train_event_ids & self.test_event_ids
        if overlap:
            raise ValueError(f"events in both subsets: {sorted(overlap)}")


def build_dataset(pairs, split: SplitSpec) -> tuple[LabeledDataset, LabeledDataset]:
    """Compute descriptors for every labeled pixel and split by whole event.

    `pairs` is a sequence of (event_id, EventImage, LabelMask). Pixels whose
    mask code is 255 (unlabeled) are dropped. No event contributes to both
    subsets.
    """
    known = split.train_event_ids | split.test_event_ids
    chunks = {"train": [], "test": []}
    seen = set()
    for event_id, image, mask in pairs:
        if not isinstance(image, EventImage):
            image = EventImage(image)
        if not isinstance(mask, LabelMask):
            mask = LabelMask(mask)
        if image.shape != mask.shape:
            raise ValueError(
                f"{event_id}: image {image.shape} and mask {mask.shape} differ"
            )
        if event_id not in known:
            raise ValueError(f"event {event_id!r} is not covered by the split spec")
        seen.add(event_id)
        fm = extract_descriptor(image, image_id=str(event_id))
        labels = mask.labels.ravel()
        keep = labels != LABEL_UNKNOWN
        subset = "train" if event_id in split.train_event_ids else "test"
        chunks[subset].append(
            (fm.values[keep], (labels[keep] == LABEL_TRACK).astype(np.uint8), str(event_id))
        )
    missing = known - seen
    if missing:
        raise ValueError(f"split references absent events: {sorted(missing)}")

    def _assemble(items) -> LabeledDataset:
        if not items:
            return LabeledDataset(
                X=np.empty((0, N_FEATURES), np.float32),
                y=np.empty(0, np.uint8),
                event_ids=np.empty(0, dtype="U1"),
            )
        X = np.vstack([x for x, _, _ in items]).astype(np.float32)
        y = np.concatenate([yy for _, yy, _ in items])
        ids = np.concatenate(
            [np.full(len(yy), eid) for _, yy, eid in items]
        )
        return LabeledDataset(X=X, y=y, event_ids=ids)

    return _assemble(chunks["train"]), _assemble(chunks["test"])


def downsample_negatives(data: LabeledDataset, ratio: float, seed: int) -> LabeledDataset:
    """Keep every positive; draw min(ratio * n_pos, n_neg) negatives uniformly
    without replacement. Deterministic for a fixed seed."""
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    if data.n_positive == 0:
        raise ValueError("dataset has no positive samples")
    pos_idx = np.flatnonzero(data.y == 1)
    neg_idx = np.flatnonzero(data.y == 0)
    n_keep = min(int(ratio * len(pos_idx)), len(neg_idx))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(neg_idx, size=n_keep, replace=False)
    keep = np.sort(np.concatenate([pos_idx, chosen]))
    return LabeledDataset(X=data.X[keep], y=data.y[keep], event_ids=data.event_ids[keep])


def save_dataset(data: LabeledDataset, path, format: str | None = None) -> None:
    """Write a dataset as binary (lossless) or CSV (9 significant digits)."""
    path = Path(path)
    fmt = format or ("csv" if path.suffix.lower() == ".csv" else "binary")
    if fmt == "binary":
        with open(path, "wb") as f:
            f.write(DATASET_MAGIC)
            f.write(struct.pack("<II", data.n_samples, N_FEATURES))
            record = np.zeros(
                data.n_samples,
                dtype=np.dtype([("x", "<f4", (N_FEATURES,)), ("y", "u1")]),
            )
            record["x"] = data.X
            record["y"] = data.y
            f.write(record.tobytes())
    elif fmt == "csv":
        with open(path, "w", newline="") as f:
            f.write(",".join(CSV_COLUMNS) + "\n")
            for row, label in zip(data.X, data.y):
                f.write(",".join(f"{v:.9g}" for v in row) + f",{int(label)}\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_dataset(path) -> LabeledDataset:
    """Read a dataset written by save_dataset. Event ids are not stored in
    either format, so they come back empty."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_dataset_csv(path)
    return _load_dataset_binary(path)


def _load_dataset_binary(path: Path) -> LabeledDataset:
    blob = path.read_bytes()
    if blob[: len(DATASET_MAGIC)] != DATASET_MAGIC:
        raise BadMagicError(f"{path}: expected magic {DATASET_MAGIC!r}")
    header_end = len(DATASET_MAGIC) + 8
    if len(blob) < header_end:
        raise TruncatedPayloadError(f"{path}: header truncated")
    n_samples, n_features = struct.unpack("<II", blob[len(DATASET_MAGIC) : header_end])
    if n_features != N_FEATURES:
        raise SchemaError(f"{path}: expected {N_FEATURES} features, header says {n_features}")
    record = np.dtype([("x", "<f4", (N_FEATURES,)), ("y", "u1")])
    expected = n_samples * record.itemsize
    payload = blob[header_end:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: expected {expected} payload bytes, got {len(payload)}"
        )
    rows = np.frombuffer(payload[:expected], dtype=record)
    return LabeledDataset(
        X=rows["x"].copy(),
        y=rows["y"].copy(),
        event_ids=np.full(n_samples, "", dtype="U1"),
    )


def _load_dataset_csv(path: Path) -> LabeledDataset:
    with open(path) as f:
        header = f.readline().rstrip("\n")
        cols = header.split(",") if header else []
        if len(cols) != N_FEATURES + 1:
            raise SchemaError(
                f"{path}: expected {N_FEATURES + 1} columns, header has {len(cols)}"
            )
        if cols != CSV_COLUMNS:
            raise SchemaError(f"{path}: unexpected header {header!r}")
        xs, ys = [], []
        for lineno, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != N_FEATURES + 1:
                raise SchemaError(f"{path}:{lineno}: expected {N_FEATURES + 1} fields")
            xs.append([float(v) for v in parts[:-1]])
            label = int(parts[-1])
            if label not in (0, 1):
                raise SchemaError(f"{path}:{lineno}: label must be 0 or 1, got {label}")
            ys.append(label)
    n = len(ys)
    return LabeledDataset(
        X=np.asarray(xs, dtype=np.float32).reshape(n, N_FEATURES),
        y=np.asarray(ys, dtype=np.uint8),
        event_ids=np.full(n, "", dtype="U1"),
    )
