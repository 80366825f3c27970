"""Model files: versioned JSON documents carrying the model type, the
canonical feature-order checksum, and all parameters. Forests embed every
tree as nested node records. Loading refuses a file whose feature-order
checksum differs from this build's."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classifiers import LogRegModel, StumpModel
from .errors import SchemaError
from .features import feature_order_checksum
from .forest import LEAF, ForestModel, Tree

SCHEMA_VERSION = 1


def _tree_to_nested(tree: Tree, node: int = 0) -> dict:
    if tree.feature[node] == LEAF:
        return {"value": float(tree.value[node]), "n": int(tree.n_samples[node])}
    return {
        "feature": int(tree.feature[node]),
        "threshold": float(tree.threshold[node]),
        "n": int(tree.n_samples[node]),
        "left": _tree_to_nested(tree, int(tree.left[node])),
        "right": _tree_to_nested(tree, int(tree.right[node])),
    }


def _nested_to_arrays(root: dict) -> Tree:
    feature, threshold, left, right, value, n_samples = [], [], [], [], [], []

    def add(node: dict) -> int:
        idx = len(feature)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        n_samples.append(node.get("n", 0))
        if "feature" in node:
            feature[idx] = node["feature"]
            threshold[idx] = node["threshold"]
            left[idx] = add(node["left"])
            right[idx] = add(node["right"])
            # internal nodes report the weighted mean of their leaves on load
            value[idx] = 0.0
        else:
            value[idx] = node["value"]
        return idx

    add(root)
    return Tree(
        feature=np.asarray(feature, np.int32),
        threshold=np.asarray(threshold, np.float64),
        left=np.asarray(left, np.int32),
        right=np.asarray(right, np.int32),
        value=np.asarray(value, np.float64),
        n_samples=np.asarray(n_samples, np.int64),
        imp_decrease=np.zeros(0, np.float64),
    )


def save_model(model, path) -> None:
    path = Path(path)
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "feature_order_checksum": feature_order_checksum(),
    }
    if isinstance(model, StumpModel):
        doc["type"] = "stump"
        doc["threshold"] = model.threshold
        doc["polarity"] = model.polarity
    elif isinstance(model, LogRegModel):
        doc["type"] = "logreg"
        doc["weights"] = model.weights.tolist()
        doc["bias"] = model.bias
        doc["means"] = model.means.tolist()
        doc["scales"] = model.scales.tolist()
    elif isinstance(model, ForestModel):
        doc["type"] = "forest"
        doc["n_trees"] = model.n_trees
        doc["seed"] = model.seed
        doc["mtry"] = model.mtry
        doc["min_leaf"] = model.min_leaf
        doc["bootstrap"] = model.bootstrap
        doc["feature_count"] = model.feature_count
        doc["importance_totals"] = [
            tree.imp_decrease.tolist() if len(tree.imp_decrease) else None
            for tree in model.trees
        ]
        doc["trees"] = [_tree_to_nested(t) for t in model.trees]
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    path.write_text(json.dumps(doc))


def load_model(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON: {e}") from e
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError(f"{path}: missing model type tag")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported schema version {doc.get('schema_version')}")
    checksum = doc.get("feature_order_checksum")
    if checksum != feature_order_checksum():
        raise SchemaError(
            f"{path}: feature-order checksum mismatch; model was built against a "
            "different canonical feature order"
        )
    kind = doc["type"]
    try:
        if kind == "stump":
            return StumpModel(threshold=doc["threshold"], polarity=doc["polarity"])
        if kind == "logreg":
            return LogRegModel(
                weights=np.asarray(doc["weights"], np.float64),
                bias=doc["bias"],
                means=np.asarray(doc["means"], np.float64),
                scales=np.asarray(doc["scales"], np.float64),
            )
        if kind == "forest":
            imp = doc.get("importance_totals") or [None] * len(doc["trees"])
            trees = []
            for nested, tree_imp in zip(doc["trees"], imp):
                tree = _nested_to_arrays(nested)
                if tree_imp is not None:
                    tree = Tree(
                        feature=tree.feature,
                        threshold=tree.threshold,
                        left=tree.left,
                        right=tree.right,
                        value=tree.value,
                        n_samples=tree.n_samples,
                        imp_decrease=np.asarray(tree_imp, np.float64),
                    )
                trees.append(tree)
            return ForestModel(
                trees=tuple(trees),
                seed=doc["seed"],
                mtry=doc["mtry"],
                min_leaf=doc["min_leaf"],
                bootstrap=doc["bootstrap"],
                feature_count=doc["feature_count"],
            )
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"{path}: malformed {kind} model: {e}") from e
    raise SchemaError(f"{path}: unknown model type {kind!r}")
