"""Random forest of unpruned CART trees, grown on bootstrap samples with a
random feature subset per split.

The splitter presorts every feature column once per forest and maintains the
sorted sample lists through node partitions, so growing a tree costs no sorts.
A bootstrap sample (n draws with replacement) is carried as per-sample integer
weights, which is equivalent to duplicating rows.

Every tree derives its RNG seed from (master seed, tree index); trees are
therefore independent of worker count, and the first k trees of a forest are
identical to a k-tree forest with the same master seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .features import N_FEATURES

LEAF = -2


@njit(cache=True, nogil=True)
def _gini(wpos, wtot):
    p = wpos / wtot
    return 2.0 * p * (1.0 - p)


@njit(cache=True, nogil=True)
def _grow_tree(Xt, y, sorted_idx, seed, mtry, min_leaf, bootstrap):
    """Grow one tree; returns node arrays plus per-feature impurity decrease.

    Xt: (d, n) float32, feature-major. sorted_idx: (d, n) int32 presorted per
    feature. Node arrays use LEAF (-2) in `feature` for leaves.
    """
    d, n = Xt.shape
    np.random.seed(seed)
    weight = np.zeros(n, np.int64)
    if bootstrap:
        for _ in range(n):
            weight[np.random.randint(0, n)] += 1
    else:
        for i in range(n):
            weight[i] = 1

    m0 = 0
    for i in range(n):
        if weight[i] > 0:
            m0 += 1
    active = np.empty((d, m0), np.int32)
    for f in range(d):
        k = 0
        for i in range(n):
            s = sorted_idx[f, i]
            if weight[s] > 0:
                active[f, k] = s
                k += 1

    max_nodes = 2 * m0 + 1
    feature = np.full(max_nodes, LEAF, np.int32)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int32)
    right = np.full(max_nodes, -1, np.int32)
    value = np.zeros(max_nodes, np.float64)
    n_samples = np.zeros(max_nodes, np.int64)
    imp_decrease = np.zeros(d, np.float64)

    stack_node = np.empty(max_nodes + 2, np.int32)
    stack_lo = np.empty(max_nodes + 2, np.int64)
    stack_hi = np.empty(max_nodes + 2, np.int64)
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = m0
    top = 1
    n_nodes = 1

    feat_order = np.empty(d, np.int32)
    side = np.zeros(n, np.uint8)
    scratch = np.empty(m0, np.int32)

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        wtot = 0
        wpos = 0
        for i in range(lo, hi):
            s = active[0, i]
            wtot += weight[s]
            wpos += weight[s] * y[s]
        n_samples[node] = wtot
        value[node] = wpos / wtot
        if wpos == 0 or wpos == wtot or wtot < 2 * min_leaf:
            continue

        g_node = _gini(wpos, wtot)
        for j in range(d):
            feat_order[j] = j
        for j in range(mtry):
            k = j + np.random.randint(0, d - j)
            tmp = feat_order[j]
            feat_order[j] = feat_order[k]
            feat_order[k] = tmp

        best_gain = 0.0
        best_f = -1
        best_thr = 0.0
        for j in range(mtry):
            f = feat_order[j]
            col = Xt[f]
            cw = 0
            cpos = 0
            for i in range(lo, hi - 1):
                s = active[f, i]
                cw += weight[s]
                cpos += weight[s] * y[s]
                vi = col[s]
                vj = col[active[f, i + 1]]
                if vi < vj and cw >= min_leaf and wtot - cw >= min_leaf:
                    gain = g_node - (
                        cw * _gini(cpos, cw) + (wtot - cw) * _gini(wpos - cpos, wtot - cw)
                    ) / wtot
                    if gain > best_gain + 1e-15:
                        best_gain = gain
                        best_f = f
                        best_thr = 0.5 * (vi + vj)
        if best_f < 0:
            continue

        col = Xt[best_f]
        n_left = 0
        for i in range(lo, hi):
            s = active[best_f, i]
            if col[s] <= best_thr:
                side[s] = 0
                n_left += 1
            else:
                side[s] = 1
        for f in range(d):
            kl = 0
            kr = n_left
            for i in range(lo, hi):
                s = active[f, i]
                if side[s] == 0:
                    scratch[kl] = s
                    kl += 1
                else:
                    scratch[kr] = s
                    kr += 1
            for i in range(hi - lo):
                active[f, lo + i] = scratch[i]

        feature[node] = best_f
        threshold[node] = best_thr
        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        left[node] = lid
        right[node] = rid
        imp_decrease[best_f] += (wtot / n) * best_gain

        stack_node[top] = lid
        stack_lo[top] = lo
        stack_hi[top] = lo + n_left
        top += 1
        stack_node[top] = rid
        stack_lo[top] = lo + n_left
        stack_hi[top] = hi
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        value[:n_nodes].copy(),
        n_samples[:n_nodes].copy(),
        imp_decrease,
    )


@njit(cache=True, nogil=True)
def _predict_votes(X, feature, threshold, left, right, value, offsets):
    """Fraction of trees whose leaf majority is the positive class."""
    n = X.shape[0]
    n_trees = len(offsets) - 1
    out = np.zeros(n, np.float64)
    for i in range(n):
        votes = 0
        for t in range(n_trees):
            node = offsets[t]
            while feature[node] != LEAF:
                if X[i, feature[node]] <= threshold[node]:
                    node = left[node] + offsets[t]
                else:
                    node = right[node] + offsets[t]
            if value[node] > 0.5:
                votes += 1
        out[i] = votes / n_trees
    return out


@dataclass(frozen=True)
class Tree:
    """One grown tree as parallel node arrays; node 0 is the root, children
    are indices into the same arrays, `feature == -2` marks a leaf, and
    `value` holds the leaf's positive-class fraction."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    imp_decrease: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_fraction(self, x: np.ndarray) -> float:
        """Positive-class fraction at the leaf reached by one sample."""
        node = 0
        while self.feature[node] != LEAF:
            node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
        return float(self.value[node])


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[Tree, ...]
    seed: int
    mtry: int
    min_leaf: int
    bootstrap: bool
    feature_count: int = N_FEATURES
    _packed: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def _pack(self):
        if not self._packed:
            offsets = np.zeros(self.n_trees + 1, np.int64)
            for t, tree in enumerate(self.trees):
                offsets[t + 1] = offsets[t] + tree.n_nodes
            self._packed["offsets"] = offsets
            self._packed["feature"] = np.concatenate([t.feature for t in self.trees])
            self._packed["threshold"] = np.concatenate([t.threshold for t in self.trees])
            self._packed["left"] = np.concatenate([t.left for t in self.trees])
            self._packed["right"] = np.concatenate([t.right for t in self.trees])
            self._packed["value"] = np.concatenate([t.value for t in self.trees])
        return self._packed

    def predict_proba(self, X) -> np.ndarray:
        """Per-sample probability: the fraction of trees voting track.

        A tree votes track when its leaf's positive fraction exceeds 0.5;
        a 50/50 leaf votes noise.
        """
        X = _check_features(X, self.feature_count)
        p = self._pack()
        return _predict_votes(
            X, p["feature"], p["threshold"], p["left"], p["right"], p["value"], p["offsets"]
        )

    def feature_importance(self) -> np.ndarray:
        """Mean decrease in Gini impurity, normalized to sum 1."""
        total = np.zeros(self.feature_count, np.float64)
        for tree in self.trees:
            total += tree.imp_decrease
        s = total.sum()
        if s <= 0:
            raise ValueError("forest contains no splits; importance undefined")
        return total / s

    def truncate(self, n_trees: int) -> "ForestModel":
        """First n_trees trees, identical to training with n_trees directly."""
        if not (1 <= n_trees <= self.n_trees):
            raise ValueError(f"n_trees must be in [1, {self.n_trees}]")
        return ForestModel(
            trees=self.trees[:n_trees],
            seed=self.seed,
            mtry=self.mtry,
            min_leaf=self.min_leaf,
            bootstrap=self.bootstrap,
            feature_count=self.feature_count,
        )


def _check_features(X, expected) -> np.ndarray:
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float32))
    if X.ndim != 2 or X.shape[1] != expected:
        raise ValueError(f"expected feature matrix (N, {expected}), got {X.shape}")
    return X


def tree_seed(master_seed: int, tree_index: int) -> int:
    """Stable per-tree seed; independent of the total tree count."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(tree_index,))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def train_forest_arrays(
    X,
    y,
    n_trees: int = 100,
    mtry: int = 6,
    min_leaf: int = 1,
    bootstrap: bool = True,
    seed: int = 0,
    n_jobs: int | None = None,
) -> ForestModel:
    """Train a forest on a raw (N, d) feature matrix with 0/1 labels."""
    X = np.asarray(X, dtype=np.float32)
    y = np.ascontiguousarray(np.asarray(y, dtype=np.uint8))
    if X.ndim != 2:
        raise ValueError("X must be 2D")
    n, d = X.shape
    if n != len(y):
        raise ValueError("X and y lengths differ")
    if not (1 <= mtry <= d):
        raise ValueError(f"mtry must be in [1, {d}]")
    if n_trees < 1 or min_leaf < 1:
        raise ValueError("n_trees and min_leaf must be >= 1")
    npos = int(y.sum())
    if npos == 0 or npos == n:
        raise ValueError("training data must contain both classes")

    Xt = np.ascontiguousarray(X.T)
    sorted_idx = np.argsort(Xt, axis=1, kind="stable").astype(np.int32)
    seeds = [tree_seed(seed, t) for t in range(n_trees)]

    def build(t):
        out = _grow_tree(Xt, y, sorted_idx, seeds[t], mtry, min_leaf, bootstrap)
        return Tree(*out)

    if n_jobs is None:
        import os

        n_jobs = min(os.cpu_count() or 1, n_trees)
    if n_jobs > 1 and n_trees > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = tuple(pool.map(build, range(n_trees)))
    else:
        trees = tuple(build(t) for t in range(n_trees))
    return ForestModel(
        trees=trees, seed=seed, mtry=mtry, min_leaf=min_leaf, bootstrap=bootstrap,
        feature_count=d,
    )
