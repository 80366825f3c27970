import numpy as np
import pytest

from larseg.classifiers import StumpModel
from larseg.eval import (
    ConfusionCounts,
    PRCurve,
    load_pr_curve,
    pr_curve,
    precision_recall,
    response_map,
    save_pr_curve,
    threshold_mask,
)
from larseg.image import EventImage

import oracles


def test_precision_recall_plain():
    pr = precision_recall(ConfusionCounts(tp=8, fp=2, fn=2, tn=88))
    assert pr.precision == 0.8
    assert pr.recall == 0.8
    assert not pr.precision_degenerate and not pr.recall_degenerate


def test_precision_recall_degenerate_conventions():
    no_pred = precision_recall(ConfusionCounts(tp=0, fp=0, fn=3, tn=5))
    assert no_pred.precision == 1.0 and no_pred.precision_degenerate
    assert no_pred.recall == 0.0

    no_pos = precision_recall(ConfusionCounts(tp=0, fp=4, fn=0, tn=5))
    assert no_pos.recall == 1.0 and no_pos.recall_degenerate


def test_precision_recall_all_positive_prevalence():
    # classify-everything-positive: precision equals prevalence
    p, n = 16_988, 2_061_778
    pr = precision_recall(ConfusionCounts(tp=p, fp=n, fn=0, tn=0))
    assert pr.recall == 1.0
    assert pr.precision == p / (p + n)
    assert abs(pr.precision - 0.008172) < 5e-7


def test_confusion_validation():
    with pytest.raises(ValueError):
        ConfusionCounts(tp=-1, fp=0, fn=0, tn=0)
    assert ConfusionCounts(1, 2, 3, 4).total == 10


def test_pr_curve_perfect_scorer():
    scores = np.array([0.9, 0.8, 0.7, 0.2, 0.1])
    labels = np.array([1, 1, 1, 0, 0])
    curve = pr_curve(scores, labels)
    assert curve.auc == 1.0
    found = [(p, r) for p, r in zip(curve.precisions, curve.recalls) if p == 1.0 and r == 1.0]
    assert found


def test_pr_curve_constant_scorer():
    scores = np.full(10, 0.5)
    labels = np.array([1, 0, 0, 0, 1, 0, 0, 0, 0, 0])
    curve = pr_curve(scores, labels)
    assert len(curve.thresholds) == 1
    assert curve.recalls[0] == 1.0
    assert curve.precisions[0] == 0.2  # prevalence
    assert abs(curve.auc - 0.2) < 1e-15


def test_pr_curve_matches_brute_force():
    rng = np.random.default_rng(0)
    scores = rng.random(200)
    labels = (rng.random(200) < 0.3).astype(int)
    labels[0] = 1
    curve = pr_curve(scores, labels)
    expected = oracles.brute_force_pr_points(scores, labels)
    assert len(curve.thresholds) == len(expected)
    for (t, p, r), tt, pp, rr in zip(
        expected, curve.thresholds, curve.precisions, curve.recalls
    ):
        assert t == tt
        assert abs(p - pp) < 1e-15
        assert abs(r - rr) < 1e-15
    # recall is non-increasing as the threshold increases
    assert np.all(np.diff(curve.recalls) >= 0)  # stored descending-threshold


def test_pr_curve_endpoint_invariants():
    rng = np.random.default_rng(1)
    scores = rng.normal(size=300)
    labels = (rng.random(300) < 0.25).astype(int)
    labels[:2] = 1
    curve = pr_curve(scores, labels)
    assert curve.recalls[-1] == 1.0
    assert curve.precisions[-1] == labels.mean()
    # counts at any threshold partition the sample
    t = np.median(scores)
    tp, fp, fn, tn = oracles.confusion_at_threshold(scores, labels, t)
    assert tp + fn == labels.sum()
    assert fp + tn == len(labels) - labels.sum()


def test_pr_auc_invariant_under_monotone_transform():
    rng = np.random.default_rng(2)
    scores = rng.random(200)
    labels = (rng.random(200) < 0.4).astype(int)
    labels[0] = 1
    base = pr_curve(scores, labels)
    for transform in (lambda s: 2 * s + 1, lambda s: s**3, lambda s: 1 / (1 + np.exp(-s))):
        other = pr_curve(transform(scores), labels)
        assert np.array_equal(base.precisions, other.precisions)
        assert np.array_equal(base.recalls, other.recalls)
        assert abs(base.auc - other.auc) < 1e-12


def test_pr_curve_requires_positives():
    with pytest.raises(ValueError):
        pr_curve(np.array([0.1, 0.2]), np.array([0, 0]))


def test_response_map_composition():
    rng = np.random.default_rng(3)
    img = EventImage(rng.random((6, 7)).astype(np.float32))
    model = StumpModel(threshold=0.5, polarity=1)
    rmap = response_map(model, img)
    assert rmap.shape == (6, 7)
    assert rmap.min() >= 0.0 and rmap.max() <= 1.0

    from larseg.features import extract_descriptor

    flat = model.predict_proba(extract_descriptor(img).values)
    assert np.array_equal(rmap.ravel(), flat)


def test_threshold_mask():
    pmap = np.array([[0.0, 0.4], [0.5, 1.0]])
    assert np.array_equal(threshold_mask(pmap, 0.0).labels, np.ones((2, 2), np.uint8))
    assert np.array_equal(threshold_mask(pmap, 1.1).labels, np.zeros((2, 2), np.uint8))
    mid = threshold_mask(pmap, 0.5)
    assert np.array_equal(mid.labels, np.array([[0, 0], [1, 1]], np.uint8))

    counts = [int(threshold_mask(pmap, t).labels.sum()) for t in np.linspace(0, 1.05, 22)]
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_pr_curve_csv_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    scores = rng.random(50)
    labels = (rng.random(50) < 0.5).astype(int)
    labels[0] = 1
    curve = pr_curve(scores, labels)
    path = tmp_path / "curve.csv"
    save_pr_curve(curve, path)
    text = path.read_text()
    assert text.startswith("threshold,precision,recall\n")
    assert "# auc=" in text
    back = load_pr_curve(path)
    assert np.array_equal(back.thresholds, curve.thresholds)
    assert np.array_equal(back.precisions, curve.precisions)
    assert np.array_equal(back.recalls, curve.recalls)
    assert back.auc == curve.auc
