"""Pixel classification toolkit for 2D detector event images.

Pipeline: synthesize or load event images, compute the 42-feature per-pixel
descriptor, assemble event-split datasets under a controlled class ratio,
train a stump / logistic regression / random forest, and evaluate with
precision-recall curves and per-image response maps. A local HTTP service
plus browser tool covers hand labeling.
"""

from .image import (
    EventImage,
    LabelMask,
    load_image,
    load_mask,
    pad_replicate,
    resize_bilinear,
    save_image,
    save_mask,
    to_png,
)
from .features import (
    DOG_SIGMA_PAIRS,
    FEATURE_NAMES,
    N_FEATURES,
    FeatureMatrix,
    difference_of_gaussians,
    extract_descriptor,
    feature_order_checksum,
    feature_planes,
    gaussian_blur,
    hessian_eigen_features,
    prewitt_gradient,
    sliding_stats,
    tensor_eigen_features,
)
from .dataset import (
    LabeledDataset,
    SplitSpec,
    build_dataset,
    downsample_negatives,
    load_dataset,
    save_dataset,
)
from .classifiers import (
    LogRegModel,
    StumpModel,
    TrainConfig,
    feature_importance,
    importance_ranking,
    predict_proba,
    train_forest,
    train_logreg,
    train_stump,
)
from .forest import ForestModel, train_forest_arrays
from .model_io import load_model, save_model
from .eval import (
    ConfusionCounts,
    PRCurve,
    pr_curve,
    precision_recall,
    response_map,
    save_pr_curve,
    threshold_mask,
)
from .synth import SynthConfig, generate_corpus, generate_event, load_corpus

__version__ = "0.1.0"
