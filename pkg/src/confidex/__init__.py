"""Confidence metrics for probabilistic classifiers.

The package measures how confident a classifier's predicted distributions
are (entropy score), how structured its average errors are (probabilistic
confusion matrix and purity), and ships Bernoulli/multinomial Naive Bayes
text models with complement variants whose posteriors are provably less
concentrated. A sweep harness reproduces accuracy-versus-confidence
experiments; an HTTP service and CLI expose the same operations.
"""

from .classifier import (
    EvalReport,
    TextClassifier,
    classifier_from_document,
    classifier_to_document,
    evaluate_classifier,
    fit_text_classifier,
    load_classifier,
    predict_texts,
    records_for,
    save_classifier,
)
from .corpora import (
    LabeledCorpus,
    filter_by_support_threshold,
    load_csv_corpus,
    load_directory_corpus,
    make_synthetic_corpus,
    restrict_to_classes,
    subsample_balanced,
    subsample_ratios,
    train_test_split,
)
from .errors import ConfidexError, ConfigError, DataError, InvalidDistributionError, ModelError
from .harness import (
    CorpusSource,
    SweepConfig,
    SweepRow,
    emit_csv,
    emit_plot_data,
    parse_config_file,
    run_sweep,
)
from .metrics import (
    PredictionRecord,
    ProbConfusionMatrix,
    accuracy,
    entropy_score,
    hard_confusion_matrix,
    prob_confusion_matrix,
    purity,
)
from .models import (
    MODEL_KINDS,
    BernoulliNB,
    ComplementBernoulliNB,
    ComplementMultinomialNB,
    FeatureMatrix,
    MultinomialNB,
    feature_mode,
    fit_bernoulli,
    fit_complement_bernoulli,
    fit_complement_multinomial,
    fit_model,
    fit_multinomial,
    normalize_log_scores,
    predict,
    predict_bernoulli,
    predict_complement_bernoulli,
    predict_complement_multinomial,
    predict_multinomial,
    predict_proba,
)
from .simplex import Distribution, complement_map, complement_map_rows, entropy, entropy_of_rows, uniform, vertex
from .text import Vocabulary, binarize, build_vocabulary, tokenize, vectorize, vectorize_rows

__version__ = "0.1.0"

__all__ = [
    "BernoulliNB",
    "ComplementBernoulliNB",
    "ComplementMultinomialNB",
    "ConfidexError",
    "ConfigError",
    "CorpusSource",
    "DataError",
    "Distribution",
    "EvalReport",
    "FeatureMatrix",
    "InvalidDistributionError",
    "LabeledCorpus",
    "MODEL_KINDS",
    "ModelError",
    "MultinomialNB",
    "PredictionRecord",
    "ProbConfusionMatrix",
    "SweepConfig",
    "SweepRow",
    "TextClassifier",
    "Vocabulary",
    "accuracy",
    "binarize",
    "build_vocabulary",
    "classifier_from_document",
    "classifier_to_document",
    "complement_map",
    "complement_map_rows",
    "emit_csv",
    "emit_plot_data",
    "entropy",
    "entropy_of_rows",
    "entropy_score",
    "evaluate_classifier",
    "feature_mode",
    "filter_by_support_threshold",
    "fit_bernoulli",
    "fit_complement_bernoulli",
    "fit_complement_multinomial",
    "fit_model",
    "fit_multinomial",
    "fit_text_classifier",
    "hard_confusion_matrix",
    "load_classifier",
    "load_csv_corpus",
    "load_directory_corpus",
    "make_synthetic_corpus",
    "normalize_log_scores",
    "parse_config_file",
    "predict",
    "predict_bernoulli",
    "predict_complement_bernoulli",
    "predict_complement_multinomial",
    "predict_multinomial",
    "predict_proba",
    "predict_texts",
    "prob_confusion_matrix",
    "records_for",
    "purity",
    "restrict_to_classes",
    "run_sweep",
    "save_classifier",
    "subsample_balanced",
    "subsample_ratios",
    "tokenize",
    "train_test_split",
    "uniform",
    "vectorize",
    "vectorize_rows",
    "vertex",
]
