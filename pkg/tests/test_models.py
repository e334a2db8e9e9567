"""Model fitting, prediction, and agreement with direct-probability references."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import sparse

from confidex import (
    BernoulliNB,
    ComplementMultinomialNB,
    ConfigError,
    DataError,
    FeatureMatrix,
    ModelError,
    MultinomialNB,
    fit_bernoulli,
    fit_complement_bernoulli,
    fit_complement_multinomial,
    fit_model,
    fit_multinomial,
    normalize_log_scores,
    predict,
    predict_bernoulli,
    predict_multinomial,
    predict_proba,
)
from oracles import FIT_ERROR, OK, PREDICT_ERROR, nb_reference_model, nb_reference_posterior

# Documents: {w1}, {w1,w2} labeled A; {w2}, {} labeled B.
FOUR_DOC_X = np.array([[1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
FOUR_DOC_Y = np.array([0, 0, 1, 1])


def four_doc_matrix():
    return FeatureMatrix(values=FOUR_DOC_X, labels=FOUR_DOC_Y, n_classes=2)


class TestFeatureMatrix:
    def test_dense_and_sparse_agree(self):
        dense = FeatureMatrix(values=FOUR_DOC_X, labels=FOUR_DOC_Y, n_classes=2)
        sp = FeatureMatrix(values=sparse.csr_array(FOUR_DOC_X), labels=FOUR_DOC_Y, n_classes=2)
        assert dense.n_docs == sp.n_docs == 4
        assert dense.vocab_size == sp.vocab_size == 2
        assert dense.class_counts().tolist() == sp.class_counts().tolist() == [2, 2]
        assert dense.is_binary() and sp.is_binary()

    def test_rejects_negative_and_non_finite(self):
        with pytest.raises(DataError):
            FeatureMatrix(values=np.array([[-1.0, 0.0]]), labels=[0], n_classes=1)
        with pytest.raises(DataError):
            FeatureMatrix(values=np.array([[np.nan, 0.0]]), labels=[0], n_classes=1)

    def test_rejects_label_shape_and_range(self):
        with pytest.raises(DataError):
            FeatureMatrix(values=FOUR_DOC_X, labels=[0, 1], n_classes=2)
        with pytest.raises(DataError):
            FeatureMatrix(values=FOUR_DOC_X, labels=[0, 0, 1, 2], n_classes=2)

    def test_counts_are_not_binary(self):
        fm = FeatureMatrix(values=np.array([[2.0, 0.0]]), labels=[0], n_classes=1)
        assert not fm.is_binary()


class TestFitBernoulli:
    def test_unsmoothed_estimates_are_exact_count_ratios(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=0.0)
        assert model.phi.tolist() == [[1.0, 0.0], [0.5, 0.5]]
        assert model.psi.tolist() == [0.5, 0.5]

    def test_smoothed_estimates(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=1.0)
        assert model.phi.tolist() == [[0.75, 0.25], [0.5, 0.5]]
        # priors never get smoothed
        assert model.psi.tolist() == [0.5, 0.5]

    def test_rejects_count_values(self):
        fm = FeatureMatrix(values=np.array([[2.0, 1.0], [0.0, 1.0]]), labels=[0, 1], n_classes=2)
        with pytest.raises(DataError, match="0/1"):
            fit_bernoulli(fm, alpha=1.0)

    def test_rejects_negative_alpha(self):
        with pytest.raises(ConfigError):
            fit_bernoulli(four_doc_matrix(), alpha=-0.5)

    def test_rejects_single_class(self):
        fm = FeatureMatrix(values=np.array([[1.0], [0.0]]), labels=[0, 0], n_classes=1)
        with pytest.raises(DataError):
            fit_bernoulli(fm, alpha=1.0)

    def test_rejects_missing_class(self):
        fm = FeatureMatrix(values=np.array([[1.0], [0.0]]), labels=[0, 0], n_classes=2)
        with pytest.raises(DataError, match="class 1"):
            fit_bernoulli(fm, alpha=1.0)


class TestFitComplementBernoulli:
    def test_smoothed_estimates(self):
        model = fit_complement_bernoulli(four_doc_matrix(), alpha=1.0)
        assert model.tilde_psi.tolist() == [2.0, 2.0]
        assert model.tilde_phi.tolist() == [[4.0, 4.0 / 3.0], [2.0, 2.0]]

    def test_unsmoothed_needs_every_feature_outside_every_class(self):
        # w1 never occurs outside class A, so alpha = 0 is undefined.
        with pytest.raises(ModelError, match="alpha > 0"):
            fit_complement_bernoulli(four_doc_matrix(), alpha=0.0)

    def test_unsmoothed_ok_when_spread(self):
        X = np.array([[1, 0], [1, 1], [1, 1], [0, 1]], dtype=float)
        model = fit_complement_bernoulli(
            FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2), alpha=0.0
        )
        # tilde values stay >= 1 without smoothing
        assert np.all(model.tilde_phi >= 1.0)


class TestFitMultinomial:
    def test_smoothed_estimates(self):
        X = np.array([[2, 1, 0], [1, 0, 1], [0, 3, 1], [0, 1, 2]], dtype=float)
        model = fit_multinomial(FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2), alpha=1.0)
        theta = np.exp(model.log_theta)
        assert_allclose(theta[:, 0], [0.5, 0.25, 0.25], atol=1e-15)
        assert_allclose(theta[:, 1], [0.1, 0.5, 0.4], atol=1e-15)
        assert_allclose(np.exp(model.log_priors), [0.5, 0.5], atol=1e-15)

    def test_unsmoothed_zero_columns_stay_zero(self):
        X = np.array([[2.0, 1.0], [0.0, 3.0]], dtype=float)
        model = fit_multinomial(FeatureMatrix(values=X, labels=[0, 1], n_classes=2), alpha=0.0)
        assert np.isneginf(model.log_theta[0, 1])

    def test_unsmoothed_needs_words_in_every_class(self):
        X = np.array([[2.0, 1.0], [0.0, 0.0]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 1], n_classes=2)
        with pytest.raises(ModelError, match="alpha > 0"):
            fit_multinomial(fm, alpha=0.0)

    def test_word_probabilities_sum_to_one(self):
        rng = np.random.default_rng(42)
        X = rng.integers(0, 4, size=(20, 6)).astype(float)
        fm = FeatureMatrix(values=X, labels=rng.integers(0, 3, size=20), n_classes=3)
        model = fit_multinomial(fm, alpha=0.5)
        assert_allclose(np.exp(model.log_theta).sum(axis=0), 1.0, atol=1e-12)


class TestFitComplementMultinomial:
    def test_two_class_parameters_swap(self):
        # With two classes the complement of one class IS the other.
        X = np.array([[2, 1, 0], [1, 0, 1], [0, 3, 1], [0, 1, 2]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2)
        mnb = fit_multinomial(fm, alpha=1.0)
        cnb = fit_complement_multinomial(fm, alpha=1.0)
        theta_hat = np.exp(-cnb.weights)
        assert_allclose(theta_hat[:, 0], np.exp(mnb.log_theta)[:, 1], atol=1e-12)
        assert_allclose(theta_hat[:, 1], np.exp(mnb.log_theta)[:, 0], atol=1e-12)

    def test_unsmoothed_needs_words_outside_each_class(self):
        X = np.array([[2.0, 0.0], [0.0, 3.0]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 1], n_classes=2)
        with pytest.raises(ModelError, match="alpha > 0"):
            fit_complement_multinomial(fm, alpha=0.0)

    def test_weight_normalization_unit_columns(self):
        X = np.array([[2, 1, 0], [1, 0, 1], [0, 3, 1], [0, 1, 2]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2)
        plain = fit_complement_multinomial(fm, alpha=1.0)
        normed = fit_complement_multinomial(fm, alpha=1.0, normalize_weights=True)
        assert not plain.normalized and normed.normalized
        assert_allclose(np.linalg.norm(normed.weights, axis=0), 1.0, atol=1e-12)
        # normalization rescales columns without changing their direction
        for c in range(2):
            assert_allclose(
                normed.weights[:, c], plain.weights[:, c] / np.linalg.norm(plain.weights[:, c]), atol=1e-12
            )

    def test_single_feature_weights_are_zero(self):
        X = np.array([[2.0], [3.0]])
        fm = FeatureMatrix(values=X, labels=[0, 1], n_classes=2)
        model = fit_complement_multinomial(fm, alpha=1.0, normalize_weights=True)
        assert_allclose(model.weights, 0.0, atol=1e-15)


class TestPrediction:
    def test_two_class_complement_bernoulli_is_the_word_posterior(self):
        # One present feature, two classes: the posterior must equal the
        # share of that feature's documents in each class.
        X = np.array([[1, 0], [1, 1], [1, 1], [0, 1]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2)
        model = fit_complement_bernoulli(fm, alpha=0.0)
        out = predict(model, [1.0, 0.0])
        assert_allclose(out.probs, [2 / 3, 1 / 3], atol=1e-12)

    def test_two_class_complement_multinomial_equals_multinomial(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            X = rng.integers(0, 4, size=(8, 4)).astype(float)
            labels = np.array([0, 0, 0, 0, 1, 1, 1, 1])
            fm = FeatureMatrix(values=X, labels=labels, n_classes=2)
            mnb = fit_multinomial(fm, alpha=1.0)
            cnb = fit_complement_multinomial(fm, alpha=1.0)
            query = rng.integers(0, 3, size=4).astype(float)
            assert_allclose(predict(cnb, query).probs, predict(mnb, query).probs, atol=1e-12)

    def test_unsmoothed_bernoulli_can_rule_out_classes(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=0.0)
        out = predict_bernoulli(model, [1.0, 0.0])
        assert_allclose(out.probs, [1.0, 0.0], atol=0)

    def test_unsmoothed_contradictory_evidence_is_an_error(self):
        # w1 demands class A, absence of w1's companion pattern demands B.
        X = np.array([[1, 1], [1, 1], [0, 0], [0, 0]], dtype=float)
        fm = FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2)
        model = fit_bernoulli(fm, alpha=0.0)
        with pytest.raises(ModelError, match="posterior is undefined"):
            predict(model, [1.0, 0.0])

    def test_unsmoothed_multinomial_unseen_word_everywhere_is_an_error(self):
        X = np.array([[2.0, 0.0], [0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
        fm = FeatureMatrix(values=X, labels=[0, 0, 1, 1], n_classes=2)
        with np.errstate(divide="ignore"):
            model = fit_multinomial(fm, alpha=0.0)
        with pytest.raises(ModelError):
            predict_multinomial(model, [0.0, 1.0])

    def test_batch_matches_singles(self):
        rng = np.random.default_rng(0)
        X = (rng.random((12, 5)) < 0.4).astype(float)
        labels = rng.integers(0, 3, size=12)
        labels[:3] = [0, 1, 2]
        fm = FeatureMatrix(values=X, labels=labels, n_classes=3)
        for fitter in (fit_bernoulli, fit_complement_bernoulli):
            model = fitter(fm, alpha=1.0)
            queries = (rng.random((6, 5)) < 0.4).astype(float)
            batch = predict_proba(model, queries)
            for i in range(6):
                assert_allclose(predict(model, queries[i]).probs, batch[i], atol=1e-15)

    def test_sparse_and_dense_inputs_agree(self):
        rng = np.random.default_rng(3)
        X = (rng.random((10, 6)) < 0.5).astype(float)
        labels = rng.integers(0, 2, size=10)
        labels[:2] = [0, 1]
        fm_dense = FeatureMatrix(values=X, labels=labels, n_classes=2)
        fm_sparse = FeatureMatrix(values=sparse.csr_array(X), labels=labels, n_classes=2)
        queries = (rng.random((5, 6)) < 0.5).astype(float)
        for alpha in (0.0, 1.0):
            try:
                model_d = fit_bernoulli(fm_dense, alpha=alpha)
                model_s = fit_bernoulli(fm_sparse, alpha=alpha)
            except ModelError:
                continue
            try:
                dense_out = predict_proba(model_d, queries)
            except ModelError:
                with pytest.raises(ModelError):
                    predict_proba(model_s, sparse.csr_array(queries))
                continue
            assert_allclose(predict_proba(model_s, sparse.csr_array(queries)), dense_out, atol=1e-12)

    def test_rejects_wrong_width(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=1.0)
        with pytest.raises(DataError, match="vocabulary"):
            predict(model, [1.0, 0.0, 1.0])

    def test_rejects_non_binary_for_presence_models(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=1.0)
        with pytest.raises(DataError):
            predict(model, [2.0, 0.0])

    def test_rejects_negative_counts(self):
        X = np.array([[2.0, 1.0], [1.0, 3.0]])
        model = fit_multinomial(FeatureMatrix(values=X, labels=[0, 1], n_classes=2), alpha=1.0)
        with pytest.raises(DataError):
            predict(model, [-1.0, 2.0])

    def test_typed_predict_rejects_other_kinds(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=1.0)
        with pytest.raises(ConfigError):
            predict_multinomial(model, [1.0, 0.0])

    def test_fit_model_dispatch(self):
        fm = four_doc_matrix()
        assert fit_model("bernoulli", fm, 1.0).kind == "bernoulli"
        with pytest.raises(ConfigError):
            fit_model("gaussian", fm, 1.0)


class TestNormalizeLogScores:
    def test_shift_invariance(self):
        rng = np.random.default_rng(42)
        scores = rng.normal(size=(30, 4)) * 50
        base = normalize_log_scores(scores)
        assert_allclose(normalize_log_scores(scores + 123.456), base, atol=1e-12)
        assert_allclose(normalize_log_scores(scores - 1e6), base, atol=1e-12)

    def test_handles_magnitudes_far_beyond_exp_range(self):
        out = normalize_log_scores(np.array([[-1e6, -1e6 + np.log(3.0)]]))
        assert_allclose(out, [[0.25, 0.75]], atol=1e-12)

    def test_neg_inf_becomes_zero_mass(self):
        out = normalize_log_scores(np.array([[0.0, -np.inf, 0.0]]))
        assert_allclose(out, [[0.5, 0.0, 0.5]], atol=0)

    def test_all_neg_inf_is_an_error(self):
        with pytest.raises(ModelError):
            normalize_log_scores(np.array([[-np.inf, -np.inf]]))

    def test_nan_and_pos_inf_are_errors(self):
        with pytest.raises(ModelError):
            normalize_log_scores(np.array([[np.nan, 0.0]]))
        with pytest.raises(ModelError):
            normalize_log_scores(np.array([[np.inf, 0.0]]))


class TestModelValidation:
    def test_bernoulli_rejects_out_of_range_phi(self):
        with pytest.raises(ModelError):
            BernoulliNB(phi=np.array([[1.5, 0.2]]), psi=np.array([0.5, 0.5]), alpha=1.0)

    def test_bernoulli_rejects_non_unit_priors(self):
        with pytest.raises(ModelError):
            BernoulliNB(phi=np.array([[0.5, 0.2]]), psi=np.array([0.7, 0.7]), alpha=1.0)

    def test_multinomial_rejects_positive_log_probs(self):
        with pytest.raises(ModelError):
            MultinomialNB(
                log_theta=np.array([[0.5, -0.5]]), log_priors=np.log([0.5, 0.5]), alpha=1.0
            )

    def test_multinomial_rejects_non_normalized_columns(self):
        with pytest.raises(ModelError):
            MultinomialNB(
                log_theta=np.log([[0.5, 0.4], [0.2, 0.2]]), log_priors=np.log([0.5, 0.5]), alpha=1.0
            )

    def test_complement_multinomial_rejects_negative_weights(self):
        with pytest.raises(ModelError):
            ComplementMultinomialNB(
                weights=np.array([[-0.5, 0.2]]), log_priors=np.log([0.5, 0.5]), alpha=1.0
            )

    def test_parameters_read_only(self):
        model = fit_bernoulli(four_doc_matrix(), alpha=1.0)
        with pytest.raises(ValueError):
            model.phi[0, 0] = 0.1


def _oracle_check(kind, docs, labels, n_classes, alpha, queries, exact=False):
    """Assert the implementation and the reference resolve identically."""
    fm = FeatureMatrix(values=np.array(docs, dtype=float), labels=labels, n_classes=n_classes)
    status, ref = nb_reference_model(kind, docs, labels, n_classes, alpha, exact=exact)
    if status == FIT_ERROR:
        with pytest.raises(ModelError):
            fit_model(kind, fm, alpha)
        return
    model = fit_model(kind, fm, alpha)
    for query in queries:
        q_status, expected = nb_reference_posterior(ref, query)
        if q_status == PREDICT_ERROR:
            with pytest.raises(ModelError):
                predict(model, np.array(query, dtype=float))
        else:
            out = predict(model, np.array(query, dtype=float))
            assert_allclose(out.probs, expected, atol=1e-10)


ALL_KINDS = ("bernoulli", "complement_bernoulli", "multinomial", "complement_multinomial")


class TestReferenceAgreement:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("alpha", [0.0, 1.0, 0.5])
    def test_four_doc_corpus(self, kind, alpha):
        docs = [[1, 0], [1, 1], [0, 1], [0, 0]]
        queries = [[0, 0], [0, 1], [1, 0], [1, 1]]
        _oracle_check(kind, docs, [0, 0, 1, 1], 2, alpha, queries)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_three_class_corpus_exact_rationals(self, kind):
        docs = [[1, 0, 1], [1, 1, 0], [0, 1, 1], [0, 0, 1]]
        queries = [[1, 0, 0], [1, 1, 1], [0, 0, 0]]
        for alpha in (0.0, 1.0):
            _oracle_check(kind, docs, [0, 1, 2, 2], 3, alpha, queries, exact=True)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_random_small_corpora(self, kind):
        rng = np.random.default_rng(42)
        for _ in range(40):
            n_classes = int(rng.integers(2, 4))
            n_features = int(rng.integers(1, 4))
            n_docs = int(rng.integers(n_classes, 7))
            docs = rng.integers(0, 2, size=(n_docs, n_features)).tolist()
            labels = list(range(n_classes)) + rng.integers(0, n_classes, size=n_docs - n_classes).tolist()
            queries = rng.integers(0, 2, size=(4, n_features)).tolist()
            for alpha in (0.0, 1.0):
                _oracle_check(kind, docs, labels, n_classes, alpha, queries)

    def test_float_reference_matches_exact_reference(self):
        # The float reference is itself validated against exact rationals.
        rng = np.random.default_rng(7)
        for _ in range(10):
            docs = rng.integers(0, 2, size=(4, 2)).tolist()
            labels = [0, 1] + rng.integers(0, 2, size=2).tolist()
            for kind in ALL_KINDS:
                for alpha in (0.0, 1.0):
                    s_float, ref_float = nb_reference_model(kind, docs, labels, 2, alpha)
                    s_exact, ref_exact = nb_reference_model(kind, docs, labels, 2, alpha, exact=True)
                    assert s_float == s_exact
                    if s_float != OK:
                        continue
                    for query in ([0, 0], [1, 0], [1, 1]):
                        q_float, p_float = nb_reference_posterior(ref_float, query)
                        q_exact, p_exact = nb_reference_posterior(ref_exact, query)
                        assert q_float == q_exact
                        if q_float == OK:
                            assert_allclose(p_float, p_exact, atol=1e-13)
