import math
import random

import numpy as np
import pytest

from simpkit.aggregate import (
    AggregateError,
    LabelMatrix,
    dawid_skene,
    route,
)


def make_matrix(triples, categories=None):
    return LabelMatrix.from_triples(triples, categories)


def cyclic_confusion(diag: float, n_cats: int) -> np.ndarray:
    """Planted annotator bias: errors always land on the next category."""
    conf = np.zeros((n_cats, n_cats))
    for c in range(n_cats):
        conf[c, c] = diag
        conf[c, (c + 1) % n_cats] = 1 - diag
    return conf


def synthetic_labels(seed, n_items=200, diags=(0.9, 0.8, 0.6), n_cats=3):
    """The declared synthetic: planted truths, per-annotator confusions."""
    rng = np.random.default_rng(seed)
    cats = [chr(ord("a") + i) for i in range(n_cats)]
    truth = rng.integers(0, n_cats, size=n_items)
    triples = []
    for a, diag in enumerate(diags):
        conf = cyclic_confusion(diag, n_cats)
        for i in range(n_items):
            label = rng.choice(n_cats, p=conf[truth[i]])
            triples.append((f"item{i:03d}", f"ann{a}", cats[label]))
    return [cats[t] for t in truth], triples


def test_unanimous_labels_are_a_fixed_point():
    triples = []
    truth = {}
    for i in range(30):
        label = "yes" if i % 2 else "no"
        truth[f"i{i}"] = label
        for a in range(3):
            triples.append((f"i{i}", f"a{a}", label))
    posterior = dawid_skene(make_matrix(triples))
    for item, label in truth.items():
        got, confidence = posterior.label(item)
        assert got == label
        assert confidence > 0.99


def test_unanimous_agrees_with_majority_vote():
    triples = [("i0", "a0", "x"), ("i0", "a1", "x"), ("i0", "a2", "y"),
               ("i1", "a0", "y"), ("i1", "a1", "y"), ("i1", "a2", "y")]
    posterior = dawid_skene(make_matrix(triples))
    assert posterior.label("i0")[0] == "x"
    assert posterior.label("i1")[0] == "y"


def test_synthetic_recovery():
    truth, triples = synthetic_labels(seed=0)
    posterior = dawid_skene(make_matrix(triples))
    correct = sum(
        posterior.label(f"item{i:03d}")[0] == truth[i] for i in range(len(truth))
    )
    assert correct >= 0.95 * len(truth)


def test_single_annotator_single_item_closed_form():
    eps = 1e-6
    posterior = dawid_skene(
        make_matrix([("i0", "a0", "x")], categories=("x", "y")), max_iters=1,
        smoothing=eps,
    )
    # One EM step from a one-hot start: prior = (1+e)/(1+2e) for the observed
    # category; its confusion row puts (1+e)/(1+2e) on the label while the
    # unobserved category's row stays uniform.
    p_obs = (1 + eps) / (1 + 2 * eps)
    p_other = eps / (1 + 2 * eps)
    score_x = p_obs * p_obs
    score_y = p_other * 0.5
    want_x = score_x / (score_x + score_y)
    got_label, got_conf = posterior.label("i0")
    assert got_label == "x"
    assert got_conf == pytest.approx(want_x, abs=1e-9)


def test_posteriors_are_distributions_at_every_iteration():
    _, triples = synthetic_labels(seed=3, n_items=40)
    matrix = make_matrix(triples)
    for iters in range(1, 6):
        posterior = dawid_skene(matrix, max_iters=iters)
        sums = posterior.probs.sum(axis=1)
        assert np.abs(sums - 1).max() < 1e-9
        assert posterior.probs.min() >= 0


def test_objective_is_monotone():
    _, triples = synthetic_labels(seed=5)
    posterior = dawid_skene(make_matrix(triples))
    diffs = np.diff(posterior.objectives)
    assert (diffs >= -1e-9).all()


def test_annotator_order_does_not_matter():
    _, triples = synthetic_labels(seed=7, n_items=50)
    shuffled = list(triples)
    random.Random(1).shuffle(shuffled)
    post_a = dawid_skene(make_matrix(triples))
    post_b = dawid_skene(make_matrix(shuffled))
    a = {item: post_a.label(item) for item in post_a.items}
    b = {item: post_b.label(item) for item in post_b.items}
    assert set(a) == set(b)
    for item in a:
        assert a[item][0] == b[item][0]
        assert a[item][1] == pytest.approx(b[item][1], abs=1e-9)


def test_confusion_rows_are_stochastic():
    _, triples = synthetic_labels(seed=11, n_items=60)
    posterior = dawid_skene(make_matrix(triples))
    for conf in posterior.confusion.values():
        assert np.abs(conf.sum(axis=1) - 1).max() < 1e-9
    assert abs(posterior.priors.sum() - 1) < 1e-9


def test_route_thresholding():
    truth, triples = synthetic_labels(seed=13)
    posterior = dawid_skene(make_matrix(triples))
    routing = route(posterior, 0.9)
    assert set(routing.accepted) | set(routing.escalated) == set(posterior.items)
    assert not set(routing.accepted) & set(routing.escalated)
    for item, (label, confidence) in routing.accepted.items():
        assert confidence >= 0.9
        assert posterior.label(item) == (label, confidence)
    for item, (label, confidence) in routing.escalated.items():
        assert confidence < 0.9


def test_route_boundary_and_validation():
    triples = [("i0", "a0", "x"), ("i0", "a1", "x"), ("i0", "a2", "x")]
    posterior = dawid_skene(make_matrix(triples, categories=("x", "y")))
    _, confidence = posterior.label("i0")
    assert confidence >= 0.9
    assert "i0" in route(posterior, 0.9).accepted
    assert "i0" in route(posterior, math.nextafter(confidence, 2)).escalated
    with pytest.raises(AggregateError):
        route(posterior, 0.0)
    with pytest.raises(AggregateError):
        route(posterior, 1.5)


def test_strict_threshold_escalates_noisy_items():
    _, triples = synthetic_labels(seed=17)
    posterior = dawid_skene(make_matrix(triples))
    routing = route(posterior, 1.0)
    # Smoothed posteriors never reach exactly 1, so everything escalates.
    assert not routing.accepted


def test_matrix_validation():
    with pytest.raises(AggregateError):
        make_matrix([])
    with pytest.raises(AggregateError):
        LabelMatrix(("i0",), ("a0",), ("y",), {("i0", "a0"): "x"}).validate()
    matrix = make_matrix([("i0", "a0", "x")])
    matrix.items = ("i0", "i1")
    with pytest.raises(AggregateError):
        matrix.validate()


def test_majority_tie_breaks_lexicographically():
    triples = [("i0", "a0", "b"), ("i0", "a1", "a")]
    posterior = dawid_skene(make_matrix(triples), max_iters=1)
    assert posterior.label("i0")[0] == "a"
