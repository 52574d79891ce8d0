"""Dawid-Skene EM aggregation of redundant categorical annotations.

The model: each item has a latent true category; each annotator has a
confusion matrix (rows: true category, columns: observed label) and labels
are conditionally independent given the truth.  EM alternates estimating
item posteriors (E-step) with re-estimating priors and confusion matrices
(M-step), starting from a majority vote.

Additive smoothing ``eps`` on priors and confusion rows is a Dirichlet(1+eps)
MAP estimate, which keeps sparse data away from zero-probability lock-in and
makes the optimized objective - reported in ``Posterior.objectives`` - the
data log-likelihood plus the (constant-free) log-prior terms.  That MAP
objective is non-decreasing across iterations by the usual EM argument; the
plain data log-likelihood is reported alongside it.

Items whose posterior confidence clears a threshold are accepted
automatically; the rest are routed to an expert.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LabelMatrix",
    "Posterior",
    "RoutingResult",
    "AggregateError",
    "dawid_skene",
    "route",
]

DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-7
DEFAULT_SMOOTHING = 1e-6
DEFAULT_THRESHOLD = 0.9


class AggregateError(ValueError):
    pass


@dataclass
class LabelMatrix:
    """Sparse (item, annotator) -> category labels.

    ``categories`` may list categories beyond those observed; a category
    never observed is harmless thanks to smoothing.
    """

    items: tuple[str, ...]
    annotators: tuple[str, ...]
    categories: tuple[str, ...]
    labels: dict = field(default_factory=dict)

    @classmethod
    def from_triples(cls, triples, categories=None) -> "LabelMatrix":
        """Build from (item_id, annotator_id, label) triples."""
        labels: dict = {}
        items: dict = {}
        annotators: dict = {}
        seen = set()
        for item, annotator, label in triples:
            item, annotator, label = str(item), str(annotator), str(label)
            items.setdefault(item)
            annotators.setdefault(annotator)
            seen.add(label)
            labels[(item, annotator)] = label
        cats = tuple(sorted(seen | set(categories or ())))
        matrix = cls(tuple(items), tuple(annotators), cats, labels)
        matrix.validate()
        return matrix

    def validate(self) -> None:
        if not self.items or not self.categories:
            raise AggregateError("need at least one item and one category")
        labeled = {item for item, _ in self.labels}
        missing = [item for item in self.items if item not in labeled]
        if missing:
            raise AggregateError(f"items without any label: {missing[:5]}")
        bad = sorted({lab for lab in self.labels.values()} - set(self.categories))
        if bad:
            raise AggregateError(f"labels outside the category set: {bad[:5]}")


@dataclass
class Posterior:
    items: tuple[str, ...]
    categories: tuple[str, ...]
    probs: np.ndarray  # (n_items, n_categories), rows sum to 1
    priors: np.ndarray  # (n_categories,)
    confusion: dict  # annotator -> (n_categories, n_categories) row-stochastic
    log_likelihoods: tuple[float, ...]  # data log-likelihood per iteration
    objectives: tuple[float, ...]  # smoothed MAP objective per iteration
    converged: bool

    def label(self, item: str) -> tuple[str, float]:
        """Most probable category and its confidence for one item."""
        row = self.probs[self.items.index(item)]
        idx = int(np.argmax(row))  # ties resolve to the lexicographically first
        return self.categories[idx], float(row[idx])


@dataclass(frozen=True)
class RoutingResult:
    """Confidence routing: auto-accepted items vs. items for expert review."""

    accepted: dict
    escalated: dict
    threshold: float


def _majority_init(matrix: LabelMatrix, cat_index: dict) -> np.ndarray:
    n_items, n_cats = len(matrix.items), len(matrix.categories)
    probs = np.zeros((n_items, n_cats))
    votes: dict[str, Counter] = {item: Counter() for item in matrix.items}
    for (item, _), label in matrix.labels.items():
        votes[item][label] += 1
    for i, item in enumerate(matrix.items):
        counts = votes[item]
        top = max(counts.values())
        # Ties go to the lexicographically smallest category (categories are
        # sorted, so the first hit wins).
        winner = next(c for c in matrix.categories if counts.get(c, 0) == top)
        probs[i, cat_index[winner]] = 1.0
    return probs


def dawid_skene(
    matrix: LabelMatrix,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    smoothing: float = DEFAULT_SMOOTHING,
) -> Posterior:
    """Run EM until the objective moves less than ``tol`` or ``max_iters``.

    Deterministic given the inputs: categories and annotators are processed
    in sorted order and the initialization is a deterministic majority vote.
    """
    matrix.validate()
    if max_iters < 1:
        raise AggregateError("max_iters must be at least 1")
    categories = tuple(sorted(matrix.categories))
    annotators = tuple(sorted(matrix.annotators))
    cat_index = {c: k for k, c in enumerate(categories)}
    item_index = {it: i for i, it in enumerate(matrix.items)}
    n_items, n_cats = len(matrix.items), len(categories)

    # Per-annotator observation arrays: which items they labeled, with what.
    by_annotator: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for annotator in annotators:
        rows = [
            (item_index[item], cat_index[label])
            for (item, ann), label in matrix.labels.items()
            if ann == annotator
        ]
        rows.sort()
        if rows:
            idx = np.array([r[0] for r in rows], dtype=int)
            obs = np.array([r[1] for r in rows], dtype=int)
            by_annotator[annotator] = (idx, obs)

    probs = _majority_init(matrix, cat_index)
    log_likelihoods: list[float] = []
    objectives: list[float] = []
    converged = False

    for _ in range(max_iters):
        # M-step: MAP priors and confusion matrices from current posteriors.
        priors = probs.sum(axis=0) + smoothing
        priors /= priors.sum()
        confusion: dict[str, np.ndarray] = {}
        for annotator, (idx, obs) in by_annotator.items():
            counts = np.zeros((n_cats, n_cats))
            np.add.at(counts.T, obs, probs[idx])
            counts += smoothing
            confusion[annotator] = counts / counts.sum(axis=1, keepdims=True)

        # E-step (in log space) plus the likelihood bookkeeping.
        log_post = np.tile(np.log(priors), (n_items, 1))
        for annotator, (idx, obs) in by_annotator.items():
            log_post[idx] += np.log(confusion[annotator][:, obs]).T
        row_max = log_post.max(axis=1, keepdims=True)
        log_norm = row_max[:, 0] + np.log(
            np.exp(log_post - row_max).sum(axis=1)
        )
        probs = np.exp(log_post - log_norm[:, None])

        data_ll = float(log_norm.sum())
        log_prior_terms = smoothing * (
            float(np.log(priors).sum())
            + sum(float(np.log(c).sum()) for c in confusion.values())
        )
        log_likelihoods.append(data_ll)
        objectives.append(data_ll + log_prior_terms)
        if len(objectives) > 1 and abs(objectives[-1] - objectives[-2]) < tol:
            converged = True
            break

    return Posterior(
        items=matrix.items,
        categories=categories,
        probs=probs,
        priors=priors,
        confusion=confusion,
        log_likelihoods=tuple(log_likelihoods),
        objectives=tuple(objectives),
        converged=converged,
    )


def route(posterior: Posterior, threshold: float = DEFAULT_THRESHOLD) -> RoutingResult:
    """Partition items by posterior confidence.

    Items whose top posterior is at least ``threshold`` are accepted with
    that label; the remainder escalate to expert review.  Both mappings are
    ``item -> (label, confidence)``.
    """
    if not 0 < threshold <= 1:
        raise AggregateError(f"threshold must be in (0, 1], got {threshold}")
    accepted: dict = {}
    escalated: dict = {}
    for item in posterior.items:
        label, confidence = posterior.label(item)
        bucket = accepted if confidence >= threshold else escalated
        bucket[item] = (label, confidence)
    return RoutingResult(accepted, escalated, threshold)
