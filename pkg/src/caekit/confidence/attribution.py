"""Attribution-based confidence: prediction stability under targeted
perturbation.

Features that contributed most to a prediction are the most likely to
be reset to their baseline value when sampling perturbed inputs; the
confidence is the fraction of samples on which the predicted class
survives. Sampling is driven by numpy's default generator seeded
explicitly, so a fixed seed reproduces results bit for bit.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

COMPLETENESS_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Per-class linear scorer: score_i(x) = w_i . x + bias_i.

    Prediction is the highest-scoring class; ties go to the class
    listed first.
    """

    classes: tuple[str, ...]
    weights: np.ndarray = field(repr=False)
    biases: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "biases", np.asarray(self.biases, dtype=float))
        if self.weights.ndim != 2:
            raise ValueError("weights must be a classes-by-features matrix")
        if self.weights.shape[0] != len(self.classes):
            raise ValueError("one weight row per class required")
        if self.biases.shape != (len(self.classes),):
            raise ValueError("one bias per class required")

    def scores(self, x: Sequence[float]) -> np.ndarray:
        return self.weights @ np.asarray(x, dtype=float) + self.biases

    def batch_scores(self, xs: np.ndarray) -> np.ndarray:
        return xs @ self.weights.T + self.biases

    def predicted_index(self, x: Sequence[float]) -> int:
        return int(np.argmax(self.scores(x)))

    def predict(self, x: Sequence[float]) -> str:
        return self.classes[self.predicted_index(x)]


def linear_attributions(
    model: LinearModel, x: Sequence[float], baseline: Sequence[float]
) -> np.ndarray:
    """Exact per-feature contributions for a linear model.

    For the class the model picks at x, feature j contributes
    w_j * (x_j - baseline_j); these sum to the score difference between
    x and the baseline exactly.
    """
    xv = np.asarray(x, dtype=float)
    bv = np.asarray(baseline, dtype=float)
    return model.weights[model.predicted_index(xv)] * (xv - bv)


def replacement_probabilities(
    attributions: Sequence[float], x: Sequence[float], baseline: Sequence[float]
) -> np.ndarray:
    """Per-feature probability of resetting a feature to its baseline.

    Proportional to the attribution per unit of feature movement,
    normalised to sum to one. A feature already at its baseline gets
    probability zero, replacement there being a no-op; when every
    feature is at that point the result is all zeros.
    """
    a = np.asarray(attributions, dtype=float)
    diff = np.asarray(x, dtype=float) - np.asarray(baseline, dtype=float)
    rates = np.zeros_like(a)
    np.divide(np.abs(a), np.abs(diff), out=rates, where=diff != 0)
    total = rates.sum()
    if total == 0:
        return rates
    return rates / total


def abc_confidence(
    model: LinearModel | Callable[[np.ndarray], Sequence[float]],
    x: Sequence[float],
    baseline: Sequence[float],
    n_samples: int,
    seed: int,
    attribution: Callable[[Sequence[float], Sequence[float]], Sequence[float]] | None = None,
) -> float:
    """Fraction of perturbed inputs that keep the model's prediction.

    Perturbation resets each feature to its baseline value
    independently, with probability proportional to that feature's
    attribution rate. The attribution callable receives (x, baseline);
    when omitted the exact linear attribution is used, which requires a
    LinearModel. Attributions must satisfy completeness: they sum to
    the predicted-class score difference between x and the baseline.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    xv = np.asarray(x, dtype=float)
    bv = np.asarray(baseline, dtype=float)
    if xv.shape != bv.shape:
        raise ValueError("input and baseline shapes differ")

    if isinstance(model, LinearModel):
        def score_batch(xs: np.ndarray) -> np.ndarray:
            return model.batch_scores(xs)
    else:
        def score_batch(xs: np.ndarray) -> np.ndarray:
            return np.asarray([model(row) for row in xs], dtype=float)

    scores_x = score_batch(xv[None, :])[0]
    predicted = int(np.argmax(scores_x))

    if attribution is None:
        if not isinstance(model, LinearModel):
            raise ValueError("exact attribution needs a LinearModel")
        attributions = linear_attributions(model, xv, bv)
    else:
        attributions = np.asarray(attribution(xv, bv), dtype=float)
    score_gap = scores_x[predicted] - score_batch(bv[None, :])[0][predicted]
    if abs(attributions.sum() - score_gap) > COMPLETENESS_TOLERANCE:
        raise ValueError(
            "attributions violate completeness: "
            f"sum {attributions.sum()!r} vs score difference {score_gap!r}"
        )

    probabilities = replacement_probabilities(attributions, xv, bv)
    if probabilities.sum() == 0:
        return 1.0

    rng = np.random.default_rng(seed)
    reset = rng.random((n_samples, xv.shape[0])) < probabilities
    samples = np.where(reset, bv, xv)
    sample_predictions = np.argmax(score_batch(samples), axis=1)
    return float(np.mean(sample_predictions == predicted))


__all__ = [
    "COMPLETENESS_TOLERANCE",
    "LinearModel",
    "linear_attributions",
    "replacement_probabilities",
    "abc_confidence",
]
