"""
Linear least-squares regression classifier.

Targets are one-hot class indicators; weights solve the ridge normal equations
    (X~'X~ + ridge * P) W = X~'Y
with X~ = [1 | X] and P the identity with the bias entry zeroed, so the
intercept is never shrunk. Prediction is the argmax of [1 | x] W.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from errors import InvalidInputError, NumericalRankError
from logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LlsrModel:
    weights: np.ndarray         # (D + 1, C), row 0 = bias
    class_labels: np.ndarray    # (C,) class ids, column order

    @property
    def n_features(self) -> int:
        return self.weights.shape[0] - 1

    @property
    def n_classes(self) -> int:
        return self.weights.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LlsrModel):
            return NotImplemented
        return (np.array_equal(self.weights, other.weights)
                and np.array_equal(self.class_labels, other.class_labels))


def one_hot(labels: np.ndarray, classes: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(classes, labels)
    y = np.zeros((labels.shape[0], classes.shape[0]))
    y[np.arange(labels.shape[0]), idx] = 1.0
    return y


def _augment(x: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(x.shape[0]), x])


def fit(features: np.ndarray, labels: np.ndarray, ridge: float = 1e-4) -> LlsrModel:
    x = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels).reshape(-1)
    if x.ndim != 2 or x.shape[0] != labels.shape[0]:
        raise InvalidInputError(f"Features {x.shape} do not match {labels.shape[0]} labels")
    if ridge < 0:
        raise InvalidInputError(f"ridge must be >= 0, got {ridge}")
    classes = np.unique(labels)
    if classes.size < 2:
        raise InvalidInputError("LLSR needs at least two classes")
    if x.shape[0] < classes.size:
        raise InvalidInputError(f"{x.shape[0]} samples for {classes.size} classes")

    xa = _augment(x)
    y = one_hot(labels, classes)
    gram = xa.T @ xa
    rhs = xa.T @ y
    if ridge > 0:
        penalty = np.full(gram.shape[0], ridge)
        penalty[0] = 0.0
        gram = gram + np.diag(penalty)
        try:
            factor = scipy.linalg.cho_factor(gram, lower=False, check_finite=True)
            weights = scipy.linalg.cho_solve(factor, rhs)
        except np.linalg.LinAlgError as e:
            raise NumericalRankError(f"Ridge system is not positive definite: {e}") from e
    else:
        rank = np.linalg.matrix_rank(xa)
        if rank < xa.shape[1]:
            raise NumericalRankError(
                f"Augmented feature matrix has rank {rank} < {xa.shape[1]}; "
                f"the unregularized system is singular, use ridge > 0"
            )
        weights = scipy.linalg.solve(gram, rhs, assume_a="sym")

    if not np.all(np.isfinite(weights)):
        raise NumericalRankError("LLSR produced non-finite weights; increase ridge")
    logger.debug(f"LLSR fitted: {x.shape[1]} features, {classes.size} classes, ridge={ridge}")
    return LlsrModel(weights=weights, class_labels=classes)


def predict_batch(model: LlsrModel, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise InvalidInputError(f"Expected {model.n_features} features, got shape {x.shape}")
    # row by row: a row scores the same alone or in a batch
    scores = np.array([row @ model.weights for row in _augment(x)]).reshape(x.shape[0], model.n_classes)
    # argmax takes the first maximum: ties go to the lowest class index
    return model.class_labels[np.argmax(scores, axis=1)], scores


def predict(model: LlsrModel, feature: np.ndarray) -> tuple[int, np.ndarray]:
    f = np.asarray(feature, dtype=np.float64)
    if f.ndim != 1:
        raise InvalidInputError(f"Expected a 1-D feature vector, got shape {f.shape}")
    labels, scores = predict_batch(model, f[None, :])
    return int(labels[0]), scores[0]
