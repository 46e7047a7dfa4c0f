from __future__ import annotations

from typing import Sequence

import numpy as np
from pydantic import BaseModel


class EvalReport(BaseModel):
    overall_accuracy: float
    class_avg_accuracy: float
    per_class_accuracy: dict[str, float]
    support: dict[str, int]
    confusion: list[list[int]]      # rows = truth, columns = prediction
    class_names: list[str]


def confusion_matrix(truth: np.ndarray, predicted: np.ndarray, n_classes: int) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (truth, predicted), 1)
    return cm


def evaluation_report(truth: np.ndarray, predicted: np.ndarray, class_names: Sequence[str]) -> EvalReport:
    """Overall accuracy = trace / total; class-avg = mean recall over classes with samples."""
    truth = np.asarray(truth, dtype=np.int64).reshape(-1)
    predicted = np.asarray(predicted, dtype=np.int64).reshape(-1)
    n_classes = max(len(class_names), int(truth.max(initial=-1)) + 1, int(predicted.max(initial=-1)) + 1)
    names = [class_names[i] if i < len(class_names) else str(i) for i in range(n_classes)]
    cm = confusion_matrix(truth, predicted, n_classes)

    total = int(cm.sum())
    overall = float(np.trace(cm) / total) if total else 0.0
    rows = cm.sum(axis=1)
    per_class = {names[c]: float(cm[c, c] / rows[c]) for c in range(n_classes) if rows[c] > 0}
    class_avg = float(np.mean(list(per_class.values()))) if per_class else 0.0
    return EvalReport(
        overall_accuracy=overall,
        class_avg_accuracy=class_avg,
        per_class_accuracy=per_class,
        support={names[c]: int(rows[c]) for c in range(n_classes)},
        confusion=cm.tolist(),
        class_names=names,
    )
