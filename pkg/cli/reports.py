"""
Report tables.

Every command builds one pandas DataFrame. The machine-readable form is a TSV
with fixed float formatting and no timings, so reruns produce identical bytes;
the human-readable form adds a title and any timing lines.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from pipeline import EvalReport, FlopReport, TrainingSummary

FLOAT_FORMAT = "%.6f"


def train_table(summary: TrainingSummary, parameters: dict[str, int]) -> pd.DataFrame:
    rows = [
        ("samples", summary.samples),
        ("views", summary.views),
        ("feature_dim", summary.feature_dim),
        ("selected", summary.selected),
        ("elbow", "" if summary.elbow is None else summary.elbow),
        ("filter_params", parameters["filter"]),
        ("classifier_params", parameters["classifier"]),
        ("total_params", parameters["total"]),
        ("training_accuracy", f"{summary.training_accuracy:.6f}"),
    ]
    return pd.DataFrame(rows, columns=["key", "value"])


def eval_table(report: EvalReport) -> pd.DataFrame:
    cm = np.asarray(report.confusion)
    rows = []
    for c, name in enumerate(report.class_names):
        samples = int(cm[c].sum())
        rows.append({
            "class": name,
            "samples": samples,
            "correct": int(cm[c, c]),
            "accuracy": report.per_class_accuracy.get(name),
        })
    rows.append({"class": "overall", "samples": int(cm.sum()), "correct": int(np.trace(cm)),
                 "accuracy": report.overall_accuracy})
    rows.append({"class": "class_avg", "samples": None, "correct": None, "accuracy": report.class_avg_accuracy})
    df = pd.DataFrame(rows, columns=["class", "samples", "correct", "accuracy"])
    return df.astype({"samples": "Int64", "correct": "Int64"})


def predict_table(
    paths: Sequence[str],
    labels: np.ndarray,
    scores: np.ndarray,
    class_names: Sequence[str],
    truth: Optional[Sequence[int]] = None,
) -> pd.DataFrame:
    columns = ["path", "predicted"] + [f"score_{name}" for name in class_names]
    if truth is not None:
        columns += ["truth", "correct"]
    rows = []
    for i, path in enumerate(paths):
        label = int(labels[i])
        row: dict[str, Any] = {"path": path, "predicted": class_names[label] if label < len(class_names) else str(label)}
        row.update({f"score_{name}": float(s) for name, s in zip(class_names, scores[i])})
        if truth is not None:
            row["truth"] = class_names[int(truth[i])]
            row["correct"] = int(int(truth[i]) == label)
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


def flops_table(report: FlopReport) -> pd.DataFrame:
    df = pd.DataFrame(report.rows(), columns=["stage", "flops", "in_headline"])
    df["in_headline"] = df["in_headline"].astype(int)
    return df


def to_tsv(df: pd.DataFrame) -> str:
    return df.to_csv(sep="\t", index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")


def to_text(df: pd.DataFrame, title: str, notes: Sequence[str] = ()) -> str:
    body = df.to_string(index=False, float_format=lambda v: f"{v:.4f}", na_rep="-") if len(df) else "(no rows)"
    lines = [title, "=" * len(title), body]
    lines += list(notes)
    return "\n".join(lines) + "\n"


def to_records(df: pd.DataFrame) -> list[dict[str, Any]]:
    return json.loads(df.to_json(orient="records"))


def emit(df: pd.DataFrame, title: str, output: Optional[str | Path] = None, notes: Sequence[str] = ()) -> str:
    """Print the human table; with ``output`` also write ``<output>`` (TSV) and ``<output stem>.txt``."""
    text = to_text(df, title, notes)
    print(text, end="")
    if output is not None:
        output = Path(output)
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(to_tsv(df), encoding="utf-8")
        human = output.with_suffix(".txt") if output.suffix != ".txt" else output.with_suffix(".human.txt")
        human.write_text(text, encoding="utf-8")
    return text
