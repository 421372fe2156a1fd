"""Binary detection metrics over classifier score files.

A score file is a CSV with header ``id,score,label``: one row per image,
``score`` the predicted fake-probability in [0, 1], ``label`` the ground
truth (real/fake, ai/nature, or 0/1). ``fake`` is the positive class.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import normalize_label


@dataclass
class ScoreFile:
    ids: list[str]
    probs: np.ndarray  # float64, fake-probability
    labels: np.ndarray  # int8, 1 = fake


def read_scores(path) -> ScoreFile:
    ids, probs, labels = [], [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "score", "label"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: score CSV needs 'id', 'score' and 'label' columns")
        for row in reader:
            prob = float(row["score"])
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"{path}: score {prob} outside [0, 1]")
            ids.append(row["id"])
            probs.append(prob)
            labels.append(1 if normalize_label(row["label"]) == "fake" else 0)
    return ScoreFile(ids, np.asarray(probs, dtype=np.float64), np.asarray(labels, dtype=np.int8))


def write_scores(path, ids, probs, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "score", "label"])
        for i, p, y in zip(ids, probs, labels):
            name = y if isinstance(y, str) else ("fake" if int(y) else "real")
            writer.writerow([i, f"{float(p):.10g}", name])


def compute_acc(probs, labels, threshold: float = 0.5) -> float:
    """Fraction of rows where (prob >= threshold) matches the label."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.size == 0:
        raise ValueError("empty score list")
    predicted = probs >= threshold
    return float(np.mean(predicted == labels.astype(bool)))


def compute_ap(probs, labels) -> float:
    """Average precision: area under the precision-recall curve.

    Step-wise summation sum((R_n - R_{n-1}) * P_n) over descending score
    thresholds, with tied scores grouped into a single threshold.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    positives = int(labels.sum())
    if positives == 0 or positives == labels.size:
        raise ValueError("average precision needs both classes present")

    order = np.argsort(-probs, kind="stable")
    sorted_probs = probs[order]
    sorted_labels = labels[order]

    tp = np.cumsum(sorted_labels)
    fp = np.cumsum(~sorted_labels)
    # last index of each tied-score group
    boundary = np.nonzero(np.diff(sorted_probs))[0]
    idx = np.append(boundary, sorted_probs.size - 1)

    precision = tp[idx] / (tp[idx] + fp[idx])
    recall = tp[idx] / positives
    prev_recall = np.concatenate(([0.0], recall[:-1]))
    return float(np.sum((recall - prev_recall) * precision))
