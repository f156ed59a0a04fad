import numpy as np

from sklearn import metrics
from typing import Optional

from equihyper.typing import DenseMatrix
from equihyper.utils import ShapeMismatchError


def confusion_matrix(predictions: np.ndarray, labels: np.ndarray, num_classes: int) -> np.ndarray:
    """C x C counts; row = true class, column = predicted class."""
    if labels.size == 0:
        return np.zeros((num_classes, num_classes), dtype=np.int64)
    return metrics.confusion_matrix(labels, predictions, labels=np.arange(num_classes)).astype(np.int64)


def roc_auc(scores: np.ndarray, positives: np.ndarray) -> Optional[float]:
    """
    Area under the ROC curve. Ties count one half.

    Returns None when only one class is present.
    """
    positives = np.asarray(positives, dtype=bool)
    if positives.all() or not positives.any():
        return None
    return float(metrics.roc_auc_score(positives, scores))


def evaluation_report(logits: DenseMatrix, labels: np.ndarray, mask: np.ndarray, num_classes: int) -> dict:
    """
    Accuracy report over the masked nodes.

    Parameters
    ----------
    logits: DenseMatrix
        n x C class scores.
    labels: np.ndarray
        Class id of every node.
    mask: np.ndarray
        Nodes to evaluate.
    num_classes: int
        Number of classes C.

    Returns
    -------
    dict
        Overall accuracy, per-class accuracy and support, the confusion matrix
        and, for two classes, ROC-AUC.
    """
    if logits.shape != (labels.shape[0], num_classes):
        raise ShapeMismatchError("evaluation_report", logits.shape, (labels.shape[0], num_classes))
    mask = np.asarray(mask, dtype=bool)
    predictions = np.argmax(logits[mask], axis=1)
    truth = labels[mask]

    matrix = confusion_matrix(predictions, truth, num_classes)
    support = matrix.sum(axis=1)
    if truth.size:
        # per-class accuracy is the recall of that class
        recall = metrics.recall_score(
            truth, predictions, labels=np.arange(num_classes), average=None, zero_division=0
        )
    else:
        recall = np.zeros(num_classes)
    per_class = [
        {
            "class": c,
            "support": int(support[c]),
            "accuracy": float(recall[c]) if support[c] else None,
        }
        for c in range(num_classes)
    ]

    report = {
        "nodes": int(mask.sum()),
        "accuracy": float(metrics.accuracy_score(truth, predictions)) if truth.size else None,
        "per_class": per_class,
        "confusion_matrix": matrix.tolist(),
    }
    if num_classes == 2:
        report["roc_auc"] = roc_auc(logits[mask, 1] - logits[mask, 0], truth == 1)
    return report
