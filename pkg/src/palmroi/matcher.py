"""Template database, enrollment, 1-NN identification and verification.

A template is a labeled feature vector; identification returns the palm id
of the nearest enrolled template (ties go to the first enrolled), and
verification accepts a claimed identity when the distance to that palm's
nearest template is within a caller-supplied threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .features import format_features, parse_features

METRICS = ("euclidean", "manhattan")


@dataclass(frozen=True)
class Template:
    palm_id: str
    sample_id: str
    features: np.ndarray


@dataclass(frozen=True)
class TemplateDB:
    k: int
    templates: tuple[Template, ...]

    def __len__(self) -> int:
        return len(self.templates)


@dataclass(frozen=True)
class EvaluationReport:
    """Identification outcome: exact counts plus the derived rate R."""

    total: int
    correct: int
    R: float
    per_k: dict[int, float] = field(default_factory=dict)


def enroll(samples: Iterable[tuple[str, str, np.ndarray]]) -> TemplateDB:
    """Build a TemplateDB; all vectors must share a length and (palm, sample) keys be unique."""
    templates = []
    seen = set()
    k = None
    for palm_id, sample_id, values in samples:
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("feature vectors must be 1-D")
        if k is None:
            k = values.size
        elif values.size != k:
            raise ValueError(
                f"feature length mismatch: expected {k}, got {values.size} "
                f"for ({palm_id}, {sample_id})"
            )
        key = (palm_id, sample_id)
        if key in seen:
            raise ValueError(f"duplicate template key {key}")
        seen.add(key)
        templates.append(Template(palm_id, sample_id, values))
    return TemplateDB(k=k if k is not None else 0, templates=tuple(templates))


def distance(a: np.ndarray, b: np.ndarray, metric: str = "euclidean") -> float:
    """Distance between two equal-length feature vectors (Euclidean by default)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if metric == "euclidean":
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if metric == "manhattan":
        return float(np.sum(np.abs(a - b)))
    raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")


def identify(f: np.ndarray, db: TemplateDB, metric: str = "euclidean") -> tuple[str, float]:
    """(palm_id, distance) of the nearest template; first enrolled wins ties."""
    if len(db) == 0:
        raise ValueError("cannot identify against an empty template database")
    best_i = 0
    best_d = distance(f, db.templates[0].features, metric)
    for i in range(1, len(db.templates)):
        d = distance(f, db.templates[i].features, metric)
        if d < best_d:
            best_i, best_d = i, d
    return db.templates[best_i].palm_id, best_d


def verify(
    f: np.ndarray, db: TemplateDB, claimed: str, tau: float, metric: str = "euclidean"
) -> bool:
    """Accept iff the nearest template of the claimed palm is within tau."""
    candidates = [t for t in db.templates if t.palm_id == claimed]
    if not candidates:
        raise ValueError(f"claimed palm_id {claimed!r} not enrolled")
    best = min(distance(f, t.features, metric) for t in candidates)
    return best <= tau


def accuracy(predictions: Sequence[tuple[str, str]]) -> EvaluationReport:
    """Correct-classification rate over (predicted, truth) pairs."""
    if not predictions:
        raise ValueError("accuracy needs at least one prediction")
    total = len(predictions)
    correct = sum(1 for predicted, truth in predictions if predicted == truth)
    return EvaluationReport(total=total, correct=correct, R=correct / total)


# ---------------------------------------------------------------------------
# Template DB file format: one template per line, tab-separated fields
# palm_id, sample_id, k, comma-separated feature values; '#' lines are comments.

def save_db(db: TemplateDB, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# palm_id\tsample_id\tk\tfeatures\n")
        for t in db.templates:
            fh.write(f"{t.palm_id}\t{t.sample_id}\t{t.features.size}\t{format_features(t.features)}\n")


def load_db(path) -> TemplateDB:
    samples = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
            palm_id, sample_id, k_text, values_text = parts
            values = parse_features(values_text)
            if int(k_text) != values.size:
                raise ValueError(
                    f"{path}:{lineno}: declared k={k_text} but {values.size} values"
                )
            samples.append((palm_id, sample_id, values))
    return enroll(samples)


def format_report_csv(per_k_reports: dict[int, EvaluationReport]) -> str:
    """CSV with header ``k,total,correct,R``, one row per feature size."""
    lines = ["k,total,correct,R"]
    for k in sorted(per_k_reports):
        rep = per_k_reports[k]
        lines.append(f"{k},{rep.total},{rep.correct},{rep.R:.6f}")
    return "\n".join(lines) + "\n"
