"""Linear decay models over resource age: the five built-in models,
least-squares fitting, prediction, and the error/aggregation statistics.

All percentages are on the 0-100 scale. Predictions are not clamped by
default: the built-in models legitimately go negative at small ages.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DegenerateInput, EmptyInput, LengthMismatch, NegativeAge, UnknownModel


class ModelLabel(Enum):
    CONTENT_LOST = "content-lost"
    CONTENT_ARCHIVED = "content-archived"
    REAPPEARING = "reappearing"
    MEMENTOS_DISAPPEARING = "mementos-disappearing"
    POSTS_MISSING = "posts-missing"
    CUSTOM = "custom"


@dataclass(frozen=True)
class DecayModel:
    slope: float  # percent per day
    intercept: float  # percent
    label: ModelLabel = ModelLabel.CUSTOM


BUILTIN_MODELS: dict[ModelLabel, DecayModel] = {
    ModelLabel.CONTENT_LOST: DecayModel(0.02, 4.20, ModelLabel.CONTENT_LOST),
    ModelLabel.CONTENT_ARCHIVED: DecayModel(0.04, 6.74, ModelLabel.CONTENT_ARCHIVED),
    ModelLabel.REAPPEARING: DecayModel(0.01, -1.42, ModelLabel.REAPPEARING),
    ModelLabel.MEMENTOS_DISAPPEARING: DecayModel(0.01, -2.22, ModelLabel.MEMENTOS_DISAPPEARING),
    ModelLabel.POSTS_MISSING: DecayModel(0.01, 0.88, ModelLabel.POSTS_MISSING),
}


def model_by_name(name: str) -> DecayModel:
    try:
        label = ModelLabel(name)
    except ValueError:
        raise UnknownModel(name) from None
    if label is ModelLabel.CUSTOM:
        raise UnknownModel(name)
    return BUILTIN_MODELS[label]


@dataclass(frozen=True)
class ObservationSet:
    points: tuple[tuple[float, float], ...]  # (age_days, percentage)
    event_label: str = ""


def predict(model: DecayModel, age_days: float, clamp: bool = False) -> float:
    """Evaluate slope * age + intercept; optionally clamp to [0, 100]."""
    if age_days < 0:
        raise NegativeAge(str(age_days))
    value = model.slope * age_days + model.intercept
    if clamp:
        value = min(100.0, max(0.0, value))
    return value


def invert(model: DecayModel, percentage: float) -> float:
    """Age in days at which the model predicts the given percentage."""
    return (percentage - model.intercept) / model.slope


def fit(obs: ObservationSet) -> DecayModel:
    """Ordinary least-squares line through the observation points."""
    pts = obs.points
    if len(pts) < 2:
        raise DegenerateInput("need at least 2 points")
    n = len(pts)
    ages = [p[0] for p in pts]
    if min(ages) < 0:
        raise NegativeAge(str(min(ages)))
    if len(set(ages)) < 2:
        raise DegenerateInput("all ages equal")
    mean_x = sum(ages) / n
    mean_y = sum(p[1] for p in pts) / n
    sxx = sum((x - mean_x) ** 2 for x in ages)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in pts)
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    return DecayModel(slope=slope, intercept=intercept, label=ModelLabel.CUSTOM)


def mean_abs_error(measured: Sequence[float], predicted: Sequence[float]) -> float:
    if len(measured) != len(predicted):
        raise LengthMismatch(f"{len(measured)} != {len(predicted)}")
    if not measured:
        raise EmptyInput("no pairs")
    return sum(abs(m - p) for m, p in zip(measured, predicted)) / len(measured)


def aggregate_events(per_event: Sequence[tuple[str, float]]) -> float:
    """Unweighted arithmetic mean of per-event percentages."""
    if not per_event:
        raise EmptyInput("no events")
    return sum(p for _, p in per_event) / len(per_event)


def read_observations(path: str | Path) -> list[ObservationSet]:
    """Read CSV with columns event,age_days,percentage into per-event sets."""
    grouped: dict[str, list[tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            grouped.setdefault(row["event"], []).append(
                (float(row["age_days"]), float(row["percentage"]))
            )
    if not grouped:
        raise EmptyInput(str(path))
    return [
        ObservationSet(points=tuple(pts), event_label=event)
        for event, pts in grouped.items()
    ]


def model_to_json(model: DecayModel) -> dict:
    return {"slope": model.slope, "intercept": model.intercept, "label": model.label.value}
