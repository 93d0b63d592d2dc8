"""The iterative reweighting loop over weak classifiers.

Each step fits a stump to the weighted examples, scores its normalized
weighted error, assigns the half-log-odds weight, and multiplies the weight
of every misclassified example by exp(2 * step weight).  Weights are never
renormalized; the error ratio does that implicitly.  A step with error >=
1/2 still reweights the examples but is excluded from the output vote,
matching the library behavior this toolkit reproduces (not the classical
stop-on-bad-learner rule).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .data import LabeledDataset
from .errors import ParseError, ValidationError
from .stumps import DecisionStump, fit_stump

STATUS_COMPLETED = "completed"
STATUS_PERFECT = "perfect-fit"
STATUS_ANTI_PERFECT = "anti-perfect"


@dataclass(frozen=True)
class BoostModel:
    """Trained ensemble: stumps, weights, errors, inclusion flags.

    ``status`` records why training ended: all requested steps ran, or a
    step hit error 0 or 1 (unbounded weight) and training halted with the
    completed prefix; ``status_step`` is that 1-based step, None otherwise.
    ``weight_history``, when recorded, holds the example weights before any
    step and after each completed step.
    """

    stumps: tuple[DecisionStump, ...]
    betas: np.ndarray
    epsilons: np.ndarray
    included: np.ndarray
    status: str
    status_step: int | None
    n: int
    d: int
    requested_steps: int
    weight_history: tuple[np.ndarray, ...] | None = None
    seed_info: dict | None = None

    @property
    def steps(self) -> int:
        return len(self.stumps)


def train_adaboost(
    dataset: LabeledDataset,
    p: int,
    *,
    weak_learner: Callable[[LabeledDataset, np.ndarray], DecisionStump] = fit_stump,
    record_weights: bool = False,
    seed_info: dict | None = None,
) -> BoostModel:
    """Run p reweighting steps on the dataset, starting from uniform weights.

    Halts early with status "perfect-fit" (error 0) or "anti-perfect"
    (error 1) because the step weight would be unbounded; the model then
    carries only the completed steps.
    """
    if p < 1:
        raise ValidationError(f"need p >= 1 steps, got {p}")
    y = dataset.labels
    w = np.full(dataset.n, 1.0 / dataset.n)
    history = [w.copy()] if record_weights else None

    stumps: list[DecisionStump] = []
    betas: list[float] = []
    epsilons: list[float] = []
    included: list[bool] = []
    status = STATUS_COMPLETED
    status_step = None
    for k in range(1, p + 1):
        stump = weak_learner(dataset, w)
        wrong = stump.predict_batch(dataset.features) != y
        eps = float(w[wrong].sum() / w.sum())
        if eps == 0.0:
            status, status_step = STATUS_PERFECT, k
            break
        if eps == 1.0:
            status, status_step = STATUS_ANTI_PERFECT, k
            break
        beta = 0.5 * np.log((1.0 - eps) / eps)
        w = w.copy()
        w[wrong] *= np.exp(2.0 * beta)
        stumps.append(stump)
        betas.append(float(beta))
        epsilons.append(eps)
        included.append(eps < 0.5)
        if record_weights:
            history.append(w.copy())

    return BoostModel(
        stumps=tuple(stumps),
        betas=np.array(betas),
        epsilons=np.array(epsilons),
        included=np.array(included, dtype=bool),
        status=status,
        status_step=status_step,
        n=dataset.n,
        d=dataset.d,
        requested_steps=p,
        weight_history=tuple(history) if record_weights else None,
        seed_info=seed_info,
    )


def decision_function(model: BoostModel, x) -> float:
    """Weighted vote of the included classifiers at a single point."""
    if model.steps == 0:
        raise ValidationError("model has no trained steps")
    return float(
        sum(
            b * s.predict(x)
            for s, b, inc in zip(model.stumps, model.betas, model.included)
            if inc
        )
    )


def predict(model: BoostModel, x) -> int:
    """Sign of the vote; the 0 boundary goes to +1."""
    return 1 if decision_function(model, x) >= 0 else -1


def model_to_dict(model: BoostModel) -> dict:
    return {
        "steps": [
            {
                "stump": {
                    "feature": s.feature_index,
                    "threshold": s.threshold,
                    "polarity": s.polarity,
                },
                "beta": float(b),
                "epsilon": float(e),
                "included": bool(inc),
            }
            for s, b, e, inc in zip(
                model.stumps, model.betas, model.epsilons, model.included
            )
        ],
        "seed_info": model.seed_info,
        "n": model.n,
        "d": model.d,
        "p": model.requested_steps,
        "status": model.status,
        "status_step": model.status_step,
    }


def model_from_dict(obj: dict) -> BoostModel:
    try:
        steps = obj["steps"]
        stumps = tuple(
            DecisionStump(
                feature_index=st["stump"]["feature"],
                threshold=st["stump"]["threshold"],
                polarity=st["stump"]["polarity"],
            )
            for st in steps
        )
        return BoostModel(
            stumps=stumps,
            betas=np.array([st["beta"] for st in steps]),
            epsilons=np.array([st["epsilon"] for st in steps]),
            included=np.array([st["included"] for st in steps], dtype=bool),
            status=obj.get("status", STATUS_COMPLETED),
            status_step=obj.get("status_step"),
            n=obj["n"],
            d=obj["d"],
            requested_steps=obj["p"],
            seed_info=obj.get("seed_info"),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model object missing field: {exc}") from exc


def save_model(model: BoostModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")


def load_model(path: str | Path) -> BoostModel:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return model_from_dict(obj)
