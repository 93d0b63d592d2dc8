"""Drive the pinned reference AdaBoost, export it in boosttab's formats.

The reference library's per-estimator weight for two classes at learning
rate 1 is ln((1-err)/err), i.e. exactly twice the half-log-odds weight the
toolkit computes, so ``converted_betas = estimator_weights / 2``.  Parity is
checked on outcome matrices: the reference's own predictions are exported
as an outcome CSV and pushed through boosttab's ``table`` + ``analytic``
subcommands, which must reproduce the converted weights.  Stump-fitting
internals (split criteria) are deliberately out of the loop.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import sklearn
from sklearn.ensemble import AdaBoostClassifier
from sklearn.tree import DecisionTreeClassifier

PINNED_SKLEARN_VERSION = "1.7.2"  # keep in sync with requirements-lock.txt

DEFAULT_BOOSTTAB_CMD = (sys.executable, "-m", "boosttab")


def check_pinned_version() -> None:
    """Parity statements are version-specific: refuse to run off-pin."""
    if sklearn.__version__ != PINNED_SKLEARN_VERSION:
        raise RuntimeError(
            f"scikit-learn {sklearn.__version__} installed, parity harness is "
            f"pinned to {PINNED_SKLEARN_VERSION}"
        )


def read_dataset_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read boosttab's dataset CSV format: header x1..xd,y, labels -1/1."""
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    X = raw[:, :-1]
    y = raw[:, -1].astype(int)
    if not set(np.unique(y)) <= {-1, 1}:
        raise ValueError(f"{path}: labels must be -1/1")
    return X, y


def _sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class ParityRecord:
    sklearn_version: str
    requested_steps: int
    fitted_steps: int
    early_stopped: bool
    estimator_weights: list[float]
    estimator_errors: list[float]
    converted_betas: list[float]
    dataset_sha256: str
    outcome_csv_sha256: str
    random_state: int
    notes: str = ""
    deltas: dict = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2) + "\n")


def export_reference_run(
    dataset_csv: str | Path,
    p: int,
    outcomes_csv: str | Path,
    record_path: str | Path | None = None,
    random_state: int = 0,
) -> ParityRecord:
    """Fit the reference classifier and export its outcome matrix.

    Writes the n x fitted_steps outcome CSV (header ``g1,...,gp``) and
    returns the run record.  The reference may stop early (for example on a
    perfect stump); the record keeps whatever it observed.
    """
    check_pinned_version()
    X, y = read_dataset_csv(dataset_csv)
    clf = AdaBoostClassifier(
        estimator=DecisionTreeClassifier(max_depth=1),
        n_estimators=p,
        learning_rate=1.0,
        random_state=random_state,
    )
    clf.fit(X, y)

    fitted = len(clf.estimators_)
    columns = [
        (y * est.predict(X)).astype(int) for est in clf.estimators_
    ]
    outcomes = np.stack(columns, axis=1)
    header = ",".join(f"g{k + 1}" for k in range(fitted))
    lines = [header] + [",".join(str(v) for v in row) for row in outcomes]
    Path(outcomes_csv).write_text("\n".join(lines) + "\n", newline="\n")

    weights = [float(w) for w in clf.estimator_weights_[:fitted]]
    errors = [float(e) for e in clf.estimator_errors_[:fitted]]
    early = fitted < p
    notes = ""
    if early:
        notes = (
            f"reference stopped after {fitted}/{p} estimators "
            f"(last error {errors[-1]!r}, last weight {weights[-1]!r})"
        )
    record = ParityRecord(
        sklearn_version=sklearn.__version__,
        requested_steps=p,
        fitted_steps=fitted,
        early_stopped=early,
        estimator_weights=weights,
        estimator_errors=errors,
        converted_betas=[w / 2.0 for w in weights],
        dataset_sha256=_sha256(dataset_csv),
        outcome_csv_sha256=_sha256(outcomes_csv),
        random_state=random_state,
        notes=notes,
    )
    if record_path is not None:
        record.save(record_path)
    return record


def _run_boosttab(cmd, *args):
    res = subprocess.run(
        [*cmd, *map(str, args)], capture_output=True, text=True
    )
    if res.returncode != 0:
        raise RuntimeError(
            f"boosttab {' '.join(map(str, args))} failed "
            f"(exit {res.returncode}): {res.stderr.strip()}"
        )
    return json.loads(res.stdout)


def run_parity(
    dataset_csv: str | Path,
    p: int,
    workdir: str | Path,
    random_state: int = 0,
    boosttab_cmd=DEFAULT_BOOSTTAB_CMD,
) -> ParityRecord:
    """Full loop: export the reference run, push its outcome matrix through
    boosttab's analytic pipeline, and record the weight deltas.

    ``deltas['vs_analytic_mae']`` is the parity statement proper: the mean
    absolute difference between the reference's halved weights and the
    closed-form weights computed from the reference's own outcome matrix.
    ``deltas['vs_iterative_mae']`` compares against boosttab's own training
    run on the same dataset — different stumps, so informational only.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    outcomes_csv = workdir / "reference_outcomes.csv"
    record = export_reference_run(
        dataset_csv, p, outcomes_csv, random_state=random_state
    )

    tree_json = workdir / "reference_tree.json"
    _run_boosttab(
        boosttab_cmd, "table", "--outcomes", outcomes_csv, "--out", tree_json
    )
    analytic = _run_boosttab(boosttab_cmd, "analytic", "--tree", tree_json)
    betas_analytic = np.asarray(analytic["betas_analytic"])
    converted = np.asarray(record.converted_betas)
    record.deltas["vs_analytic_mae"] = float(
        np.mean(np.abs(converted - betas_analytic))
    )

    model_json = workdir / "own_model.json"
    try:
        _run_boosttab(
            boosttab_cmd, "train", "--data", dataset_csv, "--p", p,
            "--out", model_json,
        )
        own = json.loads(Path(model_json).read_text())
        own_betas = np.asarray([step["beta"] for step in own["steps"]])
        if own_betas.shape == converted.shape:
            record.deltas["vs_iterative_mae"] = float(
                np.mean(np.abs(converted - own_betas))
            )
    except RuntimeError as exc:
        record.deltas["vs_iterative_mae"] = None
        record.notes = (record.notes + f" | own training failed: {exc}").strip(" |")

    record.save(workdir / "parity_record.json")
    return record
