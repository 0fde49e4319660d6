"""1-NN evaluation, multi-trial experiment protocol, and benchmark tables.

A task samples a per-class quota from the source, adapts it against one half
of the target, and scores 1-NN accuracy of the adapted source on that same
half (transductive headline number) as well as on the untouched held-out
half. The no-adaptation (NA) baseline uses the identical sampled source and
splits, so the comparison isolates the effect of adaptation. Hyperparameter
grids are searched per task and the best mean is reported.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .data import LabeledDataset, load_dataset, load_features, load_labels, pairwise_sq_dists
from .pipeline import AdaptationConfig, adapt


def knn_predict(train: LabeledDataset, test_X):
    """Nearest-neighbor labels; distance ties go to the lowest train index."""
    if train.n < 1:
        raise ValueError("empty training set")
    test_X = np.atleast_2d(np.asarray(test_X, dtype=float))
    d2 = pairwise_sq_dists(test_X, train.features)
    return train.labels[np.argmin(d2, axis=1)]


def accuracy(predicted, truth):
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError("prediction and truth lengths differ")
    return float((predicted == truth).mean())


@dataclass(frozen=True)
class ExperimentSpec:
    """Paths and protocol settings for one adaptation task."""

    name: str
    source_features: str
    source_labels: str
    target_features: str
    target_labels: Optional[str] = None
    per_class: int = 20
    target_fraction: float = 0.5
    trials: int = 10
    config: AdaptationConfig = field(default_factory=AdaptationConfig)
    lam2_grid: Optional[tuple] = None
    lam3_grid: Optional[tuple] = None
    n_outer_grid: Optional[tuple] = None

    def __post_init__(self):
        if self.per_class < 1:
            raise ValueError("per_class must be >= 1")
        if not 0.0 < self.target_fraction < 1.0:
            raise ValueError("target_fraction must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class ResultRecord:
    name: str
    per_trial: list
    mean: float
    held_per_trial: list
    held_mean: float
    na_per_trial: list
    na_mean: float
    na_held_per_trial: list
    na_held_mean: float
    best_lam2: float
    best_lam3: float
    best_n_outer: int
    config: AdaptationConfig

    def as_dict(self):
        out = {k: v for k, v in self.__dict__.items() if k != "config"}
        return out


def _sample_source(source: LabeledDataset, quota, rng):
    rows = []
    for c in range(1, source.num_classes + 1):
        members = np.flatnonzero(source.labels == c)
        if len(members) < quota:
            warnings.warn(
                f"class {c} has only {len(members)} samples for a quota of {quota}; "
                "using all of them"
            )
            take = members
        else:
            take = rng.choice(members, size=quota, replace=False)
        rows.append(np.sort(take))
    rows = np.concatenate(rows)
    return LabeledDataset(
        features=source.features[rows].copy(),
        labels=source.labels[rows].copy(),
        num_classes=source.num_classes,
    )


def _grid(spec: ExperimentSpec):
    lam2s = spec.lam2_grid if spec.lam2_grid else (spec.config.lam2,)
    lam3s = spec.lam3_grid if spec.lam3_grid else (spec.config.lam3,)
    outers = spec.n_outer_grid if spec.n_outer_grid else (spec.config.n_outer,)
    return [(l2, l3, no) for l2 in lam2s for l3 in lam3s for no in outers]


def run_task(spec: ExperimentSpec, seed=0):
    """Execute the full multi-trial protocol for one task."""
    source = load_dataset(spec.source_features, spec.source_labels)
    target_X = load_features(spec.target_features)
    if spec.target_labels is None:
        raise ValueError(f"{spec.name}: target labels are required for scoring")
    target_y, _ = load_labels(spec.target_labels, target_X.shape[0])

    combos = _grid(spec)
    acc = np.zeros((len(combos), spec.trials))
    held = np.zeros((len(combos), spec.trials))
    na = np.zeros(spec.trials)
    na_held = np.zeros(spec.trials)

    for trial in range(spec.trials):
        ss = np.random.SeedSequence([seed, trial])
        child_sample, child_adapt = ss.spawn(2)
        rng = np.random.default_rng(child_sample)
        adapt_seed = int(child_adapt.generate_state(1)[0])

        sampled = _sample_source(source, spec.per_class, rng)
        order = rng.permutation(target_X.shape[0])
        n_adapt = int(round(spec.target_fraction * target_X.shape[0]))
        n_adapt = min(max(n_adapt, 1), target_X.shape[0] - 1)
        adapt_idx, held_idx = order[:n_adapt], order[n_adapt:]
        Xa, ya = target_X[adapt_idx], target_y[adapt_idx]
        Xh, yh = target_X[held_idx], target_y[held_idx]

        na[trial] = accuracy(knn_predict(sampled, Xa), ya)
        na_held[trial] = accuracy(knn_predict(sampled, Xh), yh)

        for ci, (lam2, lam3, n_outer) in enumerate(combos):
            cfg = replace(
                spec.config, lam2=lam2, lam3=lam3, n_outer=n_outer, seed=adapt_seed
            )
            result = adapt(sampled, Xa, cfg)
            adapted = LabeledDataset(
                features=result.adapted,
                labels=sampled.labels,
                num_classes=sampled.num_classes,
            )
            acc[ci, trial] = accuracy(knn_predict(adapted, Xa), ya)
            held[ci, trial] = accuracy(knn_predict(adapted, Xh), yh)

    best = int(np.argmax(acc.mean(axis=1)))
    lam2, lam3, n_outer = combos[best]
    return ResultRecord(
        name=spec.name,
        per_trial=acc[best].tolist(),
        mean=float(acc[best].mean()),
        held_per_trial=held[best].tolist(),
        held_mean=float(held[best].mean()),
        na_per_trial=na.tolist(),
        na_mean=float(na.mean()),
        na_held_per_trial=na_held.tolist(),
        na_held_mean=float(na_held.mean()),
        best_lam2=lam2,
        best_lam3=lam3,
        best_n_outer=n_outer,
        config=spec.config,
    )


def run_benchmark(specs, seed=0):
    """Run every task, isolating failures so one bad task cannot sink the
    rest. Returns a list of (spec name, ResultRecord or error string)."""
    if not specs:
        raise ValueError("benchmark needs at least one task")
    rows = []
    for spec in specs:
        try:
            rows.append((spec.name, run_task(spec, seed=seed)))
        except Exception as exc:  # noqa: BLE001 - isolation contract
            rows.append((spec.name, f"error: {exc}"))
    return rows


def benchmark_table(rows):
    """Render benchmark rows as (csv_text, pretty_text).

    The CSV stores fractions; the pretty table shows percentages.
    """
    header = (
        "task,na_mean,adapted_mean,na_held_mean,adapted_held_mean,"
        "best_lam2,best_lam3,best_n_outer,error"
    )
    csv_lines = [header]
    pretty = [f"{'task':<12} {'NA %':>7} {'Ours %':>7} {'held %':>7}  best (lam2, lam3, N_T)"]
    for name, rec in rows:
        if isinstance(rec, str):
            csv_lines.append(f"{name},,,,,,,,{rec}")
            pretty.append(f"{name:<12} {rec}")
            continue
        csv_lines.append(
            f"{name},{rec.na_mean:.6f},{rec.mean:.6f},{rec.na_held_mean:.6f},"
            f"{rec.held_mean:.6f},{rec.best_lam2:g},{rec.best_lam3:g},"
            f"{rec.best_n_outer},"
        )
        pretty.append(
            f"{name:<12} {100 * rec.na_mean:>7.2f} {100 * rec.mean:>7.2f} "
            f"{100 * rec.held_mean:>7.2f}  ({rec.best_lam2:g}, {rec.best_lam3:g}, "
            f"{rec.best_n_outer})"
        )
    return "\n".join(csv_lines) + "\n", "\n".join(pretty) + "\n"


def load_benchmark_file(path):
    """Parse a JSON benchmark description into (specs, seed).

    Top-level keys: seed, trials, target_fraction, per_class, eta, lambda_g,
    lambda2_grid, lambda3_grid, n_outer_grid, config (AdaptationConfig
    overrides), tasks (list). Each task needs name and the four dataset
    paths; per_class defaults to 8 when the source features path mentions
    "dslr", else the global default.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if "tasks" not in doc or not doc["tasks"]:
        raise ValueError(f"{path}: benchmark file lists no tasks")

    cfg_kwargs = dict(doc.get("config", {}))
    if "eta" in doc:
        cfg_kwargs.setdefault("eta", doc["eta"])
    if "lambda_g" in doc:
        cfg_kwargs.setdefault("lam_g", doc["lambda_g"])
    base_cfg = AdaptationConfig(**cfg_kwargs)

    default_quota = int(doc.get("per_class", 20))
    specs = []
    for task in doc["tasks"]:
        missing = [
            key
            for key in ("name", "source_features", "source_labels", "target_features", "target_labels")
            if key not in task
        ]
        if missing:
            raise ValueError(f"{path}: task missing keys {missing}")
        quota = task.get("per_class")
        if quota is None:
            is_dslr = "dslr" in str(task["source_features"]).lower()
            quota = 8 if is_dslr else default_quota
        specs.append(
            ExperimentSpec(
                name=task["name"],
                source_features=task["source_features"],
                source_labels=task["source_labels"],
                target_features=task["target_features"],
                target_labels=task["target_labels"],
                per_class=int(quota),
                target_fraction=float(doc.get("target_fraction", 0.5)),
                trials=int(doc.get("trials", 10)),
                config=base_cfg,
                lam2_grid=tuple(doc["lambda2_grid"]) if "lambda2_grid" in doc else None,
                lam3_grid=tuple(doc["lambda3_grid"]) if "lambda3_grid" in doc else None,
                n_outer_grid=tuple(doc["n_outer_grid"]) if "n_outer_grid" in doc else None,
            )
        )
    return specs, int(doc.get("seed", 0))
