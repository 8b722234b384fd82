"""Binary classifiers for ADU detection, claim/premise typing and relation stance.

The reference model is a two-class softmax (multinomial logistic)
regression trained by full-batch gradient descent. Anything exposing
``task``, ``feature_schema_id`` and ``predict_proba`` can stand in for it.
"""

from __future__ import annotations

import enum
import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, NamedTuple, Optional, Protocol, Sequence, Union

import numpy as np

from .errors import ModelError
from .features import FEATURE_SCHEMA_VERSION, N_HANDCRAFTED, FeatureVector, schema_id
from .graph import Stance
from .lexicon import Language

MODEL_FORMAT = "argmine-model"
MODEL_VERSION = 1
PAIR_SCHEMA_VERSION = "pair-v1"
RAW_SCHEMA_VERSION = "raw-v1"


class Task(str, enum.Enum):
    ADU = "adu"
    CLAIM_PREMISE = "claim_premise"
    RELATION = "relation"

    @property
    def classes(self) -> tuple[str, str]:
        """(negative, positive); ties resolve to the negative class."""
        return _CLASSES[self]

    @property
    def positive(self) -> str:
        return _CLASSES[self][1]

    @classmethod
    def parse(cls, value: Union[str, "Task"]) -> "Task":
        if isinstance(value, Task):
            return value
        try:
            return cls(value.lower().replace("-", "_"))
        except ValueError:
            raise ModelError(f"unknown task {value!r}") from None


_CLASSES = {
    Task.ADU: ("NonArgumentative", "Argumentative"),
    Task.CLAIM_PREMISE: ("Premise", "Claim"),
    Task.RELATION: (Stance.SUPPORT.value, Stance.ATTACK.value),
}


def pair_schema_id(dimension: int) -> str:
    return f"{PAIR_SCHEMA_VERSION}/d{dimension}"


def schema_input_dim(schema: str) -> Optional[int]:
    """Input width implied by a schema id, or None for unknown schemas."""
    m = re.fullmatch(r"([\w.-]+)/d(\d+)", schema)
    if not m:
        return None
    version, dim = m.group(1), int(m.group(2))
    if version == FEATURE_SCHEMA_VERSION:
        return N_HANDCRAFTED + dim
    if version == PAIR_SCHEMA_VERSION:
        return 3 * dim
    if version == RAW_SCHEMA_VERSION:
        return dim
    return None


def pair_features(premise: np.ndarray, claim: np.ndarray) -> np.ndarray:
    """[premise | claim | premise - claim]; keeps the premise->claim direction."""
    premise = np.asarray(premise, dtype=np.float64)
    claim = np.asarray(claim, dtype=np.float64)
    if premise.shape != claim.shape:
        raise ModelError(f"dimension mismatch: {premise.shape} vs {claim.shape}")
    return np.concatenate([premise, claim, premise - claim])


class Classifier(Protocol):
    task: Task
    feature_schema_id: str

    def predict_proba(self, x: np.ndarray) -> np.ndarray: ...


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class LinearModel:
    task: Task
    weights: np.ndarray  # (2, D)
    bias: np.ndarray  # (2,)
    feature_schema_id: str
    language: Language = Language.EN
    # per-feature standardization applied before the linear map
    offset: Optional[np.ndarray] = None
    scale: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.weights.ndim != 2 or self.weights.shape[0] != len(self.task.classes):
            raise ModelError(f"weights must have shape (2, D), got {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ModelError("bias length must equal class count")
        expected = schema_input_dim(self.feature_schema_id)
        if expected is not None and expected != self.input_dim:
            raise ModelError(
                f"schema {self.feature_schema_id} implies {expected} features, weights have {self.input_dim}"
            )
        for name in ("offset", "scale"):
            v = getattr(self, name)
            if v is not None and v.shape != (self.input_dim,):
                raise ModelError(f"{name} length must equal feature dimension")

    @property
    def input_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def classes(self) -> tuple[str, str]:
        return self.task.classes

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        if self.offset is not None:
            x = x - self.offset
        if self.scale is not None:
            x = x / self.scale
        return x

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.input_dim:
            raise ModelError(f"expected {self.input_dim} features, got {x.shape[-1]}")
        return _softmax(self._standardize(x) @ self.weights.T + self.bias)

    def predict(self, x: np.ndarray) -> list[str]:
        p = self.predict_proba(np.atleast_2d(x))
        # argmax returns the first maximum, so exact ties go to the negative class
        return [self.classes[i] for i in np.argmax(p, axis=1)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearModel):
            return NotImplemented

        def same(a, b):
            if a is None or b is None:
                return a is b
            return a.shape == b.shape and bool(np.array_equal(a, b))

        return (
            self.task == other.task
            and self.feature_schema_id == other.feature_schema_id
            and self.language == other.language
            and same(self.weights, other.weights)
            and same(self.bias, other.bias)
            and same(self.offset, other.offset)
            and same(self.scale, other.scale)
        )

    __hash__ = None


# training ------------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    l2: float = 1e-3
    epochs: int = 300
    seed: int = 0
    standardize: bool = True


def logistic_loss_grad(
    weights: np.ndarray, bias: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy plus ``l2/2 * ||W||^2``, with gradients for W and b.

    ``y`` holds class indices. The bias is not regularized.
    """
    n = x.shape[0]
    logits = x @ weights.T + bias
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_p = shifted - log_norm[:, None]
    loss = -log_p[np.arange(n), y].mean() + 0.5 * l2 * float(np.sum(weights * weights))
    delta = np.exp(log_p)
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grad_w = delta.T @ x + l2 * weights
    grad_b = delta.sum(axis=0)
    return float(loss), grad_w, grad_b


class FitResult(NamedTuple):
    weights: np.ndarray
    bias: np.ndarray
    losses: list[float]


def fit_logistic(x: np.ndarray, y: np.ndarray, n_classes: int, config: TrainConfig) -> FitResult:
    """Gradient descent with step halving whenever a step would raise the loss."""
    rng = np.random.default_rng(config.seed)
    w = rng.normal(0.0, 0.01, size=(n_classes, x.shape[1]))
    b = np.zeros(n_classes)
    loss, gw, gb = logistic_loss_grad(w, b, x, y, config.l2)
    losses = [loss]
    step = config.learning_rate
    for _ in range(config.epochs):
        while True:
            w_new, b_new = w - step * gw, b - step * gb
            new_loss, new_gw, new_gb = logistic_loss_grad(w_new, b_new, x, y, config.l2)
            if new_loss <= loss or step < 1e-12:
                break
            step *= 0.5
        if new_loss > loss:
            break
        w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
        losses.append(loss)
        step = min(step * 1.1, config.learning_rate)
    return FitResult(w, b, losses)


def _label_indices(labels: Sequence[Any], task: Task) -> np.ndarray:
    classes = task.classes
    out = []
    for lab in labels:
        if isinstance(lab, enum.Enum):
            lab = lab.value
        if isinstance(lab, (bool, np.bool_)):
            out.append(int(lab))
        elif isinstance(lab, (int, np.integer)) and lab in (0, 1):
            out.append(int(lab))
        elif lab in classes:
            out.append(classes.index(lab))
        else:
            raise ModelError(f"label {lab!r} is not one of {classes}")
    return np.array(out, dtype=np.int64)


def train_logistic(
    features: Sequence[np.ndarray],
    labels: Sequence[Any],
    config: TrainConfig = TrainConfig(),
    task: Union[str, Task] = Task.ADU,
    feature_schema_id: Optional[str] = None,
    language: Union[str, Language] = Language.EN,
) -> LinearModel:
    task = Task.parse(task)
    if len(features) == 0:
        raise ModelError("empty dataset")
    if len(features) != len(labels):
        raise ModelError("features and labels differ in length")
    dims = {np.asarray(f).shape for f in features}
    if len(dims) != 1 or len(next(iter(dims))) != 1:
        raise ModelError(f"inconsistent feature dimensions: {sorted(dims)}")
    x = np.vstack([np.asarray(f, dtype=np.float64) for f in features])
    y = _label_indices(labels, task)
    if len(set(y.tolist())) < 2:
        raise ModelError("training data contains a single class")
    if feature_schema_id is None:
        feature_schema_id = f"{RAW_SCHEMA_VERSION}/d{x.shape[1]}"

    offset = scale = None
    if config.standardize:
        offset = x.mean(axis=0)
        scale = x.std(axis=0)
        scale[scale < 1e-12] = 1.0
        x = (x - offset) / scale
    fit = fit_logistic(x, y, 2, config)
    return LinearModel(task, fit.weights, fit.bias, feature_schema_id, Language.parse(language), offset, scale)


# prediction ----------------------------------------------------------------


class Prediction(NamedTuple):
    label: str
    probability: float


@dataclass(frozen=True)
class RelationPrediction:
    stance: Stance
    probability: float
    neutral: bool = False

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability {self.probability} outside [0, 1]")


def _check(model: Classifier, task: Task, schema: str) -> None:
    if model.task != task:
        raise ModelError(f"model was trained for task {model.task.value}, not {task.value}")
    if model.feature_schema_id != schema:
        raise ModelError(f"schema mismatch: model expects {model.feature_schema_id}, features are {schema}")


def _binary(model: Classifier, x: np.ndarray) -> Prediction:
    p = np.asarray(model.predict_proba(x), dtype=np.float64).reshape(-1)
    i = int(np.argmax(p))
    return Prediction(model.task.classes[i], float(p[i]))


def classify_adu(fv: FeatureVector, model: Classifier) -> Prediction:
    _check(model, Task.ADU, schema_id(len(fv.embedding)))
    return _binary(model, fv.as_array())


def classify_claim_premise(fv: FeatureVector, model: Classifier) -> Prediction:
    _check(model, Task.CLAIM_PREMISE, schema_id(len(fv.embedding)))
    return _binary(model, fv.as_array())


def classify_relation(
    premise_embedding: np.ndarray,
    claim_embedding: np.ndarray,
    model: Classifier,
    neutral_threshold: float = 0.5,
) -> RelationPrediction:
    """Stance of the premise -> claim relation.

    A prediction whose probability falls below ``neutral_threshold`` is
    neutral and reported as Support. At threshold 1.0 every prediction is
    neutral, so the result is always Support.
    """
    if not 0.5 <= neutral_threshold <= 1.0:
        raise ModelError(f"neutral threshold {neutral_threshold} outside [0.5, 1.0]")
    x = pair_features(premise_embedding, claim_embedding)
    _check(model, Task.RELATION, pair_schema_id(len(premise_embedding)))
    label, prob = _binary(model, x)
    neutral = prob < neutral_threshold or neutral_threshold >= 1.0
    stance = Stance.SUPPORT if neutral else Stance(label)
    return RelationPrediction(stance, prob, neutral)


# evaluation ----------------------------------------------------------------


@dataclass(frozen=True)
class EvalStats:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int = field(default=0, compare=False)
    fp: int = field(default=0, compare=False)
    fn: int = field(default=0, compare=False)
    tn: int = field(default=0, compare=False)

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "EvalStats":
        total = tp + fp + fn + tn
        if total == 0:
            raise ModelError("empty test set")
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls((tp + tn) / total, precision, recall, f1, tp, fp, fn, tn)

    @classmethod
    def from_labels(cls, gold: Sequence[str], predicted: Sequence[str], positive: str) -> "EvalStats":
        if len(gold) != len(predicted):
            raise ModelError("gold and predicted labels differ in length")
        tp = fp = fn = tn = 0
        for g, p in zip(gold, predicted):
            if p == positive:
                if g == positive:
                    tp += 1
                else:
                    fp += 1
            elif g == positive:
                fn += 1
            else:
                tn += 1
        return cls.from_counts(tp, fp, fn, tn)


def evaluate(model: Classifier, features: Sequence[np.ndarray], labels: Sequence[Any]) -> EvalStats:
    """A/P/R/F1 with Argumentative, Claim or Attack as the positive class."""
    if len(features) == 0:
        raise ModelError("empty test set")
    gold_idx = _label_indices(labels, model.task)
    classes = model.task.classes
    gold = [classes[i] for i in gold_idx]
    probs = np.asarray(model.predict_proba(np.vstack(features)))
    predicted = [classes[i] for i in np.argmax(probs, axis=1)]
    return EvalStats.from_labels(gold, predicted, model.task.positive)


# data splits ---------------------------------------------------------------


def split_train_test(dataset: Sequence[Any], ratio: float, seed: int = 0) -> tuple[list[Any], list[Any]]:
    if len(dataset) == 0:
        raise ModelError("empty dataset")
    if not 0.0 < ratio < 1.0:
        raise ModelError(f"ratio {ratio} outside (0, 1)")
    order = np.random.default_rng(seed).permutation(len(dataset))
    n_train = int(round(len(dataset) * ratio))
    return [dataset[i] for i in order[:n_train]], [dataset[i] for i in order[n_train:]]


def stratified_folds(labels: Sequence[Any], k: int, seed: int = 0) -> list[list[int]]:
    """Index folds with each class dealt round-robin after a seeded shuffle."""
    if k < 2:
        raise ModelError("k must be at least 2")
    if len(labels) == 0:
        raise ModelError("empty dataset")
    by_class: dict[Any, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for lab in sorted(by_class, key=str):
        members = by_class[lab]
        if len(members) < k:
            raise ModelError(f"class {lab!r} has {len(members)} members, fewer than k={k}")
        for i in rng.permutation(members):
            folds[cursor % k].append(int(i))
            cursor += 1
    return [sorted(f) for f in folds]


def grid_search(
    features: Sequence[np.ndarray],
    labels: Sequence[Any],
    task: Union[str, Task],
    grid: dict[str, Sequence[Any]],
    k: int = 5,
    seed: int = 0,
) -> tuple[TrainConfig, float]:
    """Pick the TrainConfig with the best mean cross-validated accuracy."""
    task = Task.parse(task)
    keys = sorted(grid)
    folds = stratified_folds(list(labels), k, seed)
    best: Optional[tuple[TrainConfig, float]] = None
    for values in itertools.product(*(grid[key] for key in keys)):
        config = TrainConfig(seed=seed, **dict(zip(keys, values)))
        scores = []
        for f, test_idx in enumerate(folds):
            held = set(test_idx)
            train_idx = [i for i in range(len(labels)) if i not in held]
            model = train_logistic([features[i] for i in train_idx], [labels[i] for i in train_idx], config, task)
            scores.append(evaluate(model, [features[i] for i in test_idx], [labels[i] for i in test_idx]).accuracy)
        mean = float(np.mean(scores))
        if best is None or mean > best[1]:
            best = (config, mean)
    assert best is not None
    return best


# persistence ---------------------------------------------------------------


def _floats(a: Optional[np.ndarray]):
    return None if a is None else a.tolist()


def model_to_json(model: LinearModel) -> str:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "task": model.task.value,
        "language": model.language.value,
        "feature_schema_id": model.feature_schema_id,
        "classes": list(model.classes),
        "weights": _floats(model.weights),
        "bias": _floats(model.bias),
        "offset": _floats(model.offset),
        "scale": _floats(model.scale),
    }
    return json.dumps(doc, indent=1) + "\n"


def model_from_json(text: str) -> LinearModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"corrupt model file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelError("corrupt model file: not an argmine model")
    if doc.get("version") != MODEL_VERSION:
        raise ModelError(f"unsupported model version {doc.get('version')!r}")
    try:
        task = Task(doc["task"])
    except (KeyError, ValueError):
        raise ModelError(f"unknown task tag {doc.get('task')!r}") from None
    try:
        weights = np.array(doc["weights"], dtype=np.float64)
        bias = np.array(doc["bias"], dtype=np.float64)
        offset = None if doc.get("offset") is None else np.array(doc["offset"], dtype=np.float64)
        scale = None if doc.get("scale") is None else np.array(doc["scale"], dtype=np.float64)
        schema = str(doc["feature_schema_id"])
        language = Language.parse(doc.get("language", "en"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"corrupt model file: {exc}") from exc
    expected = schema_input_dim(schema)
    if weights.ndim == 2 and expected is not None and expected != weights.shape[1]:
        raise ModelError(f"schema {schema} implies {expected} features, file has {weights.shape[1]}")
    return LinearModel(task, weights, bias, schema, language, offset, scale)


def save_model(model: LinearModel, path: Union[str, Path]) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: Union[str, Path]) -> LinearModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read model {path}: {exc}") from exc
    return model_from_json(text)
