"""One-hidden-layer perceptron: forward pass, backprop training with
momentum, and JSON model serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .features import FEATURE_ORDER

SCHEMA_VERSION = 1
PRNG_NAME = "numpy-pcg64"  # np.random.default_rng; pinned for reproducibility
_EPS = 1e-12


class ModelError(ValueError):
    """Malformed or inconsistent model file."""


class TrainingError(RuntimeError):
    """Training could not proceed (bad dataset or diverged loss)."""


@dataclass
class MlpModel:
    """tanh hidden layer, logistic sigmoid output, z-score input scaling."""

    W1: np.ndarray  # (H, input_dim)
    b1: np.ndarray  # (H,)
    W2: np.ndarray  # (1, H)
    b2: np.ndarray  # (1,)
    feat_mean: np.ndarray  # (input_dim,)
    feat_std: np.ndarray   # (input_dim,), floored at 1e-8

    def __post_init__(self):
        self.W1 = np.asarray(self.W1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64)
        self.W2 = np.asarray(self.W2, dtype=np.float64)
        self.b2 = np.asarray(self.b2, dtype=np.float64)
        self.feat_mean = np.asarray(self.feat_mean, dtype=np.float64)
        self.feat_std = np.asarray(self.feat_std, dtype=np.float64)
        h, d = self.W1.shape
        if (self.b1.shape != (h,) or self.W2.shape != (1, h)
                or self.b2.shape != (1,) or self.feat_mean.shape != (d,)
                or self.feat_std.shape != (d,)):
            raise ModelError("inconsistent model dimensions")
        for arr in (self.W1, self.b1, self.W2, self.b2,
                    self.feat_mean, self.feat_std):
            if not np.all(np.isfinite(arr)):
                raise ModelError("non-finite model parameter")
        if np.any(self.feat_std <= 0):
            raise ModelError("feat_std entries must be positive")

    @property
    def input_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W1.shape[0]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    momentum: float = 0.9
    epochs: int = 200
    hidden_dim: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be >= 1")


@dataclass(frozen=True)
class LabeledSample:
    features: np.ndarray  # (input_dim,)
    label: int  # 0 = correct pattern, 1 = defect

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _forward_batch(model: MlpModel, feats: np.ndarray):
    """Returns (z-scored input, hidden activations, output probabilities)."""
    z = (feats - model.feat_mean) / model.feat_std
    h = np.tanh(z @ model.W1.T + model.b1)
    p = _sigmoid(h @ model.W2.T + model.b2)[:, 0]
    return z, h, p


def forward(model: MlpModel, fv: np.ndarray) -> float:
    """Defect probability for one feature vector; always in (0, 1)."""
    fv = np.asarray(fv, dtype=np.float64)
    if fv.shape != (model.input_dim,):
        raise ValueError(
            f"feature vector length {fv.shape} != input_dim {model.input_dim}")
    _, _, p = _forward_batch(model, fv[None, :])
    return float(p[0])


def _stack(samples):
    feats = np.array([s.features for s in samples], dtype=np.float64)
    labels = np.array([s.label for s in samples], dtype=np.float64)
    return feats, labels


def loss(model: MlpModel, samples) -> float:
    """Mean binary cross-entropy, probabilities clamped away from 0 and 1."""
    if not samples:
        raise ValueError("empty sample list")
    feats, y = _stack(samples)
    _, _, p = _forward_batch(model, feats)
    p = np.clip(p, _EPS, 1.0 - _EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def gradient(model: MlpModel, samples):
    """Analytic gradient of loss() w.r.t. (W1, b1, W2, b2)."""
    if not samples:
        raise ValueError("empty sample list")
    feats, y = _stack(samples)
    z, h, p = _forward_batch(model, feats)
    n = feats.shape[0]
    d_out = (p - y)[:, None] / n          # (n, 1)
    g_W2 = d_out.T @ h                    # (1, H)
    g_b2 = d_out.sum(axis=0)              # (1,)
    d_hidden = (d_out @ model.W2) * (1.0 - h * h)  # (n, H)
    g_W1 = d_hidden.T @ z                 # (H, d)
    g_b1 = d_hidden.sum(axis=0)           # (H,)
    return g_W1, g_b1, g_W2, g_b2


def train(samples, cfg: TrainConfig = TrainConfig()):
    """Full-batch gradient descent with momentum.

    Deterministic given (samples, cfg). Returns (model, per-epoch loss
    history); history[0] is the loss before the first update.
    """
    if len(samples) < 2:
        raise TrainingError("need at least 2 samples")
    labels = {s.label for s in samples}
    if labels != {0, 1}:
        raise TrainingError("training set must contain both classes")
    feats, _ = _stack(samples)
    d = feats.shape[1]

    feat_mean = feats.mean(axis=0)
    feat_std = np.maximum(feats.std(axis=0), 1e-8)

    rng = np.random.default_rng(cfg.seed)
    h = cfg.hidden_dim
    W1 = rng.uniform(-1.0, 1.0, size=(h, d)) / math.sqrt(d)
    b1 = np.zeros(h)
    W2 = rng.uniform(-1.0, 1.0, size=(1, h)) / math.sqrt(h)
    b2 = np.zeros(1)
    model = MlpModel(W1, b1, W2, b2, feat_mean, feat_std)

    velocity = [np.zeros_like(a) for a in (W1, b1, W2, b2)]
    history = []
    for epoch in range(cfg.epochs):
        current = loss(model, samples)
        if not math.isfinite(current):
            raise TrainingError(f"non-finite loss at epoch {epoch}")
        history.append(current)
        grads = gradient(model, samples)
        params = (model.W1, model.b1, model.W2, model.b2)
        for v, prm, g in zip(velocity, params, grads):
            v *= cfg.momentum
            v -= cfg.learning_rate * g
            prm += v
    final = loss(model, samples)
    if not math.isfinite(final):
        raise TrainingError(f"non-finite loss at epoch {cfg.epochs}")
    history.append(final)
    return model, history


def save_model(model: MlpModel) -> bytes:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input_dim": model.input_dim,
        "hidden_dim": model.hidden_dim,
        "output_dim": 1,
        "hidden_activation": "tanh",
        "output_activation": "sigmoid",
        "feature_order": FEATURE_ORDER,
        "prng": PRNG_NAME,
        "W1": model.W1.tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.tolist(),
        "b2": model.b2.tolist(),
        "feat_mean": model.feat_mean.tolist(),
        "feat_std": model.feat_std.tolist(),
    }
    return (json.dumps(doc, indent=1) + "\n").encode("ascii")


def load_model(data: bytes) -> MlpModel:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ModelError(f"not valid JSON: {exc}") from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ModelError(f"unsupported schema version {doc.get('schema_version')!r}")
    try:
        model = MlpModel(
            W1=np.array(doc["W1"], dtype=np.float64),
            b1=np.array(doc["b1"], dtype=np.float64),
            W2=np.array(doc["W2"], dtype=np.float64),
            b2=np.array(doc["b2"], dtype=np.float64),
            feat_mean=np.array(doc["feat_mean"], dtype=np.float64),
            feat_std=np.array(doc["feat_std"], dtype=np.float64),
        )
    except KeyError as exc:
        raise ModelError(f"missing field {exc}") from None
    if model.input_dim != doc["input_dim"] or model.hidden_dim != doc["hidden_dim"]:
        raise ModelError("declared dimensions do not match weight shapes")
    return model
