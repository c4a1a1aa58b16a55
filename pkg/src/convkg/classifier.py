"""Binary classifiers for link prediction: logistic regression and a small MLP.

Both train full-batch with L-BFGS (600 iterations by default), use inverse
frequency class weights, and freeze z-score normalization statistics into the
saved model so inference never depends on the training set being around.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

MLP_LAYERS = (20, 12)
DEFAULT_MAX_ITER = 600
DEFAULT_THRESHOLD = 0.5
L2_PENALTY = 1e-4


class TrainingError(ValueError):
    """Raised when training preconditions fail (e.g. single-class data)."""


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def class_weights(y: np.ndarray) -> np.ndarray:
    """Per-sample weights proportional to n / (2 * class count)."""
    n = y.shape[0]
    n_pos = int(y.sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise TrainingError("training data contains a single class")
    w_pos = n / (2.0 * n_pos)
    w_neg = n / (2.0 * n_neg)
    return np.where(y > 0.5, w_pos, w_neg)


@dataclass
class Normalizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Normalizer":
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std = np.where(std < 1e-12, 1.0, std)
        return cls(mean=mean, std=std)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.std


@dataclass
class LinkerModel:
    kind: str  # "logreg" or "mlp"
    feature_names: tuple[str, ...]
    normalizer: Normalizer
    params: list[np.ndarray] = field(default_factory=list)
    threshold: float = DEFAULT_THRESHOLD

    def logits(self, X_raw: np.ndarray) -> np.ndarray:
        X = self.normalizer.apply(np.asarray(X_raw, dtype=float))
        if self.kind == "logreg":
            w, b = self.params
            return X @ w + b[0]
        h = X
        *hidden, (w_out, b_out) = _pairs(self.params)
        for w, b in hidden:
            h = np.maximum(h @ w + b, 0.0)
        return h @ w_out + b_out[0]

    def predict_proba(self, X_raw: np.ndarray) -> np.ndarray:
        return _sigmoid(self.logits(X_raw))

    def predict(self, X_raw: np.ndarray) -> np.ndarray:
        return self.predict_proba(X_raw) >= self.threshold

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "kind": self.kind,
            "feature_names": list(self.feature_names),
            "mean": self.normalizer.mean.tolist(),
            "std": self.normalizer.std.tolist(),
            "params": [p.tolist() for p in self.params],
            "threshold": self.threshold,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LinkerModel":
        return cls(
            kind=data["kind"],
            feature_names=tuple(data["feature_names"]),
            normalizer=Normalizer(mean=np.asarray(data["mean"], dtype=float),
                                  std=np.asarray(data["std"], dtype=float)),
            params=[np.asarray(p, dtype=float) for p in data["params"]],
            threshold=float(data["threshold"]),
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path: str) -> "LinkerModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def _pairs(params: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
    return [(params[i], params[i + 1]) for i in range(0, len(params), 2)]


def _flatten(params: list[np.ndarray]) -> np.ndarray:
    return np.concatenate([p.ravel() for p in params])


def _unflatten(theta: np.ndarray, shapes: list[tuple]) -> list[np.ndarray]:
    out, pos = [], 0
    for shape in shapes:
        size = int(np.prod(shape))
        out.append(theta[pos:pos + size].reshape(shape))
        pos += size
    return out


def _mlp_shapes(n_features: int, layers: tuple[int, ...]) -> list[tuple]:
    shapes = []
    prev = n_features
    for width in layers:
        shapes.extend([(prev, width), (width,)])
        prev = width
    shapes.extend([(prev,), (1,)])
    return shapes


def _mlp_init(rng: np.random.Generator, shapes: list[tuple]) -> list[np.ndarray]:
    params = []
    for shape in shapes:
        if len(shape) == 2:
            scale = np.sqrt(2.0 / shape[0])
            params.append(rng.normal(0.0, scale, size=shape))
        else:
            params.append(np.zeros(shape))
    return params


def _loss_and_grad_logreg(theta, X, y, w, l2):
    n_feat = X.shape[1]
    wvec, b = theta[:n_feat], theta[n_feat]
    z = X @ wvec + b
    # Stable weighted cross entropy: softplus(z) - y*z.
    loss = float(np.mean(w * (np.logaddexp(0.0, z) - y * z)))
    loss += l2 * float(wvec @ wvec)
    delta = w * (_sigmoid(z) - y) / X.shape[0]
    grad = np.concatenate([X.T @ delta + 2.0 * l2 * wvec, [delta.sum()]])
    return loss, grad


def _loss_and_grad_mlp(theta, shapes, X, y, w, l2):
    params = _unflatten(theta, shapes)
    pairs = _pairs(params)
    acts = [X]
    h = X
    for wm, bm in pairs[:-1]:
        h = np.maximum(h @ wm + bm, 0.0)
        acts.append(h)
    w_out, b_out = pairs[-1]
    z = h @ w_out + b_out[0]
    loss = float(np.mean(w * (np.logaddexp(0.0, z) - y * z)))
    loss += l2 * sum(float(np.sum(wm * wm)) for wm, _ in pairs)

    n = X.shape[0]
    dz = w * (_sigmoid(z) - y) / n
    grads: list[np.ndarray] = [None] * len(params)
    grads[-2] = acts[-1].T @ dz + 2.0 * l2 * w_out
    grads[-1] = np.array([dz.sum()])
    dh = np.outer(dz, w_out)
    for layer in range(len(pairs) - 2, -1, -1):
        wm, _ = pairs[layer]
        pre_relu = acts[layer + 1]
        dh = dh * (pre_relu > 0.0)
        grads[2 * layer] = acts[layer].T @ dh + 2.0 * l2 * wm
        grads[2 * layer + 1] = dh.sum(axis=0)
        dh = dh @ wm.T
    return loss, _flatten(grads)


def train_linker(X_raw: np.ndarray, y: np.ndarray,
                 feature_names: tuple[str, ...],
                 kind: str = "mlp",
                 max_iter: int = DEFAULT_MAX_ITER,
                 threshold: float = DEFAULT_THRESHOLD,
                 seed: int = 0,
                 layers: tuple[int, ...] = MLP_LAYERS,
                 l2: float = L2_PENALTY) -> LinkerModel:
    X_raw = np.asarray(X_raw, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X_raw.ndim != 2 or X_raw.shape[0] != y.shape[0]:
        raise TrainingError("feature matrix and labels are misaligned")
    w = class_weights(y)
    normalizer = Normalizer.fit(X_raw)
    X = normalizer.apply(X_raw)

    if kind == "logreg":
        theta0 = np.zeros(X.shape[1] + 1)
        result = minimize(_loss_and_grad_logreg, theta0, jac=True,
                          args=(X, y, w, l2), method="L-BFGS-B",
                          options={"maxiter": max_iter})
        params = [result.x[:X.shape[1]].copy(), result.x[X.shape[1]:].copy()]
    elif kind == "mlp":
        shapes = _mlp_shapes(X.shape[1], layers)
        rng = np.random.default_rng(seed)
        theta0 = _flatten(_mlp_init(rng, shapes))
        result = minimize(_loss_and_grad_mlp, theta0, jac=True,
                          args=(shapes, X, y, w, l2), method="L-BFGS-B",
                          options={"maxiter": max_iter})
        params = _unflatten(result.x.copy(), shapes)
    else:
        raise TrainingError(f"unknown model kind {kind!r}")

    return LinkerModel(kind=kind, feature_names=tuple(feature_names),
                       normalizer=normalizer, params=params,
                       threshold=threshold)
