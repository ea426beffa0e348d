"""A small complex-valued dense network trained with Wirtinger backprop.

Gradient convention
-------------------
For a real loss ``L`` and a complex quantity ``w`` the stored gradient is::

    g_w = dL/dRe(w) + i dL/dIm(w) = 2 dL/dconj(w)

so steepest descent is ``w <- w - lr * g_w``, and ``g_w`` is what central
differences on the real and imaginary parts of ``w`` return.

Backprop through ``a = f(s)`` carries both Wirtinger channels::

    g_s = g_a * conj(df/dz)  +  conj(g_a) * df/dzbar
          `--- z channel --'     `--- zbar channel --'

For holomorphic ``f`` the zbar channel vanishes.  Through ``s = W a + b``::

    g_W = g_s^T conj(a),   g_b = sum over batch of g_s,   g_a = g_s conj(W)

Arrays are batch-first: an input batch has shape ``(batch, features)``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .builtins import BUILTINS, make_activation
from .generalize import ComplexActivation, generalize, strategy_from_json, strategy_to_json
from .partition import PartitionedActivation

__all__ = [
    "DenseLayer",
    "Network",
    "TrainConfig",
    "DivergenceError",
    "forward",
    "loss_sqmag",
    "backward",
    "numerical_gradients",
    "gradient_check",
    "train",
    "TASKS",
    "make_task",
    "task_network",
    "run_task",
    "classify",
    "build_network",
    "save_dataset",
    "load_dataset",
    "save_trace",
]


class DivergenceError(ArithmeticError):
    """Training produced a non-finite loss."""


@dataclass
class DenseLayer:
    weights: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)
    activation: ComplexActivation

    def __post_init__(self):
        self.weights = np.array(self.weights, dtype=complex, ndmin=2)
        self.bias = np.array(self.bias, dtype=complex).reshape(-1)
        if self.bias.shape[0] != self.weights.shape[0]:
            raise ValueError(f"bias has {self.bias.shape[0]} entries for {self.weights.shape[0]} outputs")
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("layer parameters must be finite")

    @property
    def shape(self):
        return self.weights.shape

    @classmethod
    def init(
        cls, n_in: int, n_out: int, activation: ComplexActivation, rng: np.random.Generator, gain: float = 1.0
    ) -> "DenseLayer":
        """Polar initialization: uniform phase, Rayleigh magnitude with scale gain/sqrt(n_in)."""
        mag = rng.rayleigh(scale=gain / math.sqrt(n_in), size=(n_out, n_in))
        phase = rng.uniform(-math.pi, math.pi, size=(n_out, n_in))
        return cls(mag * np.exp(1j * phase), np.zeros(n_out, dtype=complex), activation)


@dataclass
class Network:
    layers: list[DenseLayer] = field(default_factory=list)
    loss: str = "sqmag"

    def __post_init__(self):
        for a, b in zip(self.layers, self.layers[1:]):
            if a.shape[0] != b.shape[1]:
                raise ValueError(f"layer shapes do not compose: {a.shape} then {b.shape}")

    def __call__(self, x):
        return forward(self, x)[0]

    def parameters(self) -> list[np.ndarray]:
        out = []
        for layer in self.layers:
            out.extend([layer.weights, layer.bias])
        return out

    # -- snapshot ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"loss": self.loss, "layers": [_layer_to_json(layer) for layer in self.layers]}

    @classmethod
    def from_json(cls, data) -> "Network":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([_layer_from_json(d) for d in data["layers"]], loss=data.get("loss", "sqmag"))


def _interleave(a: np.ndarray) -> list[float]:
    flat = a.reshape(-1)
    return np.column_stack([flat.real, flat.imag]).reshape(-1).tolist()


def _deinterleave(values, shape) -> np.ndarray:
    v = np.asarray(values, dtype=float).reshape(-1, 2)
    return (v[:, 0] + 1j * v[:, 1]).reshape(shape)


def activation_to_json(act: ComplexActivation) -> dict:
    if act.name in BUILTINS:
        return {"id": act.name, "params": dict(act.params)}
    if act.provenance is not None:
        pa, strategy = act.provenance
        return {"id": "generalized", "partition": pa.to_json(), "strategy": strategy_to_json(strategy)}
    raise ValueError(f"activation {act.name!r} cannot be serialised")


def activation_from_json(data: dict) -> ComplexActivation:
    if data["id"] == "generalized":
        return generalize(PartitionedActivation.from_json(data["partition"]), strategy_from_json(data["strategy"]))
    return make_activation(data["id"], **data.get("params", {}))


def _layer_to_json(layer: DenseLayer) -> dict:
    n_out, n_in = layer.shape
    return {
        "in": n_in,
        "out": n_out,
        "weights": _interleave(layer.weights),
        "bias": _interleave(layer.bias),
        "activation": activation_to_json(layer.activation),
    }


def _layer_from_json(d: dict) -> DenseLayer:
    shape = (int(d["out"]), int(d["in"]))
    return DenseLayer(
        _deinterleave(d["weights"], shape),
        _deinterleave(d["bias"], (shape[0],)),
        activation_from_json(d["activation"]),
    )


# -- forward / loss / backward --------------------------------------------------------


def _as_batch(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return x[None, :] if x.ndim == 1 else x


def forward(net: Network, x):
    """Run the network; returns ``(output, cache)``.

    ``cache`` holds ``(layer input, pre-activation)`` per layer.  A 1-D input
    is treated as a batch of one and returned 1-D.
    """
    single = np.ndim(x) == 1
    a = _as_batch(x)
    if net.layers and a.shape[1] != net.layers[0].shape[1]:
        raise ValueError(f"input has {a.shape[1]} features, network expects {net.layers[0].shape[1]}")
    cache = []
    for layer in net.layers:
        s = a @ layer.weights.T + layer.bias
        if not np.isfinite(s).all():
            raise OverflowError(f"non-finite pre-activation in layer {len(cache)}")
        out = np.asarray(layer.activation(s), dtype=complex)
        if not np.isfinite(out).all():
            raise OverflowError(f"non-finite activation output in layer {len(cache)} ({layer.activation.name})")
        cache.append((a, s))
        a = out
    return (a[0] if single else a), cache


def loss_sqmag(outputs, targets) -> float:
    """Sum of ``|y - t|^2`` over all units (and batch rows)."""
    d = np.asarray(outputs, dtype=complex) - np.asarray(targets, dtype=complex)
    return float(np.sum(d.real**2 + d.imag**2))


@dataclass
class Gradients:
    weights: list[np.ndarray]
    bias: list[np.ndarray]
    z_channel: list[float]  # per-layer norm of the z-channel contribution
    zbar_channel: list[float]

    def flat(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.bias):
            parts.extend([w.ravel(), b.ravel()])
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def backward(net: Network, cache, outputs, targets, derivatives: str = "auto") -> Gradients:
    """Gradients of :func:`loss_sqmag` w.r.t. every weight and bias.

    ``derivatives`` selects how activations supply Wirtinger pairs: ``"auto"``
    (closed form where available) or ``"fd"`` (always central differences).
    """
    g = 2.0 * (_as_batch(outputs) - _as_batch(targets))
    n = len(net.layers)
    gw, gb = [None] * n, [None] * n
    zc, zbc = [0.0] * n, [0.0] * n
    for i in range(n - 1, -1, -1):
        layer = net.layers[i]
        a_in, s = cache[i]
        pair = layer.activation.wirtinger(s, mode=derivatives)
        z_part = g * np.conj(pair.d_dz)
        zbar_part = np.conj(g) * pair.d_dzbar
        zc[i] = float(np.linalg.norm(z_part))
        zbc[i] = float(np.linalg.norm(zbar_part))
        gs = z_part + zbar_part
        gw[i] = gs.T @ np.conj(a_in)
        gb[i] = gs.sum(axis=0)
        g = gs @ np.conj(layer.weights)
    return Gradients(gw, gb, zc, zbc)


def numerical_gradients(net: Network, x, targets, step: float = 1e-5) -> Gradients:
    """Central-difference gradients on the real and imaginary part of every parameter."""
    x = _as_batch(x)

    def total_loss():
        return loss_sqmag(forward(net, x)[0], targets)

    gw, gb = [], []
    for layer in net.layers:
        for arr, out in ((layer.weights, gw), (layer.bias, gb)):
            grad = np.zeros_like(arr)
            for idx in np.ndindex(arr.shape):
                orig = arr[idx]
                parts = []
                for unit in (1.0, 1j):
                    arr[idx] = orig + step * unit
                    lp = total_loss()
                    arr[idx] = orig - step * unit
                    lm = total_loss()
                    arr[idx] = orig
                    parts.append((lp - lm) / (2 * step))
                grad[idx] = parts[0] + 1j * parts[1]
            out.append(grad)
    n = len(net.layers)
    return Gradients(gw, gb, [math.nan] * n, [math.nan] * n)


def gradient_check(net: Network, x, targets, step: float = 1e-5, derivatives: str = "auto") -> float:
    """Relative 2-norm difference between backprop and finite-difference gradients."""
    out, cache = forward(net, x)
    analytic = backward(net, cache, out, targets, derivatives=derivatives).flat()
    numeric = numerical_gradients(net, x, targets, step).flat()
    denom = max(np.linalg.norm(numeric), 1e-300)
    return float(np.linalg.norm(analytic - numeric) / denom)


# -- training --------------------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 200
    batch_size: int = 16
    seed: int = 0
    gradient_mode: str = "analytic"  # or "finite-difference"
    clip_norm: float | None = None  # rescale each minibatch gradient to at most this 2-norm

    def __post_init__(self):
        if self.clip_norm is not None and not self.clip_norm > 0:
            raise ValueError("clip norm must be positive")
        if not self.learning_rate > 0:
            raise ValueError("learning rate must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch size must be positive")
        if self.gradient_mode not in ("analytic", "finite-difference"):
            raise ValueError(f"unknown gradient mode {self.gradient_mode!r}")


def _mean_loss(net, x, t) -> float:
    try:
        return loss_sqmag(forward(net, x)[0], t) / x.shape[0]
    except OverflowError as exc:
        raise DivergenceError(str(exc)) from exc


def train(net: Network, dataset, config: TrainConfig) -> list[float]:
    """Minibatch gradient descent; returns the mean per-sample loss before
    training followed by one entry per epoch.  Deterministic for a given seed.
    """
    x, t = (_as_batch(a) for a in dataset)
    if x.shape[0] == 0:
        raise ValueError("empty dataset")
    if x.shape[0] != t.shape[0]:
        raise ValueError("inputs and targets differ in length")
    with np.errstate(over="ignore", invalid="ignore"):
        return _train(net, x, t, config)


def _train(net, x, t, config) -> list[float]:
    rng = np.random.default_rng(config.seed)
    trace = [_mean_loss(net, x, t)]
    for _ in range(config.epochs):
        order = rng.permutation(x.shape[0])
        for start in range(0, x.shape[0], config.batch_size):
            idx = order[start : start + config.batch_size]
            xb, tb = x[idx], t[idx]
            try:
                if config.gradient_mode == "analytic":
                    out, cache = forward(net, xb)
                    grads = backward(net, cache, out, tb)
                else:
                    grads = numerical_gradients(net, xb, tb)
            except OverflowError as exc:
                raise DivergenceError(str(exc)) from exc
            scale = config.learning_rate / len(idx)
            if config.clip_norm is not None:
                norm = np.linalg.norm(grads.flat()) / len(idx)
                if norm > config.clip_norm:
                    scale *= config.clip_norm / norm
            for layer, gw, gb in zip(net.layers, grads.weights, grads.bias):
                layer.weights -= scale * gw
                layer.bias -= scale * gb
        loss = _mean_loss(net, x, t)
        if not math.isfinite(loss):
            raise DivergenceError(f"loss became {loss} after epoch {len(trace)}")
        trace.append(loss)
    return trace


# -- toy tasks -------------------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    name: str
    n_in: int
    n_out: int
    hidden: int
    make_data: Callable[[np.random.Generator], tuple[np.ndarray, np.ndarray]]
    config: TrainConfig
    gain: float = 1.0
    doc: str = ""


def _disk(rng, n, radius=1.0):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(-math.pi, math.pi, n))


_LINMAP = np.array([[0.8 - 0.3j, 0.2 + 0.5j], [-0.4 + 0.1j, 0.6 + 0.6j]])


def _linmap_data(rng):
    x = np.column_stack([_disk(rng, 64), _disk(rng, 64)])
    return x, x @ _LINMAP.T


def _z2_data(rng):
    z = _disk(rng, 64)
    return z[:, None], (z * z)[:, None]


def _quadrant_data(rng, n=64, margin=math.pi / 12):
    # phases keep a margin from the axes and radii stay away from the origin
    cls = rng.integers(0, 4, n)
    phase = cls * (math.pi / 2) + rng.uniform(margin, math.pi / 2 - margin, n)
    z = rng.uniform(0.5, 1.0, n) * np.exp(1j * phase)
    t = np.zeros((n, 4), dtype=complex)
    t[np.arange(n), cls] = 1.0
    # widely linear input (z, conj z): without conj z a holomorphic network
    # cannot approximate real-valued class indicators
    return np.column_stack([z, np.conj(z)]), t


# one recipe for every activation; the small init gain keeps pre-activations
# near the real axis, where erf-based activations stay finite
_RECIPE = TrainConfig(learning_rate=0.1, epochs=200, batch_size=16, clip_norm=1.0)

TASKS: dict[str, Task] = {
    "linmap": Task("linmap", 2, 2, 16, _linmap_data, _RECIPE, 0.1, "fit a fixed complex 2x2 linear map"),
    "z2": Task("z2", 1, 1, 16, _z2_data, _RECIPE, 0.1, "regress z -> z^2 on the unit disk"),
    "quadrant": Task(
        "quadrant", 2, 4, 16, _quadrant_data, _RECIPE, 0.1, "phase-quadrant classification, magnitude readout"
    ),
}


def make_task(name: str, seed: int = 0):
    """Dataset ``(inputs, targets)`` for a named toy task."""
    if name not in TASKS:
        raise KeyError(f"unknown task {name!r}; choose from {', '.join(TASKS)}")
    return TASKS[name].make_data(np.random.default_rng(10_000 + seed))


def build_network(
    sizes: Sequence[int], activation: ComplexActivation, seed: int = 0, readout=None, gain: float = 1.0
) -> Network:
    """Dense network with ``activation`` on hidden layers and ``readout`` (identity by default) last."""
    rng = np.random.default_rng(seed)
    readout = readout or make_activation("identity")
    layers = []
    for i, (n_in, n_out) in enumerate(zip(sizes, sizes[1:])):
        act = readout if i == len(sizes) - 2 else activation
        layers.append(DenseLayer.init(n_in, n_out, act, rng, gain))
    return Network(layers)


def task_network(name: str, activation: ComplexActivation, seed: int = 0) -> Network:
    """The standard one-hidden-layer network for a toy task."""
    task = TASKS[name]
    return build_network([task.n_in, task.hidden, task.n_out], activation, seed=seed, gain=task.gain)


def run_task(name: str, activation: ComplexActivation, seed: int = 0, config: TrainConfig | None = None):
    """Train the standard network on a toy task; returns ``(network, trace)``."""
    if name not in TASKS:
        raise KeyError(f"unknown task {name!r}; choose from {', '.join(TASKS)}")
    config = config or TASKS[name].config
    net = task_network(name, activation, seed)
    trace = train(net, make_task(name, seed), replace(config, seed=seed))
    return net, trace


def classify(outputs) -> np.ndarray:
    """Predicted class per row: the unit with the largest magnitude."""
    return np.argmax(np.abs(_as_batch(outputs)), axis=1)


# -- CSV -------------------------------------------------------------------------------


def save_dataset(path, inputs, targets):
    x, t = _as_batch(inputs), _as_batch(targets)
    header = [f"in{i}_{p}" for i in range(x.shape[1]) for p in ("re", "im")]
    header += [f"out{i}_{p}" for i in range(t.shape[1]) for p in ("re", "im")]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for xr, tr in zip(x, t):
            row = np.column_stack([np.concatenate([xr, tr]).real, np.concatenate([xr, tr]).imag]).ravel()
            w.writerow([f"{v:.17g}" for v in row])


def load_dataset(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    n_in = sum(1 for h in header if h.startswith("in")) // 2
    vals = body[:, 0::2] + 1j * body[:, 1::2]
    return vals[:, :n_in], vals[:, n_in:]


def save_trace(path, trace):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["epoch", "loss"])
        for i, v in enumerate(trace):
            w.writerow([i, f"{v:.17g}"])
