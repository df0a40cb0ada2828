"""Feed-forward network that composes two definition-word embeddings.

The network receives the super-type embedding, the modifier embedding and
three POS tags (super-type, modifier, target) and produces an embedding for
the defined word:

    s   = LeakyReLU(W_h x_h + W_m x_m)
    p_i = W_pos_i * E[pos_i]           for i in {h, m, c}
    out = W_3 LeakyReLU(W_2 LeakyReLU(W_1 (s <+> p_h <+> p_m <+> p_c)))

where <+> is concatenation.  Training minimizes 1 - cosine(out, target) with
analytic gradients (no autodiff framework); all randomness is funneled
through one seeded generator so runs are reproducible bit for bit.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from . import kernels
from .defparse import DefPair
from .embed_store import EmbeddingTable, Vector
from .errors import FormatError, NumericError, ShapeError, UnusablePairError, ZeroNormError

NONE_TAG = "NONE"

PARAM_ORDER = (
    "W_h", "b_h", "W_m", "b_m",
    "eps",
    "W_ph", "b_ph", "W_pm", "b_pm", "W_pc", "b_pc",
    "W_1", "b_1", "W_2", "b_2", "W_3", "b_3",
)

CHECKPOINT_MAGIC = b"DENNMODL"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class DennConfig:
    """Architecture hyperparameters; `dim` must match the host embedding table."""

    dim: int = 300
    pos_vocab: tuple[str, ...] = (NONE_TAG,)
    pos_dim: int = 16
    hidden1: int = 512
    hidden2: int = 512
    leaky_slope: float = 0.01
    dropout_p: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if min(self.dim, self.pos_dim, self.hidden1, self.hidden2) <= 0:
            raise ShapeError("all layer widths must be positive")
        if not (0.0 < self.leaky_slope < 1.0):
            raise ValueError(f"leaky_slope must be in (0, 1), got {self.leaky_slope}")
        if not (0.0 <= self.dropout_p < 1.0):
            raise ValueError(f"dropout_p must be in [0, 1), got {self.dropout_p}")
        if not self.pos_vocab:
            raise ValueError("pos_vocab must be nonempty")
        if len(set(self.pos_vocab)) != len(self.pos_vocab):
            raise ValueError("pos_vocab has duplicate tags")
        if NONE_TAG not in self.pos_vocab:
            object.__setattr__(self, "pos_vocab", self.pos_vocab + (NONE_TAG,))

    def pos_index(self, tag: str) -> int:
        """Index of a POS tag; unseen tags map to the reserved NONE tag."""
        try:
            return self.pos_vocab.index(tag)
        except ValueError:
            return self.pos_vocab.index(NONE_TAG)

    def param_shapes(self) -> dict[str, tuple[int, ...]]:
        d, pd, h1, h2 = self.dim, self.pos_dim, self.hidden1, self.hidden2
        p = len(self.pos_vocab)
        return {
            "W_h": (d, d), "b_h": (d,), "W_m": (d, d), "b_m": (d,),
            "eps": (p, pd),
            "W_ph": (pd, pd), "b_ph": (pd,),
            "W_pm": (pd, pd), "b_pm": (pd,),
            "W_pc": (pd, pd), "b_pc": (pd,),
            "W_1": (d + 3 * pd, h1), "b_1": (h1,),
            "W_2": (h1, h2), "b_2": (h2,),
            "W_3": (h2, d), "b_3": (d,),
        }


@dataclass
class DennModel:
    config: DennConfig
    params: dict[str, np.ndarray]
    zero_output_count: int = 0

    @classmethod
    def initialize(cls, config: DennConfig, dtype=np.float32) -> "DennModel":
        """Seeded init: fan-in-scaled uniform weights, zero biases, small POS table."""
        rng = np.random.default_rng(config.seed)
        params: dict[str, np.ndarray] = {}
        for name, shape in config.param_shapes().items():
            if name == "eps":
                params[name] = rng.uniform(-0.05, 0.05, size=shape).astype(dtype)
            elif name.startswith("b_"):
                params[name] = np.zeros(shape, dtype=dtype)
            else:
                limit = np.sqrt(6.0 / shape[0])
                params[name] = rng.uniform(-limit, limit, size=shape).astype(dtype)
        return cls(config=config, params=params)

    @property
    def dtype(self):
        return self.params["W_h"].dtype

    def cast(self, dtype) -> "DennModel":
        return DennModel(
            config=self.config,
            params={k: v.astype(dtype) for k, v in self.params.items()},
        )

    def copy(self) -> "DennModel":
        return self.cast(self.dtype)

    def check_finite(self, where: str) -> None:
        for name, arr in self.params.items():
            if not np.all(np.isfinite(arr)):
                raise NumericError(f"non-finite values in {name} {where}")


@dataclass
class TrainExample:
    vec_h: Vector
    vec_m: Vector
    pos_h: int
    pos_m: int
    pos_c: int
    target: Vector


def _check_pos_indices(config: DennConfig, *idx: int) -> None:
    p = len(config.pos_vocab)
    for i in idx:
        if not (0 <= int(i) < p):
            raise ShapeError(f"POS index {i} out of range for vocabulary of {p}")


def _dropout_masks(rng, config: DennConfig, batch: int, dtype):
    p = config.dropout_p
    shapes = [(batch, config.dim), (batch, config.hidden1), (batch, config.hidden2)]
    if p == 0.0:
        return [np.ones(s, dtype=dtype) for s in shapes]
    scale = 1.0 / (1.0 - p)
    return [(rng.random(s) >= p).astype(dtype) * dtype.type(scale) for s in shapes]


def _forward_batch(model: DennModel, X_h, X_m, ih, im, ic, train_mode: bool, rng=None):
    cfg = model.config
    dt = model.dtype
    if X_h.shape[1] != cfg.dim or X_m.shape[1] != cfg.dim:
        raise ShapeError(f"input dim {X_h.shape[1]} does not match model dim {cfg.dim}")
    _check_pos_indices(cfg, *ih, *im, *ic)
    use_dropout = bool(train_mode and cfg.dropout_p > 0.0)
    if use_dropout:
        if rng is None:
            raise ValueError("training-mode forward with dropout requires an rng")
        masks = _dropout_masks(rng, cfg, X_h.shape[0], np.dtype(dt))
    else:
        masks = [np.ones((0, 0), dtype=dt)] * 3
    p = model.params
    caches = kernels.forward_batch(
        p["W_h"], p["b_h"], p["W_m"], p["b_m"],
        p["eps"],
        p["W_ph"], p["b_ph"], p["W_pm"], p["b_pm"], p["W_pc"], p["b_pc"],
        p["W_1"], p["b_1"], p["W_2"], p["b_2"], p["W_3"], p["b_3"],
        np.ascontiguousarray(X_h, dtype=dt), np.ascontiguousarray(X_m, dtype=dt),
        np.asarray(ih, dtype=np.int64), np.asarray(im, dtype=np.int64),
        np.asarray(ic, dtype=np.int64),
        dt.type(cfg.leaky_slope), use_dropout, *masks,
    )
    return caches, masks, use_dropout


def forward(
    model: DennModel,
    vec_h: Vector,
    vec_m: Vector,
    pos_h: int,
    pos_m: int,
    pos_c: int,
    train_mode: bool = False,
    rng=None,
) -> Vector:
    """Single-example forward pass; dropout is applied only in train mode."""
    X_h = np.asarray(vec_h, dtype=model.dtype).reshape(1, -1)
    X_m = np.asarray(vec_m, dtype=model.dtype).reshape(1, -1)
    caches, _, _ = _forward_batch(
        model, X_h, X_m, [pos_h], [pos_m], [pos_c], train_mode, rng
    )
    return caches[0][0]


def loss(output: Vector, target: Vector) -> float:
    """1 - cosine(output, target); zero-norm output scores the 2.0 penalty."""
    output = np.asarray(output, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if output.shape != target.shape:
        raise ShapeError(f"shape mismatch {output.shape} vs {target.shape}")
    nt = np.linalg.norm(target)
    if nt == 0.0:
        raise ZeroNormError("loss target has zero norm")
    no = np.linalg.norm(output)
    if no == 0.0:
        return 2.0
    return float(1.0 - np.dot(output, target) / (no * nt))


def _batch_arrays(examples: list[TrainExample], dtype):
    X_h = np.stack([np.asarray(e.vec_h, dtype=dtype) for e in examples])
    X_m = np.stack([np.asarray(e.vec_m, dtype=dtype) for e in examples])
    ih = np.array([e.pos_h for e in examples], dtype=np.int64)
    im = np.array([e.pos_m for e in examples], dtype=np.int64)
    ic = np.array([e.pos_c for e in examples], dtype=np.int64)
    tgt = np.stack([np.asarray(e.target, dtype=dtype) for e in examples])
    return X_h, X_m, ih, im, ic, tgt


def loss_and_grads(
    model: DennModel,
    examples: list[TrainExample],
    train_mode: bool = False,
    rng=None,
) -> tuple[float, dict[str, np.ndarray], int]:
    """Mean loss over the batch, gradients for every parameter, zero-output count."""
    dt = model.dtype
    X_h, X_m, ih, im, ic, tgt = _batch_arrays(examples, dt)
    for row in range(tgt.shape[0]):
        if not np.any(tgt[row]):
            raise ZeroNormError(f"training target {row} has zero norm")
    caches, masks, use_dropout = _forward_batch(model, X_h, X_m, ih, im, ic, train_mode, rng)
    out, z_s, e_h, e_m, e_c, h, z_1, a_1, z_2, a_2 = caches
    losses, d_out, zero_rows = kernels.cosine_loss_batch(out, tgt)
    B = len(examples)
    d_out = d_out / dt.type(B)
    p = model.params
    grads_tuple = kernels.backward_batch(
        p["W_h"], p["W_m"],
        p["eps"],
        p["W_ph"], p["W_pm"], p["W_pc"],
        p["W_1"], p["W_2"], p["W_3"],
        X_h, X_m, ih, im, ic,
        z_s, e_h, e_m, e_c, h, z_1, a_1, z_2, a_2,
        d_out,
        dt.type(model.config.leaky_slope), use_dropout, *masks,
    )
    grads = dict(zip(PARAM_ORDER, grads_tuple))
    return float(np.mean(losses.astype(np.float64))), grads, int(zero_rows)


def backward(model: DennModel, example: TrainExample) -> dict[str, np.ndarray]:
    """Analytic gradients of the single-example loss for every parameter."""
    _, grads, _ = loss_and_grads(model, [example], train_mode=False)
    return grads


class _AdamState:
    def __init__(self, model: DennModel):
        self.m = {k: np.zeros_like(v) for k, v in model.params.items()}
        self.v = {k: np.zeros_like(v) for k, v in model.params.items()}
        self.t = 0

    def step(self, params, grads, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.t += 1
        b1t = 1.0 - beta1 ** self.t
        b2t = 1.0 - beta2 ** self.t
        for k, g in grads.items():
            g64 = g.astype(np.float64)
            self.m[k] = beta1 * self.m[k] + (1 - beta1) * g64
            self.v[k] = beta2 * self.v[k] + (1 - beta2) * g64 * g64
            update = lr * (self.m[k] / b1t) / (np.sqrt(self.v[k] / b2t) + eps)
            params[k] = (params[k].astype(np.float64) - update).astype(params[k].dtype)


def train(
    model: DennModel,
    examples: list[TrainExample],
    epochs: int = 20,
    batch_size: int = 64,
    optimizer: str = "adam",
    lr: float = 1e-3,
    seed: int = 0,
) -> tuple[DennModel, list[float]]:
    """Train in place; returns the model and the per-epoch mean loss trace.

    Shuffling, dropout masks and initialization all derive from seeds, so the
    same call twice yields bitwise-identical parameters.  Aborts with
    NumericError naming the epoch and step if any value goes non-finite.
    """
    if not examples:
        raise ValueError("no training examples")
    if lr < 0:
        raise ValueError("learning rate must be nonnegative")
    if optimizer not in ("sgd", "adam"):
        raise ValueError(f"unknown optimizer {optimizer!r}")
    if batch_size <= 0:
        raise ValueError("batch size must be positive")
    rng = np.random.default_rng(seed)
    adam = _AdamState(model) if optimizer == "adam" else None
    trace: list[float] = []
    n = len(examples)
    for epoch in range(epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for step, start in enumerate(range(0, n, batch_size)):
            batch = [examples[i] for i in order[start : start + batch_size]]
            mean_loss, grads, zero_rows = loss_and_grads(model, batch, train_mode=True, rng=rng)
            model.zero_output_count += zero_rows
            if not np.isfinite(mean_loss):
                raise NumericError(f"non-finite loss at epoch {epoch} step {step}")
            if adam is not None:
                adam.step(model.params, grads, lr)
            else:
                for k, g in grads.items():
                    model.params[k] -= (lr * g.astype(np.float64)).astype(model.params[k].dtype)
            epoch_loss += mean_loss * len(batch)
        try:
            model.check_finite(f"after epoch {epoch}")
        except NumericError as exc:
            raise NumericError(f"{exc} (epoch {epoch})") from None
        trace.append(epoch_loss / n)
    return model, trace


def predict_oov(
    model: DennModel,
    table: EmbeddingTable,
    pair: DefPair,
    pos_c: str,
) -> Vector:
    """Embed a word from its definition pair, inference mode.

    The super-type word must be in `table` (a lowercased form is tried);
    otherwise the pair is unusable and the caller must filter it out.  An
    absent or out-of-vocabulary modifier contributes a zero vector with the
    reserved NONE tag.
    """
    cfg = model.config
    if table.dim != cfg.dim:
        raise ShapeError(f"table dim {table.dim} does not match model dim {cfg.dim}")
    vec_h = table.lookup(pair.w_h)
    if vec_h is None:
        vec_h = table.lookup(pair.w_h.lower())
    if vec_h is None:
        raise UnusablePairError(f"super-type {pair.w_h!r} not in table {table.name!r}")
    pos_h = cfg.pos_index(pair.pos_h)
    if pair.w_m is not None:
        vec_m = table.lookup(pair.w_m)
        if vec_m is None:
            vec_m = table.lookup(pair.w_m.lower())
    else:
        vec_m = None
    if vec_m is None:
        vec_m = np.zeros(cfg.dim, dtype=model.dtype)
        pos_m = cfg.pos_index(NONE_TAG)
    else:
        pos_m = cfg.pos_index(pair.pos_m)
    return forward(model, vec_h, vec_m, pos_h, pos_m, cfg.pos_index(pos_c))


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------


def save_model(model: DennModel, path: str) -> None:
    """Write magic, version, config block, then parameters as little-endian f32."""
    cfg = model.config
    cfg_json = json.dumps(
        {
            "dim": cfg.dim,
            "pos_vocab": list(cfg.pos_vocab),
            "pos_dim": cfg.pos_dim,
            "hidden1": cfg.hidden1,
            "hidden2": cfg.hidden2,
            "leaky_slope": cfg.leaky_slope,
            "dropout_p": cfg.dropout_p,
            "seed": cfg.seed,
        },
        sort_keys=True,
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", CHECKPOINT_VERSION))
        fh.write(struct.pack("<I", len(cfg_json)))
        fh.write(cfg_json)
        for name in PARAM_ORDER:
            fh.write(np.ascontiguousarray(model.params[name], dtype="<f4").tobytes())


def load_model(path: str) -> DennModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise FormatError(f"{path}: not a model checkpoint")
        raw = fh.read(4)
        if len(raw) < 4:
            raise FormatError(f"{path}: truncated header")
        (version,) = struct.unpack("<I", raw)
        if version != CHECKPOINT_VERSION:
            raise FormatError(
                f"{path}: checkpoint version {version}, expected {CHECKPOINT_VERSION}"
            )
        raw = fh.read(4)
        if len(raw) < 4:
            raise FormatError(f"{path}: truncated header")
        (cfg_len,) = struct.unpack("<I", raw)
        cfg_raw = fh.read(cfg_len)
        if len(cfg_raw) < cfg_len:
            raise FormatError(f"{path}: truncated config block")
        cfg_dict = json.loads(cfg_raw.decode("utf-8"))
        cfg_dict["pos_vocab"] = tuple(cfg_dict["pos_vocab"])
        config = DennConfig(**cfg_dict)
        params = {}
        for name, shape in config.param_shapes().items():
            count = int(np.prod(shape))
            raw = fh.read(4 * count)
            if len(raw) < 4 * count:
                raise FormatError(f"{path}: truncated while reading parameter {name}")
            params[name] = np.frombuffer(raw, dtype="<f4").reshape(shape).copy()
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after parameters")
    return DennModel(config=config, params=params)
