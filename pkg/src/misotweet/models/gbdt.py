"""Gradient-boosted regression trees on the binary-logistic objective.

Per boosting round, with p = sigma(raw score):

    g_i = p_i - y_i           h_i = p_i (1 - p_i)

and both statistics are multiplied by ``scale_pos_weight`` for positive
samples before any aggregation. Trees are grown by exact greedy split search
over every feature; a candidate split at threshold ``thr`` routes samples by
``value < thr`` (zeros take whichever side the comparison sends them to),
and its gain is

    0.5 * [ G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - (G_L+G_R)^2/(H_L+H_R+lambda) ]

A node stays a leaf when the best gain is <= 0, either child's hessian mass
falls below ``min_child_hessian``, or the depth limit is reached. Leaf
weights are -G/(H+lambda); the model adds ``eta`` times the leaf value per
tree on top of logit(base_score).

Everything is deterministic: ties go to the lowest feature index and then
the lowest threshold, and multi-threaded split search partitions features
into fixed-size chunks whose results are merged in chunk order, so the
trained model is bit-identical at any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ConfigError, DataError
from ..features import FeatureVector
from .linear import _as_matrix, _check_compat, _sigmoid, _validate_binary

_CHUNK = 64  # feature columns per split-search work unit (fixed; never tied to thread count)


@dataclass(frozen=True)
class GBDTConfig:
    objective: str = "binary:logistic"
    scale_pos_weight: float = 0.8
    reg_lambda: float = 3.0
    eta: float = 0.3
    max_depth: int = 6
    n_trees: int = 100
    min_child_hessian: float = 1.0
    base_score: float = 0.5

    def __post_init__(self):
        if self.objective != "binary:logistic":
            raise ConfigError(f"unsupported objective {self.objective!r}")
        for name in ("scale_pos_weight", "reg_lambda", "eta"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.max_depth < 1 or self.n_trees < 1:
            raise ConfigError("max_depth and n_trees must be at least 1")
        if self.min_child_hessian < 0:
            raise ConfigError("min_child_hessian must be non-negative")
        if not 0.0 < self.base_score < 1.0:
            raise ConfigError("base_score must lie strictly between 0 and 1")


def xgb_like() -> GBDTConfig:
    """Preset mirroring the first boosted run's reported parameters."""
    return GBDTConfig()


def cb_like() -> GBDTConfig:
    """Second preset; same engine and parameters, kept as a named variant."""
    return GBDTConfig()


PRESETS = {"xgb-like": xgb_like, "cb-like": cb_like}


@dataclass(frozen=True)
class TreeNode:
    """Either a split (feature/threshold/children) or a leaf (weight)."""

    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    leaf_value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


Tree = tuple[TreeNode, ...]


@dataclass(frozen=True)
class LeafStat:
    """Training-time statistics of one leaf (kept only when tracing)."""

    node: int
    samples: np.ndarray
    grad_sum: float
    hess_sum: float
    value: float


@dataclass(frozen=True)
class RoundTrace:
    grad: np.ndarray
    hess: np.ndarray
    leaves: tuple[LeafStat, ...]


@dataclass
class GBDTModel:
    trees: list[Tree]
    config: GBDTConfig
    fingerprint: str
    loss_history: list[float] = field(default_factory=list, repr=False, compare=False)
    trace: list[RoundTrace] | None = field(default=None, repr=False, compare=False)

    @property
    def base_margin(self) -> float:
        b = self.config.base_score
        return math.log(b / (1.0 - b))


def _split_scan(cols: np.ndarray, g: np.ndarray, h: np.ndarray, lam: float,
                min_child_h: float, g_total: float, h_total: float):
    """Best split per column of ``cols``; returns (gain, threshold) arrays."""
    m, k = cols.shape
    gains = np.full(k, -np.inf)
    thresholds = np.zeros(k)
    if m < 2:
        return gains, thresholds
    order = np.argsort(cols, axis=0, kind="stable")
    vals = np.take_along_axis(cols, order, axis=0)
    gl = np.cumsum(g[order], axis=0)[:-1]
    hl = np.cumsum(h[order], axis=0)[:-1]
    gr = g_total - gl
    hr = h_total - hl
    parent = g_total * g_total / (h_total + lam)
    gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
    valid = (vals[:-1] != vals[1:]) & (hl >= min_child_h) & (hr >= min_child_h)
    gain[~valid] = -np.inf
    best = np.argmax(gain, axis=0)  # first maximum = lowest threshold
    sel = np.arange(k)
    gains = gain[best, sel]
    lo = vals[best, sel]
    hi = vals[best + 1, sel]
    thresholds = lo + 0.5 * (hi - lo)
    return gains, thresholds


def _find_best_split(X: np.ndarray, idx: np.ndarray, g: np.ndarray, h: np.ndarray,
                     cfg: GBDTConfig, pool: ThreadPoolExecutor | None,
                     g_total: float, h_total: float):
    """Scan all features; ties resolved to the lowest feature index."""
    d = X.shape[1]
    if d == 0:
        return None
    gn, hn = g[idx], h[idx]

    def work(start: int):
        stop = min(start + _CHUNK, d)
        cols = X[np.ix_(idx, np.arange(start, stop))]
        return _split_scan(cols, gn, hn, cfg.reg_lambda, cfg.min_child_hessian,
                           g_total, h_total)

    starts = range(0, d, _CHUNK)
    results = list(pool.map(work, starts)) if pool is not None else [work(s) for s in starts]
    gains = np.concatenate([r[0] for r in results])
    thresholds = np.concatenate([r[1] for r in results])
    feature = int(np.argmax(gains))
    if not np.isfinite(gains[feature]) or gains[feature] <= 0.0:
        return None
    return feature, float(thresholds[feature]), float(gains[feature])


def _build_tree(X: np.ndarray, g: np.ndarray, h: np.ndarray, cfg: GBDTConfig,
                pool: ThreadPoolExecutor | None, collect_stats: bool):
    nodes: list[TreeNode] = [TreeNode()]
    stats: list[LeafStat] = []
    all_idx = np.arange(X.shape[0])
    stack: list[tuple[int, np.ndarray, int]] = [(0, all_idx, 0)]
    while stack:
        node_id, idx, depth = stack.pop()
        # sample indices stay in ascending order, fixing the reduction order
        g_total = float(np.sum(g[idx]))
        h_total = float(np.sum(h[idx]))
        split = None
        if depth < cfg.max_depth and idx.size >= 2:
            split = _find_best_split(X, idx, g, h, cfg, pool, g_total, h_total)
        if split is None:
            value = -g_total / (h_total + cfg.reg_lambda)
            nodes[node_id] = TreeNode(leaf_value=value)
            if collect_stats:
                stats.append(LeafStat(node_id, idx, g_total, h_total, value))
            continue
        feature, threshold, _ = split
        mask = X[idx, feature] < threshold
        left_id = len(nodes)
        nodes.append(TreeNode())  # left placeholder
        nodes.append(TreeNode())  # right placeholder
        nodes[node_id] = TreeNode(feature=feature, threshold=threshold,
                                  left=left_id, right=left_id + 1)
        # push right first so the left child is processed (and numbered) first
        stack.append((left_id + 1, idx[~mask], depth + 1))
        stack.append((left_id, idx[mask], depth + 1))
    return tuple(nodes), stats


def _tree_margins(tree: Tree, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.float64)
    stack: list[tuple[int, np.ndarray]] = [(0, np.arange(X.shape[0]))]
    while stack:
        node_id, idx = stack.pop()
        node = tree[node_id]
        if node.is_leaf:
            out[idx] = node.leaf_value
            continue
        mask = X[idx, node.feature] < node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


def gradient_hessian(y: np.ndarray, p: np.ndarray, scale_pos_weight: float):
    """First/second derivatives of the weighted log-loss wrt the raw score."""
    g = p - y
    h = p * (1.0 - p)
    pos = y == 1.0
    g[pos] *= scale_pos_weight
    h[pos] *= scale_pos_weight
    return g, h


def weighted_logloss(y: np.ndarray, raw: np.ndarray, scale_pos_weight: float) -> float:
    """Mean log-loss with positives weighted by ``scale_pos_weight``."""
    weights = np.where(y == 1.0, scale_pos_weight, 1.0)
    log_p = -np.logaddexp(0.0, -raw)
    log_1mp = -np.logaddexp(0.0, raw)
    losses = -(y * log_p + (1.0 - y) * log_1mp)
    return float((weights * losses).sum() / weights.sum())


def train_gbdt(
    X: Sequence[FeatureVector] | np.ndarray,
    y: Sequence[int] | np.ndarray,
    cfg: GBDTConfig | None = None,
    n_threads: int = 1,
    collect_trace: bool = False,
) -> GBDTModel:
    """Boost ``cfg.n_trees`` rounds; bit-identical at any ``n_threads``."""
    cfg = cfg or GBDTConfig()
    mat, fingerprint = _as_matrix(X)
    labels = np.asarray(y, dtype=np.float64)
    _validate_binary(mat, labels)

    raw = np.full(mat.shape[0], math.log(cfg.base_score / (1.0 - cfg.base_score)))
    trees: list[Tree] = []
    trace: list[RoundTrace] = []
    loss_history = [weighted_logloss(labels, raw, cfg.scale_pos_weight)]
    pool = ThreadPoolExecutor(max_workers=n_threads) if n_threads > 1 else None
    try:
        for _ in range(cfg.n_trees):
            p = _sigmoid(raw)
            g, h = gradient_hessian(labels, p, cfg.scale_pos_weight)
            tree, stats = _build_tree(mat, g, h, cfg, pool, collect_trace)
            trees.append(tree)
            raw = raw + cfg.eta * _tree_margins(tree, mat)
            loss_history.append(weighted_logloss(labels, raw, cfg.scale_pos_weight))
            if collect_trace:
                trace.append(RoundTrace(grad=g, hess=h, leaves=tuple(stats)))
    finally:
        if pool is not None:
            pool.shutdown()
    return GBDTModel(
        trees=trees,
        config=cfg,
        fingerprint=fingerprint,
        loss_history=loss_history,
        trace=trace if collect_trace else None,
    )


def _route(tree: Tree, dense: np.ndarray) -> float:
    node = tree[0]
    while not node.is_leaf:
        node = tree[node.left] if dense[node.feature] < node.threshold else tree[node.right]
    return node.leaf_value


def predict_margin(model: GBDTModel, dense: np.ndarray) -> float:
    return model.base_margin + model.config.eta * sum(_route(t, dense) for t in model.trees)


def predict_gbdt(model: GBDTModel, x: FeatureVector | np.ndarray) -> float:
    """sigma(logit(base_score) + eta * sum of leaf values along x's paths)."""
    # trees record only feature indices, so take the expected length from x
    expected = x.length if isinstance(x, FeatureVector) else np.asarray(x).shape[-1]
    dense = _check_compat(model.fingerprint, expected, x)
    if not model.trees:
        return model.config.base_score
    return float(_sigmoid(np.array([predict_margin(model, dense)]))[0])


def predict_gbdt_batch(
    model: GBDTModel, X: Sequence[FeatureVector] | np.ndarray
) -> np.ndarray:
    if isinstance(X, np.ndarray):
        mat = np.asarray(X, dtype=np.float64)
    else:
        mat = np.stack([_check_compat(model.fingerprint, v.length, v) for v in X])
    raw = np.full(mat.shape[0], model.base_margin)
    for tree in model.trees:
        raw = raw + model.config.eta * _tree_margins(tree, mat)
    return _sigmoid(raw)
