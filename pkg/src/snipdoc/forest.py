"""Random-forest statement classifier, implemented from scratch.

Trees are axis-aligned CART-style splits chosen by Gini impurity reduction
over a per-node random subset of features; each tree trains on a bootstrap
sample. All randomness comes from per-tree seeds derived from the model
seed, so training is bit-reproducible and order-independent across trees.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from . import schemas
from .extractor import InnerComment, SourceMethod
from .linkers import FEATURE_NAMES, FEATURE_SCHEMA_VERSION, extract_features
from .util import derive_seed

N_FEATURES = len(FEATURE_NAMES)
MTRY = math.ceil(math.sqrt(N_FEATURES))


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 12
    min_split: int = 2

    def validate(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_split < 2:
            raise ValueError("min_split must be >= 2")


@dataclass
class ForestModel:
    config: ForestConfig
    seed: int
    trees: list[dict]
    degenerate: bool = False
    feature_schema: int = FEATURE_SCHEMA_VERSION

    def predict(self, features: list[float]) -> bool:
        votes = sum(1 for tree in self.trees if _tree_vote(tree, features))
        return votes * 2 > len(self.trees)  # ties fall to "not linked"


def _gini(pos: int, total: int) -> float:
    if total == 0:
        return 0.0
    p = pos / total
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _leaf(labels: list[bool]) -> dict:
    pos = sum(labels)
    return {"leaf": True, "counts": [len(labels) - pos, pos]}


def _best_split(
    xs: list[list[float]], ys: list[bool], features: list[int]
) -> tuple[int, float] | None:
    total = len(ys)
    total_pos = sum(ys)
    parent = _gini(total_pos, total)
    best: tuple[int, float] | None = None
    best_score = parent - 1e-12
    for f in features:
        order = sorted(range(total), key=lambda i: xs[i][f])
        left_n = left_pos = 0
        for rank in range(total - 1):
            i = order[rank]
            left_n += 1
            left_pos += ys[i]
            value = xs[i][f]
            next_value = xs[order[rank + 1]][f]
            if value == next_value:
                continue
            right_n = total - left_n
            right_pos = total_pos - left_pos
            score = (
                left_n / total * _gini(left_pos, left_n)
                + right_n / total * _gini(right_pos, right_n)
            )
            if score < best_score:
                best_score = score
                best = (f, (value + next_value) / 2)
    return best


def _grow(
    xs: list[list[float]],
    ys: list[bool],
    rng: random.Random,
    depth: int,
    config: ForestConfig,
) -> dict:
    if (
        depth >= config.max_depth
        or len(ys) < config.min_split
        or len(set(ys)) == 1
    ):
        return _leaf(ys)
    features = rng.sample(range(N_FEATURES), MTRY)
    split = _best_split(xs, ys, features)
    if split is None:
        # the drawn subset can be constant over this node's sample; widen
        # the search so a separable node never hardens into a leaf
        split = _best_split(xs, ys, list(range(N_FEATURES)))
    if split is None:
        return _leaf(ys)
    f, threshold = split
    left_x, left_y, right_x, right_y = [], [], [], []
    for x, y in zip(xs, ys):
        if x[f] <= threshold:
            left_x.append(x)
            left_y.append(y)
        else:
            right_x.append(x)
            right_y.append(y)
    return {
        "leaf": False,
        "feature": f,
        "threshold": threshold,
        "left": _grow(left_x, left_y, rng, depth + 1, config),
        "right": _grow(right_x, right_y, rng, depth + 1, config),
    }


def _tree_vote(tree: dict, features: list[float]) -> bool:
    node = tree
    while not node["leaf"]:
        if features[node["feature"]] <= node["threshold"]:
            node = node["left"]
        else:
            node = node["right"]
    negative, positive = node["counts"]
    return positive > negative


def train_forest(
    instances: list[tuple[list[float], bool]],
    config: ForestConfig | None = None,
    seed: int = 0,
) -> ForestModel:
    """Fit a forest on (feature vector, linked) pairs.

    Single-class input produces a constant model flagged degenerate.
    Same data + same seed always yields identical trees.
    """
    config = config or ForestConfig()
    config.validate()
    if len(instances) < 2:
        raise ValueError("need at least 2 training instances")
    for features, _ in instances:
        if len(features) != N_FEATURES:
            raise ValueError(f"feature vectors must have {N_FEATURES} entries")

    labels = {label for _, label in instances}
    degenerate = len(labels) == 1
    trees = []
    n = len(instances)
    for t in range(config.n_trees):
        rng = random.Random(derive_seed(seed, "tree", t))
        sample_idx = [rng.randrange(n) for _ in range(n)]
        xs = [list(instances[i][0]) for i in sample_idx]
        ys = [instances[i][1] for i in sample_idx]
        trees.append(_grow(xs, ys, rng, 0, config))
    return ForestModel(config=config, seed=seed, trees=trees, degenerate=degenerate)


def link_forest(
    model: ForestModel, method: SourceMethod, comment: InnerComment
) -> set[int]:
    """Statements whose feature vectors win a majority of tree votes."""
    linked: set[int] = set()
    for stmt in method.body_lines:
        if not stmt.is_linkable:
            continue
        if model.predict(extract_features(method, comment, stmt)):
            linked.add(stmt.line_no)
    return linked


def save_model(model: ForestModel, path: str | Path) -> None:
    header = {
        "kind": "header",
        "feature_schema": model.feature_schema,
        "n_trees": model.config.n_trees,
        "max_depth": model.config.max_depth,
        "min_split": model.config.min_split,
        "seed": model.seed,
        "degenerate": model.degenerate,
    }
    records = [header] + [{"kind": "tree", "root": t} for t in model.trees]
    schemas.write_jsonl(path, schemas.FOREST, records)


def load_model(path: str | Path) -> ForestModel:
    records = schemas.read_jsonl(path, schemas.FOREST)
    if not records or records[0].get("kind") != "header":
        raise schemas.SchemaVersionError(path, "missing model header", schemas.FOREST)
    header = records[0]
    if header.get("feature_schema") != FEATURE_SCHEMA_VERSION:
        raise schemas.SchemaVersionError(
            path,
            f"feature schema {header.get('feature_schema')}",
            f"feature schema {FEATURE_SCHEMA_VERSION}",
        )
    config = ForestConfig(
        n_trees=header["n_trees"],
        max_depth=header["max_depth"],
        min_split=header["min_split"],
    )
    trees = [rec["root"] for rec in records[1:] if rec.get("kind") == "tree"]
    return ForestModel(
        config=config,
        seed=header["seed"],
        trees=trees,
        degenerate=header["degenerate"],
        feature_schema=header["feature_schema"],
    )
