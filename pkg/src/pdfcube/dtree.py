"""Decision-tree classifier from (mean, std) to a distribution kind.

Greedy CART with Gini impurity. Split candidates per feature are the
equal-frequency quantile boundaries implied by ``max_bins``; descent
goes left when feature < threshold, right otherwise. Training is fully
deterministic for fixed inputs.
"""

from dataclasses import dataclass

import numpy as np

from .distfit import DistributionKind

_FEATURES = 2  # mean, std


@dataclass(frozen=True)
class Hyperparams:
    depth: int
    max_bins: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.max_bins < 2:
            raise ValueError("max_bins must be >= 2")


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: object
    right: object


@dataclass(frozen=True)
class Leaf:
    kind: DistributionKind


@dataclass(frozen=True)
class DecisionTreeModel:
    root: object
    trained_hyperparams: Hyperparams

    def predict(self, mu, sigma):
        node = self.root
        point = (mu, sigma)
        while isinstance(node, Split):
            node = node.left if point[node.feature] < node.threshold else node.right
        return node.kind


def _gini(counts, n):
    p = counts / n
    return 1.0 - float(np.sum(p * p))


def _majority(y, n_classes):
    counts = np.bincount(y, minlength=n_classes)
    return int(counts.argmax())  # ties -> smallest class index = kind order


def _candidate_thresholds(col, max_bins):
    qs = np.quantile(col, np.arange(1, max_bins) / max_bins)
    return np.unique(qs)


def _best_split(X, y, max_bins, n_classes):
    n = len(y)
    parent = _gini(np.bincount(y, minlength=n_classes), n)
    best = None
    best_gain = 1e-12  # require a strict impurity decrease
    for feature in range(_FEATURES):
        col = X[:, feature]
        for threshold in _candidate_thresholds(col, max_bins):
            mask = col < threshold
            nl = int(mask.sum())
            if nl == 0 or nl == n:
                continue
            gl = _gini(np.bincount(y[mask], minlength=n_classes), nl)
            gr = _gini(np.bincount(y[~mask], minlength=n_classes), n - nl)
            gain = parent - (nl * gl + (n - nl) * gr) / n
            if gain > best_gain:
                best_gain = gain
                best = (feature, float(threshold), mask)
    return best


def _grow(X, y, depth_left, max_bins, n_classes):
    if depth_left == 0 or len(y) < 2 or np.all(y == y[0]):
        return Leaf(list(DistributionKind)[_majority(y, n_classes)])
    found = _best_split(X, y, max_bins, n_classes)
    if found is None:
        return Leaf(list(DistributionKind)[_majority(y, n_classes)])
    feature, threshold, mask = found
    left = _grow(X[mask], y[mask], depth_left - 1, max_bins, n_classes)
    right = _grow(X[~mask], y[~mask], depth_left - 1, max_bins, n_classes)
    return Split(feature, threshold, left, right)


def _as_arrays(labels):
    items = list(labels)
    if not items:
        raise ValueError("labels must be nonempty")
    X = np.array([(m, s) for m, s, _ in items], dtype=np.float64)
    y = np.array([k.order for _, _, k in items], dtype=np.int64)
    return X, y


def train(labels, hp, seed=0):
    """Train on (mean, std, kind) triples. ``seed`` is kept for API
    symmetry with tune(); training itself is deterministic."""
    X, y = _as_arrays(labels)
    if len(y) < 2:
        raise ValueError("training needs at least two labeled examples")
    n_classes = len(DistributionKind)
    root = _grow(X, y, hp.depth, hp.max_bins, n_classes)
    return DecisionTreeModel(root, hp)


def predict(model, mu, sigma):
    return model.predict(mu, sigma)


def model_error(model, labels):
    """Misclassification fraction on a labeled set."""
    items = list(labels)
    if not items:
        raise ValueError("model_error requires a nonempty set")
    wrong = sum(1 for m, s, k in items if model.predict(m, s) is not k)
    return wrong / len(items)


def tune(labels, depth_grid, bins_grid, split_fraction, seed=0, tolerance=1e-3):
    """Smallest (depth, max_bins) whose validation error is within
    ``tolerance`` of the grid minimum."""
    if not depth_grid or not bins_grid:
        raise ValueError("grids must be nonempty")
    if not 0 < split_fraction < 1:
        raise ValueError("split_fraction must be in (0, 1)")
    items = list(labels)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(items))
    cut = int(len(items) * split_fraction)
    if cut == 0 or cut == len(items):
        raise ValueError("split produces an empty partition")
    train_set = [items[i] for i in order[:cut]]
    valid_set = [items[i] for i in order[cut:]]

    results = {}
    for depth in sorted(depth_grid):
        for bins in sorted(bins_grid):
            hp = Hyperparams(depth, bins)
            results[(depth, bins)] = model_error(train(train_set, hp), valid_set)
    floor = min(results.values())
    for depth, bins in sorted(results):
        if results[(depth, bins)] <= floor + tolerance:
            return Hyperparams(depth, bins)
    raise AssertionError("unreachable: minimum always qualifies")


def save_model(model, path):
    """Preorder node list, one node per line."""
    lines = []

    def walk(node):
        if isinstance(node, Leaf):
            lines.append(f"leaf {node.kind.value}")
        else:
            lines.append(f"split {node.feature} {node.threshold!r}")
            walk(node.left)
            walk(node.right)

    walk(model.root)
    with open(path, "w") as f:
        f.write(f"hyperparams {model.trained_hyperparams.depth} "
                f"{model.trained_hyperparams.max_bins}\n")
        f.write("\n".join(lines) + "\n")


def load_model(path):
    with open(path) as f:
        lines = [line.strip() for line in f if line.strip()]
    if not lines or not lines[0].startswith("hyperparams"):
        raise ValueError(f"{path}: not a serialized tree model")
    _, depth, bins = lines[0].split()
    it = iter(lines[1:])

    def parse():
        parts = next(it).split()
        if parts[0] == "leaf":
            return Leaf(DistributionKind(parts[1]))
        if parts[0] == "split":
            feature = int(parts[1])
            threshold = float(parts[2])
            return Split(feature, threshold, parse(), parse())
        raise ValueError(f"{path}: bad node line {' '.join(parts)!r}")

    root = parse()
    return DecisionTreeModel(root, Hyperparams(int(depth), int(bins)))
