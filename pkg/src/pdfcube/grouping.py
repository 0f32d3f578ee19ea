"""Work deduplication: stat-keyed point groups and the cross-window
reuse cache.

Default group keys quantize (mean, std) to 9 significant digits, which
matches points with identical statistics but can merge distinct vectors
that happen to share them. Strict keys hash the full observation vector
and guarantee baseline-identical results. An optional epsilon widens
the quantizer to a tolerance merge.
"""

import hashlib
import threading
from dataclasses import dataclass, field


def quantize(value, digits=9):
    """Round to ``digits`` significant decimal digits."""
    if value == 0.0:
        return 0.0
    return float(f"{value:.{digits - 1}e}")


def stat_key(record, digits=9, epsilon=None):
    """Group key from a record's (mean, std)."""
    m, s = record.stats.mean, record.stats.std
    if epsilon is not None:
        return (round(m / epsilon), round(s / epsilon))
    return (quantize(m, digits), quantize(s, digits))


def strict_key(record):
    """64-bit content hash of the full observation vector."""
    digest = hashlib.blake2b(record.values.tobytes(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class PointGroup:
    key: object
    representative: object  # PointRecord
    member_ids: tuple


def group_window(records, key_fn=stat_key):
    """Partition records by key; representative is the smallest point id.

    Output order (by representative id) is independent of input order.
    """
    if not records:
        raise ValueError("group_window requires at least one record")
    buckets = {}
    for rec in records:
        buckets.setdefault(key_fn(rec), []).append(rec)
    groups = []
    for key, members in buckets.items():
        members.sort(key=lambda r: r.id)
        groups.append(
            PointGroup(key, members[0], tuple(m.id for m in members))
        )
    groups.sort(key=lambda g: g.representative.id)
    return groups


def expand_results(groups, fits):
    """Per-point fit map: every member id gets its group's fit."""
    out = {}
    for group in groups:
        try:
            fit = fits[group.key]
        except KeyError:
            raise KeyError(f"no fit for group with representative {group.representative.id}")
        for pid in group.member_ids:
            out[pid] = fit
    return out


@dataclass
class ReuseCache:
    """Insert-once fit cache shared across windows of one slice run."""

    entries: dict = field(default_factory=dict)
    hits: int = 0
    misses: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def get(self, key):
        with self._lock:
            fit = self.entries.get(key)
            if fit is not None:
                self.hits += 1
            else:
                self.misses += 1
            return fit

    def insert(self, key, fit):
        """First insert wins; returns the stored fit."""
        with self._lock:
            return self.entries.setdefault(key, fit)

    def get_or_fit(self, key, fit_fn):
        """(fit, hit) pair; fit_fn runs only on a miss."""
        fit = self.get(key)
        if fit is not None:
            return fit, True
        return self.insert(key, fit_fn()), False
