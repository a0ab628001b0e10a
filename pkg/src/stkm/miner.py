"""Top-K spatio-temporal sequential pattern miner and the threshold baseline."""

from __future__ import annotations

import enum
import time
from bisect import insort
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .geometry import NeighborhoodConfig, neighborhood_volume, plane_sweep_join
from .model import Dataset, Pattern, ScoredPattern
from .stats import extend_seq_index, ratio_from_counts

BASE_THRESHOLD = 1.0


class Offer(enum.Enum):
    INSERTED_NOT_FULL = "inserted_not_full"
    INSERTED_EVICTED = "inserted_evicted"
    REJECTED = "rejected"


def _rank_key(entry: ScoredPattern):
    return (-entry.seq_index, entry.types)


class Ranking:
    """Bounded top-K list, descending by sequence index.

    Equal indexes are ordered lexicographically by type-id sequence. A full
    ranking only admits an offer whose index is strictly above the K-th.
    """

    def __init__(self, capacity: int, min_len: int = 2):
        if capacity < 1:
            raise ValueError("ranking capacity must be >= 1")
        self.capacity = capacity
        self.min_len = min_len
        self._entries: list[ScoredPattern] = []

    @classmethod
    def from_entries(cls, capacity: int, min_len: int, entries) -> "Ranking":
        r = cls(capacity, min_len)
        for types, idx in entries:
            r.offer(tuple(types), idx)
        return r

    @property
    def entries(self) -> list[ScoredPattern]:
        return list(self._entries)

    @property
    def full(self) -> bool:
        return len(self._entries) >= self.capacity

    def kth_index(self) -> Optional[float]:
        return self._entries[-1].seq_index if self.full else None

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ScoredPattern]:
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ranking):
            return NotImplemented
        return (self.capacity, self.min_len, self._entries) == (
            other.capacity, other.min_len, other._entries)

    def __repr__(self) -> str:
        return f"Ranking(K={self.capacity}, min_len={self.min_len}, entries={self._entries!r})"

    def offer(self, types: tuple[int, ...], seq_index: float):
        """Try to place a pattern; returns ``(Offer, evicted_or_None)``."""
        entry = ScoredPattern(tuple(types), float(seq_index))
        if not self.full:
            insort(self._entries, entry, key=_rank_key)
            return Offer.INSERTED_NOT_FULL, None
        if seq_index > self._entries[-1].seq_index:
            evicted = self._entries.pop()
            insort(self._entries, entry, key=_rank_key)
            return Offer.INSERTED_EVICTED, evicted
        return Offer.REJECTED, None


def ranking_offer(ranking: Ranking, pattern, seq_index: float):
    types = pattern.types if isinstance(pattern, (Pattern, ScoredPattern)) else tuple(pattern)
    return ranking.offer(types, seq_index)


def prune_threshold(ranking: Ranking) -> float:
    kth = ranking.kth_index()
    return BASE_THRESHOLD if kth is None else max(BASE_THRESHOLD, kth)


@dataclass(frozen=True)
class MineConfig:
    k: int = 10
    min_len: int = 2
    max_len: int = 20
    neighborhood: NeighborhoodConfig = field(default_factory=NeighborhoodConfig)
    # when set, short sequences are always expanded, even once their index
    # can no longer beat a full ranking
    strict_paper_pruning: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 2 <= self.min_len <= self.max_len:
            raise ValueError("need 2 <= min_len <= max_len")

    def as_dict(self) -> dict:
        nb = self.neighborhood
        return {
            "k": self.k,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "shape": nb.shape,
            "r": nb.radius,
            "t": nb.interval,
            "strict_paper_pruning": self.strict_paper_pruning,
            "base_threshold": BASE_THRESHOLD,
        }


@dataclass
class MineStats:
    expansions: int = 0
    joins: int = 0
    offered: int = 0
    inserted_not_full: int = 0
    inserted_evicted: int = 0
    pruned: int = 0
    soft_pruned: int = 0
    wall_seconds: float = 0.0
    # observability hooks for the monotonicity checks
    threshold_trace: list[float] = field(default_factory=lambda: [BASE_THRESHOLD])
    max_index_increase: float = float("-inf")

    def counts(self) -> dict:
        """Everything except wall time; stable across identical runs."""
        return {
            "expansions": self.expansions,
            "joins": self.joins,
            "offered": self.offered,
            "inserted_not_full": self.inserted_not_full,
            "inserted_evicted": self.inserted_evicted,
            "pruned": self.pruned,
            "soft_pruned": self.soft_pruned,
        }


class _Search:
    """Shared depth-first expansion over one dataset."""

    def __init__(self, dataset: Dataset, cfg: NeighborhoodConfig, max_len: int):
        cfg.check_dims(dataset.dims)
        self.dataset = dataset
        self.cfg = cfg
        self.max_len = max_len
        self.nbhd_volume = neighborhood_volume(cfg, dataset.dims)
        self.space_volume = dataset.extent.volume
        self.stats = MineStats()

    def seeds(self) -> Iterator[Pattern]:
        for f, inst in enumerate(self.dataset.by_type):
            if inst:
                yield Pattern((f,), None, inst)

    def children(self, pattern: Pattern) -> Iterator[Pattern]:
        """Yield every one-type extension with its sequence index, in type order."""
        self.stats.expansions += 1
        for f, candidates in enumerate(self.dataset.by_type):
            if not candidates:
                continue
            res = plane_sweep_join(pattern.tail, candidates, self.cfg, check_sorted=False)
            self.stats.joins += 1
            ratio, _, _ = ratio_from_counts(
                res.counts(), self.nbhd_volume, len(candidates), self.space_volume)
            idx = extend_seq_index(pattern.seq_index, ratio)
            if pattern.seq_index is not None:
                self.stats.max_index_increase = max(
                    self.stats.max_index_increase, idx - pattern.seq_index)
            yield Pattern(pattern.types + (f,), idx, res.joined)


class _TopK(_Search):
    def __init__(self, dataset: Dataset, cfg: MineConfig):
        super().__init__(dataset, cfg.neighborhood, cfg.max_len)
        self.mcfg = cfg
        self.ranking = Ranking(cfg.k, cfg.min_len)

    def run(self) -> None:
        for seed in self.seeds():
            self.expand(seed)

    def on_pruned(self, child: Pattern) -> None:
        """Called for every candidate cut off by the ranking threshold."""

    def expand(self, pattern: Pattern) -> None:
        st = self.stats
        for child in self.children(pattern):
            idx = child.seq_index
            if idx <= BASE_THRESHOLD:
                continue
            if len(child) >= self.mcfg.min_len:
                st.offered += 1
                decision, _ = self.ranking.offer(child.types, idx)
                if decision is Offer.REJECTED:
                    st.pruned += 1
                    self.on_pruned(child)
                    continue
                if decision is Offer.INSERTED_NOT_FULL:
                    st.inserted_not_full += 1
                else:
                    st.inserted_evicted += 1
                thr = prune_threshold(self.ranking)
                if thr != st.threshold_trace[-1]:
                    st.threshold_trace.append(thr)
            elif not self.mcfg.strict_paper_pruning and self.ranking.full \
                    and idx <= self.ranking.kth_index():
                # no descendant can beat the current K-th entry
                st.soft_pruned += 1
                self.on_pruned(child)
                continue
            if len(child) < self.max_len:
                self.expand(child)


def mine_topk(dataset: Dataset, cfg: MineConfig) -> tuple[Ranking, MineStats]:
    """Top-K patterns of length >= ``cfg.min_len`` with sequence index above 1.

    Seeds every event type, then expands depth-first in ascending type order.
    A full ranking's K-th index acts as a rising threshold: candidates that do
    not beat it are neither ranked nor expanded further.
    """
    search = _TopK(dataset, cfg)
    t0 = time.perf_counter()
    search.run()
    search.stats.wall_seconds = time.perf_counter() - t0
    return search.ranking, search.stats


class _Threshold(_Search):
    def __init__(self, dataset: Dataset, threshold: float, cfg: NeighborhoodConfig, max_len: int):
        super().__init__(dataset, cfg, max_len)
        self.threshold = threshold
        self.found: list[ScoredPattern] = []

    def expand(self, pattern: Pattern) -> None:
        for child in self.children(pattern):
            if not child.seq_index > self.threshold:
                continue
            self.found.append(ScoredPattern(child.types, child.seq_index))
            if len(child) < self.max_len:
                self.expand(child)


def mine_threshold(
    dataset: Dataset,
    threshold: float,
    cfg: MineConfig,
) -> tuple[list[ScoredPattern], MineStats]:
    """All patterns of length 2..max_len whose sequence index exceeds ``threshold``.

    Returned in depth-first discovery order, which is lexicographic in the
    type-id sequence. ``cfg.k`` and ``cfg.min_len`` are ignored.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    search = _Threshold(dataset, threshold, cfg.neighborhood, cfg.max_len)
    t0 = time.perf_counter()
    for seed in search.seeds():
        search.expand(seed)
    search.stats.wall_seconds = time.perf_counter() - t0
    return search.found, search.stats
