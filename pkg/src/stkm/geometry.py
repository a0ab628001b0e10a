"""Neighborhood membership, neighborhood volumes and the spatial join."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .model import EventInstance

CUBE = "cube"
CYLINDER = "cylinder"
SHAPES = (CUBE, CYLINDER)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class NeighborhoodConfig:
    """Shape and size of the neighborhood space around each instance.

    For a cube, ``radius`` is the Chebyshev half-width (side ``2 * radius``);
    for a cylinder it is the Euclidean radius of the disc.
    """

    shape: str = CUBE
    radius: float = 10.0
    interval: float = 10.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ConfigError(f"unknown neighborhood shape {self.shape!r}")
        if not self.radius > 0 or not self.interval > 0:
            raise ConfigError("radius and interval must be positive")

    def check_dims(self, dims: int) -> None:
        if dims not in (1, 2):
            raise ConfigError(f"unsupported spatial dimensionality {dims}")
        if self.shape == CYLINDER and dims != 2:
            raise ConfigError("cylinder neighborhoods need 2-D spatial data")


def spatial_distance(a: Sequence[float], b: Sequence[float], shape: str) -> float:
    if shape == CUBE:
        return max(abs(p - q) for p, q in zip(a, b))
    return math.hypot(*(p - q for p, q in zip(a, b)))


def is_neighbor(e: EventInstance, p: EventInstance, cfg: NeighborhoodConfig) -> bool:
    """True iff ``p`` lies in the neighborhood of ``e``.

    Time must move strictly forward and by at most ``cfg.interval``; both the
    spatial and the upper temporal bound are closed.
    """
    dt = p.time - e.time
    if not 0 < dt <= cfg.interval:
        return False
    return spatial_distance(e.location, p.location, cfg.shape) <= cfg.radius


def neighborhood_volume(cfg: NeighborhoodConfig, dims: int) -> float:
    cfg.check_dims(dims)
    if cfg.shape == CUBE:
        return (2 * cfg.radius) ** dims * cfg.interval
    return math.pi * cfg.radius**2 * cfg.interval


@dataclass(frozen=True)
class JoinResult:
    """Neighbors of every tail instance among the candidates.

    ``per_tail[i]`` lists the neighbors of ``tail[i]`` in candidate order;
    ``joined`` is their deduplicated union in candidate order.
    """

    tail: tuple[EventInstance, ...]
    per_tail: tuple[tuple[EventInstance, ...], ...]
    joined: tuple[EventInstance, ...]

    def counts(self) -> list[int]:
        return [len(n) for n in self.per_tail]

    def as_sets(self) -> dict[str, frozenset[str]]:
        return {
            e.instance_id: frozenset(p.instance_id for p in nbrs)
            for e, nbrs in zip(self.tail, self.per_tail)
        }


EMPTY_JOIN = JoinResult((), (), ())


def _union(candidates: Sequence[EventInstance], hit_idx: set[int]) -> tuple[EventInstance, ...]:
    return tuple(candidates[i] for i in sorted(hit_idx))


def naive_join(
    tail: Sequence[EventInstance],
    candidates: Sequence[EventInstance],
    cfg: NeighborhoodConfig,
) -> JoinResult:
    per_tail = []
    hit_idx: set[int] = set()
    for e in tail:
        nbrs = []
        for j, p in enumerate(candidates):
            if is_neighbor(e, p, cfg):
                nbrs.append(p)
                hit_idx.add(j)
        per_tail.append(tuple(nbrs))
    return JoinResult(tuple(tail), tuple(per_tail), _union(candidates, hit_idx))


def _check_time_sorted(items: Sequence[EventInstance], what: str) -> None:
    for a, b in zip(items, items[1:]):
        if b.time < a.time:
            raise ValueError(f"{what} must be sorted by time")


def plane_sweep_join(
    tail: Sequence[EventInstance],
    candidates: Sequence[EventInstance],
    cfg: NeighborhoodConfig,
    check_sorted: bool = True,
) -> JoinResult:
    """Join ``tail`` against ``candidates`` with one forward sweep over time.

    Both inputs must be sorted by time. The active window holds candidates
    with ``0 < p.time - e.time <= interval`` for the current tail instance
    ``e``; it is kept ordered by first coordinate so each probe only tests
    the slice ``|p.x - e.x| <= radius`` with the exact predicate.
    """
    if check_sorted:
        _check_time_sorted(tail, "tail")
        _check_time_sorted(candidates, "candidates")
    if not tail or not candidates:
        return JoinResult(tuple(tail), tuple(() for _ in tail), ())

    radius, interval, shape = cfg.radius, cfg.interval, cfg.shape
    times = [p.time for p in candidates]
    m = len(candidates)
    window: list[tuple[float, int]] = []  # (x, candidate index), sorted
    lo = hi = 0
    hit_idx: set[int] = set()
    per_tail = []

    for e in tail:
        et = e.time
        if lo == hi:
            # empty window: jump straight past candidates at or before e
            lo = hi = max(hi, bisect_right(times, et, hi))
        while lo < hi and times[lo] - et <= 0:
            del window[bisect_left(window, (candidates[lo].location[0], lo))]
            lo += 1
        while hi < m and times[hi] - et <= interval:
            if times[hi] - et > 0:
                window.insert(bisect_left(window, (candidates[hi].location[0], hi)),
                              (candidates[hi].location[0], hi))
            else:
                # only reachable when lo == hi; keep lo in step
                lo = hi + 1
            hi += 1

        ex = e.location[0]
        slack = 1e-9 * (1.0 + abs(ex) + radius)
        start = bisect_left(window, (ex - radius - slack, -1))
        stop_x = ex + radius + slack
        nbrs = []
        for k in range(start, len(window)):
            x, j = window[k]
            if x > stop_x:
                break
            p = candidates[j]
            if spatial_distance(e.location, p.location, shape) <= radius:
                nbrs.append(j)
        nbrs.sort()
        hit_idx.update(nbrs)
        per_tail.append(tuple(candidates[j] for j in nbrs))

    return JoinResult(tuple(tail), tuple(per_tail), _union(candidates, hit_idx))
