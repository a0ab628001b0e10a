"""Density, density ratio and sequence index."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import JoinResult, NeighborhoodConfig, neighborhood_volume, plane_sweep_join
from .model import Dataset, EventInstance, instances_of_type


class NoGlobalInstances(LookupError):
    """The followed type has no instances, so its global density is zero."""


def density(count: int, space_volume: float) -> float:
    if not space_volume > 0:
        raise ValueError(f"volume must be positive, got {space_volume}")
    return count / space_volume


@dataclass(frozen=True)
class DensityRatioResult:
    ratio: float
    avg_neighborhood_density: float
    global_density: float
    join: JoinResult


def ratio_from_counts(counts: Sequence[int], nbhd_volume: float, n_global: int, space_volume: float):
    """Mean per-neighborhood density over global density, from raw neighbor counts.

    Returns ``(ratio, avg_density, global_density)``.
    """
    avg = density(sum(counts), nbhd_volume) / len(counts)
    glob = density(n_global, space_volume)
    return avg / glob, avg, glob


def density_ratio(
    tail: Sequence[EventInstance],
    f: int,
    dataset: Dataset,
    cfg: NeighborhoodConfig,
    join=plane_sweep_join,
) -> DensityRatioResult:
    """Density ratio of the link ``last(tail) -> f`` averaged over ``tail``.

    Neighbor counts are kept per tail instance (an instance near two tail
    members counts twice); the joined set on the result is deduplicated.
    """
    if not tail:
        raise ValueError("tail event set is empty")
    candidates = instances_of_type(dataset, f)
    if not candidates:
        raise NoGlobalInstances(f"type {dataset.label(f)!r} has no instances")
    res = join(tail, candidates, cfg)
    ratio, avg, glob = ratio_from_counts(
        res.counts(), neighborhood_volume(cfg, dataset.dims), len(candidates), dataset.extent.volume
    )
    return DensityRatioResult(ratio, avg, glob, res)


def extend_seq_index(prev: Optional[float], link_ratio: float) -> float:
    if prev is None:
        return link_ratio
    return min(prev, link_ratio)
