"""Core data types: event types, instances, datasets and search patterns."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence


class EventType(NamedTuple):
    id: int
    label: str


class EventInstance(NamedTuple):
    """One occurrence of an event type at a location and a time."""

    instance_id: str
    type: int
    location: tuple[float, ...]
    time: float

    @property
    def x(self) -> float:
        return self.location[0]


def instance_order(inst: EventInstance):
    """Sort key used for every per-type list: time, then first coordinate, then id."""
    return (inst.time, inst.location[0], inst.instance_id)


@dataclass(frozen=True)
class SpaceExtent:
    """The embedding space V: a closed box in space times a closed time range.

    ``spatial_size`` holds one size per spatial dimension. Origins default to
    zero, which is the usual layout for generated data.
    """

    spatial_size: tuple[float, ...]
    temporal_size: float
    spatial_origin: Optional[tuple[float, ...]] = None
    temporal_origin: float = 0.0

    def __post_init__(self):
        sizes = tuple(float(s) for s in self.spatial_size)
        object.__setattr__(self, "spatial_size", sizes)
        if len(sizes) not in (1, 2):
            raise ValueError(f"spatial dimensionality must be 1 or 2, got {len(sizes)}")
        if any(not s > 0 for s in sizes) or not self.temporal_size > 0:
            raise ValueError("extent sizes must be positive")
        origin = self.spatial_origin
        if origin is None:
            origin = (0.0,) * len(sizes)
        origin = tuple(float(o) for o in origin)
        if len(origin) != len(sizes):
            raise ValueError("spatial origin does not match dimensionality")
        object.__setattr__(self, "spatial_origin", origin)
        object.__setattr__(self, "temporal_size", float(self.temporal_size))
        object.__setattr__(self, "temporal_origin", float(self.temporal_origin))

    @classmethod
    def square(cls, dsize: float, tsize: float, dims: int = 2) -> "SpaceExtent":
        return cls((dsize,) * dims, tsize)

    @property
    def dims(self) -> int:
        return len(self.spatial_size)

    @property
    def volume(self) -> float:
        return math.prod(self.spatial_size) * self.temporal_size

    def contains(self, inst: EventInstance) -> bool:
        # closed box: boundary points count as inside
        for c, o, s in zip(inst.location, self.spatial_origin, self.spatial_size):
            if not o <= c <= o + s:
                return False
        t0 = self.temporal_origin
        return t0 <= inst.time <= t0 + self.temporal_size


def volume(extent: SpaceExtent) -> float:
    return extent.volume


@dataclass(frozen=True, eq=False)
class Dataset:
    """The instance set D over the type table F, embedded in ``extent``.

    Construction validates every instance and builds the per-type index
    ``by_type[f]``, each list sorted with :func:`instance_order`.
    """

    types: tuple[EventType, ...]
    instances: tuple[EventInstance, ...]
    extent: SpaceExtent
    by_type: tuple[tuple[EventInstance, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        types = tuple(EventType(int(t.id), str(t.label)) for t in self.types)
        if [t.id for t in types] != list(range(len(types))):
            raise ValueError("type ids must be contiguous 0..n-1")
        if len({t.label for t in types}) != len(types):
            raise ValueError("type labels must be unique")
        object.__setattr__(self, "types", types)
        instances = tuple(self.instances)
        object.__setattr__(self, "instances", instances)

        buckets: list[list[EventInstance]] = [[] for _ in types]
        seen = set()
        dims = self.extent.dims
        for inst in instances:
            if inst.instance_id in seen:
                raise ValueError(f"duplicate instance id {inst.instance_id!r}")
            seen.add(inst.instance_id)
            if not 0 <= inst.type < len(types):
                raise ValueError(f"instance {inst.instance_id!r} has unknown type {inst.type}")
            if len(inst.location) != dims:
                raise ValueError(
                    f"instance {inst.instance_id!r} has {len(inst.location)} coordinates, "
                    f"dataset is {dims}-D"
                )
            if not self.extent.contains(inst):
                raise ValueError(f"instance {inst.instance_id!r} lies outside the extent")
            buckets[inst.type].append(inst)
        for b in buckets:
            b.sort(key=instance_order)
        object.__setattr__(self, "by_type", tuple(tuple(b) for b in buckets))

    @classmethod
    def from_records(
        cls,
        records: Iterable[tuple[str, str, Sequence[float], float]],
        extent: SpaceExtent,
        labels: Sequence[str] = (),
    ) -> "Dataset":
        """Build a dataset from ``(id, label, location, time)`` rows.

        Type ids are assigned in order of first appearance, after any
        ``labels`` given up front.
        """
        ids: dict[str, int] = {}
        for lab in labels:
            ids.setdefault(lab, len(ids))
        instances = []
        for iid, label, loc, t in records:
            tid = ids.setdefault(label, len(ids))
            instances.append(EventInstance(iid, tid, tuple(float(c) for c in loc), float(t)))
        types = tuple(EventType(i, lab) for lab, i in ids.items())
        return cls(types, tuple(instances), extent)

    @property
    def dims(self) -> int:
        return self.extent.dims

    @property
    def n_types(self) -> int:
        return len(self.types)

    def __len__(self) -> int:
        return len(self.instances)

    def type_id(self, label: str) -> int:
        for t in self.types:
            if t.label == label:
                return t.id
        raise KeyError(label)

    def label(self, type_id: int) -> str:
        return self.types[type_id].label

    def labels(self, type_ids: Iterable[int]) -> list[str]:
        return [self.types[i].label for i in type_ids]


def instances_of_type(dataset: Dataset, f: int) -> tuple[EventInstance, ...]:
    if not isinstance(f, int) or not 0 <= f < dataset.n_types:
        raise KeyError(f"unknown event type id {f!r}")
    return dataset.by_type[f]


@dataclass(frozen=True)
class Pattern:
    """A search node: a type sequence, its sequence index and its tail event set.

    ``seq_index`` is None for 1-length seeds.
    """

    types: tuple[int, ...]
    seq_index: Optional[float]
    tail: tuple[EventInstance, ...]

    def __len__(self) -> int:
        return len(self.types)

    @property
    def last(self) -> int:
        return self.types[-1]


class ScoredPattern(NamedTuple):
    types: tuple[int, ...]
    seq_index: float
