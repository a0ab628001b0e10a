"""Synthetic event datasets with planted following chains.

Each planted pattern is a chain of distinct event types. Root instances of
the first type are scattered uniformly; every instance of chain element i
spawns a few instances of element i+1 inside its own neighborhood. Uniform
background noise over all types is then mixed in.
"""

from __future__ import annotations

import os
import string
from dataclasses import asdict, dataclass

import numpy as np

from .geometry import CUBE, ConfigError, NeighborhoodConfig, is_neighbor
from .model import Dataset, EventInstance, EventType, SpaceExtent

SEED_ENV = "STKM_SEED"


@dataclass(frozen=True)
class GenConfig:
    nf: int = 25
    pn: int = 4
    ps: int = 4
    ni: int = 10
    r: float = 10.0
    t: float = 10.0
    dsize: float = 1000.0
    tsize: float = 1200.0
    dims: int = 2
    followers_min: int = 1
    followers_max: int = 3
    noise_fraction: float = 0.5
    shape: str = CUBE
    seed: int = 1

    def validate(self) -> None:
        if min(self.nf, self.pn, self.ps, self.ni) < 1:
            raise ConfigError("nf, pn, ps and ni must be positive")
        if self.ps < 2:
            raise ConfigError("planted patterns need ps >= 2")
        if self.pn * self.ps > self.nf:
            raise ConfigError(f"pn*ps = {self.pn * self.ps} exceeds nf = {self.nf}")
        if self.ps * self.t > self.tsize:
            raise ConfigError("ps*t exceeds tsize; planted chains cannot fit")
        if not 1 <= self.followers_min <= self.followers_max:
            raise ConfigError("need 1 <= followers_min <= followers_max")
        if not 0 <= self.noise_fraction < 1:
            raise ConfigError("noise_fraction must be in [0, 1)")
        NeighborhoodConfig(self.shape, self.r, self.t).check_dims(self.dims)

    def as_dict(self) -> dict:
        return asdict(self)


def with_env_seed(cfg: GenConfig) -> GenConfig:
    """Replace the seed with ``$STKM_SEED`` when it is set."""
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return cfg
    return GenConfig(**{**cfg.as_dict(), "seed": int(raw)})


def type_label(i: int) -> str:
    # A..Z, AA..ZZ, ...
    letters = string.ascii_uppercase
    out = ""
    i += 1
    while i:
        i, rem = divmod(i - 1, 26)
        out = letters[rem] + out
    return out


def _offset(rng: np.random.Generator, cfg: GenConfig) -> np.ndarray:
    if cfg.shape == CUBE:
        return rng.uniform(-cfg.r, cfg.r, size=cfg.dims)
    # uniform on the disc
    rho = cfg.r * np.sqrt(rng.uniform())
    phi = rng.uniform(0, 2 * np.pi)
    return np.array([rho * np.cos(phi), rho * np.sin(phi)])


def _spawn(rng, cfg: GenConfig, nbhd: NeighborhoodConfig, loc, t, upper):
    parent = EventInstance("", 0, tuple(map(float, loc)), float(t))
    while True:
        # clipping only shrinks the offset; the loop guards float rounding at the boundary
        cloc = np.clip(loc + _offset(rng, cfg), 0, upper)
        ct = t + cfg.t * (1.0 - rng.uniform())
        child = EventInstance("", 0, tuple(map(float, cloc)), float(ct))
        if is_neighbor(parent, child, nbhd):
            return cloc, ct


def generate(cfg: GenConfig) -> tuple[Dataset, list[list[str]]]:
    """Build a dataset and return it with the planted label sequences."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    labels = [type_label(i) for i in range(cfg.nf)]
    perm = rng.permutation(cfg.nf)
    planted = [[int(f) for f in perm[p * cfg.ps:(p + 1) * cfg.ps]] for p in range(cfg.pn)]

    upper = np.full(cfg.dims, cfg.dsize)
    nbhd = NeighborhoodConfig(cfg.shape, cfg.r, cfg.t)
    # (type, location, time)
    rows: list[tuple[int, tuple[float, ...], float]] = []
    root_tmax = cfg.tsize - cfg.ps * cfg.t
    for chain in planted:
        level = []
        for _ in range(cfg.ni):
            loc = rng.uniform(0, cfg.dsize, size=cfg.dims)
            t = rng.uniform(0, root_tmax)
            level.append((loc, t))
        rows.extend((chain[0], tuple(map(float, loc)), float(t)) for loc, t in level)
        for f in chain[1:]:
            nxt = []
            for loc, t in level:
                n = int(rng.integers(cfg.followers_min, cfg.followers_max + 1))
                for _ in range(n):
                    nxt.append(_spawn(rng, cfg, nbhd, loc, t, upper))
            rows.extend((f, tuple(map(float, loc)), float(t)) for loc, t in nxt)
            level = nxt

    n_planted = len(rows)
    n_noise = int(round(n_planted * cfg.noise_fraction / (1 - cfg.noise_fraction)))
    if n_noise:
        ntypes = rng.integers(0, cfg.nf, size=n_noise)
        nlocs = rng.uniform(0, cfg.dsize, size=(n_noise, cfg.dims))
        ntimes = rng.uniform(0, cfg.tsize, size=n_noise)
        for f, loc, t in zip(ntypes, nlocs, ntimes):
            rows.append((int(f), tuple(map(float, loc)), float(t)))

    counters = [0] * cfg.nf
    instances = []
    for f, loc, t in rows:
        counters[f] += 1
        instances.append(EventInstance(f"{labels[f].lower()}{counters[f]}", f, loc, t))
    types = tuple(EventType(i, lab) for i, lab in enumerate(labels))
    extent = SpaceExtent.square(cfg.dsize, cfg.tsize, cfg.dims)
    truth = [[labels[f] for f in chain] for chain in planted]
    return Dataset(types, tuple(instances), extent), truth


def random_dataset(
    seed: int,
    n_types: int | None = None,
    n_instances: int | None = None,
    dims: int = 2,
    lattice: bool = False,
    dsize: float = 60.0,
    tsize: float = 60.0,
) -> Dataset:
    """Small unstructured dataset for oracle comparisons.

    With ``lattice`` every coordinate and time is an integer, so neighborhood
    boundaries and equal timestamps are hit often.
    """
    rng = np.random.default_rng(seed)
    if n_types is None:
        n_types = int(rng.integers(1, 7))
    if n_instances is None:
        n_instances = int(rng.integers(0, 301))
    labels = [type_label(i) for i in range(n_types)]
    types = rng.integers(0, n_types, size=n_instances)
    if lattice:
        locs = rng.integers(0, int(dsize) + 1, size=(n_instances, dims)).astype(float)
        times = rng.integers(0, int(tsize) + 1, size=n_instances).astype(float)
    else:
        locs = rng.uniform(0, dsize, size=(n_instances, dims))
        times = rng.uniform(0, tsize, size=n_instances)
    counters = [0] * n_types
    instances = []
    for f, loc, t in zip(types, locs, times):
        f = int(f)
        counters[f] += 1
        instances.append(EventInstance(f"{labels[f].lower()}{counters[f]}", f,
                                       tuple(map(float, loc)), float(t)))
    return Dataset(tuple(EventType(i, lab) for i, lab in enumerate(labels)),
                   tuple(instances), SpaceExtent.square(dsize, tsize, dims))
