"""Brute-force reference miner used by the tests and ``stkm verify``.

Exponential in ``max_len``; meant for datasets of a few hundred instances.
"""

from __future__ import annotations

from typing import NamedTuple

from .geometry import NeighborhoodConfig, naive_join, neighborhood_volume
from .miner import Ranking
from .model import Dataset


class EnumeratedPattern(NamedTuple):
    types: tuple[int, ...]
    seq_index: float
    link_ratios: tuple[float, ...]


def enumerate_all(dataset: Dataset, cfg: NeighborhoodConfig, max_len: int) -> list[EnumeratedPattern]:
    """Every type sequence of length 2..max_len with a nonzero sequence index.

    Tails are propagated with the pairwise join; a sequence is dropped (and
    not extended) as soon as one of its links has ratio 0.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    vol = neighborhood_volume(cfg, dataset.dims)
    space = dataset.extent.volume
    out: list[EnumeratedPattern] = []
    stack = [((f,), inst, ()) for f, inst in reversed(list(enumerate(dataset.by_type))) if inst]
    while stack:
        types, tail, links = stack.pop()
        grown = []
        for f, cands in enumerate(dataset.by_type):
            if not cands:
                continue
            jr = naive_join(tail, cands, cfg)
            total = sum(len(n) for n in jr.per_tail)
            if total == 0:
                continue
            ratio = (total / vol / len(tail)) / (len(cands) / space)
            new_links = links + (ratio,)
            new_types = types + (f,)
            out.append(EnumeratedPattern(new_types, min(new_links), new_links))
            if len(new_types) < max_len:
                grown.append((new_types, jr.joined, new_links))
        stack.extend(reversed(grown))
    return out


def topk_reference(patterns, k: int, min_len: int) -> Ranking:
    eligible = [p for p in patterns if len(p.types) >= min_len and p.seq_index > 1]
    eligible.sort(key=lambda p: (-p.seq_index, p.types))
    ranking = Ranking(k, min_len)
    for p in eligible[:k]:
        ranking.offer(p.types, p.seq_index)
    return ranking


def ranking_diff(got, want, tol: float = 1e-9, labels=None) -> list[str]:
    """Human-readable differences between two rankings; empty when they agree.

    Patterns must match position by position; indexes within ``tol``.
    """
    def name(types):
        return "->".join(labels[t] for t in types) if labels else str(types)

    got, want = list(got), list(want)
    out = []
    if len(got) != len(want):
        out.append(f"length differs: got {len(got)}, want {len(want)}")
    for i in range(max(len(got), len(want))):
        g = got[i] if i < len(got) else None
        w = want[i] if i < len(want) else None
        if g is None or w is None or g.types != w.types or abs(g.seq_index - w.seq_index) > tol:
            gs = f"{name(g.types)} {g.seq_index!r}" if g else "-"
            ws = f"{name(w.types)} {w.seq_index!r}" if w else "-"
            out.append(f"rank {i + 1}: got {gs}, want {ws}")
    return out
