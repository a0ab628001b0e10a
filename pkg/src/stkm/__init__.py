"""Top-K spatio-temporal sequential pattern mining.

The typical flow is :func:`generate` or :func:`parse_dataset` to get a
:class:`Dataset`, then :func:`mine_topk` with a :class:`MineConfig`.
"""

from .generator import GenConfig, generate, random_dataset
from .geometry import (
    JoinResult,
    NeighborhoodConfig,
    is_neighbor,
    naive_join,
    neighborhood_volume,
    plane_sweep_join,
)
from .miner import (
    MineConfig,
    MineStats,
    Offer,
    Ranking,
    mine_threshold,
    mine_topk,
    prune_threshold,
    ranking_offer,
)
from .model import Dataset, EventInstance, EventType, Pattern, ScoredPattern, SpaceExtent, instances_of_type, volume
from .oracle import EnumeratedPattern, enumerate_all, topk_reference
from .serialize import parse_dataset, parse_ranking, write_dataset, write_ranking
from .stats import density, density_ratio, extend_seq_index

__version__ = "0.1.0"
