import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stkm import NeighborhoodConfig, SpaceExtent, density, density_ratio, extend_seq_index, naive_join
from stkm.generator import random_dataset
from stkm.model import Dataset
from stkm.stats import NoGlobalInstances

from conftest import make_dataset


def test_density_examples():
    assert density(3, 2000) == pytest.approx(0.0015, abs=1e-15)
    assert density(0, 123.0) == 0
    assert density(2, 50) == pytest.approx(0.04, abs=1e-15)


@pytest.mark.parametrize("vol", [0, -1.0])
def test_density_rejects_bad_volume(vol):
    with pytest.raises(ValueError):
        density(1, vol)


def test_hand_computed_ratio(ratio_fixture, cube5):
    a = ratio_fixture.by_type[ratio_fixture.type_id("A")]
    res = density_ratio(a, ratio_fixture.type_id("B"), ratio_fixture, cube5)
    # two Bs in a neighborhood of volume 2*5*5, three Bs in 100*20
    expected = Fraction(2, 50) / Fraction(3, 2000)
    assert expected == Fraction(80, 3)
    assert res.avg_neighborhood_density == pytest.approx(0.04, abs=1e-15)
    assert res.global_density == pytest.approx(0.0015, abs=1e-15)
    assert res.ratio == pytest.approx(float(expected), abs=1e-9)
    assert [p.instance_id for p in res.join.joined] == ["b1", "b2"]


def test_ratio_averages_over_tail(cube5):
    ds = make_dataset([
        ("a1", "A", 0.0, 0.0), ("a2", "A", 90.0, 0.0),
        ("b1", "B", 1.0, 1.0), ("b2", "B", 2.0, 1.0), ("b3", "B", 50.0, 15.0),
    ])
    res = density_ratio(ds.by_type[0], 1, ds, cube5)
    assert res.join.counts() == [2, 0]
    assert res.avg_neighborhood_density == pytest.approx(0.02, abs=1e-15)
    assert res.ratio == pytest.approx(float(Fraction(40, 3)), abs=1e-9)


def test_ratio_zero_when_far(cube5):
    ds = make_dataset([("a1", "A", 0.0, 0.0)] + [(f"b{i}", "B", 20.0 + 10 * i, 10.0) for i in range(5)])
    assert density_ratio(ds.by_type[0], 1, ds, cube5).ratio == 0


def test_ratio_errors(cube5):
    ds = make_dataset([("a1", "A", 0.0, 0.0)], labels=["A", "B"])
    with pytest.raises(NoGlobalInstances):
        density_ratio(ds.by_type[0], 1, ds, cube5)
    with pytest.raises(ValueError):
        density_ratio((), 0, ds, cube5)


def test_extend_seq_index():
    assert extend_seq_index(None, 80 / 3) == 80 / 3
    assert extend_seq_index(3.0, 5.0) == 3.0
    assert extend_seq_index(5.0, 3.0) == 3.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["cube", "cylinder"]))
def test_ratio_properties(seed, shape):
    ds = random_dataset(seed, n_types=3, n_instances=80)
    cfg = NeighborhoodConfig(shape, 8.0, 8.0)
    ext = ds.extent
    doubled = Dataset(ds.types, ds.instances,
                      SpaceExtent(ext.spatial_size, 2 * ext.temporal_size))
    for f in range(3):
        tail = ds.by_type[f]
        for g in range(3):
            if not tail or not ds.by_type[g]:
                continue
            res = density_ratio(tail, g, ds, cfg)
            # doubling |V| halves the global density and doubles the ratio
            assert density_ratio(tail, g, doubled, cfg).ratio == pytest.approx(2 * res.ratio, rel=1e-12)
            # joined set is deduplicated, of the right type, and matches the naive join
            ids = [p.instance_id for p in res.join.joined]
            assert len(ids) == len(set(ids))
            assert all(p.type == g for p in res.join.joined)
            assert res.join.as_sets() == naive_join(tail, ds.by_type[g], cfg).as_sets()
            # single tail instance: plain count / volume over global density
            one = density_ratio(tail[:1], g, ds, cfg)
            n = len(naive_join(tail[:1], ds.by_type[g], cfg).joined)
            vol = (2 * cfg.radius) ** 2 * cfg.interval if shape == "cube" else math.pi * cfg.radius**2 * cfg.interval
            assert one.ratio == pytest.approx((n / vol) / (len(ds.by_type[g]) / ext.volume), rel=1e-12)
