"""Command line entry point: ``stkm {generate,mine-topk,mine-threshold,verify,bench}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .bench import DEFAULT_K, DEFAULT_PS, bench_csv, bench_table, run_bench
from .generator import GenConfig, generate, random_dataset, with_env_seed
from .geometry import SHAPES, NeighborhoodConfig
from .miner import MineConfig, mine_threshold, mine_topk
from .oracle import enumerate_all, ranking_diff, topk_reference
from .serialize import parse_dataset, write_dataset, write_ranking, make_report, write_report


def _int_list(raw: str) -> list[int]:
    try:
        return [int(p) for p in raw.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_neighborhood(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=float, default=10.0, help="spatial radius (cube half-width)")
    p.add_argument("--t", type=float, default=10.0, help="temporal window")
    p.add_argument("--shape", choices=SHAPES, default="cube")


def _add_mining(p: argparse.ArgumentParser, max_len: int = 20) -> None:
    p.add_argument("--input", required=True, help="dataset CSV")
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--max-len", type=int, default=max_len)
    _add_neighborhood(p)


def _load(path: str):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ds = parse_dataset(Path(path).read_text())
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return ds


def _mine_cfg(args, k: int = 1) -> MineConfig:
    return MineConfig(
        k=k,
        min_len=args.min_len,
        max_len=args.max_len,
        neighborhood=NeighborhoodConfig(args.shape, args.r, args.t),
        strict_paper_pruning=getattr(args, "strict_paper_pruning", False),
    )


def cmd_generate(args) -> int:
    cfg = with_env_seed(GenConfig(
        nf=args.nf, pn=args.pn, ps=args.ps, ni=args.ni, r=args.r, t=args.t,
        dsize=args.dsize, tsize=args.tsize, dims=args.dims,
        followers_min=args.followers_min, followers_max=args.followers_max,
        noise_fraction=args.noise, shape=args.shape, seed=args.seed,
    ))
    ds, truth = generate(cfg)
    _emit(write_dataset(ds), args.out)
    if args.truth:
        Path(args.truth).write_text(json.dumps(truth) + "\n")
    return 0


def cmd_mine_topk(args) -> int:
    ds = _load(args.input)
    cfg = _mine_cfg(args, args.k)
    ranking, stats = mine_topk(ds, cfg)
    _emit(write_ranking(ranking, stats, ds, cfg.as_dict(), args.format, args.timing), args.out)
    return 0


def cmd_mine_threshold(args) -> int:
    ds = _load(args.input)
    cfg = _mine_cfg(args)
    found, stats = mine_threshold(ds, args.threshold, cfg)
    found = sorted((p for p in found if len(p.types) >= args.min_len),
                   key=lambda p: (-p.seq_index, p.types))
    config = {"threshold": args.threshold, "min_len": args.min_len, "max_len": cfg.max_len,
              "shape": args.shape, "r": args.r, "t": args.t}
    report = make_report(found, ds, config, stats, args.timing)
    _emit(write_report(report, args.format), args.out)
    return 0


def _verify_one(ds, cfg: MineConfig, name: str) -> bool:
    ranking, _ = mine_topk(ds, cfg)
    want = topk_reference(enumerate_all(ds, cfg.neighborhood, cfg.max_len), cfg.k, cfg.min_len)
    diff = ranking_diff(ranking, want, labels=[t.label for t in ds.types])
    if diff:
        print(f"MISMATCH {name}")
        for line in diff:
            print("  " + line)
        return False
    print(f"ok {name} ({len(ranking)} patterns)")
    return True


def cmd_verify(args) -> int:
    cfg = _mine_cfg(args, args.k)
    ok = True
    if args.input:
        ok = _verify_one(_load(args.input), cfg, args.input)
    for i in range(args.random):
        seed = args.seed + i
        ds = random_dataset(seed, dims=args.dims)
        ok &= _verify_one(ds, cfg, f"random seed={seed}")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    base = with_env_seed(GenConfig(nf=args.nf, pn=args.pn, ni=args.ni, r=args.r, t=args.t,
                                   dsize=args.dsize, tsize=args.tsize, dims=args.dims,
                                   noise_fraction=args.noise, shape=args.shape, seed=args.seed))
    rows = run_bench(args.ps, args.k, args.reps, base, args.min_len, args.max_len,
                     args.strict_paper_pruning)
    _emit(bench_csv(rows), args.out)
    if args.table:
        Path(args.table).write_text(bench_table(rows))
    return 0


def _add_gen(p: argparse.ArgumentParser, with_ps: bool = True) -> None:
    p.add_argument("--nf", type=int, default=25, help="number of event types")
    p.add_argument("--pn", type=int, default=4, help="number of planted patterns")
    if with_ps:
        p.add_argument("--ps", type=int, default=4, help="length of each planted pattern")
    p.add_argument("--ni", type=int, default=10, help="root instances per planted pattern")
    p.add_argument("--dsize", type=float, default=1000.0)
    p.add_argument("--tsize", type=float, default=1200.0)
    p.add_argument("--dims", type=int, choices=(1, 2), default=2)
    p.add_argument("--noise", type=float, default=0.5, help="noise fraction of the dataset")
    p.add_argument("--seed", type=int, default=1, help="RNG seed ($STKM_SEED overrides)")
    _add_neighborhood(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stkm", description="Top-K spatio-temporal sequential pattern mining.")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset CSV")
    _add_gen(p)
    p.add_argument("--followers-min", type=int, default=1)
    p.add_argument("--followers-max", type=int, default=3)
    p.add_argument("--out", help="dataset CSV path (default stdout)")
    p.add_argument("--truth", help="write planted sequences as JSON here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("mine-topk", help="mine the top-K patterns")
    _add_mining(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--strict-paper-pruning", action="store_true",
                   help="skip the extra cut of short sequences that cannot reach the ranking")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--timing", action="store_true", help="include wall time in the output")
    p.set_defaults(func=cmd_mine_topk)

    p = sub.add_parser("mine-threshold", help="mine all patterns above a fixed threshold")
    _add_mining(p)
    p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_mine_threshold)

    p = sub.add_parser("verify", help="compare the miner against the brute-force oracle")
    p.add_argument("--input", help="dataset CSV")
    p.add_argument("--random", type=int, default=0, help="also check N random small datasets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=int, choices=(1, 2), default=2)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--strict-paper-pruning", action="store_true")
    _add_neighborhood(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="timing sweep over Ps and K")
    _add_gen(p, with_ps=False)
    p.add_argument("--ps", type=_int_list, default=list(DEFAULT_PS))
    p.add_argument("--k", type=_int_list, default=list(DEFAULT_K))
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--min-len", type=int, default=3)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--strict-paper-pruning", action="store_true")
    p.add_argument("--out", help="long-form CSV path (default stdout)")
    p.add_argument("--table", help="also write a Ps x K pivot CSV here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "verify" and not args.input and not args.random:
        parser.error("verify needs --input or --random N")
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"stkm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
