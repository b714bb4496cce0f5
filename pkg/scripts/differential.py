"""Sweep seeds of the differential run between the two checking engines.

    python3 scripts/differential.py --trials 1000 --seeds 0 1 2 7
"""
import argparse
import time
from dataclasses import dataclass, field

from metacat.fol import build_fol_env
from metacat.oracle import differential_run
from metacat.surface import load


@dataclass
class Config:
    trials: int = 1000
    seeds: list[int] = field(default_factory=lambda: [7])
    corpus: str | None = None  # a .mcat file; the built-in fragment when None


def main(cfg: Config) -> int:
    env = build_fol_env() if cfg.corpus is None else load(open(cfg.corpus, encoding="utf-8").read())
    diverged = 0
    for seed in cfg.seeds:
        start = time.perf_counter()
        summary = differential_run(env, cfg.trials, seed)
        print(f"seed {seed}: {summary.line()} in {time.perf_counter() - start:.2f} s")
        if summary.first_divergence:
            print(f"  {summary.first_divergence}")
        diverged += summary.divergences
    return 1 if diverged else 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=Config.trials)
    parser.add_argument("--seeds", type=int, nargs="+", default=[7])
    parser.add_argument("--corpus")
    raise SystemExit(main(Config(**vars(parser.parse_args()))))
