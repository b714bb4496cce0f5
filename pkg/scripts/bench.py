"""Time corpus checking and the oracle run against the acceptance budgets.

    python3 scripts/bench.py --repeat 5
"""
import argparse
import statistics
import time
from dataclasses import dataclass

from metacat.fol import build_fol_env
from metacat.oracle import differential_run
from metacat.proof import check_env


@dataclass
class Config:
    repeat: int = 5
    trials: int = 1000


def _time(fn, repeat: int) -> list[float]:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return times


def main(cfg: Config) -> int:
    env = build_fol_env()
    rows = [
        ("check corpus", 1.0, _time(lambda: check_env(env), cfg.repeat)),
        (f"oracle, {cfg.trials} trials", 10.0, _time(lambda: differential_run(env, cfg.trials, 7), cfg.repeat)),
    ]
    for label, budget, times in rows:
        print(f"{label}: median {statistics.median(times):.3f} s, max {max(times):.3f} s (budget {budget:.0f} s)")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=Config.repeat)
    parser.add_argument("--trials", type=int, default=Config.trials)
    raise SystemExit(main(Config(**vars(parser.parse_args()))))
