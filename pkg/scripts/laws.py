"""Run the seeded law suites and print per-law pass counts.

    python3 scripts/laws.py --syntax-cases 2000 --monoidal-cases 500 --seed 0
"""
import argparse
from dataclasses import dataclass

from metacat import laws
from metacat.fol import SIGNATURE, build_fol_env, build_negative_env
from metacat.syntax import declare_signature


@dataclass
class Config:
    syntax_cases: int = 2000
    monoidal_cases: int = 500
    variants: int = 20
    seed: int = 0


def main(cfg: Config) -> int:
    # the corpus signature has no constants; add one so closed terms occur
    sig = declare_signature([(op.name, op.arity) for op in SIGNATURE] + [("c", 0)])
    env = build_fol_env()
    suites = [
        ("syntax maps", laws.syntax_laws(sig, cfg.syntax_cases, cfg.seed)),
        ("derivations", laws.monoidal_laws(env, cfg.monoidal_cases, cfg.seed)),
        ("re-association (fol)", laws.reassociation_invariance(env, cfg.variants, cfg.seed)),
        ("re-association (negative)", laws.reassociation_invariance(build_negative_env(), cfg.variants, cfg.seed)),
    ]
    ok = True
    for title, report in suites:
        print(f"{title}:")
        for line in report.lines():
            print(f"  {line}")
        for law, note in report.first_failure.items():
            print(f"  FIRST FAILURE {law}: {note}")
        ok &= report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--syntax-cases", type=int, default=Config.syntax_cases)
    parser.add_argument("--monoidal-cases", type=int, default=Config.monoidal_cases)
    parser.add_argument("--variants", type=int, default=Config.variants)
    parser.add_argument("--seed", type=int, default=Config.seed)
    raise SystemExit(main(Config(**vars(parser.parse_args()))))
