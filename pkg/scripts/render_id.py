"""Write DOT diagrams of the identity proof and the uncrossed mutation.

    python3 scripts/render_id.py --out figures

Renders to SVG as well when the Graphviz ``dot`` binary is on PATH.
"""
import argparse
import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path

from metacat.dot import to_dot
from metacat.fol import build_fol_env, build_negative_env
from metacat.proof import Env


@dataclass
class Config:
    out: str = "figures"


def _scope(env: Env, name: str) -> Env:
    thm = env.theorem(name)
    return Env(env.signature, env.generators, env.theorems[: env.theorems.index(thm)])


def main(cfg: Config) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(build_fol_env(), "id"), (build_fol_env(), "wnwi"), (build_negative_env(), "id-uncrossed")]
    dot = shutil.which("dot")
    for env, name in jobs:
        for level in ("ir", "proof"):
            path = out / f"{name}-{level}.dot"
            path.write_text(to_dot(env.theorem(name), _scope(env, name), values=True, level=level))
            print(path)
            if dot:
                subprocess.run([dot, "-Tsvg", str(path), "-o", str(path.with_suffix(".svg"))], check=True)
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=Config.out)
    raise SystemExit(main(Config(**vars(parser.parse_args()))))
