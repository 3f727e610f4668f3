#!/usr/bin/env python3
"""Random bistellar-move fuzzing of amplitude invariance.

Starting from a reference spin cylinder or pair of pants, apply a long
random sequence of 1-3, 3-1 and 2-2 moves (each transporting the edge
signs), re-evaluating the amplitude periodically.  Any change in the
amplitude is a bug.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from spinsum.algebra import BUILTIN_NAMES, builtin_by_name
from spinsum.cli import run_pachner_fuzz
from spinsum.spin import NS, R_TYPE
from spinsum import tft


@dataclass(frozen=True)
class Config:
    algebra: str
    surface: str
    seeds: tuple[int, ...]
    moves: int
    check_every: int


def _fixture(surface: str):
    if surface == "cylinder":
        return tft.cylinder_spin(NS, 1)
    if surface == "pants":
        return tft.pants_spin((R_TYPE, R_TYPE, NS), 1, -1)
    raise SystemExit(f"unknown surface {surface!r}")


def run(cfg: Config) -> None:
    A = builtin_by_name(cfg.algebra)
    for seed in cfg.seeds:
        tri, signs, types = _fixture(cfg.surface)
        t0 = time.monotonic()
        run_pachner_fuzz(tri, signs, types, A, seed=seed, n_moves=cfg.moves,
                         check_every=cfg.check_every)
        print(f"seed {seed}: {cfg.moves} moves on {cfg.surface} with "
              f"{cfg.algebra}: pass ({time.monotonic() - t0:.2f}s)")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--algebra", default="clifford", choices=BUILTIN_NAMES)
    p.add_argument("--surface", default="cylinder",
                   choices=("cylinder", "pants"))
    p.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    p.add_argument("--moves", type=int, default=200)
    p.add_argument("--check-every", type=int, default=25)
    args = p.parse_args()
    run(Config(algebra=args.algebra, surface=args.surface,
               seeds=tuple(args.seeds), moves=args.moves,
               check_every=args.check_every))


if __name__ == "__main__":
    main()
