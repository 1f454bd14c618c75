"""Single-trial failure rate of the +/-1 projection as k' shrinks below the planned value.

For each seeded 4x4 sign matrix the exact nu decomposition is turned into a
layered factorization and projected with k' = ceil(scale * plan_k_prime).
The planned dimension is conservative; this shows by how much.
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np

from approxrank.dimreduce import ReductionPlan, plan_k_prime, project
from approxrank.factorize import layered_from_nu
from approxrank.norms import nu
from approxrank.rng import random_sign_matrix


@dataclass
class ConcentrationConfig:
    size: int = 4
    matrices: int = 20
    seeds: int = 200
    t: float = 0.5
    scales: list = field(default_factory=lambda: [1.0, 0.5, 0.25, 0.1, 0.05])
    corpus_seed: int = 6


def failure_rates(cfg: ConcentrationConfig):
    layered = []
    for i in range(cfg.matrices):
        A = random_sign_matrix(cfg.size, cfg.size, cfg.corpus_seed, i)
        c = nu(A)
        layered.append((A, layered_from_nu(c).to_factorization(), c.value))
    out = {}
    for scale in cfg.scales:
        rates = []
        for A, f, value in layered:
            kp = max(1, math.ceil(scale * plan_k_prime(value, *A.shape, cfg.t)))
            fails = sum(
                np.abs(project(f, ReductionPlan(t=cfg.t, k_prime=kp, seed=s))[0].product() - A).max() > cfg.t
                for s in range(cfg.seeds)
            )
            rates.append(fails / cfg.seeds)
        out[scale] = rates
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=4)
    ap.add_argument("--matrices", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--scales", type=float, nargs="+", default=[1.0, 0.5, 0.25, 0.1, 0.05])
    ap.add_argument("--corpus-seed", type=int, default=6)
    cfg = ConcentrationConfig(**vars(ap.parse_args()))
    print(f"{'scale':>6} {'mean fail':>10} {'max fail':>9}")
    for scale, rates in failure_rates(cfg).items():
        print(f"{scale:6.2f} {np.mean(rates):10.4f} {max(rates):9.4f}")


if __name__ == "__main__":
    main()
