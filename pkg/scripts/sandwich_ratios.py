"""Distribution of nu / gamma_2 over all 3x3 sign matrices and sampled 4x4 ones."""
import argparse
import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from approxrank.norms import gamma2, nu
from approxrank.rng import random_sign_matrix


@dataclass
class RatioConfig:
    samples_4x4: int = 200
    seed: int = 0


def ratios(cfg: RatioConfig):
    three = [np.array(b).reshape(3, 3) for b in itertools.product([-1.0, 1.0], repeat=9)]
    four = [random_sign_matrix(4, 4, cfg.seed, i) for i in range(cfg.samples_4x4)]
    return {name: [nu(A).value / gamma2(A).value for A in mats]
            for name, mats in (("3x3 (all)", three), ("4x4 (sampled)", four))}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples-4x4", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    cfg = RatioConfig(**vars(ap.parse_args()))
    for name, rs in ratios(cfg).items():
        hist = Counter(round(r, 4) for r in rs)
        print(f"{name}: max ratio {max(rs):.6f}")
        for value, count in sorted(hist.items()):
            print(f"  {value:.4f}  x{count}")


if __name__ == "__main__":
    main()
