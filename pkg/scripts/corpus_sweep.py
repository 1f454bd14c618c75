"""Run the pipeline over a seeded random sign-matrix corpus, one JSON report per line.

    python3 scripts/corpus_sweep.py --m 8 --n 8 --count 20 --alphas 2 3 5 --out sweep.jsonl
"""
import argparse
import json
from dataclasses import dataclass, field

from approxrank.pipeline import PipelineConfig, approximate_rank_pipeline
from approxrank.rng import random_sign_matrix


@dataclass
class SweepConfig:
    m: int = 8
    n: int = 8
    count: int = 20
    alphas: list = field(default_factory=lambda: [2.0, 3.0, 5.0])
    corpus_seed: int = 7
    force_k: int | None = None
    out: str | None = None


def run(cfg: SweepConfig):
    rows = []
    for alpha in cfg.alphas:
        for i in range(cfg.count):
            A = random_sign_matrix(cfg.m, cfg.n, cfg.corpus_seed, i)
            res = approximate_rank_pipeline(A, alpha, seed=i, config=PipelineConfig(force_k=cfg.force_k))
            rows.append(res.report())
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=SweepConfig.m)
    ap.add_argument("--n", type=int, default=SweepConfig.n)
    ap.add_argument("--count", type=int, default=SweepConfig.count)
    ap.add_argument("--alphas", type=float, nargs="+", default=[2.0, 3.0, 5.0])
    ap.add_argument("--corpus-seed", type=int, default=SweepConfig.corpus_seed)
    ap.add_argument("--force-k", type=int)
    ap.add_argument("--out")
    cfg = SweepConfig(**vars(ap.parse_args()))
    rows = run(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.writelines(json.dumps(r) + "\n" for r in rows)
    print(f"{'alpha':>6} {'runs':>5} {'mean lower':>11} {'mean rank':>10} {'max band':>10}")
    for alpha in cfg.alphas:
        sel = [r for r in rows if r["alpha"] == alpha]
        lower = sum(r["bounds"]["lower"] for r in sel) / len(sel)
        rank = sum(r["result"]["rank"] for r in sel) / len(sel)
        band = max(r["result"]["band_max"] for r in sel)
        print(f"{alpha:6.2f} {len(sel):5d} {lower:11.4f} {rank:10.3f} {band:10.6f}")


if __name__ == "__main__":
    main()
