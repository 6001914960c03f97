"""Run every verifier on the built-in bodies and write JSON lines plus a summary table.

    python scripts/run_all_verifiers.py --samples 1e6 --out results/verifiers.jsonl
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from crofton3d.cli import constants_reports, dumps, parse_count, width_reports
from crofton3d.convex_body import builtin, planar_polygon
from crofton3d.mc import McConfig
from crofton3d.measures import (
    crofton_baselines,
    lemma1_consistency,
    verify_herglotz,
    verify_planar_crofton,
    verify_thm1,
    verify_thm2,
    verify_thm3,
    verify_thm4,
)


@dataclass
class SweepConfig:
    samples: int = 10**6
    seed: int = 42
    workers: int = 1
    thm2_outer: int = 10**5
    thm2_inner: int = 1000
    bodies: list[str] = field(default_factory=lambda: ["ball", "cube", "tetrahedron"])
    out: str = "results/verifiers.jsonl"


def sweep(cfg: SweepConfig):
    mc = McConfig.make(cfg.samples, seed=cfg.seed, workers=cfg.workers)
    nested = McConfig.make(cfg.thm2_outer, seed=cfg.seed, workers=cfg.workers, max_chunk=10**4)
    yield "-", constants_reports(mc)
    yield "-", width_reports()
    yield "unit square", [verify_planar_crofton(planar_polygon([[0, 0], [1, 0], [1, 1], [0, 1]]), mc)]
    for name in cfg.bodies:
        K = builtin(name)
        yield name, crofton_baselines(K, mc)
        yield name, [lemma1_consistency(K, mc)]
        yield name, [verify_thm1(K, mc), verify_thm3(K, mc), verify_thm4(K, mc), verify_herglotz(K, mc)]
        yield name, [verify_thm2(K, nested, inner=cfg.thm2_inner)]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=parse_count, default=SweepConfig.samples)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--workers", type=int, default=SweepConfig.workers)
    p.add_argument("--thm2-outer", type=parse_count, default=SweepConfig.thm2_outer)
    p.add_argument("--thm2-inner", type=parse_count, default=SweepConfig.thm2_inner)
    p.add_argument("--bodies", nargs="+", default=["ball", "cube", "tetrahedron"])
    p.add_argument("--out", default=SweepConfig.out)
    cfg = SweepConfig(**vars(p.parse_args()))

    Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
    failures = 0
    with open(cfg.out, "w") as fh:
        fh.write(json.dumps({"config": asdict(cfg)}) + "\n")
        print(f"{'body':<12} {'check':<20} {'lhs':>12} {'rhs':>12} {'rel err':>9} {'sigma':>7}  ok    time")
        t0 = time.perf_counter()
        for body, reports in sweep(cfg):
            for r in reports:
                fh.write(dumps({"body": body, "report": r.to_dict()}) + "\n")
                d = r.to_dict()
                sig = d["residual_sigma"]
                sig = f"{sig:7.2f}" if isinstance(sig, float) else f"{'-':>7}"
                print(f"{body:<12} {r.name:<20} {d['lhs']['value']:12.5f} {d['rhs']['value']:12.5f} "
                      f"{r.rel_error:9.2e} {sig}  {'yes' if r.passed else 'NO ':<4} {time.perf_counter() - t0:6.1f}s")
                failures += not r.passed
    print(f"\n{failures} failing checks; reports in {cfg.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
