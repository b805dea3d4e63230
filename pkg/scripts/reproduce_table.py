"""Reproduce the reference table of assigned states and print a comparison.

    python scripts/reproduce_table.py --samples 2000000 --replicates 8
"""
import argparse
import json
import time

from qutrit_qsa.posterior import DEFAULT_REPLICATES, DEFAULT_SAMPLES, DEFAULT_SEED, IntegrationConfig
from qutrit_qsa.table import reproduce_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    ap.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--json", default=None, help="also write the rows to this file")
    args = ap.parse_args()

    cfg = IntegrationConfig(args.samples, args.replicates, args.seed)
    t0 = time.perf_counter()
    rep = reproduce_table(cfg)
    elapsed = time.perf_counter() - t0
    for r in rep.rows:
        comp = "  ".join(f"{v:.4f}+-{e:.4f}" for v, e in zip(r.computed, r.stderr))
        ref = "  ".join(f"{v:.4f}" for v in r.reference)
        print(f"{r.prior:9} ({''.join(map(str, r.counts))})  {comp}   ref {ref}   {'ok' if r.passed else 'MISMATCH'}")
    print(f"{len(rep.rows)} rows, {len(rep.failures)} outside tolerance, {elapsed:.1f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.to_dict() for r in rep.rows], fh, indent=2)


if __name__ == "__main__":
    main()
