"""Check that assigned Bloch vectors are convex combinations of the extreme-data vectors.

For every triple of total N the residual v(f) - sum_i (N_i/N) v(N e_i) is
printed for the (x3, x8) components together with its paired standard error.
"""
import argparse

from qutrit_qsa.assignment import convexity_check
from qutrit_qsa.posterior import DEFAULT_SEED, IntegrationConfig
from qutrit_qsa.priors import Prior, default_gaussian_prior


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--samples", type=int, default=1 << 18)
    ap.add_argument("--replicates", type=int, default=64)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--gaussian", action="store_true", help="use the Gaussian-like prior (exploratory)")
    args = ap.parse_args()

    cfg = IntegrationConfig(args.samples, args.replicates, args.seed)
    prior = default_gaussian_prior() if args.gaussian else Prior.constant()
    for N in args.N:
        print(f"N = {N}")
        for r in convexity_check(N, prior, cfg, experimental=args.gaussian):
            z = abs(r.residual) / r.stderr.clip(min=1e-300)
            print(f"  ({''.join(map(str, r.counts))})  dx3 {r.residual[0]:+.5f} ({z[0]:.1f} se)"
                  f"  dx8 {r.residual[1]:+.5f} ({z[1]:.1f} se)  {'ok' if r.within() else 'VIOLATION'}")


if __name__ == "__main__":
    main()
