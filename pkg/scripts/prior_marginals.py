"""Tabulate the (x3, x8) marginals of both priors and summarise where their mass sits."""
import argparse

import numpy as np

from qutrit_qsa.priors import Prior, default_gaussian_prior, grid_centers, marginal_density_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--samples-per-cell", type=int, default=4096)
    ap.add_argument("--out", default=None, help="write both grids to this .npz file")
    args = ap.parse_args()

    c3, c8 = grid_centers((3, 8), args.grid)
    area = (c3[1] - c3[0]) * (c8[1] - c8[0])
    grids = {}
    for name, prior in (("constant", Prior.constant()), ("gaussian", default_gaussian_prior())):
        g = marginal_density_grid(prior, grid=args.grid, samples_per_cell=args.samples_per_cell)
        grids[name] = g
        i, j = np.unravel_index(np.argmax(g), g.shape)
        m3 = np.sum(g.sum(axis=1) * c3) * area
        m8 = np.sum(g.sum(axis=0) * c8) * area
        print(f"{name:9} peak at (x3, x8) = ({c3[i]:+.3f}, {c8[j]:+.3f})   mean = ({m3:+.3f}, {m8:+.3f})")
    if args.out:
        np.savez(args.out, x3=c3, x8=c8, **grids)


if __name__ == "__main__":
    main()
