"""Coordinate symmetries of B8 that relate moment integrals of different data.

Three families of unit-Jacobian maps of B8 onto itself are used:

* sign reflections of three off-diagonal coordinates, which leave the
  diagonal of rho, both priors and B8 invariant and therefore force
  ``L_1, L_2, L_4, L_5, L_6, L_7`` to vanish;
* ``SWAP13``, which exchanges rho_11 and rho_33 (both priors);
* ``CYCLE``, which cycles rho_11 <- rho_22 <- rho_33 and rotates the (x3, x8)
  plane by 2 pi / 3 (constant prior only, as it moves the Gaussian centre).

Moments transform like coordinates: ``L' = T L`` and ``Z' = Z``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import SymmetryNotApplicableError
from .posterior import FrequencyTriple, MomentEstimate
from .priors import CONSTANT, Prior
from .su_basis import SQRT3

SWAP13 = "swap13"
CYCLE = "cycle"

# For each vanishing component j, a set of three coordinates (1-based) whose
# simultaneous sign change flips x_j and leaves the cubic condition invariant.
REFLECTIONS = {
    1: (1, 5, 6),
    2: (2, 5, 7),
    4: (2, 4, 6),
    5: (2, 5, 7),
    6: (1, 5, 6),
    7: (2, 5, 7),
}


def reflection_matrix(j: int) -> np.ndarray:
    signs = np.ones(8)
    for k in REFLECTIONS[j]:
        signs[k - 1] = -1.0
    return np.diag(signs)


def _permutation_matrix(images) -> np.ndarray:
    # images[k] = (source index, sign) for output coordinate k (0-based)
    T = np.zeros((8, 8))
    for k, (src, sign) in enumerate(images):
        T[k, src] = sign
    return T


# rho -> P rho P^T with P exchanging levels 1 and 3
SWAP13_MATRIX = _permutation_matrix(
    [(5, 1), (6, -1), (2, -1), (3, 1), (4, -1), (0, 1), (1, -1), (7, 1)]
)

# rho'_ij = rho_{s(i) s(j)} with s = (2, 3, 1); the (x3, x8) block is the
# rotation by 2 pi / 3
CYCLE_MATRIX = _permutation_matrix(
    [(5, 1), (6, 1), (2, 0), (0, 1), (1, -1), (3, 1), (4, -1), (7, 0)]
)
CYCLE_MATRIX[2, 2], CYCLE_MATRIX[2, 7] = -0.5, -SQRT3 / 2
CYCLE_MATRIX[7, 2], CYCLE_MATRIX[7, 7] = SQRT3 / 2, -0.5

for _m in (SWAP13_MATRIX, CYCLE_MATRIX):
    _m.setflags(write=False)


@dataclass(frozen=True)
class TripleTransform:
    kind: str

    @property
    def applies_to(self) -> str:
        return "both_priors" if self.kind == SWAP13 else "constant_only"

    @property
    def matrix(self) -> np.ndarray:
        return SWAP13_MATRIX if self.kind == SWAP13 else CYCLE_MATRIX

    def permute(self, f) -> FrequencyTriple:
        n1, n2, n3 = f
        if self.kind == SWAP13:
            return FrequencyTriple(n3, n2, n1)
        return FrequencyTriple(n2, n3, n1)


def vanishing_components(f, p: Prior) -> frozenset[int]:
    """1-based indices of the Bloch components that vanish by symmetry."""
    n1, n2, n3 = FrequencyTriple.of(f)
    out = {1, 2, 4, 5, 6, 7}
    if n1 == n3:
        out.add(3)
        if n1 == n2 and p.kind == CONSTANT:
            out.add(8)
    return frozenset(out)


def swap13_relations(m: MomentEstimate) -> MomentEstimate:
    """Moments of (N3, N2, N1) from moments of (N1, N2, N3); valid for both priors."""
    return m.transformed(SWAP13_MATRIX, _permuted(m.counts, SWAP13))


def cycle_relations(m: MomentEstimate, p: Prior) -> MomentEstimate:
    """Moments of (N2, N3, N1) from moments of (N1, N2, N3); constant prior only."""
    if p.kind != CONSTANT:
        raise SymmetryNotApplicableError("the cyclic relation holds only for the constant prior")
    return m.transformed(CYCLE_MATRIX, _permuted(m.counts, CYCLE))


def _permuted(counts, kind):
    if len(counts) != 3:
        return ()
    return tuple(TripleTransform(kind).permute(counts))


def apply_transforms(m: MomentEstimate, transforms, p: Prior) -> MomentEstimate:
    for t in transforms:
        m = swap13_relations(m) if t.kind == SWAP13 else cycle_relations(m, p)
    return m


def canonical_triple(f, p: Prior) -> tuple[FrequencyTriple, list[TripleTransform]]:
    """Representative of ``f`` plus the transforms carrying its moments back to ``f``.

    Constant prior: the representative has N2 >= N1 >= N3. Gaussian-like
    prior: only the 1<->3 swap is available and the representative has N1 >= N3.
    """
    f = FrequencyTriple.of(f)
    if p.kind == CONSTANT:
        hi, mid, lo = sorted(f, reverse=True)
        canon = FrequencyTriple(mid, hi, lo)
        generators = (TripleTransform(SWAP13), TripleTransform(CYCLE))
    else:
        canon = f if f.n1 >= f.n3 else FrequencyTriple(f.n3, f.n2, f.n1)
        generators = (TripleTransform(SWAP13),)
    # breadth-first search gives the shortest transform word
    seen = {canon: []}
    queue = deque([canon])
    while queue:
        t = queue.popleft()
        if t == f:
            return canon, seen[t]
        for g in generators:
            nxt = g.permute(t)
            if nxt not in seen:
                seen[nxt] = seen[t] + [g]
                queue.append(nxt)
    raise AssertionError(f"{f} not reachable from {canon}")  # pragma: no cover
