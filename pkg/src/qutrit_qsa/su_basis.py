"""Generalized Gell-Mann generators and the density matrix <-> Bloch vector maps.

For ``d = 3`` the generators are, in order::

    lambda_1, lambda_2   symmetric / antisymmetric on levels (1, 2)
    lambda_3             diag(1, 0, -1)
    lambda_4, lambda_5   levels (1, 3)
    lambda_6, lambda_7   levels (2, 3)
    lambda_8             diag(1, -2, 1) / sqrt(3)

so that the measurement basis |1>, |2>, |3> is the eigenbasis of lambda_3 and
lambda_8, with |2> singled out by lambda_8.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidDimensionError, InvalidStateError

SQRT3 = np.sqrt(3.0)


def _diagonal_generator(m: int, d: int) -> np.ndarray:
    # Levels are taken in the order (1, d, 2, ..., d-1); for d = 3 this
    # reproduces diag(1, 0, -1) and diag(1, -2, 1)/sqrt(3).
    order = [0, d - 1] + list(range(1, d - 1))
    diag = np.zeros(d)
    for level in order[: m - 1]:
        diag[level] = 1.0
    diag[order[m - 1]] = -(m - 1)
    return np.diag(np.sqrt(2.0 / (m * (m - 1))) * diag).astype(complex)


def gellmann_basis(d: int) -> list[np.ndarray]:
    """Return the ``d**2 - 1`` traceless Hermitian generators with tr(l_i l_j) = 2 delta_ij."""
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    basis = []
    for k in range(1, d):
        for j in range(k):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            basis += [sym, anti]
        basis.append(_diagonal_generator(k + 1, d))
    return basis


LAMBDA = np.array(gellmann_basis(3))
LAMBDA.setflags(write=False)


def rho_from_bloch(x) -> np.ndarray:
    """Map Bloch coordinates to ``I/3 + (1/2) sum_j x_j lambda_j``.

    Accepts a single 8-vector or an array of shape ``(..., 8)``. Positivity is
    not checked.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 8:
        raise InvalidStateError(f"Bloch vectors have 8 components, got shape {x.shape}")
    return np.eye(3) / 3.0 + 0.5 * np.tensordot(x, LAMBDA, axes=([-1], [0]))


def bloch_from_rho(rho) -> np.ndarray:
    """Return ``x_j = tr(lambda_j rho)`` for a unit-trace Hermitian 3x3 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise InvalidStateError(f"expected a 3x3 matrix, got shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-9:
        raise InvalidStateError(f"trace must be 1, got {tr}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        raise InvalidStateError("matrix is not Hermitian")
    # tr(A B) = sum_ab A_ab B_ba
    return np.einsum("jab,ba->j", LAMBDA, rho).real
