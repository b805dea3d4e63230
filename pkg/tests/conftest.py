import numpy as np
import pytest
from scipy.special import gammaln

from qutrit_qsa.posterior import IntegrationConfig

SQRT3 = np.sqrt(3.0)

# Small budget for unit tests: 8 replicates of 2^18 points.
QUICK = IntegrationConfig(samples=1 << 18, replicates=8, seed=7)


@pytest.fixture(scope="session")
def quick_cfg():
    return QUICK


def dirichlet_diag_mean(counts):
    """Exact posterior mean of diag(rho) under the flat Bloch prior.

    Lebesgue measure on Bloch coordinates is the Hilbert-Schmidt measure, for
    which the diagonal of a qutrit state is Dirichlet(3, 3, 3) distributed;
    multiplying by prod rho_ii^N_i gives Dirichlet(3 + N_i).
    """
    a = 3.0 + np.asarray(counts, dtype=float)
    return a / a.sum()


def dirichlet_evidence_ratio(counts):
    """Exact Z(f)/Z(0) for the flat prior: E[prod rho_ii^N_i] under Dirichlet(3,3,3)."""
    n = np.asarray(counts, dtype=float)
    return float(np.exp(gammaln(9.0) - gammaln(9.0 + n.sum()) + np.sum(gammaln(3.0 + n) - gammaln(3.0))))


def bloch_x3_x8(diag):
    d = np.asarray(diag, dtype=float)
    return np.array([d[0] - d[2], SQRT3 * (1.0 / 3.0 - d[1])])


def hs_random_states(n, seed=0):
    """Hilbert-Schmidt distributed 3x3 density matrices via Ginibre matrices."""
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(n, 3, 3)) + 1j * rng.normal(size=(n, 3, 3))
    rho = G @ G.conj().transpose(0, 2, 1)
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]
