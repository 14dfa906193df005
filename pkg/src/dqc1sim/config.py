"""Centralized numeric tolerances and size caps."""

from dataclasses import dataclass

# Squared-norm drift allowed on pure states.
NORM_TOL = 1e-9

# Entrywise tolerance on |U U+ - I| for any matrix claimed unitary.
UNITARITY_TOL = 1e-10

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PROB_SUM_TOL = 1e-10

# Eigenvalue floor when a density matrix is explicitly checked for positivity.
PSD_TOL = 1e-9

# Below this, a postselection event counts as impossible rather than as a
# legitimate tiny probability.  Desk-scale events of interest sit far above it.
ZERO_PROB_TOL = 1e-12

# Seed used by the command line when none is given.  Fixed, never time-based.
DEFAULT_SEED = 12345


@dataclass(frozen=True)
class Limits:
    """Size caps for the dense code paths.

    density_cap bounds full density-matrix evolution and every full-matrix
    oracle; exact_cap bounds exact distributions computed as the average
    over the mixed-register basis.  Pure-state sampling has no cap here and
    is limited only by memory (one amplitude vector per shot).
    """

    density_cap: int = 12
    exact_cap: int = 16


DEFAULT_LIMITS = Limits()
