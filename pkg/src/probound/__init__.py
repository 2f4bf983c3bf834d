"""Randomized combinatorial constructions and Monte Carlo bound checking.

Each construction bundles a sampler over a finite candidate space, a
success predicate, and a claimed success-probability lower bound; the
package verifies the claims with exact enumeration oracles where the
space is small and seeded Monte Carlo everywhere else.
"""

__version__ = "0.1.0"

from .rngcore import (  # noqa: F401
    CONSISTENT,
    INCONCLUSIVE,
    REFUTED,
    Estimate,
    RngStream,
    Verdict,
    run_trials,
    verdict_against_bound,
    wilson_interval,
)
