"""Exception types shared across the library.

Exit-code mapping used by the CLI: 2 = precondition failure (a hypothesis
antecedent is unmet, reported rather than raised where the contract says so),
3 = budget exhaustion, 4 = invariant violation (always a bug).
"""


class SievelabError(Exception):
    pass


class BudgetExceeded(SievelabError):
    """A size/memory/node budget would be exceeded; raise instead of thrashing."""


class ExplosionGuard(BudgetExceeded):
    """A DFS enumeration exceeded its node budget."""


class InvalidResidue(SievelabError):
    """Residue class not coprime to the modulus."""


class ToleranceUnreachable(SievelabError):
    """Requested tolerance cannot be met within the refinement budget."""


class DiscretizationInconclusive(SievelabError):
    """Binned DP could not certify the window mass; never silently wrong."""


class IntervalBlowup(SievelabError):
    """Union-of-intervals arithmetic exceeded the component budget."""


class ResolutionTooCoarse(SievelabError):
    """Quadrature error bar exceeds the requested tolerance at this grid."""


class AmbiguousBoundary(SievelabError):
    """A boundary comparison fell inside the certified error bar of an
    irrational constant; flagged instead of silently rounded."""
