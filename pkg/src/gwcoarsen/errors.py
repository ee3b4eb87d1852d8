"""Exception types shared across the package."""


class GwCoarsenError(Exception):
    """Base class for all package errors."""


class ParseError(GwCoarsenError):
    """Input file is malformed; message carries field/line diagnostics."""


class InvariantViolation(GwCoarsenError):
    """A domain-type invariant does not hold (self-loop, negative weight, bad index, ...)."""


class ZeroDegreeNode(GwCoarsenError):
    """A normalized similarity was requested for a graph with an isolated node."""

    def __init__(self, node: int):
        super().__init__(f"node {node} has zero degree; normalized similarity undefined")
        self.node = node


class ZeroTotalMass(GwCoarsenError):
    """Degree-proportional masses requested but the graph has zero total edge weight."""


class EmptyCluster(GwCoarsenError):
    """A partition has a cluster id with no members."""


class DimensionMismatch(GwCoarsenError):
    """Operands do not agree in size."""


class ZeroDegreeSupernode(GwCoarsenError):
    """A coarsened graph has a supernode with zero degree."""


class NotSymmetric(GwCoarsenError):
    """Matrix fails the symmetry tolerance of the eigensolver."""


class NotPSD(GwCoarsenError):
    """Similarity matrix is not positive semi-definite beyond tolerance."""


class InfeasiblePlan(GwCoarsenError):
    """Transport plan marginals do not match the prescribed masses."""


class DegenerateMarginal(GwCoarsenError):
    """A marginal mass vector has a zero (or negative) entry."""


class ZeroClusterMass(GwCoarsenError):
    """A transport plan column sum is zero where a positive cluster mass is required."""


class ZeroMarginal(GwCoarsenError):
    """A plan marginal has a non-positive entry where positivity is required."""


class ZeroEigenvalue(GwCoarsenError):
    """A relative spectral error was requested against a zero eigenvalue."""


class SizeLimit(GwCoarsenError):
    """Problem exceeds the exact-solver size cap."""


class TooFewEdges(GwCoarsenError):
    """Edge contraction ran out of edges and the mass-merge fallback is impossible."""


class AccumulationScaleWarning(UserWarning):
    """Accumulation-magnitude coarse similarities are not GW-comparable to the original."""
