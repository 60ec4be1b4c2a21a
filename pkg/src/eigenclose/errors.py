"""Typed failures raised by the verification pipeline."""


class EigencloseError(Exception):
    """Base class for all package errors."""


class ConfigError(EigencloseError):
    """Invalid problem setup or malformed input files."""


class DimensionMismatch(ConfigError):
    pass


class DivByZeroInterval(EigencloseError):
    """Interval division by an interval containing zero."""


class SingularApprox(EigencloseError):
    """Floating factorization hit an exactly singular pivot."""


class NotVerified(EigencloseError):
    """A verification step could not certify its claim."""


class GapNotCertified(NotVerified):
    """No rigorous lower bound on the distance to the outside spectrum."""


class NodeSolveFailed(NotVerified):
    """A quadrature-node linear system could not be enclosed."""

    def __init__(self, node_index, message=""):
        self.node_index = node_index
        super().__init__(message or f"node {node_index} solve not verified")


class ClusterNotSeparated(NotVerified):
    """Seeds too close to verify as distinct eigenpairs."""


class PositiveDefiniteRequired(NotVerified):
    """Operation needs a certified positive definite B."""


class OnContour(EigencloseError):
    """Eigenvalue lies exactly on the quadrature circle."""
