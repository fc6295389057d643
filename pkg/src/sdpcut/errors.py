"""Exception types shared across the package."""


class SdpCutError(Exception):
    """Base class for all package errors."""


class InvalidInput(SdpCutError):
    """Malformed or out-of-range user input (bad shapes, bad parameters)."""


class DegenerateDegree(SdpCutError):
    """A vertex has zero degree; normalized quantities are undefined."""


class InvalidPartition(SdpCutError):
    """Partition does not match the graph or has an empty cluster."""


class OracleTooLarge(SdpCutError):
    """Brute-force enumeration guard tripped."""


class CertificateIntervalEmpty(SdpCutError):
    """The admissible interval for the dual parameter z is empty."""


class NotApplicable(SdpCutError):
    """Operation requested in a setting it is not defined for."""
