"""Exception hierarchy shared by every module."""


class IdconcError(Exception):
    """Base class for all library errors."""


class ConfigurationError(IdconcError):
    """Invalid parameters, incompatible options or malformed input."""


class DomainError(IdconcError):
    """A quantity was requested outside its mathematical domain."""


class RangeError(IdconcError):
    """A target value lies beyond the reachable range of a monotone map."""


class NumericError(IdconcError):
    """A numerical routine failed to reach its accuracy target."""
