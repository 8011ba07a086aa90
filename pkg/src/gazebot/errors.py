"""Exception hierarchy shared across the package."""


class GazebotError(Exception):
    """Base class for all package errors."""


class ShapeError(GazebotError):
    """Tensor extents incompatible with the requested operation."""


class ConfigError(GazebotError):
    """Parameter outside its documented range."""


class InputError(GazebotError):
    """Malformed or out-of-bounds input data."""


class StateError(GazebotError):
    """Operation invoked in the wrong lifecycle state."""


class ProtocolError(GazebotError):
    """Relay wire-protocol violation."""
