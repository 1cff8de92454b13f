"""Python bindings for the sdelab C++ core."""

from ._sdelab import *  # noqa: F401,F403
from ._sdelab import DomainError, FactorizationError, RunFailure, ValidationError  # noqa: F401

__version__ = "0.1.0"
