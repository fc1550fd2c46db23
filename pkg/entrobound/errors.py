"""
Exceptions raised by entrobound
"""


class EntroboundError(Exception):
    """
    Base class of every error raised by the library
    """


class ValidationError(EntroboundError, ValueError):
    """
    An input violates a precondition or a type invariant. The message names the invariant.
    """


class NumericalError(EntroboundError, ArithmeticError):
    """
    A computation failed numerically (singular conditioning block, corrupt spectrum, no bracket)
    """
