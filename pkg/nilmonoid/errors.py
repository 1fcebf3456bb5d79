from typing import List, Optional

__all__ = [
    'NilmonoidError',
    'PresentationError',
    'HirschLengthError',
    'BudgetExceededError',
    'InvariantError'
]


class NilmonoidError(Exception):
    """Base class of all errors raised by nilmonoid."""


class PresentationError(NilmonoidError, ValueError):
    """A presentation is malformed or fails the consistency check.

    Args:
        msg (str): Human readable description.
        violations (Optional[List[str]]): The individual violations, if known.
    """
    def __init__(self, msg:str, violations:Optional[List[str]]=None):
        super().__init__(msg)
        self.violations = list(violations or [])


class HirschLengthError(NilmonoidError, ValueError):
    """The operation needs a commutator subgroup of Hirsch length 1."""


class BudgetExceededError(NilmonoidError, RuntimeError):
    """A brute force enumeration ran out of its node or state budget."""


class InvariantError(NilmonoidError, RuntimeError):
    """An internal postcondition failed. This always indicates a bug."""
