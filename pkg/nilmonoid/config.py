from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

__all__ = [
    'DEFAULT_BOX',
    'DEFAULT_DEPTH',
    'BFS_BUDGET',
    'COSET_BUDGET',
    'STATE_BUDGET',
    'Settings'
]

DEFAULT_BOX = 8
DEFAULT_DEPTH = 8
BFS_BUDGET = 10**7
COSET_BUDGET = 10**6
STATE_BUDGET = 2 * 10**6


@dataclass(frozen=True)
class Settings:
    """
    Tunables shared by the solver, the oracles and the command line.

    Args:
        box (int): Upper bound for every exponent in a knapsack search.
        depth (int): Depth of oracle BFS balls.
        weight (Optional[int]): Upper bound for the sum of all exponents.
            None means the box is the only bound.
        bfs_budget (int): Maximal number of states a BFS ball may hold.
        coset_budget (int): Maximal number of cosets a coset enumeration may visit.
        state_budget (int): Maximal number of partial products the layered
            knapsack search keeps alive.
    """
    box: int = DEFAULT_BOX
    depth: int = DEFAULT_DEPTH
    weight: Optional[int] = None
    bfs_budget: int = BFS_BUDGET
    coset_budget: int = COSET_BUDGET
    state_budget: int = STATE_BUDGET

    def __post_init__(self):
        if self.box < 0:
            raise ValueError("box must be non-negative")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.weight is not None and self.weight < 0:
            raise ValueError("weight must be non-negative or None")

    @classmethod
    def from_args(cls, args:Any) -> Settings:
        """Build settings from an argparse namespace, ignoring missing flags."""
        values = {}
        for name in ('box', 'depth', 'weight', 'bfs_budget', 'coset_budget', 'state_budget'):
            value = getattr(args, name, None)
            if value is not None:
                values[name] = value
        return cls(**values)
