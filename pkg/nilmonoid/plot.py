from __future__ import annotations

import logging
from collections import Counter
from typing import Iterable, Optional, Sequence, Union

from matplotlib.figure import Figure

from .gaps import GapSet, TorsionGapSet

__all__ = [
    'ConcentrationPlot'
]

logger = logging.getLogger(__name__)


def _projection(v) -> int:
    return v[0] if isinstance(v, tuple) else int(v)


class ConcentrationPlot(object):
    """
    Side by side histograms of a sequence before and after concentration.

    Torsion sequences are drawn by their projection to Z. Elements of A are marked
    on the x axis, the extremes (or the chosen consecutive pair) are highlighted.

    Args:
        height (int, optional): The height of the figure in pixels. Defaults to 480.
        width (int, optional): The width of the figure in pixels. Defaults to 960.
        dpi (int, optional): Dots per inch. Defaults to 96.

    Example:
    ```python
    A = [0, 1, 2]
    before = [1, 1, 1, 1, 1]
    plot = ConcentrationPlot()
    plot.draw(A, before, concentrate_extremes(before, A))
    plot.save('run.png')
    ```

    Attributes:
        figure (matplotlib.figure.Figure): The figure holding both axes.
    """
    def __init__(
        self,
        height:int=480,
        width:int=960,
        dpi:int=96
    ) -> None:
        self.height = height
        self.width = width
        self.dpi = dpi
        self.figure = Figure(figsize=(self.width/self.dpi, self.height/self.dpi), dpi=self.dpi)
        self.axes = self.figure.subplots(1, 2, sharey=True)

    @property
    def title(self) -> str:
        suptitle = self.figure.get_suptitle()
        return suptitle

    @title.setter
    def title(self, title:str) -> None:
        if self.figure.get_suptitle() != title:
            self.figure.suptitle(title)

    def draw(self, A:Union[GapSet, TorsionGapSet, Iterable[int]], before:Sequence, after:Sequence,
             highlight:Optional[Iterable[int]]=None) -> None:
        """
        Render both histograms.

        Args:
            A: The ambient set.
            before (Sequence): The input sequence.
            after (Sequence): The concentrated sequence.
            highlight (Optional[Iterable[int]]): Projections to highlight, defaults to the extremes of A.
        """
        values = sorted({_projection(a) for a in A})
        marked = set(highlight) if highlight is not None else {values[0], values[-1]}
        for ax, seq, label in zip(self.axes, (before, after), ("before", "after")):
            ax.clear()
            counts = Counter(_projection(v) for v in seq)
            heights = [counts.get(v, 0) for v in values]
            colors = ['tab:orange' if v in marked else 'tab:blue' for v in values]
            ax.bar(values, heights, color=colors, width=0.8)
            ax.set_xticks(values)
            ax.set_title(f"{label} ({len(seq)} entries)")
            ax.set_xlabel("value")
        self.axes[0].set_ylabel("count")
        self.figure.stale = True

    def save(self, path:str) -> None:
        self.figure.savefig(path)
        logger.info("wrote concentration plot to %s", path)
