"""Top-level multiply with threshold-driven algorithm dispatch."""

from __future__ import annotations

from .basecase import ThresholdTable, default_thresholds, kmul, omul, t3mul
from .dkss import dmul
from .qmul import qmul
from .smul import smul
from .words import Natural, ScratchArena, as_natural

ALGORITHMS = {
    "omul": lambda a, b, table, arena: omul(a, b),
    "kmul": lambda a, b, table, arena: kmul(a, b, table, arena),
    "t3mul": lambda a, b, table, arena: t3mul(a, b, table, arena),
    "qmul": lambda a, b, table, arena: qmul(a, b, arena),
    "smul": lambda a, b, table, arena: smul(a, b, table, arena),
    "dmul": lambda a, b, table, arena: dmul(a, b, table, arena),
}


def mul(a, b, thresholds: ThresholdTable | None = None, algorithm: str | None = None,
        arena: ScratchArena | None = None) -> Natural:
    """Multiply two nonnegative integers, picking the algorithm by size.

    The ladder is omul -> kmul -> t3mul -> smul (-> dmul when its threshold
    is enabled); qmul can be forced by name but never wins automatic
    dispatch, matching the measured crossovers.
    """
    a, b = as_natural(a), as_natural(b)
    table = (thresholds or default_thresholds()).validate()
    if algorithm is not None:
        try:
            fn = ALGORITHMS[algorithm]
        except KeyError:
            raise ValueError(f"unknown algorithm {algorithm!r}") from None
        return fn(a, b, table, arena)
    n = min(len(a.normalized()), len(b.normalized()))
    if n < table.kmul:
        return omul(a, b)
    if n < table.t3mul:
        return kmul(a, b, table, arena)
    if n < table.smul:
        return t3mul(a, b, table, arena)
    if table.dmul is None or n < table.dmul:
        return smul(a, b, table, arena)
    return dmul(a, b, table, arena)
