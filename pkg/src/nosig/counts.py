"""Joint outcome counts per measurement setting pair."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SETTINGS = ((0, 0), (0, 1), (1, 0), (1, 1))
# outcome order used everywhere: ++, +-, -+, --   (+ is |0>, - is |1>)
OUTCOMES = ("++", "+-", "-+", "--")


class CountsError(ValueError):
    pass


@dataclass
class CountsTable:
    """``counts[a, b, k]`` is the number of trials with outcome ``OUTCOMES[k]``
    for settings (a, b)."""

    counts: np.ndarray
    pair: tuple = ()
    test: str = ""
    job: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.shape != (2, 2, 4):
            raise CountsError(f"counts must have shape (2, 2, 4), got {c.shape}")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(c == np.round(c)):
                raise CountsError("counts must be integers")
        c = c.astype(np.int64)
        if np.any(c < 0):
            raise CountsError("counts must be non-negative")
        self.counts = c
        self.pair = tuple(int(q) for q in self.pair)

    @classmethod
    def zeros(cls, **kw) -> "CountsTable":
        return cls(np.zeros((2, 2, 4), dtype=np.int64), **kw)

    @classmethod
    def from_probabilities(cls, probs, n: int, **kw) -> "CountsTable":
        """Counts ``round(P * n)`` from a (2, 2, 4) probability array.

        Only meaningful when ``P * n`` is integral (e.g. tables printed to a
        fixed number of decimals with ``n = 10**decimals``).
        """
        p = np.asarray(probs, dtype=float)
        raw = p * n
        counts = np.rint(raw).astype(np.int64)
        if np.max(np.abs(raw - counts)) > 1e-6:
            raise CountsError("probabilities times n are not integral")
        return cls(counts, **kw)

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=2)

    def __add__(self, other: "CountsTable") -> "CountsTable":
        if self.pair != other.pair or self.test != other.test:
            raise CountsError("cannot add counts of different pairs or tests")
        return CountsTable(self.counts + other.counts, pair=self.pair, test=self.test)

    def __eq__(self, other):
        if not isinstance(other, CountsTable):
            return NotImplemented
        return (np.array_equal(self.counts, other.counts) and self.pair == other.pair
                and self.test == other.test and self.job == other.job)


def sum_tables(tables) -> CountsTable:
    tables = list(tables)
    if not tables:
        raise CountsError("no tables to sum")
    total = tables[0].counts.copy()
    for t in tables[1:]:
        if t.pair != tables[0].pair or t.test != tables[0].test:
            raise CountsError("cannot add counts of different pairs or tests")
        total += t.counts
    return CountsTable(total, pair=tables[0].pair, test=tables[0].test)
