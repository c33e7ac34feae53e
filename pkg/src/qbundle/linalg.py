"""Sparse exact linear algebra over ScalarValue (rank, membership, solving)."""
from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .scalars import ScalarValue

Row = dict


def _pivot_key(row: Row, order: dict) -> Hashable:
    return min(row, key=order.__getitem__)


class Echelon:
    """Incremental row echelon form; rows are dicts key -> ScalarValue."""

    def __init__(self):
        self.rows: dict[Hashable, tuple[Row, Row]] = {}  # pivot -> (row, combination)
        self._order: dict = {}

    def _rank_of(self, k) -> int:
        r = self._order.get(k)
        if r is None:
            r = len(self._order)
            self._order[k] = r
        return r

    def reduce(self, row: Mapping, tag: Hashable | None = None) -> tuple[Row, Row]:
        """Reduce ``row`` against the stored pivots; returns (remainder, combination used)."""
        cur: Row = {k: ScalarValue.coerce(v) for k, v in row.items() if v}
        comb: Row = {} if tag is None else {tag: ScalarValue.coerce(1)}
        for k in cur:
            self._rank_of(k)
        changed = True
        while changed and cur:
            changed = False
            for k in sorted(cur, key=self._order.__getitem__):
                if k in self.rows:
                    prow, pcomb = self.rows[k]
                    f = cur[k] / prow[k]
                    for kk, v in prow.items():
                        self._rank_of(kk)
                        nv = cur.get(kk, 0) - f * v
                        nv = ScalarValue.coerce(nv)
                        if nv.is_zero():
                            cur.pop(kk, None)
                        else:
                            cur[kk] = nv
                    for kk, v in pcomb.items():
                        nv = ScalarValue.coerce(comb.get(kk, 0) - f * v)
                        if nv.is_zero():
                            comb.pop(kk, None)
                        else:
                            comb[kk] = nv
                    changed = True
                    break
        return cur, comb

    def add(self, row: Mapping, tag: Hashable | None = None) -> bool:
        """Insert a row; returns True if it increased the rank."""
        rem, comb = self.reduce(row, tag)
        if not rem:
            return False
        piv = min(rem, key=self._order.__getitem__)
        self.rows[piv] = (rem, comb)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(rows: Sequence[Mapping]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def solve_combination(rows: Sequence[Mapping], target: Mapping) -> dict | None:
    """Coefficients c with Σ c_i rows[i] = target, or None."""
    e = Echelon()
    for i, r in enumerate(rows):
        e.add(r, i)
    rem, comb = e.reduce(target)
    if rem:
        return None
    return {i: -v for i, v in comb.items()}
