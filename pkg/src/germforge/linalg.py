"""Exact sparse row-echelon reduction and linear solving.

Rows are sparse dicts over arbitrary hashable keys with a total order given
by a sort key; the pivot of a row is its first key in that order.  Stored
pivot rows are normalized (pivot coefficient one) and every key of a row
other than its pivot is strictly later in the order, so reducing a vector
strictly decreases its key set and terminates.

Used with graded-lex-ordered monomial keys for ideal bases and normal
forms, and with integer symbol ids (right-hand side as the last column) for
the per-order solver systems.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, List, Optional, Tuple

from germforge import kernels
from germforge.fields import Field


class SparseEchelon:
    """Incremental echelon basis of the span of inserted rows."""

    def __init__(self, field: Field, sort_key: Callable[[Hashable], object]):
        self.field = field
        self.sort_key = sort_key
        self.rows: Dict[Hashable, Dict[Hashable, object]] = {}
        if field.char == 0:
            self._submul = kernels.row_submul_q
        else:
            p = field.char
            self._submul = lambda row, src, c: kernels.row_submul_fp(row, src, c, p)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self):
        return self.rows.keys()

    def _clean(self, row) -> Dict[Hashable, object]:
        f = self.field
        out = {}
        for k, c in row.items():
            c = f.normalize(c)
            if not f.is_zero(c):
                out[k] = c
        return out

    def reduce(self, row: Dict[Hashable, object]) -> Dict[Hashable, object]:
        """Fully reduce a vector against the stored rows (input untouched)."""
        row = self._clean(row)
        rows = self.rows
        submul = self._submul
        while True:
            hits = [k for k in row if k in rows]
            if not hits:
                return row
            hits.sort(key=self.sort_key)
            for k in hits:
                c = row.get(k)
                if c is None:
                    continue
                submul(row, rows[k], c)

    def insert(self, row: Dict[Hashable, object]) -> Optional[Hashable]:
        """Reduce then adjoin; returns the new pivot, or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        piv = min(r, key=self.sort_key)
        inv = self.field.inv(r[piv])
        f = self.field
        self.rows[piv] = {k: f.normalize(c * inv) for k, c in r.items()}
        return piv

    def contains(self, row) -> bool:
        return not self.reduce(row)


RHS = -1  # symbol id of the affine column in solver systems


class LinearSystem:
    """Affine system ``sum(coeff * u) + const = 0`` over integer symbol ids.

    Solving sets every free (non-pivot) symbol to zero.
    """

    def __init__(self, field: Field):
        # RHS sorts last so a row surviving with only a constant is the
        # witness of inconsistency.
        self.field = field
        self.ech = SparseEchelon(field, sort_key=lambda k: (k < 0, k))
        self.inconsistent: List[Dict[int, object]] = []

    def add(self, coeffs: Dict[int, object], const) -> bool:
        """Insert one equation; returns False if it made the system
        inconsistent."""
        row = dict(coeffs)
        if not self.field.is_zero(self.field.normalize(const)):
            row[RHS] = const
        piv = self.ech.insert(row)
        if piv == RHS:
            self.inconsistent.append(self.ech.rows.pop(RHS))
            return False
        return True

    @property
    def consistent(self) -> bool:
        return not self.inconsistent

    def touched_symbols(self):
        seen = set()
        for piv, row in self.ech.rows.items():
            seen.update(k for k in row if k >= 0)
        for row in self.inconsistent:
            seen.update(k for k in row if k >= 0)
        return seen

    def solve_frees_zero(self) -> Dict[int, object]:
        """Particular solution with every free coordinate set to zero."""
        f = self.field
        vals: Dict[int, object] = {}
        for piv in sorted(self.ech.rows, reverse=True):
            if piv == RHS:
                continue
            row = self.ech.rows[piv]
            s = row.get(RHS, f.zero)
            for k, c in row.items():
                if k >= 0 and k != piv:
                    v = vals.get(k)
                    if v is not None:
                        s = s + c * v
            vals[piv] = f.normalize(-s)
        return vals
