"""Ideals at jet scale: per-degree echelon bases, normal forms, membership.

An :class:`IdealJet` holds generators ``q_1, ..., q_r`` of an ideal ``J`` in
a truncated polynomial ring.  For each degree ``k`` it can produce a row
echelon basis of the image of ``J`` in the degree-``k`` truncation, i.e. the
span of ``{monomial * q_i mod m^(k+1)}``.  Membership, canonical normal
forms (projection onto the complement of the pivot monomials) and quotient
monomial bases all reduce against these bases.

Pivots follow the graded-lex order with higher degree first, block order
then declared variable order breaking ties, so every output is
deterministic.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from germforge.errors import StructureError
from germforge.fields import Field
from germforge.jets import (Jet, Mono, VariableSet, grlex_asc_key,
                            grlex_desc_key, iter_monomials, mono_mul)
from germforge.linalg import SparseEchelon


class IdealJet:
    """An ideal given by generating jets, with cached echelon bases."""

    def __init__(self, vs: VariableSet, trunc: int, field: Field,
                 generators: Sequence[Jet]):
        self.vs = vs
        self.trunc = trunc
        self.field = field
        gens = []
        for g in generators:
            if g.vs != vs or g.field != field:
                raise StructureError("ideal generator over wrong ring")
            g = g.truncate(trunc) if g.trunc != trunc else g
            if not g.is_zero():
                gens.append(g)
        self.generators: Tuple[Jet, ...] = tuple(gens)
        self._bases: Dict[int, SparseEchelon] = {}
        # the full-truncation basis is the workhorse; build it up front
        self.basis(trunc)

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def basis(self, k: int) -> SparseEchelon:
        """Echelon basis of ``J mod m^(k+1)`` on monomial keys."""
        if k > self.trunc:
            raise StructureError(f"degree {k} exceeds truncation {self.trunc}")
        ech = self._bases.get(k)
        if ech is not None:
            return ech
        ech = SparseEchelon(self.field, grlex_desc_key)
        n = len(self.vs)
        for g in self.generators:
            o = g.order()
            if o > k:
                continue
            items = g.terms.items()
            for mu in iter_monomials(n, k - o):
                row = {}
                for m, c in items:
                    mm = mono_mul(mu, m)
                    if sum(mm) <= k:
                        row[mm] = c
                if row:
                    ech.insert(row)
        self._bases[k] = ech
        return ech

    def normal_form(self, p: Jet, k: Optional[int] = None) -> Jet:
        """Canonical representative of ``p`` modulo ``J + m^(k+1)``."""
        if p.vs != self.vs or p.field != self.field:
            raise StructureError("jet over wrong ring for this ideal")
        if k is None:
            k = self.trunc
        q = p.truncate(k) if p.trunc != k else p
        if not self.generators:
            return q
        red = self.basis(k).reduce(q.terms)
        return Jet(self.vs, k, self.field, red, _normalized=True)

    def member(self, p: Jet, k: Optional[int] = None) -> bool:
        """Whether ``p`` lies in ``J + m^(k+1)``."""
        return self.normal_form(p, k).is_zero()

    def member_mod(self, p: Jet, d: int) -> bool:
        """Whether ``p`` lies in ``J + m^d`` (``1 <= d <= trunc + 1``)."""
        if not 1 <= d <= self.trunc + 1:
            raise StructureError(f"degree bound {d} out of range")
        return self.member(p, d - 1)

    def pivots(self, k: Optional[int] = None):
        if k is None:
            k = self.trunc
        return self.basis(k).pivots()

    def quotient_monomial_basis(self, k: int) -> List[Mono]:
        """Monomials of degree <= k spanning the quotient mod ``m^(k+1)``."""
        piv = set(self.pivots(k))
        return [m for m in sorted(iter_monomials(len(self.vs), k),
                                  key=grlex_asc_key) if m not in piv]

    def power(self, e: int) -> "IdealJet":
        """The ideal generated by all ``e``-fold products of generators."""
        if e == 0:
            one = Jet.const(self.vs, self.trunc, self.field, self.field.one)
            return IdealJet(self.vs, self.trunc, self.field, [one])
        gens = []
        for combo in combinations_with_replacement(self.generators, e):
            g = combo[0]
            for h in combo[1:]:
                g = g * h
            gens.append(g)
        return IdealJet(self.vs, self.trunc, self.field, gens)

    def plus(self, other: "IdealJet") -> "IdealJet":
        if other.vs != self.vs or other.field != self.field:
            raise StructureError("ideal sum over mismatched rings")
        return IdealJet(self.vs, self.trunc, self.field,
                        list(self.generators) + list(other.generators))

    def truncate(self, new_trunc: int) -> "IdealJet":
        return IdealJet(self.vs, new_trunc, self.field,
                        [g.truncate(new_trunc) for g in self.generators])

    def cast(self, vs: VariableSet, trunc: Optional[int] = None) -> "IdealJet":
        t = self.trunc if trunc is None else trunc
        return IdealJet(vs, t, self.field,
                        [g.cast(vs, t) for g in self.generators])

    def __repr__(self):
        gens = ", ".join(g.to_string() for g in self.generators)
        return f"IdealJet({gens or '0'})"


def ideal_normal_form(p: Jet, J: IdealJet) -> Jet:
    return J.normal_form(p)


def ideal_member(p: Jet, J: IdealJet) -> bool:
    return J.member(p)


def quotient_monomial_basis(J: IdealJet, k: int) -> List[Mono]:
    return J.quotient_monomial_basis(k)
