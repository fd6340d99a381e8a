"""Truncated multivariate power series (jets) over an exact field.

A :class:`Jet` represents the class of a power series modulo ``m^(D+1)``
where ``m`` is the ideal generated by *all* variables of its
:class:`VariableSet` (parameter ``t``-blocks included).  Terms are stored
sparsely as ``dict[exponent-tuple, coefficient]``; exponent tuples are
aligned with the block-major variable order of the ``VariableSet``, which is
also the tie-break order of the graded-lexicographic monomial order used
everywhere in the library.

All values are immutable after construction; every operation returns a new
jet, so sharing across threads is safe.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from germforge import kernels
from germforge.errors import DomainError, StructureError
from germforge.fields import Field

Mono = Tuple[int, ...]


class VariableSet:
    """An ordered set of named variables partitioned into ordered blocks.

    Blocks carry the nest/product structure: source variables, target
    variables and frozen parameter blocks (conventionally named ``"t"``)
    live in separate blocks.  Variable order is block-major and fixes the
    graded-lex tie-break.
    """

    __slots__ = ("blocks", "names", "index", "block_of", "_hash")

    def __init__(self, blocks: Sequence[Tuple[str, Sequence[str]]]):
        self.blocks: Tuple[Tuple[str, Tuple[str, ...]], ...] = tuple(
            (bname, tuple(bvars)) for bname, bvars in blocks
        )
        names = []
        block_of = {}
        for bname, bvars in self.blocks:
            for v in bvars:
                if v in block_of:
                    raise StructureError(f"duplicate variable name {v!r}")
                block_of[v] = bname
                names.append(v)
        if len({b for b, _ in self.blocks}) != len(self.blocks):
            raise StructureError("duplicate block name")
        self.names: Tuple[str, ...] = tuple(names)
        self.index: Dict[str, int] = {v: i for i, v in enumerate(self.names)}
        self.block_of: Dict[str, str] = block_of
        self._hash = hash(self.blocks)

    @classmethod
    def single_block(cls, block: str, names: Sequence[str]) -> "VariableSet":
        return cls([(block, names)])

    def has_block(self, bname: str) -> bool:
        return any(b == bname for b, _ in self.blocks)

    def block_vars(self, bname: str) -> Tuple[str, ...]:
        for b, bvars in self.blocks:
            if b == bname:
                return bvars
        raise StructureError(f"no block named {bname!r}")

    def positions(self, bname: str) -> Tuple[int, ...]:
        return tuple(self.index[v] for v in self.block_vars(bname))

    def drop_block(self, bname: str) -> "VariableSet":
        return VariableSet([(b, v) for b, v in self.blocks if b != bname])

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VariableSet) and self.blocks == other.blocks

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = ", ".join(f"{b}:{' '.join(v)}" for b, v in self.blocks)
        return f"VariableSet({parts})"


def concat_variable_sets(a: VariableSet, b: VariableSet,
                         shared: Sequence[str] = ("t",)) -> VariableSet:
    """Block-concatenate two variable sets, merging identically-named shared
    blocks (which must agree verbatim); shared blocks are placed last."""
    blocks = [(bn, bv) for bn, bv in a.blocks if bn not in shared]
    blocks += [(bn, bv) for bn, bv in b.blocks if bn not in shared]
    for s in shared:
        if a.has_block(s) and b.has_block(s):
            if a.block_vars(s) != b.block_vars(s):
                raise StructureError(f"shared block {s!r} differs")
            blocks.append((s, a.block_vars(s)))
        elif a.has_block(s):
            blocks.append((s, a.block_vars(s)))
        elif b.has_block(s):
            blocks.append((s, b.block_vars(s)))
    return VariableSet(blocks)


def mono_degree(m: Mono) -> int:
    return sum(m)

def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def grlex_desc_key(m: Mono):
    """Sort key placing the graded-lex largest monomial first.

    Higher total degree first; ties broken lexicographically on the
    exponent tuple in block-major variable order (earlier variable with the
    larger exponent wins).
    """
    return (-sum(m), tuple(-e for e in m))


def grlex_asc_key(m: Mono):
    return (sum(m), tuple(-e for e in m))


class Jet:
    """A polynomial representative of a power series mod ``m^(trunc+1)``."""

    __slots__ = ("vs", "trunc", "field", "terms", "_hash", "_items")

    def __init__(self, vs: VariableSet, trunc: int, field: Field,
                 terms: Dict[Mono, object], _normalized: bool = False):
        self.vs = vs
        self.trunc = trunc
        self.field = field
        if not _normalized:
            clean = {}
            for m, c in terms.items():
                if sum(m) > trunc:
                    continue
                c = field.normalize(c)
                if not field.is_zero(c):
                    clean[m] = c
            terms = clean
        self.terms = terms
        self._hash = None
        self._items = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vs, trunc, field) -> "Jet":
        return cls(vs, trunc, field, {}, _normalized=True)

    @classmethod
    def const(cls, vs, trunc, field, c) -> "Jet":
        return cls(vs, trunc, field, {(0,) * len(vs): c})

    @classmethod
    def variable(cls, vs, trunc, field, name: str) -> "Jet":
        if name not in vs.index:
            raise StructureError(f"unknown variable {name!r}")
        mono = tuple(1 if i == vs.index[name] else 0 for i in range(len(vs)))
        return cls(vs, trunc, field, {mono: field.one})

    @classmethod
    def monomial(cls, vs, trunc, field, mono: Mono, c=None) -> "Jet":
        return cls(vs, trunc, field, {tuple(mono): field.one if c is None else c})

    # -- bookkeeping ---------------------------------------------------

    def _sorted_items(self):
        """Term list ``(mono, degree, coeff)`` sorted by ascending degree."""
        if self._items is None:
            items = [(m, sum(m), c) for m, c in self.terms.items()]
            items.sort(key=lambda t: t[1])
            self._items = items
        return self._items

    def same_ring(self, other: "Jet") -> bool:
        return (self.vs == other.vs and self.trunc == other.trunc
                and self.field == other.field)

    def _check_ring(self, other: "Jet"):
        if not self.same_ring(other):
            raise StructureError("jets live over different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Lowest total degree of a nonzero term; ``trunc + 1`` for zero."""
        if not self.terms:
            return self.trunc + 1
        return min(sum(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vs), self.field.zero)

    def coefficient(self, mono: Mono):
        return self.terms.get(tuple(mono), self.field.zero)

    def homogeneous_part(self, k: int) -> "Jet":
        return Jet(self.vs, self.trunc, self.field,
                   {m: c for m, c in self.terms.items() if sum(m) == k},
                   _normalized=True)

    def degree_le(self, k: int) -> "Jet":
        return Jet(self.vs, self.trunc, self.field,
                   {m: c for m, c in self.terms.items() if sum(m) <= k},
                   _normalized=True)

    def truncate(self, new_trunc: int) -> "Jet":
        if new_trunc == self.trunc:
            return self
        if new_trunc > self.trunc:
            raise StructureError("cannot raise truncation degree")
        return Jet(self.vs, new_trunc, self.field,
                   {m: c for m, c in self.terms.items() if sum(m) <= new_trunc},
                   _normalized=True)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Jet") -> "Jet":
        self._check_ring(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            if prev is None:
                out[m] = c
            else:
                s = f.normalize(prev + c)
                if f.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
        return Jet(self.vs, self.trunc, self.field, out, _normalized=True)

    def __neg__(self) -> "Jet":
        f = self.field
        return Jet(self.vs, self.trunc, f,
                   {m: f.normalize(-c) for m, c in self.terms.items()},
                   _normalized=True)

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def __mul__(self, other: "Jet") -> "Jet":
        self._check_ring(other)
        a, b = self._sorted_items(), other._sorted_items()
        if len(a) > len(b):
            a, b = b, a
        if self.field.char == 0:
            out = kernels.mul_terms_q(a, b, self.trunc)
        else:
            out = kernels.mul_terms_fp(a, b, self.trunc, self.field.char)
        return Jet(self.vs, self.trunc, self.field, out, _normalized=True)

    def scale(self, c) -> "Jet":
        f = self.field
        c = f.normalize(c)
        if f.is_zero(c):
            return Jet.zero(self.vs, self.trunc, f)
        out = {}
        for m, v in self.terms.items():
            s = f.normalize(c * v)
            if not f.is_zero(s):
                out[m] = s
        return Jet(self.vs, self.trunc, f, out, _normalized=True)

    def __pow__(self, e: int) -> "Jet":
        if e < 0:
            raise DomainError("negative jet power")
        result = Jet.const(self.vs, self.trunc, self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- substitution and derivatives -----------------------------------

    def substitute(self, assignment: Mapping[str, "Jet"],
                   result_ring: Optional[Tuple[VariableSet, int, Field]] = None
                   ) -> "Jet":
        """Evaluate at ``var -> jet``; unassigned variables map to
        themselves in the result ring.

        Every assigned jet must have zero constant term (substitution must
        stay inside the maximal ideal); identity assignments of frozen
        parameter variables satisfy this automatically.
        """
        if result_ring is None:
            if assignment:
                g = next(iter(assignment.values()))
                rvs, rtrunc, rfield = g.vs, g.trunc, g.field
            else:
                rvs, rtrunc, rfield = self.vs, self.trunc, self.field
        else:
            rvs, rtrunc, rfield = result_ring
        if rfield != self.field:
            raise StructureError("substitution across different fields")
        images: Dict[int, Jet] = {}
        for name, g in assignment.items():
            if name not in self.vs.index:
                raise StructureError(f"assigned variable {name!r} not in ring")
            if g.vs != rvs or g.trunc != rtrunc or g.field != rfield:
                raise StructureError("assigned jets live over different rings")
            if not rfield.is_zero(g.constant_term()):
                raise DomainError(
                    f"substitution for {name!r} has nonzero constant term")
            images[self.vs.index[name]] = g

        one = Jet.const(rvs, rtrunc, rfield, rfield.one)
        id_cache: Dict[int, Jet] = {}
        pow_cache: Dict[Tuple[int, int], Jet] = {}

        def var_image(i: int) -> Jet:
            img = images.get(i)
            if img is not None:
                return img
            j = id_cache.get(i)
            if j is None:
                name = self.vs.names[i]
                if name not in rvs.index:
                    raise StructureError(
                        f"unassigned variable {name!r} missing from result ring")
                j = Jet.variable(rvs, rtrunc, rfield, name)
                id_cache[i] = j
            return j

        def power(i: int, e: int) -> Jet:
            key = (i, e)
            p = pow_cache.get(key)
            if p is None:
                if e == 1:
                    p = var_image(i)
                else:
                    half = power(i, e // 2)
                    p = half * half
                    if e % 2:
                        p = p * var_image(i)
                pow_cache[key] = p
            return p

        acc: Dict[Mono, object] = {}
        f = rfield
        for m, c in self.terms.items():
            term = one
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
                    if term.is_zero():
                        break
            if term.is_zero():
                continue
            for mm, cc in term.terms.items():
                prev = acc.get(mm)
                acc[mm] = c * cc if prev is None else prev + c * cc
        return Jet(rvs, rtrunc, rfield, acc)

    def substitute_with(self, sub: "Substituter") -> "Jet":
        return sub.apply(self)

    def derivative(self, name: str) -> "Jet":
        i = self.vs.index[name]
        f = self.field
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1:]
            d = f.normalize(c * e)
            if not f.is_zero(d):
                prev = out.get(dm)
                if prev is None:
                    out[dm] = d
                else:
                    s = f.normalize(prev + d)
                    if f.is_zero(s):
                        del out[dm]
                    else:
                        out[dm] = s
        return Jet(self.vs, self.trunc, f, out, _normalized=True)

    def cast(self, vs: VariableSet, trunc: Optional[int] = None) -> "Jet":
        """Re-express over another variable set matching variables by name.

        Variables actually appearing must exist in the new set.
        """
        if trunc is None:
            trunc = self.trunc
        positions = {}
        out = {}
        n = len(vs)
        for m, c in self.terms.items():
            if sum(m) > trunc:
                continue
            mm = [0] * n
            for i, e in enumerate(m):
                if e:
                    name = self.vs.names[i]
                    j = positions.get(name)
                    if j is None:
                        if name not in vs.index:
                            raise StructureError(
                                f"variable {name!r} missing from target set")
                        j = vs.index[name]
                        positions[name] = j
                    mm[j] = e
            out[tuple(mm)] = c
        return Jet(vs, trunc, self.field, out, _normalized=True)

    def set_block_zero(self, bname: str) -> "Jet":
        """Substitute zero for every variable of a block (staying in-ring)."""
        pos = set(self.vs.positions(bname))
        out = {m: c for m, c in self.terms.items()
               if all(m[i] == 0 for i in pos)}
        return Jet(self.vs, self.trunc, self.field, out, _normalized=True)

    # -- comparisons / formatting ---------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.same_ring(other)
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vs, self.trunc,
                               frozenset(self.terms.items())))
        return self._hash

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=grlex_asc_key):
            c = self.terms[m]
            mono = " ".join(
                f"{self.vs.names[i]}^{e}" if e > 1 else self.vs.names[i]
                for i, e in enumerate(m) if e)
            cs = self.field.format(c)
            if mono:
                if cs == "1":
                    body = mono
                elif cs == "-1":
                    body = f"-{mono}"
                else:
                    body = f"{cs} {mono}"
            else:
                body = cs
            parts.append(body)
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"Jet({self.to_string()})"


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Product of two jets over the same ring, truncated exactly."""
    return a * b


def jet_substitute(f: Jet, assignment: Mapping[str, Jet],
                   result_ring=None) -> Jet:
    return f.substitute(assignment, result_ring)


def jet_sum(jets: Iterable[Jet], zero: Jet) -> Jet:
    acc = zero
    for j in jets:
        acc = acc + j
    return acc


class Substituter:
    """A reusable substitution ``source variables -> jets`` with shared
    power caches, for evaluating many jets under one assignment."""

    def __init__(self, source_vs: VariableSet,
                 assignment: Mapping[str, Jet],
                 result_ring: Tuple[VariableSet, int, Field],
                 check_local: bool = True):
        self.source_vs = source_vs
        rvs, rtrunc, rfield = result_ring
        self.rvs, self.rtrunc, self.rfield = rvs, rtrunc, rfield
        self.one = Jet.const(rvs, rtrunc, rfield, rfield.one)
        self.images: Dict[int, Jet] = {}
        for name, g in assignment.items():
            if name not in source_vs.index:
                raise StructureError(f"assigned variable {name!r} not in ring")
            if g.vs != rvs or g.trunc != rtrunc or g.field != rfield:
                raise StructureError("assigned jet over wrong result ring")
            if check_local and not rfield.is_zero(g.constant_term()):
                raise DomainError(
                    f"substitution for {name!r} has nonzero constant term")
            self.images[source_vs.index[name]] = g
        self._pow: Dict[Tuple[int, int], Jet] = {}

    def _var_image(self, i: int) -> Jet:
        img = self.images.get(i)
        if img is None:
            name = self.source_vs.names[i]
            if name not in self.rvs.index:
                raise StructureError(
                    f"unassigned variable {name!r} missing from result ring")
            img = Jet.variable(self.rvs, self.rtrunc, self.rfield, name)
            self.images[i] = img
        return img

    def power(self, i: int, e: int) -> Jet:
        key = (i, e)
        p = self._pow.get(key)
        if p is None:
            if e == 1:
                p = self._var_image(i)
            else:
                half = self.power(i, e // 2)
                p = half * half
                if e % 2:
                    p = p * self._var_image(i)
            self._pow[key] = p
        return p

    def monomial(self, mono: Mono) -> Jet:
        term = self.one
        for i, e in enumerate(mono):
            if e:
                term = term * self.power(i, e)
                if term.is_zero():
                    break
        return term

    def apply(self, jet: Jet) -> Jet:
        if jet.vs != self.source_vs:
            raise StructureError("jet over a different source ring")
        acc: Dict[Mono, object] = {}
        for m, c in jet.terms.items():
            term = self.monomial(m)
            if term.is_zero():
                continue
            for mm, cc in term.terms.items():
                prev = acc.get(mm)
                acc[mm] = c * cc if prev is None else prev + c * cc
        return Jet(self.rvs, self.rtrunc, self.rfield, acc)


def iter_monomials_of_degree(nvars: int, deg: int):
    """All exponent tuples of the given total degree, lexicographically."""
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in iter_monomials_of_degree(nvars - 1, deg - first):
            yield (first,) + rest


def iter_monomials(nvars: int, max_deg: int):
    """All exponent tuples of total degree <= max_deg, by ascending degree."""
    for d in range(max_deg + 1):
        yield from iter_monomials_of_degree(nvars, d)
