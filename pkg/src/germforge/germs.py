"""Scheme-germs as presented local rings and map-germs between them.

A germ ``X`` is presented as ``k[[x]]/J_X`` at a fixed jet truncation; a
map-germ ``X -> Y`` is stored contravariantly by the images of the target
variables (the algebra homomorphism on representatives).  Validity of a map
is the ideal condition: every generator of ``J_Y`` must land in
``J_X + m^(D+1)`` under substitution.

Rings may carry a shared parameter block named ``"t"``; maps between two
rings carrying the same ``t``-block fix the parameters, and unfoldings are
compared to their central fibre by setting ``t = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from germforge.errors import DomainError, StructureError
from germforge.fields import Field
from germforge.ideals import IdealJet
from germforge.jets import Jet, VariableSet, concat_variable_sets

T_BLOCK = "t"


class LocalRing:
    """A presentation of ``k[[vars]] / J`` truncated at total degree D."""

    __slots__ = ("vs", "trunc", "field", "ideal", "_trunc_cache")

    def __init__(self, vs: VariableSet, trunc: int, field: Field,
                 ideal: Optional[IdealJet] = None,
                 generators: Sequence[Jet] = ()):
        if trunc < 1:
            raise StructureError("truncation degree must be at least 1")
        self.vs = vs
        self.trunc = trunc
        self.field = field
        if ideal is None:
            ideal = IdealJet(vs, trunc, field, list(generators))
        if ideal.vs != vs or ideal.trunc != trunc or ideal.field != field:
            raise StructureError("ideal presented over a different ring")
        for g in ideal.generators:
            if not field.is_zero(g.constant_term()):
                raise DomainError(
                    "ideal generator with nonzero constant term (J must lie "
                    "in the maximal ideal)")
        self.ideal = ideal
        self._trunc_cache: Dict[int, "LocalRing"] = {}

    # -- constructors ----------------------------------------------------

    @classmethod
    def smooth(cls, field: Field, trunc: int, names: Sequence[str],
               block: str = "x", t_names: Sequence[str] = ()) -> "LocalRing":
        blocks: List[Tuple[str, Sequence[str]]] = [(block, tuple(names))]
        if t_names:
            blocks.append((T_BLOCK, tuple(t_names)))
        return cls(VariableSet(blocks), trunc, field)

    # -- basic jets --------------------------------------------------------

    def zero(self) -> Jet:
        return Jet.zero(self.vs, self.trunc, self.field)

    def one(self) -> Jet:
        return Jet.const(self.vs, self.trunc, self.field, self.field.one)

    def var(self, name: str) -> Jet:
        return Jet.variable(self.vs, self.trunc, self.field, name)

    def jet(self, terms) -> Jet:
        return Jet(self.vs, self.trunc, self.field, terms)

    # -- structure ---------------------------------------------------------

    def is_smooth(self) -> bool:
        return self.ideal.is_zero_ideal()

    @property
    def t_vars(self) -> Tuple[str, ...]:
        return self.vs.block_vars(T_BLOCK) if self.vs.has_block(T_BLOCK) else ()

    @property
    def geometric_vars(self) -> Tuple[str, ...]:
        tset = set(self.t_vars)
        return tuple(v for v in self.vs.names if v not in tset)

    def same_scale(self, other: "LocalRing") -> bool:
        return self.trunc == other.trunc and self.field == other.field

    def truncate(self, new_trunc: int) -> "LocalRing":
        if new_trunc == self.trunc:
            return self
        ring = self._trunc_cache.get(new_trunc)
        if ring is None:
            ring = LocalRing(self.vs, new_trunc, self.field,
                             self.ideal.truncate(new_trunc))
            self._trunc_cache[new_trunc] = ring
        return ring

    def product(self, other: "LocalRing") -> "LocalRing":
        """The ring of ``X x Y`` with ideal ``J_X + J_Y`` (shared t-block)."""
        if not self.same_scale(other):
            raise StructureError("product of rings at different scales")
        vs = concat_variable_sets(self.vs, other.vs, shared=(T_BLOCK,))
        gens = [g.cast(vs) for g in self.ideal.generators]
        gens += [g.cast(vs) for g in other.ideal.generators]
        return LocalRing(vs, self.trunc, self.field,
                         IdealJet(vs, self.trunc, self.field, gens))

    def drop_t(self) -> "LocalRing":
        """The central-fibre ring: substitute ``t = 0`` and drop the block."""
        if not self.vs.has_block(T_BLOCK):
            return self
        vs = self.vs.drop_block(T_BLOCK)
        gens = [g.set_block_zero(T_BLOCK).cast(vs)
                for g in self.ideal.generators]
        return LocalRing(vs, self.trunc, self.field,
                         IdealJet(vs, self.trunc, self.field, gens))

    def __eq__(self, other):
        return (isinstance(other, LocalRing) and self.vs == other.vs
                and self.trunc == other.trunc and self.field == other.field
                and self.ideal.generators == other.ideal.generators)

    def __hash__(self):
        return hash((self.vs, self.trunc, self.field, self.ideal.generators))

    def __repr__(self):
        gens = ", ".join(g.to_string() for g in self.ideal.generators)
        return (f"LocalRing({self.vs!r}, D={self.trunc}, "
                f"J=({gens or '0'}))")


@dataclass
class ValidityReport:
    ok: bool
    failures: List[str] = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


class GermMap:
    """A map-germ ``X -> Y`` stored by the images of the target variables."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: LocalRing, target: LocalRing,
                 components: Mapping[str, Jet]):
        if not source.same_scale(target):
            raise StructureError("source and target at different scales")
        comps = {}
        for name in target.vs.names:
            if name not in components:
                raise StructureError(f"missing component for {name!r}")
            c = components[name]
            if c.vs != source.vs or c.trunc != source.trunc \
                    or c.field != source.field:
                raise StructureError(f"component {name!r} over wrong ring")
            comps[name] = c
        self.source = source
        self.target = target
        self.components = comps

    # -- conveniences ------------------------------------------------------

    @classmethod
    def from_tuple(cls, source: LocalRing, target: LocalRing,
                   jets: Sequence[Jet]) -> "GermMap":
        names = target.vs.names
        if len(jets) != len(names):
            raise StructureError("wrong number of components")
        return cls(source, target, dict(zip(names, jets)))

    @classmethod
    def identity(cls, ring: LocalRing) -> "GermMap":
        return cls(ring, ring, {v: ring.var(v) for v in ring.vs.names})

    def component_tuple(self) -> Tuple[Jet, ...]:
        return tuple(self.components[v] for v in self.target.vs.names)

    def assignment(self) -> Dict[str, Jet]:
        return dict(self.components)

    def shares_t(self) -> bool:
        return (self.source.vs.has_block(T_BLOCK)
                and self.target.vs.has_block(T_BLOCK)
                and self.source.vs.block_vars(T_BLOCK)
                == self.target.vs.block_vars(T_BLOCK))

    # -- operations ---------------------------------------------------------

    def pullback(self, g: Jet) -> Jet:
        """Apply the algebra homomorphism to a jet over the target ring."""
        if g.vs != self.target.vs:
            raise StructureError("jet not over the target ring")
        return g.substitute(self.assignment(),
                            (self.source.vs, self.source.trunc,
                             self.source.field))

    def validate(self) -> ValidityReport:
        failures = []
        f = self.source.field
        for name, c in self.components.items():
            if not f.is_zero(c.constant_term()):
                failures.append(
                    f"component {name!r} has nonzero constant term")
        if self.shares_t():
            for tname in self.target.vs.block_vars(T_BLOCK):
                if self.components[tname] != self.source.var(tname):
                    failures.append(f"parameter {tname!r} is not fixed")
        if not failures:
            assignment = self.assignment()
            ring = (self.source.vs, self.source.trunc, self.source.field)
            for i, q in enumerate(self.target.ideal.generators):
                image = q.substitute(assignment, ring)
                if not self.source.ideal.member(image):
                    failures.append(
                        f"generator {q.to_string()!r} of the target ideal "
                        f"does not map into the source ideal")
        return ValidityReport(not failures, failures)

    def equal_mod(self, other: "GermMap", d: int) -> bool:
        """Componentwise equality modulo ``J_source + m^d``."""
        if self.source.vs != other.source.vs \
                or self.target.vs != other.target.vs:
            raise StructureError("maps between different rings")
        for v in self.target.vs.names:
            diff = self.components[v] - other.components[v]
            if not self.source.ideal.member_mod(diff, d):
                return False
        return True

    def truncate(self, new_trunc: int) -> "GermMap":
        return GermMap(self.source.truncate(new_trunc),
                       self.target.truncate(new_trunc),
                       {v: c.truncate(new_trunc)
                        for v, c in self.components.items()})

    def __eq__(self, other):
        return (isinstance(other, GermMap)
                and self.source.vs == other.source.vs
                and self.target.vs == other.target.vs
                and self.components == other.components)

    def __hash__(self):
        return hash((self.source.vs, self.target.vs,
                     tuple(sorted(self.components.items()))))

    def __repr__(self):
        comps = ", ".join(f"{v} -> {c.to_string()}"
                          for v, c in self.components.items())
        return f"GermMap({comps})"


def validate_map(f: GermMap) -> ValidityReport:
    return f.validate()


def compose_maps(g: GermMap, f: GermMap) -> GermMap:
    """The composite ``g . f : X -> Z`` of ``f : X -> Y`` and ``g : Y -> Z``."""
    if g.source != f.target:
        raise StructureError("middle rings differ")
    assignment = f.assignment()
    ring = (f.source.vs, f.source.trunc, f.source.field)
    comps = {v: c.substitute(assignment, ring)
             for v, c in g.components.items()}
    return GermMap(f.source, g.target, comps)


def maps_equal_mod(f: GermMap, g: GermMap, d: int) -> bool:
    return f.equal_mod(g, d)


def central_fibre(f: GermMap) -> GermMap:
    """Set ``t = 0``: the map of the central fibre over the t-free rings."""
    if not (f.source.vs.has_block(T_BLOCK) or f.target.vs.has_block(T_BLOCK)):
        return f
    src = f.source.drop_t()
    tgt = f.target.drop_t()
    has_src_t = f.source.vs.has_block(T_BLOCK)
    comps = {}
    for v in tgt.vs.names:
        c = f.components[v]
        if has_src_t:
            c = c.set_block_zero(T_BLOCK)
        comps[v] = c.cast(src.vs)
    return GermMap(src, tgt, comps)


@dataclass
class UnfoldingView:
    """A map with parameters together with its central fibre."""

    total: GermMap
    fibre: GermMap

    @classmethod
    def of(cls, total: GermMap) -> "UnfoldingView":
        return cls(total, central_fibre(total))
