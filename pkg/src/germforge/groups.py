"""Equivalence-group elements and their actions on map-germs.

Five kinds of witnesses act on maps ``f : X -> Y``:

* ``R``  - an automorphism of the source, acting by ``f -> f . phi^-1``;
* ``L``  - an automorphism of the target, acting by ``f -> phi . f``;
* ``LR`` - a pair of both;
* ``C``  - a fibre-preserving automorphism ``(x, y) -> (x, C(x, y))`` of
  ``X x Y`` fixing ``X x {o}``, acting by ``f -> C(x, f(x))``;
* ``K``  - the semi-direct combination ``f -> C(x, f . phi^-1)``.

For singular targets the contact data ``C`` must satisfy the membership
equations ``q(x, C(x, y)) = 0`` in ``R_{XxY}`` for every generator ``q`` of
the target ideal; validity checks enforce this at jet scale.  Linearized
contact witnesses ``(U, phi)`` with ``U(x) . f(x) = C(x, f(x))`` are
produced by a deterministic cofactor expansion.

Automorphism inversion is exact at jet scale and performed order by order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from germforge.errors import (DomainError, InternalCheckError, StructureError,
                              UnsupportedFeatureError)
from germforge.germs import T_BLOCK, GermMap, LocalRing, ValidityReport
from germforge.ideals import IdealJet
from germforge.jets import Jet, VariableSet


def invert_matrix(field, mat):
    """Inverse of a small dense matrix over the field, or None."""
    n = len(mat)
    aug = [[field.normalize(mat[i][j]) for j in range(n)]
           + [field.one if j == i else field.zero for j in range(n)]
           for i in range(n)]
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if not field.is_zero(aug[r][col]):
                piv = r
                break
        if piv is None:
            return None
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = field.inv(aug[row][col])
        aug[row] = [field.normalize(v * inv) for v in aug[row]]
        for r in range(n):
            if r != row and not field.is_zero(aug[r][col]):
                c = aug[r][col]
                aug[r] = [field.normalize(a - c * b)
                          for a, b in zip(aug[r], aug[row])]
        row += 1
    return [r[n:] for r in aug]


class Automorphism:
    """A ring automorphism given by the images of the variables.

    Frozen ``t``-variables are fixed; the linear part on the remaining
    variables must be invertible, and the ideal must be preserved modulo
    ``m^(D+1)`` (checked by :meth:`validate`).
    """

    __slots__ = ("ring", "images", "_inverse")

    def __init__(self, ring: LocalRing, images: Dict[str, Jet],
                 _inverse: Optional["Automorphism"] = None):
        self.ring = ring
        imgs = {}
        for v in ring.vs.names:
            if v not in images:
                raise StructureError(f"missing image for variable {v!r}")
            j = images[v]
            if j.vs != ring.vs or j.trunc != ring.trunc:
                raise StructureError(f"image of {v!r} over wrong ring")
            imgs[v] = j
        self.images = imgs
        self._inverse = _inverse

    @classmethod
    def identity(cls, ring: LocalRing) -> "Automorphism":
        auto = cls(ring, {v: ring.var(v) for v in ring.vs.names})
        auto._inverse = auto
        return auto

    def is_identity(self) -> bool:
        return all(self.images[v] == self.ring.var(v)
                   for v in self.ring.vs.names)

    def linear_matrix(self, names: Optional[Sequence[str]] = None):
        """Degree-1 coefficient matrix, rows indexed by variable images."""
        if names is None:
            names = self.ring.vs.names
        vs = self.ring.vs
        unit = {v: tuple(1 if i == vs.index[v] else 0
                         for i in range(len(vs))) for v in vs.names}
        return [[self.images[a].coefficient(unit[b]) for b in names]
                for a in names]

    def validate(self) -> ValidityReport:
        ring = self.ring
        f = ring.field
        failures = []
        for v, j in self.images.items():
            if not f.is_zero(j.constant_term()):
                failures.append(f"image of {v!r} has nonzero constant term")
        for tv in ring.t_vars:
            if self.images[tv] != ring.var(tv):
                failures.append(f"parameter {tv!r} is not fixed")
        geo = ring.geometric_vars
        if invert_matrix(f, Automorphism.linear_matrix(self, geo)) is None:
            failures.append("linear part is not invertible")
        if not failures:
            for q in ring.ideal.generators:
                if not ring.ideal.member(q.substitute(self.images)):
                    failures.append(
                        f"ideal generator {q.to_string()!r} is not preserved")
        return ValidityReport(not failures, failures)

    def then(self, other: "Automorphism") -> "Automorphism":
        """Substitution composite: self's images evaluated through other."""
        if other.ring.vs != self.ring.vs:
            raise StructureError("composing automorphisms of different rings")
        images = {v: j.substitute(other.images)
                  for v, j in self.images.items()}
        return Automorphism(self.ring, images)

    def inverse(self) -> "Automorphism":
        """The exact jet-scale inverse, computed order by order."""
        if self._inverse is not None:
            return self._inverse
        ring = self.ring
        f = ring.field
        names = ring.vs.names
        M = self.linear_matrix(names)
        Minv = invert_matrix(f, M)
        if Minv is None:
            raise DomainError("linear part is not invertible")
        varjets = [ring.var(v) for v in names]
        psi = {}
        for i, v in enumerate(names):
            acc = ring.zero()
            for j2, w in enumerate(names):
                c = Minv[i][j2]
                if not f.is_zero(c):
                    acc = acc + varjets[j2].scale(c)
            psi[v] = acc
        for _ in range(ring.trunc):
            err = {v: self.images[v].substitute(psi) - varjets[i]
                   for i, v in enumerate(names)}
            if all(e.is_zero() for e in err.values()):
                break
            for i, v in enumerate(names):
                corr = ring.zero()
                for j2, w in enumerate(names):
                    c = Minv[i][j2]
                    if not f.is_zero(c) and not err[w].is_zero():
                        corr = corr + err[w].scale(c)
                psi[v] = psi[v] - corr
        inv = Automorphism(ring, psi, _inverse=self)
        for i, v in enumerate(names):
            if self.images[v].substitute(psi) != varjets[i] \
                    or psi[v].substitute(self.images) != varjets[i]:
                raise InternalCheckError("jet inversion failed to verify")
        self._inverse = inv
        return inv

    def apply_jet(self, g: Jet) -> Jet:
        return g.substitute(self.images)

    def __eq__(self, other):
        return (isinstance(other, Automorphism)
                and self.ring.vs == other.ring.vs
                and self.images == other.images)

    def __hash__(self):
        return hash((self.ring.vs, tuple(sorted(self.images.items()))))

    def __repr__(self):
        body = ", ".join(f"{v} -> {j.to_string()}"
                         for v, j in self.images.items())
        return f"Automorphism({body})"


def invert_automorphism(phi: Automorphism) -> Automorphism:
    return phi.inverse()


# ---------------------------------------------------------------------------
# group elements


class GroupElement:
    tag: str = "?"

    def validate(self) -> ValidityReport:
        raise NotImplementedError


class RElem(GroupElement):
    """Source reparametrization; acts by ``f -> f . phi^-1``."""

    tag = "R"
    __slots__ = ("phi",)

    def __init__(self, phi: Automorphism):
        self.phi = phi

    @classmethod
    def from_acting_substitution(cls, sigma: Automorphism) -> "RElem":
        """Build the element whose action composes ``sigma`` into the map."""
        return cls(sigma.inverse())

    @property
    def acting_substitution(self) -> Automorphism:
        return self.phi.inverse()

    def validate(self):
        return self.phi.validate()

    def __repr__(self):
        return f"RElem({self.phi!r})"


class LElem(GroupElement):
    """Target reparametrization; acts by ``f -> phi . f``."""

    tag = "L"
    __slots__ = ("phi",)

    def __init__(self, phi: Automorphism):
        self.phi = phi

    def validate(self):
        return self.phi.validate()

    def __repr__(self):
        return f"LElem({self.phi!r})"


class LRElem(GroupElement):
    tag = "LR"
    __slots__ = ("phi_x", "phi_y")

    def __init__(self, phi_x: Automorphism, phi_y: Automorphism):
        self.phi_x = phi_x
        self.phi_y = phi_y

    def validate(self):
        rx = self.phi_x.validate()
        ry = self.phi_y.validate()
        return ValidityReport(rx.ok and ry.ok, rx.failures + ry.failures)

    def __repr__(self):
        return f"LRElem({self.phi_x!r}, {self.phi_y!r})"


class ContactElem(GroupElement):
    """Fibre-preserving automorphism ``(x, y) -> (x, C(x, y))``.

    ``images`` maps each target variable to a jet over the product ring;
    every term must have positive ``y``-degree (so ``C(x, 0) = 0``) and
    ``C(0, y)`` must restrict to an automorphism of the target.
    """

    tag = "C"
    __slots__ = ("source", "target", "xy_ring", "images")

    def __init__(self, source: LocalRing, target: LocalRing,
                 images: Dict[str, Jet],
                 xy_ring: Optional[LocalRing] = None):
        if xy_ring is None:
            xy_ring = source.product(target)
        self.source = source
        self.target = target
        self.xy_ring = xy_ring
        imgs = {}
        for w in target.vs.names:
            if w not in images:
                raise StructureError(f"missing contact image for {w!r}")
            j = images[w]
            if j.vs != xy_ring.vs or j.trunc != xy_ring.trunc:
                raise StructureError(
                    f"contact image of {w!r} not over the product ring")
            imgs[w] = j
        self.images = imgs

    @classmethod
    def identity(cls, source: LocalRing, target: LocalRing,
                 xy_ring: Optional[LocalRing] = None) -> "ContactElem":
        if xy_ring is None:
            xy_ring = source.product(target)
        return cls(source, target,
                   {w: xy_ring.var(w) for w in target.vs.names}, xy_ring)

    def _y_positions(self):
        vs = self.xy_ring.vs
        return [vs.index[w] for w in self.target.geometric_vars]

    def validate(self) -> ValidityReport:
        failures = []
        ypos = self._y_positions()
        tpos = [self.xy_ring.vs.index[tv] for tv in self.target.t_vars]
        for w, j in self.images.items():
            if w in self.target.t_vars:
                if j != self.xy_ring.var(w):
                    failures.append(f"parameter {w!r} is not fixed")
                continue
            for m in j.terms:
                if all(m[i] == 0 for i in ypos):
                    failures.append(
                        f"image of {w!r} has a term without y-part "
                        f"(C(x,0) != 0)")
                    break
        # C(0, y) must be an automorphism of the target ring
        xvars = list(self.source.geometric_vars)
        try:
            zeroed = {w: _kill_vars(j, xvars).cast(self.target.vs)
                      for w, j in self.images.items()}
            rep = Automorphism(self.target, zeroed).validate()
            if not rep.ok:
                failures.extend("C(0,y): " + msg for msg in rep.failures)
        except StructureError as exc:
            failures.append(f"C(0,y) is not a map of the target ring: {exc}")
        if not failures:
            assignment = {w: self.images[w]
                          for w in self.target.vs.names}
            ring = (self.xy_ring.vs, self.xy_ring.trunc, self.xy_ring.field)
            for q in self.target.ideal.generators:
                image = q.cast(self.xy_ring.vs).substitute(assignment, ring)
                if not self.xy_ring.ideal.member(image):
                    failures.append(
                        f"membership q(x, C) = 0 fails for target generator "
                        f"{q.to_string()!r}")
        return ValidityReport(not failures, failures)

    def phi_y(self) -> Automorphism:
        """The target automorphism ``C(0, y)``."""
        xvars = list(self.source.geometric_vars)
        images = {w: _kill_vars(j, xvars).cast(self.target.vs)
                  for w, j in self.images.items()}
        return Automorphism(self.target, images)

    def __repr__(self):
        body = ", ".join(f"{w} -> {j.to_string()}"
                         for w, j in self.images.items())
        return f"ContactElem({body})"


class KElem(GroupElement):
    tag = "K"
    __slots__ = ("phi_x", "contact")

    def __init__(self, phi_x: Automorphism, contact: ContactElem):
        self.phi_x = phi_x
        self.contact = contact

    def validate(self):
        rx = self.phi_x.validate()
        rc = self.contact.validate()
        return ValidityReport(rx.ok and rc.ok, rx.failures + rc.failures)

    def __repr__(self):
        return f"KElem({self.phi_x!r}, {self.contact!r})"


def _kill_vars(j: Jet, names: Sequence[str]) -> Jet:
    """Substitute zero for the named variables (staying in the same ring)."""
    pos = [j.vs.index[v] for v in names]
    terms = {m: c for m, c in j.terms.items()
             if all(m[i] == 0 for i in pos)}
    return Jet(j.vs, j.trunc, j.field, terms, _normalized=True)


@dataclass
class LinearContact:
    """A linearized contact witness ``(U, phi)``: ``U . (f . phi^-1)``.

    For singular targets the certifying contact element is kept, since
    membership of ``(U, phi)`` in the linearized groupoid is defined by the
    existence of such a ``C``.
    """

    U: Tuple[Tuple[Jet, ...], ...]
    phi_x: Automorphism
    certificate: Optional[ContactElem] = None

    def constant_matrix(self):
        return [[u.constant_term() for u in row] for row in self.U]

    def validate(self) -> ValidityReport:
        failures = []
        field = self.phi_x.ring.field
        if invert_matrix(field, self.constant_matrix()) is None:
            failures.append("U(0) is not invertible")
        rep = self.phi_x.validate()
        failures.extend(rep.failures)
        return ValidityReport(not failures, failures)

    def act(self, f: GermMap) -> Tuple[Jet, ...]:
        """The component tuple of ``U . (f . phi^-1)``."""
        finv = apply(RElem(self.phi_x), f, check=False)
        comps = finv.component_tuple()
        out = []
        for row in self.U:
            acc = f.source.zero()
            for u, c in zip(row, comps):
                acc = acc + u * c
            out.append(acc)
        return tuple(out)


# ---------------------------------------------------------------------------
# the actions


def apply(g: GroupElement, f: GermMap, check: bool = True) -> GermMap:
    """Act on a valid map; the result is re-validated unless ``check`` is
    switched off for trusted inner loops."""
    if isinstance(g, RElem):
        sigma = g.phi.inverse()
        result = GermMap(f.source, f.target,
                         {v: c.substitute(sigma.images)
                          for v, c in f.components.items()})
    elif isinstance(g, LElem):
        if g.phi.ring.vs != f.target.vs:
            raise StructureError("L-element over a different target ring")
        assignment = f.assignment()
        ring = (f.source.vs, f.source.trunc, f.source.field)
        result = GermMap(f.source, f.target,
                         {w: g.phi.images[w].substitute(assignment, ring)
                          for w in f.target.vs.names})
    elif isinstance(g, LRElem):
        result = apply(LElem(g.phi_y), apply(RElem(g.phi_x), f, check=False),
                       check=False)
    elif isinstance(g, ContactElem):
        result = _apply_contact(g, f)
    elif isinstance(g, KElem):
        moved = apply(RElem(g.phi_x), f, check=False)
        result = _apply_contact(g.contact, moved)
    else:
        raise StructureError(f"unknown group element {g!r}")
    if check:
        rep = result.validate()
        if not rep.ok:
            raise InternalCheckError(
                "group action produced an invalid map: "
                + "; ".join(rep.failures))
    return result


def _apply_contact(c: ContactElem, f: GermMap) -> GermMap:
    if c.target.vs != f.target.vs or c.source.vs != f.source.vs:
        raise StructureError("contact element over different rings")
    assignment = {w: f.components[w] for w in f.target.vs.names}
    ring = (f.source.vs, f.source.trunc, f.source.field)
    comps = {w: c.images[w].substitute(assignment, ring)
             for w in f.target.vs.names}
    return GermMap(f.source, f.target, comps)


def identity_element(tag: str, source: LocalRing,
                     target: LocalRing) -> GroupElement:
    if tag == "R":
        return RElem(Automorphism.identity(source))
    if tag == "L":
        return LElem(Automorphism.identity(target))
    if tag == "LR":
        return LRElem(Automorphism.identity(source),
                      Automorphism.identity(target))
    if tag == "C":
        return ContactElem.identity(source, target)
    if tag == "K":
        return KElem(Automorphism.identity(source),
                     ContactElem.identity(source, target))
    raise StructureError(f"unknown group tag {tag!r}")


def compose_group(g: GroupElement, h: GroupElement) -> GroupElement:
    """The element acting as ``g`` after ``h``; same tag required."""
    if g.tag != h.tag:
        raise StructureError(f"cannot compose tags {g.tag} and {h.tag}")
    if isinstance(g, RElem):
        return RElem(g.phi.then(h.phi))
    if isinstance(g, LElem):
        return LElem(g.phi.then(h.phi))
    if isinstance(g, LRElem):
        return LRElem(g.phi_x.then(h.phi_x), g.phi_y.then(h.phi_y))
    if isinstance(g, ContactElem):
        assignment = {w: h.images[w] for w in g.target.vs.names}
        ring = (g.xy_ring.vs, g.xy_ring.trunc, g.xy_ring.field)
        images = {w: g.images[w].substitute(assignment, ring)
                  for w in g.target.vs.names}
        return ContactElem(g.source, g.target, images, g.xy_ring)
    if isinstance(g, KElem):
        phi = g.phi_x.then(h.phi_x)
        phi_g_inv = g.phi_x.inverse()
        xy = g.contact.xy_ring
        xsub = {v: phi_g_inv.images[v].cast(xy.vs)
                for v in g.phi_x.ring.geometric_vars}
        ring = (xy.vs, xy.trunc, xy.field)
        inner = {w: h.contact.images[w].substitute(xsub, ring)
                 for w in g.contact.target.vs.names}
        images = {w: g.contact.images[w].substitute(inner, ring)
                  for w in g.contact.target.vs.names}
        return KElem(phi, ContactElem(g.contact.source, g.contact.target,
                                      images, xy))
    raise StructureError(f"unknown group element {g!r}")


def invert_group(g: GroupElement) -> GroupElement:
    if isinstance(g, RElem):
        return RElem(g.phi.inverse())
    if isinstance(g, LElem):
        return LElem(g.phi.inverse())
    if isinstance(g, LRElem):
        return LRElem(g.phi_x.inverse(), g.phi_y.inverse())
    if isinstance(g, ContactElem):
        return _invert_contact(g)
    if isinstance(g, KElem):
        cinv = _invert_contact(g.contact)
        xy = g.contact.xy_ring
        xsub = {v: g.phi_x.images[v].cast(xy.vs)
                for v in g.phi_x.ring.geometric_vars}
        ring = (xy.vs, xy.trunc, xy.field)
        images = {w: cinv.images[w].substitute(xsub, ring)
                  for w in g.contact.target.vs.names}
        return KElem(g.phi_x.inverse(),
                     ContactElem(g.contact.source, g.contact.target,
                                 images, xy))
    raise StructureError(f"unknown group element {g!r}")


def _invert_contact(c: ContactElem) -> ContactElem:
    xy = c.xy_ring
    images = {v: xy.var(v) for v in xy.vs.names}
    for w in c.target.vs.names:
        images[w] = c.images[w]
    big = Automorphism(xy, images)
    inv = big.inverse()
    ypos = c._y_positions()
    out = {}
    for w in c.target.vs.names:
        j = inv.images[w]
        for m in j.terms:
            if all(m[i] == 0 for i in ypos) and any(m):
                raise InternalCheckError(
                    "contact inversion left the fibre-preserving subgroup")
        out[w] = j
    return ContactElem(c.source, c.target, out, xy)


# ---------------------------------------------------------------------------
# linearization of the contact action


def linearize_contact(c: ContactElem, phi: Automorphism,
                      f: GermMap) -> LinearContact:
    """Expand ``C(x, y) = A(x, y) . y`` and substitute ``y = f . phi^-1``.

    The cofactor expansion peels each term by its smallest-index ``y``
    variable, which makes the output deterministic.
    """
    xy = c.xy_ring
    ynames = list(c.target.geometric_vars)
    yidx = {w: xy.vs.index[w] for w in ynames}
    m = len(ynames)
    A: List[List[Dict]] = [[{} for _ in range(m)] for _ in range(m)]
    for row, w in enumerate(ynames):
        for mono, coeff in c.images[w].terms.items():
            target_col = None
            for col, u in enumerate(ynames):
                if mono[yidx[u]] > 0:
                    target_col = col
                    break
            if target_col is None:
                raise DomainError("contact image with y-free term")
            i = yidx[ynames[target_col]]
            peeled = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
            A[row][target_col][peeled] = coeff
    moved = apply(RElem(phi), f, check=False)
    assignment = {w: moved.components[w] for w in f.target.vs.names}
    ring = (f.source.vs, f.source.trunc, f.source.field)
    U = tuple(
        tuple(Jet(xy.vs, xy.trunc, xy.field, entry, _normalized=True)
              .substitute(assignment, ring) for entry in arow)
        for arow in A)
    return LinearContact(U=U, phi_x=phi, certificate=c)


# ---------------------------------------------------------------------------
# filtered subgroups


@dataclass
class FilteredSubgroupSpec:
    """Membership data for the level-``j`` filtered subgroup.

    The filtration ideal lives in the source ring; for L/C tags the target
    must be smooth (the singular-target case has no effective test)."""

    tag: str
    level: int
    ideal: IdealJet


def _module_basis(ideal_power: IdealJet, trunc: int) -> List[Jet]:
    ech = ideal_power.basis(trunc)
    vs, field = ideal_power.vs, ideal_power.field
    return [Jet(vs, trunc, field, dict(row), _normalized=True)
            for row in ech.rows.values()]


def filtered_member(g: GroupElement, spec: FilteredSubgroupSpec,
                    source: LocalRing, target: Optional[LocalRing] = None
                    ) -> bool:
    """Jet-level membership test for the filtered subgroup of level ``j``."""
    j = spec.level
    if spec.tag == "R":
        if not isinstance(g, RElem):
            raise StructureError("R-tag spec needs an R element")
        return _filtered_r(g.phi, spec.ideal, j, source)
    if spec.tag == "L":
        if not isinstance(g, LElem):
            raise StructureError("L-tag spec needs an L element")
        return _filtered_l(g.phi, spec.ideal, j, source, target)
    if spec.tag == "C":
        if not isinstance(g, ContactElem):
            raise StructureError("C-tag spec needs a C element")
        return _filtered_c(g, spec.ideal, j, source, target)
    if spec.tag == "LR":
        if not isinstance(g, LRElem):
            raise StructureError("LR-tag spec needs an LR element")
        return (_filtered_r(g.phi_x, spec.ideal, j, source)
                and _filtered_l(g.phi_y, spec.ideal, j, source, target))
    if spec.tag == "K":
        if not isinstance(g, KElem):
            raise StructureError("K-tag spec needs a K element")
        return (_filtered_r(g.phi_x, spec.ideal, j, source)
                and _filtered_c(g.contact, spec.ideal, j, source, target))
    raise StructureError(f"unknown filtered tag {spec.tag!r}")


def _filtered_r(phi: Automorphism, ideal: IdealJet, j: int,
                source: LocalRing) -> bool:
    """``q_i(phi(x)) - q_i \\in I^(j+1)`` for every generator of ``I``."""
    membership = ideal.power(j + 1).plus(source.ideal)
    for q in ideal.generators:
        if not membership.member(q.substitute(phi.images) - q):
            return False
    return True


def _smooth_target_or_raise(target: Optional[LocalRing], tag: str):
    if target is None or not target.is_smooth():
        raise UnsupportedFeatureError(
            f"filtered membership for the {tag} tag over a singular target "
            f"has no effective test")
    return target


def _filtered_l(phi_y: Automorphism, ideal: IdealJet, j: int,
                source: LocalRing, target: Optional[LocalRing]) -> bool:
    target = _smooth_target_or_raise(target, "L")
    return _filtered_module_action(
        lambda v: GermMap(source, target,
                          {w: phi_y.images[w].substitute(
                              v.assignment(),
                              (source.vs, source.trunc, source.field))
                           for w in target.vs.names}),
        ideal, j, source, target)


def _filtered_c(c: ContactElem, ideal: IdealJet, j: int,
                source: LocalRing, target: Optional[LocalRing]) -> bool:
    target = _smooth_target_or_raise(target, "C")
    return _filtered_module_action(lambda v: _apply_contact(c, v),
                                   ideal, j, source, target)


def _filtered_module_action(act, ideal: IdealJet, j: int,
                            source: LocalRing, target: LocalRing) -> bool:
    """Check ``g v - v`` lands in ``I^(d+j)`` for module basis vectors of
    every slice ``I^d`` visible at the truncation scale."""
    D = source.trunc
    zero = source.zero()
    names = target.vs.names
    for d in range(1, D + 1):
        if d + j > D:
            break
        power_d = ideal.power(d)
        shifted = ideal.power(d + j).plus(source.ideal)
        for b in _module_basis(power_d, D):
            if b.is_zero():
                continue
            for slot in range(len(names)):
                comps = {w: (b if i == slot else zero)
                         for i, w in enumerate(names)}
                v = GermMap(source, target, comps)
                moved = act(v)
                ok = all(shifted.member(moved.components[w]
                                        - v.components[w])
                         for w in names)
                if not ok:
                    return False
    return True
