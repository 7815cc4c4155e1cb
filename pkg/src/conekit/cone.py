"""Cone construction, support hyperplanes, triangulation.

Working convention: a cone lives in *restricted coordinates*, i.e. a
basis of the lattice E = Z^d ∩ span(generators).  The `lattice_basis`
rows map restricted vectors back to the ambient space (x_ambient =
x_restricted · lattice_basis).  Full-dimensional cones keep the identity
basis so that restricted and ambient coordinates coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import lcm

from . import linalg as la
from .errors import DimensionError, DomainError, NotPointedError, GradingNotPositiveError
from .linalg import IntMat, IntVec


@dataclass(frozen=True)
class ConeInput:
    """Raw problem data: generators and/or homogeneous constraints."""

    ambient_dim: int
    generators: IntMat | None = None
    inequalities: IntMat | None = None
    equations: IntMat | None = None
    grading: IntVec | None = None

    def __post_init__(self):
        d = self.ambient_dim
        if d < 0:
            raise DimensionError("ambient dimension must be nonnegative")
        if self.generators is None and self.inequalities is None:
            raise DimensionError("need generators or inequalities")
        for name in ("generators", "inequalities", "equations"):
            block = getattr(self, name)
            if block is not None:
                object.__setattr__(self, name, la.as_mat(block))
                if any(len(r) != d for r in getattr(self, name)):
                    raise DimensionError(f"{name} rows must have {d} entries")
        if self.grading is not None:
            object.__setattr__(self, "grading", la.as_vec(self.grading))
            if len(self.grading) != d:
                raise DimensionError(f"grading must have {d} entries")


@dataclass(frozen=True)
class Cone:
    """A pointed rational cone in restricted coordinates."""

    ambient_dim: int
    rank: int
    generators: IntMat      # primitive extreme rays, input order
    support_forms: IntMat   # irredundant primitive forms, sorted
    lattice_basis: IntMat   # rows form a basis of E = Z^d ∩ span
    grading: IntVec | None = None

    def to_ambient(self, v: IntVec) -> IntVec:
        if self.rank == 0:
            return (0,) * self.ambient_dim
        return la.vec_mat(v, self.lattice_basis)


@dataclass(frozen=True)
class SimplicialCone:
    """Linearly independent generators plus half-open decomposition data.

    facet_forms[i] is the (non-primitive) inner normal of the facet
    opposite gens[i], scaled so facet_forms[i]·gens[i] = det.  The i-th
    q-coordinate of a point x is (facet_forms[i]·x) / det.  `anchor` is
    the generic reference point of the enclosing triangulation; facets
    whose form is lexicographically negative at the (perturbed) anchor
    are excluded, making the half-open simplices of any nested
    triangulation disjoint.
    """

    gens: IntMat
    det: int
    facet_forms: IntMat
    excluded_facets: frozenset[int]
    anchor: IntVec
    height_normal: IntVec

    @property
    def dim(self) -> int:
        return len(self.gens)

    @property
    def gen_height(self) -> int:
        """Common value of the height normal on every generator."""
        return la.dot(self.height_normal, self.gens[0])

    def q_numerators(self, x: IntVec) -> IntVec:
        """det times the barycentric generator coordinates of x."""
        return tuple(la.dot(f, x) for f in self.facet_forms)

    def contains(self, x, strict_excluded: bool = True) -> bool:
        for i, f in enumerate(self.facet_forms):
            v = la.dot(f, x)
            if v < 0:
                return False
            if v == 0 and strict_excluded and i in self.excluded_facets:
                return False
        return True


def lex_sign(form: IntVec, anchor: IntVec) -> int:
    """Sign of form at anchor - sum(eps^j e_j) for infinitesimal eps."""
    v = la.dot(form, anchor)
    if v:
        return 1 if v > 0 else -1
    for e in form:
        if e:
            return -1 if e > 0 else 1
    return 0


def make_simplicial_cone(gens, anchor: IntVec | None = None) -> SimplicialCone:
    gens = la.as_mat(gens)
    adj, det = la.adjugate(gens)
    sg = 1 if det > 0 else -1
    r = len(gens)
    forms = tuple(tuple(sg * adj[k][i] for k in range(r)) for i in range(r))
    if anchor is None:
        anchor = tuple(sum(g[j] for g in gens) for j in range(r))
    excluded = frozenset(i for i in range(r) if lex_sign(forms[i], anchor) < 0)
    # the sum of the facet forms takes the value det on every generator,
    # so its primitive part is the normal of their affine hull
    normal = la.primitive(tuple(sum(f[j] for f in forms) for j in range(r)))
    return SimplicialCone(gens=gens, det=abs(det), facet_forms=forms,
                          excluded_facets=excluded, anchor=la.as_vec(anchor),
                          height_normal=normal)


def dual_description(vectors, want_triangulation: bool = False):
    """Extreme rays of {y : y·v >= 0 for all v}, by incremental insertion.

    The vectors must span the space (which makes the dual cone pointed).
    Inserting one vector at a time performs the Fourier-Motzkin step of
    the double-description method; redundancy of candidate pairs is
    decided by the combinatorial zero-set inclusion criterion.

    With `want_triangulation` the same incremental pass also records the
    placing triangulation of cone(vectors) as index tuples.
    """
    vectors = la.as_mat(vectors)
    n = len(vectors)
    s = len(vectors[0]) if n else 0
    init = la.independent_rows(vectors, s)
    if len(init) < s:
        raise DimensionError("vectors do not span the working space")
    basis = tuple(vectors[i] for i in init)
    adj, det = la.adjugate(basis)
    sg = 1 if det > 0 else -1
    rays: list[IntVec] = []
    masks: list[int] = []
    for j in range(s):
        col = la.primitive(tuple(sg * adj[k][j] for k in range(s)))
        m = 0
        for pos, gi in enumerate(init):
            if pos != j:
                m |= 1 << gi
        rays.append(col)
        masks.append(m)

    simplices: list[tuple[int, ...]] = [tuple(sorted(init))]
    seen = {simplices[0]}
    init_set = set(init)

    for i in range(n):
        if i in init_set:
            continue
        v = vectors[i]
        vals = [la.dot(r, v) for r in rays]
        if all(x >= 0 for x in vals):
            for k, x in enumerate(vals):
                if x == 0:
                    masks[k] |= 1 << i
            continue
        pos = [k for k, x in enumerate(vals) if x > 0]
        neg = [k for k, x in enumerate(vals) if x < 0]

        if want_triangulation:
            bit_cache = [(idx, sum(1 << g for g in idx)) for idx in simplices]
            for q in neg:
                zq = masks[q]
                for idx, bits in bit_cache:
                    if bin(bits & zq).count("1") == s - 1:
                        new_idx = tuple(sorted(
                            [g for g in idx if zq >> g & 1] + [i]))
                        if new_idx not in seen:
                            seen.add(new_idx)
                            simplices.append(new_idx)

        new_rays = []
        new_masks = []
        for p in pos:
            zp = masks[p]
            for q in neg:
                zc = zp & masks[q]
                ok = True
                for t in range(len(rays)):
                    if t != p and t != q and zc & ~masks[t] == 0:
                        ok = False
                        break
                if not ok:
                    continue
                combo = tuple(vals[p] * rq - vals[q] * rp
                              for rp, rq in zip(rays[p], rays[q]))
                new_rays.append(la.primitive(combo))
                new_masks.append(zc | 1 << i)
        keep = [k for k, x in enumerate(vals) if x >= 0]
        rays = [rays[k] for k in keep] + new_rays
        masks = [masks[k] | (1 << i if vals[k] == 0 else 0) for k in keep] + new_masks

    return tuple(rays), tuple(simplices) if want_triangulation else ()


def support_hyperplanes(generators) -> IntMat:
    """Irredundant primitive support forms of a spanning generator set."""
    rays, _ = dual_description(generators)
    return tuple(sorted(rays))


def is_pointed(obj) -> bool:
    """Whether a cone (or a raw generator matrix) contains no line."""
    if isinstance(obj, Cone):
        if obj.rank == 0:
            return True
        return la.rank(obj.support_forms, obj.rank) == obj.rank
    gens = la.as_mat(obj)
    gens = tuple(g for g in gens if any(g))
    if not gens:
        return True
    d = len(gens[0])
    r = la.rank(gens, d)
    if r == d:
        restricted = gens
    else:
        basis = la.saturation_basis(gens, d)
        restricted = tuple(_restrict(basis, g) for g in gens)
    forms, _ = dual_description(restricted)
    return la.rank(forms, r) == r


def _restrict(basis: IntMat, v: IntVec) -> IntVec:
    """Coordinates of v in the lattice basis (v must lie in its span)."""
    gram = la.matmul(basis, la.transpose(basis))
    rhs = tuple(la.dot(b, v) for b in basis)
    sol = la.solve_rational(gram, rhs)
    out = []
    for x in sol:
        if x.denominator != 1:
            raise DomainError("vector is not in the lattice spanned by the basis")
        out.append(int(x))
    return tuple(out)


def ambient_support_forms(cone: Cone) -> IntMat:
    """Support forms lifted back to ambient coordinates (canonical lift)."""
    if cone.rank == cone.ambient_dim:
        return cone.support_forms
    lifted = []
    b = cone.lattice_basis
    gram = la.matmul(b, la.transpose(b))
    for form in cone.support_forms:
        y = la.solve_rational(gram, form)
        denom = 1
        for x in y:
            denom = lcm(denom, x.denominator)
        ints = tuple(int(x * denom) for x in y)
        lifted.append(la.primitive(la.vec_mat(ints, b)))
    return tuple(sorted(lifted))


def _rays_from_constraints(ci: ConeInput) -> IntMat:
    """Extreme rays (ambient, primitive) of the constraint-defined cone."""
    d = ci.ambient_dim
    ineqs = list(ci.inequalities or ())
    eqs = list(ci.equations or ())
    if ci.generators is not None:
        # intersecting with a generator cone: turn it into constraints
        gen_cone = build_cone(ConeInput(ambient_dim=d, generators=ci.generators))
        ineqs.extend(ambient_support_forms(gen_cone))
        if gen_cone.rank < d:
            ambient_gens = tuple(gen_cone.to_ambient(g) for g in gen_cone.generators)
            eqs.extend(la.integer_kernel(ambient_gens, d) if ambient_gens
                       else la.identity(d))
    if eqs:
        kbasis = la.integer_kernel(eqs, d)
    else:
        kbasis = la.identity(d)
    s = len(kbasis)
    if s == 0:
        return ()
    ineq_r = tuple(tuple(la.dot(k, lam) for k in kbasis) for lam in ineqs)
    ineq_r = tuple(row for row in ineq_r if any(row))
    if la.rank(ineq_r, s) < s:
        raise NotPointedError("constraints admit a nonzero linear subspace")
    rays_r, _ = dual_description(ineq_r)
    return tuple(la.vec_mat(r, kbasis) for r in rays_r)


def build_cone(ci: ConeInput) -> Cone:
    """Both descriptions of the cone, in restricted coordinates.

    Raises NotPointedError when the input contains a line; an input with
    no nonzero generators yields the trivial (rank zero) cone.
    """
    d = ci.ambient_dim
    if ci.inequalities is not None or ci.equations is not None:
        gens_amb = _rays_from_constraints(ci)
    else:
        gens_amb = ci.generators
    gens_amb = tuple(g for g in gens_amb if any(g))
    if not gens_amb:
        cone = Cone(ambient_dim=d, rank=0, generators=(), support_forms=(),
                    lattice_basis=(), grading=None)
        if ci.grading is not None:
            cone = replace(cone, grading=())
        return cone

    r = la.rank(gens_amb, d)
    if r == d:
        basis = la.identity(d)
        gens_r = gens_amb
    else:
        basis = la.saturation_basis(gens_amb, d)
        gens_r = tuple(_restrict(basis, g) for g in gens_amb)

    forms, _ = dual_description(gens_r)
    if la.rank(forms, r) < r:
        raise NotPointedError("cone contains a nonzero linear subspace")

    extreme, _ = dual_description(forms)
    extreme_set = set(extreme)
    seen: set[IntVec] = set()
    generators = []
    for g in gens_r:
        p = la.primitive(g)
        if p in extreme_set and p not in seen:
            seen.add(p)
            generators.append(p)

    cone = Cone(ambient_dim=d, rank=r, generators=tuple(generators),
                support_forms=tuple(sorted(forms)), lattice_basis=basis,
                grading=None)
    if ci.grading is not None:
        cone = replace(cone, grading=normalize_grading(cone, ci.grading))
    return cone


def normalize_grading(cone: Cone, deg: IntVec) -> IntVec:
    """Restrict an ambient grading to E and rescale so degree 1 occurs.

    Since the cone is full-dimensional inside E, the group generated by
    its lattice points is all of E, so the rescaling divisor is the gcd
    of the restricted coefficients.
    """
    deg = la.as_vec(deg)
    if len(deg) != cone.ambient_dim:
        raise DimensionError("grading has wrong arity")
    if cone.rank == 0:
        return ()
    deg_r = tuple(la.dot(b, deg) for b in cone.lattice_basis)
    for g in cone.generators:
        if la.dot(g, deg_r) <= 0:
            raise GradingNotPositiveError(
                f"generator {cone.to_ambient(g)} has nonpositive degree")
    g = la.content(deg_r)
    if g > 1:
        deg_r = tuple(x // g for x in deg_r)
    return deg_r


def triangulate(cone: Cone) -> tuple[SimplicialCone, ...]:
    """Placing triangulation of the cone along its generator order.

    Each simplex carries excluded-facet data so that the half-open
    simplices cover the cone disjointly.
    """
    if cone.rank == 0:
        return ()
    _, tri = dual_description(cone.generators, want_triangulation=True)
    anchor = tuple(sum(g[j] for g in cone.generators) for j in range(cone.rank))
    return tuple(
        make_simplicial_cone(tuple(cone.generators[i] for i in idx), anchor)
        for idx in tri)
