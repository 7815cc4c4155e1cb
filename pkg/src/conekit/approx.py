"""Subdivision candidates from a lattice-cube approximation.

Instead of solving an integer program, the simplex is enclosed in an
overcone spanned by small lattice vectors: around every vertex of the
degree-`level` cross-section we take the vertices of the minimal face of
the staircase (braid-arrangement) triangulation of its surrounding unit
cube.  The overcone is cheap to evaluate; its fundamental-domain points
falling inside the original simplex and strictly below generator height
are reduced and returned as subdivision candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from . import linalg as la
from .collect import reduce_to_hilbert_basis
from .cone import SimplicialCone, dual_description, make_simplicial_cone
from .errors import DomainError, InternalConsistencyError
from .linalg import IntVec
from .simplex import hb_candidates


@dataclass(frozen=True)
class CrossSection:
    """Rational vertices of the simplex sliced at a given height level."""

    vertices: tuple[tuple[Fraction, ...], ...]
    height_form: IntVec
    level: int


@dataclass(frozen=True)
class ApproxCone:
    """Overcone generated by cube-face vertices; contains the simplex."""

    generators: tuple[IntVec, ...]


def cross_section(s: SimplicialCone, level: int = 1) -> CrossSection:
    if level < 1:
        raise DomainError("approximation level must be positive")
    h = s.gen_height
    verts = tuple(tuple(Fraction(level * x, h) for x in g) for g in s.gens)
    return CrossSection(vertices=verts, height_form=s.height_normal, level=level)


def minimal_cube_face_vertices(v) -> tuple[IntVec, ...]:
    """Vertices of the minimal staircase-triangulation face containing v.

    The unit cube at floor(v) is triangulated by the hyperplanes
    {x_i = x_j}; sorting the fractional parts descending gives the
    staircase chain w_0 = floor(v), w_k = w_{k-1} + e_(k-th largest).
    Vertices whose barycentric weight vanishes (ties, zero fractional
    parts) are dropped, so a lattice point returns just itself.
    """
    v = tuple(Fraction(x) for x in v)
    d = len(v)
    base = tuple(floor(x) for x in v)
    frac = [x - b for x, b in zip(v, base)]
    order = sorted(range(d), key=lambda i: (-frac[i], i))
    lambdas = [1 - (frac[order[0]] if d else 0)]
    for k in range(1, d):
        lambdas.append(frac[order[k - 1]] - frac[order[k]])
    if d:
        lambdas.append(frac[order[-1]])
    out = []
    w = list(base)
    if lambdas[0] > 0:
        out.append(tuple(w))
    for k in range(1, d + 1):
        w[order[k - 1]] += 1
        if lambdas[k] > 0:
            out.append(tuple(w))
    return tuple(out)


def approximate_cone(s: SimplicialCone, level: int = 1) -> ApproxCone:
    """Overcone from cube-face vertices of all cross-section vertices.

    Containment of the simplex is guaranteed (each vertex is a convex
    combination of its cube-face vertices) and verified exactly.
    """
    cs = cross_section(s, level)
    gens: list[IntVec] = []
    seen = set()
    for v in cs.vertices:
        for w in minimal_cube_face_vertices(v):
            if any(w) and w not in seen:
                seen.add(w)
                gens.append(w)
    forms, _ = dual_description(gens)
    for g in s.gens:
        if any(la.dot(f, g) < 0 for f in forms):
            raise InternalConsistencyError("approximation is not an overcone")
    return ApproxCone(generators=tuple(gens))


def approx_candidates(s: SimplicialCone, level: int = 1) -> tuple[IntVec, ...]:
    """Reduced subdivision candidates found through the overcone.

    Evaluates the overcone's placing triangulation (without further
    subdivision), keeps candidates inside the simplex and strictly below
    generator height, and reduces them.  Empty output means the
    approximation found nothing at this level; it is also the result
    when an overcone simplex is at least as big as the simplex itself,
    in which case approximating cannot pay off.
    """
    over = approximate_cone(s, level)
    _, tri = dual_description(over.generators, want_triangulation=True)
    cands: list[IntVec] = list(over.generators)
    for idx in tri:
        sub = make_simplicial_cone(tuple(over.generators[i] for i in idx))
        if sub.det >= max(2, s.det):
            return ()
        cands.extend(hb_candidates(sub))
    normal = s.height_normal
    height = s.gen_height
    survivors = []
    seen = set()
    for x in cands:
        if x in seen:
            continue
        seen.add(x)
        if not any(x):
            continue
        if la.dot(normal, x) >= height:
            continue
        if any(la.dot(f, x) < 0 for f in s.facet_forms):
            continue
        survivors.append(x)
    return reduce_to_hilbert_basis(survivors, s.facet_forms)


def best_candidate(s: SimplicialCone, cands) -> IntVec | None:
    """Deterministic pick: lowest height, ties broken lexicographically."""
    if not cands:
        return None
    normal = s.height_normal
    return min(cands, key=lambda x: (la.dot(normal, x), x))
