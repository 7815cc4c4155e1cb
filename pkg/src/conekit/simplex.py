"""Evaluation of a single simplicial cone.

The fundamental domain E (all lattice points with generator coordinates
in [0,1)) is enumerated through the Smith normal form of the generator
matrix: residue-class representatives of Z^r modulo the generator
lattice sweep a diagonal box, and division with remainder maps each one
into E.  Everything is streamed in fixed-size blocks so that simplices
with determinants near the subdivision bound never materialize E at
once.  Blocks use int64 arithmetic when a pre-computed bound proves it
exact, and Python big-int (object dtype) arrays otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .cone import SimplicialCone
from .errors import DomainError, GradingNotPositiveError, InternalConsistencyError
from .linalg import IntVec

DEFAULT_BLOCK = 1 << 20

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class FundamentalDomain:
    points: tuple[IntVec, ...]
    simplex: SimplicialCone


@dataclass(frozen=True)
class SeriesContribution:
    """Stanley-decomposition share of one half-open simplex.

    numerator[k] counts fundamental-domain points whose shifted degree
    is k; the denominator is the multiset of generator degrees.
    """

    numerator: tuple[int, ...]
    denom_degrees: tuple[int, ...]


def _residue_axes(s: SimplicialCone):
    """Mixed-radix axes (range, residue-increment row) of the SNF sweep."""
    snf = la.smith_normal_form(s.gens)
    w = la.unimodular_inverse(snf.v)
    # row-vector convention: q numerators of x are x · mstar
    mstar = la.transpose(s.facet_forms)
    t = la.matmul(w, mstar)
    det = s.det
    axes = []
    for i, m in enumerate(snf.d):
        if m > 1:
            axes.append((m, tuple(x % det for x in t[i])))
    return axes


def _block_dtype(s: SimplicialCone) -> object:
    det = s.det
    r = s.dim
    max_a = max((abs(x) for g in s.gens for x in g), default=1)
    if det * det + det < _INT64_SAFE and r * (det - 1) * max_a < _INT64_SAFE:
        return np.int64
    return object


def residue_blocks(s: SimplicialCone, block_size: int = DEFAULT_BLOCK):
    """Yield (n × r) arrays of q-coordinate numerators, lexicographic order.

    Each row v encodes one fundamental-domain point e = (v · gens) / det
    with q-coordinates v/det in [0,1)^r.
    """
    det = s.det
    r = s.dim
    dtype = _block_dtype(s)
    axes = _residue_axes(s)
    radix = []
    tail = 1
    for m, _ in reversed(axes):
        radix.append(tail)
        tail *= m
    radix.reverse()
    rows = [np.array(row, dtype=dtype) for _, row in axes]
    block_size = max(1, block_size)
    start = 0
    while start < det:
        stop = min(det, start + block_size)
        idx = np.arange(start, stop, dtype=np.int64)
        if dtype is object:
            idx = idx.astype(object)
        v = np.zeros((stop - start, r), dtype=dtype)
        for (m, _), p, row in zip(axes, radix, rows):
            c = (idx // p) % m
            v += c[:, None] * row[None, :]
            v %= det
        yield v
        start = stop


def points_from_block(s: SimplicialCone, v: np.ndarray) -> np.ndarray:
    """Map residue numerators to fundamental-domain points (exact)."""
    gens = np.array(s.gens, dtype=v.dtype)
    return v.dot(gens) // s.det


def fundamental_points(s: SimplicialCone,
                       block_size: int = DEFAULT_BLOCK) -> FundamentalDomain:
    """All |det| points of the fundamental domain of the simplex."""
    pts = []
    for v in residue_blocks(s, block_size):
        for row in points_from_block(s, v):
            pts.append(tuple(int(x) for x in row))
    if len(pts) != s.det:
        raise InternalConsistencyError(
            f"enumerated {len(pts)} points for determinant {s.det}")
    return FundamentalDomain(points=tuple(pts), simplex=s)


def half_open_shift(p: IntVec, s: SimplicialCone) -> IntVec:
    """Representative of p in the half-open simplex.

    Adds the generator opposite every excluded facet on which p lies;
    the shifted points are exactly the Stanley-decomposition offsets of
    the half-open cone.
    """
    u = s.q_numerators(p)
    if any(x < 0 or x >= s.det for x in u):
        raise DomainError("point is not in the fundamental domain")
    out = list(p)
    for i in s.excluded_facets:
        if u[i] == 0:
            for j, x in enumerate(s.gens[i]):
                out[j] += x
    return tuple(out)


def generator_degrees(s: SimplicialCone, deg: IntVec) -> tuple[int, ...]:
    degs = tuple(la.dot(g, deg) for g in s.gens)
    if any(x <= 0 for x in degs):
        raise GradingNotPositiveError("grading is not positive on a generator")
    return degs


def series_contribution(s: SimplicialCone, deg: IntVec,
                        block_size: int = DEFAULT_BLOCK) -> SeriesContribution:
    """Graded count of the half-open simplex's fundamental domain.

    numerator[k] = #{p in E : deg(shift(p)) = k}; together with the
    denominator product of (1 - t^deg(gen)) this is the Hilbert series
    of the half-open simplicial cone.
    """
    degs = generator_degrees(s, deg)
    det = s.det
    top = sum(degs)
    counts = np.zeros(top, dtype=np.int64)
    w = np.array([la.dot(g, deg) for g in s.gens], dtype=np.int64)
    for v in residue_blocks(s, block_size):
        dv = v.dot(w if v.dtype == np.int64 else w.astype(object)) // det
        for i in s.excluded_facets:
            dv = dv + degs[i] * (v[:, i] == 0)
        if dv.dtype == object:
            dv = dv.astype(np.int64)
        counts += np.bincount(dv, minlength=top)
    if int(counts.sum()) != det:
        raise InternalConsistencyError("fundamental domain count mismatch")
    while len(counts) > 1 and counts[-1] == 0:
        counts = counts[:-1]
    return SeriesContribution(numerator=tuple(int(c) for c in counts),
                              denom_degrees=tuple(sorted(degs)))


def hb_candidates(s: SimplicialCone,
                  block_size: int = DEFAULT_BLOCK) -> list[IntVec]:
    """Hilbert-basis candidates of the simplex: E \\ {0} plus generators."""
    out = []
    for v in residue_blocks(s, block_size):
        nonzero = np.any(v != 0, axis=1)
        for row in points_from_block(s, v[nonzero]):
            out.append(tuple(int(x) for x in row))
    out.extend(s.gens)
    return out
