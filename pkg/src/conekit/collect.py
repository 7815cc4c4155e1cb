"""Merging of per-simplex data: Hilbert basis, Hilbert series, statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm

import numpy as np

from . import linalg as la
from .cone import SimplicialCone, dual_description
from .errors import DomainError, InternalConsistencyError
from .linalg import IntMat, IntVec
from .simplex import SeriesContribution, hb_candidates

_INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# dense integer polynomials, constant term first


def _poly_trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return p[:n]


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_add_into(acc, p):
    if len(acc) < len(p):
        acc.extend([0] * (len(p) - len(acc)))
    for i, x in enumerate(p):
        acc[i] += x


def _one_minus_power(k: int):
    out = [0] * (k + 1)
    out[0] = 1
    out[k] = -1
    return out


def _binomial_expansion(e: int, r: int):
    """(1 - t^e)^r as a coefficient list."""
    out = [0] * (e * r + 1)
    for j in range(r + 1):
        out[j * e] = (-1) ** j * comb(r, j)
    return out


def _poly_divexact(num, den):
    """Quotient of num/den; den has constant term ±1; raises if inexact."""
    num = list(num)
    den = _poly_trim(list(den))
    q_len = len(num) - len(den) + 1
    if q_len <= 0:
        if not _poly_trim(num):
            return []
        raise InternalConsistencyError("polynomial division is inexact")
    lead = den[0]
    quot = [0] * q_len
    for k in range(q_len):
        c = num[k]
        if c % lead:
            raise InternalConsistencyError("polynomial division is inexact")
        c //= lead
        quot[k] = c
        if c:
            for j in range(1, len(den)):
                num[k + j] -= c * den[j]
    if any(num[q_len:]):
        raise InternalConsistencyError("polynomial division is inexact")
    return _poly_trim(quot)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """Hilbert series in Hilbert-Serre form R(t) / (1 - t^e)^r."""

    numerator: tuple[int, ...]
    e: int
    r: int

    def expand(self, upto: int) -> list[int]:
        """Power-series coefficients 0..upto of the rational function."""
        c = list(self.numerator) + [0] * max(0, upto + 1 - len(self.numerator))
        c = c[:upto + 1]
        for _ in range(self.r):
            for k in range(self.e, upto + 1):
                c[k] += c[k - self.e]
        return c


@dataclass
class StatsRecord:
    """Run statistics in the layout of the paper-style result tables."""

    simplex_volume: int = 0       # largest initial simplex determinant
    initial_volume: int = 0       # sum over the initial triangulation
    volume_used: int = 0          # sum over simplices actually evaluated
    ips_solved: int = 0
    approx_levels_used: int = 0   # highest level that produced a point
    wall_time: dict = field(default_factory=dict)

    @property
    def improvement_factor(self) -> Fraction:
        if self.volume_used <= 0 or self.initial_volume <= 0:
            return Fraction(1)
        return Fraction(self.initial_volume, self.volume_used)


@dataclass(frozen=True)
class ComputationResult:
    hilbert_basis: IntMat          # ambient coordinates
    support_forms: IntMat          # ambient coordinates
    series: HilbertSeries | None
    stats: StatsRecord


# ---------------------------------------------------------------------------


def _support_values(cands: np.ndarray, forms: np.ndarray) -> np.ndarray:
    bound = (int(np.abs(cands).max(initial=0)) *
             int(np.abs(forms).max(initial=0)) * cands.shape[1])
    if cands.dtype != object and bound < _INT64_SAFE:
        return cands @ forms.T
    return cands.astype(object) @ forms.T.astype(object)


def reduce_to_hilbert_basis(candidates, support_forms) -> tuple[IntVec, ...]:
    """Discard reducible candidates; returns the minimal generating set.

    x is reducible when x - y lies in the cone for another candidate y,
    i.e. when y's support-form values are dominated by x's.  Candidates
    are swept in increasing order of the auxiliary degree (sum of all
    support-form values, strictly positive on the pointed cone), so a
    reducer is always accepted before everything it reduces; members of
    one level cannot reduce each other.
    """
    if isinstance(candidates, np.ndarray):
        cands = candidates
    else:
        cands = np.array([tuple(c) for c in candidates], dtype=object)
        if cands.size:
            try:
                cands = cands.astype(np.int64)
            except OverflowError:
                pass
    if cands.size == 0:
        return ()
    if cands.dtype == object:
        uniq = sorted({tuple(int(x) for x in row) for row in cands
                       if any(x != 0 for x in row)})
        if not uniq:
            return ()
        cands = np.array(uniq, dtype=object)
    else:
        cands = cands[np.any(cands != 0, axis=1)]
        if cands.size == 0:
            return ()
        cands = np.unique(cands, axis=0)
    forms = np.array(support_forms,
                     dtype=object if cands.dtype == object else np.int64)
    vals = _support_values(cands, forms)
    aux = vals.sum(axis=1)
    order = np.argsort(aux, kind="stable")
    cands, vals, aux = cands[order], vals[order], aux[order]

    accepted_rows: list[np.ndarray] = []
    accepted_vals: list[np.ndarray] = []
    n = len(cands)
    batch = 1 << 15
    for start in range(0, n, batch):
        stop = min(n, start + batch)
        # a batch boundary may split an aux level, which is harmless:
        # equal-aux candidates cannot dominate one another
        bv = vals[start:stop]
        dominated = np.zeros(stop - start, dtype=bool)
        for chunk in accepted_vals:
            for lo in range(0, len(chunk), 256):
                sub = chunk[lo:lo + 256]
                todo = np.flatnonzero(~dominated)
                if todo.size == 0:
                    break
                cmp = (bv[todo][:, None, :] >= sub[None, :, :]).all(2).any(1)
                dominated[todo] |= cmp
        survivors = np.flatnonzero(~dominated)
        # level sweep among the (few) survivors of this batch
        baux = aux[start:stop]
        local_rows: list[np.ndarray] = []
        local_vals: list[np.ndarray] = []
        i = 0
        while i < len(survivors):
            j = i
            level = baux[survivors[i]]
            while j < len(survivors) and baux[survivors[j]] == level:
                j += 1
            grp = survivors[i:j]
            gv = bv[grp]
            dom = np.zeros(len(grp), dtype=bool)
            for lv in local_vals:
                dom |= (gv[:, None, :] >= lv[None, :, :]).all(2).any(1)
            keep = np.flatnonzero(~dom)
            if keep.size:
                local_rows.append(cands[start + grp[keep]])
                local_vals.append(gv[keep])
            i = j
        if local_rows:
            accepted_rows.append(np.vstack(local_rows))
            accepted_vals.append(np.vstack(local_vals))
    out = []
    for block in accepted_rows:
        out.extend(tuple(int(x) for x in row) for row in block)
    return tuple(out)


def accumulate_series(contribs, extreme_degrees, rank: int) -> HilbertSeries:
    """Sum per-simplex contributions and rewrite over (1 - t^e)^r.

    e is the lcm of the degrees of the extreme generators.  Subdivision
    introduces denominators whose degrees need not divide e, so the sum
    is taken over a max-multiplicity common denominator first and the
    final conversion divides exactly (anything else signals a bug in the
    triangulation or the half-open shift).
    """
    extreme_degrees = [int(x) for x in extreme_degrees]
    if any(x <= 0 for x in extreme_degrees):
        raise DomainError("extreme generator degrees must be positive")
    e = lcm(*extreme_degrees) if extreme_degrees else 1
    if rank == 0 or not contribs:
        return HilbertSeries(numerator=(1,), e=e, r=rank)

    groups: dict[tuple[int, ...], list[int]] = {}
    for c in contribs:
        key = tuple(sorted(c.denom_degrees))
        acc = groups.setdefault(key, [])
        _poly_add_into(acc, list(c.numerator))

    common: dict[int, int] = {}
    for key in groups:
        seen: dict[int, int] = {}
        for d in key:
            seen[d] = seen.get(d, 0) + 1
        for d, m in seen.items():
            common[d] = max(common.get(d, 0), m)

    numer: list[int] = []
    for key, num in groups.items():
        missing: dict[int, int] = dict(common)
        for d in key:
            missing[d] -= 1
        factor = [1]
        for d, m in sorted(missing.items()):
            for _ in range(m):
                factor = _poly_mul(factor, _one_minus_power(d))
        _poly_add_into(numer, _poly_mul(num, factor))

    denom = [1]
    for d, m in sorted(common.items()):
        for _ in range(m):
            denom = _poly_mul(denom, _one_minus_power(d))

    big = _poly_mul(_poly_trim(numer), _binomial_expansion(e, rank))
    r_poly = _poly_divexact(big, denom)
    if len(r_poly) > e * rank:
        raise InternalConsistencyError(
            "Hilbert series does not have negative degree")
    return HilbertSeries(numerator=tuple(r_poly) or (0,), e=e, r=rank)


def bottom_volume(s: SimplicialCone, guard: int = 10**6) -> int:
    """Total determinant of a triangulated bottom of the simplex.

    The bottom is the union of the bounded faces of the convex hull of
    the nonzero lattice points of the cone; it is the theoretical
    optimum any subdivision could reach.  Brute force over the
    fundamental domain, guarded to desk scale.
    """
    if s.det > guard:
        raise DomainError(f"determinant {s.det} above the bottom-volume guard")
    r = s.dim
    points = reduce_to_hilbert_basis(hb_candidates(s), s.facet_forms)
    homog = [p + (1,) for p in points] + [tuple(g) + (0,) for g in s.gens]
    facets, _ = dual_description(homog)
    total = 0
    for form in facets:
        eta, offset = form[:r], form[r]
        if not all(la.dot(eta, g) > 0 for g in s.gens):
            continue
        on_facet = [p for p in points if la.dot(eta, p) + offset == 0]
        _, tri = dual_description(on_facet, want_triangulation=True)
        for idx in tri:
            total += abs(la.determinant(tuple(on_facet[i] for i in idx)))
    return total
