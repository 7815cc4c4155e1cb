"""End-to-end orchestration: build, triangulate, subdivide, evaluate, collect."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .approx import approx_candidates, best_candidate
from .collect import (ComputationResult, StatsRecord, accumulate_series,
                      reduce_to_hilbert_basis)
from .cone import Cone, ConeInput, ambient_support_forms, build_cone, triangulate
from .errors import DomainError
from .simplex import points_from_block, residue_blocks, series_contribution
from .subdivide import (HUGE_DET, SubdivisionConfig, recursive_subdivide,
                        solve_star_ip)

GOALS = frozenset({"hilbert_basis", "hilbert_series", "support_hyperplanes"})


@dataclass(frozen=True)
class RunOptions:
    goals: frozenset = GOALS
    subdivision: SubdivisionConfig = field(default_factory=SubdivisionConfig)
    threads: int = 1
    stats_csv_path: str | None = None
    input_path: str | None = None

    def __post_init__(self):
        goals = frozenset(self.goals)
        if not goals:
            raise DomainError("at least one goal is required")
        if not goals <= GOALS:
            raise DomainError(f"unknown goals {sorted(goals - GOALS)}")
        object.__setattr__(self, "goals", goals)
        if self.threads < 1:
            raise DomainError("threads must be at least 1")


def make_finder(cfg: SubdivisionConfig, stats: StatsRecord):
    """Compose the subdivision-point finder for the configured strategy.

    The integer program is exact: Infeasible proves no candidate exists
    at all (the approximation searches the same feasible set), so only a
    LimitReached falls through to the approximation.  When a simplex is
    still huge and a level found nothing, the level is escalated up to
    the configured cap.
    """

    def approx_stage(s, start_level):
        top = cfg.approx_level_cap if s.det > HUGE_DET else start_level
        for level in range(start_level, top + 1):
            cands = approx_candidates(s, level)
            if cands:
                stats.approx_levels_used = max(stats.approx_levels_used, level)
                return best_candidate(s, cands)
        return None

    def find(s):
        if cfg.strategy in ("ip", "ip_then_approx"):
            outcome = solve_star_ip(s, cfg)
            stats.ips_solved += 1
            if outcome.is_optimal:
                return outcome.point
            if outcome.status == "infeasible":
                return None
            if cfg.strategy == "ip_then_approx" or s.det > HUGE_DET:
                return approx_stage(s, 1)
            return None
        if cfg.strategy == "approx":
            return approx_stage(s, 1)
        return None

    return find


def _leaf_candidates(leaf) -> np.ndarray:
    """Stack of Hilbert-basis candidates of one leaf: E \\ {0} plus gens."""
    blocks = []
    for v in residue_blocks(leaf):
        pts = points_from_block(leaf, v)
        nonzero = np.any(v != 0, axis=1)
        blocks.append(pts[nonzero])
    blocks.append(np.array(leaf.gens, dtype=blocks[0].dtype if blocks else None))
    return np.vstack(blocks)


def compute(problem, options: RunOptions = RunOptions()) -> ComputationResult:
    """Run the primal algorithm and collect results in ambient coordinates."""
    stats = StatsRecord()
    times = stats.wall_time
    t_total = time.monotonic()

    t0 = time.monotonic()
    cone = problem if isinstance(problem, Cone) else build_cone(problem)
    times["build"] = time.monotonic() - t0

    want_series = "hilbert_series" in options.goals
    want_hb = "hilbert_basis" in options.goals
    if want_series and cone.rank > 0 and cone.grading is None:
        raise DomainError("the hilbert_series goal requires a grading")

    t0 = time.monotonic()
    tri = triangulate(cone)
    times["triangulate"] = time.monotonic() - t0
    stats.simplex_volume = max((s.det for s in tri), default=0)
    stats.initial_volume = sum(s.det for s in tri)

    t0 = time.monotonic()
    cfg = options.subdivision
    if cfg.strategy == "none":
        leaves = tri
    else:
        finder = make_finder(cfg, stats)
        leaves = []
        for s in tri:
            leaves.extend(recursive_subdivide(s, cfg, finder))
        leaves = tuple(leaves)
    times["subdivide"] = time.monotonic() - t0
    stats.volume_used = sum(s.det for s in leaves)

    t0 = time.monotonic()

    def evaluate(leaf):
        contrib = series_contribution(leaf, cone.grading) if want_series else None
        cands = _leaf_candidates(leaf) if want_hb else None
        return contrib, cands

    if options.threads > 1 and len(leaves) > 1:
        with ThreadPoolExecutor(max_workers=options.threads) as pool:
            evaluated = list(pool.map(evaluate, leaves))
    else:
        evaluated = [evaluate(leaf) for leaf in leaves]
    times["evaluate"] = time.monotonic() - t0

    t0 = time.monotonic()
    hilbert_basis = ()
    if want_hb:
        if evaluated:
            stacks = [c for _, c in evaluated]
            if any(blk.dtype == object for blk in stacks):
                stacks = [blk.astype(object) for blk in stacks]
            basis_r = reduce_to_hilbert_basis(np.vstack(stacks), cone.support_forms)
        else:
            basis_r = ()
        ambient = [cone.to_ambient(v) for v in basis_r]
        hilbert_basis = tuple(sorted(ambient, key=lambda v: (sum(v), v)))

    series = None
    if want_series:
        extreme_degrees = [la.dot(g, cone.grading) for g in cone.generators]
        series = accumulate_series([c for c, _ in evaluated if c is not None],
                                   extreme_degrees, cone.rank)
    times["collect"] = time.monotonic() - t0
    times["total"] = time.monotonic() - t_total

    return ComputationResult(
        hilbert_basis=hilbert_basis,
        support_forms=tuple(sorted(ambient_support_forms(cone))),
        series=series,
        stats=stats,
    )
