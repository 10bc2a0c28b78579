"""Exact directed toughness by exhaustive enumeration, plus its spectral
lower bound and the regular-graph specialization.

Toughness minimizes |S| / c(G - S) over vertex sets S whose removal
leaves two or more strongly connected components; complete graphs admit
no such S and get the distinguished value INFINITE.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionError
from .graph import DirectedGraph, is_strongly_connected, scc_count_masked
from .markov import SpectralProfile, build_transition_matrix, spectral_profile
from .mixing import regular_degree, second_adjacency_eigenvalue

INFINITE = math.inf

ENUMERATION_CAP = 20
_PARALLEL_THRESHOLD = 14

# rho below this is indistinguishable from an exactly rank-one walk matrix
ZERO_RHO_TOL = 1e-13


@dataclass(frozen=True)
class ToughnessResult:
    """Exact toughness with a deterministic witness.

    ``value`` is INFINITE when no removal set disconnects the graph; then
    ``witness`` and ``component_count`` are None.  Ties are broken by
    smallest witness size, then smallest witness bitmask.
    """

    value: float
    witness: Optional[tuple[int, ...]]
    component_count: Optional[int]

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


def _best_in_range(n: int, adj, start: int, stop: int):
    """Minimal (value, |S|, S-mask) over removal masks in [start, stop)."""
    full = (1 << n) - 1
    best = None
    for mask in range(start, stop):
        keep = full ^ mask
        count = scc_count_masked(adj, n, keep)
        if count >= 2:
            size = bin(mask).count("1")
            cand = (size / count, size, mask, count)
            if best is None or cand[:3] < best[:3]:
                best = cand
    return best


def _range_worker(args):
    return _best_in_range(*args)


def exact_toughness(g: DirectedGraph, cap: int = ENUMERATION_CAP,
                    allow_large: bool = False, threads: int = 1) -> ToughnessResult:
    """Minimize |S| / c(G - S) over all proper nonempty removal sets.

    Enumerates every bitmask strictly between the empty and the full
    vertex set, running Tarjan on each remainder.  ``threads`` > 1
    splits the mask range across worker processes for n at or above the
    parallel threshold; the winning candidate is reduced with the same
    deterministic tie-break either way.
    """
    if not is_strongly_connected(g):
        raise PreconditionError("toughness is defined for strongly connected graphs")
    if g.n > cap and not allow_large:
        raise PreconditionError(
            f"n={g.n} exceeds the enumeration cap {cap}; pass allow_large to override")
    n = g.n
    adj = g.adjacency()
    top = 1 << n
    if threads > 1 and n >= _PARALLEL_THRESHOLD:
        chunk = max(1, (top - 2) // (threads * 8) + 1)
        ranges = [(n, adj, s, min(s + chunk, top - 1))
                  for s in range(1, top - 1, chunk)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            candidates = [c for c in pool.map(_range_worker, ranges) if c is not None]
        best = min(candidates, key=lambda c: c[:3]) if candidates else None
    else:
        best = _best_in_range(n, adj, 1, top - 1)
    if best is None:
        return ToughnessResult(INFINITE, None, None)
    value, _size, mask, count = best
    witness = tuple(v for v in range(n) if mask >> v & 1)
    return ToughnessResult(value, witness, count)


def toughness_spectral_bound(profile: SpectralProfile) -> float:
    """Spectral lower bound on directed toughness.

    (1/3) ( pi_min / (pi_max rho kappa)
            - 1 / (1 + rho ||C||^2 pi_min / (kappa pi_max)) - 1 ).

    A zero rho sends the leading term to infinity; the INFINITE marker is
    returned rather than dividing by zero (such walk matrices are rank
    one: the graph is complete with self-loops and never disconnects).
    """
    if profile.rho <= ZERO_RHO_TOL:
        return INFINITE
    lead = profile.pi_min / (profile.pi_max * profile.rho * profile.kappa)
    damp = 1.0 / (1.0 + profile.rho * profile.norm_c ** 2 * profile.pi_min
                  / (profile.kappa * profile.pi_max))
    return (lead - damp - 1.0) / 3.0


def alon_toughness_bound(g: DirectedGraph) -> float:
    """(1/3)(k^2/(k mu + mu^2) - 1) for a symmetric k-regular graph."""
    k = regular_degree(g)
    mu = second_adjacency_eigenvalue(g)
    if mu <= k * ZERO_RHO_TOL:
        return INFINITE
    return (k * k / (k * mu + mu * mu) - 1.0) / 3.0


@dataclass(frozen=True)
class BoundComparison:
    """Exact toughness next to the spectral bound.

    ``holds`` records whether exact >= bound - 1e-9; a False value is a
    finding to report, not an execution failure.
    """

    exact: ToughnessResult
    spectral_bound: float
    gap: float
    holds: bool
    note: Optional[str] = None


def compare_bounds(g: DirectedGraph, cap: int = ENUMERATION_CAP,
                   allow_large: bool = False, threads: int = 1,
                   tol: float = 1e-9) -> BoundComparison:
    """Run both routes and report the gap; never aborts on a violation."""
    exact = exact_toughness(g, cap=cap, allow_large=allow_large, threads=threads)
    profile = spectral_profile(build_transition_matrix(g))
    bound = toughness_spectral_bound(profile)
    note = None
    if math.isinf(bound):
        note = "subdominant spectral radius is 0; the bound degenerates to infinity"
    if exact.is_infinite:
        gap = INFINITE
        holds = True
    elif math.isinf(bound):
        gap = -INFINITE
        holds = False
    else:
        gap = exact.value - bound
        holds = exact.value >= bound - tol
    return BoundComparison(exact=exact, spectral_bound=bound, gap=gap,
                           holds=holds, note=note)
