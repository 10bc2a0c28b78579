"""Mixing inequalities for subset pairs: the asymmetric-spectrum bound,
its condition-number simplification, and the classical regular-graph
reduction, each verifiable exhaustively over all 4^n subset pairs or by
seeded sampling.

Subsets are bitmasks over [0, n): bit i set means vertex i is in the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import NumericalError, PreconditionError
from .graph import DirectedGraph
from .markov import SpectralProfile, build_transition_matrix, spectral_profile

EXHAUSTIVE_CAP = 13  # 4^13 ~ 6.7e7 pair evaluations


@dataclass(frozen=True)
class SubsetPair:
    """An ordered pair of vertex subsets, each a bitmask over [0, n)."""

    u: int
    w: int

    def __post_init__(self):
        if self.u < 0 or self.w < 0:
            raise PreconditionError("subset bitmasks must be nonnegative")

    @classmethod
    def from_indices(cls, u: Iterable[int], w: Iterable[int]) -> "SubsetPair":
        return cls(mask_from_indices(u), mask_from_indices(w))

    @property
    def u_indices(self) -> tuple[int, ...]:
        return indices_from_mask(self.u)

    @property
    def w_indices(self) -> tuple[int, ...]:
        return indices_from_mask(self.w)


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 0:
            raise PreconditionError("vertex indices must be nonnegative")
        mask |= 1 << i
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _check_pair(profile_n: int, pair: SubsetPair):
    top = 1 << profile_n
    if pair.u >= top or pair.w >= top:
        raise PreconditionError(f"subset bitmask out of range for n={profile_n}")


def popcounts(n: int) -> np.ndarray:
    """Bit counts of every mask in [0, 2^n)."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pc[1 << b:2 << b] = pc[:1 << b] + 1
    return pc


def subset_sums(values: np.ndarray) -> np.ndarray:
    """sums[mask] = sum of values[i] over the set bits of mask."""
    out = np.zeros(1)
    for v in values:
        out = np.concatenate([out, out + v])
    return out


def _row_subset_table(p: np.ndarray) -> np.ndarray:
    """table[i, wmask] = sum over j in W of p[i, j], for every W."""
    table = np.zeros((p.shape[0], 1))
    for j in range(p.shape[1]):
        table = np.hstack([table, table + p[:, j:j + 1]])
    return table


def _pair_mass(p: np.ndarray, pair: SubsetPair) -> float:
    ui = list(pair.u_indices)
    wi = list(pair.w_indices)
    if not ui or not wi:
        return 0.0
    return float(p[np.ix_(ui, wi)].sum())


def eml_lhs(profile: SpectralProfile, pair: SubsetPair) -> float:
    """|sum of p_ij over (i in U, j in W)  -  |U| * pi(W)|."""
    _check_pair(profile.n, pair)
    s = _pair_mass(profile.transition.p, pair)
    size_u = len(pair.u_indices)
    pi_w = float(profile.pi[list(pair.w_indices)].sum()) if pair.w else 0.0
    return abs(s - size_u * pi_w)


def _radicand(value: float) -> float:
    if value <= -1e-9:
        raise NumericalError(
            f"mixing-bound radicand factor {value:.3e} is significantly negative: "
            "upstream spectral quantities are inconsistent")
    return max(value, 0.0)


def eml_bound(profile: SpectralProfile, pair: SubsetPair) -> float:
    """rho * sqrt((||C||^2 |U| - |U|^2/n) (||C^-1||^2 |W| - pi(W)^2 n))."""
    _check_pair(profile.n, pair)
    n = profile.n
    size_u = len(pair.u_indices)
    size_w = len(pair.w_indices)
    pi_w = float(profile.pi[list(pair.w_indices)].sum()) if pair.w else 0.0
    fac_u = _radicand(profile.norm_c ** 2 * size_u - size_u ** 2 / n)
    fac_w = _radicand(profile.norm_c_inv ** 2 * size_w - pi_w ** 2 * n)
    return profile.rho * float(np.sqrt(fac_u * fac_w))


def eml_bound_simple(profile: SpectralProfile, pair: SubsetPair) -> float:
    """rho * sqrt(|U| |W|) * kappa(C)."""
    _check_pair(profile.n, pair)
    size_u = len(pair.u_indices)
    size_w = len(pair.w_indices)
    return profile.rho * float(np.sqrt(size_u * size_w)) * profile.kappa


@dataclass(frozen=True)
class EmlReport:
    """Aggregate of a mixing-inequality sweep.

    Slack is bound minus deviation, so negative slack is a violation;
    ``max_violation`` is the most negative slack observed across both the
    full and the simplified bound, sign-flipped (a run passes when it
    stays at or below ``slack_tol``).  ``stmt_min_slack`` tracks the
    alternative deviation |sum - |U| pi(U)| against the full bound; it is
    reported for visibility, never asserted.
    """

    n: int
    pair_count: int
    policy: str
    sample_count: Optional[int]
    seed: Optional[int]
    nonempty_only: bool
    slack_tol: float
    max_violation: float
    min_slack: float
    simple_min_slack: float
    stmt_min_slack: float
    bound_gap_min: float
    mean_slack: float
    tightness_ratio: float
    theorem_violations: int
    simple_violations: int
    worst_pair: SubsetPair
    passed: bool
    rows: Optional[tuple] = None


class _SweepAccumulator:
    def __init__(self, slack_tol: float, keep_rows: bool):
        self.slack_tol = slack_tol
        self.keep_rows = keep_rows
        self.pair_count = 0
        self.slack_sum = 0.0
        self.min_slack = np.inf
        self.worst = (np.inf, -1, -1)
        self.simple_min = np.inf
        self.stmt_min = np.inf
        self.gap_min = np.inf
        self.tightness = 0.0
        self.thm_viol = 0
        self.simple_viol = 0
        self.rows: list[tuple] = []

    def add_block(self, u_mask: int, w_masks: np.ndarray, lhs: np.ndarray,
                  lhs_stmt: np.ndarray, bound: np.ndarray, bound_simple: np.ndarray):
        slack = bound - lhs
        slack_simple = bound_simple - lhs
        self.pair_count += len(w_masks)
        self.slack_sum += float(slack.sum())
        j = int(np.argmin(slack))
        cand = (float(slack[j]), u_mask, int(w_masks[j]))
        if cand < self.worst:
            self.worst = cand
        self.min_slack = min(self.min_slack, float(slack[j]))
        self.simple_min = min(self.simple_min, float(slack_simple.min()))
        self.stmt_min = min(self.stmt_min, float((bound - lhs_stmt).min()))
        self.gap_min = min(self.gap_min, float((bound_simple - bound).min()))
        self.thm_viol += int(np.count_nonzero(slack < -self.slack_tol))
        self.simple_viol += int(np.count_nonzero(slack_simple < -self.slack_tol))
        pos = bound > 0.0
        if np.any(pos):
            self.tightness = max(self.tightness, float((lhs[pos] / bound[pos]).max()))
        if self.keep_rows:
            for k, w in enumerate(w_masks):
                self.rows.append((u_mask, int(w), float(lhs[k]), float(bound[k]),
                                  float(bound_simple[k]), float(slack[k])))

    def report(self, n: int, policy: str, sample_count, seed, nonempty_only,
               slack_tol) -> EmlReport:
        max_violation = max(-self.min_slack, -self.simple_min)
        return EmlReport(
            n=n,
            pair_count=self.pair_count,
            policy=policy,
            sample_count=sample_count,
            seed=seed,
            nonempty_only=nonempty_only,
            slack_tol=slack_tol,
            max_violation=max_violation,
            min_slack=self.min_slack,
            simple_min_slack=self.simple_min,
            stmt_min_slack=self.stmt_min,
            bound_gap_min=self.gap_min,
            mean_slack=self.slack_sum / self.pair_count if self.pair_count else 0.0,
            tightness_ratio=self.tightness,
            theorem_violations=self.thm_viol,
            simple_violations=self.simple_viol,
            worst_pair=SubsetPair(self.worst[1], self.worst[2])
            if self.worst[1] >= 0 else SubsetPair(0, 0),
            passed=max_violation <= slack_tol,
            rows=tuple(self.rows) if self.keep_rows else None,
        )


def verify_eml(profile: SpectralProfile, sample: Optional[int] = None,
               seed: int = 0, nonempty_only: bool = False,
               slack_tol: float = 1e-9, cap: int = EXHAUSTIVE_CAP,
               keep_rows: bool = False) -> EmlReport:
    """Sweep subset pairs and check both bound forms against the deviation.

    ``sample=None`` enumerates all 4^n pairs (n capped); otherwise that
    many pairs are drawn from a PCG64 stream seeded with ``seed``.
    """
    n = profile.n
    if keep_rows and n > 8:
        raise PreconditionError("per-pair rows are only kept for n <= 8")
    acc = _SweepAccumulator(slack_tol, keep_rows)
    if sample is None:
        if n > cap:
            raise PreconditionError(
                f"exhaustive sweep is capped at n <= {cap}; pass a sample size")
        _sweep_exhaustive(profile, nonempty_only, acc)
        policy, sample_count, seed_out = "exhaustive", None, None
    else:
        if sample < 1:
            raise PreconditionError("sample count must be positive")
        _sweep_sampled(profile, sample, seed, nonempty_only, acc)
        policy, sample_count, seed_out = "sample", sample, seed
    return acc.report(n, policy, sample_count, seed_out, nonempty_only, slack_tol)


def _sweep_exhaustive(profile: SpectralProfile, nonempty_only: bool,
                      acc: _SweepAccumulator):
    n = profile.n
    size = 1 << n
    pc = popcounts(n)
    pi_mask = subset_sums(profile.pi)
    row_table = _row_subset_table(profile.transition.p)
    fac_w = profile.norm_c_inv ** 2 * pc - pi_mask ** 2 * n
    low = float(fac_w.min())
    if low <= -1e-9:
        raise NumericalError(
            f"mixing-bound radicand factor {low:.3e} is significantly negative: "
            "upstream spectral quantities are inconsistent")
    fac_w = np.maximum(fac_w, 0.0)
    sqrt_pc = np.sqrt(pc.astype(float))
    start = 1 if nonempty_only else 0
    w_masks = np.arange(start, size)
    for u in range(start, size):
        cu = int(pc[u])
        bits = [b for b in range(n) if u >> b & 1]
        s_row = row_table[bits].sum(axis=0) if bits else np.zeros(size)
        fac_u = _radicand(profile.norm_c ** 2 * cu - cu * cu / n)
        bound = profile.rho * np.sqrt(fac_u * fac_w[start:])
        bound_simple = profile.rho * profile.kappa * np.sqrt(cu) * sqrt_pc[start:]
        lhs = np.abs(s_row[start:] - cu * pi_mask[start:])
        lhs_stmt = np.abs(s_row[start:] - cu * pi_mask[u])
        acc.add_block(u, w_masks, lhs, lhs_stmt, bound, bound_simple)


def _sweep_sampled(profile: SpectralProfile, count: int, seed: int,
                   nonempty_only: bool, acc: _SweepAccumulator):
    n = profile.n
    size = 1 << n
    low = 1 if nonempty_only else 0
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.integers(low, size, size=(count, 2), dtype=np.uint64)
    p = profile.transition.p
    for u_mask, w_mask in draws:
        pair = SubsetPair(int(u_mask), int(w_mask))
        size_u = len(pair.u_indices)
        wi = list(pair.w_indices)
        pi_w = float(profile.pi[wi].sum()) if wi else 0.0
        pi_u = float(profile.pi[list(pair.u_indices)].sum()) if pair.u else 0.0
        s = _pair_mass(p, pair)
        fac_u = _radicand(profile.norm_c ** 2 * size_u - size_u ** 2 / n)
        fac_w = _radicand(profile.norm_c_inv ** 2 * len(wi) - pi_w ** 2 * n)
        bound = profile.rho * float(np.sqrt(fac_u * fac_w))
        bound_simple = profile.rho * profile.kappa * float(np.sqrt(size_u * len(wi)))
        acc.add_block(pair.u, np.array([pair.w]),
                      np.array([abs(s - size_u * pi_w)]),
                      np.array([abs(s - size_u * pi_u)]),
                      np.array([bound]), np.array([bound_simple]))


# ---------------------------------------------------------------------------
# Classical reduction for undirected k-regular graphs
# ---------------------------------------------------------------------------

def regular_degree(g: DirectedGraph) -> int:
    """Degree of a symmetric k-regular digraph; error if it is not one."""
    for t, h in g.edges:
        if (h, t) not in g.edges:
            raise PreconditionError("graph is not symmetric (an undirected doubling)")
    degs = {g.out_degree(v) for v in range(g.n)}
    degs |= {g.in_degree(v) for v in range(g.n)}
    if len(degs) != 1:
        raise PreconditionError("graph is not regular")
    return degs.pop()


def second_adjacency_eigenvalue(g: DirectedGraph) -> float:
    """mu: largest adjacency-eigenvalue modulus below the degree (k * rho)."""
    k = regular_degree(g)
    profile = spectral_profile(build_transition_matrix(g))
    return k * profile.rho


def alon_chung_bound(g: DirectedGraph, pair: SubsetPair,
                     mu: Optional[float] = None) -> tuple[float, float]:
    """Classical mixing inequality for a symmetric k-regular graph.

    Returns (lhs, rhs) with lhs = |e(U, W) - k|U||W|/n| where e counts
    directed edges from U to W (an undirected edge inside the overlap
    contributes once per direction).
    """
    k = regular_degree(g)
    n = g.n
    _check_pair(n, pair)
    if mu is None:
        mu = second_adjacency_eigenvalue(g)
    ui = set(pair.u_indices)
    wi = set(pair.w_indices)
    e_uw = sum(1 for t, h in g.edges if t in ui and h in wi)
    size_u, size_w = len(ui), len(wi)
    lhs = abs(e_uw - k * size_u * size_w / n)
    rhs = mu * float(np.sqrt(size_u * size_w * (1 - size_u / n) * (1 - size_w / n)))
    return lhs, rhs


@dataclass(frozen=True)
class AlonChungReport:
    n: int
    k: int
    mu: float
    pair_count: int
    min_slack: float
    max_violation: float
    violations: int
    passed: bool


def alon_chung_sweep(g: DirectedGraph, mu: Optional[float] = None,
                     slack_tol: float = 1e-9,
                     cap: int = EXHAUSTIVE_CAP) -> AlonChungReport:
    """Exhaustive check of the classical inequality over all 4^n pairs."""
    k = regular_degree(g)
    n = g.n
    if n > cap:
        raise PreconditionError(f"exhaustive sweep is capped at n <= {cap}")
    if mu is None:
        mu = second_adjacency_eigenvalue(g)
    size = 1 << n
    pc = popcounts(n).astype(float)
    adj_table = _row_subset_table(g.adjacency_matrix())
    rhs_w = np.sqrt(np.maximum(pc * (1.0 - pc / n), 0.0))
    min_slack = np.inf
    violations = 0
    for u in range(size):
        bits = [b for b in range(n) if u >> b & 1]
        e_row = adj_table[bits].sum(axis=0) if bits else np.zeros(size)
        cu = float(len(bits))
        lhs = np.abs(e_row - k * cu * pc / n)
        rhs = mu * np.sqrt(max(cu * (1.0 - cu / n), 0.0)) * rhs_w
        slack = rhs - lhs
        min_slack = min(min_slack, float(slack.min()))
        violations += int(np.count_nonzero(slack < -slack_tol))
    return AlonChungReport(
        n=n, k=k, mu=mu, pair_count=size * size, min_slack=min_slack,
        max_violation=-min_slack, violations=violations,
        passed=-min_slack <= slack_tol)
