"""Random-walk transition matrices and their spectral profiles.

The transition matrix puts probability 1/outdegree(v) on every edge
leaving v.  A spectral profile packages everything the mixing and
toughness bounds consume: the eigendecomposition with the canonical
all-ones first eigenvector, the subdominant spectral radius rho, the
stationary distribution pi, and the basis norms ||C||, ||C^-1||, kappa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NumericalError, PreconditionError, SingularMatrixError
from .graph import DirectedGraph, is_strongly_connected, period
from .linalg import (
    EigenDecomposition,
    eigendecompose_nonsymmetric,
    frobenius,
    invert,
    operator_norm,
)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic walk matrix with a reference to its graph."""

    p: np.ndarray
    graph: DirectedGraph

    def __post_init__(self):
        self.p.flags.writeable = False

    @property
    def n(self) -> int:
        return self.graph.n


def build_transition_matrix(g: DirectedGraph) -> TransitionMatrix:
    """Uniform random-walk matrix: p_ij = 1/outdegree(v_i) on edges."""
    out_deg = [0] * g.n
    for t, _ in g.edges:
        out_deg[t] += 1
    for v, d in enumerate(out_deg):
        if d == 0:
            raise PreconditionError(
                f"vertex {g.label_of(v)} has outdegree 0: no stochastic row possible")
    p = np.zeros((g.n, g.n))
    for t, h in g.edges:
        p[t, h] = 1.0 / out_deg[t]
    row_err = float(np.max(np.abs(p.sum(axis=1) - 1.0)))
    if row_err > 1e-12:
        raise NumericalError(f"row sums deviate from 1 by {row_err:.3e}")
    return TransitionMatrix(p, g)


def stationary_distribution(t: TransitionMatrix, tol: float = 1e-14,
                            max_iter: int = 10 ** 6) -> np.ndarray:
    """Left Perron vector by power iteration from the uniform start.

    Iterates pi <- pi P (renormalized to sum 1) until the successive
    infinity-norm change drops below ``tol``, then verifies the fixed
    point to 1e-12.
    """
    g = t.graph
    if not is_strongly_connected(g):
        raise PreconditionError("stationary distribution needs a strongly connected graph")
    if period(g) != 1:
        raise PreconditionError("stationary distribution needs an aperiodic graph")
    n = g.n
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = pi @ t.p
        nxt /= nxt.sum()
        delta = float(np.max(np.abs(nxt - pi)))
        pi = nxt
        if delta < tol:
            break
    else:
        raise ConvergenceError(f"power iteration did not settle within {max_iter} steps")
    fixed_err = float(np.max(np.abs(pi @ t.p - pi)))
    if fixed_err > 1e-12:
        raise ConvergenceError(f"stationary fixed-point residual {fixed_err:.3e} > 1e-12")
    if float(pi.min()) <= 0.0:
        raise NumericalError("stationary distribution has a nonpositive component")
    pi.flags.writeable = False
    return pi


@dataclass(frozen=True)
class SpectralProfile:
    """All spectral inputs of the mixing and toughness bounds.

    The decomposition's first column is exactly (1/sqrt(n)) * ones, its
    eigenvalue exactly 1; ``rho`` is the maximum modulus over the other
    eigenvalues.  ``perron_gap`` records how far the solver's dominant
    eigenvalue was from 1 before it was snapped.
    """

    transition: TransitionMatrix
    decomposition: EigenDecomposition
    rho: float
    pi: np.ndarray
    pi_min: float
    pi_max: float
    norm_c: float
    norm_c_inv: float
    kappa: float
    perron_gap: float

    @property
    def n(self) -> int:
        return self.transition.n

    @property
    def graph(self) -> DirectedGraph:
        return self.transition.graph


def spectral_profile(t: TransitionMatrix, eig_tol: float = 1e-10,
                     cluster_tol: float = 1e-8) -> SpectralProfile:
    """Eigendecompose the walk matrix and derive rho, pi, and basis norms.

    The eigenvector for the eigenvalue nearest 1 is replaced by the exact
    analytic vector (1/sqrt(n)) * ones (valid because rows sum to 1) and
    moved to the first column; the basis inverse and norms are recomputed
    from the adjusted basis.
    """
    g = t.graph
    if not is_strongly_connected(g):
        raise PreconditionError("spectral profile needs a strongly connected graph")
    if period(g) != 1:
        raise PreconditionError("spectral profile needs an aperiodic graph (period 1)")

    dec = eigendecompose_nonsymmetric(t.p, tol=eig_tol, cluster_tol=cluster_tol)
    n = g.n
    vals = dec.eigenvalues.copy()
    lead = int(np.argmin(np.abs(vals - 1.0)))
    perron_gap = float(abs(vals[lead] - 1.0))
    if perron_gap > 1e-10:
        raise NumericalError(
            f"dominant eigenvalue is {vals[lead]:.12g}, not 1 within 1e-10")

    order = [lead] + [i for i in range(n) if i != lead]
    vals = vals[order]
    basis = dec.basis[:, order].copy()
    vals[0] = 1.0
    basis[:, 0] = 1.0 / np.sqrt(n)
    try:
        basis_inv = invert(basis)
    except SingularMatrixError as exc:
        raise NumericalError("eigenbasis became singular after the "
                             "dominant-column replacement") from exc

    scale = frobenius(t.p)
    residual = frobenius(t.p.astype(complex) @ basis - basis * vals[None, :])
    if residual > eig_tol * scale:
        raise ConvergenceError(
            f"profile residual {residual:.3e} exceeds {eig_tol:.1e} * ||P||_F")
    adjusted = EigenDecomposition(vals, basis, basis_inv, residual, eig_tol)

    rho = float(np.max(np.abs(vals[1:]))) if n > 1 else 0.0
    if rho >= 1.0 - 1e-12:
        raise NumericalError(
            f"subdominant spectral radius {rho:.15g} is numerically 1: "
            "the walk is not aperiodic to working precision")

    pi = stationary_distribution(t)
    norm_c = operator_norm(basis)
    norm_c_inv = operator_norm(basis_inv)
    kappa = max(norm_c * norm_c_inv, 1.0)
    return SpectralProfile(
        transition=t,
        decomposition=adjusted,
        rho=rho,
        pi=pi,
        pi_min=float(pi.min()),
        pi_max=float(pi.max()),
        norm_c=norm_c,
        norm_c_inv=norm_c_inv,
        kappa=kappa,
        perron_gap=perron_gap,
    )


@dataclass(frozen=True)
class SymbolCheck:
    """Measured deviations of the dual-basis identities.

    ``pi_row_deviation`` is the infinity-norm distance between the first
    row of C^-1 and sqrt(n) * pi; ``perron_gap`` is |lambda_1 - 1| as the
    solver reported it.
    """

    pi_row_deviation: float
    perron_gap: float


def eml_symbol_check(profile: SpectralProfile) -> SymbolCheck:
    row = profile.decomposition.basis_inverse[0]
    expected = np.sqrt(profile.n) * profile.pi
    dev = float(np.max(np.abs(row - expected)))
    return SymbolCheck(pi_row_deviation=dev, perron_gap=profile.perron_gap)
