"""Self-contained dense linear algebra: LU solve/inverse, nonsymmetric
eigendecomposition, and Euclidean operator norms.

No LAPACK-backed decompositions are called anywhere in this module; numpy
is used only as the array-arithmetic substrate.  The eigensolver is the
classical pipeline: Householder reduction to Hessenberg form, shifted QR
iteration (Wilkinson shift, exceptional shifts on stagnation) for the
eigenvalues, then inverse iteration on the original matrix for the
eigenvectors, with per-eigenspace orthonormalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DefectiveMatrixError,
    NumericalError,
    PreconditionError,
    SingularMatrixError,
)

_EPS = float(np.finfo(np.float64).eps)

# Fixed seeds keep inverse iteration and the norm estimator deterministic.
_INV_ITER_SEED = 0x5EED_1A57
_NORM_SEED = 0x0B5E_55ED

# Defectiveness cutoffs: the basis is declared rank deficient when its
# smallest singular value or condition number crosses these.
SIGMA_MIN_CUTOFF = 1e-10
KAPPA_CUTOFF = 1e10


def as_matrix(a) -> np.ndarray:
    """Validate and return a finite 2-D complex128 copy of ``a``."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise PreconditionError("expected a nonempty 2-D matrix")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("matrix entries must be finite")
    return arr


def _require_square(a: np.ndarray):
    if a.shape[0] != a.shape[1]:
        raise PreconditionError(f"expected a square matrix, got {a.shape}")


def frobenius(a) -> float:
    arr = np.asarray(a)
    return float(np.sqrt(np.sum(np.abs(arr) ** 2)))


# ---------------------------------------------------------------------------
# LU with partial pivoting
# ---------------------------------------------------------------------------

def _lu_factor(a: np.ndarray, pivot_floor: float | None = None):
    """Factor PA = LU in place; returns (lu, perm, swap_count).

    ``pivot_floor`` replaces tiny pivots instead of raising, the standard
    device that lets inverse iteration solve against a nearly singular
    shift.  Without it, a pivot below 1e-13 * ||a||_inf is an error.
    """
    lu = np.array(a, dtype=complex)
    n = lu.shape[0]
    anorm = float(np.max(np.sum(np.abs(lu), axis=1))) if n else 0.0
    perm = np.arange(n)
    swaps = 0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            swaps += 1
        pivot = lu[k, k]
        if pivot_floor is not None:
            if abs(pivot) < pivot_floor:
                lu[k, k] = pivot = complex(pivot_floor)
        elif abs(pivot) < 1e-13 * anorm or pivot == 0:
            raise SingularMatrixError(
                f"matrix singular to working precision (pivot at step {k})")
        if k + 1 < n:
            lu[k + 1:, k] /= pivot
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, swaps


def _lu_solve_factored(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b[perm], dtype=complex)
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= lu[i, i + 1:] @ x[i + 1:]
        x[i] /= lu[i, i]
    return x


def lu_solve(a, b) -> np.ndarray:
    """Solve a x = b by LU with partial pivoting; b may be a vector or matrix."""
    am = as_matrix(a)
    _require_square(am)
    barr = np.array(b, dtype=complex)
    vector_rhs = barr.ndim == 1
    if vector_rhs:
        barr = barr[:, None]
    if barr.shape[0] != am.shape[0]:
        raise PreconditionError("right-hand side row count must match the matrix")
    lu, perm, _ = _lu_factor(am)
    x = _lu_solve_factored(lu, perm, barr)
    return x[:, 0] if vector_rhs else x


def invert(a) -> np.ndarray:
    am = as_matrix(a)
    _require_square(am)
    return lu_solve(am, np.eye(am.shape[0], dtype=complex))


def determinant(a) -> complex:
    """Determinant from the LU factors (0 for matrices the pivoting rejects)."""
    am = as_matrix(a)
    _require_square(am)
    try:
        lu, _, swaps = _lu_factor(am)
    except SingularMatrixError:
        return 0j
    det = complex((-1) ** swaps)
    for d in np.diag(lu):
        det *= d
    return det


# ---------------------------------------------------------------------------
# Operator (spectral) norm by power iteration on a^H a
# ---------------------------------------------------------------------------

def operator_norm(a, rel_tol: float = 1e-11, max_iter: int = 100_000) -> float:
    """Largest singular value of ``a``.

    Power iteration on the Hermitian product a^H a from a seeded random
    start.  Convergence is certified by the Rayleigh-quotient residual
    r = ||Bx - theta x||: at acceptance there is an eigenvalue of B in
    [theta - r, theta + r] and theta never exceeds the true maximum, so
    the returned sqrt(theta) carries relative error at most ~rel_tol.
    Near-degenerate top singular values converge through the same
    criterion because the quotient lands inside the top cluster.
    """
    am = as_matrix(a)
    b = am.conj().T @ am
    n = b.shape[0]
    rng = np.random.Generator(np.random.PCG64(_NORM_SEED))
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.sqrt(np.sum(np.abs(x) ** 2))
    theta = 0.0
    for _ in range(max_iter):
        y = b @ x
        theta = float((x.conj() @ y).real)
        r = float(np.sqrt(np.sum(np.abs(y - theta * x) ** 2)))
        if r <= rel_tol * theta:
            return float(np.sqrt(max(theta, 0.0)))
        ny = float(np.sqrt(np.sum(np.abs(y) ** 2)))
        if ny == 0.0:
            return 0.0
        x = y / ny
    # Rayleigh quotients only grow under power iteration: best lower bound.
    return float(np.sqrt(max(theta, 0.0)))


def condition_number(c) -> float:
    """||c|| * ||c^-1|| in the Euclidean operator norm; always >= 1."""
    cm = as_matrix(c)
    _require_square(cm)
    kappa = operator_norm(cm) * operator_norm(invert(cm))
    return max(kappa, 1.0)


# ---------------------------------------------------------------------------
# Nonsymmetric eigendecomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues with a unit-column eigenbasis and its explicit inverse.

    ``residual`` is ||A C - C diag(lambda)||_F, guaranteed at most
    ``tol`` * ||A||_F for the tolerance declared at construction.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    basis_inverse: np.ndarray
    residual: float
    tol: float

    def __post_init__(self):
        for arr in (self.eigenvalues, self.basis, self.basis_inverse):
            arr.flags.writeable = False

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def _hessenberg(a: np.ndarray) -> np.ndarray:
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        nx = float(np.sqrt(np.sum(np.abs(x) ** 2)))
        if nx == 0.0:
            continue
        v = x.copy()
        phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        v[0] += phase * nx
        vn = float(np.sqrt(np.sum(np.abs(v) ** 2)))
        if vn == 0.0:
            continue
        v /= vn
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(a: complex, b: complex):
    if b == 0:
        return 1.0, 0.0 + 0.0j
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    r = np.hypot(abs(a), abs(b))
    return abs(a) / r, (a / abs(a)) * np.conj(b) / r


def _eig_2x2(m: np.ndarray):
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    half_tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c + 0j)
    l1 = half_tr + disc
    l2 = half_tr - disc
    if abs(l2) > abs(l1):
        l1, l2 = l2, l1
    if l1 != 0:
        l2 = (a * d - b * c) / l1  # product form avoids cancellation
    return l1, l2


def _qr_eigenvalues(h: np.ndarray, max_sweeps: int) -> np.ndarray:
    n = h.shape[0]
    eig = np.empty(n, dtype=complex)
    hnorm = frobenius(h) or 1.0
    hi = n
    total = 0
    stagnant = 0
    while hi > 0:
        if hi == 1:
            eig[0] = h[0, 0]
            break
        lo = hi - 1
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = hnorm
            if abs(h[lo, lo - 1]) <= _EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi - 1:
            eig[hi - 1] = h[hi - 1, hi - 1]
            hi -= 1
            stagnant = 0
            continue
        if lo == hi - 2:
            eig[hi - 2], eig[hi - 1] = _eig_2x2(h[hi - 2:hi, hi - 2:hi])
            hi -= 2
            stagnant = 0
            continue
        total += 1
        stagnant += 1
        if total > max_sweeps:
            raise ConvergenceError(
                f"QR iteration exceeded {max_sweeps} sweeps without deflating")
        if stagnant % 10 == 0:
            shift = h[hi - 1, hi - 1] + 0.75 * abs(h[hi - 1, hi - 2])
        else:
            l1, l2 = _eig_2x2(h[hi - 2:hi, hi - 2:hi])
            tgt = h[hi - 1, hi - 1]
            shift = l1 if abs(l1 - tgt) <= abs(l2 - tgt) else l2
        for k in range(lo, hi):
            h[k, k] -= shift
        rots = []
        for k in range(lo, hi - 1):
            c, s = _givens(h[k, k], h[k + 1, k])
            rots.append((c, s))
            rk = h[k, k:hi].copy()
            rk1 = h[k + 1, k:hi].copy()
            h[k, k:hi] = c * rk + s * rk1
            h[k + 1, k:hi] = -np.conj(s) * rk + c * rk1
        for k in range(lo, hi - 1):
            c, s = rots[k - lo]
            r1 = min(k + 2, hi)
            ck = h[lo:r1, k].copy()
            ck1 = h[lo:r1, k + 1].copy()
            h[lo:r1, k] = c * ck + np.conj(s) * ck1
            h[lo:r1, k + 1] = -s * ck + c * ck1
        for k in range(lo, hi):
            h[k, k] += shift
    return eig


def _symmetrize_conjugates(vals: np.ndarray, scale: float) -> np.ndarray:
    """Enforce exact conjugate closure on the spectrum of a real matrix.

    Near-real values are snapped onto the axis; the rest are greedily
    paired with their closest conjugate and both members replaced by the
    exact pair of their average.
    """
    im_tol = 1e-10 * scale
    out = []
    upper = []
    lower = []
    for z in vals:
        if abs(z.imag) <= im_tol:
            out.append(complex(z.real))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    for z in upper:
        if lower:
            j = min(range(len(lower)), key=lambda i: abs(np.conj(lower[i]) - z))
            mate = lower[j]
            if abs(np.conj(mate) - z) <= 1e-6 * scale:
                lower.pop(j)
                avg = 0.5 * (z + np.conj(mate))
                out.append(avg)
                out.append(np.conj(avg))
                continue
        out.append(z)  # unmatched: leave untouched rather than invent a mate
    out.extend(lower)
    return np.array(out, dtype=complex)


def _sort_spectrum(vals: np.ndarray) -> np.ndarray:
    """Descending modulus, then descending real, then descending imaginary.

    Puts each conjugate pair in adjacent positions (+imag first).
    """
    order = sorted(range(len(vals)),
                   key=lambda i: (-abs(vals[i]), -vals[i].real, -vals[i].imag))
    return vals[np.array(order)]


def _cluster_indices(vals: np.ndarray, radius: float) -> list[list[int]]:
    """Transitive grouping of eigenvalues closer than ``radius``."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [sorted(g) for g in groups.values()]


def _eigenspace_basis(a: np.ndarray, lam: complex, m: int, radius: float,
                      scale: float, rng) -> list[np.ndarray]:
    """Inverse iteration for an orthonormal basis of the eigenspace at ``lam``.

    A repeated collapse of the component orthogonal to the vectors already
    found means the eigenspace has fewer than ``m`` dimensions, i.e. the
    matrix is defective to working precision.
    """
    n = a.shape[0]
    shifted = a - lam * np.eye(n, dtype=complex)
    lu, perm, _ = _lu_factor(shifted, pivot_floor=_EPS * max(scale, 1.0))
    resid_target = max(1e-13 * scale, 4.0 * radius)
    basis: list[np.ndarray] = []
    for _ in range(m):
        best_vec = None
        best_resid = np.inf
        collapses = 0
        for _restart in range(3):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x /= np.sqrt(np.sum(np.abs(x) ** 2))
            collapsed = False
            for _round in range(6):
                y = _lu_solve_factored(lu, perm, x)
                pre = float(np.sqrt(np.sum(np.abs(y) ** 2)))
                if not np.isfinite(pre) or pre == 0.0:
                    collapsed = True
                    break
                for _pass in range(2):
                    for q in basis:
                        y = y - (q.conj() @ y) * q
                post = float(np.sqrt(np.sum(np.abs(y) ** 2)))
                if post < 1e-8 * pre:
                    collapsed = True
                    break
                x = y / post
                resid = float(np.sqrt(np.sum(np.abs(a @ x - lam * x) ** 2)))
                if resid < best_resid:
                    best_resid = resid
                    best_vec = x.copy()
                if resid <= resid_target:
                    break
            if best_resid <= resid_target:
                break
            if collapsed:
                collapses += 1
        if collapses >= 3 or best_vec is None:
            raise DefectiveMatrixError(
                f"eigenspace at {lam:.6g} has dimension below multiplicity {m}: "
                "matrix is not diagonalizable to working precision")
        basis.append(best_vec)
    # final polish: one modified Gram-Schmidt pass over the cluster
    for i, v in enumerate(basis):
        for q in basis[:i]:
            v = v - (q.conj() @ v) * q
        nv = float(np.sqrt(np.sum(np.abs(v) ** 2)))
        if nv < 1e-10:
            raise DefectiveMatrixError(
                f"eigenspace basis at {lam:.6g} is numerically dependent")
        basis[i] = v / nv
    return basis


def _fix_phase(c: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus component is real positive."""
    out = c.copy()
    for j in range(c.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        pivot = out[k, j]
        if pivot != 0:
            out[:, j] *= np.conj(pivot) / abs(pivot)
    return out


def eigendecompose_nonsymmetric(a, tol: float = 1e-10,
                                cluster_tol: float = 1e-8) -> EigenDecomposition:
    """Full eigendecomposition of a real square matrix.

    Eigenvalues come from Hessenberg reduction plus shifted QR; complex
    conjugate pairs are emitted adjacently with conjugate eigenvectors.
    Eigenvalues within ``cluster_tol * ||a||_F`` of each other are treated
    as one eigenspace and that eigenspace is orthonormalized, so the basis
    norms are intrinsic to the matrix.  Non-diagonalizable input raises
    ``DefectiveMatrixError``.
    """
    am = as_matrix(a)
    _require_square(am)
    if np.any(am.imag != 0.0):
        raise PreconditionError("eigendecomposition expects real entries")
    n = am.shape[0]
    scale = frobenius(am)
    if scale == 0.0:
        eye = np.eye(n, dtype=complex)
        return EigenDecomposition(np.zeros(n, dtype=complex), eye, eye.copy(),
                                  0.0, tol)

    vals = _qr_eigenvalues(_hessenberg(am), max_sweeps=100 * n)
    vals = _sort_spectrum(_symmetrize_conjugates(vals, scale))

    clusters = _cluster_indices(vals, cluster_tol * scale)
    means = [complex(np.mean(vals[idx])) for idx in clusters]
    radii = [max(abs(vals[i] - mu) for i in idx)
             for idx, mu in zip(clusters, means)]
    im_tol = 1e-10 * scale

    rng = np.random.Generator(np.random.PCG64(_INV_ITER_SEED))
    columns: dict[int, np.ndarray] = {}
    deferred: list[int] = []
    conj_partner: dict[int, int] = {}
    for ci, mu in enumerate(means):
        if mu.imag < -im_tol:
            matches = [cj for cj, nu in enumerate(means)
                       if abs(nu - np.conj(mu)) <= max(cluster_tol * scale, im_tol)]
            if matches:
                conj_partner[ci] = matches[0]
                deferred.append(ci)
                continue
        vecs = _eigenspace_basis(am, mu, len(clusters[ci]), radii[ci], scale, rng)
        for pos, vec in zip(clusters[ci], vecs):
            columns[pos] = vec
    for ci in deferred:
        src = clusters[conj_partner[ci]]
        for pos, src_pos in zip(clusters[ci], src):
            columns[pos] = np.conj(columns[src_pos])

    c = _fix_phase(np.column_stack([columns[i] for i in range(n)]))
    try:
        c_inv = invert(c)
    except SingularMatrixError as exc:
        raise DefectiveMatrixError(
            "eigenvector basis is singular to working precision") from exc

    norm_c_inv = operator_norm(c_inv)
    sigma_min = 1.0 / norm_c_inv if norm_c_inv > 0 else 0.0
    kappa = operator_norm(c) * norm_c_inv
    if sigma_min < SIGMA_MIN_CUTOFF or kappa > KAPPA_CUTOFF:
        raise DefectiveMatrixError(
            f"eigenvector basis is rank deficient (sigma_min={sigma_min:.3e}, "
            f"kappa={kappa:.3e}): matrix is not diagonalizable to working precision")

    identity_err = frobenius(c @ c_inv - np.eye(n))
    if identity_err > 1e-9 * n:
        # the identity floor is ~eps * kappa(C): only near-defective bases land here
        raise NumericalError(
            f"basis inversion check failed: ||C C^-1 - I||_F = {identity_err:.3e} "
            f"(kappa ~ {kappa:.2e}); the eigenbasis is too ill-conditioned to trust")

    residual = frobenius(am @ c - c * vals[None, :])
    if residual > tol * scale:
        raise ConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds "
            f"{tol:.1e} * ||a||_F = {tol * scale:.3e}")
    return EigenDecomposition(vals, c, c_inv, residual, tol)
