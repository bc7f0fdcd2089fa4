"""Robust pole assignment by eigenstructure selection.

Computes a real state-feedback gain K such that eig(A + B K) equals a
prescribed self-conjugate pole set, choosing the closed-loop eigenvectors
to maximize a conditioning measure of the eigenvector basis. The machinery
follows the classical eigenstructure-assignment family (Kautsky, Nichols &
Van Dooren 1985): per pole the admissible eigenvector subspace
{x : (A - lambda I) x in range(B)} is computed from a rank-revealing
factorization, then cyclic sweeps re-pick each eigenvector (conjugate pairs
jointly) as the best-conditioned choice given the others.

The conditioning objective is |det(Xhat)| with unit-norm columns, which is
invariant under column rescaling and non-decreasing across sweep updates by
construction. K is recovered from the real block form of X Lambda X^-1, so
it is exactly real for any self-conjugate pole set.

References
----------
.. [1] J. Kautsky, N.K. Nichols, P. Van Dooren, "Robust pole assignment in
   linear state feedback", Int. J. Control 41 (1985).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import PlacementFailure, SingularBasis, UncontrollableError, ValidationError
from .linearization import controllability_rank

_RADIUS_ITERS = 30


@dataclass(frozen=True)
class PlacementOptions:
    """Knobs for assign_poles; defaults match the sampled-data loop."""

    tol_place: float = 1e-6        # relative eigenvalue placement tolerance
    abs_tol: float = 1e-8          # absolute floor for near-zero poles
    max_sweeps: int = 20
    min_improve: float = 1e-8      # relative objective improvement to continue
    residual_tol: float = 1e-8     # relative ||B K - (M - A)|| ceiling
    check_controllability: bool = True


@dataclass(frozen=True)
class GainResult:
    """Result of one robust pole assignment."""

    gain: np.ndarray               # m x n real feedback, u = gain @ x
    achieved: np.ndarray           # eig(A + B K), sorted by (re, im)
    robustness: float              # |det| of the unit-column eigenvector basis
    iterations: int                # sweeps executed
    eigenvectors: np.ndarray       # complex basis, for warm-starting the next call
    residual: float                # ||B K - (X L X^-1 - A)||_F
    sweep_objectives: tuple = ()   # objective after init and after each sweep


def validate_pole_set(poles, n=None, require_stable=True, tol=1e-9):
    """Canonicalize a pole list; raise ValidationError on a bad set.

    Checks self-conjugacy (as multisets), optional cardinality, and
    optionally that every real part is strictly negative.
    """
    poles = np.atleast_1d(np.asarray(poles, dtype=complex))
    if not np.all(np.isfinite(poles)):
        raise ValidationError("pole set contains non-finite entries")
    if n is not None and poles.size != n:
        raise ValidationError(f"pole set has {poles.size} entries, expected {n}")
    upper = sorted((z for z in poles if z.imag > tol), key=lambda z: (z.real, z.imag))
    lower = sorted((z for z in poles if z.imag < -tol), key=lambda z: (z.real, -z.imag))
    if len(upper) != len(lower) or any(
            abs(a - np.conj(b)) > tol * max(1.0, abs(a)) for a, b in zip(upper, lower)):
        raise ValidationError("pole set is not closed under conjugation")
    if require_stable and np.any(poles.real >= 0):
        raise ValidationError("pole set must have strictly negative real parts")
    return poles


def _pole_groups(poles, m):
    """Split poles into real slots and conjugate-pair slots.

    Returns (slots, groups): slots is the per-column pole list; each group
    is ("r", [i], lam) or ("c", [i, j], lam) with lam.imag > 0 for pairs.
    Order is deterministic: reals ascending, then pairs by (re, im).
    """
    tol = 1e-9
    reals = sorted(z.real for z in poles if abs(z.imag) <= tol)
    upper = sorted((z for z in poles if z.imag > tol), key=lambda z: (z.real, z.imag))
    slots = []
    groups = []
    for lam in reals:
        groups.append(("r", [len(slots)], complex(lam)))
        slots.append(complex(lam))
    for lam in upper:
        groups.append(("c", [len(slots), len(slots) + 1], lam))
        slots.append(lam)
        slots.append(np.conj(lam))
    # multiplicities beyond the input count cannot get independent eigenvectors
    vals, counts = np.unique(np.round(np.asarray(slots), 12), return_counts=True)
    for v, c in zip(vals, counts):
        if c > m:
            raise PlacementFailure(
                f"pole {v} has multiplicity {c} > rank of the input map ({m})")
    return slots, groups


def _admissible_basis(a, q1, lam, m):
    """Orthonormal basis of {x : (A - lam I) x in range(B)}.

    Computed as the nullspace of Q1^H (A - lam I) where Q1 spans the
    orthogonal complement of range(B). Real poles use real arithmetic so
    their eigenvector columns stay real.
    """
    n = a.shape[0]
    if q1.shape[1] == 0:
        eye = np.eye(n)
        return eye if lam.imag == 0 else eye.astype(complex)
    if lam.imag == 0:
        mat = q1.T @ (a - lam.real * np.eye(n))
    else:
        mat = q1.T @ (a - lam * np.eye(n))
    _, _, vh = np.linalg.svd(mat)
    return vh[mat.shape[0]:].conj().T


def _canonical_sign(v):
    """Fix the free sign/phase of a vector deterministically."""
    k = int(np.argmax(np.abs(v)))
    piv = v[k]
    if piv == 0:
        return v
    if np.iscomplexobj(v):
        return v * (np.conj(piv) / abs(piv))
    return v if piv > 0 else -v


def _best_real_direction(s_basis, c):
    """Real unit v maximizing |c^T S v| (rank-2 symmetric eigenproblem)."""
    a = s_basis.T @ c
    m2 = np.outer(a.real, a.real) + np.outer(a.imag, a.imag)
    vals, vecs = np.linalg.eigh(m2)
    return _canonical_sign(vecs[:, -1])


def _numerical_radius_direction(m_form, w0):
    """Unit w (locally) maximizing |w^H M w|, seeded at w0; monotone."""
    w = w0
    val = np.conj(w) @ m_form @ w
    for _ in range(_RADIUS_ITERS):
        theta = np.angle(val) if val != 0 else 0.0
        herm = 0.5 * (np.exp(-1j * theta) * m_form
                      + np.exp(1j * theta) * m_form.conj().T)
        _, vecs = np.linalg.eigh(herm)
        w_new = vecs[:, -1]
        val_new = np.conj(w_new) @ m_form @ w_new
        if abs(val_new) <= abs(val) * (1.0 + 1e-12):
            break
        w, val = w_new, val_new
    return _canonical_sign(w)


def _log_objective(x):
    sign, logdet = np.linalg.slogdet(x)
    return -np.inf if sign == 0 else logdet


def _pair_volume(qacc, x):
    """Volume of [x, conj(x)] orthogonal to the span accumulated so far."""
    w = np.column_stack([x, np.conj(x)])
    if qacc.shape[1]:
        w = w - qacc @ (qacc.conj().T @ w)
    sv = np.linalg.svd(w, compute_uv=False)
    return float(np.prod(sv))


def _greedy_init(groups, bases, n):
    """Deterministic start: pick each eigenvector as far from the span of
    the previous picks as its subspace allows; pairs get a volume guard so
    a column and its conjugate cannot collapse onto each other."""
    x = np.zeros((n, n), dtype=complex)
    qacc = np.zeros((n, 0), dtype=complex)

    def absorb(col):
        nonlocal qacc
        r = col.astype(complex)
        if qacc.shape[1]:
            r = r - qacc @ (qacc.conj().T @ r)
        nr = np.linalg.norm(r)
        if nr > 1e-12:
            qacc = np.hstack([qacc, (r / nr)[:, None]])

    for kind, idx, lam in groups:
        s_basis = bases[_basis_key(kind, lam)]
        if kind == "r":
            g = qacc.conj().T @ s_basis
            m2 = np.eye(s_basis.shape[1]) - (g.conj().T @ g).real
            _, vecs = np.linalg.eigh(m2)
            v = _canonical_sign(vecs[:, -1])
            col = s_basis @ v
            col = col / np.linalg.norm(col)
            x[:, idx[0]] = col
            absorb(col)
        else:
            t = s_basis - qacc @ (qacc.conj().T @ s_basis) if qacc.shape[1] else s_basis
            _, _, vh = np.linalg.svd(t)
            # pin each direction's free phase before mixing, so the mixed
            # candidate has independent real and imaginary parts even when
            # the singular subspace is degenerate
            v1 = _canonical_sign(vh[0].conj())
            cands = [s_basis @ v1]
            if s_basis.shape[1] >= 2:
                v2 = _canonical_sign(vh[1].conj())
                cands.append(s_basis @ ((v1 + 1j * v2) / np.sqrt(2.0)))
            best, best_vol = None, -1.0
            for cand in cands:
                nc = np.linalg.norm(cand)
                if nc < 1e-12:
                    continue
                cand = _canonical_sign(cand / nc)
                vol = _pair_volume(qacc, cand)
                if vol > best_vol:
                    best, best_vol = cand, vol
            if best is None:
                best = _canonical_sign(s_basis[:, 0] / np.linalg.norm(s_basis[:, 0]))
            x[:, idx[0]] = best
            x[:, idx[1]] = np.conj(best)
            absorb(best)
            absorb(np.conj(best))
    return x


def _basis_key(kind, lam):
    return (kind, complex(lam))


def _warm_init(groups, bases, x_warm, n):
    """Project a previous eigenvector selection onto the new subspaces."""
    x = np.zeros((n, n), dtype=complex)
    for kind, idx, lam in groups:
        s_basis = bases[_basis_key(kind, lam)]
        prev = x_warm[:, idx[0]]
        if kind == "r":
            v = s_basis.T @ prev.real
            nv = np.linalg.norm(v)
            if nv < 1e-6:
                return None
            x[:, idx[0]] = s_basis @ (v / nv)
        else:
            w = s_basis.conj().T @ prev
            nw = np.linalg.norm(w)
            if nw < 1e-6:
                return None
            col = s_basis @ (w / nw)
            x[:, idx[0]] = col
            x[:, idx[1]] = np.conj(col)
    if not np.isfinite(_log_objective(x)):
        return None
    return x


def _real_block_form(slots, groups, x):
    """Real eigenvector matrix and block-diagonal spectrum matrix."""
    n = x.shape[0]
    x_r = np.zeros((n, n))
    lam_r = np.zeros((n, n))
    for kind, idx, lam in groups:
        if kind == "r":
            x_r[:, idx[0]] = x[:, idx[0]].real
            lam_r[idx[0], idx[0]] = lam.real
        else:
            i, j = idx
            x_r[:, i] = x[:, i].real
            x_r[:, j] = x[:, i].imag
            a, b = lam.real, lam.imag
            lam_r[i, i] = a
            lam_r[j, j] = a
            lam_r[i, j] = b
            lam_r[j, i] = -b
    return x_r, lam_r


def eig_match_error(achieved, requested, abs_floor=1e-2):
    """Worst relative multiset distance between two eigenvalue sets.

    Pairs the sets by minimum-cost assignment, then scales each pair's
    distance by max(|requested|, abs_floor): comparing the result against a
    relative tolerance rel makes near-zero poles pass on the absolute bound
    abs_floor * rel instead of an ever-shrinking relative one.
    """
    achieved = np.asarray(achieved, dtype=complex)
    requested = np.asarray(requested, dtype=complex)
    cost = np.abs(achieved[:, None] - requested[None, :])
    rows, cols = linear_sum_assignment(cost)
    errs = cost[rows, cols] / np.maximum(np.abs(requested[cols]), abs_floor)
    return float(errs.max())


def closed_loop_eigs(a, b, k):
    """Eigenvalues of A + B K, sorted by (real, imag) for stable comparison."""
    vals = np.linalg.eigvals(np.asarray(a) + np.asarray(b) @ np.asarray(k))
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def robustness_measure(x):
    """|det| of the column-normalized basis; invariant under column scaling.

    1.0 for any unitary basis (the maximum); approaches 0 as columns become
    parallel.

    Raises
    ------
    SingularBasis
        If the normalized basis has condition number beyond 1/eps.
    """
    x = np.asarray(x)
    norms = np.linalg.norm(x, axis=0)
    if np.any(norms == 0):
        raise SingularBasis("eigenvector basis has a zero column")
    sv = np.linalg.svd(x / norms, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > 1.0 / np.finfo(float).eps:
        raise SingularBasis("eigenvector basis is numerically singular")
    return float(np.prod(sv))


def assign_poles(a, b, poles, opts: PlacementOptions = None,
                 warm_start=None) -> GainResult:
    """Robust pole assignment: real K with eig(A + B K) = poles.

    Parameters
    ----------
    a, b : ndarray
        State and input matrices, n x n and n x m, with B of full column
        rank and (A, B) controllable.
    poles : array_like of complex
        Self-conjugate set of n desired closed-loop eigenvalues.
    opts : PlacementOptions, optional
    warm_start : ndarray, optional
        Eigenvector matrix from a previous call (GainResult.eigenvectors)
        used to seed the sweep; falls back to the greedy start if the
        subspaces moved too much.

    Raises
    ------
    UncontrollableError
        If the controllability matrix is rank-deficient.
    PlacementFailure
        If the residual or the achieved-eigenvalue error stays above
        tolerance, or a pole multiplicity exceeds rank(B).
    """
    opts = opts or PlacementOptions()
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = b.shape
    if a.shape != (n, n):
        raise ValidationError("A must be square and match B's row count")
    poles = validate_pole_set(poles, n=n, require_stable=False)
    if opts.check_controllability and controllability_rank(a, b) < n:
        raise UncontrollableError("(A, B) is not controllable at the numeric rank tolerance")

    q_full, r_full = np.linalg.qr(b, mode="complete")
    q0, q1 = q_full[:, :m], q_full[:, m:]
    r_m = r_full[:m]
    if np.abs(np.diag(r_m)).min() < n * np.finfo(float).eps * max(1.0, np.abs(r_m).max()):
        raise ValidationError("B must have full column rank")

    slots, groups = _pole_groups(poles, m)
    bases = {}
    for kind, _idx, lam in groups:
        key = _basis_key(kind, lam)
        if key not in bases:
            bases[key] = _admissible_basis(a, q1, lam, m)

    x = None
    if warm_start is not None and warm_start.shape == (n, n):
        x = _warm_init(groups, bases, warm_start, n)
    if x is None:
        x = _greedy_init(groups, bases, n)

    log_obj = _log_objective(x)
    trail = [float(np.exp(log_obj))]
    sweeps = 0
    if m > 1 or not np.isfinite(log_obj):
        for _ in range(opts.max_sweeps):
            sweeps += 1
            log_prev = log_obj
            for kind, idx, lam in groups:
                s_basis = bases[_basis_key(kind, lam)]
                try:
                    if kind == "r":
                        c = np.linalg.solve(x.T, _unit(n, idx[0]))
                        v = _best_real_direction(s_basis, c)
                        cand = s_basis @ v
                        cand = cand / np.linalg.norm(cand)
                        old = x[:, idx[0]].copy()
                        x[:, idx[0]] = cand
                        log_new = _log_objective(x)
                        if log_new > log_obj:
                            log_obj = log_new
                        else:
                            x[:, idx[0]] = old
                    else:
                        i, j = idx
                        r_row = np.linalg.solve(x.T, _unit(n, i))
                        s_row = np.linalg.solve(x.T, _unit(n, j))
                        d_form = np.outer(r_row, s_row) - np.outer(s_row, r_row)
                        m_form = (s_basis.T @ d_form @ np.conj(s_basis)).T
                        w0 = s_basis.conj().T @ x[:, i]
                        nw = np.linalg.norm(w0)
                        if nw < 1e-14:
                            continue
                        w = _numerical_radius_direction(m_form, w0 / nw)
                        cand = s_basis @ w
                        nc = np.linalg.norm(cand)
                        if nc < 1e-14:
                            continue
                        cand = cand / nc
                        old_i, old_j = x[:, i].copy(), x[:, j].copy()
                        x[:, i] = cand
                        x[:, j] = np.conj(cand)
                        log_new = _log_objective(x)
                        if log_new > log_obj:
                            log_obj = log_new
                        else:
                            x[:, i], x[:, j] = old_i, old_j
                except np.linalg.LinAlgError:
                    continue
            trail.append(float(np.exp(log_obj)))
            if log_obj <= log_prev + opts.min_improve:
                break
    if not np.isfinite(log_obj):
        raise PlacementFailure("could not find a nonsingular eigenvector basis")

    x_r, lam_r = _real_block_form(slots, groups, x)
    try:
        m_cl = np.linalg.solve(x_r.T, (x_r @ lam_r).T).T
    except np.linalg.LinAlgError as exc:
        raise PlacementFailure("eigenvector basis became singular in recovery") from exc
    rhs = m_cl - a
    k_gain = scipy.linalg.solve_triangular(r_m, q0.T @ rhs)
    residual = np.linalg.norm(b @ k_gain - rhs)
    if residual > opts.residual_tol * max(1.0, np.linalg.norm(rhs)):
        raise PlacementFailure(f"feedback recovery residual {residual:.3e} above tolerance")

    achieved = closed_loop_eigs(a, b, k_gain)
    err = eig_match_error(achieved, poles, abs_floor=opts.abs_tol / opts.tol_place)
    if err > 0.1 * opts.tol_place:
        k_gain, achieved, err = _refine_gain(a, b, k_gain, poles, achieved, err, opts)
    if err > opts.tol_place:
        raise PlacementFailure(
            f"achieved eigenvalues off by {err:.3e} (rel) after {sweeps} sweeps")
    return GainResult(gain=k_gain, achieved=achieved, robustness=float(np.exp(log_obj)),
                      iterations=sweeps, eigenvectors=x, residual=float(residual),
                      sweep_objectives=tuple(trail))


def _refine_gain(a, b, k_gain, poles, achieved, err, opts):
    """First-order Newton touch-up of K for badly conditioned closed loops.

    Uses eigenvalue sensitivities dlam_i = w_i^H B dK v_i / (w_i^H v_i) and
    solves the minimum-norm real dK that moves each achieved eigenvalue onto
    its requested partner. Keeps the best iterate; never makes things worse.
    """
    n, m = b.shape
    poles = np.asarray(poles, dtype=complex)
    for _ in range(3):
        vals, vecs = np.linalg.eig(a + b @ k_gain)
        sv = np.linalg.svd(vecs, compute_uv=False)
        if sv[-1] == 0 or sv[0] / sv[-1] > 1e13:
            break
        wvecs = np.linalg.inv(vecs).conj().T  # rows biorthogonal to vecs columns
        cost = np.abs(vals[:, None] - poles[None, :])
        rows_i, cols_i = linear_sum_assignment(cost)
        dlam = np.zeros(n, dtype=complex)
        dlam[rows_i] = poles[cols_i] - vals[rows_i]
        rows = []
        rhs = []
        for i in range(n):
            wi = wvecs[:, i]
            vi = vecs[:, i]
            denom = wi.conj() @ vi
            gi = np.kron(vi, wi.conj() @ b) / denom  # row: d lam_i / d vec(K^T)...
            if abs(vals[i].imag) <= 1e-12 and abs(dlam[i].imag) <= 1e-12:
                rows.append(gi.real)
                rhs.append(dlam[i].real)
            elif vals[i].imag > 0:
                rows.append(gi.real)
                rhs.append(dlam[i].real)
                rows.append(gi.imag)
                rhs.append(dlam[i].imag)
        g_mat = np.array(rows)
        dk_vec, *_ = np.linalg.lstsq(g_mat, np.array(rhs), rcond=None)
        k_new = k_gain + dk_vec.reshape(n, m).T
        ach_new = closed_loop_eigs(a, b, k_new)
        err_new = eig_match_error(ach_new, poles, abs_floor=opts.abs_tol / opts.tol_place)
        if err_new >= err:
            break
        k_gain, achieved, err = k_new, ach_new, err_new
        if err <= 0.01 * opts.tol_place:
            break
    return k_gain, achieved, err


def _unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e
