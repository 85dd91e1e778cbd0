"""Helix directions: fixed unit vectors at a constant angle to every tangent space.

Angles are measured to the tangent *space*: ``angle = arcsin |(I - P)d|``
with ``P`` the tangent projector, so a tangent direction has angle 0 and a
normal one angle pi/2. In the decomposition ``d = cos(theta) xi +
sin(theta) T_d`` the angle ``theta`` is the complementary one,
``cos(theta) = |(I - P)d|``.
"""

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NotInSpace
from .manifold import point_frame
from .numerics import DEFAULT_TOLERANCES, Subspace, orthogonal_complement, orthonormalize, sym_eig

__all__ = [
    "DirectionDecomposition",
    "HelixDirectionReport",
    "HelixSpace",
    "HelixAngle",
    "grid_samples",
    "tangent_angle",
    "decompose_direction",
    "is_helix_direction",
    "estimate_helix_space",
    "helix_angle_of",
    "deflation_seed",
]


@dataclass(frozen=True)
class DirectionDecomposition:
    d: np.ndarray
    theta: float
    xi: np.ndarray
    t_dir: np.ndarray
    normal_degenerate: bool
    tangent_degenerate: bool

    def reconstruct(self):
        return np.cos(self.theta) * self.xi + np.sin(self.theta) * self.t_dir


@dataclass(frozen=True)
class HelixDirectionReport:
    d: np.ndarray
    angles: np.ndarray
    mean: float
    stddev: float
    spread: float
    is_helix: bool
    tol: float


@dataclass(frozen=True)
class HelixSpace:
    basis: Subspace
    residual: float
    sample_count: int
    samples: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.basis.dim


class HelixAngle(NamedTuple):
    angle: float
    stddev: float


def grid_samples(box, count=None):
    """Cell-centred tensor grid over ``box`` with about ``count`` points.

    Each axis gets ``floor(count ** (1/m))`` points (at least 3); the
    default count is ``8^m`` capped at 512.
    """
    m = len(box)
    if count is None:
        count = min(8**m, 512)
    per_axis = max(3, int(count ** (1.0 / m) + 1e-9))
    axes = [lo + (np.arange(per_axis) + 0.5) * (hi - lo) / per_axis for lo, hi in box]
    return np.array(list(itertools.product(*axes)))


def _check_unit(d, tolerances):
    d = np.asarray(d, dtype=float)
    if abs(np.linalg.norm(d) - 1.0) > tolerances.unit:
        raise ValueError(f"direction must be a unit vector, |d| = {np.linalg.norm(d)!r}")
    return d


def tangent_angle(frame, d, tolerances=DEFAULT_TOLERANCES):
    d = _check_unit(d, tolerances)
    normal_part = d - frame.P_tan @ d
    return float(np.arcsin(np.clip(np.linalg.norm(normal_part), 0.0, 1.0)))


def decompose_direction(frame, d, tolerances=DEFAULT_TOLERANCES):
    """Split ``d`` into unit normal and tangent directions and the angle ``theta``.

    A part shorter than ``tolerances.decomposition`` is flagged degenerate
    and returned as the zero vector.
    """
    d = _check_unit(d, tolerances)
    p_t = frame.P_tan @ d
    p_n = d - p_t
    nt, nn = np.linalg.norm(p_t), np.linalg.norm(p_n)
    tol = tolerances.decomposition
    normal_degenerate = bool(nn < tol)
    tangent_degenerate = bool(nt < tol)
    xi = np.zeros_like(d) if normal_degenerate else p_n / nn
    t_dir = np.zeros_like(d) if tangent_degenerate else p_t / nt
    if normal_degenerate:
        theta = np.pi / 2
    elif tangent_degenerate:
        theta = 0.0
    else:
        theta = float(np.arctan2(nt, nn))
    return DirectionDecomposition(d, theta, xi, t_dir, normal_degenerate, tangent_degenerate)


def _frames(patch, sample_us, tolerances):
    return [point_frame(patch, u, tolerances) for u in sample_us]


def is_helix_direction(patch, d, sample_us, tol=DEFAULT_TOLERANCES.helix_angle, tolerances=DEFAULT_TOLERANCES, frames=None):
    sample_us = np.atleast_2d(sample_us)
    if len(sample_us) < 8:
        raise ValueError("need at least 8 sample points")
    frames = frames if frames is not None else _frames(patch, sample_us, tolerances)
    angles = np.array([tangent_angle(f, d, tolerances) for f in frames])
    spread = float(angles.max() - angles.min())
    return HelixDirectionReport(
        d=np.asarray(d, dtype=float),
        angles=angles,
        mean=float(angles.mean()),
        stddev=float(angles.std()),
        spread=spread,
        is_helix=bool(spread <= tol),
        tol=tol,
    )


def _violation(B, M):
    """``max_i |B^T M_i B|_2`` over the stacked variations ``M``."""
    if B.shape[1] == 0:
        return 0.0
    R = np.einsum("ai,kab,bj->kij", B, M, B)
    return float(np.max(np.linalg.norm(R, ord=2, axis=(1, 2))))


def deflation_seed(M, tol):
    """Greedy deflation: repeatedly drop the top eigenvector of ``sum (P M_i P)^2``.

    Cheap, but it can discard a genuine helix direction that is strongly
    coupled to the varying directions (the cone axis is one), so it is only
    used to seed :func:`estimate_helix_space`.
    """
    n = M.shape[1]
    W = np.eye(n)
    while W.shape[1] and _violation(W, M) > tol:
        R = np.einsum("ai,kab,bj->kij", W, M, W)
        A = np.einsum("kij,kjl->il", R, R)
        _, vecs = sym_eig(A)
        W = W @ vecs[:, :-1]
    return W


def _reduced_forms(M):
    """Symmetric forms ``Q_a`` with ``sum_a |B^T Q_a B|_F^2 = sum_i |B^T M_i B|_F^2``."""
    k, n, _ = M.shape
    X = M.reshape(k, n * n)
    _, s, Vt = np.linalg.svd(X, full_matrices=False)
    keep = s > 1e-14 * max(1.0, s[0]) if s.size else np.zeros(0, bool)
    Q = (s[keep, None] * Vt[keep]).reshape(-1, n, n)
    return 0.5 * (Q + Q.transpose(0, 2, 1))


def _isotropic_search(B, Q, max_iter=200):
    """Levenberg-Marquardt on the Grassmannian for ``B^T Q_a B = 0``."""
    n, r = B.shape
    iu = np.triu_indices(r)
    weights = np.tile(np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0)), len(Q))

    def residual(B):
        S = np.einsum("ai,kab,bj->kij", B, Q, B)
        return S[:, iu[0], iu[1]].ravel() * weights

    res = residual(B)
    cost = res @ res
    mu = 1e-3 * max(cost, 1e-30)
    for _ in range(max_iter):
        if cost < 1e-30:
            break
        Bp = orthogonal_complement(Subspace(B), n).basis
        G = np.einsum("ap,kab,bj->kpj", Bp, Q, B)
        cols = []
        for p in range(n - r):
            for q in range(r):
                dS = np.zeros((len(Q), r, r))
                dS[:, q, :] += G[:, p, :]
                dS[:, :, q] += G[:, p, :]
                cols.append(dS[:, iu[0], iu[1]].ravel() * weights)
        Jm = np.column_stack(cols)
        JtJ = Jm.T @ Jm
        g = Jm.T @ res
        improved = False
        for _ in range(12):
            step = np.linalg.solve(JtJ + mu * np.eye(JtJ.shape[0]), -g)
            C = step.reshape(n - r, r)
            B_new, _ = np.linalg.qr(B + Bp @ C)
            res_new = residual(B_new)
            cost_new = res_new @ res_new
            if cost_new < cost:
                improved = True
                break
            mu *= 10.0
        if not improved:
            break
        rel = (cost - cost_new) / cost
        B, res, cost = B_new, res_new, cost_new
        mu = max(mu / 10.0, 1e-30)
        if rel < 1e-10:
            break
    return B


def _canonical_basis(B):
    """A reproducible orthonormal basis of span(B), aligned with coordinate axes when possible."""
    P = B @ B.T
    order = np.argsort(-np.linalg.norm(P, axis=0), kind="stable")
    sub, _ = orthonormalize([P[:, j] for j in order], tol=1e-6)
    basis = sub.basis[:, : B.shape[1]]
    idx = np.argmax(np.abs(basis), axis=0)
    signs = np.sign(basis[idx, np.arange(basis.shape[1])])
    signs[signs == 0] = 1.0
    return basis * signs


def estimate_helix_space(
    patch, sample_us, tol=DEFAULT_TOLERANCES.helix_space, tolerances=DEFAULT_TOLERANCES, seed=0, starts=12
):
    """Largest subspace ``W`` on which every tangent projector has the same restriction.

    With ``M_i = P_i - mean(P)`` the returned ``W`` satisfies
    ``max_i |P_W M_i P_W|_2 <= tol``, so every unit ``d`` in ``W`` keeps
    ``d^T P_i d`` within ``2 tol`` across the samples. Dimensions are
    tried from ``n`` downwards; each is searched by Levenberg-Marquardt
    from the deflation seed and ``starts`` seeded random starts.
    """
    sample_us = np.atleast_2d(sample_us)
    if len(sample_us) < 16:
        raise ValueError("need at least 16 sample points")
    n = patch.ambient_dim
    P = np.array([f.P_tan for f in _frames(patch, sample_us, tolerances)])
    M = P - P.mean(axis=0)
    Q = _reduced_forms(M)
    rng = np.random.default_rng(seed)
    seed_W = deflation_seed(M, tol)
    found = np.zeros((n, 0))
    for r in range(n, 0, -1):
        if r == n:
            candidates = [np.eye(n)]
        else:
            candidates = []
            if seed_W.shape[1] >= r:
                candidates.append(seed_W[:, :r])
            A = np.einsum("kij,kjl->il", M, M)
            candidates.append(sym_eig(A)[1][:, :r])
            for _ in range(starts):
                candidates.append(np.linalg.qr(rng.standard_normal((n, r)))[0])
        hit = None
        for B0 in candidates:
            B = B0 if r == n or len(Q) == 0 else _isotropic_search(B0, Q)
            if _violation(B, M) <= tol:
                hit = B
                break
        if hit is not None:
            found = hit
            break
    basis = _canonical_basis(found) if found.shape[1] else found
    return HelixSpace(
        basis=Subspace(basis),
        residual=_violation(basis, M),
        sample_count=len(sample_us),
        samples=sample_us,
    )


def helix_angle_of(space, patch, d, tolerances=DEFAULT_TOLERANCES):
    """Mean angle of ``d`` (a unit vector in the helix space) to the tangent spaces."""
    d = _check_unit(d, tolerances)
    if np.linalg.norm(d - space.basis.project(d)) > 1e-6:
        raise NotInSpace("direction is not in the helix space")
    angles = np.array([tangent_angle(f, d, tolerances) for f in _frames(patch, space.samples, tolerances)])
    return HelixAngle(float(angles.mean()), float(angles.std()))
