"""Immersed patches and their pointwise extrinsic geometry.

An :class:`ImmersedPatch` wraps a map ``f: U -> R^n`` on a box ``U`` in
``R^m``. At a parameter point ``u`` we build the orthonormal tangent and
normal frames, the second fundamental form ``V(X, Y)`` (the normal part of
the ambient second derivative) and the shape operator ``A_N`` with the
sign convention ``A_N(X) = tang(-dN(X))``, so that
``<A_N x, y> = <V(x, y), N>``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NotNormal, OutOfDomain, RankDeficient, SingularMetric
from .numerics import (
    DEFAULT_TOLERANCES,
    Subspace,
    central_diff,
    default_step,
    orthogonal_complement,
    orthonormalize,
    richardson_hessian,
    sym_eig,
)

__all__ = [
    "ImmersedPatch",
    "PointFrame",
    "ShapeOperatorData",
    "jacobian",
    "hessian",
    "point_frame",
    "unit_normal",
    "second_fundamental_form",
    "shape_operator",
    "christoffel",
    "gauss_split",
]


@dataclass(frozen=True)
class ImmersedPatch:
    """A smooth map from a box in R^m into R^n.

    Parameters
    ----------
    map : callable
        ``map(u) -> array of shape (n,)``.
    param_dim, ambient_dim : int
        ``m`` and ``n`` with ``1 <= m < n``.
    domain : sequence of (lo, hi)
        One interval per parameter.
    fd_step : float, optional
        Step for first derivatives; default ``1e-5 * max(1, |u|)``.
    hessian_step : float
        Coarse step of the Richardson second-derivative stencil.
    jacobian_fn, hessian_fn : callable, optional
        Analytic derivatives, ``(n, m)`` and ``(m, m, n)`` arrays.
    """

    map: Callable = field(repr=False)
    param_dim: int
    ambient_dim: int
    domain: tuple
    fd_step: Optional[float] = None
    hessian_step: float = 4e-3
    jacobian_fn: Optional[Callable] = field(default=None, repr=False)
    hessian_fn: Optional[Callable] = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if not 1 <= self.param_dim < self.ambient_dim:
            raise ValueError("need 1 <= param_dim < ambient_dim")
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(dom) != self.param_dim or any(lo >= hi for lo, hi in dom):
            raise ValueError("domain must be one non-empty interval per parameter")
        object.__setattr__(self, "domain", dom)

    def __call__(self, u):
        return np.asarray(self.map(np.asarray(u, dtype=float)), dtype=float)

    @property
    def codimension(self):
        return self.ambient_dim - self.param_dim

    def contains(self, u, slack=1e-12):
        u = np.asarray(u, dtype=float)
        return all(
            lo - slack * max(1.0, abs(lo)) <= x <= hi + slack * max(1.0, abs(hi))
            for x, (lo, hi) in zip(u, self.domain)
        )

    def check(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if u.shape != (self.param_dim,):
            raise ValueError(f"expected {self.param_dim} parameters, got shape {u.shape}")
        if not self.contains(u):
            raise OutOfDomain(f"{u.tolist()} outside domain {list(self.domain)}")
        return u


@dataclass(frozen=True)
class PointFrame:
    """Tangent and normal frames of a patch at one parameter point.

    ``coords`` is the ``m x m`` matrix ``C`` with ``tangent.basis = J @ C``;
    it converts orthonormal-frame coordinates into chart coordinates.
    """

    u: np.ndarray
    p: np.ndarray
    jacobian: np.ndarray = field(repr=False)
    tangent: Subspace
    normal: Subspace
    P_tan: np.ndarray = field(repr=False)
    coords: np.ndarray = field(repr=False)

    @property
    def P_norm(self):
        return np.eye(self.p.size) - self.P_tan

    def chart_coords(self, X):
        """Chart coordinates ``x`` with ``J x`` equal to the tangent part of ``X``."""
        return self.coords @ (self.tangent.basis.T @ X)

    def frame_coords(self, x):
        """Orthonormal-frame coordinates of the chart vector ``x``."""
        return self.tangent.basis.T @ (self.jacobian @ x)


@dataclass(frozen=True)
class ShapeOperatorData:
    frame: PointFrame
    N: np.ndarray
    A: np.ndarray
    principal_curvatures: np.ndarray
    principal_vectors: np.ndarray
    principal_coords: np.ndarray = field(repr=False)


def jacobian(patch, u):
    """``n x m`` Jacobian; analytic when the patch provides it, else central differences."""
    u = patch.check(u)
    if patch.jacobian_fn is not None:
        return np.asarray(patch.jacobian_fn(u), dtype=float).reshape(
            patch.ambient_dim, patch.param_dim
        )
    h = patch.fd_step if patch.fd_step is not None else default_step(u)
    return np.column_stack([central_diff(patch, u, j, h) for j in range(patch.param_dim)])


def hessian(patch, u):
    """All second partials as an ``(m, m, n)`` array."""
    u = patch.check(u)
    if patch.hessian_fn is not None:
        return np.asarray(patch.hessian_fn(u), dtype=float).reshape(
            patch.param_dim, patch.param_dim, patch.ambient_dim
        )
    return richardson_hessian(patch, u, patch.hessian_step)


def point_frame(patch, u, tolerances=DEFAULT_TOLERANCES):
    """Orthonormal tangent frame (Gram-Schmidt on the Jacobian) and its complement.

    For hypersurfaces the single normal is oriented so that
    ``det[J | N] > 0``.
    """
    u = patch.check(u)
    J = jacobian(patch, u)
    scale = max(1.0, float(np.linalg.norm(J)))
    tangent, rank = orthonormalize(J.T, tol=tolerances.rank * scale)
    if rank < patch.param_dim:
        raise RankDeficient(f"Jacobian rank {rank} < {patch.param_dim} at u={u.tolist()}", u=u)
    normal = orthogonal_complement(tangent, patch.ambient_dim)
    if patch.codimension == 1 and np.linalg.det(np.column_stack([J, normal.basis])) < 0:
        normal = Subspace(-normal.basis)
    E = tangent.basis
    coords = np.linalg.solve(J.T @ J, J.T @ E)
    return PointFrame(
        u=u, p=patch(u), jacobian=J, tangent=tangent, normal=normal, P_tan=E @ E.T, coords=coords
    )


def unit_normal(patch, u, frame=None):
    """Oriented unit normal of a hypersurface patch."""
    if patch.codimension != 1:
        raise ValueError("unit_normal is defined for hypersurfaces only")
    frame = frame if frame is not None else point_frame(patch, u)
    return frame.normal.basis[:, 0].copy()


def _contract(H, x, y):
    return np.einsum("i,j,ijk->k", x, y, H)


def second_fundamental_form(patch, u, x, y, frame=None, hess=None):
    """``V(x, y)``: normal part of the ambient second derivative along chart vectors."""
    frame = frame if frame is not None else point_frame(patch, u)
    H = hess if hess is not None else hessian(patch, u)
    full = _contract(H, np.asarray(x, float), np.asarray(y, float))
    return full - frame.P_tan @ full


def gauss_split(patch, u, x, y, frame=None, hess=None):
    """Split ``D_x y`` (constant chart fields) into ``(D_x y, V(x, y))``."""
    frame = frame if frame is not None else point_frame(patch, u)
    H = hess if hess is not None else hessian(patch, u)
    full = _contract(H, np.asarray(x, float), np.asarray(y, float))
    tangential = frame.P_tan @ full
    return tangential, full - tangential


def shape_operator(patch, u, N, tolerances=DEFAULT_TOLERANCES, frame=None, hess=None):
    """Shape operator ``A_N`` in the orthonormal tangent frame, with its eigensystem.

    ``A[i, j] = <V(t_i, t_j), N>``; eigenvalues are the principal
    curvatures, ascending.
    """
    frame = frame if frame is not None else point_frame(patch, u, tolerances)
    N = np.asarray(N, dtype=float)
    if abs(np.linalg.norm(N) - 1.0) > max(tolerances.unit, 1e-8):
        raise NotNormal(f"|N| = {np.linalg.norm(N):.3e} is not 1")
    if np.linalg.norm(frame.P_tan @ N) > tolerances.normal_check:
        raise NotNormal(f"N has tangential part {np.linalg.norm(frame.P_tan @ N):.3e}")
    H = hess if hess is not None else hessian(patch, frame.u)
    HN = H @ N
    A = frame.coords.T @ HN @ frame.coords
    A = 0.5 * (A + A.T)
    curv, vecs = sym_eig(A)
    return ShapeOperatorData(
        frame=frame,
        N=N,
        A=A,
        principal_curvatures=curv,
        principal_vectors=frame.tangent.basis @ vecs,
        principal_coords=frame.coords @ vecs,
    )


def christoffel(patch, u, frame=None, hess=None):
    """Christoffel symbols ``gamma[k, i, j]`` of the induced metric ``g = J^T J``.

    Uses ``d_k g_ij = <f_ik, f_j> + <f_i, f_jk>``, which collapses the
    classical formula to ``gamma^k_ij = g^{kl} <f_ij, f_l>``.
    """
    u = patch.check(u)
    J = frame.jacobian if frame is not None else jacobian(patch, u)
    g = J.T @ J
    if np.linalg.det(g) < 1e-12:
        raise SingularMetric(f"det g = {np.linalg.det(g):.3e} at u={u.tolist()}")
    H = hess if hess is not None else hessian(patch, u)
    lowered = np.einsum("ijn,nl->lij", H, J)
    return np.linalg.solve(g, lowered.reshape(patch.param_dim, -1)).reshape(
        patch.param_dim, patch.param_dim, patch.param_dim
    )
