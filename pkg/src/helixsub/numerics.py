"""Small dense kernels: finite differences, orthonormal frames, symmetric eigenproblems.

Everything here works on plain numpy arrays. Vectors are 1-d arrays, a
:class:`Subspace` stores an ``n x r`` matrix with orthonormal columns.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NumericalDomain

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOLERANCES",
    "Subspace",
    "default_step",
    "central_diff",
    "second_diff",
    "richardson_hessian",
    "fd_weights",
    "stencil_derivatives",
    "orthonormalize",
    "orthogonal_complement",
    "sym_eig",
]


@dataclass(frozen=True)
class ToleranceProfile:
    """Every tolerance used by the library, in one place.

    Tests and the command line tighten or loosen values through
    :meth:`with_overrides`; nothing else reads module-level constants.
    """

    rank: float = 1e-8
    frenet_rank: float = 1e-6
    unit: float = 1e-8
    normal_check: float = 1e-6
    unit_speed: float = 1e-4
    decomposition: float = 1e-7
    helix_angle: float = 1e-6
    helix_space: float = 1e-6
    inner_product_spread: float = 1e-4
    geodesic: float = 1e-6
    normal_curvature: float = 1e-6
    line_of_curvature: float = 1e-4
    separation: float = 1e-3
    tangency: float = 1e-6
    orthogonality: float = 1e-6
    dependence: float = 1e-6
    eigenvalue_floor: float = 1e-6
    umbilic_gap: float = 1e-6
    not_a_line_fraction: float = 0.5

    def with_overrides(self, **kwargs):
        unknown = set(kwargs) - set(self.__dataclass_fields__)
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in kwargs.items()})

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_TOLERANCES = ToleranceProfile()


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n given by an orthonormal basis (columns)."""

    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-d array (n x r)")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def projector(self):
        return self.basis @ self.basis.T

    def project(self, x):
        return self.basis @ (self.basis.T @ x)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def default_step(x, scale=1e-5):
    return scale * max(1.0, float(np.linalg.norm(x)))


def _evaluate(f, x):
    y = np.atleast_1d(np.asarray(f(x), dtype=float))
    if not np.all(np.isfinite(y)):
        raise NumericalDomain(f"non-finite evaluation at {np.asarray(x).tolist()}")
    return y


def central_diff(f, x, dir, h):
    """Return ``(f(x + h e_dir) - f(x - h e_dir)) / 2h``."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = np.zeros_like(x)
    e[dir] = h
    return (_evaluate(f, x + e) - _evaluate(f, x - e)) / (2.0 * h)


def second_diff(f, x, dir_i, dir_j, h, f0=None):
    """Second partial derivative by the O(h^2) central stencil.

    The mixed stencil uses the four diagonal neighbours, so the result does
    not depend on the order of ``dir_i`` and ``dir_j``.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if dir_i == dir_j:
        e = np.zeros_like(x)
        e[dir_i] = h
        if f0 is None:
            f0 = _evaluate(f, x)
        return (_evaluate(f, x + e) - 2.0 * f0 + _evaluate(f, x - e)) / (h * h)
    ei = np.zeros_like(x)
    ej = np.zeros_like(x)
    ei[dir_i] = h
    ej[dir_j] = h
    return (
        _evaluate(f, x + ei + ej)
        - _evaluate(f, x + ei - ej)
        - _evaluate(f, x - ei + ej)
        + _evaluate(f, x - ei - ej)
    ) / (4.0 * h * h)


def richardson_hessian(f, x, h):
    """All second partials of ``f`` at ``x`` as an ``(m, m, n)`` array.

    One Richardson step on :func:`second_diff` (steps ``h`` and ``h/2``)
    removes the h^2 term, so ``h`` can be large enough to keep round-off
    near 1e-10 at unit scale.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = x.size
    f0 = _evaluate(f, x)
    out = np.empty((m, m, f0.size))
    for i in range(m):
        for j in range(i, m):
            coarse = second_diff(f, x, i, j, h, f0)
            fine = second_diff(f, x, i, j, 0.5 * h, f0)
            out[i, j] = out[j, i] = (4.0 * fine - coarse) / 3.0
    return out


@lru_cache(maxsize=None)
def fd_weights(offsets, order):
    """Finite-difference weights on integer ``offsets`` for derivative ``order``.

    Fornberg's recursion carried out in exact rational arithmetic, so the
    weights are reproducible to the last bit.
    """
    nodes = [Fraction(o) for o in offsets]
    n = len(nodes)
    if order >= n:
        raise ValueError("need more nodes than the derivative order")
    c = [[Fraction(0)] * (order + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = nodes[0]
    for i in range(1, n):
        mn = min(i, order)
        c2 = Fraction(1)
        c5 = c4
        c4 = nodes[i]
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(float(c[i][order]) for i in range(n))


def stencil_derivatives(f, x, max_order, h, half_width=5, lo=None, hi=None):
    """Derivatives ``0..max_order`` of a curve ``f`` at scalar ``x``.

    Uses a ``2*half_width + 1`` point stencil. When ``lo``/``hi`` are given
    the stencil is shifted (and if necessary shrunk) to stay inside them.
    Returns an array of shape ``(max_order + 1, dim)``.
    """
    npts = 2 * half_width + 1
    if max_order >= npts:
        raise ValueError("stencil too small for the requested order")
    x = float(x)
    if lo is not None and hi is not None:
        h = min(h, (hi - lo) / (npts - 1))
    start = -half_width
    if lo is not None and x + start * h < lo:
        start = int(np.ceil((lo - x) / h - 1e-12))
    if hi is not None and x + (start + npts - 1) * h > hi:
        start = int(np.floor((hi - x) / h + 1e-12)) - (npts - 1)
    offsets = tuple(range(start, start + npts))
    values = np.array([_evaluate(f, x + o * h) for o in offsets])
    out = np.empty((max_order + 1, values.shape[1]))
    for k in range(max_order + 1):
        w = np.asarray(fd_weights(offsets, k))
        out[k] = (w @ values) / h**k
    return out


def orthonormalize(vectors, tol=DEFAULT_TOLERANCES.rank, ambient_dim=None):
    """Modified Gram-Schmidt with a second orthogonalisation pass.

    Vectors whose residual norm after projection falls below ``tol`` are
    dropped. Returns ``(Subspace, rank)``.
    """
    vectors = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise ValueError("ambient_dim is required for an empty vector list")
        ambient_dim = vectors[0].size
    kept = []
    for v in vectors:
        if v.size != ambient_dim:
            raise ValueError("all vectors must have the same dimension")
        w = v.copy()
        for _ in range(2):
            for q in kept:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if norm < tol:
            continue
        kept.append(w / norm)
    basis = np.column_stack(kept) if kept else np.zeros((ambient_dim, 0))
    return Subspace(basis), len(kept)


def _fix_signs(vectors):
    # largest-magnitude entry of every column made positive
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def orthogonal_complement(s, ambient_dim=None):
    if ambient_dim is None:
        ambient_dim = s.ambient_dim
    if s.dim > ambient_dim:
        raise ValueError("subspace larger than the ambient space")
    k = ambient_dim - s.dim
    if k == 0:
        return Subspace(np.zeros((ambient_dim, 0)))
    comp = np.eye(ambient_dim) - s.basis @ s.basis.T
    w, v = np.linalg.eigh(comp)
    basis = v[:, -k:]
    # one re-orthogonalisation against s for round-off
    basis = basis - s.basis @ (s.basis.T @ basis)
    basis, _ = np.linalg.qr(basis)
    return Subspace(_fix_signs(basis))


def sym_eig(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    The input is symmetrised first. Each eigenvector is signed so that its
    largest-magnitude entry is positive.
    """
    m = np.asarray(m, dtype=float)
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    return w, _fix_signs(v)
