"""Curves in R^n and curves on patches.

Derivatives of callable curves come from a wide (11 point) finite
difference stencil unless the curve supplies analytic ones. Frenet
curvatures are read off the derivative of the orthonormal frame,
``k_i = <V_{i+1}, dV_i/ds>``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateFrame, IrregularCurve, NotUnitSpeed
from .manifold import hessian, point_frame, second_fundamental_form
from .numerics import DEFAULT_TOLERANCES, fd_weights, stencil_derivatives

__all__ = [
    "AmbientCurve",
    "ParamCurve",
    "FrenetApparatus",
    "SlantHelixReport",
    "reparametrize_unit_speed",
    "frenet",
    "frenet_frame",
    "slant_helix_test",
    "normal_curvature",
    "geodesic_residual",
    "curve_kinematics",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class AmbientCurve:
    """A regular curve ``t -> R^n``.

    ``derivative(t, k)`` may supply exact k-th derivatives (k >= 1). When
    ``extrapolate`` is false, finite-difference stencils are kept inside
    ``t_range``.
    """

    map: Callable = field(repr=False)
    t_range: tuple
    fd_step: float = 0.05
    derivative: Optional[Callable] = field(default=None, repr=False)
    extrapolate: bool = True
    name: str = ""

    def __call__(self, t):
        return np.asarray(self.map(float(t)), dtype=float)

    def derivs(self, t, order):
        """Array of shape ``(order + 1, n)`` with derivatives ``0..order`` at ``t``."""
        if self.derivative is not None:
            return np.array([self(t)] + [self.derivative(float(t), k) for k in range(1, order + 1)])
        lo, hi = (None, None) if self.extrapolate else self.t_range
        return stencil_derivatives(self, t, order, self.fd_step, lo=lo, hi=hi)

    def speed(self, t):
        return float(np.linalg.norm(self.derivs(t, 1)[1]))


@dataclass(frozen=True)
class ParamCurve:
    """A curve ``t -> u(t)`` in the parameter box of a patch.

    ``du`` and ``ddu`` optionally give the coordinate velocity and
    acceleration; otherwise they come from a stencil on ``u_of_t``.
    """

    patch: object
    u_of_t: Callable = field(repr=False)
    t_range: tuple
    du: Optional[Callable] = field(default=None, repr=False)
    ddu: Optional[Callable] = field(default=None, repr=False)
    fd_step: float = 0.05
    extrapolate: bool = True
    name: str = ""

    def u(self, t):
        return np.atleast_1d(np.asarray(self.u_of_t(float(t)), dtype=float))

    def __call__(self, t):
        return self.patch(self.u(t))

    def _stencil(self, t, order):
        lo, hi = (None, None) if self.extrapolate else self.t_range
        return stencil_derivatives(self.u, t, order, self.fd_step, lo=lo, hi=hi)

    def velocity_coords(self, t):
        if self.du is not None:
            return np.atleast_1d(np.asarray(self.du(float(t)), dtype=float))
        return self._stencil(t, 1)[1]

    def acceleration_coords(self, t):
        if self.ddu is not None:
            return np.atleast_1d(np.asarray(self.ddu(float(t)), dtype=float))
        return self._stencil(t, 2)[2]

    def ambient(self):
        """The induced curve ``f(u(t))`` in R^n."""
        return AmbientCurve(
            map=self,
            t_range=self.t_range,
            fd_step=self.fd_step,
            extrapolate=self.extrapolate,
            name=self.name,
        )


@dataclass(frozen=True)
class FrenetApparatus:
    t: float
    frame: np.ndarray  # rows V_1..V_k
    curvatures: np.ndarray  # k_1..k_{k-1}
    rank: int

    def vector(self, i):
        """``V_i`` (1-based); raises :class:`DegenerateFrame` beyond the rank."""
        if i > self.rank:
            raise DegenerateFrame(f"V{i} undefined: frame rank {self.rank} at t={self.t}", self.t, self.rank)
        return self.frame[i - 1]

    @property
    def T(self):
        return self.frame[0]

    @property
    def V2(self):
        return self.vector(2)

    @property
    def is_line_like(self):
        return self.rank < 2


@dataclass(frozen=True)
class SlantHelixReport:
    values: np.ndarray
    mean: float
    stddev: float
    min: float
    max: float
    is_slant: bool

    @property
    def spread(self):
        return self.max - self.min


def _speed_fn(c):
    if c.derivative is not None:
        return lambda t: float(np.linalg.norm(c.derivative(t, 1)))

    def speed(t):
        # Richardson-extrapolated central difference, error O(h^4)
        h = 1e-3 * max(1.0, abs(t))
        coarse = (c(t + h) - c(t - h)) / (2 * h)
        fine = (c(t + h / 2) - c(t - h / 2)) / h
        return float(np.linalg.norm((4 * fine - coarse) / 3))

    return speed


def _gl_integral(fn, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * sum(w * fn(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS))


def reparametrize_unit_speed(c, samples=256):
    """Arclength reparametrisation of ``c``.

    A cumulative arclength table (Gauss-Legendre per cell) gives a linear
    first guess for ``t(s)``, which Newton's method then refines against
    the exact arclength integral.
    """
    a, b = map(float, c.t_range)
    speed = _speed_fn(c)
    ts = np.linspace(a, b, samples + 1)
    cell_lengths = []
    for lo, hi in zip(ts[:-1], ts[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        sp = np.array([speed(mid + half * x) for x in _GL_NODES])
        if np.min(sp) < 1e-10:
            raise IrregularCurve(f"speed {np.min(sp):.3e} below 1e-10 in [{lo}, {hi}]")
        cell_lengths.append(half * float(sp @ _GL_WEIGHTS))
    if speed(a) < 1e-10 or speed(b) < 1e-10:
        raise IrregularCurve("speed vanishes at an endpoint")
    s_table = np.concatenate([[0.0], np.cumsum(cell_lengths)])
    total = float(s_table[-1])

    def t_of_s(s):
        k = int(np.clip(np.searchsorted(s_table, s, side="right") - 1, 0, samples - 1))
        t = float(np.interp(s, s_table, ts)) if 0.0 <= s <= total else ts[k] + (s - s_table[k]) / speed(ts[k])
        for _ in range(30):
            g = s_table[k] + _gl_integral(speed, ts[k], t) - s
            step = g / speed(t)
            t -= step
            if abs(step) < 1e-15 * max(1.0, abs(t)):
                break
        return t

    return AmbientCurve(
        map=lambda s: c(t_of_s(s)),
        t_range=(0.0, total),
        fd_step=c.fd_step,
        extrapolate=c.extrapolate,
        name=c.name,
    )


def _check_unit_speed(speed, t, tolerances):
    if abs(speed - 1.0) > tolerances.unit_speed:
        raise NotUnitSpeed(f"speed {speed:.6f} at t={t} is not 1 (reparametrize first)")


def _gram_schmidt(vectors, tol, limit=None):
    """Orthonormal frame from successive derivatives, stopping at the first dependent one."""
    frame = []
    for v in vectors:
        if limit is not None and len(frame) == limit:
            break
        w = np.array(v, dtype=float)
        for _ in range(2):
            for q in frame:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if limit is None and norm < tol:
            break
        frame.append(w / norm)
    return np.array(frame)


def frenet_frame(c, t, max_order=2, tolerances=DEFAULT_TOLERANCES, limit=None):
    """Frenet vectors ``V_1..V_k`` at ``t`` (no curvatures)."""
    d = c.derivs(t, max_order)
    return _gram_schmidt(d[1:], tolerances.frenet_rank, limit)


def frenet(c, t, max_order=3, tolerances=DEFAULT_TOLERANCES, frame_step=1e-3):
    """Generalised Frenet apparatus of a unit-speed curve at ``t``.

    The frame is Gram-Schmidt on ``c', c'', ..., c^(max_order)``; its rank
    is the number of leading derivatives that stay independent.
    Curvatures come from a 5-point derivative of the frame.
    """
    t = float(t)
    d = c.derivs(t, max_order)
    speed = float(np.linalg.norm(d[1]))
    _check_unit_speed(speed, t, tolerances)
    frame = _gram_schmidt(d[1:], tolerances.frenet_rank)
    k = len(frame)
    if k < 2:
        return FrenetApparatus(t=t, frame=frame, curvatures=np.zeros(0), rank=k)
    offsets = (-2, -1, 0, 1, 2)
    if not c.extrapolate:
        lo, hi = c.t_range
        h = min(frame_step, (hi - lo) / 8)
        shift = 0
        if t - 2 * h < lo:
            shift = int(np.ceil((lo - t) / h - 1e-12)) + 2
        elif t + 2 * h > hi:
            shift = int(np.floor((hi - t) / h + 1e-12)) - 2
        offsets = tuple(o + shift for o in offsets)
    else:
        h = frame_step
    w = np.asarray(fd_weights(offsets, 1))
    frames = [frame if o == 0 else frenet_frame(c, t + o * h, max_order, tolerances, limit=k) for o in offsets]
    dframe = sum(wi * f for wi, f in zip(w, frames)) / h / speed
    curv = np.array([frame[i + 1] @ dframe[i] for i in range(k - 1)])
    return FrenetApparatus(t=t, frame=frame, curvatures=curv, rank=k)


def slant_helix_test(c, d, sample_ts, tol, tolerances=DEFAULT_TOLERANCES):
    """Spread of ``<V_2, d>`` over ``sample_ts``; slant iff the spread is at most ``tol``."""
    d = np.asarray(d, dtype=float)
    values = []
    for t in sample_ts:
        frame = frenet_frame(c, t, 2, tolerances)
        if len(frame) < 2:
            raise DegenerateFrame(f"V2 undefined at t={t}", t, len(frame))
        values.append(frame[1] @ d)
    values = np.array(values)
    lo, hi = float(values.min()), float(values.max())
    return SlantHelixReport(
        values=values,
        mean=float(values.mean()),
        stddev=float(values.std()),
        min=lo,
        max=hi,
        is_slant=bool(hi - lo <= tol),
    )


@dataclass(frozen=True)
class _Kinematics:
    frame: object
    hess: np.ndarray
    du: np.ndarray
    ddu: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray


def curve_kinematics(pc, t, tolerances=DEFAULT_TOLERANCES, check_speed=True):
    """Frame, coordinate and ambient velocity/acceleration of ``pc`` at ``t``.

    The ambient acceleration uses the chain rule ``J u'' + f''(u', u')``.
    """
    u = pc.u(t)
    frame = point_frame(pc.patch, u, tolerances)
    hess = hessian(pc.patch, u)
    du = pc.velocity_coords(t)
    ddu = pc.acceleration_coords(t)
    vel = frame.jacobian @ du
    if check_speed:
        _check_unit_speed(float(np.linalg.norm(vel)), t, tolerances)
    acc = frame.jacobian @ ddu + np.einsum("i,j,ijk->k", du, du, hess)
    return _Kinematics(frame, hess, du, ddu, vel, acc)


def normal_curvature(pc, t, tolerances=DEFAULT_TOLERANCES):
    """``|V(T, T)|`` for the unit tangent ``T`` of a unit-speed curve on a patch."""
    kin = curve_kinematics(pc, t, tolerances)
    V = second_fundamental_form(pc.patch, kin.frame.u, kin.du, kin.du, frame=kin.frame, hess=kin.hess)
    return float(np.linalg.norm(V))


def geodesic_residual(pc, t, tolerances=DEFAULT_TOLERANCES):
    """Norm of the tangential part of the acceleration; zero along geodesics."""
    kin = curve_kinematics(pc, t, tolerances)
    return float(np.linalg.norm(kin.frame.P_tan @ kin.acceleration))
