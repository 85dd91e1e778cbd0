"""Tracing curves on patches: geodesics and lines of curvature.

Both integrators are fixed-step classical RK4 in chart coordinates. The
stored steps are wrapped in a :class:`~helixsub.curves.ParamCurve` with
cubic Hermite dense output, and each trace records a post-hoc defect
computed from the stored points, independently of the right-hand side.
"""

from dataclasses import dataclass, field

import numpy as np

from .curves import ParamCurve, curve_kinematics
from .errors import LeftDomain, OutOfDomain, UmbilicEncountered
from .manifold import christoffel, hessian, jacobian, point_frame, shape_operator
from .numerics import DEFAULT_TOLERANCES

__all__ = [
    "FlowResult",
    "LineOfCurvatureReport",
    "integrate_geodesic",
    "integrate_curvature_line",
    "line_of_curvature_test",
    "hermite_curve",
]


@dataclass(frozen=True)
class FlowResult:
    curve: ParamCurve
    steps: int
    max_defect: float
    ts: np.ndarray = field(repr=False)
    us: np.ndarray = field(repr=False)
    velocities: np.ndarray = field(repr=False)
    speed_drift: float = 0.0

    @property
    def end(self):
        return self.us[-1]


@dataclass(frozen=True)
class LineOfCurvatureReport:
    defects: np.ndarray
    max_angle_defect: float
    is_loc: bool
    lambdas: np.ndarray


def _hermite(ts, us, vs):
    h = ts[1] - ts[0] if len(ts) > 1 else 1.0

    def locate(t):
        k = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2))
        return k, (t - ts[k]) / h

    def u(t):
        k, s = locate(t)
        h00, h10, h01, h11 = 2 * s**3 - 3 * s**2 + 1, s**3 - 2 * s**2 + s, -2 * s**3 + 3 * s**2, s**3 - s**2
        return h00 * us[k] + h10 * h * vs[k] + h01 * us[k + 1] + h11 * h * vs[k + 1]

    def du(t):
        k, s = locate(t)
        d00, d10, d01, d11 = 6 * s**2 - 6 * s, 3 * s**2 - 4 * s + 1, -6 * s**2 + 6 * s, 3 * s**2 - 2 * s
        return (d00 * us[k] + d01 * us[k + 1]) / h + d10 * vs[k] + d11 * vs[k + 1]

    def ddu(t):
        k, s = locate(t)
        e00, e10, e01, e11 = 12 * s - 6, 6 * s - 4, -12 * s + 6, 6 * s - 2
        return (e00 * us[k] + e01 * us[k + 1]) / h**2 + (e10 * vs[k] + e11 * vs[k + 1]) / h

    return u, du, ddu


def hermite_curve(patch, ts, us, vs, ddu=None, name=""):
    """Dense-output ParamCurve through stored positions and velocities."""
    u, du, hermite_ddu = _hermite(ts, us, vs)
    return ParamCurve(
        patch=patch,
        u_of_t=u,
        du=du,
        ddu=ddu if ddu is not None else hermite_ddu,
        t_range=(float(ts[0]), float(ts[-1])),
        fd_step=min(0.05, (ts[-1] - ts[0]) / 20) if len(ts) > 1 else 0.05,
        extrapolate=False,
        name=name,
    )


def _rk4(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _geodesic_rhs(patch):
    m = patch.param_dim

    def rhs(y):
        u, v = y[:m], y[m:]
        try:
            gamma = christoffel(patch, u)
        except OutOfDomain:
            raise LeftDomain(f"trace left the domain near u={u.tolist()}", u=u) from None
        return np.concatenate([v, -np.einsum("kij,i,j->k", gamma, v, v)])

    return rhs


def integrate_geodesic(patch, u0, v0, length, step, tolerances=DEFAULT_TOLERANCES):
    """Unit-speed geodesic from ``u0`` with chart velocity ``v0``.

    Solves ``u'' = -Gamma(u)(u', u')`` with RK4. ``max_defect`` is the
    largest tangential acceleration at interior stored points, using a
    central difference of the stored velocities; ``speed_drift`` is the
    largest deviation of the ambient speed from 1.
    """
    u0 = patch.check(u0)
    v0 = np.asarray(v0, dtype=float)
    speed = np.linalg.norm(point_frame(patch, u0, tolerances).jacobian @ v0)
    if abs(speed - 1.0) > 1e-8:
        raise ValueError(f"initial ambient speed {speed!r} is not 1")
    m = patch.param_dim
    nsteps = max(1, int(round(length / step)))
    h = length / nsteps
    rhs = _geodesic_rhs(patch)
    ts = [0.0]
    ys = [np.concatenate([u0, v0])]

    def partial():
        return _geodesic_result(patch, np.array(ts), np.array(ys), m, tolerances)

    for k in range(nsteps):
        try:
            y = _rk4(rhs, ys[-1], h)
        except LeftDomain as exc:
            raise LeftDomain(str(exc), u=exc.u, result=partial()) from None
        if not patch.contains(y[:m]):
            raise LeftDomain(f"trace left the domain at u={y[:m].tolist()}", u=y[:m], result=partial())
        ts.append((k + 1) * h)
        ys.append(y)
    return _geodesic_result(patch, np.array(ts), np.array(ys), m, tolerances)


def _geodesic_result(patch, ts, ys, m, tolerances):
    us, vs = ys[:, :m], ys[:, m:]
    rhs = _geodesic_rhs(patch)
    u_dense, du_dense, _ = _hermite(ts, us, vs) if len(ts) > 1 else (None, None, None)

    def ddu(t):
        return rhs(np.concatenate([u_dense(t), du_dense(t)]))[m:]

    drift, defect = 0.0, 0.0
    for k in range(len(ts)):
        J = jacobian(patch, us[k])
        drift = max(drift, abs(np.linalg.norm(J @ vs[k]) - 1.0))
        if 0 < k < len(ts) - 1:
            acc = (vs[k + 1] - vs[k - 1]) / (ts[k + 1] - ts[k - 1])
            amb = J @ acc + np.einsum("i,j,ijk->k", vs[k], vs[k], hessian(patch, us[k]))
            tangential = J @ np.linalg.solve(J.T @ J, J.T @ amb)
            defect = max(defect, float(np.linalg.norm(tangential)))
    curve = hermite_curve(patch, ts, us, vs, ddu=ddu, name="geodesic") if len(ts) > 1 else None
    return FlowResult(curve=curve, steps=len(ts) - 1, max_defect=defect, ts=ts, us=us, velocities=vs, speed_drift=drift)


def _principal_field(patch, normal_field, eig_index, tolerances):
    def direction(u, previous):
        try:
            S = shape_operator(patch, u, normal_field(u), tolerances)
        except OutOfDomain:
            raise LeftDomain(f"trace left the domain near u={np.asarray(u).tolist()}", u=u) from None
        lam = S.principal_curvatures
        gaps = [abs(lam[eig_index] - lam[j]) for j in range(len(lam)) if j != eig_index]
        if gaps and min(gaps) < tolerances.umbilic_gap:
            raise UmbilicEncountered(
                f"principal curvatures {lam.tolist()} not separated at u={np.asarray(u).tolist()}", u=u
            )
        amb = S.principal_vectors[:, eig_index]
        coords = S.principal_coords[:, eig_index]
        if previous is not None and amb @ previous < 0:
            amb, coords = -amb, -coords
        return coords, amb

    return direction


def integrate_curvature_line(patch, u0, normal_field, eig_index, length, step, tolerances=DEFAULT_TOLERANCES):
    """Follow the unit principal direction ``eig_index`` of ``A_N`` (ascending order).

    The direction's sign is kept continuous by matching it against the
    previous step. ``max_defect`` is the largest sine of the angle between
    the central-chord tangent at a stored point and the local principal
    direction there.
    """
    u0 = patch.check(u0)
    field_ = _principal_field(patch, normal_field, eig_index, tolerances)
    nsteps = max(1, int(round(length / step)))
    h = length / nsteps
    c0, prev = field_(u0, None)
    ts, us, vs, ambs = [0.0], [u0], [c0], [prev]

    def partial():
        if len(ts) < 2:
            return None
        return _curvature_result(patch, np.array(ts), np.array(us), np.array(vs), ambs, tolerances)

    for k in range(nsteps):
        ref = ambs[-1]

        def rhs(u):
            return field_(u, ref)[0]

        try:
            u = _rk4(rhs, us[-1], h)
            if not patch.contains(u):
                raise LeftDomain(f"trace left the domain at u={u.tolist()}", u=u)
            c, amb = field_(u, ref)
        except (LeftDomain, UmbilicEncountered) as exc:
            raise type(exc)(str(exc), u=exc.u, result=partial()) from None
        ts.append((k + 1) * h)
        us.append(u)
        vs.append(c)
        ambs.append(amb)
    return _curvature_result(patch, np.array(ts), np.array(us), np.array(vs), ambs, tolerances)


def _curvature_result(patch, ts, us, vs, ambs, tolerances):
    defect = 0.0
    for k in range(1, len(ts) - 1):
        J = point_frame(patch, us[k], tolerances).jacobian
        chord = J @ (us[k + 1] - us[k - 1])
        chord /= np.linalg.norm(chord)
        e = ambs[k]
        defect = max(defect, float(np.linalg.norm(chord - (chord @ e) * e)))
    curve = hermite_curve(patch, ts, us, vs, name="curvature_line")
    return FlowResult(curve=curve, steps=len(ts) - 1, max_defect=defect, ts=ts, us=us, velocities=vs)


def line_of_curvature_test(
    pc, normal_field, sample_ts, tol=DEFAULT_TOLERANCES.line_of_curvature, tolerances=DEFAULT_TOLERANCES, check_speed=True
):
    """Check that the unit tangent is an eigenvector of ``A_N`` at every sample.

    The defect at a sample is ``|A T - <A T, T> T|`` in orthonormal frame
    coordinates; ``lambdas`` holds the Rayleigh quotients ``<A T, T>``.
    """
    defects, lambdas = [], []
    for t in sample_ts:
        kin = curve_kinematics(pc, t, tolerances, check_speed)
        S = shape_operator(pc.patch, kin.frame.u, normal_field(kin.frame.u), tolerances, frame=kin.frame, hess=kin.hess)
        T = kin.velocity / np.linalg.norm(kin.velocity)
        That = kin.frame.tangent.basis.T @ T
        AT = S.A @ That
        lam = float(AT @ That)
        defects.append(float(np.linalg.norm(AT - lam * That)))
        lambdas.append(lam)
    defects = np.array(defects)
    worst = float(defects.max()) if defects.size else 0.0
    return LineOfCurvatureReport(
        defects=defects, max_angle_defect=worst, is_loc=bool(worst <= tol), lambdas=np.array(lambdas)
    )
