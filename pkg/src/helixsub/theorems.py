"""Premise-checked numerical implications about curves on helix submanifolds.

Each ``verify_*`` function evaluates the premises of one implication on a
concrete patch, curve and direction, then the conclusion, and returns a
:class:`TheoremReport`. A report whose premises hold but whose conclusion
fails has verdict ``FALSIFIED``. That is an alarm: either the numerics
are wrong or the implication does not hold for that input. The known
cases of the latter are the first implication on a plane: with ``d``
normal, ``d`` lies in ``span{N, T}`` everywhere; with ``d`` tilted, it
meets the span at isolated points of a circle.

Checks share a common shape: a residual compared against a tolerance,
``residual <= tol`` unless the check states ``relation=">="``. A check
that cannot be evaluated (an undefined Frenet vector, a degenerate
direction split, a vanishing principal curvature) is marked not
applicable, which turns the verdict into ``NotApplicable``.

The helix premise of every implication asks for ``d`` to be a helix direction
of the whole patch. It is tested on ``surface_samples``, which default
to a 64 point grid over the patch domain.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .curves import curve_kinematics, frenet_frame, slant_helix_test
from .errors import CodimensionMismatch, DegenerateFrame
from .flows import line_of_curvature_test
from .helix import decompose_direction, grid_samples, is_helix_direction
from .manifold import point_frame, second_fundamental_form, unit_normal
from .numerics import DEFAULT_TOLERANCES, stencil_derivatives

__all__ = [
    "Verdict",
    "Check",
    "TheoremReport",
    "verify_thm_3_1",
    "verify_thm_3_2",
    "verify_thm_3_3",
    "verify_thm_3_5",
    "verify_thm_3_6",
    "VERIFIERS",
]


class Verdict(str, Enum):
    VERIFIED = "Verified"
    PREMISE_FAILED = "PremiseFailed"
    NOT_APPLICABLE = "NotApplicable"
    FALSIFIED = "FALSIFIED"


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    residual: float
    tol: float
    relation: str = "<="
    applicable: bool = True
    note: str = ""

    @classmethod
    def at_most(cls, name, residual, tol, note=""):
        return cls(name, bool(residual <= tol), float(residual), float(tol), "<=", True, note)

    @classmethod
    def at_least(cls, name, residual, tol, note=""):
        return cls(name, bool(residual >= tol), float(residual), float(tol), ">=", True, note)

    @classmethod
    def not_applicable(cls, name, tol, note, relation="<="):
        return cls(name, False, math.nan, float(tol), relation, False, note)


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    premises: list
    conclusion: Check
    verdict: Verdict
    samples: int
    details: dict = field(default_factory=dict)

    def premise(self, name):
        for p in self.premises:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "premises": [asdict(p) for p in self.premises],
            "conclusion": asdict(self.conclusion),
            "verdict": self.verdict.value,
            "samples": self.samples,
            "details": self.details,
        }


def _verdict(premises, conclusion):
    if any(p.applicable and not p.holds for p in premises):
        return Verdict.PREMISE_FAILED
    if not all(p.applicable for p in premises) or not conclusion.applicable:
        return Verdict.NOT_APPLICABLE
    return Verdict.VERIFIED if conclusion.holds else Verdict.FALSIFIED


def _report(theorem_id, premises, conclusion, samples, **details):
    return TheoremReport(theorem_id, premises, conclusion, _verdict(premises, conclusion), samples, details)


# shared premise builders


def _helix_premise(patch, d, surface_samples, tolerances):
    if surface_samples is None:
        surface_samples = grid_samples(patch.domain, 64)
    rep = is_helix_direction(patch, d, surface_samples, tolerances.helix_angle, tolerances)
    return Check.at_most("helix_direction", rep.spread, tolerances.helix_angle), rep


def _unit_speed_premise(kins, tolerances):
    worst = max(abs(np.linalg.norm(k.velocity) - 1.0) for k in kins)
    return Check.at_most("unit_speed", worst, tolerances.unit_speed)


def _kinematics(pc, sample_ts, tolerances):
    return [curve_kinematics(pc, t, tolerances, check_speed=False) for t in sample_ts]


def _unit_tangent(kin):
    return kin.velocity / np.linalg.norm(kin.velocity)


def _second_frenet_vectors(pc, sample_ts, tolerances):
    """``V_2`` at every sample, or ``None`` where the Frenet rank is below 2."""
    c = pc.ambient()
    out = []
    for t in sample_ts:
        frame = frenet_frame(c, t, 2, tolerances)
        out.append(frame[1] if len(frame) >= 2 else None)
    return out


def _spread(values):
    values = np.asarray(values, dtype=float)
    return float(values.max() - values.min()) if values.size else 0.0


def _normal_component_field(patch, d, tolerances):
    """``u -> xi(u)``, the unit normal component of ``d`` (zero where degenerate)."""

    def field_(u):
        return decompose_direction(point_frame(patch, u, tolerances), d, tolerances).xi

    return field_


def _tangent_component_field(patch, d, tolerances):
    def field_(u):
        return decompose_direction(point_frame(patch, u, tolerances), d, tolerances).t_dir

    return field_


def _derivative_along(pc, field_, t):
    """``d/dt field(u(t))`` with the curve's finite-difference stencil."""
    lo, hi = (None, None) if pc.extrapolate else pc.t_range
    return stencil_derivatives(lambda s: field_(pc.u(s)), t, 1, pc.fd_step, lo=lo, hi=hi)[1]


def _line_of_curvature_check(pc, field_, sample_ts, tolerances):
    rep = line_of_curvature_test(pc, field_, sample_ts, tolerances.line_of_curvature, tolerances, check_speed=False)
    return Check.at_most("line_of_curvature", rep.max_angle_defect, tolerances.line_of_curvature), rep


def _slant_conclusion(pc, d, sample_ts, tolerances):
    tol = tolerances.inner_product_spread
    try:
        rep = slant_helix_test(pc.ambient(), d, sample_ts, tol, tolerances)
    except DegenerateFrame as exc:
        return Check.not_applicable("slant_helix", tol, str(exc)), None
    return Check.at_most("slant_helix", rep.spread, tol), rep


def _prepare(patch, pc, d, sample_ts, tolerances):
    d = np.asarray(d, dtype=float)
    sample_ts = np.asarray(sample_ts, dtype=float)
    if d.shape != (patch.ambient_dim,):
        raise ValueError(f"direction must have {patch.ambient_dim} components")
    if len(sample_ts) == 0:
        raise ValueError("need at least one curve sample")
    return d, sample_ts


# implications


def verify_thm_3_1(patch, pc, d, N_field=None, sample_ts=None, tolerances=DEFAULT_TOLERANCES, surface_samples=None):
    """Curvature line of a hypersurface, not a line: ``d`` stays off ``span{N, T}``.

    Premises: ``d`` is a helix direction, the curve is a line of curvature
    for ``N_field`` (default the oriented unit normal), and its Frenet rank
    is at least 2 at a strict majority of samples. Conclusion: the distance
    from ``d`` to ``span{N, T}`` is at least ``tolerances.separation`` at
    every sample; the residual is the minimum distance.
    """
    if patch.codimension != 1:
        raise CodimensionMismatch(f"expected a hypersurface, codimension is {patch.codimension}")
    sample_ts = _default_ts(pc, sample_ts)
    d, sample_ts = _prepare(patch, pc, d, sample_ts, tolerances)
    if N_field is None:
        N_field = lambda u: unit_normal(patch, u)  # noqa: E731
    kins = _kinematics(pc, sample_ts, tolerances)
    helix, _ = _helix_premise(patch, d, surface_samples, tolerances)
    loc, loc_rep = _line_of_curvature_check(pc, N_field, sample_ts, tolerances)
    v2 = _second_frenet_vectors(pc, sample_ts, tolerances)
    line_like = sum(v is None for v in v2) / len(v2)
    not_a_line = Check(
        "not_a_line",
        bool(line_like < tolerances.not_a_line_fraction),
        float(line_like),
        tolerances.not_a_line_fraction,
        "<",
        note="fraction of samples with Frenet rank below 2",
    )
    distances = []
    for kin in kins:
        span = np.column_stack([N_field(kin.frame.u), _unit_tangent(kin)])
        q, _ = np.linalg.qr(span)
        distances.append(float(np.linalg.norm(d - q @ (q.T @ d))))
    conclusion = Check.at_least("distance_to_normal_tangent_span", min(distances), tolerances.separation)
    # The weaker reading "d does not stay in span{N, T} along the whole
    # curve" is reported alongside as max_distance.
    return _report(
        "T31",
        [_unit_speed_premise(kins, tolerances), helix, loc, not_a_line],
        conclusion,
        len(sample_ts),
        distances=distances,
        max_distance=max(distances),
        lambdas=loc_rep.lambdas.tolist(),
    )


def verify_thm_3_2(patch, pc, d, sample_ts=None, tolerances=DEFAULT_TOLERANCES, surface_samples=None):
    """Geodesic with ``<V_2, xi>`` constant is a slant helix with axis ``d``.

    ``xi`` is the unit normal component of ``d``; where it is degenerate
    the inner product counts as 0.
    """
    sample_ts = _default_ts(pc, sample_ts)
    d, sample_ts = _prepare(patch, pc, d, sample_ts, tolerances)
    kins = _kinematics(pc, sample_ts, tolerances)
    helix, _ = _helix_premise(patch, d, surface_samples, tolerances)
    geo = max(float(np.linalg.norm(k.frame.P_tan @ k.acceleration)) for k in kins)
    geodesic = Check.at_most("geodesic", geo, tolerances.geodesic)
    v2 = _second_frenet_vectors(pc, sample_ts, tolerances)
    tol = tolerances.inner_product_spread
    if any(v is None for v in v2):
        constant = Check.not_applicable("constant_v2_normal_component", tol, "V2 undefined at some sample")
        products = []
    else:
        products = [float(v @ decompose_direction(k.frame, d, tolerances).xi) for v, k in zip(v2, kins)]
        constant = Check.at_most("constant_v2_normal_component", _spread(products), tol)
    conclusion, slant = _slant_conclusion(pc, d, sample_ts, tolerances)
    return _report(
        "T32",
        [_unit_speed_premise(kins, tolerances), helix, geodesic, constant],
        conclusion,
        len(sample_ts),
        v2_xi=products,
        v2_d=slant.values.tolist() if slant is not None else [],
    )


def verify_thm_3_3(patch, pc, d, sample_ts=None, tolerances=DEFAULT_TOLERANCES, surface_samples=None):
    """Zero normal curvature with ``<V_2, T_d>`` constant gives a slant helix.

    ``T_d`` is the unit tangent component of ``d``; where it is degenerate
    the inner product counts as 0.
    """
    sample_ts = _default_ts(pc, sample_ts)
    d, sample_ts = _prepare(patch, pc, d, sample_ts, tolerances)
    kins = _kinematics(pc, sample_ts, tolerances)
    helix, _ = _helix_premise(patch, d, surface_samples, tolerances)
    kn = []
    for k in kins:
        T = k.du / np.linalg.norm(k.velocity)
        kn.append(float(np.linalg.norm(second_fundamental_form(pc.patch, k.frame.u, T, T, frame=k.frame, hess=k.hess))))
    normal_curv = Check.at_most("zero_normal_curvature", max(kn), tolerances.normal_curvature)
    v2 = _second_frenet_vectors(pc, sample_ts, tolerances)
    tol = tolerances.inner_product_spread
    if any(v is None for v in v2):
        constant = Check.not_applicable("constant_v2_tangent_component", tol, "V2 undefined at some sample")
        products = []
    else:
        products = [float(v @ decompose_direction(k.frame, d, tolerances).t_dir) for v, k in zip(v2, kins)]
        constant = Check.at_most("constant_v2_tangent_component", _spread(products), tol)
    conclusion, slant = _slant_conclusion(pc, d, sample_ts, tolerances)
    return _report(
        "T33",
        [_unit_speed_premise(kins, tolerances), helix, normal_curv, constant],
        conclusion,
        len(sample_ts),
        normal_curvatures=kn,
        v2_tangent_component=products,
        v2_d=slant.values.tolist() if slant is not None else [],
    )


def _degenerate_parts(kins, d, tolerances, which):
    parts = [decompose_direction(k.frame, d, tolerances) for k in kins]
    flag = "normal_degenerate" if which == "normal" else "tangent_degenerate"
    return parts, any(getattr(p, flag) for p in parts)


def verify_thm_3_5(patch, pc, d, sample_ts=None, tolerances=DEFAULT_TOLERANCES, surface_samples=None):
    """Curvature line for ``xi`` with tangent ``xi'``: ``d`` is orthogonal to ``T``.

    ``xi`` is the unit normal component of ``d``. Samples whose principal
    curvature ``<A_xi T, T>`` is below ``tolerances.eigenvalue_floor`` give
    no information and are excluded from the conclusion; when every sample
    is excluded the verdict is NotApplicable.
    """
    sample_ts = _default_ts(pc, sample_ts)
    d, sample_ts = _prepare(patch, pc, d, sample_ts, tolerances)
    kins = _kinematics(pc, sample_ts, tolerances)
    helix, _ = _helix_premise(patch, d, surface_samples, tolerances)
    speed = _unit_speed_premise(kins, tolerances)
    _, degenerate = _degenerate_parts(kins, d, tolerances, "normal")
    tol_c = tolerances.orthogonality
    if degenerate:
        note = "normal component of d vanishes at some sample"
        premises = [
            speed,
            helix,
            Check.not_applicable("line_of_curvature", tolerances.line_of_curvature, note),
            Check.not_applicable("normal_derivative_tangent", tolerances.tangency, note),
        ]
        return _report("T35", premises, Check.not_applicable("orthogonal_to_tangent", tol_c, note), len(sample_ts))
    xi = _normal_component_field(patch, d, tolerances)
    loc, loc_rep = _line_of_curvature_check(pc, xi, sample_ts, tolerances)
    tangency = []
    for t, k in zip(sample_ts, kins):
        dxi = _derivative_along(pc, xi, t)
        tangency.append(float(np.linalg.norm(dxi - k.frame.P_tan @ dxi)))
    tangent_check = Check.at_most("normal_derivative_tangent", max(tangency), tolerances.tangency)
    informative = np.abs(loc_rep.lambdas) >= tolerances.eigenvalue_floor
    dots = [abs(float(_unit_tangent(k) @ d)) for k in kins]
    if not informative.any():
        conclusion = Check.not_applicable(
            "orthogonal_to_tangent", tol_c, "principal curvature vanishes at every sample"
        )
    else:
        conclusion = Check.at_most("orthogonal_to_tangent", max(np.array(dots)[informative]), tol_c)
    return _report(
        "T35",
        [speed, helix, loc, tangent_check],
        conclusion,
        len(sample_ts),
        lambdas=loc_rep.lambdas.tolist(),
        tangent_dot_d=dots,
        excluded_samples=int((~informative).sum()),
    )


def verify_thm_3_6(patch, pc, d, sample_ts=None, tolerances=DEFAULT_TOLERANCES, surface_samples=None):
    """``T_d'`` dependent on ``T`` makes the curve a line of curvature for ``xi``.

    Dependence is the Gram determinant of ``{T_d', T}`` scaled by
    ``(1 + |T_d'|^2)^2``; the conclusion is the line-of-curvature test with
    the unit normal component ``xi`` of ``d`` as normal field.
    """
    sample_ts = _default_ts(pc, sample_ts)
    d, sample_ts = _prepare(patch, pc, d, sample_ts, tolerances)
    kins = _kinematics(pc, sample_ts, tolerances)
    helix, _ = _helix_premise(patch, d, surface_samples, tolerances)
    speed = _unit_speed_premise(kins, tolerances)
    _, t_degenerate = _degenerate_parts(kins, d, tolerances, "tangent")
    _, n_degenerate = _degenerate_parts(kins, d, tolerances, "normal")
    if t_degenerate:
        note = "tangent component of d vanishes at some sample"
        premises = [speed, helix, Check.not_applicable("dependence", tolerances.dependence, note)]
        conclusion = Check.not_applicable("line_of_curvature", tolerances.line_of_curvature, note)
        return _report("T36", premises, conclusion, len(sample_ts))
    t_dir = _tangent_component_field(patch, d, tolerances)
    grams = []
    for t, k in zip(sample_ts, kins):
        dT = _derivative_along(pc, t_dir, t)
        T = _unit_tangent(k)
        G = np.array([[dT @ dT, dT @ T], [T @ dT, T @ T]])
        grams.append(float(np.linalg.det(G)) / (1.0 + float(dT @ dT)) ** 2)
    dependence = Check.at_most("dependence", max(grams), tolerances.dependence)
    if n_degenerate:
        conclusion = Check.not_applicable(
            "line_of_curvature", tolerances.line_of_curvature, "normal component of d vanishes at some sample"
        )
        lambdas = []
    else:
        conclusion, loc_rep = _line_of_curvature_check(pc, _normal_component_field(patch, d, tolerances), sample_ts, tolerances)
        lambdas = loc_rep.lambdas.tolist()
    return _report("T36", [speed, helix, dependence], conclusion, len(sample_ts), gram=grams, lambdas=lambdas)


def _default_ts(pc, sample_ts):
    if sample_ts is not None:
        return sample_ts
    lo, hi = pc.t_range
    return lo + (np.arange(32) + 0.5) * (hi - lo) / 32


VERIFIERS = {
    "3.1": verify_thm_3_1,
    "3.2": verify_thm_3_2,
    "3.3": verify_thm_3_3,
    "3.5": verify_thm_3_5,
    "3.6": verify_thm_3_6,
}
