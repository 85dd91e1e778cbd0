"""Built-in submanifolds with known helix structure, and text-defined immersions.

Every entry carries an analytic Jacobian and Hessian, a sampling box, the
ground-truth helix space and a few named unit-speed curves. Angular axes
of the sampling boxes span [0, 3], less than half a turn, so no two
samples share a tangent projector by symmetry.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .curves import AmbientCurve, ParamCurve
from .errors import BadParameter, UnknownEntry
from .expr import compile_components, immersion_variables, parse_expressions
from .manifold import ImmersedPatch
from .numerics import Subspace

__all__ = [
    "CatalogEntry",
    "catalog_get",
    "catalog_names",
    "catalog_rows",
    "parse_immersion",
    "parse_curve",
]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: Dict[str, float]
    patch: ImmersedPatch
    known_helix_space: Optional[Subspace]
    sample_box: tuple
    curves: Dict[str, Callable] = field(default_factory=dict, repr=False)
    curve_defaults: Dict[str, Dict[str, float]] = field(default_factory=dict, repr=False)
    helix_angles: Dict[str, float] = field(default_factory=dict)
    description: str = ""

    def curve(self, name, **params):
        if name not in self.curves:
            raise UnknownEntry(f"{self.name} has no curve {name!r}; known: {', '.join(sorted(self.curves))}")
        unknown = set(params) - set(self.curve_defaults[name])
        if unknown:
            raise BadParameter(f"unknown curve parameter(s) {sorted(unknown)} for {self.name}.{name}")
        merged = dict(self.curve_defaults[name], **{k: float(v) for k, v in params.items()})
        return self.curves[name](**merged)


def _curve(patch, u, du, ddu, t_range, name):
    return ParamCurve(patch=patch, u_of_t=u, du=du, ddu=ddu, t_range=t_range, name=name)


def _basis(*axes, n):
    b = np.zeros((n, len(axes)))
    for j, a in enumerate(axes):
        b[a, j] = 1.0
    return Subspace(b)


def _plane(p):
    def f(u):
        return np.array([u[0], u[1], 0.0])

    patch = ImmersedPatch(
        map=f,
        param_dim=2,
        ambient_dim=3,
        domain=((-20, 20), (-20, 20)),
        jacobian_fn=lambda u: np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
        hessian_fn=lambda u: np.zeros((2, 2, 3)),
        name="plane",
    )

    def circle(radius, cx, cy):
        r = radius
        return _curve(
            patch,
            lambda t: np.array([cx + r * math.cos(t / r), cy + r * math.sin(t / r)]),
            lambda t: np.array([-math.sin(t / r), math.cos(t / r)]),
            lambda t: np.array([-math.cos(t / r), -math.sin(t / r)]) / r,
            (0.0, 2 * math.pi * r),
            "circle",
        )

    def line(angle, x0, y0):
        c, s = math.cos(angle), math.sin(angle)
        return _curve(
            patch,
            lambda t: np.array([x0 + c * t, y0 + s * t]),
            lambda t: np.array([c, s]),
            lambda t: np.zeros(2),
            (-1.0, 1.0),
            "line",
        )

    return dict(
        patch=patch,
        known_helix_space=_basis(0, 1, 2, n=3),
        sample_box=((-1.0, 1.0), (-1.0, 1.0)),
        curves={"circle": circle, "line": line},
        curve_defaults={"circle": {"radius": 1.0, "cx": 0.0, "cy": 0.0}, "line": {"angle": 0.0, "x0": 0.0, "y0": 0.0}},
        description="z = 0 in R^3; every direction is a helix direction",
    )


def _cylinder(p):
    R, w = p["radius"], p["warp"]
    if R <= 0:
        raise BadParameter("radius must be positive")
    if w < 0:
        raise BadParameter("warp must be non-negative")

    def f(u):
        return np.array([R * math.cos(u[0]), R * math.sin(u[0]), u[1] + w * u[1] ** 3 / 3])

    def jac(u):
        return np.array([[-R * math.sin(u[0]), 0.0], [R * math.cos(u[0]), 0.0], [0.0, 1 + w * u[1] ** 2]])

    def hess(u):
        H = np.zeros((2, 2, 3))
        H[0, 0] = [-R * math.cos(u[0]), -R * math.sin(u[0]), 0.0]
        H[1, 1] = [0.0, 0.0, 2 * w * u[1]]
        return H

    patch = ImmersedPatch(
        map=f, param_dim=2, ambient_dim=3, domain=((-20, 20), (-20, 20)),
        jacobian_fn=jac, hessian_fn=hess, name="cylinder",
    )

    def v_of_z(z):
        # inverse of z = v + w v^3 / 3, monotone for w >= 0
        if w == 0:
            return z
        v = z
        for _ in range(60):
            step = (v + w * v**3 / 3 - z) / (1 + w * v * v)
            v -= step
            if abs(step) < 1e-16 * max(1.0, abs(v)):
                break
        return v

    def chart_curve(u_of, z_of, t_range, name, du_of=None, dz_of=None):
        if w == 0 and du_of is not None:
            return _curve(
                patch,
                lambda t: np.array([u_of(t), z_of(t)]),
                lambda t: np.array([du_of, dz_of]),
                lambda t: np.zeros(2),
                t_range,
                name,
            )
        return ParamCurve(patch=patch, u_of_t=lambda t: np.array([u_of(t), v_of_z(z_of(t))]), t_range=t_range, name=name)

    def u_circle(v0):
        z0 = v0 + w * v0**3 / 3
        return chart_curve(lambda t: t / R, lambda t: z0, (0.0, 2 * math.pi * R), "u_circle", 1 / R, 0.0)

    def ruling(u0, z0):
        return chart_curve(lambda t: u0, lambda t: z0 + t, (-1.0, 1.0), "ruling", 0.0, 1.0)

    def geodesic(climb, u0, z0):
        # climb is the angle between the helix and the horizontal circles
        c, s = math.cos(climb), math.sin(climb)
        return chart_curve(lambda t: u0 + c * t / R, lambda t: z0 + s * t, (0.0, 10.0), "geodesic", c / R, s)

    return dict(
        patch=patch,
        known_helix_space=_basis(2, n=3),
        helix_angles={"e3": 0.0},
        sample_box=((0.0, 3.0), (-1.0, 1.0)),
        curves={"u_circle": u_circle, "ruling": ruling, "geodesic": geodesic},
        curve_defaults={
            "u_circle": {"v0": 0.0},
            "ruling": {"u0": 0.0, "z0": 0.0},
            "geodesic": {"climb": math.pi / 4, "u0": 0.0, "z0": 0.0},
        },
        description="circular cylinder about e3; warp > 0 reparametrises the height as v + warp v^3/3",
    )


def _cone(p):
    b = p["beta"]
    if not 0 < b < math.pi / 2:
        raise BadParameter("beta must lie in (0, pi/2)")
    sb, cb = math.sin(b), math.cos(b)

    def f(u):
        return np.array([u[1] * sb * math.cos(u[0]), u[1] * sb * math.sin(u[0]), u[1] * cb])

    def jac(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        return np.array([[-u[1] * sb * s, sb * c], [u[1] * sb * c, sb * s], [0.0, cb]])

    def hess(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        H = np.zeros((2, 2, 3))
        H[0, 0] = [-u[1] * sb * c, -u[1] * sb * s, 0.0]
        H[0, 1] = H[1, 0] = [-sb * s, sb * c, 0.0]
        return H

    patch = ImmersedPatch(
        map=f, param_dim=2, ambient_dim=3, domain=((-20, 20), (0.05, 50)),
        jacobian_fn=jac, hessian_fn=hess, name="cone",
    )

    def u_circle(v0):
        r = v0 * sb
        return _curve(
            patch,
            lambda t: np.array([t / r, v0]),
            lambda t: np.array([1 / r, 0.0]),
            lambda t: np.zeros(2),
            (0.0, 2 * math.pi * r),
            "u_circle",
        )

    def ruling(u0, v0):
        return _curve(
            patch,
            lambda t: np.array([u0, v0 + t]),
            lambda t: np.array([0.0, 1.0]),
            lambda t: np.zeros(2),
            (0.0, 1.0),
            "ruling",
        )

    def spiral(v0):
        # tangent at 45 degrees to the rulings, unit speed
        k = 1 / math.sqrt(2)
        return _curve(
            patch,
            lambda t: np.array([math.log((v0 + k * t) / v0) / sb, v0 + k * t]),
            lambda t: np.array([k / (sb * (v0 + k * t)), k]),
            lambda t: np.array([-0.5 / (sb * (v0 + k * t) ** 2), 0.0]),
            (0.0, 1.0),
            "spiral",
        )

    return dict(
        patch=patch,
        known_helix_space=_basis(2, n=3),
        helix_angles={"e3": b},
        sample_box=((0.0, 3.0), (0.5, 2.0)),
        curves={"u_circle": u_circle, "ruling": ruling, "spiral": spiral},
        curve_defaults={"u_circle": {"v0": 1.0}, "ruling": {"u0": 0.0, "v0": 1.0}, "spiral": {"v0": 1.0}},
        description="circular cone about e3 with half-angle beta, apex excluded",
    )


def _sphere(p):
    R, tilt = p["radius"], p["tilt"]
    if R <= 0:
        raise BadParameter("radius must be positive")
    ct, st = math.cos(tilt), math.sin(tilt)
    rot = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])

    def f(u):
        cu, su, cv, sv = math.cos(u[0]), math.sin(u[0]), math.cos(u[1]), math.sin(u[1])
        return R * rot @ np.array([cv * cu, cv * su, sv])

    def jac(u):
        cu, su, cv, sv = math.cos(u[0]), math.sin(u[0]), math.cos(u[1]), math.sin(u[1])
        return R * rot @ np.array([[-cv * su, -sv * cu], [cv * cu, -sv * su], [0.0, cv]])

    def hess(u):
        cu, su, cv, sv = math.cos(u[0]), math.sin(u[0]), math.cos(u[1]), math.sin(u[1])
        H = np.zeros((2, 2, 3))
        H[0, 0] = [-cv * cu, -cv * su, 0.0]
        H[0, 1] = H[1, 0] = [sv * su, -sv * cu, 0.0]
        H[1, 1] = [-cv * cu, -cv * su, -sv]
        return R * H @ rot.T

    patch = ImmersedPatch(
        map=f, param_dim=2, ambient_dim=3, domain=((-20, 20), (-1.5, 1.5)),
        jacobian_fn=jac, hessian_fn=hess, name="sphere",
    )

    def latitude_circle(lat):
        r = R * math.cos(lat)
        return _curve(
            patch,
            lambda t: np.array([t / r, lat]),
            lambda t: np.array([1 / r, 0.0]),
            lambda t: np.zeros(2),
            (0.0, 2 * math.pi * r),
            "latitude_circle",
        )

    def equator():
        return latitude_circle(0.0)

    def meridian(u0):
        return _curve(
            patch,
            lambda t: np.array([u0, t / R]),
            lambda t: np.array([0.0, 1 / R]),
            lambda t: np.zeros(2),
            (-1.0, 1.0),
            "meridian",
        )

    return dict(
        patch=patch,
        known_helix_space=Subspace(np.zeros((3, 0))),
        sample_box=((0.0, 3.0), (-1.2, 1.2)),
        curves={"equator": equator, "latitude_circle": latitude_circle, "meridian": meridian},
        curve_defaults={"equator": {}, "latitude_circle": {"lat": math.pi / 4}, "meridian": {"u0": 0.0}},
        description="round sphere (negative control); tilt rotates the chart poles about e2",
    )


def _flat_product(n_flat):
    n = 2 + n_flat

    def f(u):
        return np.concatenate([[math.cos(u[0]), math.sin(u[0])], u[1:]])

    def jac(u):
        J = np.zeros((n, n - 1))
        J[0, 0], J[1, 0] = -math.sin(u[0]), math.cos(u[0])
        J[2:, 1:] = np.eye(n_flat)
        return J

    def hess(u):
        H = np.zeros((n - 1, n - 1, n))
        H[0, 0, 0], H[0, 0, 1] = -math.cos(u[0]), -math.sin(u[0])
        return H

    return f, jac, hess, n


def _torus_product(p):
    f, jac, hess, n = _flat_product(2)
    patch = ImmersedPatch(
        map=f, param_dim=3, ambient_dim=4, domain=((-20, 20), (-20, 20), (-20, 20)),
        jacobian_fn=jac, hessian_fn=hess, name="torus_product",
    )

    def circle(x0, y0):
        return _curve(
            patch,
            lambda t: np.array([t, x0, y0]),
            lambda t: np.array([1.0, 0.0, 0.0]),
            lambda t: np.zeros(3),
            (0.0, 2 * math.pi),
            "circle",
        )

    return dict(
        patch=patch,
        known_helix_space=_basis(2, 3, n=4),
        helix_angles={"e3": 0.0, "e4": 0.0},
        sample_box=((0.0, 3.0), (-1.0, 1.0), (-1.0, 1.0)),
        curves={"circle": circle},
        curve_defaults={"circle": {"x0": 0.0, "y0": 0.0}},
        description="S^1 x R^2 in R^4",
    )


def _product_s1_r3(p):
    f, jac, hess, n = _flat_product(3)
    patch = ImmersedPatch(
        map=f, param_dim=4, ambient_dim=5, domain=((-20, 20),) * 4,
        jacobian_fn=jac, hessian_fn=hess, name="product_s1_r3",
    )

    def flat_helix(a0, radius, pitch):
        c = math.hypot(radius, pitch)
        r, b = radius, pitch
        return _curve(
            patch,
            lambda s: np.array([a0, r * math.cos(s / c), r * math.sin(s / c), b * s / c]),
            lambda s: np.array([0.0, -r * math.sin(s / c) / c, r * math.cos(s / c) / c, b / c]),
            lambda s: np.array([0.0, -r * math.cos(s / c), -r * math.sin(s / c), 0.0]) / c**2,
            (0.0, 2 * math.pi * c),
            "flat_helix",
        )

    def circle(x0, y0, z0):
        return _curve(
            patch,
            lambda t: np.array([t, x0, y0, z0]),
            lambda t: np.array([1.0, 0.0, 0.0, 0.0]),
            lambda t: np.zeros(4),
            (0.0, 2 * math.pi),
            "circle",
        )

    return dict(
        patch=patch,
        known_helix_space=_basis(2, 3, 4, n=5),
        helix_angles={"e3": 0.0, "e4": 0.0, "e5": 0.0},
        sample_box=((0.0, 3.0),) + ((-1.0, 1.0),) * 3,
        curves={"flat_helix": flat_helix, "circle": circle},
        curve_defaults={
            "flat_helix": {"a0": 0.0, "radius": 1.0, "pitch": 1.0},
            "circle": {"x0": 0.0, "y0": 0.0, "z0": 0.0},
        },
        description="S^1 x R^3 in R^5; helices in the flat factor have axis e5",
    )


_REGISTRY = {
    "cone": (_cone, {"beta": math.pi / 4}),
    "cylinder": (_cylinder, {"radius": 1.0, "warp": 0.0}),
    "plane": (_plane, {}),
    "product_s1_r3": (_product_s1_r3, {}),
    "sphere": (_sphere, {"radius": 1.0, "tilt": 0.0}),
    "torus_product": (_torus_product, {}),
}


def catalog_names():
    return sorted(_REGISTRY)


def catalog_get(name, params=None):
    """Build the named catalog entry, overriding default parameters with ``params``."""
    if name not in _REGISTRY:
        raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")
    builder, defaults = _REGISTRY[name]
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise BadParameter(f"unknown parameter(s) {sorted(unknown)} for {name}")
    merged = {k: float(params.get(k, v)) for k, v in defaults.items()}
    if not all(math.isfinite(v) for v in merged.values()):
        raise BadParameter("parameters must be finite")
    return CatalogEntry(name=name, parameters=merged, **builder(merged))


def catalog_rows():
    """One row per entry: name, dimensions, default parameters, known helix dimension, curves."""
    rows = []
    for name in catalog_names():
        e = catalog_get(name)
        rows.append(
            {
                "name": name,
                "m": e.patch.param_dim,
                "n": e.patch.ambient_dim,
                "parameters": e.parameters,
                "helix_dim": e.known_helix_space.dim,
                "curves": sorted(e.curves),
            }
        )
    return rows


def parse_immersion(text, m, n, params=None, domain=None, fd_step=None):
    """ImmersedPatch from ``n`` comma-separated expressions in ``u1..um``.

    Derivatives are finite differences. The default domain is ``[-1, 1]^m``.
    """
    params = dict(params or {})
    asts = parse_expressions(text, immersion_variables(m), params, n=n)
    return ImmersedPatch(
        map=compile_components(asts, params),
        param_dim=m,
        ambient_dim=n,
        domain=tuple(domain) if domain is not None else ((-1.0, 1.0),) * m,
        fd_step=fd_step,
        name=text,
    )


def parse_curve(text, t_range, params=None, fd_step=0.05):
    """AmbientCurve from comma-separated expressions in ``t``."""
    params = dict(params or {})
    asts = parse_expressions(text, ["t"], params)
    f = compile_components(asts, params)
    return AmbientCurve(map=lambda t: f([t]), t_range=tuple(map(float, t_range)), fd_step=fd_step, name=text)
