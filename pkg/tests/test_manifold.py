import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helixsub.catalog import catalog_get, catalog_names, parse_immersion
from helixsub.errors import NotNormal, OutOfDomain, RankDeficient, SingularMetric
from helixsub.manifold import (
    ImmersedPatch,
    christoffel,
    gauss_split,
    hessian,
    jacobian,
    point_frame,
    second_fundamental_form,
    shape_operator,
    unit_normal,
)
from helixsub.numerics import central_diff

ENTRIES = {name: catalog_get(name) for name in catalog_names()}


def numeric_twin(patch):
    """The same map with all analytic derivatives stripped."""
    return dataclasses.replace(patch, jacobian_fn=None, hessian_fn=None)


def random_point(patch, fractions):
    return np.array([lo + f * (hi - lo) for f, (lo, hi) in zip(fractions, patch.domain)])


def box_point(entry, fractions):
    return np.array([lo + f * (hi - lo) for f, (lo, hi) in zip(fractions, entry.sample_box)])


fractions4 = st.lists(st.floats(0.02, 0.98), min_size=4, max_size=4)
names = st.sampled_from(sorted(ENTRIES))


def test_jacobian_examples(plane, cylinder, cone):
    np.testing.assert_allclose(jacobian(plane.patch, [0.3, -0.2]), [[1, 0], [0, 1], [0, 0]])
    np.testing.assert_allclose(jacobian(cylinder.patch, [0, 0]), [[0, 0], [1, 0], [0, 1]], atol=1e-8)
    b = np.pi / 4
    J = jacobian(cone.patch, [0.0, 1.0])
    np.testing.assert_allclose(J[:, 0], [0, np.sin(b), 0], atol=1e-8)
    np.testing.assert_allclose(J[:, 1], [np.sin(b), 0, np.cos(b)], atol=1e-8)


@given(names, fractions4)
def test_analytic_derivatives_match_finite_differences(name, fr):
    patch = ENTRIES[name].patch
    u = box_point(ENTRIES[name], fr)
    twin = numeric_twin(patch)
    np.testing.assert_allclose(jacobian(patch, u), jacobian(twin, u), atol=1e-8)
    np.testing.assert_allclose(hessian(patch, u), hessian(twin, u), atol=1e-8)


def test_out_of_domain(cone):
    with pytest.raises(OutOfDomain):
        point_frame(cone.patch, [0.0, 0.0])


def test_rank_deficient():
    patch = ImmersedPatch(lambda u: np.array([u[0] ** 3, u[1], 0.0]), 2, 3, ((-1, 1), (-1, 1)))
    with pytest.raises(RankDeficient) as info:
        point_frame(patch, [0.0, 0.5])
    np.testing.assert_allclose(info.value.u, [0.0, 0.5])


def test_frame_examples(plane, sphere, cylinder):
    f = point_frame(plane.patch, [0.1, 0.2])
    np.testing.assert_allclose(f.P_tan, np.diag([1, 1, 0]), atol=1e-12)
    np.testing.assert_allclose(np.abs(f.normal.basis[:, 0]), [0, 0, 1], atol=1e-12)
    u = [0.3, 1.4]  # close to the north pole
    p = sphere.patch(u)
    n = unit_normal(sphere.patch, u)
    np.testing.assert_allclose(n, p / np.linalg.norm(p), atol=1e-7)
    np.testing.assert_allclose(unit_normal(cylinder.patch, [0, 0]), [1, 0, 0], atol=1e-12)


@given(names, fractions4)
def test_frame_invariants(name, fr):
    entry = ENTRIES[name]
    f = point_frame(entry.patch, box_point(entry, fr))
    n = entry.patch.ambient_dim
    np.testing.assert_allclose(f.P_tan + f.P_norm, np.eye(n), atol=1e-10)
    assert np.abs(f.tangent.basis.T @ f.normal.basis).max() <= 1e-9
    np.testing.assert_allclose(f.P_tan @ f.jacobian, f.jacobian, atol=1e-10)
    np.testing.assert_allclose(f.jacobian @ f.coords, f.tangent.basis, atol=1e-10)


def test_second_fundamental_form_examples(plane, cylinder):
    assert np.allclose(second_fundamental_form(plane.patch, [0.5, 0.5], [1, 2], [3, -1]), 0)
    e1, e2 = np.eye(2)
    np.testing.assert_allclose(second_fundamental_form(cylinder.patch, [0, 0], e1, e1), [-1, 0, 0], atol=1e-6)
    np.testing.assert_allclose(second_fundamental_form(cylinder.patch, [0, 0], e2, e2), 0, atol=1e-6)


def test_gauss_split_examples(plane, cylinder):
    tang, norm = gauss_split(plane.patch, [0.0, 0.0], [1, 0], [0, 1])
    assert np.allclose(tang, 0) and np.allclose(norm, 0)
    tang, norm = gauss_split(cylinder.patch, [0, 0], [1, 0], [1, 0])
    np.testing.assert_allclose(tang, 0, atol=1e-6)
    np.testing.assert_allclose(norm, [-1, 0, 0], atol=1e-6)
    # the equator is a great circle: its acceleration is purely normal
    sph = catalog_get("sphere")
    tang, norm = gauss_split(sph.patch, [0.4, 0.0], [1, 0], [1, 0])
    np.testing.assert_allclose(tang, 0, atol=1e-5)
    np.testing.assert_allclose(norm, -sph.patch([0.4, 0.0]), atol=1e-5)


@given(names, fractions4, st.lists(st.floats(-1, 1), min_size=8, max_size=8))
def test_gauss_closure_and_weingarten(name, fr, coeffs):
    entry = ENTRIES[name]
    patch = entry.patch
    m = patch.param_dim
    u = box_point(entry, fr)
    x, y = np.array(coeffs[:m]), np.array(coeffs[4 : 4 + m])
    frame = point_frame(patch, u)
    H = hessian(patch, u)
    full = np.einsum("i,j,ijk->k", x, y, H)
    tang, norm = gauss_split(patch, u, x, y, frame=frame, hess=H)
    assert np.linalg.norm(tang + norm - full) <= 1e-7 * max(1.0, np.linalg.norm(full))
    np.testing.assert_allclose(norm, second_fundamental_form(patch, u, x, y, frame=frame), atol=1e-12)
    np.testing.assert_allclose(
        second_fundamental_form(patch, u, x, y, frame=frame), second_fundamental_form(patch, u, y, x, frame=frame), atol=1e-7
    )
    w = frame.normal.basis @ np.cos(np.arange(frame.normal.dim) + coeffs[0])
    N = w / np.linalg.norm(w)
    S = shape_operator(patch, u, N, frame=frame, hess=H)
    assert np.abs(S.A - S.A.T).max() <= 1e-8
    X, Y = frame.frame_coords(x), frame.frame_coords(y)
    assert abs((S.A @ X) @ Y - norm @ N) <= 1e-6


def test_shape_operator_examples(plane, sphere, cylinder):
    S = shape_operator(plane.patch, [0, 0], [0, 0, 1])
    assert np.allclose(S.A, 0) and np.allclose(S.principal_curvatures, 0)
    for u in ([0.3, 0.2], [-1.0, 1.2], [2.0, -0.7]):
        S = shape_operator(sphere.patch, u, unit_normal(sphere.patch, u))
        np.testing.assert_allclose(S.principal_curvatures, [-1, -1], atol=1e-6)
    u = [0.7, 0.3]
    N = np.array([np.cos(0.7), np.sin(0.7), 0.0])
    S = shape_operator(cylinder.patch, u, N)
    np.testing.assert_allclose(S.principal_curvatures, [-1, 0], atol=1e-6)
    # principal vectors: horizontal circle direction for -1, ruling for 0
    np.testing.assert_allclose(np.abs(S.principal_vectors[:, 1]), [0, 0, 1], atol=1e-8)


def test_shape_operator_rejects_bad_normals(cylinder):
    with pytest.raises(NotNormal):
        shape_operator(cylinder.patch, [0, 0], [0, 1, 0])
    with pytest.raises(NotNormal):
        shape_operator(cylinder.patch, [0, 0], [2, 0, 0])


def test_weingarten_against_normal_field_derivative():
    # A_N(X) = tang(-D_X N) computed directly from the outward normal field of a sphere
    sph = catalog_get("sphere", {"radius": 2.0})
    u = np.array([0.4, 0.3])
    N = lambda v: unit_normal(sph.patch, v)  # noqa: E731
    frame = point_frame(sph.patch, u)
    S = shape_operator(sph.patch, u, N(u), frame=frame)
    for j in range(2):
        dN = central_diff(N, u, j, 1e-5)
        lhs = frame.tangent.basis @ (S.A @ frame.frame_coords(np.eye(2)[j]))
        np.testing.assert_allclose(lhs, -frame.P_tan @ dN, atol=1e-7)
    np.testing.assert_allclose(S.principal_curvatures, [-0.5, -0.5], atol=1e-8)


def metric_christoffel(patch, u, h=1e-4):
    """Classical formula from finite differences of the metric."""
    m = patch.param_dim

    def g(v):
        J = jacobian(patch, v)
        return (J.T @ J).ravel()

    dg = np.array([central_diff(g, u, k, h).reshape(m, m) for k in range(m)])  # dg[k] = d_k g
    ginv = np.linalg.inv(g(u).reshape(m, m))
    out = np.zeros((m, m, m))
    for k in range(m):
        for i in range(m):
            for j in range(m):
                out[k, i, j] = 0.5 * sum(ginv[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j]) for l in range(m))
    return out


@given(st.sampled_from(["cone", "sphere", "cylinder", "torus_product"]), fractions4)
def test_christoffel_matches_metric_formula(name, fr):
    entry = catalog_get(name, {"warp": 0.5} if name == "cylinder" else None)
    u = box_point(entry, fr)
    gamma = christoffel(entry.patch, u)
    np.testing.assert_allclose(gamma, metric_christoffel(entry.patch, u), atol=1e-7)
    np.testing.assert_allclose(gamma, gamma.transpose(0, 2, 1), atol=1e-12)


def test_christoffel_examples(plane, cylinder):
    assert np.allclose(christoffel(plane.patch, [0.2, 0.3]), 0)
    assert np.allclose(christoffel(cylinder.patch, [0.2, 0.3]), 0, atol=1e-12)
    polar = parse_immersion("u1*cos(u2), u1*sin(u2), 0", 2, 3, domain=[(0.5, 3.0), (-3.0, 3.0)])
    r = 1.7
    gamma = christoffel(polar, [r, 0.4])
    assert gamma[0, 1, 1] == pytest.approx(-r, abs=1e-5)
    assert gamma[1, 0, 1] == pytest.approx(1 / r, abs=1e-5)
    assert gamma[1, 1, 0] == pytest.approx(1 / r, abs=1e-5)


def test_singular_metric():
    patch = ImmersedPatch(
        lambda u: np.array([u[0], u[1], 0.0]),
        2,
        3,
        ((-1, 1), (-1, 1)),
        jacobian_fn=lambda u: np.array([[1e-7, 0.0], [0.0, 1e-7], [0.0, 0.0]]),
        hessian_fn=lambda u: np.zeros((2, 2, 3)),
    )
    with pytest.raises(SingularMetric):
        christoffel(patch, [0.0, 0.0])


def test_parsed_cylinder_matches_catalog(cylinder):
    parsed = parse_immersion("cos(u1), sin(u1), u2", 2, 3, domain=[(-4, 4), (-4, 4)])
    for u in ([0.0, 0.0], [1.1, -0.5], [2.5, 1.5]):
        a, b = point_frame(parsed, u), point_frame(cylinder.patch, u)
        np.testing.assert_allclose(a.P_tan, b.P_tan, atol=1e-8)
        np.testing.assert_allclose(a.normal.basis, b.normal.basis, atol=1e-8)
        N = unit_normal(cylinder.patch, u)
        np.testing.assert_allclose(shape_operator(parsed, u, N).A, shape_operator(cylinder.patch, u, N).A, atol=1e-8)


def test_patch_validation():
    with pytest.raises(ValueError):
        ImmersedPatch(lambda u: u, 2, 2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        ImmersedPatch(lambda u: u, 1, 2, ((1, 0),))
