"""Acceptance gate: twelve end-to-end checks.

Each test prints a single verdict line (run with -s to see them on success).
Checks with a stated runtime budget assert the elapsed wall time too.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from fuzzyreg import (
    AffineProfile,
    CurveSpec,
    FourierFunction,
    FuzzySpace,
    GraphVertexSpec,
    MatrixFourierFunction,
    PolyProfile,
    VertexParams,
    block_transform,
    build_generalized_cylinder,
    build_graph_vertex,
    build_string_vertex,
    check_commutator_decay,
    check_product_convergence,
    commutator,
    default_vertex_cutoff,
    diagonalize_coordinate,
    interlace,
    interlacing_unitary,
    interp_fourier_coeff,
    make_grid,
    make_profile,
    matrix_poly_transform,
    mul,
    poisson_bracket,
    regularize_matrix,
    regularize_scalar,
    semiclassical_residual,
    within_border_norm,
    z_order,
    z_order_inverse,
)
from fuzzyreg.interpolate import _slot_tables
from fuzzyreg.transforms import direct_sum_matrices

from refs import (
    interlaced_zone_reference,
    random_closed_curve,
    scalar_zone_reference,
    zone_masks,
)


@contextmanager
def criterion(num, label, budget=None):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"criterion {num:02d}: FAIL {label}")
        raise
    elapsed = time.perf_counter() - t0
    print(f"criterion {num:02d}: PASS {label} ({elapsed:.2f}s)")
    if budget is not None:
        assert elapsed < budget


def test_criterion_01_closed_curves_commute():
    with criterion(1, "closed-curve coordinates commute inside the border", budget=1.0):
        rng = np.random.default_rng(101)
        for _ in range(3):
            curve = random_closed_curve(rng, cutoff=5)
            space = build_generalized_cylinder(curve, 64)
            comm = commutator(space.coordinates[0], space.coordinates[1])
            assert within_border_norm(comm, 5) < 1e-13
        circle = build_generalized_cylinder(CurveSpec.circle(1.0), 64)
        comm = commutator(circle.coordinates[0], circle.coordinates[1])
        assert within_border_norm(comm, 1) == 0.0


def test_criterion_02_height_commutator_identity():
    with criterion(2, "height commutator equals the scaled angle derivative"):
        rng = np.random.default_rng(102)
        curve = random_closed_curve(rng, cutoff=5)
        N = 64
        space = build_generalized_cylinder(curve, N)
        xh, yh, zh = space.coordinates
        grid = make_grid(N, curve.x_series.interval)
        for series, coord in ((curve.x_series, xh), (curve.y_series, yh)):
            rhs = regularize_scalar(series.d_phi() * -1j, grid)
            diff = commutator(zh, coord).data + (curve.z_beta / N) * rhs.data
            assert np.max(np.abs(diff)) <= 1e-13


def _product_pair():
    iv = (0.0, 1.0)
    f = FourierFunction(iv, {1: AffineProfile(1.0, 1.0)})
    g = FourierFunction(iv, {0: PolyProfile([0.0, 0.0, 1.0])})
    return f, g


def test_criterion_03_first_order_product_law():
    with criterion(3, "product residual decays at first order", budget=10.0):
        f, g = _product_pair()
        rep = check_product_convergence(f, g, Ns=(40, 80, 160), delta=3)
        assert rep.values[1] / rep.values[0] <= 0.6
        assert rep.values[2] / rep.values[1] <= 0.6
        assert rep.passed


def test_criterion_04_second_order_semiclassical_law():
    with criterion(4, "corrected residual decays at second order"):
        f, g = _product_pair()
        R = {N: semiclassical_residual(f, g, "symmetric", N=N, delta=3)
             for N in (40, 80, 160)}
        assert R[80] / R[40] <= 0.35
        assert R[160] / R[80] <= 0.35


def test_criterion_05_z_order_matches_the_stacked_regularization():
    with criterion(5, "direct sum reorders bitwise into the stacked form"):
        iv = (0.0, 1.0)
        rng = np.random.default_rng(105)
        grid = make_grid(32, iv, "symmetric")
        for _ in range(10):
            tables = []
            for _k in range(2):
                coeffs = {
                    n: AffineProfile(rng.normal(), rng.normal())
                    for n in range(-2, 3)
                }
                tables.append(FourierFunction(iv, coeffs))
            f1, f2 = tables
            q1 = regularize_scalar(f1, grid)
            q2 = regularize_scalar(f2, grid)
            lhs = z_order(direct_sum_matrices(q1, q2), 2)
            rhs = regularize_matrix(MatrixFourierFunction.diagonal([f1, f2]), grid)
            assert np.array_equal(lhs.data, rhs.data)


def test_criterion_06_interlacing_identity():
    with criterion(6, "interlacing maps the split pair onto the crossed pair"):
        iv = (-1.0, 3.0)
        f = FourierFunction(iv, {1: AffineProfile(0.8, 0.2), 0: AffineProfile(0.1, 0.05)})
        zero = FourierFunction(iv, {})
        D = MatrixFourierFunction.diagonal([f * -1.0, f])
        A = MatrixFourierFunction(iv, [[zero, f], [f, zero]])
        grid = make_grid(24, iv, "symmetric")
        space = FuzzySpace(
            "pair", (regularize_matrix(D, grid),), (D,), grid
        )
        crossed = interlace(space)
        want = regularize_matrix(A, grid)
        assert np.max(np.abs(crossed.coordinates[0].data - want.data)) <= 1e-13


def test_criterion_07_string_vertex_reproduces_both_limits():
    with criterion(7, "vertex matches its two closed-form limits per zone", budget=5.0):
        p = VertexParams()
        assert p.N == 30
        space = build_string_vertex(p)
        scalar = scalar_zone_reference(p)
        inter = interlaced_zone_reference(p, space.grid)
        in1, in2 = zone_masks(space.grid, space.dim, p.profile.q2, p.profile.q3)
        for k in range(3):
            got = space.coordinates[k].data
            assert np.max(np.abs((got - scalar[k].data)[in1])) <= 1e-9
            assert np.max(np.abs((got - inter[k].data)[in2])) <= 1e-9
        dim = space.dim
        ii, jj = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
        interior = (ii >= 5) & (ii < dim - 5) & (jj >= 5) & (jj < dim - 5)
        off_track = interior & ~np.isin(jj - ii, (-3, -1, 1, 3))
        for k in range(2):
            assert np.max(np.abs(space.coordinates[k].data[off_track])) < 0.1


def test_criterion_08_vertex_commutators_decay():
    with criterion(8, "interior commutator entries shrink with the size", budget=60.0):
        rep = check_commutator_decay(
            lambda N: build_string_vertex(VertexParams(N=N)),
            (15, 30, 45, 60),
            delta=5,
        )
        assert rep.passed
        assert rep.values[-1] < rep.values[0]


def test_criterion_09_blended_coefficient_decay_bound():
    with criterion(9, "blended tails sit under the 1/m^2 envelope"):
        p = VertexParams()
        (t1x, t2x), (t1y, t2y) = _slot_tables(p)
        qs = np.linspace(p.profile.q2, p.profile.q3, 33)
        peak = max(
            float(np.max(np.abs(c(qs))))
            for t in (t1x, t2x, t1y, t2y)
            for c in t.values()
        )
        C = 2.0 / np.pi * peak
        delta = 2
        tilde = default_vertex_cutoff(delta, p.N)
        for t1, t2 in ((t1x, t2x), (t1y, t2y)):
            for m in range(-3 * tilde, 3 * tilde + 1):
                if abs(m) <= delta:
                    continue
                vals = np.abs(interp_fourier_coeff(t1, t2, p.profile, m, qs))
                assert float(np.max(vals)) <= C * (2 * delta + 1) / m**2


def test_criterion_10_parabola_pipeline():
    with criterion(10, "poly target diagonalizes with the phase fix intact", budget=5.0):
        base = CurveSpec.circle(1.0)
        curve = CurveSpec(base.x_series, base.y_series, z_beta=10.0)
        space = build_generalized_cylinder(curve, 40, z_offset=-5.0)
        recipe = [{
            "op": "poly",
            "terms": [
                {"coeff": 0.625, "indices": [2, 2]},
                {"coeff": -1.0, "indices": [0]},
            ],
            "target": 2,
        }]
        bent = matrix_poly_transform(space, recipe)
        target = bent.coordinates[2].data
        want_eigs = np.sort(np.linalg.eigvalsh(target))
        final, rep = diagonalize_coordinate(bent, 2)
        assert np.max(np.abs(np.imag(final.coordinates[0].data))) < 1e-8
        assert np.max(np.abs(np.real(final.coordinates[1].data))) < 1e-8
        got_eigs = np.sort(np.asarray(rep.eigenvalues))
        assert np.max(np.abs(got_eigs - want_eigs)) <= 1e-10


def test_criterion_11_graph_vertex_junction_value():
    with criterion(11, "interlaced junction entry carries sqrt(2) r"):
        spec = GraphVertexSpec(dim=12, n0=4, r_junction=0.7)
        space = build_graph_vertex(spec)
        out = block_transform(space.coordinates[0], interlacing_unitary(), spec.n0 // 2)
        assert abs(out.data[3, 4] - np.sqrt(2.0) * 0.7) <= 1e-13
        assert abs(out.data[3, 5]) <= 1e-13


def test_criterion_12_property_suite():
    label = ("module properties hold (self-blend is exact at the window "
             "ends; its interior deviation is a documented expected failure)")
    with criterion(12, label, budget=120.0):
        iv = (0.0, 1.0)
        rng = np.random.default_rng(112)

        # Leibniz rule for the bracket against the product.
        f = FourierFunction(iv, {1: AffineProfile(*rng.normal(size=2)),
                                 -1: AffineProfile(*rng.normal(size=2))})
        g = FourierFunction(iv, {0: PolyProfile([0.0, 0.5, 0.5])})
        h = FourierFunction(iv, {2: AffineProfile(*rng.normal(size=2))})
        lhs = poisson_bracket(f, mul(g, h))
        rhs = mul(g, poisson_bracket(f, h)) + mul(poisson_bracket(f, g), h)
        qs = np.linspace(iv[0], iv[1], 9)[:, None]
        phis = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)[None, :]
        assert np.max(np.abs(lhs.eval(qs, phis) - rhs.eval(qs, phis))) < 1e-12

        # Hermiticity of every built space used above.
        vertex = build_string_vertex(VertexParams(N=16))
        assert vertex.validate() is vertex
        cyl = build_generalized_cylinder(CurveSpec.circle(1.0), 16)
        assert cyl.validate() is cyl

        # Involutions: reordering and conjugation undo themselves.
        M = vertex.coordinates[0]
        assert np.array_equal(z_order_inverse(z_order(M, 2), 2).data, M.data)
        assert np.max(np.abs(
            f.conjugate().conjugate().eval(qs, phis) - f.eval(qs, phis))) < 1e-14

        # Endpoint exactness of the blend, including blending with itself.
        prof = make_profile()
        t = {n: complex(*rng.normal(size=2)) for n in range(-2, 3)}
        for q_end in (prof.q2, prof.q3):
            for m in range(-2, 3):
                got = interp_fourier_coeff(t, t, prof, m, q_end)
                assert got == pytest.approx(t[m], abs=1e-12)
