"""Builders for the concrete fuzzy spaces of the catalog.

Covered here: the generalized fuzzy cylinder over a closed curve, immersed
cylinders (with the circle-to-eight preset), the mirror pair of cylinders,
the fuzzy Clifford torus, and the graph-vertex band matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructureError
from .fourier import FourierFunction, MatrixFourierFunction
from .profiles import (
    AffineProfile,
    ComposedProfile,
    ConstantProfile,
    Profile,
    as_profile,
    smooth_step,
)
from .regularize import (
    FuzzyMatrix,
    FuzzySpace,
    make_grid,
    regularize_scalar,
    toeplitz_basis,
)


@dataclass(frozen=True)
class CurveSpec:
    """A closed curve (x(phi), y(phi)) swept along z with scale beta."""

    x_series: FourierFunction
    y_series: FourierFunction
    z_beta: float = 1.0
    closed: bool = True

    def __post_init__(self):
        for f in (self.x_series, self.y_series):
            if not _is_q_independent(f):
                raise DomainError("curve series must be q-independent")
        if self.closed:
            if not (self.x_series.is_real_valued() and self.y_series.is_real_valued()):
                raise StructureError("closed curves need real-valued x and y series")

    @classmethod
    def circle(cls, radius=1.0, interval=(0.0, 1.0)):
        x = FourierFunction.cosine(interval, 1, radius)
        y = FourierFunction.sine(interval, 1, radius)
        return cls(x, y)


def _is_q_independent(f: FourierFunction, tol=1e-13) -> bool:
    lo, hi = f.interval
    probe = np.array([lo, 0.5 * (lo + hi), hi])
    for c in f.coeffs.values():
        v = c(probe)
        if np.max(np.abs(v - v[0])) > tol:
            return False
    return True


def _toeplitz_from_series(f: FourierFunction, N: int) -> FuzzyMatrix:
    mid = 0.5 * (f.interval[0] + f.interval[1])
    out = np.zeros((N, N), dtype=complex)
    for n, c in f.coeffs.items():
        out += complex(c(mid)) * toeplitz_basis(n, N).data
    return FuzzyMatrix(out, N, 1)


def build_generalized_cylinder(curve: CurveSpec, N: int, z_offset: float = 0.0) -> FuzzySpace:
    """Toeplitz x, y over a strictly increasing diagonal z.

    z carries the values z_offset + beta*n/N for n = 1..N; only differences
    of z enter any commutator, so the offset is conventional (a z_offset of
    -beta centers the height range on zero up to one step).
    """
    N = int(N)
    if curve.x_series.cutoff >= N or curve.y_series.cutoff >= N:
        raise DomainError("curve cutoff must stay below N")
    xhat = _toeplitz_from_series(curve.x_series, N)
    yhat = _toeplitz_from_series(curve.y_series, N)
    zvals = z_offset + curve.z_beta * (np.arange(1, N + 1) / N)
    zhat = FuzzyMatrix(np.diag(zvals.astype(complex)), N, 1, hermitian=True)
    return FuzzySpace("generalized-cylinder", (xhat, yhat, zhat))


def build_immersed_cylinder(
    x: FourierFunction,
    y: FourierFunction,
    z: Profile,
    N: int,
    rule: str = "symmetric",
) -> FuzzySpace:
    """Regularize a surface given by real series x, y and a height profile z."""
    if abs(x.interval[0] - y.interval[0]) > 1e-12 or abs(x.interval[1] - y.interval[1]) > 1e-12:
        raise DomainError("x and y must share one interval")
    z = as_profile(z)
    grid = make_grid(N, x.interval, rule)
    xhat = regularize_scalar(x, grid)
    yhat = regularize_scalar(y, grid)
    zhat = FuzzyMatrix(np.diag(z(grid.diagonal_values()).astype(complex)), N, 1, hermitian=True)
    generators = (
        MatrixFourierFunction.from_scalar(x),
        MatrixFourierFunction.from_scalar(y),
        MatrixFourierFunction.from_scalar(FourierFunction.from_profile(x.interval, z)),
    )
    return FuzzySpace("immersed-cylinder", (xhat, yhat, zhat), generators, grid)


def circle_to_eight_functions(
    interval=(-1.0, 1.0),
    r1: float = 1.0,
    transition_scale: float = 1.0,
    transition_shift: float = 0.0,
    z_offset: float = 0.5,
    z_scale: float = 0.5,
):
    """Fourier data for the transition from a circle to a figure eight.

    x = (r1 + r2/2) cos(phi) + (r2/2) cos(3 phi)
    y = (r1 - r2/2) sin(phi) + (r2/2) sin(3 phi)

    with r2(q) = h(transition_scale*q + transition_shift); at r2 = 0 the
    cross-section is a circle of radius r1, at r2 = r1 the doubled-angle
    form 2 r1 cos(u)^2 (cos u, sin u) of the eight.  Returns (x, y, z).
    """
    r2 = ComposedProfile(smooth_step(), transition_scale, transition_shift)
    amp1x = ConstantProfile(r1) + 0.5 * r2
    amp1y = ConstantProfile(r1) - 0.5 * r2
    amp3 = 0.5 * r2
    x = FourierFunction.cosine(interval, 1, amp1x) + FourierFunction.cosine(interval, 3, amp3)
    y = FourierFunction.sine(interval, 1, amp1y) + FourierFunction.sine(interval, 3, amp3)
    z = AffineProfile(z_offset, z_scale)
    return x, y, z


def build_circle_to_eight(N: int, convention: str = "symmetric") -> FuzzySpace:
    """The circle-to-eight space on [-1, 1].

    convention="symmetric" regularizes the series on the symmetric grid.
    convention="row-anchored" evaluates every band profile at the row of the
    band's upper entry (q = -1 + 2n/N), reproducing the displayed matrices
    with their +i upper orientation for y.
    """
    x, y, z = circle_to_eight_functions()
    if convention == "symmetric":
        return build_immersed_cylinder(x, y, z, N)
    if convention != "row-anchored":
        raise DomainError(f"unknown convention {convention!r}")
    N = int(N)
    qrow = -1.0 + 2.0 * np.arange(N) / N
    hv = smooth_step()(qrow)

    def banded(weights_by_band, factor):
        out = np.zeros((N, N), dtype=complex)
        for band, w in weights_by_band:
            idx = np.arange(N - band)
            out[idx, idx + band] = factor * w[idx]
            out[idx + band, idx] = np.conj(factor) * w[idx]
        return out

    xm = banded(((1, (1.0 + 0.5 * hv) * 0.5), (3, 0.25 * hv)), 1.0)
    ym = banded(((1, (1.0 - 0.5 * hv) * 0.5), (3, 0.25 * hv)), 1j)
    zvals = (1.0 + qrow) / 2.0
    coords = (
        FuzzyMatrix(xm, N, 1, hermitian=True),
        FuzzyMatrix(ym, N, 1, hermitian=True),
        FuzzyMatrix(np.diag(zvals.astype(complex)), N, 1, hermitian=True),
    )
    return FuzzySpace("circle-to-eight", coords)


@dataclass(frozen=True)
class DoubleCylinderSpec:
    """Two cylinders over one interval: x_i = x_i0 + r_ix cos, y_i = y_i0 + r_iy sin."""

    interval: tuple
    x10: Profile
    x20: Profile
    r1x: Profile
    r2x: Profile
    r1y: Profile
    r2y: Profile
    y10: Profile = field(default_factory=lambda: ConstantProfile(0.0))
    y20: Profile = field(default_factory=lambda: ConstantProfile(0.0))
    mirror_symmetric: bool = False

    def __post_init__(self):
        if self.mirror_symmetric:
            probe = np.linspace(self.interval[0], self.interval[1], 9)
            pairs = (
                (self.x10, self.x20),
                (self.r1x, self.r2x),
                (self.r1y, self.r2y),
                (self.y10, self.y20),
            )
            for p1, p2 in pairs:
                if np.max(np.abs(p1(probe) + p2(probe))) > 1e-12:
                    raise StructureError("mirror-symmetric spec needs negated profile pairs")

    @classmethod
    def symmetric(cls, interval, x0: Profile, r: Profile) -> "DoubleCylinderSpec":
        """Mirror pair: cylinder 1 = negative of cylinder 2 (centers +-x0, radii r)."""
        x0 = as_profile(x0)
        r = as_profile(r)
        return cls(
            interval=tuple(interval),
            x10=-x0,
            x20=x0,
            r1x=-r,
            r2x=r,
            r1y=-r,
            r2y=r,
            mirror_symmetric=True,
        )

    def functions(self, i: int):
        """(x_i, y_i) as FourierFunctions for cylinder i in {1, 2}."""
        x0 = self.x10 if i == 1 else self.x20
        y0 = self.y10 if i == 1 else self.y20
        rx = self.r1x if i == 1 else self.r2x
        ry = self.r1y if i == 1 else self.r2y
        x = FourierFunction.from_profile(self.interval, x0) + FourierFunction.cosine(
            self.interval, 1, rx
        )
        y = FourierFunction.from_profile(self.interval, y0) + FourierFunction.sine(
            self.interval, 1, ry
        )
        return x, y


def build_double_cylinder(spec: DoubleCylinderSpec, N: int):
    """Two fuzzy cylinders sharing the diagonal z = q(n,n); returns a pair."""
    grid = make_grid(N, spec.interval, "symmetric")
    zvals = grid.diagonal_values().astype(complex)
    zhat = FuzzyMatrix(np.diag(zvals), N, 1, hermitian=True)
    zfn = FourierFunction.from_profile(spec.interval, AffineProfile(0.0, 1.0))
    out = []
    for i in (1, 2):
        x, y = spec.functions(i)
        coords = (regularize_scalar(x, grid), regularize_scalar(y, grid), zhat)
        generators = tuple(
            MatrixFourierFunction.from_scalar(f) for f in (x, y, zfn)
        )
        out.append(FuzzySpace(f"cylinder-{i}", coords, generators, grid))
    return tuple(out)


def interlaced_double_cylinder_function(spec: DoubleCylinderSpec) -> tuple:
    """The 2x2 off-diagonal form of a mirror pair of cylinders.

    Requires the mirror-symmetric spec; returns (X, Y, Z) matrix-valued
    functions with X, Y antidiagonal (both slots carry cylinder 2's real
    function) and Z = q times the identity block.
    """
    if not spec.mirror_symmetric:
        raise StructureError("interlaced form is defined for mirror-symmetric specs")
    x2, y2 = spec.functions(2)
    interval = spec.interval
    zero = FourierFunction(interval, {})
    q_fn = FourierFunction.from_profile(interval, AffineProfile(0.0, 1.0))
    X = MatrixFourierFunction(interval, [[zero, x2], [x2, zero]])
    Y = MatrixFourierFunction(interval, [[zero, y2], [y2, zero]])
    Z = MatrixFourierFunction.diagonal([q_fn, q_fn])
    return X, Y, Z


def build_clifford_torus(a: float, b: float, N: int) -> FuzzySpace:
    """Four Hermitian coordinates: one Toeplitz pair, one diagonal trig pair.

    X1 carries a/2 on the +-1 bands, Y1 the matching +-i a/2 bands; X2 and
    Y2 are diagonal with b cos(2 pi n/N) and b sin(2 pi n/N), n = 1..N.
    """
    N = int(N)
    if N < 2:
        raise DomainError("need N >= 2")
    e1 = toeplitz_basis(1, N).data
    em1 = toeplitz_basis(-1, N).data
    x1 = FuzzyMatrix(0.5 * a * (e1 + em1), N, 1, hermitian=True)
    y1 = FuzzyMatrix(0.5j * a * (e1 - em1), N, 1, hermitian=True)
    angles = 2.0 * np.pi * np.arange(1, N + 1) / N
    x2 = FuzzyMatrix(np.diag(b * np.cos(angles)).astype(complex), N, 1, hermitian=True)
    y2 = FuzzyMatrix(np.diag(b * np.sin(angles)).astype(complex), N, 1, hermitian=True)
    return FuzzySpace("clifford-torus", (x1, y1, x2, y2))


@dataclass(frozen=True)
class GraphVertexSpec:
    """Band data for a vertex where one strand splits into two.

    The flat matrix has a tridiagonal band r_upper above the split index n0,
    a junction row coupling with value r_junction into both strands, and
    below n0 a 2x2-blocked part with diagonal blocks diag(-x_lower, x_lower)
    and strand-preserving off-bands r_lower.
    """

    dim: int
    n0: int
    r_upper: object = 1.0
    r_junction: complex = 1.0
    r_lower: object = 1.0
    x_lower: object = 0.0
    z_values: tuple | None = None

    def __post_init__(self):
        if not 2 <= self.n0 <= self.dim - 2:
            raise StructureError(f"split index {self.n0} outside matrix of dim {self.dim}")
        if (self.dim - self.n0) % 2:
            raise StructureError("lower part must hold an even number of rows")

    @property
    def lower_blocks(self) -> int:
        return (self.dim - self.n0) // 2

    def _band(self, raw, length, what) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(raw, dtype=complex))
        if arr.size == 1:
            return np.full(length, arr[0])
        if arr.size != length:
            raise StructureError(f"{what} needs length {length}, got {arr.size}")
        return arr

    def upper_band(self) -> np.ndarray:
        return self._band(self.r_upper, max(self.n0 - 1, 0), "r_upper")

    def lower_band(self) -> np.ndarray:
        return self._band(self.r_lower, max(self.lower_blocks - 1, 0), "r_lower")

    def lower_diag(self) -> np.ndarray:
        return self._band(self.x_lower, self.lower_blocks, "x_lower")


def build_graph_vertex(spec: GraphVertexSpec, N: int | None = None) -> FuzzySpace:
    """Assemble the vertex band matrix and its diagonal z partner.

    N, when given, must equal spec.dim (the flat dimension).
    """
    if N is not None and int(N) != spec.dim:
        raise StructureError(f"N = {N} conflicts with spec.dim = {spec.dim}")
    D, n0 = spec.dim, spec.n0
    F = np.zeros((D, D), dtype=complex)
    ru = spec.upper_band()
    for k in range(n0 - 1):
        F[k, k + 1] = ru[k]
        F[k + 1, k] = np.conj(ru[k])
    r = complex(spec.r_junction)
    F[n0 - 1, n0] = r
    F[n0 - 1, n0 + 1] = r
    F[n0, n0 - 1] = np.conj(r)
    F[n0 + 1, n0 - 1] = np.conj(r)
    xb = spec.lower_diag()
    for t in range(spec.lower_blocks):
        F[n0 + 2 * t, n0 + 2 * t] = -xb[t]
        F[n0 + 2 * t + 1, n0 + 2 * t + 1] = xb[t]
    rb = spec.lower_band()
    for t in range(spec.lower_blocks - 1):
        for a in (0, 1):
            i = n0 + 2 * t + a
            F[i, i + 2] = rb[t]
            F[i + 2, i] = np.conj(rb[t])
    if spec.z_values is not None:
        z = np.asarray(spec.z_values, dtype=float)
        if z.size != D:
            raise StructureError("z_values must match the matrix dimension")
    else:
        z = np.empty(D)
        z[:n0] = (np.arange(n0) + 1.0) / D
        for t in range(spec.lower_blocks):
            z[n0 + 2 * t : n0 + 2 * t + 2] = (n0 + 2 * t + 1.5) / D
    zhat = FuzzyMatrix(np.diag(z.astype(complex)), D, 1, hermitian=True)
    fhat = FuzzyMatrix(F, D, 1)
    return FuzzySpace("graph-vertex", (fhat, zhat))
