"""Matrix regularization of Fourier functions.

The map sends f(q,phi) = sum_n f_n(q) e^{i n phi} to the N x N matrix with
entries

    Q(f)[n, m] = f_{m-n}(q(n, m)),

so e^{i phi} lands on the first superdiagonal.  Matrix-valued functions go to
N*S x N*S matrices with the block entry (a, b) of band m-n placed at the flat
index (n*S + a, m*S + b).

Grids q(n, m) are affine in (n, m): q(n,m) = c0 + cn*n + cm*m, 0-based, with
q(0,0) = q1 and the formula reaching q2 at (N, N) (one step past the last
stored index, so the stored diagonal values fill [q1, q2) from the left).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructureError
from .fourier import FourierFunction, MatrixFourierFunction


@dataclass(frozen=True)
class DiscretizingGrid:
    """Affine assignment (n, m) -> q used by the regularization map."""

    N: int
    interval: tuple
    rule: str
    c0: float
    cn: float
    cm: float

    def q(self, n, m):
        return self.c0 + self.cn * np.asarray(n) + self.cm * np.asarray(m)

    @property
    def beta_left(self) -> float:
        """Sensitivity of q to the row index, in units of 1/N."""
        return self.cn * self.N

    @property
    def beta_right(self) -> float:
        return self.cm * self.N

    @property
    def beta(self) -> float:
        """Mean step constant; equals (q2-q1)/2 for the symmetric rule."""
        return 0.5 * (self.beta_left + self.beta_right)

    def with_size(self, N: int) -> "DiscretizingGrid":
        """Same rule and interval at a different size."""
        return make_grid(N, self.interval, self.rule, cn=self.cn, cm=self.cm, c0=self.c0)

    def diagonal_values(self):
        k = np.arange(self.N)
        return self.q(k, k)


def make_grid(N: int, interval, rule: str = "symmetric", cn=None, cm=None, c0=None) -> DiscretizingGrid:
    """Build a discretizing grid.

    Rules:
      symmetric     q(n,m) = q1 + (q2-q1)(n+m)/(2N)   (beta = (q2-q1)/2)
      left          q(n,m) = q1 + (q2-q1) n/N         (beta_left = q2-q1, beta_right = 0)
      custom-affine explicit cn, cm, c0
    """
    N = int(N)
    if N < 2:
        raise DomainError(f"grid size must be at least 2, got {N}")
    q1, q2 = float(interval[0]), float(interval[1])
    if not q1 < q2:
        raise DomainError(f"empty interval [{q1}, {q2}]")
    span = q2 - q1
    if rule == "symmetric":
        step = span / (2.0 * N)
        return DiscretizingGrid(N, (q1, q2), rule, q1, step, step)
    if rule == "left":
        return DiscretizingGrid(N, (q1, q2), rule, q1, span / N, 0.0)
    if rule == "custom-affine":
        if cn is None or cm is None:
            raise DomainError("custom-affine rule needs cn and cm")
        c0 = q1 if c0 is None else float(c0)
        return DiscretizingGrid(N, (q1, q2), rule, c0, float(cn), float(cm))
    raise DomainError(f"unknown grid rule {rule!r}")


@dataclass(frozen=True)
class BorderSpec:
    """Width of the outer border ignored by within-border norms."""

    delta: int

    def __post_init__(self):
        if self.delta < 0:
            raise DomainError("border width must be non-negative")

    @classmethod
    def coerce(cls, value) -> "BorderSpec":
        if isinstance(value, cls):
            return value
        return cls(int(value))

    def check_against(self, dim: int):
        if 2 * self.delta >= dim and self.delta > 0:
            raise DomainError(f"border {self.delta} too large for dimension {dim}")


@dataclass(frozen=True)
class FuzzyMatrix:
    """Dense square complex matrix plus regularization metadata.

    The wrapped array is immutable; take a copy before mutating.
    """

    data: np.ndarray
    N: int
    S: int = 1
    hermitian: bool | None = None
    source: str = ""

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise StructureError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] != self.N * self.S:
            raise StructureError(
                f"dimension {arr.shape[0]} does not match N*S = {self.N}*{self.S}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def is_hermitian(self, tol=1e-12) -> bool:
        return float(np.max(np.abs(self.data - self.data.conj().T))) <= tol

    def dagger(self) -> "FuzzyMatrix":
        return FuzzyMatrix(self.data.conj().T.copy(), self.N, self.S, self.hermitian, self.source)

    def same_layout(self, other: "FuzzyMatrix") -> bool:
        return self.N == other.N and self.S == other.S

    def block(self, n, m) -> np.ndarray:
        """The S x S block at block position (n, m)."""
        S = self.S
        return self.data[n * S : (n + 1) * S, m * S : (m + 1) * S]

    def replace_data(self, data, hermitian=None, source=None) -> "FuzzyMatrix":
        return FuzzyMatrix(
            np.array(data, dtype=complex),
            self.N,
            self.S,
            self.hermitian if hermitian is None else hermitian,
            self.source if source is None else source,
        )


def _band_values(coeff, grid: DiscretizingGrid, band: int) -> np.ndarray:
    """Evaluate one coefficient profile along matrix band m-n = band.

    Shared by the scalar and the matrix regularizer so that structurally
    equal inputs produce bitwise equal matrices.
    """
    length = grid.N - abs(band)
    rows = np.arange(length) + max(0, -band)
    cols = rows + band
    return np.asarray(coeff(grid.q(rows, cols)), dtype=complex)


def regularize_scalar(f: FourierFunction, grid: DiscretizingGrid) -> FuzzyMatrix:
    """N x N matrix with entries f_{m-n}(q(n,m))."""
    _require_matching_interval(f, grid)
    if f.cutoff >= grid.N:
        raise DomainError(f"cutoff {f.cutoff} must stay below N = {grid.N}")
    N = grid.N
    out = np.zeros((N, N), dtype=complex)
    for band in sorted(f.coeffs):
        vals = _band_values(f.coeffs[band], grid, band)
        idx = np.arange(len(vals)) + max(0, -band)
        out[idx, idx + band] = vals
    herm = bool(grid.cn == grid.cm) and f.is_real_valued()
    return FuzzyMatrix(out, N, 1, hermitian=herm or None)


def regularize_matrix(F: MatrixFourierFunction, grid: DiscretizingGrid) -> FuzzyMatrix:
    """N*S x N*S matrix; block entry (a,b), band n, lands at (n*S+a, m*S+b)."""
    _require_matching_interval(F, grid)
    if F.cutoff >= grid.N:
        raise DomainError(f"cutoff {F.cutoff} must stay below N = {grid.N}")
    N, S = grid.N, F.S
    out = np.zeros((N * S, N * S), dtype=complex)
    for a in range(S):
        for b in range(S):
            entry = F.entries[a][b]
            for band in sorted(entry.coeffs):
                vals = _band_values(entry.coeffs[band], grid, band)
                idx = np.arange(len(vals)) + max(0, -band)
                out[idx * S + a, (idx + band) * S + b] = vals
    herm = bool(grid.cn == grid.cm) and F.is_hermitian()
    return FuzzyMatrix(out, N, S, hermitian=herm or None)


def _require_matching_interval(f, grid: DiscretizingGrid):
    tol = 1e-12
    if abs(f.interval[0] - grid.interval[0]) > tol or abs(f.interval[1] - grid.interval[1]) > tol:
        raise DomainError(
            f"function interval {f.interval} does not match grid interval {grid.interval}"
        )


def toeplitz_basis(a: int, N: int) -> FuzzyMatrix:
    """e_a = sum_n |n><n+a| (ones on the a-th diagonal; a=0 is the identity)."""
    a = int(a)
    N = int(N)
    if abs(a) >= N:
        raise DomainError(f"|a| = {abs(a)} must stay below N = {N}")
    out = np.zeros((N, N), dtype=complex)
    idx = np.arange(N - abs(a))
    if a >= 0:
        out[idx, idx + a] = 1.0
    else:
        out[idx - a, idx] = 1.0
    return FuzzyMatrix(out, N, 1, hermitian=(a == 0) or None)


def border_mask(M: FuzzyMatrix, delta) -> FuzzyMatrix:
    """Zero every row and column within delta of the matrix edge."""
    spec = BorderSpec.coerce(delta)
    spec.check_against(M.dim)
    d = spec.delta
    if d == 0:
        return M
    out = np.array(M.data)
    out[:d, :] = 0.0
    out[-d:, :] = 0.0
    out[:, :d] = 0.0
    out[:, -d:] = 0.0
    return M.replace_data(out, hermitian=None)


def within_border_norm(M: FuzzyMatrix, delta) -> float:
    """Max absolute row sum over the interior block (rows/cols delta..dim-delta).

    delta = 0 gives the plain max-row-sum norm.
    """
    spec = BorderSpec.coerce(delta)
    spec.check_against(M.dim)
    d = spec.delta
    core = M.data[d : M.dim - d, d : M.dim - d] if d else M.data
    if core.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(core), axis=1)))


def interior_max_entry(M: FuzzyMatrix, delta) -> float:
    """Max |entry| over the interior block; the entrywise companion norm."""
    spec = BorderSpec.coerce(delta)
    spec.check_against(M.dim)
    d = spec.delta
    core = M.data[d : M.dim - d, d : M.dim - d] if d else M.data
    if core.size == 0:
        return 0.0
    return float(np.max(np.abs(core)))


def commutator(A: FuzzyMatrix, B: FuzzyMatrix) -> FuzzyMatrix:
    if A.dim != B.dim:
        raise StructureError(f"dimension mismatch {A.dim} vs {B.dim}")
    data = A.data @ B.data - B.data @ A.data
    N, S = (A.N, A.S) if A.same_layout(B) else (A.dim, 1)
    return FuzzyMatrix(data, N, S)


def hermitianize(M: FuzzyMatrix) -> FuzzyMatrix:
    """(M + M†)/2.  Never applied implicitly; callers opt in."""
    return M.replace_data(0.5 * (M.data + M.data.conj().T), hermitian=True)


@dataclass(frozen=True)
class FuzzySpace:
    """A named family of Hermitian coordinate matrices of equal dimension.

    `generators` optionally keeps the matrix-valued functions the coordinates
    were regularized from, so they can be re-regularized at other sizes or
    evaluated pointwise for classical-limit extraction.
    """

    name: str
    coordinates: tuple
    generators: tuple | None = None
    grid: DiscretizingGrid | None = None

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        if self.generators is not None:
            object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def dim(self) -> int:
        return self.coordinates[0].dim

    @property
    def d(self) -> int:
        return len(self.coordinates)

    def validate(self, tol=1e-12):
        dims = {c.dim for c in self.coordinates}
        if len(dims) != 1:
            raise StructureError(f"coordinate dimensions differ: {sorted(dims)}")
        for k, c in enumerate(self.coordinates):
            if not c.is_hermitian(tol):
                raise StructureError(f"coordinate {k} of {self.name!r} is not Hermitian")
        return self

    def with_coordinates(self, coords, name=None) -> "FuzzySpace":
        return FuzzySpace(
            name if name is not None else self.name,
            tuple(coords),
            self.generators,
            self.grid,
        )
